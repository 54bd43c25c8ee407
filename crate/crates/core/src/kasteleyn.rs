//! Kasteleyn matrices and matching counts for regions and tori.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::ring::unit_modulus_int;
use crate::exact::{GaussInt, Matrix};
use crate::geometry::{build_torus, Model, Orientation, RegionGraph, RegionKind};
use crate::oracle;

/// Sign convention on the seams of a torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// No sign change.
    B1,
    /// Edges wrapping in the first direction negated.
    B2,
    /// Edges wrapping in the second direction negated.
    B3,
    /// Both.
    B4,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::B1, Variant::B2, Variant::B3, Variant::B4];

    /// Coefficient of `det B_j` in the torus count.
    pub fn sign(self) -> i64 {
        match self {
            Variant::B1 => -1,
            _ => 1,
        }
    }

    /// Half-integer shifts (in units of ½) of the Fourier modes.
    pub fn shifts(self) -> (u8, u8) {
        match self {
            Variant::B1 => (0, 0),
            Variant::B2 => (1, 0),
            Variant::B3 => (0, 1),
            Variant::B4 => (1, 1),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Weighted black × white adjacency matrix.
///
/// Entries are 1 on lozenge edges and on horizontal domino edges, `i` on
/// vertical domino edges, with seam edges negated according to the variant.
#[derive(Clone, Debug)]
pub struct KasteleynMatrix {
    model: Model,
    variant: Option<Variant>,
    matrix: Matrix<GaussInt>,
}

fn edge_weight(graph: &RegionGraph, k: usize, variant: Option<Variant>) -> GaussInt {
    let ge = graph.edges()[k];
    let base = match ge.edge.orientation() {
        Some(Orientation::Vertical) => Complex::new(BigInt::zero(), BigInt::one()),
        _ => GaussInt::one(),
    };
    let (sx, sy) = variant.map_or((0, 0), Variant::shifts);
    let flips = (ge.seam_x && sx == 1) as u8 + (ge.seam_y && sy == 1) as u8;
    if flips % 2 == 1 {
        -base
    } else {
        base
    }
}

impl KasteleynMatrix {
    /// Matrix of a region; for a torus this is variant `B1`.
    pub fn new(graph: &RegionGraph) -> Self {
        let variant = matches!(graph.kind(), RegionKind::Torus { .. }).then_some(Variant::B1);
        Self::build(graph, variant)
    }

    /// A specific torus variant. Seam signs are ignored on regions.
    pub fn variant(graph: &RegionGraph, variant: Variant) -> Self {
        Self::build(graph, Some(variant))
    }

    fn build(graph: &RegionGraph, variant: Option<Variant>) -> Self {
        let mut matrix = Matrix::zeros(graph.blacks().len(), graph.whites().len());
        for (k, ge) in graph.edges().iter().enumerate() {
            matrix.set(ge.black, ge.white, edge_weight(graph, k, variant));
        }
        KasteleynMatrix {
            model: graph.model(),
            variant,
            matrix,
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn variant_tag(&self) -> Option<Variant> {
        self.variant
    }

    pub fn matrix(&self) -> &Matrix<GaussInt> {
        &self.matrix
    }

    pub fn is_square(&self) -> bool {
        self.matrix.is_square()
    }

    /// True when every entry is real, so integer arithmetic suffices.
    pub fn is_real(&self) -> bool {
        self.matrix.entries().all(|z| z.im.is_zero())
    }

    /// Exact determinant; 0 for a non-square matrix.
    pub fn det(&self) -> GaussInt {
        if !self.is_square() {
            return GaussInt::zero();
        }
        if self.is_real() {
            Complex::new(self.matrix.map(|z| z.re.clone()).det(), BigInt::zero())
        } else {
            self.matrix.det()
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.matrix.entries().filter(|z| !z.is_zero()).count()
    }
}

/// Modulus of a Gaussian integer that should be a unit times an integer.
pub(crate) fn modulus(z: &GaussInt) -> BigInt {
    unit_modulus_int(z).unwrap_or_else(|| {
        let norm = z.norm_sqr();
        let r = norm.sqrt();
        assert_eq!(&r * &r, norm, "Kasteleyn determinant modulus is not an integer");
        r
    })
}

/// Number of perfect matchings of a simply connected region, `|det B|`.
pub fn count_region(graph: &RegionGraph) -> Result<BigInt> {
    if graph.kind() != RegionKind::SimplyConnected {
        return Err(Error::Precondition(
            "count_region expects a simply connected region".into(),
        ));
    }
    if !graph.is_balanced() {
        return Ok(BigInt::zero());
    }
    Ok(modulus(&KasteleynMatrix::new(graph).det()))
}

/// How a torus count was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    FourDeterminants,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCount {
    pub count: BigInt,
    pub method: CountMethod,
    /// `det B_1 … det B_4` when the determinant path was used.
    pub dets: Option<[GaussInt; 4]>,
}

/// Whether the four-determinant formula applies to this torus.
pub fn torus_formula_applies(model: Model, m: i64, n: i64) -> bool {
    let even = m % 2 == 0 && n % 2 == 0;
    match model {
        Model::Lozenge => even && m % 3 != 0 && n % 3 != 0,
        Model::Domino => even,
    }
}

/// `½(−det B_1 + det B_2 + det B_3 + det B_4)` on the torus graph.
pub fn four_determinant_count(graph: &RegionGraph) -> (GaussInt, [GaussInt; 4]) {
    let dets = Variant::ALL.map(|v| KasteleynMatrix::variant(graph, v).det());
    let mut sum = GaussInt::zero();
    for (v, d) in Variant::ALL.iter().zip(&dets) {
        sum += d * BigInt::from(v.sign());
    }
    let half = Complex::new(&sum.re / 2, &sum.im / 2);
    (half, dets)
}

/// Number of perfect matchings of a torus.
///
/// Uses the four-determinant formula for even sizes (prime to 3 for
/// lozenges) and the enumeration oracle otherwise.
pub fn count_torus(model: Model, m: i64, n: i64) -> Result<TorusCount> {
    let graph = build_torus(model, m, n)?;
    if torus_formula_applies(model, m, n) {
        let (z, dets) = four_determinant_count(&graph);
        Ok(TorusCount {
            count: modulus(&z),
            method: CountMethod::FourDeterminants,
            dets: Some(dets),
        })
    } else {
        Ok(TorusCount {
            count: oracle::count_matchings(&graph, oracle::DEFAULT_CAP)?,
            method: CountMethod::Oracle,
            dets: None,
        })
    }
}

fn lozenge_mode(m: i64, n: i64, variant: Variant, k: i64, l: i64) -> Complex<f64> {
    let (sx, sy) = variant.shifts();
    let theta = 2.0 * PI * (k as f64 + sx as f64 / 2.0) / m as f64;
    let phi = 2.0 * PI * (l as f64 + sy as f64 / 2.0) / n as f64;
    Complex::new(1.0, 0.0) + Complex::from_polar(1.0, -theta) + Complex::from_polar(1.0, -phi)
}

fn require_lozenge_prime3(model: Model, m: i64, n: i64, variant: Variant) -> Result<()> {
    if model != Model::Lozenge {
        return Err(Error::Precondition(
            "eigenvalue products are implemented for the lozenge torus".into(),
        ));
    }
    if m < 1 || n < 1 {
        return Err(Error::TorusTooSmall { m, n });
    }
    if variant == Variant::B1 && (m % 3 == 0 || n % 3 == 0) {
        return Err(Error::Precondition(format!(
            "torus {m}x{n}: det B_1 vanishes when a dimension is divisible by 3"
        )));
    }
    Ok(())
}

/// `ln |det B_j|` from the Fourier eigenvalues `1 + e^{−iθ} + e^{−iφ}`.
pub fn torus_log_det(model: Model, m: i64, n: i64, variant: Variant) -> Result<f64> {
    require_lozenge_prime3(model, m, n, variant)?;
    let mut s = 0.0;
    for k in 0..m {
        for l in 0..n {
            s += lozenge_mode(m, n, variant, k, l).norm().ln();
        }
    }
    Ok(s)
}

/// `det A_j = (det B_j)²` as the product over Fourier modes of `|λ|²`.
pub fn torus_det_product(model: Model, m: i64, n: i64, variant: Variant) -> Result<f64> {
    Ok((2.0 * torus_log_det(model, m, n, variant)?).exp())
}

/// `ln Z_{m,n}` divided by the number of vertices.
pub fn entropy_per_site(model: Model, m: i64, n: i64) -> Result<f64> {
    let c = count_torus(model, m, n)?;
    let sites = match model {
        Model::Lozenge => 2 * m * n,
        Model::Domino => 4 * m * n,
    };
    Ok(ln_bigint(&c.count) / sites as f64)
}

/// Natural log of a positive big integer.
pub fn ln_bigint(z: &BigInt) -> f64 {
    let bits = z.bits();
    if bits < 1000 {
        return num_traits::ToPrimitive::to_f64(z).unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top: BigInt = z.abs() >> shift;
    num_traits::ToPrimitive::to_f64(&top).unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Per-vertex entropy of a large torus, from the eigenvalue product on an
/// `size × size` mode grid (lozenge) or `2·size × 2·size` grid (domino).
pub fn entropy_limit(model: Model, size: i64) -> f64 {
    match model {
        Model::Lozenge => {
            let s = if size % 3 == 0 { size + 1 } else { size };
            let mut acc = 0.0;
            for k in 0..s {
                for l in 0..s {
                    acc += lozenge_mode(s, s, Variant::B4, k, l).norm().ln();
                }
            }
            acc / (2 * s * s) as f64
        }
        Model::Domino => {
            // Modes of the full operator f ↦ f(x±1, y) + i f(x, y±1) on the
            // 2s × 2s torus; its determinant is (det B)² up to sign.
            let n = 2 * size;
            let mut acc = 0.0;
            for k in 0..n {
                for l in 0..n {
                    let theta = 2.0 * PI * (k as f64 + 0.5) / n as f64;
                    let phi = 2.0 * PI * (l as f64 + 0.5) / n as f64;
                    acc += Complex::new(2.0 * theta.cos(), 2.0 * phi.cos()).norm().ln();
                }
            }
            acc / (2 * n * n) as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_region, Face};

    #[test]
    fn hexagon_matrix() {
        let g = build_region(Model::Lozenge, &[Face::Hex(0, 0)]).unwrap();
        let k = KasteleynMatrix::new(&g);
        assert_eq!((k.matrix().rows(), k.matrix().cols()), (3, 3));
        assert_eq!(k.nonzero_count(), 6);
        assert_eq!(count_region(&g).unwrap(), BigInt::from(2));
    }

    #[test]
    fn domino_block_matrix() {
        let g = build_region(Model::Domino, &[Face::Square(0, 0), Face::Square(1, 0)]).unwrap();
        let k = KasteleynMatrix::new(&g);
        assert_eq!((k.matrix().rows(), k.matrix().cols()), (3, 3));
        let i = Complex::new(BigInt::zero(), BigInt::one());
        assert!(k
            .matrix()
            .entries()
            .all(|z| z.is_zero() || *z == GaussInt::one() || *z == i));
        assert_eq!(count_region(&g).unwrap(), BigInt::from(3));
        let cell = build_region(Model::Domino, &[Face::Square(0, 0)]).unwrap();
        assert_eq!(count_region(&cell).unwrap(), BigInt::from(2));
    }

    #[test]
    fn unbalanced_counts_zero() {
        let sq: Vec<Face> = (0..2).flat_map(|x| (0..2).map(move |y| Face::Square(x, y))).collect();
        let g = build_region(Model::Domino, &sq).unwrap();
        assert_eq!(count_region(&g).unwrap(), BigInt::zero());
    }

    #[test]
    fn small_torus_counts() {
        let c = count_torus(Model::Lozenge, 2, 2).unwrap();
        assert_eq!(c.count, BigInt::from(9));
        assert_eq!(c.method, CountMethod::FourDeterminants);
        assert_eq!(count_torus(Model::Domino, 2, 2).unwrap().count, BigInt::from(272));
        assert_eq!(count_torus(Model::Lozenge, 3, 2).unwrap().method, CountMethod::Oracle);
        let g = build_torus(Model::Lozenge, 2, 2).unwrap();
        let b1 = KasteleynMatrix::variant(&g, Variant::B1);
        assert_eq!(b1.matrix().rows(), 4);
        for i in 0..4 {
            assert_eq!((0..4).filter(|&j| !b1.matrix().get(i, j).is_zero()).count(), 3);
        }
    }

    #[test]
    fn eigen_products_match_determinants() {
        for (m, n) in [(2, 2), (4, 2), (2, 4), (4, 4), (5, 4)] {
            let g = build_torus(Model::Lozenge, m, n).unwrap();
            for v in Variant::ALL {
                let exact = KasteleynMatrix::variant(&g, v).det();
                let d = num_traits::ToPrimitive::to_f64(&exact.re).unwrap();
                let prod = torus_det_product(Model::Lozenge, m, n, v).unwrap();
                assert!(exact.im.is_zero());
                assert!(
                    (prod - d * d).abs() <= 1e-9 * (d * d).max(1.0),
                    "{m}x{n} {v:?}: {prod} vs {d}²"
                );
            }
        }
        assert!(torus_det_product(Model::Lozenge, 3, 2, Variant::B1).is_err());
    }

    #[test]
    fn ln_of_huge_integer() {
        let z = BigInt::from(3).pow(2000);
        assert!((ln_bigint(&z) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }
}
