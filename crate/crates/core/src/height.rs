//! Lozenge height functions, and the number of horizontal lozenges met by a
//! vertical column of faces.
//!
//! Crossing an edge with its black vertex on the left raises the height by 1
//! if the edge is unmatched and lowers it by 2 if matched; the opposite
//! crossing negates the step. Going up a column of `n` faces through the
//! horizontal edges at blacks `(−k, k, 0)` therefore changes the height by
//! `n − 3r_n`, with `r_n` the number of those edges in the matching.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coupling::column_coupling;
use crate::cylinder::torus_probability;
use crate::error::{Error, Result};
use crate::event::CylinderEvent;
use crate::exact::modular::char_poly_int;
use crate::exact::symbolic::TauPoly;
use crate::exact::{rat, Matrix, Poly, SymbolicValue};
use crate::geometry::{build_torus, faces_and_adjacency, Edge, Face, Model, RegionGraph, Vertex};
use crate::oracle;

/// Largest `n` for which the full distribution of `r_n` is computed.
pub const DISTRIBUTION_CAP: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightField {
    anchor: Face,
    heights: BTreeMap<Face, i64>,
}

impl HeightField {
    /// The face at height 0.
    pub fn anchor(&self) -> Face {
        self.anchor
    }

    pub fn get(&self, f: &Face) -> Option<i64> {
        self.heights.get(f).copied()
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Face, &i64)> {
        self.heights.iter()
    }

    /// Heights shifted so that `face` is at 0.
    pub fn reanchored(&self, face: Face) -> Option<HeightField> {
        let base = self.get(&face)?;
        Some(HeightField {
            anchor: face,
            heights: self.heights.iter().map(|(f, h)| (*f, h - base)).collect(),
        })
    }
}

/// Height function of a perfect matching given as lattice edges.
pub fn height_field(region: &RegionGraph, matching: &[Edge]) -> Result<HeightField> {
    let ids = matching.iter().map(|e| region.edge_id(e)).collect::<Result<Vec<_>>>()?;
    height_field_ids(region, &ids)
}

/// Height function of a perfect matching given as region edge indices.
///
/// Heights are defined on every face touching a region edge. The anchor is
/// `Hex(0, 0)` when present, otherwise the least face.
pub fn height_field_ids(region: &RegionGraph, matching: &[usize]) -> Result<HeightField> {
    if region.model() != Model::Lozenge {
        return Err(Error::Precondition(
            "height functions are implemented for lozenge regions".into(),
        ));
    }
    let mut blacks = HashSet::new();
    let mut whites = HashSet::new();
    for &k in matching {
        let ge = region
            .edges()
            .get(k)
            .ok_or_else(|| Error::UnknownEdge(format!("edge index {k}")))?;
        if !blacks.insert(ge.black) || !whites.insert(ge.white) {
            return Err(Error::NotPerfectMatching(format!(
                "vertex of {} covered twice",
                ge.edge
            )));
        }
    }
    if blacks.len() != region.blacks().len() || whites.len() != region.whites().len() {
        return Err(Error::NotPerfectMatching(format!(
            "{} of {} vertices covered",
            blacks.len() + whites.len(),
            region.vertex_count()
        )));
    }
    let matched: HashSet<usize> = matching.iter().copied().collect();
    let adj = faces_and_adjacency(region)?;
    let Some(&first) = adj.faces.first() else {
        return Ok(HeightField {
            anchor: Face::Hex(0, 0),
            heights: BTreeMap::new(),
        });
    };
    let anchor = if adj.faces.contains(&Face::Hex(0, 0)) {
        Face::Hex(0, 0)
    } else {
        first
    };
    let mut out: BTreeMap<Face, Vec<(Face, i64)>> = BTreeMap::new();
    for c in &adj.crossings {
        let black = region.edges()[c.edge].edge.black();
        let step = crossing_step(c.from, c.to, black, matched.contains(&c.edge));
        out.entry(c.from).or_default().push((c.to, step));
    }
    let mut heights = BTreeMap::from([(anchor, 0)]);
    let mut queue = VecDeque::from([anchor]);
    while let Some(f) = queue.pop_front() {
        let h = heights[&f];
        for &(g, step) in out.get(&f).into_iter().flatten() {
            match heights.get(&g) {
                Some(&hg) if hg != h + step => {
                    return Err(Error::Precondition(format!("height is not path independent at {g}")));
                }
                Some(_) => {}
                None => {
                    heights.insert(g, h + step);
                    queue.push_back(g);
                }
            }
        }
    }
    Ok(HeightField { anchor, heights })
}

fn crossing_step(from: Face, to: Face, black: Vertex, matched: bool) -> i64 {
    let (fx, fy) = from.centre();
    let (tx, ty) = to.centre();
    let (bx, by) = black.position();
    let left = (tx - fx) * (by - fy) - (ty - fy) * (bx - fx) > 0.0;
    let step = if matched { -2 } else { 1 };
    if left {
        step
    } else {
        -step
    }
}

/// Covariance matrix of the horizontal edges along a column:
/// `m_{kj} = P(−|k−j|, |k−j|, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightMomentMatrix {
    n: usize,
    matrix: Matrix<SymbolicValue>,
}

impl HeightMomentMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix<SymbolicValue> {
        &self.matrix
    }

    pub fn trace(&self) -> SymbolicValue {
        SymbolicValue::rational(Model::Lozenge, rat(self.n as i64, 3))
    }
}

pub fn moment_matrix(n: usize) -> Result<HeightMomentMatrix> {
    if n == 0 {
        return Err(Error::Precondition("moment matrix needs n ≥ 1".into()));
    }
    let diag: Vec<SymbolicValue> = (0..n as i64).map(column_coupling).collect();
    let matrix = Matrix::from_fn(n, n, |k, j| diag[k.abs_diff(j)].clone());
    Ok(HeightMomentMatrix { n, matrix })
}

/// Coefficient of τ in `P(−d, d, 1)`.
fn column_tau_coeff(d: i64) -> BigRational {
    match column_coupling(d) {
        SymbolicValue::Lozenge(p) => p.coeff(1),
        SymbolicValue::Domino(_) => unreachable!("column coupling is a lozenge value"),
    }
}

fn big_binomial(n: usize, k: usize) -> BigInt {
    binomial(BigInt::from(n), BigInt::from(k))
}

/// Elementary symmetric functions `e_0..e_n` of the eigenvalues of `T`,
/// where `M_n = I/3 + τT`.
fn column_symmetric_functions(n: usize) -> Vec<BigRational> {
    let coeff: Vec<BigRational> = (0..n as i64)
        .map(|d| {
            if d == 0 {
                BigRational::zero()
            } else {
                column_tau_coeff(d)
            }
        })
        .collect();
    // Clear denominators, A = L·T, then e_j(T) = e_j(A) / L^j.
    let l = coeff.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let a = Matrix::from_fn(n, n, |k, j| (&coeff[k.abs_diff(j)] * &l).to_integer());
    let cp = char_poly_int(&a);
    let mut l_pow = BigInt::one();
    let mut e = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let c = if j % 2 == 0 {
            cp[n - j].clone()
        } else {
            -cp[n - j].clone()
        };
        e.push(BigRational::new(c, l_pow.clone()));
        l_pow *= &l;
    }
    e
}

/// Sums of the `k × k` principal minors of `M_n`, `k = 0..=n`.
///
/// `α_k = Σ_j C(n−j, k−j) 3^{j−k} e_j(T) τ^j`.
pub fn principal_minor_sums(n: usize) -> Result<Vec<SymbolicValue>> {
    if n == 0 {
        return Err(Error::Precondition("moment matrix needs n ≥ 1".into()));
    }
    let e = column_symmetric_functions(n);
    Ok((0..=n)
        .map(|k| {
            let coeffs: Vec<BigRational> = (0..=k)
                .map(|j| BigRational::new(big_binomial(n - j, k - j), BigInt::from(3).pow((k - j) as u32)) * &e[j])
                .collect();
            SymbolicValue::Lozenge(Poly::from_coeffs(coeffs))
        })
        .collect())
}

/// `β_k` = probability that exactly `k` of the `n` column edges are present,
/// `k = 0..=n`.
///
/// Composing the minor sums with the inclusion–exclusion step, the
/// coefficient of `τ^i` in `β_j` is `e_i(T)·W_{ij}/3^{n−i}` with
/// `W_{ij} = Σ_k (−1)^{k−j} C(k, j) C(n−i, k−i) 3^{n−k}`, an integer.
pub fn edge_count_distribution(n: usize) -> Result<Vec<SymbolicValue>> {
    if n == 0 {
        return Err(Error::Precondition("moment matrix needs n ≥ 1".into()));
    }
    if n > DISTRIBUTION_CAP {
        return Err(Error::Precondition(format!(
            "distribution is capped at n = {DISTRIBUTION_CAP}; use height_variance"
        )));
    }
    let e = column_symmetric_functions(n);
    let three_pow: Vec<BigInt> = (0..=n as u32).map(|k| BigInt::from(3).pow(k)).collect();
    Ok((0..=n)
        .map(|j| {
            let coeffs: Vec<BigRational> = (0..=n)
                .map(|i| {
                    if e[i].is_zero() {
                        return BigRational::zero();
                    }
                    let mut w = BigInt::zero();
                    for k in i.max(j)..=n {
                        let t = big_binomial(k, j) * big_binomial(n - i, k - i) * &three_pow[n - k];
                        if (k - j) % 2 == 0 {
                            w += t;
                        } else {
                            w -= t;
                        }
                    }
                    BigRational::new(w, three_pow[n - i].clone()) * &e[i]
                })
                .collect();
            SymbolicValue::Lozenge(Poly::from_coeffs(coeffs))
        })
        .collect())
}

/// `β_j = Σ_{k≥j} (−1)^{k−j} C(k, j) α_k`: from the sums of inclusion
/// probabilities over all `k`-subsets to exact-count probabilities.
fn jordan(alpha: &[SymbolicValue]) -> Vec<SymbolicValue> {
    let n = alpha.len() - 1;
    (0..=n)
        .map(|j| {
            let mut acc = SymbolicValue::zero(alpha[0].model());
            for (k, a) in alpha.iter().enumerate().skip(j) {
                let c = BigRational::from_integer(big_binomial(k, j));
                let c = if (k - j) % 2 == 0 { c } else { -c };
                acc = acc.try_add(&a.scale(&c)).expect("same model");
            }
            acc
        })
        .collect()
}

/// Mean and variance of a distribution on `0..len`.
pub fn distribution_moments(beta: &[SymbolicValue]) -> (SymbolicValue, SymbolicValue) {
    let model = beta.first().map_or(Model::Lozenge, SymbolicValue::model);
    let mut mean = SymbolicValue::zero(model);
    let mut second = SymbolicValue::zero(model);
    for (k, b) in beta.iter().enumerate() {
        let k = BigRational::from_integer(BigInt::from(k));
        mean = mean.try_add(&b.scale(&k)).expect("same model");
        second = second.try_add(&b.scale(&(&k * &k))).expect("same model");
    }
    let var = second
        .try_sub(&mean.try_mul(&mean).expect("same model"))
        .expect("same model");
    (mean, var)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightVariance {
    pub n: u64,
    /// `trace(M_n²)`.
    pub trace_sq: SymbolicValue,
    /// `σ²(r_n) = n/3 − trace(M_n²)`.
    pub variance_r: SymbolicValue,
    /// `σ²(h_n) = 9 σ²(r_n)`.
    pub variance_h: SymbolicValue,
}

impl HeightVariance {
    pub fn variance_h_numeric(&self) -> f64 {
        self.variance_h.eval_re(1e-12)
    }

    /// Expected number of cycles separating the two end faces.
    pub fn expected_cycles(&self) -> SymbolicValue {
        self.variance_h.scale(&rat(2, 9))
    }

    /// `(9/π²) ln n`.
    pub fn log_reference(&self) -> f64 {
        9.0 / std::f64::consts::PI.powi(2) * (self.n as f64).ln()
    }
}

/// Sum of rationals by pairwise merging, which keeps intermediate
/// denominators balanced.
fn tree_sum(mut terms: Vec<BigRational>) -> BigRational {
    if terms.is_empty() {
        return BigRational::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a + b,
                None => a,
            });
        }
        terms = next;
    }
    terms.pop().expect("nonempty")
}

/// Variance of the height change along a column of `n` faces, exactly.
///
/// `trace(M²) = n/9 + 2τ² Σ_{d<n} (n − d) t_d²` with `t_d` the τ-coefficient
/// of `P(−d, d, 1)`.
pub fn height_variance(n: u64) -> Result<HeightVariance> {
    if n == 0 {
        return Err(Error::Precondition("height variance needs n ≥ 1".into()));
    }
    let ni = n as i64;
    let terms: Vec<BigRational> = (1..ni)
        .filter_map(|d| {
            let t = column_tau_coeff(d);
            (!t.is_zero()).then(|| &t * &t * BigRational::from_integer(BigInt::from(ni - d)))
        })
        .collect();
    let s = tree_sum(terms);
    let trace_sq: TauPoly = Poly::from_coeffs(vec![rat(ni, 9), BigRational::zero(), s * rat(2, 1)]);
    let trace_sq = SymbolicValue::Lozenge(trace_sq);
    let variance_r = SymbolicValue::rational(Model::Lozenge, rat(ni, 3)).try_sub(&trace_sq)?;
    let variance_h = variance_r.scale(&rat(9, 1));
    Ok(HeightVariance {
        n,
        trace_sq,
        variance_r,
        variance_h,
    })
}

/// `2σ²(h_n)/9`.
pub fn expected_cycles(n: u64) -> Result<SymbolicValue> {
    Ok(height_variance(n)?.expected_cycles())
}

/// Horizontal edges at blacks `(−k, k, 0)`, `k = 0..len`.
pub fn column_edges(len: usize) -> Vec<Edge> {
    (0..len as i64)
        .map(|k| Edge::new(Vertex::hex(-k, k, 0), Vertex::hex(-k, k, 1)).expect("horizontal edge"))
        .collect()
}

/// Distribution of the number of column edges present on the lozenge torus,
/// from torus probabilities of every subset of the column.
pub fn torus_column_distribution(m: i64, n: i64, len: usize) -> Result<Vec<BigRational>> {
    let edges = column_edges(len);
    let graph = build_torus(Model::Lozenge, m, n)?;
    CylinderEvent::new(Model::Lozenge, edges.clone())?.edge_ids(&graph)?;
    let mut alpha = vec![BigRational::zero(); len + 1];
    for mask in 0u32..(1 << len) {
        let subset = (0..len).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let p = torus_probability(Model::Lozenge, m, n, &CylinderEvent::new(Model::Lozenge, subset)?)?;
        let q = p.as_rational().expect("torus probabilities are rational");
        alpha[mask.count_ones() as usize] += q;
    }
    let alpha: Vec<SymbolicValue> = alpha
        .into_iter()
        .map(|q| SymbolicValue::rational(Model::Lozenge, q))
        .collect();
    Ok(jordan(&alpha)
        .into_iter()
        .map(|v| v.as_rational().expect("rational"))
        .collect())
}

/// The same distribution by enumerating every matching of the torus.
pub fn torus_column_distribution_oracle(m: i64, n: i64, len: usize, cap: usize) -> Result<Vec<BigRational>> {
    let graph = build_torus(Model::Lozenge, m, n)?;
    let ids = CylinderEvent::new(Model::Lozenge, column_edges(len))?.edge_ids(&graph)?;
    let set = oracle::enumerate_matchings_capped(&graph, cap)?;
    if set.is_empty() {
        return Err(Error::NoMatchings);
    }
    let mut counts = vec![0usize; len + 1];
    for mm in set.matchings() {
        let r = ids.iter().filter(|id| mm.binary_search(id).is_ok()).count();
        counts[r] += 1;
    }
    let total = set.len() as i64;
    Ok(counts.into_iter().map(|c| rat(c as i64, total)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::symbolic::sym_det;
    use crate::geometry::build_region;

    fn tau_poly(c: &[BigRational]) -> SymbolicValue {
        SymbolicValue::Lozenge(Poly::from_coeffs(c.to_vec()))
    }

    #[test]
    fn moment_matrix_five() {
        let m = moment_matrix(5).unwrap();
        let row: Vec<SymbolicValue> = m.matrix().row(0).to_vec();
        let z = BigRational::zero();
        assert_eq!(row[0], tau_poly(&[rat(1, 3)]));
        assert_eq!(row[1], tau_poly(&[z.clone(), rat(-1, 1)]));
        assert_eq!(row[2], tau_poly(&[z.clone(), rat(1, 2)]));
        assert!(row[3].is_zero());
        assert_eq!(row[4], tau_poly(&[z, rat(-1, 4)]));
        assert_eq!(m.matrix().get(3, 1), &row[2]);
        assert!(moment_matrix(0).is_err());
    }

    #[test]
    fn minor_sums_match_direct_expansion() {
        let n = 5;
        let m = moment_matrix(n).unwrap();
        let alpha = principal_minor_sums(n).unwrap();
        for (k, a) in alpha.iter().enumerate() {
            let mut direct = SymbolicValue::zero(Model::Lozenge);
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let minor = if k == 0 {
                    SymbolicValue::one(Model::Lozenge)
                } else {
                    sym_det(&m.matrix().select(&idx, &idx)).unwrap()
                };
                direct = direct.try_add(&minor).unwrap();
            }
            assert_eq!(*a, direct, "k = {k}");
        }
    }

    #[test]
    fn distribution_matches_jordan_of_minor_sums() {
        for n in [1, 4, 7] {
            assert_eq!(
                edge_count_distribution(n).unwrap(),
                jordan(&principal_minor_sums(n).unwrap())
            );
        }
    }

    #[test]
    fn small_distributions() {
        let b = edge_count_distribution(1).unwrap();
        assert_eq!(b, vec![tau_poly(&[rat(2, 3)]), tau_poly(&[rat(1, 3)])]);
        let b = edge_count_distribution(2).unwrap();
        let z = BigRational::zero();
        assert_eq!(b[2], tau_poly(&[rat(1, 9), z.clone(), rat(-1, 1)]));
        assert_eq!(b[1], tau_poly(&[rat(4, 9), z, rat(2, 1)]));
    }

    #[test]
    fn distribution_and_trace_variances_agree() {
        for n in 1..=8 {
            let beta = edge_count_distribution(n).unwrap();
            let total = beta
                .iter()
                .fold(SymbolicValue::zero(Model::Lozenge), |a, b| a.try_add(b).unwrap());
            assert_eq!(total, SymbolicValue::one(Model::Lozenge));
            let (mean, var) = distribution_moments(&beta);
            assert_eq!(mean, SymbolicValue::rational(Model::Lozenge, rat(n as i64, 3)));
            assert_eq!(var, height_variance(n as u64).unwrap().variance_r, "n = {n}");
        }
    }

    #[test]
    fn variance_of_one_step() {
        let v = height_variance(1).unwrap();
        assert_eq!(v.variance_r, tau_poly(&[rat(2, 9)]));
        assert_eq!(v.variance_h, tau_poly(&[rat(2, 1)]));
        assert_eq!(expected_cycles(1).unwrap(), tau_poly(&[rat(4, 9)]));
    }

    #[test]
    fn single_hexagon_heights() {
        let g = build_region(Model::Lozenge, &[Face::Hex(0, 0)]).unwrap();
        let vs = Face::Hex(0, 0).vertices();
        for start in [0, 1] {
            let m: Vec<Edge> = (0..3)
                .map(|k| Edge::new(vs[2 * k + start], vs[(2 * k + start + 1) % 6]).unwrap())
                .collect();
            let h = height_field(&g, &m).unwrap();
            assert_eq!(h.anchor(), Face::Hex(0, 0));
            assert_eq!(h.len(), 7);
            let mut steps: Vec<i64> = h
                .iter()
                .filter(|(f, _)| **f != Face::Hex(0, 0))
                .map(|(_, v)| *v)
                .collect();
            steps.sort_unstable();
            // Going outwards, the black vertex sits on alternating sides of
            // consecutive edges, and matched edges alternate with unmatched.
            assert!(
                steps == vec![-2, -2, -2, -1, -1, -1] || steps == vec![1, 1, 1, 2, 2, 2],
                "{steps:?}"
            );
        }
    }

    #[test]
    fn non_matching_rejected() {
        let g = build_region(Model::Lozenge, &[Face::Hex(0, 0)]).unwrap();
        let vs = Face::Hex(0, 0).vertices();
        let m = vec![Edge::new(vs[0], vs[1]).unwrap()];
        assert!(matches!(height_field(&g, &m), Err(Error::NotPerfectMatching(_))));
    }

    #[test]
    fn heights_translate() {
        let faces = [Face::Hex(0, 0), Face::Hex(1, 0), Face::Hex(0, 1), Face::Hex(1, 1)];
        let g = build_region(Model::Lozenge, &faces).unwrap();
        let moved: Vec<Face> = faces.iter().map(|f| f.translate((3, -1))).collect();
        let g2 = build_region(Model::Lozenge, &moved).unwrap();
        let set = oracle::enumerate_matchings(&g).unwrap();
        assert!(set.len() > 1);
        for mm in set.matchings() {
            let edges: Vec<Edge> = mm.iter().map(|&k| g.edges()[k].edge).collect();
            let h = height_field(&g, &edges).unwrap();
            let shifted: Vec<Edge> = edges.iter().map(|e| e.translate((3, -1))).collect();
            let h2 = height_field(&g2, &shifted)
                .unwrap()
                .reanchored(Face::Hex(3, -1))
                .unwrap();
            for (f, v) in h.iter() {
                assert_eq!(h2.get(&f.translate((3, -1))), Some(*v));
            }
        }
    }

    #[test]
    fn column_steps_follow_the_count() {
        // Faces Hex(−k, k) stacked through the horizontal edges at blacks
        // (−k, k, 0), k ≥ 1.
        let faces: Vec<Face> = (0..4).map(|k| Face::Hex(-k, k)).collect();
        let g = build_region(Model::Lozenge, &faces).unwrap();
        let col = column_edges(4);
        for mm in oracle::enumerate_matchings(&g).unwrap().matchings() {
            let edges: Vec<Edge> = mm.iter().map(|&k| g.edges()[k].edge).collect();
            let h = height_field(&g, &edges).unwrap();
            for n in 1..=3usize {
                let r = col[1..=n].iter().filter(|e| edges.contains(e)).count() as i64;
                let top = Face::Hex(-(n as i64), n as i64);
                let bottom = Face::Hex(0, 0);
                assert_eq!(h.get(&top).unwrap() - h.get(&bottom).unwrap(), n as i64 - 3 * r);
            }
        }
    }
}
