//! Cylinder-set probabilities in the plane, in finite regions and on tori,
//! and correlations between translated events.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coupling::plane_couplings;
use crate::error::{Error, Result};
use crate::event::CylinderEvent;
use crate::exact::ring::gauss_to_rat;
use crate::exact::symbolic::sym_det_model;
use crate::exact::{GaussInt, GaussRat, Matrix, SymbolicValue};
use crate::geometry::{build_torus, Model, RegionGraph, RegionKind};
use crate::kasteleyn::{count_torus, modulus, torus_formula_applies, CountMethod, KasteleynMatrix, Variant};
use crate::oracle;

/// Slack allowed above 1 for numeric probabilities.
pub const NUMERIC_EPS: f64 = 1e-9;

const EVAL_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    PlaneCoupling,
    RegionCofactor,
    TorusWeighted,
    Oracle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityResult {
    pub exact: Option<SymbolicValue>,
    pub numeric: f64,
    pub method: Method,
    /// Fallbacks taken along the way.
    pub notes: Vec<String>,
}

impl ProbabilityResult {
    fn rational(model: Model, q: BigRational, method: Method) -> Self {
        let exact = SymbolicValue::rational(model, q);
        ProbabilityResult {
            numeric: exact.eval_re(EVAL_TOL),
            exact: Some(exact),
            method,
            notes: Vec::new(),
        }
    }

    /// The exact value when it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.exact.as_ref().and_then(SymbolicValue::as_rational)
    }
}

/// Probability of an event under the plane measure: `|det P(w_i − b_j)|`.
pub fn plane_probability(event: &CylinderEvent) -> Result<ProbabilityResult> {
    let model = event.model();
    let edges = event.edges();
    let k = edges.len();
    let mut points = Vec::with_capacity(k * k);
    for ei in edges {
        for ej in edges {
            let (wx, wy) = ei.white().coords();
            let (bx, by) = ej.black().coords();
            points.push((wx - bx, wy - by));
        }
    }
    let values = plane_couplings(model, &points)?;
    let m = Matrix::from_fn(k, k, |i, j| values[i * k + j].clone());
    let det = sym_det_model(model, &m)?;
    let (exact, numeric) = match det.abs_exact() {
        Some(a) => {
            let x = a.eval_re(EVAL_TOL);
            (Some(a), x)
        }
        None => (None, det.eval(EVAL_TOL).norm()),
    };
    Ok(ProbabilityResult {
        exact,
        numeric,
        method: Method::PlaneCoupling,
        notes: Vec::new(),
    })
}

/// Black and white block indices of the event's edges, aligned.
fn endpoints(graph: &RegionGraph, event: &CylinderEvent) -> Result<(Vec<usize>, Vec<usize>)> {
    let ids = event.edge_ids(graph)?;
    Ok(ids
        .iter()
        .map(|&id| (graph.edges()[id].black, graph.edges()[id].white))
        .unzip())
}

/// `a_E det((B⁻¹)_{E*})`, which is the probability itself.
///
/// `a_E` is the product of the Kasteleyn entries on the event edges and
/// `(B⁻¹)_{E*}` the submatrix of the inverse on the event's whites (rows)
/// and blacks (columns), in matching order.
pub fn region_probability_inverse(region: &RegionGraph, event: &CylinderEvent) -> Result<GaussRat> {
    let (p, q) = endpoints(region, event)?;
    let b = KasteleynMatrix::new(region).matrix().map(gauss_to_rat);
    if !b.is_square() {
        return Err(Error::NoMatchings);
    }
    let inv = b.inverse().ok_or(Error::NoMatchings)?;
    let sub = inv.select(&q, &p);
    let mut a = GaussRat::one();
    for (&i, &j) in p.iter().zip(&q) {
        a *= b.get(i, j).clone();
    }
    let det = if sub.rows() == 0 { GaussRat::one() } else { sub.det() };
    Ok(a * det)
}

/// `|det B_E| / |det B|` with `B_E` the matrix with the event's rows and
/// columns removed.
pub fn region_probability_cofactor(region: &RegionGraph, event: &CylinderEvent) -> Result<BigRational> {
    let (p, q) = endpoints(region, event)?;
    let k = KasteleynMatrix::new(region);
    if !k.is_square() {
        return Err(Error::NoMatchings);
    }
    let total = modulus(&k.det());
    if total.is_zero() {
        return Err(Error::NoMatchings);
    }
    let rest = k.matrix().remove(&p, &q);
    let with = if rest.rows() == 0 {
        BigInt::one()
    } else {
        modulus(&rest.det())
    };
    Ok(BigRational::new(with, total))
}

/// Probability of an event in a balanced simply connected region, by both
/// determinant paths.
pub fn region_probability(region: &RegionGraph, event: &CylinderEvent) -> Result<ProbabilityResult> {
    if region.kind() != RegionKind::SimplyConnected {
        return Err(Error::Precondition(
            "region_probability expects a simply connected region".into(),
        ));
    }
    if !region.is_balanced() {
        return Err(Error::NoMatchings);
    }
    let cof = region_probability_cofactor(region, event)?;
    let inv = region_probability_inverse(region, event)?;
    assert!(
        inv.im.is_zero() && !inv.re.is_negative() && inv.re == cof,
        "determinant paths disagree: {inv} vs {cof}"
    );
    Ok(ProbabilityResult::rational(region.model(), cof, Method::RegionCofactor))
}

/// Signed sum of the matchings containing the event in the expansion of
/// `det B`: the determinant with each event row cut down to its event entry.
fn restricted_det(k: &KasteleynMatrix, p: &[usize], q: &[usize]) -> GaussInt {
    let mut m = k.matrix().clone();
    for (&i, &j) in p.iter().zip(q) {
        let keep = m.get(i, j).clone();
        for c in 0..m.cols() {
            m.set(i, c, GaussInt::zero());
        }
        m.set(i, j, keep);
    }
    m.det()
}

/// Number of matchings of a torus containing the event, from
/// `½ |Σ_j s_j det B_j^E|` with `s = (−1, 1, 1, 1)`.
pub fn torus_event_count(graph: &RegionGraph, event: &CylinderEvent) -> Result<BigInt> {
    let (p, q) = endpoints(graph, event)?;
    let mut sum = GaussInt::zero();
    for v in Variant::ALL {
        let k = KasteleynMatrix::variant(graph, v);
        sum += restricted_det(&k, &p, &q) * BigInt::from(v.sign());
    }
    let half = Complex::new(&sum.re / 2, &sum.im / 2);
    Ok(modulus(&half))
}

/// Probability of an event on the `m × n` torus.
///
/// Sizes outside the four-determinant regime go to the enumeration oracle,
/// with a note.
pub fn torus_probability(model: Model, m: i64, n: i64, event: &CylinderEvent) -> Result<ProbabilityResult> {
    let graph = build_torus(model, m, n)?;
    if !torus_formula_applies(model, m, n) {
        let q = oracle::oracle_probability(&graph, event)?;
        let mut r = ProbabilityResult::rational(model, q, Method::Oracle);
        r.notes.push(format!(
            "{model} torus {m}x{n} is outside the four-determinant regime; used enumeration"
        ));
        return Ok(r);
    }
    let total = count_torus(model, m, n)?;
    debug_assert_eq!(total.method, CountMethod::FourDeterminants);
    if total.count.is_zero() {
        return Err(Error::NoMatchings);
    }
    let with = torus_event_count(&graph, event)?;
    Ok(ProbabilityResult::rational(
        model,
        BigRational::new(with, total.count),
        Method::TorusWeighted,
    ))
}

/// Joint and product probabilities of two plane events.
#[derive(Clone, Debug, PartialEq)]
pub struct Correlation {
    pub joint: SymbolicValue,
    pub product: SymbolicValue,
    /// `joint − product`.
    pub difference: SymbolicValue,
    /// Minimum distance between the events after translation.
    pub distance: f64,
}

impl Correlation {
    pub fn difference_numeric(&self) -> f64 {
        self.difference.eval_re(EVAL_TOL)
    }
}

fn exact_of(r: ProbabilityResult) -> Result<SymbolicValue> {
    r.exact
        .ok_or_else(|| Error::Precondition("plane probability has no exact modulus".into()))
}

/// Correlation between `e1` and `e2` translated by `v`.
pub fn correlation(e1: &CylinderEvent, e2: &CylinderEvent, v: (i64, i64)) -> Result<Correlation> {
    let moved = e2.translate(v);
    let union = e1.union(&moved)?;
    let joint = exact_of(plane_probability(&union)?)?;
    let product = exact_of(plane_probability(e1)?)?.try_mul(&exact_of(plane_probability(e2)?)?)?;
    let difference = joint.try_sub(&product)?;
    Ok(Correlation {
        joint,
        product,
        difference,
        distance: e1.distance(&moved),
    })
}
