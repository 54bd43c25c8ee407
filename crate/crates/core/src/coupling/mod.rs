//! The coupling function: exact plane values, numeric integrals, and finite
//! torus sums.

use std::collections::HashMap;

use num_complex::Complex;

use crate::error::Result;
use crate::exact::{rat, GaussRat, Poly, SymbolicValue};
use crate::geometry::Model;

pub mod domino;
pub mod lozenge;
pub mod quadrature;
pub mod torus;

pub use domino::{domino_coupling, domino_diagonal, domino_subdiagonal};
pub use lozenge::{column_coupling, lozenge_boundary, lozenge_coupling, symmetry_orbit};
pub use quadrature::{coupling_numeric, coupling_numeric_many};
pub use torus::torus_coupling;

/// Exact plane coupling values, complete on `|x|, |y| ≤ window`.
///
/// Values computed beyond the window during construction are kept; the
/// symmetry checks use them.
#[derive(Clone, Debug)]
pub struct CouplingTable {
    model: Model,
    window: i64,
    values: HashMap<(i64, i64), SymbolicValue>,
}

impl CouplingTable {
    pub fn build(model: Model, window: i64) -> Result<Self> {
        let window = window.max(0);
        let values = match model {
            Model::Lozenge => lozenge::fill(window)?
                .into_iter()
                .map(|(k, v)| (k, SymbolicValue::Lozenge(v)))
                .collect(),
            Model::Domino => domino::fill(window)?
                .into_iter()
                .map(|(k, v)| (k, SymbolicValue::Domino(v)))
                .collect(),
        };
        Ok(CouplingTable { model, window, values })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// `P(x, y)`; domino sites with even `x + y` are exactly zero.
    pub fn get(&self, x: i64, y: i64) -> Option<SymbolicValue> {
        if self.model == Model::Domino && (x + y).rem_euclid(2) == 0 {
            return Some(SymbolicValue::zero(Model::Domino));
        }
        self.values.get(&(x, y)).cloned()
    }

    /// Value at a displacement, falling back to a fresh computation outside
    /// the table.
    pub fn value(&self, x: i64, y: i64) -> SymbolicValue {
        self.get(x, y).unwrap_or_else(|| plane_coupling(self.model, x, y))
    }

    /// Displacements inside the window, sorted.
    pub fn window_points(&self) -> Vec<(i64, i64)> {
        let w = self.window;
        (-w..=w).flat_map(|x| (-w..=w).map(move |y| (x, y))).collect()
    }

    /// Displacements where a symmetry identity fails. Empty when all hold.
    pub fn symmetry_violations(&self) -> Vec<(i64, i64)> {
        let mut bad = Vec::new();
        for (&(x, y), v) in &self.values {
            let images: Vec<(i64, i64, SymbolicValue)> = match self.model {
                Model::Lozenge => symmetry_orbit(x, y)
                    .into_iter()
                    .map(|(u, w)| (u, w, v.clone()))
                    .collect(),
                Model::Domino => {
                    // P(y, x) = −i (−1)^y P(x, y)
                    let t = v.mul_i().expect("domino value");
                    let t = if y.rem_euclid(2) == 0 { t.neg() } else { t };
                    vec![(-x, y, v.clone()), (x, -y, v.clone()), (-x, -y, v.clone()), (y, x, t)]
                }
            };
            for (u, w, expect) in images {
                if let Some(got) = self.values.get(&(u, w)) {
                    if *got != expect {
                        bad.push((x, y));
                    }
                }
            }
        }
        bad.sort_unstable();
        bad.dedup();
        bad
    }

    /// Black sites whose full neighbourhood lies in the table and where the
    /// kernel relation fails. Returns `(violations, sites checked)`.
    pub fn kernel_violations(&self) -> (Vec<(i64, i64)>, usize) {
        let mut bad = Vec::new();
        let mut checked = 0;
        let w = self.window;
        for a in -w..=w {
            for b in -w..=w {
                let delta = if (a, b) == (0, 0) { 1 } else { 0 };
                let ok = match self.model {
                    Model::Lozenge => {
                        let nb = lozenge::black_neighbours(a, b);
                        let vals: Option<Vec<SymbolicValue>> = nb.iter().map(|&(x, y)| self.get(x, y)).collect();
                        let Some(vals) = vals else { continue };
                        let s = vals
                            .iter()
                            .fold(SymbolicValue::zero(Model::Lozenge), |acc, v| acc.try_add(v).unwrap());
                        s == SymbolicValue::rational(Model::Lozenge, rat(delta, 1))
                    }
                    Model::Domino => {
                        if (a + b).rem_euclid(2) != 0 {
                            continue;
                        }
                        let nb = domino::black_neighbours(a, b);
                        let mut s = Poly::<GaussRat>::from_coeffs(vec![]);
                        let mut complete = true;
                        for ((x, y), wt) in nb {
                            match self.get(x, y) {
                                Some(SymbolicValue::Domino(p)) => s = &s + &p.scale(&wt),
                                _ => complete = false,
                            }
                        }
                        if !complete {
                            continue;
                        }
                        SymbolicValue::Domino(s) == SymbolicValue::rational(Model::Domino, rat(delta, 1))
                    }
                };
                checked += 1;
                if !ok {
                    bad.push((a, b));
                }
            }
        }
        (bad, checked)
    }

    /// Smallest `C` with `|P(x, y)| ≤ C/(|x| + |y|)` over the window, origin
    /// excluded.
    pub fn decay_constant(&self) -> f64 {
        self.window_points()
            .into_iter()
            .filter(|&p| p != (0, 0))
            .map(|(x, y)| self.value(x, y).eval(1e-12).norm() * (x.abs() + y.abs()) as f64)
            .fold(0.0, f64::max)
    }

    /// Numeric values of the window, as `(x, y, value)`.
    pub fn numeric(&self, tol: f64) -> Vec<(i64, i64, Complex<f64>)> {
        self.window_points()
            .into_iter()
            .map(|(x, y)| (x, y, self.value(x, y).eval(tol)))
            .collect()
    }
}

/// Exact plane coupling `P(x, y)` for either model.
pub fn plane_coupling(model: Model, x: i64, y: i64) -> SymbolicValue {
    match model {
        Model::Lozenge => lozenge_coupling(x, y),
        Model::Domino => domino_coupling(x, y),
    }
}

/// Exact plane couplings at several displacements, sharing one table for
/// the values that need the recursion.
pub fn plane_couplings(model: Model, points: &[(i64, i64)]) -> Result<Vec<SymbolicValue>> {
    let mut out: Vec<Option<SymbolicValue>> = Vec::with_capacity(points.len());
    let mut radius = -1;
    for &(x, y) in points {
        let direct = match model {
            Model::Lozenge => {
                let (u, v) = lozenge::nearest_image(x, y);
                let d = lozenge::seed_value(u, v).map(SymbolicValue::Lozenge);
                if d.is_none() {
                    radius = radius.max(u.abs().max(v.abs()));
                }
                d
            }
            Model::Domino => {
                if (x + y).rem_euclid(2) == 0 {
                    Some(SymbolicValue::zero(Model::Domino))
                } else {
                    let d = domino::seed_value(x, y).map(SymbolicValue::Domino);
                    if d.is_none() {
                        radius = radius.max(x.abs().max(y.abs()));
                    }
                    d
                }
            }
        };
        out.push(direct);
    }
    let table = if radius >= 0 {
        Some(CouplingTable::build(model, radius)?)
    } else {
        None
    };
    Ok(points
        .iter()
        .zip(out)
        .map(|(&(x, y), d)| {
            d.unwrap_or_else(|| {
                let t = table.as_ref().expect("table built for recursive values");
                let (u, v) = match model {
                    Model::Lozenge => lozenge::nearest_image(x, y),
                    Model::Domino => (x, y),
                };
                t.get(u, v).expect("window covers the point")
            })
        })
        .collect())
}
