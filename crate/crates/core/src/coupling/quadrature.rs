//! Numeric evaluation of the coupling integrals over `[0, 2π]²`.
//!
//! The square is cut into panels whose corners include every zero of the
//! denominator. Panels meeting a zero are split into two triangles and
//! integrated in Duffy coordinates, which cancel the `1/r` singularity;
//! all other panels use tensor Gauss–Legendre rules. Each panel compares an
//! order-`q` rule with an order-`2q` rule and is subdivided until the
//! difference is within its share of the tolerance.

use std::f64::consts::PI;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::Model;

type C64 = Complex<f64>;

const BASE_ORDER: usize = 12;
const MAX_DEPTH: u32 = 14;

/// Gauss–Legendre nodes and weights on `[0, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp;
        loop {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let w = 1.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = 0.5 * (1.0 - z);
        nodes[n - 1 - i] = 0.5 * (1.0 + z);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `1/(4π² D(θ, φ))` for the model's denominator.
fn kernel(model: Model, theta: f64, phi: f64) -> C64 {
    let d = match model {
        Model::Lozenge => C64::new(1.0, 0.0) + C64::from_polar(1.0, -theta) + C64::from_polar(1.0, -phi),
        Model::Domino => C64::new(2.0 * theta.cos(), 2.0 * phi.cos()),
    };
    1.0 / (4.0 * PI * PI * d)
}

/// Zeros of the denominator inside `[0, 2π]²`, in units of the panel width.
fn poles(model: Model) -> (usize, Vec<(usize, usize)>) {
    match model {
        Model::Lozenge => (6, vec![(2, 4), (4, 2)]),
        Model::Domino => (8, vec![(2, 2), (2, 6), (6, 2), (6, 6)]),
    }
}

#[derive(Clone, Copy, Debug)]
enum Panel {
    Square {
        t0: f64,
        p0: f64,
        h: f64,
    },
    /// Square of side `h` with the pole at corner `(ct, cp)`, extending in the
    /// directions `(st, sp)` ∈ {±1}².
    Singular {
        ct: f64,
        cp: f64,
        st: f64,
        sp: f64,
        h: f64,
    },
}

struct Integrator<'a> {
    model: Model,
    points: &'a [(i64, i64)],
    rules: Vec<(Vec<f64>, Vec<f64>)>,
}

impl Integrator<'_> {
    fn rule(&self, level: usize) -> &(Vec<f64>, Vec<f64>) {
        &self.rules[level]
    }

    fn accumulate(&self, out: &mut [C64], theta: f64, phi: f64, w: f64) {
        let g = kernel(self.model, theta, phi) * w;
        for (acc, &(x, y)) in out.iter_mut().zip(self.points) {
            let (s, c) = (x as f64 * theta + y as f64 * phi).sin_cos();
            *acc += g * C64::new(c, s);
        }
    }

    fn apply(&self, panel: Panel, level: usize) -> Vec<C64> {
        let (nodes, weights) = self.rule(level);
        let mut out = vec![C64::new(0.0, 0.0); self.points.len()];
        match panel {
            Panel::Square { t0, p0, h } => {
                for (u, wu) in nodes.iter().zip(weights) {
                    for (v, wv) in nodes.iter().zip(weights) {
                        self.accumulate(&mut out, t0 + h * u, p0 + h * v, h * h * wu * wv);
                    }
                }
            }
            Panel::Singular { ct, cp, st, sp, h } => {
                // triangles (c, c + h e_θ, c + h(e_θ + e_φ)) and (c, c + h(e_θ + e_φ), c + h e_φ)
                let tri = [((st * h, 0.0), (st * h, sp * h)), ((st * h, sp * h), (0.0, sp * h))];
                for (a, b) in tri {
                    let jac = ((a.0 * (b.1 - a.1)) - (a.1 * (b.0 - a.0))).abs();
                    for (u, wu) in nodes.iter().zip(weights) {
                        for (v, wv) in nodes.iter().zip(weights) {
                            let theta = ct + u * a.0 + u * v * (b.0 - a.0);
                            let phi = cp + u * a.1 + u * v * (b.1 - a.1);
                            self.accumulate(&mut out, theta, phi, jac * u * wu * wv);
                        }
                    }
                }
            }
        }
        out
    }

    fn children(panel: Panel) -> Vec<Panel> {
        match panel {
            Panel::Square { t0, p0, h } => {
                let g = h / 2.0;
                vec![
                    Panel::Square { t0, p0, h: g },
                    Panel::Square { t0: t0 + g, p0, h: g },
                    Panel::Square { t0, p0: p0 + g, h: g },
                    Panel::Square {
                        t0: t0 + g,
                        p0: p0 + g,
                        h: g,
                    },
                ]
            }
            Panel::Singular { ct, cp, st, sp, h } => {
                let g = h / 2.0;
                let mut out = vec![Panel::Singular { ct, cp, st, sp, h: g }];
                for (i, j) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
                    let (ta, tb) = (ct + i * g * st, ct + (i + 1.0) * g * st);
                    let (pa, pb) = (cp + j * g * sp, cp + (j + 1.0) * g * sp);
                    out.push(Panel::Square {
                        t0: ta.min(tb),
                        p0: pa.min(pb),
                        h: g,
                    });
                }
                out
            }
        }
    }

    fn area(panel: Panel) -> f64 {
        match panel {
            Panel::Square { h, .. } | Panel::Singular { h, .. } => h * h,
        }
    }

    /// Adds the panel integral to `total`; returns the error estimate.
    fn integrate(&self, panel: Panel, tol: f64, depth: u32, total: &mut [C64]) -> f64 {
        let coarse = self.apply(panel, 0);
        let fine = self.apply(panel, 1);
        let est = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if est <= tol || depth >= MAX_DEPTH {
            for (t, f) in total.iter_mut().zip(&fine) {
                *t += f;
            }
            return est;
        }
        let kids = Self::children(panel);
        let a = Self::area(panel);
        kids.into_iter()
            .map(|k| self.integrate(k, tol * Self::area(k) / a, depth + 1, total))
            .sum()
    }
}

/// Numeric coupling values at several displacements from shared quadrature
/// nodes, with the total error estimate.
pub fn coupling_numeric_many(model: Model, points: &[(i64, i64)], tol: f64) -> Result<(Vec<C64>, f64)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition("quadrature tolerance must be positive".into()));
    }
    let integ = Integrator {
        model,
        points,
        rules: vec![gauss_legendre(BASE_ORDER), gauss_legendre(2 * BASE_ORDER)],
    };
    let (cells, pole_list) = poles(model);
    let h = 2.0 * PI / cells as f64;
    let mut total = vec![C64::new(0.0, 0.0); points.len()];
    let panel_tol = tol / (4.0 * (cells * cells) as f64);
    let mut err = 0.0;
    for i in 0..cells {
        for j in 0..cells {
            let corner = pole_list
                .iter()
                .find(|&&(pi, pj)| (pi == i || pi == i + 1) && (pj == j || pj == j + 1));
            let panel = match corner {
                Some(&(pi, pj)) => Panel::Singular {
                    ct: pi as f64 * h,
                    cp: pj as f64 * h,
                    st: if pi == i { 1.0 } else { -1.0 },
                    sp: if pj == j { 1.0 } else { -1.0 },
                    h,
                },
                None => Panel::Square {
                    t0: i as f64 * h,
                    p0: j as f64 * h,
                    h,
                },
            };
            err += integ.integrate(panel, panel_tol, 0, &mut total);
        }
    }
    if err > tol {
        return Err(Error::NoConvergence { tol, achieved: err });
    }
    Ok((total, err))
}

/// Numeric `P(x, y)` from the double integral.
pub fn coupling_numeric(model: Model, x: i64, y: i64, tol: f64) -> Result<C64> {
    Ok(coupling_numeric_many(model, &[(x, y)], tol)?.0[0])
}
