use std::f64::consts::PI;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::Model;
use crate::kasteleyn::Variant;

type C64 = Complex<f64>;

/// Smallest denominator modulus treated as nonzero.
const DEGENERATE: f64 = 1e-12;

/// Finite Fourier sum for the inverse Kasteleyn entry `B_j^{-1}[w, b]` at
/// displacement `(x, y) = w − b`.
///
/// Lozenge: `(1/mn) Σ e^{i(xθ+yφ)} / (1 + e^{−iθ} + e^{−iφ})` over
/// `θ = 2π(k + s/2)/m`, `φ = 2π(l + t/2)/n`, with `(s, t)` the variant's
/// seam shifts. Domino: `(1/4mn) Σ e^{i(xθ+yφ)} / (2cos θ + 2i cos φ)` over
/// the `2m × 2n` grid of modes.
pub fn torus_coupling(model: Model, m: i64, n: i64, variant: Variant, x: i64, y: i64) -> Result<C64> {
    if m < 1 || n < 1 {
        return Err(Error::TorusTooSmall { m, n });
    }
    let (sx, sy) = variant.shifts();
    let (gm, gn) = match model {
        Model::Lozenge => (m, n),
        Model::Domino => (2 * m, 2 * n),
    };
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..gm {
        let theta = 2.0 * PI * (k as f64 + sx as f64 / 2.0) / gm as f64;
        for l in 0..gn {
            let phi = 2.0 * PI * (l as f64 + sy as f64 / 2.0) / gn as f64;
            let d = match model {
                Model::Lozenge => C64::new(1.0, 0.0) + C64::from_polar(1.0, -theta) + C64::from_polar(1.0, -phi),
                Model::Domino => C64::new(2.0 * theta.cos(), 2.0 * phi.cos()),
            };
            if d.norm() < DEGENERATE {
                return Err(Error::DegenerateDenominator);
            }
            acc += C64::from_polar(1.0, x as f64 * theta + y as f64 * phi) / d;
        }
    }
    Ok(acc / (gm * gn) as f64)
}
