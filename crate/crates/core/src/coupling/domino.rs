use std::collections::{HashMap, VecDeque};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::symbolic::InvPiPoly;
use crate::exact::{rat, GaussRat, Poly, SymbolicValue};

fn real(q: BigRational) -> GaussRat {
    Complex::new(q, BigRational::zero())
}

fn unit_i() -> GaussRat {
    Complex::new(BigRational::zero(), BigRational::one())
}

/// `P(2x+1, 2x) = (−1)^x [1/4 − (1/π)(1 − 1/3 + … ± 1/(2x−1))]`, any `x ≥ 0`.
fn diagonal_poly(x: i64) -> InvPiPoly {
    let mut s = BigRational::zero();
    for j in 0..x {
        let t = rat(1, 2 * j + 1);
        s = if j % 2 == 0 { s + t } else { s - t };
    }
    let sign = if x % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    Poly::from_coeffs(vec![real(&sign * rat(1, 4)), real(-(sign * s))])
}

/// `P(2x+1, 2x)` for `x ≥ 1`.
pub fn domino_diagonal(x: i64) -> Result<SymbolicValue> {
    if x < 1 {
        return Err(Error::Precondition(format!("diagonal formula needs x ≥ 1, got {x}")));
    }
    Ok(SymbolicValue::Domino(diagonal_poly(x)))
}

/// `P(2x, 2x−1) = i·P(2x+1, 2x)` for `x ≥ 1`.
pub fn domino_subdiagonal(x: i64) -> Result<SymbolicValue> {
    domino_diagonal(x)?.mul_i()
}

/// Whites adjacent to a black site with their Kasteleyn weights.
pub(crate) fn black_neighbours(a: i64, b: i64) -> [((i64, i64), GaussRat); 4] {
    [
        ((a + 1, b), GaussRat::one()),
        ((a - 1, b), GaussRat::one()),
        ((a, b + 1), unit_i()),
        ((a, b - 1), unit_i()),
    ]
}

/// Value on the line `x = y + 1`, `y ≥ 0`.
fn near_diagonal(y: i64) -> InvPiPoly {
    if y % 2 == 0 {
        diagonal_poly(y / 2)
    } else {
        diagonal_poly((y + 1) / 2).scale(&unit_i())
    }
}

/// Seed value at a point with `| |x| − |y| | = 1`, if it is one.
pub(crate) fn seed_value(x: i64, y: i64) -> Option<InvPiPoly> {
    ((x.abs() - y.abs()).abs() == 1).then(|| seed(x, y))
}

/// Seed value at a point with `| |x| − |y| | = 1`.
///
/// Uses `P(±x, ±y) = P(x, y)` and the transposition rule
/// `P(y, x) = −i (−1)^y P(x, y)`.
fn seed(x: i64, y: i64) -> InvPiPoly {
    let (ax, ay) = (x.abs(), y.abs());
    if ax == ay + 1 {
        near_diagonal(ay)
    } else {
        debug_assert_eq!(ay, ax + 1);
        // P(x, y) = i (−1)^y P(y, x)
        let sign = if ay % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        near_diagonal(ax).scale(&Complex::new(BigRational::zero(), sign))
    }
}

/// Exact domino coupling values on a box around the origin (odd `x + y` only).
///
/// The two lines `|x| − |y| = ±1` are seeded from the diagonal formula and the
/// symmetries; the weighted relation
/// `P(a+1,b) + P(a−1,b) + i P(a,b+1) + i P(a,b−1) = δ_{(a,b),0}` at black
/// sites determines the rest.
pub(crate) fn fill(window: i64) -> Result<HashMap<(i64, i64), InvPiPoly>> {
    let mut bound = 2 * window + 8;
    loop {
        let values = fill_box(bound);
        let complete = (-window..=window)
            .all(|x| (-window..=window).all(|y| (x + y).rem_euclid(2) == 0 || values.contains_key(&(x, y))));
        if complete {
            return Ok(values);
        }
        if bound > 16 * window + 64 {
            return Err(Error::Precondition(format!(
                "recursion left gaps in the window of radius {window}"
            )));
        }
        bound *= 2;
    }
}

fn fill_box(bound: i64) -> HashMap<(i64, i64), InvPiPoly> {
    let inside = |(x, y): (i64, i64)| x.abs() <= bound && y.abs() <= bound;
    let mut values = HashMap::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            if (x.abs() - y.abs()).abs() == 1 {
                values.insert((x, y), seed(x, y));
            }
        }
    }
    let white_to_blacks = |(x, y): (i64, i64)| [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)];
    let mut queue: VecDeque<(i64, i64)> = values.keys().flat_map(|&p| white_to_blacks(p)).collect();
    while let Some((a, b)) = queue.pop_front() {
        let nb = black_neighbours(a, b);
        if !nb.iter().all(|(p, _)| inside(*p)) {
            continue;
        }
        let unknown: Vec<usize> = (0..4).filter(|&k| !values.contains_key(&nb[k].0)).collect();
        if unknown.len() != 1 {
            continue;
        }
        let u = unknown[0];
        let mut acc = if (a, b) == (0, 0) {
            InvPiPoly::one()
        } else {
            InvPiPoly::zero()
        };
        for (k, (p, w)) in nb.iter().enumerate() {
            if k != u {
                acc = &acc - &values[p].scale(w);
            }
        }
        // weights are 1 or i, and 1/i = −i
        let inv = if nb[u].1 == GaussRat::one() {
            GaussRat::one()
        } else {
            -unit_i()
        };
        let p = nb[u].0;
        values.insert(p, acc.scale(&inv));
        queue.extend(white_to_blacks(p));
    }
    values
}

/// Exact domino coupling `P(x, y)`; zero when `x + y` is even.
pub fn domino_coupling(x: i64, y: i64) -> SymbolicValue {
    if (x + y).rem_euclid(2) == 0 {
        return SymbolicValue::Domino(Poly::zero());
    }
    let (ax, ay) = (x.abs(), y.abs());
    if (ax - ay).abs() == 1 {
        return SymbolicValue::Domino(seed(x, y));
    }
    let table = fill(ax.max(ay)).expect("domino recursion fills every window");
    SymbolicValue::Domino(table[&(x, y)].clone())
}
