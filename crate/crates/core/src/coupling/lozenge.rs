use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::symbolic::TauPoly;
use crate::exact::{rat, Poly, SymbolicValue};

/// `c_y` ∈ {0, 1, −1} for `y ≡ 0, 2, 1 (mod 3)`.
pub fn c_y(y: i64) -> i64 {
    match y.rem_euclid(3) {
        0 => 0,
        1 => -1,
        _ => 1,
    }
}

fn boundary_poly(y: i64) -> TauPoly {
    if y == 0 {
        Poly::constant(rat(1, 3))
    } else {
        Poly::monomial(rat(c_y(y), y), 1)
    }
}

/// `P(−1, y) = c_y·τ/y` for `y ≠ 0`.
pub fn lozenge_boundary(y: i64) -> Result<SymbolicValue> {
    if y == 0 {
        return Err(Error::Precondition(
            "the boundary formula needs y ≠ 0; P(−1,0) = P(0,0) = 1/3".into(),
        ));
    }
    Ok(SymbolicValue::Lozenge(boundary_poly(y)))
}

/// The six images of `(x, y)` under the symmetries of `(x, y, −x−y−1)`.
pub fn symmetry_orbit(x: i64, y: i64) -> [(i64, i64); 6] {
    let z = -x - y - 1;
    [(x, y), (y, x), (z, x), (y, z), (z, y), (x, z)]
}

/// Whites adjacent to the black vertex `(a, b, 0)`.
pub(crate) fn black_neighbours(a: i64, b: i64) -> [(i64, i64); 3] {
    [(a, b), (a - 1, b), (a, b - 1)]
}

/// Exact plane coupling values `P(x, y) := P(x, y, 1)` on a box.
///
/// The lines `x = −1`, `y = −1` and `x + y = 0` are seeded from the boundary
/// formula and its symmetry images; everything else follows from
/// `P(a,b) + P(a−1,b) + P(a,b−1) = δ_{(a,b),0}` at black sites, applied
/// wherever exactly one of the three values is still unknown.
pub(crate) fn fill(window: i64) -> Result<HashMap<(i64, i64), TauPoly>> {
    let mut bound = 2 * window + 8;
    loop {
        let values = fill_box(bound);
        let complete = (-window..=window).all(|x| (-window..=window).all(|y| values.contains_key(&(x, y))));
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

fn fill_box(bound: i64) -> HashMap<(i64, i64), TauPoly> {
    let inside = |(x, y): (i64, i64)| x.abs() <= bound && y.abs() <= bound;
    let mut values: HashMap<(i64, i64), TauPoly> = HashMap::new();
    for t in -bound..=bound {
        let v = boundary_poly(t);
        for p in [(-1, t), (t, -1), (t, -t)] {
            if inside(p) {
                values.insert(p, v.clone());
            }
        }
    }
    let mut queue: VecDeque<(i64, i64)> = values
        .keys()
        .flat_map(|&(x, y)| [(x, y), (x + 1, y), (x, y + 1)])
        .collect();
    while let Some((a, b)) = queue.pop_front() {
        let nb = black_neighbours(a, b);
        if !nb.iter().all(|&p| inside(p)) {
            continue;
        }
        let unknown: Vec<(i64, i64)> = nb.iter().copied().filter(|p| !values.contains_key(p)).collect();
        if unknown.len() != 1 {
            continue;
        }
        let mut v = if (a, b) == (0, 0) {
            TauPoly::one()
        } else {
            TauPoly::zero()
        };
        for p in nb.iter().filter(|p| **p != unknown[0]) {
            v = &v - &values[p];
        }
        let (x, y) = unknown[0];
        values.insert((x, y), v);
        queue.extend([(x, y), (x + 1, y), (x, y + 1)]);
    }
    values
}

/// Value on one of the seeded lines, if `(x, y)` lies on one.
pub(crate) fn seed_value(x: i64, y: i64) -> Option<TauPoly> {
    if x == -1 {
        Some(boundary_poly(y))
    } else if y == -1 || x + y == 0 {
        Some(boundary_poly(x))
    } else {
        None
    }
}

/// The symmetric image nearest the origin; it needs the smallest table.
pub(crate) fn nearest_image(x: i64, y: i64) -> (i64, i64) {
    symmetry_orbit(x, y)
        .into_iter()
        .min_by_key(|&(u, v)| (u.abs().max(v.abs()), u, v))
        .expect("orbit is nonempty")
}

/// Exact `P(x, y, 1)`.
pub fn lozenge_coupling(x: i64, y: i64) -> SymbolicValue {
    let (px, py) = nearest_image(x, y);
    if let Some(p) = seed_value(px, py) {
        return SymbolicValue::Lozenge(p);
    }
    let r = px.abs().max(py.abs());
    let table = fill(r).expect("lozenge recursion fills every window");
    SymbolicValue::Lozenge(table[&(px, py)].clone())
}

/// Exact `P(−n, n, 1)`, read off the seeded line `x + y = 0`.
pub fn column_coupling(n: i64) -> SymbolicValue {
    SymbolicValue::Lozenge(boundary_poly(-n))
}
