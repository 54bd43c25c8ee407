//! Characteristic polynomials of integer matrices by reduction modulo many
//! word-size primes and Chinese remaindering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::Matrix;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes descending from `2^62`.
fn primes() -> impl Iterator<Item = u64> {
    (1..).map(|k| (1u64 << 62) - 2 * k + 1).filter(|&n| is_prime(n))
}

/// Characteristic polynomial modulo `p` via Hessenberg reduction.
fn char_poly_mod(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let pinv = pow_mod(h[m][m - 1], p - 2, p);
        for i in m + 1..n {
            if h[i][m - 1] == 0 {
                continue;
            }
            let u = mul_mod(h[i][m - 1], pinv, p);
            let pivot_row = h[m].clone();
            for (x, &y) in h[i].iter_mut().zip(&pivot_row) {
                *x = (*x + p - mul_mod(u, y, p)) % p;
            }
            for row in h.iter_mut() {
                let t = mul_mod(u, row[i], p);
                row[m] = (row[m] + t) % p;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let kk = k - 1;
        let mut next = vec![0u64; k + 1];
        for (d, &c) in polys[k - 1].iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            next[d] = (next[d] + p - mul_mod(h[kk][kk], c, p)) % p;
        }
        let mut sub = 1u64;
        for i in (0..kk).rev() {
            sub = mul_mod(sub, h[i + 1][i], p);
            if sub == 0 {
                break;
            }
            let coef = mul_mod(h[i][kk], sub, p);
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = (next[d] + p - mul_mod(coef, c, p)) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().expect("nonempty")
}

/// Bits in a bound on every coefficient of the characteristic polynomial:
/// each is a sum of at most `2^n` principal minors, each bounded by the
/// product of its row norms.
fn coefficient_bits(a: &Matrix<BigInt>) -> u64 {
    let mut bits = a.rows() as u64 + 2;
    for i in 0..a.rows() {
        let sq: BigInt = a.row(i).iter().map(|x| x * x).sum();
        bits += sq.bits().div_ceil(2) + 1;
    }
    bits
}

/// Coefficients `c_0..c_n` of `det(zI − A)` for an integer matrix.
pub fn char_poly_int(a: &Matrix<BigInt>) -> Vec<BigInt> {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let need = coefficient_bits(a) + 1;
    let mut modulus = BigInt::one();
    let mut acc = vec![BigInt::zero(); n + 1];
    for p in primes() {
        if modulus.bits() > need {
            break;
        }
        let pb = BigInt::from(p);
        let red: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                a.row(i)
                    .iter()
                    .map(|x| x.mod_floor(&pb).to_u64().expect("reduced"))
                    .collect()
            })
            .collect();
        let cp = char_poly_mod(&red, p);
        let minv = BigInt::from(pow_mod((&modulus % &pb).to_u64().expect("reduced"), p - 2, p));
        for (x, &r) in acc.iter_mut().zip(&cp) {
            let t = ((BigInt::from(r) - &*x) * &minv).mod_floor(&pb);
            *x += &modulus * t;
        }
        modulus *= pb;
    }
    let half = &modulus / 2;
    acc.into_iter()
        .map(|x| if x > half { x - &modulus } else { x })
        .collect()
}
