//! Fixed-point evaluation of the transcendental constants over big integers.
//!
//! A value `v` at `bits` fractional bits is the integer `floor(v · 2^bits)`,
//! correct to within a couple of units in the last place.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Guard bits carried internally by every constant.
const GUARD: u64 = 16;

fn one_fixed(bits: u64) -> BigInt {
    BigInt::from(1) << bits
}

/// `atan(1/k)` in fixed point by its alternating Taylor series.
fn atan_inv(k: u64, bits: u64) -> BigInt {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut term = one_fixed(bits) / &k;
    let mut sum = BigInt::zero();
    let mut n = 1u64;
    let mut positive = true;
    while !term.is_zero() {
        let t = &term / BigInt::from(n);
        if positive {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &k2;
        n += 2;
        positive = !positive;
    }
    sum
}

/// π · 2^bits via Machin's formula.
pub fn pi_fixed(bits: u64) -> BigInt {
    let b = bits + GUARD;
    let pi = BigInt::from(16) * atan_inv(5, b) - BigInt::from(4) * atan_inv(239, b);
    pi >> GUARD
}

/// √3 · 2^bits.
pub fn sqrt3_fixed(bits: u64) -> BigInt {
    (BigInt::from(3) << (2 * bits)).sqrt()
}

/// 1/π · 2^bits.
pub fn inv_pi_fixed(bits: u64) -> BigInt {
    let b = bits + GUARD;
    (one_fixed(2 * b) / pi_fixed(b)) >> GUARD
}

/// τ = √3/(2π) · 2^bits.
pub fn tau_fixed(bits: u64) -> BigInt {
    let b = bits + GUARD;
    ((sqrt3_fixed(b) << b) / (pi_fixed(b) << 1)) >> GUARD
}

/// Fixed-point value of `Σ c_k x^k` and a bound on its error in ulps.
///
/// `x` must be a fixed-point number of magnitude below one with error at most
/// one ulp; the returned bound then covers both that error and the
/// truncation in every product.
pub fn horner_fixed(coeffs: &[BigRational], x: &BigInt, bits: u64) -> (BigInt, BigInt) {
    let mut acc = BigInt::zero();
    let mut err = BigInt::zero();
    let mut power = one_fixed(bits);
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc += (c.numer() * &power).div_floor(c.denom());
            let mag = c.abs().ceil().to_integer();
            err += mag * BigInt::from(k as u64 + 1) + 1u32;
        }
        power = (&power * x) >> bits;
    }
    (acc, err)
}

/// Converts a fixed-point integer to the nearest `f64`.
pub fn fixed_to_f64(v: &BigInt, bits: u64) -> f64 {
    BigRational::new(v.clone(), one_fixed(bits))
        .to_f64()
        .unwrap_or(if v.sign() == Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        })
}

/// Number of fractional bits needed so that one ulp is below `tol`.
pub fn bits_for_tol(tol: f64) -> u64 {
    let tol = if tol.is_finite() && tol > 0.0 { tol } else { 1e-300 };
    (-tol.log2()).ceil().max(0.0) as u64 + 8
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(v: BigInt, bits: u64) -> f64 {
        fixed_to_f64(&v, bits)
    }

    #[test]
    fn constants_to_double_precision() {
        assert!((val(pi_fixed(80), 80) - std::f64::consts::PI).abs() < 1e-15);
        assert!((val(sqrt3_fixed(80), 80) - 3f64.sqrt()).abs() < 1e-15);
        assert!((val(inv_pi_fixed(80), 80) - std::f64::consts::FRAC_1_PI).abs() < 1e-15);
        let tau = 3f64.sqrt() / (2.0 * std::f64::consts::PI);
        assert!((val(tau_fixed(80), 80) - tau).abs() < 1e-15);
    }

    #[test]
    fn pi_digits_at_high_precision() {
        // 50 decimal digits of π.
        let bits = 200;
        let pi = pi_fixed(bits);
        let scaled = (pi * BigInt::from(10).pow(50)) >> bits;
        assert_eq!(
            scaled.to_string(),
            "314159265358979323846264338327950288419716939937510"
        );
    }

    #[test]
    fn horner_error_bound_holds() {
        let bits = 40;
        let x = tau_fixed(bits);
        let coeffs = vec![crate::exact::ring::rat(2, 9), crate::exact::ring::rat(-1, 3)];
        let (v, err) = horner_fixed(&coeffs, &x, bits);
        let exact = 2.0 / 9.0 - 3f64.sqrt() / (6.0 * std::f64::consts::PI);
        let got = fixed_to_f64(&v, bits);
        assert!((got - exact).abs() <= fixed_to_f64(&err, bits) + 1e-15);
    }
}
