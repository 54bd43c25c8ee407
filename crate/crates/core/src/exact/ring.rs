use std::fmt::Debug;
use std::ops::{Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Gaussian integers `a + bi`.
pub type GaussInt = Complex<BigInt>;
/// Gaussian rationals `a + bi` with `a, b` in ℚ.
pub type GaussRat = Complex<BigRational>;

/// Commutative ring with exact division where it exists.
///
/// Every element type used by the determinant routines is an integral
/// domain, so a quotient, when it exists, is unique.
pub trait Ring: Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> {
    /// Returns `self / rhs` if `rhs` divides `self` exactly.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

impl Ring for BigInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }
}

impl Ring for BigRational {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Ring for GaussInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let norm = rhs.norm_sqr();
        if norm.is_zero() {
            return None;
        }
        let num = self * rhs.conj();
        let (re, rr) = num.re.div_rem(&norm);
        let (im, ri) = num.im.div_rem(&norm);
        (rr.is_zero() && ri.is_zero()).then(|| Complex::new(re, im))
    }
}

impl Ring for GaussRat {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        Field::inv(rhs).map(|r| self * r)
    }
}

impl Field for GaussRat {
    fn inv(&self) -> Option<Self> {
        let norm = self.norm_sqr();
        if norm.is_zero() {
            return None;
        }
        Some(Complex::new(&self.re / &norm, -&self.im / &norm))
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss_rat(re: BigRational, im: BigRational) -> GaussRat {
    Complex::new(re, im)
}

/// Embeds a Gaussian integer into the Gaussian rationals.
pub fn gauss_to_rat(z: &GaussInt) -> GaussRat {
    Complex::new(
        BigRational::from_integer(z.re.clone()),
        BigRational::from_integer(z.im.clone()),
    )
}

/// Exact modulus of a Gaussian rational that is a unit times a real number.
///
/// Returns `None` when both parts are nonzero, since the modulus then
/// generally leaves ℚ.
pub fn unit_modulus(z: &GaussRat) -> Option<BigRational> {
    if z.im.is_zero() {
        Some(z.re.abs())
    } else if z.re.is_zero() {
        Some(z.im.abs())
    } else {
        None
    }
}

/// Like [`unit_modulus`] for Gaussian integers.
pub fn unit_modulus_int(z: &GaussInt) -> Option<BigInt> {
    if z.im.is_zero() {
        Some(z.re.abs())
    } else if z.re.is_zero() {
        Some(z.im.abs())
    } else {
        None
    }
}
