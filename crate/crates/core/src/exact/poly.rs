use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ring::{Field, Ring};

/// Univariate polynomial over a field, stored densely by increasing power.
///
/// Trailing zero coefficients are never stored, so structural equality is
/// equality of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Field> Poly<C> {
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c · x^power`
    pub fn monomial(c: C, power: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); power + 1];
        coeffs[power] = c;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> C {
        self.coeffs.get(power).cloned().unwrap_or_else(C::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<D: Field>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Polynomial long division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let lead_inv = divisor.leading()?.inv()?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() < divisor.coeffs.len() {
            return Some((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].clone() * lead_inv.clone();
            if q.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - q.clone() * d.clone();
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Some((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Evaluates at a point of the coefficient field (Horner).
    pub fn eval_at(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

impl<C: Field> Zero for Poly<C> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: Field> One for Poly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Field> Add<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<C: Field> Sub<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<C: Field> Mul<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<C: Field> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_by_value {
    ($tr:ident, $m:ident) => {
        impl<C: Field> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
        impl<C: Field> $tr<&Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: &Poly<C>) -> Poly<C> {
                (&self).$m(rhs)
            }
        }
    };
}
forward_by_value!(Add, add);
forward_by_value!(Sub, sub);
forward_by_value!(Mul, mul);

impl<C: Field> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Field> Ring for Poly<C> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(rhs)?;
        r.is_zero().then_some(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::rat;
    use num_rational::BigRational;

    fn p(cs: &[(i64, i64)]) -> Poly<BigRational> {
        Poly::from_coeffs(cs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let a = p(&[(1, 3), (0, 1), (0, 1)]);
        assert_eq!(a.degree(), Some(0));
        assert_eq!(a, Poly::constant(rat(1, 3)));
        assert!(p(&[(0, 1)]).is_zero());
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = p(&[(1, 2), (-3, 1), (1, 5)]);
        let b = p(&[(2, 1), (1, 7)]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!((&prod + &Poly::one()).div_exact(&b), None);
    }

    #[test]
    fn cancellation_to_zero() {
        let a = p(&[(1, 3), (1, 1)]);
        let t = Poly::monomial(rat(1, 1), 1);
        assert_eq!(&a - &t, Poly::constant(rat(1, 3)));
        assert!((&a - &a).is_zero());
    }
}
