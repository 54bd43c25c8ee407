use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::poly::Poly;
use super::precision::{bits_for_tol, fixed_to_f64, horner_fixed, inv_pi_fixed, tau_fixed};
use super::ring::{unit_modulus, GaussRat};
use crate::error::{Error, Result};
use crate::geometry::Model;

/// Polynomial in τ = √3/(2π) with rational coefficients.
pub type TauPoly = Poly<BigRational>;
/// Polynomial in 1/π with Gaussian-rational coefficients.
pub type InvPiPoly = Poly<GaussRat>;

/// Exact value of a coupling function or probability.
///
/// τ and 1/π are transcendental, so the polynomial representation is unique
/// and structural equality is equality of real (or complex) numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SymbolicValue {
    Lozenge(TauPoly),
    Domino(InvPiPoly),
}

impl SymbolicValue {
    pub fn zero(model: Model) -> Self {
        match model {
            Model::Lozenge => Self::Lozenge(Poly::zero()),
            Model::Domino => Self::Domino(Poly::zero()),
        }
    }

    pub fn one(model: Model) -> Self {
        Self::rational(model, BigRational::one())
    }

    pub fn rational(model: Model, q: BigRational) -> Self {
        match model {
            Model::Lozenge => Self::Lozenge(Poly::constant(q)),
            Model::Domino => Self::Domino(Poly::constant(Complex::new(q, BigRational::zero()))),
        }
    }

    /// `q · τ^k`.
    pub fn tau_term(q: BigRational, k: usize) -> Self {
        Self::Lozenge(Poly::monomial(q, k))
    }

    /// `c · π^{-k}`.
    pub fn inv_pi_term(c: GaussRat, k: usize) -> Self {
        Self::Domino(Poly::monomial(c, k))
    }

    pub fn model(&self) -> Model {
        match self {
            Self::Lozenge(_) => Model::Lozenge,
            Self::Domino(_) => Model::Domino,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Lozenge(p) => p.is_zero(),
            Self::Domino(p) => p.is_zero(),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            Self::Lozenge(p) => p.degree(),
            Self::Domino(p) => p.degree(),
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (Self::Lozenge(a), Self::Lozenge(b)) => Ok(Self::Lozenge(a + b)),
            (Self::Domino(a), Self::Domino(b)) => Ok(Self::Domino(a + b)),
            _ => Err(Error::ModelMismatch(self.model(), rhs.model())),
        }
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (Self::Lozenge(a), Self::Lozenge(b)) => Ok(Self::Lozenge(a - b)),
            (Self::Domino(a), Self::Domino(b)) => Ok(Self::Domino(a - b)),
            _ => Err(Error::ModelMismatch(self.model(), rhs.model())),
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (Self::Lozenge(a), Self::Lozenge(b)) => Ok(Self::Lozenge(a * b)),
            (Self::Domino(a), Self::Domino(b)) => Ok(Self::Domino(a * b)),
            _ => Err(Error::ModelMismatch(self.model(), rhs.model())),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Self::Lozenge(p) => Self::Lozenge(-p),
            Self::Domino(p) => Self::Domino(-p),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        match self {
            Self::Lozenge(p) => Self::Lozenge(p.scale(q)),
            Self::Domino(p) => Self::Domino(p.scale(&Complex::new(q.clone(), BigRational::zero()))),
        }
    }

    /// Multiplies a domino value by `i`; lozenge values are rejected.
    pub fn mul_i(&self) -> Result<Self> {
        match self {
            Self::Domino(p) => Ok(Self::Domino(
                p.scale(&Complex::new(BigRational::zero(), BigRational::one())),
            )),
            Self::Lozenge(_) => Err(Error::ModelMismatch(Model::Lozenge, Model::Domino)),
        }
    }

    /// Exact rational value if the polynomial is constant and real.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Self::Lozenge(p) if p.is_constant() => Some(p.coeff(0)),
            Self::Domino(p) if p.is_constant() && p.coeff(0).im.is_zero() => Some(p.coeff(0).re),
            _ => None,
        }
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        match self {
            Self::Lozenge(_) => true,
            Self::Domino(p) => p.coeffs().iter().all(|c| c.im.is_zero()),
        }
    }

    /// Sign of a real value: −1, 0 or 1. `None` for a non-real domino value.
    ///
    /// Nonzero values are never exactly zero (τ and 1/π are transcendental),
    /// so doubling the working precision eventually separates them from 0.
    pub fn signum(&self) -> Option<i8> {
        if self.is_zero() {
            return Some(0);
        }
        let (coeffs, x_of): (Vec<BigRational>, fn(u64) -> BigInt) = match self {
            Self::Lozenge(p) => (p.coeffs().to_vec(), tau_fixed),
            Self::Domino(p) => {
                if !self.is_real() {
                    return None;
                }
                (p.coeffs().iter().map(|c| c.re.clone()).collect(), inv_pi_fixed)
            }
        };
        let mut bits = 64;
        loop {
            let (v, err) = horner_fixed(&coeffs, &x_of(bits), bits);
            if v.abs() > err {
                return Some(if v.is_positive() { 1 } else { -1 });
            }
            bits *= 2;
        }
    }

    /// Exact modulus when it stays inside the ring.
    ///
    /// Always succeeds for lozenge values. A domino value succeeds when it is a
    /// unit (±1, ±i) times a real polynomial; otherwise `None`, and callers
    /// fall back to the numeric modulus.
    pub fn abs_exact(&self) -> Option<Self> {
        match self {
            Self::Lozenge(_) => Some(if self.signum()? < 0 { self.neg() } else { self.clone() }),
            Self::Domino(p) => {
                let all_real = p.coeffs().iter().all(|c| c.im.is_zero());
                let all_imag = p.coeffs().iter().all(|c| c.re.is_zero());
                let real = if all_real {
                    self.clone()
                } else if all_imag {
                    Self::Domino(p.map(|c| Complex::new(c.im.clone(), BigRational::zero())))
                } else {
                    return None;
                };
                Some(if real.signum()? < 0 { real.neg() } else { real })
            }
        }
    }

    /// Numeric value with absolute error below `tol` (down to `f64` resolution).
    pub fn eval(&self, tol: f64) -> Complex<f64> {
        let mut bits = bits_for_tol(tol) + 16;
        loop {
            let attempt = match self {
                Self::Lozenge(p) => {
                    let (v, err) = horner_fixed(p.coeffs(), &tau_fixed(bits), bits);
                    (Complex::new(fixed_to_f64(&v, bits), 0.0), fixed_to_f64(&err, bits))
                }
                Self::Domino(p) => {
                    let x = inv_pi_fixed(bits);
                    let re: Vec<BigRational> = p.coeffs().iter().map(|c| c.re.clone()).collect();
                    let im: Vec<BigRational> = p.coeffs().iter().map(|c| c.im.clone()).collect();
                    let (vr, er) = horner_fixed(&re, &x, bits);
                    let (vi, ei) = horner_fixed(&im, &x, bits);
                    let err = fixed_to_f64(&er, bits).max(fixed_to_f64(&ei, bits));
                    (Complex::new(fixed_to_f64(&vr, bits), fixed_to_f64(&vi, bits)), err)
                }
            };
            if attempt.1 <= tol / 2.0 || bits > 1 << 14 {
                return attempt.0;
            }
            bits += 64;
        }
    }

    /// Real part of [`SymbolicValue::eval`].
    pub fn eval_re(&self, tol: f64) -> f64 {
        self.eval(tol).re
    }
}

/// Exact determinant of a matrix of symbolic values sharing one model.
///
/// Cofactor expansion up to size 6, fraction-free elimination over the
/// polynomial ring beyond.
pub fn sym_det(m: &Matrix<SymbolicValue>) -> Result<SymbolicValue> {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let Some(first) = m.entries().next() else {
        return Err(Error::Precondition("empty symbolic matrix has no model".into()));
    };
    match first.model() {
        Model::Lozenge => {
            let mm = m.try_map(|v| match v {
                SymbolicValue::Lozenge(p) => Ok(p.clone()),
                other => Err(Error::ModelMismatch(Model::Lozenge, other.model())),
            })?;
            Ok(SymbolicValue::Lozenge(mm.det()))
        }
        Model::Domino => {
            let mm = m.try_map(|v| match v {
                SymbolicValue::Domino(p) => Ok(p.clone()),
                other => Err(Error::ModelMismatch(Model::Domino, other.model())),
            })?;
            Ok(SymbolicValue::Domino(mm.det()))
        }
    }
}

/// Like [`sym_det`] but returns 1 for the empty matrix of a known model.
pub fn sym_det_model(model: Model, m: &Matrix<SymbolicValue>) -> Result<SymbolicValue> {
    if m.rows() == 0 {
        Ok(SymbolicValue::one(model))
    } else {
        sym_det(m)
    }
}

fn fmt_rat_mag(q: &BigRational) -> String {
    format!("{}/{}", q.numer().abs(), q.denom())
}

fn fmt_const_mag(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().abs().to_string()
    } else {
        fmt_rat_mag(q)
    }
}

fn fmt_power(var: &str, k: usize) -> String {
    if k == 1 {
        var.to_string()
    } else {
        format!("{var}^{k}")
    }
}

/// Writes `terms` (sign, magnitude) joined by " + " / " - ".
fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(bool, String)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (idx, (negative, body)) in terms.iter().enumerate() {
        match (idx, negative) {
            (0, true) => write!(f, "-{body}")?,
            (0, false) => write!(f, "{body}")?,
            (_, true) => write!(f, " - {body}")?,
            (_, false) => write!(f, " + {body}")?,
        }
    }
    Ok(())
}

/// Sign and unsigned text of a Gaussian-rational coefficient.
fn gauss_parts(c: &GaussRat) -> (bool, String) {
    let imag = |q: &BigRational| match fmt_const_mag(q).as_str() {
        "1" => "i".to_string(),
        m => format!("{m}*i"),
    };
    if c.im.is_zero() {
        (c.re.is_negative(), fmt_const_mag(&c.re))
    } else if c.re.is_zero() {
        (c.im.is_negative(), imag(&c.im))
    } else {
        let sep = if c.im.is_negative() { '-' } else { '+' };
        (false, format!("({} {} {})", c.re, sep, imag(&c.im)))
    }
}

/// `coeff` in front of `power`: dropped when it is 1, bracketed unless it is
/// a plain integer or already bracketed.
fn scaled(coeff: &str, power: String) -> String {
    if coeff == "1" {
        power
    } else if coeff.starts_with('(') || coeff.chars().all(|ch| ch.is_ascii_digit()) {
        format!("{coeff}{power}")
    } else {
        format!("({coeff}){power}")
    }
}

/// Canonical string form.
///
/// Lozenge: `2/27 + (1/3)t - t^3`, with `t` = τ. Domino: `1/4 - ip`, with
/// `ip` = 1/π; a complex coefficient prints as `a`, `b*i` or `(a + b*i)`.
impl fmt::Display for SymbolicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        match self {
            Self::Lozenge(p) => {
                for (k, c) in p.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mag = fmt_const_mag(c);
                    let body = if k == 0 { mag } else { scaled(&mag, fmt_power("t", k)) };
                    terms.push((c.is_negative(), body));
                }
            }
            Self::Domino(p) => {
                for (k, c) in p.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (neg, text) = gauss_parts(c);
                    let body = if k == 0 {
                        text
                    } else {
                        scaled(&text, fmt_power("ip", k))
                    };
                    terms.push((neg, body));
                }
            }
        }
        write_terms(f, &terms)
    }
}

/// Exact modulus of a domino value that is a unit times a real constant.
pub fn constant_modulus(v: &SymbolicValue) -> Option<BigRational> {
    match v {
        SymbolicValue::Lozenge(p) if p.is_constant() => Some(p.coeff(0).abs()),
        SymbolicValue::Domino(p) if p.is_constant() => unit_modulus(&p.coeff(0)),
        _ => None,
    }
}
