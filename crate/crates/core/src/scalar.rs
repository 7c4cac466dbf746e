//! The coefficient ring `Z[β]` and numeric evaluation of its elements.
//!
//! [`ScalarPoly`] stores integer coefficients lowest degree first with no
//! trailing zeros, so structural equality is polynomial equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ScalarPoly {
    coeffs: Vec<BigInt>,
}

impl ScalarPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ScalarPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64s(&[c])
    }

    /// The indeterminate β.
    pub fn beta() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `c β^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = BigInt::from(c);
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ScalarPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    /// Division with remainder over `Z`. Requires the divisor's leading
    /// coefficient to divide every leading coefficient met along the way.
    pub fn div_rem(&self, divisor: &ScalarPoly) -> Result<(ScalarPoly, ScalarPoly)> {
        let dd = divisor.degree().ok_or(Error::InexactDivision)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = rem[top].clone();
            if !c.is_zero() {
                if !(&c % &lead).is_zero() {
                    return Err(Error::InexactDivision);
                }
                let q = &c / &lead;
                let shift = top - dd;
                for (k, dc) in divisor.coeffs.iter().enumerate() {
                    rem[shift + k] -= &q * dc;
                }
                quot[shift] = q;
            }
            rem.pop();
        }
        Ok((ScalarPoly::from_coeffs(quot), ScalarPoly::from_coeffs(rem)))
    }

    /// Exact quotient; fails if `divisor` does not divide `self` in `Z[β]`.
    pub fn div_exact(&self, divisor: &ScalarPoly) -> Result<ScalarPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn eval_rational(&self, beta: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * beta + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, beta: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * beta + big_to_f64(c))
    }

    pub fn eval_complex(&self, beta: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * beta + big_to_f64(c))
    }

    /// Evaluation modulo a prime `p < 2^32`.
    pub fn eval_mod(&self, beta: u64, p: u64) -> u64 {
        let pb = BigInt::from(p);
        self.coeffs.iter().rev().fold(0u64, |acc, c| {
            let r = ((c % &pb) + &pb) % &pb;
            (acc * beta % p + r.to_u64().unwrap_or(0)) % p
        })
    }

    /// Coefficients as decimal strings, lowest degree first.
    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_coeff_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        items
            .iter()
            .map(|s| {
                s.as_ref()
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidParameters(format!("bad coefficient {:?}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_coeffs)
    }
}

pub(crate) fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(if c.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

impl Zero for ScalarPoly {
    fn zero() -> Self {
        ScalarPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for ScalarPoly {
    fn one() -> Self {
        Self::constant(1)
    }
}

impl From<i64> for ScalarPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn add(self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, rhs: &ScalarPoly) -> ScalarPoly {
        if self.is_zero() || rhs.is_zero() {
            return ScalarPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ScalarPoly::from_coeffs(out)
    }
}

impl Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        ScalarPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        -&self
    }
}

impl AddAssign<&ScalarPoly> for ScalarPoly {
    fn add_assign(&mut self, rhs: &ScalarPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        *self = ScalarPoly::from_coeffs(std::mem::take(&mut self.coeffs));
    }
}

impl SubAssign<&ScalarPoly> for ScalarPoly {
    fn sub_assign(&mut self, rhs: &ScalarPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        *self = ScalarPoly::from_coeffs(std::mem::take(&mut self.coeffs));
    }
}

impl MulAssign<&ScalarPoly> for ScalarPoly {
    fn mul_assign(&mut self, rhs: &ScalarPoly) {
        *self = &*self * rhs;
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<ScalarPoly> for ScalarPoly {
            type Output = ScalarPoly;
            fn $f(self, rhs: ScalarPoly) -> ScalarPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&ScalarPoly> for ScalarPoly {
            type Output = ScalarPoly;
            fn $f(self, rhs: &ScalarPoly) -> ScalarPoly {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one() && k > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "β")?,
                _ => write!(f, "β^{k}")?,
            }
        }
        Ok(())
    }
}

/// A numeric value of β together with one of the two roots `q` of
/// `q + 1/q = β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QValue {
    pub beta: f64,
    pub q: Complex64,
}

impl QValue {
    pub fn from_q(q: Complex64) -> Self {
        QValue { beta: (q + q.inv()).re, q }
    }

    /// `β = q + 1/q` including a possible imaginary part (for `q` off the
    /// unit circle and off the real line).
    pub fn beta_complex(&self) -> Complex64 {
        self.q + self.q.inv()
    }
}

/// Solves `q + 1/q = β`. With `upper` set the root with non-negative
/// imaginary part is returned (the larger one when both are real);
/// otherwise its inverse.
pub fn q_from_beta(beta: f64, upper: bool) -> QValue {
    let disc = beta * beta - 4.0;
    let q = if disc >= 0.0 {
        let s = disc.sqrt();
        let big = if beta >= 0.0 { (beta + s) / 2.0 } else { (beta - s) / 2.0 };
        Complex64::new(big, 0.0)
    } else {
        Complex64::new(beta / 2.0, (-disc).sqrt() / 2.0)
    };
    let q = if upper { q } else { q.inv() };
    QValue { beta, q }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ScalarPoly {
        ScalarPoly::from_i64s(c)
    }

    #[test]
    fn normalises_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
    }

    #[test]
    fn arithmetic() {
        let b = ScalarPoly::beta();
        let q = &(&b * &b) - &ScalarPoly::one();
        assert_eq!(q, p(&[-1, 0, 1]));
        assert_eq!(&q + &p(&[1]), p(&[0, 0, 1]));
        assert_eq!(-&b, p(&[0, -1]));
        assert_eq!(b.pow(3), p(&[0, 0, 0, 1]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 1]);
        let d = p(&[-1, 1]);
        assert_eq!(a.div_exact(&d).unwrap(), p(&[1, 1]));
        assert_eq!(p(&[1, 0, 1]).div_exact(&d), Err(Error::InexactDivision));
        assert_eq!(p(&[1, 2]).div_exact(&p(&[0, 2])), Err(Error::InexactDivision));
        assert_eq!(p(&[2, 4]).div_exact(&p(&[2])).unwrap(), p(&[1, 2]));
    }

    #[test]
    fn evaluation() {
        let a = p(&[3, -2, 1]);
        assert_eq!(a.eval_f64(2.0), 3.0);
        let r = BigRational::new(7.into(), 3.into());
        assert_eq!(a.eval_rational(&r), BigRational::new(34.into(), 9.into()));
        assert_eq!(a.eval_mod(5, 7), (3 + 7 * 7 - 10 + 25) % 7);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "β^2 - 1");
        assert_eq!(p(&[0, -1]).to_string(), "-β");
        assert_eq!(p(&[4, 0, 1]).to_string(), "β^2 + 4");
        assert_eq!(ScalarPoly::zero().to_string(), "0");
    }

    #[test]
    fn coefficient_strings_roundtrip() {
        let a = p(&[0, -1, 12]);
        let s = a.to_coeff_strings();
        assert_eq!(s, vec!["0", "-1", "12"]);
        assert_eq!(ScalarPoly::from_coeff_strings(&s).unwrap(), a);
    }

    #[test]
    fn q_roots() {
        let q = q_from_beta(0.0, true);
        assert!((q.q - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let q = q_from_beta(2.5, true);
        assert!((q.q.re - 2.0).abs() < 1e-15);
        let q = q_from_beta(-2.5, true);
        assert!((q.q.re + 2.0).abs() < 1e-15);
        for &b in &[-3.0, -1.0, 0.3, 1.99, 2.0, 3.0] {
            for up in [true, false] {
                let v = q_from_beta(b, up);
                assert!((v.beta_complex() - Complex64::new(b, 0.0)).norm() < 1e-12);
            }
        }
    }
}
