//! Scalar fields used by every container in the workbench.
//!
//! Three fields are supported: exact rationals ([`Q`]), exact Gaussian
//! rationals ([`QI`]) and complex doubles ([`C64`]). Exact and numeric values
//! never meet inside one operation; promotion goes through [`Scalar::to_c64`]
//! and is always explicit at the call site.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::AlgebraError;

pub type Q = BigRational;
pub type C64 = Complex64;

/// Default numeric tolerance.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Single tolerance policy for numeric comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: DEFAULT_EPS }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        Tolerance { eps }
    }

    /// Reads `DEFECTWB_EPS`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var("DEFECTWB_EPS")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|e| e.is_finite() && *e > 0.0)
            .map(Tolerance::new)
            .unwrap_or_default()
    }
}

/// A field element. Exact fields ignore the tolerance argument.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + 'static
{
    /// True for exact arithmetic.
    const EXACT: bool;
    /// Name used in JSON documents.
    const KIND: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_q(q: &Q) -> Self;
    fn is_zero_tol(&self, eps: f64) -> bool;
    fn magnitude(&self) -> f64;
    fn inv(&self) -> Option<Self>;
    fn to_c64(&self) -> C64;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, AlgebraError>;

    fn is_exact_zero(&self) -> bool {
        self.is_zero_tol(0.0)
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for Q {
    const EXACT: bool = true;
    const KIND: &'static str = "rational";

    fn zero() -> Self {
        <Q as Zero>::zero()
    }
    fn one() -> Self {
        <Q as One>::one()
    }
    fn from_i64(n: i64) -> Self {
        qi(n)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        q(num, den)
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn is_zero_tol(&self, _eps: f64) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        q_to_f64(&self.abs())
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn to_c64(&self) -> C64 {
        C64::new(q_to_f64(self), 0.0)
    }
    fn to_json(&self) -> Value {
        Value::String(format_q(self))
    }
    fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        match v {
            Value::String(s) => parse_q(s),
            Value::Number(n) if n.is_i64() => Ok(qi(n.as_i64().unwrap_or(0))),
            other => Err(AlgebraError::Parse(format!("expected \"p/q\" string, got {other}"))),
        }
    }
}

/// Exact Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QI {
    pub re: Q,
    pub im: Q,
}

impl QI {
    pub fn new(re: Q, im: Q) -> Self {
        QI { re, im }
    }
    pub fn real(re: Q) -> Self {
        QI { re, im: <Q as Zero>::zero() }
    }
    pub fn imag(im: Q) -> Self {
        QI { re: <Q as Zero>::zero(), im }
    }
    pub fn i() -> Self {
        QI::imag(qi(1))
    }
    pub fn conj(&self) -> Self {
        QI { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Debug for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            write!(f, "{}", format_q(&self.re))
        } else {
            write!(f, "({}+{}i)", format_q(&self.re), format_q(&self.im))
        }
    }
}

impl Add for QI {
    type Output = QI;
    fn add(self, o: QI) -> QI {
        QI { re: self.re + o.re, im: self.im + o.im }
    }
}
impl AddAssign for QI {
    fn add_assign(&mut self, o: QI) {
        self.re += o.re;
        self.im += o.im;
    }
}
impl Sub for QI {
    type Output = QI;
    fn sub(self, o: QI) -> QI {
        QI { re: self.re - o.re, im: self.im - o.im }
    }
}
impl Mul for QI {
    type Output = QI;
    fn mul(self, o: QI) -> QI {
        QI {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}
impl Neg for QI {
    type Output = QI;
    fn neg(self) -> QI {
        QI { re: -self.re, im: -self.im }
    }
}

impl Scalar for QI {
    const EXACT: bool = true;
    const KIND: &'static str = "gaussian_rational";

    fn zero() -> Self {
        QI::real(<Q as Zero>::zero())
    }
    fn one() -> Self {
        QI::real(qi(1))
    }
    fn from_i64(n: i64) -> Self {
        QI::real(qi(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        QI::real(q(num, den))
    }
    fn from_q(x: &Q) -> Self {
        QI::real(x.clone())
    }
    fn is_zero_tol(&self, _eps: f64) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn magnitude(&self) -> f64 {
        q_to_f64(&self.norm_sqr()).sqrt()
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if Zero::is_zero(&n) {
            return None;
        }
        Some(QI { re: &self.re / &n, im: -(&self.im / &n) })
    }
    fn to_c64(&self) -> C64 {
        C64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
    fn to_json(&self) -> Value {
        Value::Array(vec![
            Value::String(format_q(&self.re)),
            Value::String(format_q(&self.im)),
        ])
    }
    fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                Ok(QI::new(Q::from_json(&parts[0])?, Q::from_json(&parts[1])?))
            }
            other => Ok(QI::real(Q::from_json(other)?)),
        }
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;
    const KIND: &'static str = "complex";

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }
    fn from_q(x: &Q) -> Self {
        C64::new(q_to_f64(x), 0.0)
    }
    fn is_zero_tol(&self, eps: f64) -> bool {
        self.norm() <= eps
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn inv(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(1.0 / *self)
        }
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn to_json(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }
    fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                let re = parts[0].as_f64();
                let im = parts[1].as_f64();
                match (re, im) {
                    (Some(re), Some(im)) => Ok(C64::new(re, im)),
                    _ => Err(AlgebraError::Parse(format!("bad complex {v}"))),
                }
            }
            Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
            other => Err(AlgebraError::Parse(format!("expected [re,im], got {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_json_round_trip() {
        let x = q(-3, 7);
        assert_eq!(x.to_json(), Value::String("-3/7".into()));
        assert_eq!(Q::from_json(&x.to_json()).unwrap(), x);
        assert_eq!(qi(4).to_json(), Value::String("4".into()));
    }

    #[test]
    fn gaussian_inverse() {
        let z = QI::new(q(1, 2), qi(3));
        let w = z.inv().unwrap();
        assert_eq!(z * w, QI::one());
        assert!(QI::zero().inv().is_none());
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert_eq!(parse_q(" 6/4 ").unwrap(), q(3, 2));
    }
}
