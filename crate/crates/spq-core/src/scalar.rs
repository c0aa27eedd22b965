//! Dual-mode scalar: arbitrary-precision rational or 64-bit float.
//!
//! Certificates are verified over the rationals; semidefinite solves run in
//! floating point. A polynomial (or matrix) carries exactly one mode, and the
//! two are never mixed inside a single value.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Which arithmetic a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

/// A number in exact rational or 64-bit float arithmetic.
#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::one()),
            Mode::Float => Scalar::Float(1.0),
        }
    }

    pub fn from_int(v: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(v))),
            Mode::Float => Scalar::Float(v as f64),
        }
    }

    /// `num/den` in the given mode. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64, mode: Mode) -> Self {
        assert!(den != 0, "zero denominator");
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den))),
            Mode::Float => Scalar::Float(num as f64 / den as f64),
        }
    }

    pub fn from_f64(v: f64) -> Self {
        Scalar::Float(v)
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(v) => *v < 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(v) => *v > 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or_else(|| {
                // Fall back to a quotient of approximations for huge numerators.
                let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
                let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
                n / d
            }),
            Scalar::Float(v) => *v,
        }
    }

    /// Exact rational payload; panics in float mode.
    pub fn as_rational(&self) -> &BigRational {
        match self {
            Scalar::Exact(r) => r,
            Scalar::Float(_) => panic!("expected exact-mode scalar"),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(v) => Scalar::Float(v.abs()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r.clone()),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Self {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            _ => panic!("mixed scalar modes"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Self {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a - b),
            _ => panic!("mixed scalar modes"),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Self {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            _ => panic!("mixed scalar modes"),
        }
    }

    /// Division; panics on a zero divisor in exact mode.
    pub fn div(&self, rhs: &Scalar) -> Self {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a / b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a / b),
            _ => panic!("mixed scalar modes"),
        }
    }

    /// Total order; both operands must share a mode and floats must not be NaN.
    pub fn cmp_total(&self, rhs: &Scalar) -> Ordering {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => {
                a.partial_cmp(b).expect("NaN in scalar comparison")
            }
            _ => panic!("mixed scalar modes"),
        }
    }

    /// Convert to the requested mode. Exact -> float truncates; float -> exact
    /// uses the (exact) binary expansion of the double.
    pub fn convert(&self, mode: Mode) -> Self {
        match (self, mode) {
            (Scalar::Exact(_), Mode::Exact) | (Scalar::Float(_), Mode::Float) => self.clone(),
            (Scalar::Exact(r), Mode::Float) => {
                Scalar::Float(Scalar::Exact(r.clone()).to_f64())
            }
            (Scalar::Float(v), Mode::Exact) => {
                Scalar::Exact(BigRational::from_float(*v).expect("non-finite float"))
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            _ => false,
        }
    }
}
impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Best rational approximation of `x` whose denominator does not exceed
/// `max_den`, via the continued-fraction convergents of `x`.
pub fn rationalize(x: f64, max_den: u64) -> BigRational {
    assert!(x.is_finite());
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut x = x.abs();
    // Convergents p/q of the continued fraction expansion.
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::from(0), BigInt::from(1), BigInt::from(1), BigInt::from(0));
    let limit = BigInt::from(max_den);
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e18 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > limit {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = x - a;
        if frac < 1e-18 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1.is_zero() {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(sign) * p1, q1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_lossless() {
        let a = Scalar::from_ratio(12, 5, Mode::Exact);
        let b = Scalar::from_ratio(1, 3, Mode::Exact);
        let s = a.add(&b);
        assert_eq!(s, Scalar::from_ratio(41, 15, Mode::Exact));
        assert_eq!(s.sub(&b), a);
    }

    #[test]
    #[should_panic(expected = "mixed scalar modes")]
    fn mixing_modes_panics() {
        let _ = Scalar::from_int(1, Mode::Exact).add(&Scalar::from_f64(1.0));
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.5, 1000), BigRational::new(1.into(), 2.into()));
        assert_eq!(rationalize(-2.4, 1000), BigRational::new((-12).into(), 5.into()));
        let third = rationalize(1.0 / 3.0, 1_000_000);
        assert_eq!(third, BigRational::new(1.into(), 3.into()));
    }
}
