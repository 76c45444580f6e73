use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar with arbitrary-precision integers. Always stored
/// reduced, with a positive denominator.
pub type Rational = BigRational;

/// Default relative tolerance used for float-mode comparisons of squared
/// norms. Exact mode never uses a tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Arithmetic mode. A vector or functional is homogeneous in mode; mixing
/// modes in one operation is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

/// A scalar in one of the two modes. All arithmetic is exact in exact mode;
/// float mode exists for constructions that require square roots.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(Rational::zero()),
            Mode::Float => Scalar::Float(0.0),
        }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Exact(Rational::from_integer(BigInt::from(n)))
    }

    /// Exact rational p/q. Panics if `q == 0`; use for literals in tests and
    /// constructions only.
    pub fn ratio(p: i64, q: i64) -> Scalar {
        Scalar::Exact(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn float(v: f64) -> Scalar {
        Scalar::Float(v)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Exact(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Float(v) => {
                if *v == 0.0 {
                    0
                } else if *v > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(v) => Scalar::Float(v.abs()),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(v) => *v,
        }
    }

    pub fn require_mode(&self, mode: Mode) -> Result<()> {
        if self.mode() == mode {
            Ok(())
        } else {
            Err(Error::ModeMismatch)
        }
    }

    /// Total order within a mode. Panics on a mode mix, which is an internal
    /// bug: public entry points validate homogeneity first.
    pub fn cmp_same_mode(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => {
                a.partial_cmp(b).expect("non-finite float scalar")
            }
            _ => panic!("scalar mode mismatch"),
        }
    }

    /// Equality used for norming decisions: exact equality in exact mode,
    /// relative tolerance on the values in float mode.
    pub fn norm_eq(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => {
                (a - b).abs() <= tol * 1.0_f64.max(a.abs()).max(b.abs())
            }
            _ => false,
        }
    }

    /// `self <= other` up to the float-mode tolerance.
    pub fn le_tol(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a <= b,
            (Scalar::Float(a), Scalar::Float(b)) => {
                *a <= *b + tol * 1.0_f64.max(a.abs()).max(b.abs())
            }
            _ => false,
        }
    }

    pub fn as_rational(&self) -> Result<&Rational> {
        match self {
            Scalar::Exact(r) => Ok(r),
            Scalar::Float(_) => Err(Error::ModeMismatch),
        }
    }
}

/// Parses an exact rational from "p" or "p/q" with arbitrary-precision parts.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        None => {
            let p = BigInt::from_str(s.trim()).map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a $op b),
                    _ => panic!("scalar mode mismatch"),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
// Division panics on an exact zero divisor, like integer division.
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
