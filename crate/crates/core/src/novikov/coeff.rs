//! Coefficient rings for Novikov series.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{parse_q, Q};

/// Scalars a [`Series`](super::Series) may carry.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Treated as zero during normalization.
    fn is_negligible(&self, tol: f64) -> bool;
    fn magnitude(&self) -> f64;
    fn from_rational(x: &Q) -> Self;
    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Q::from_integer(n))
    }
    fn inv(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    /// `None` when the complex number has no representation in this ring.
    fn from_complex(z: Complex64) -> Option<Self>;
    fn to_json(&self) -> (Value, Value);
    fn from_json(re: &Value, im: Option<&Value>) -> Result<Self>;
    /// Name used in reports.
    fn mode_name() -> &'static str;
}

fn big_from_q(x: &Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

fn parse_big(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            if let Some((n, d)) = s.split_once('/') {
                let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(BigRational::new(n, d))
            } else if let Ok(n) = s.trim().parse::<BigInt>() {
                Ok(BigRational::from_integer(n))
            } else {
                Ok(big_from_q(&parse_q(s)?))
            }
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                Ok(big_from_q(&parse_q(&n.to_string())?))
            }
        }
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

fn fmt_big(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl Coefficient for BigRational {
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn from_rational(x: &Q) -> Self {
        big_from_q(x)
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        if z.im != 0.0 {
            return None;
        }
        BigRational::from_float(z.re)
    }

    fn to_json(&self) -> (Value, Value) {
        (Value::String(fmt_big(self)), Value::String("0".into()))
    }

    fn from_json(re: &Value, im: Option<&Value>) -> Result<Self> {
        if let Some(im) = im {
            if !parse_big(im)?.is_zero() {
                return Err(Error::Parse("exact coefficients must be real".into()));
            }
        }
        parse_big(re)
    }

    fn mode_name() -> &'static str {
        "exact"
    }
}

impl Coefficient for Complex64 {
    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn from_rational(x: &Q) -> Self {
        Complex64::new(*x.numer() as f64 / *x.denom() as f64, 0.0)
    }

    fn inv(&self) -> Option<Self> {
        (self.norm() > 0.0).then(|| self.inv())
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        Some(z)
    }

    fn to_json(&self) -> (Value, Value) {
        (json_f64(self.re), json_f64(self.im))
    }

    fn from_json(re: &Value, im: Option<&Value>) -> Result<Self> {
        let f = |v: &Value| -> Result<f64> {
            match v {
                Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
                Value::String(s) => Ok(crate::rational::to_f64(&parse_q(s)?)),
                other => Err(Error::Parse(format!("expected a number, found {other}"))),
            }
        };
        Ok(Complex64::new(f(re)?, im.map(f).transpose()?.unwrap_or(0.0)))
    }

    fn mode_name() -> &'static str {
        "complex"
    }
}

fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}
