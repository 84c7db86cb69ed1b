//! Exact rational scalars used for exponents, times and polytope data.
//!
//! Everything that is serialized goes out as a `"p/q"` string (or `"p"` for
//! integers) so that reports stay lossless and diff-friendly.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational with machine-word numerator and denominator.
pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let neg = int.trim_start().starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = frac.parse().map_err(|_| bad())?;
        let mag = Q::from_integer(int_part.abs()) + Q::new(frac_part, scale);
        return Ok(if neg { -mag } else { mag });
    }
    s.parse::<i64>().map(Q::from_integer).map_err(|_| bad())
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn dot(a: &[Q], b: &[i64]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, &n)| acc + x * n)
}

pub fn min_q<'a>(it: impl IntoIterator<Item = &'a Q>) -> Option<Q> {
    it.into_iter().copied().min()
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

pub fn half() -> Q {
    Q::new(1, 2)
}

pub fn one() -> Q {
    Q::one()
}

/// Serde adapter: a single rational as a string.
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let v = QRepr::deserialize(d)?;
        v.into_q().map_err(de::Error::custom)
    }

    /// Accepts `"p/q"` strings as well as bare integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum QRepr {
        Int(i64),
        Str(String),
    }

    impl QRepr {
        pub(crate) fn into_q(self) -> Result<Q> {
            match self {
                QRepr::Int(n) => Ok(Q::from_integer(n)),
                QRepr::Str(s) => parse_q(&s),
            }
        }
    }
}

/// Serde adapter: a vector of rationals as strings.
pub mod serde_qvec {
    use super::serde_q::QRepr;
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&format_q(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let raw = Vec::<QRepr>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_q().map_err(de::Error::custom))
            .collect()
    }
}

/// Serde adapter: an optional rational.
pub mod serde_qopt {
    use super::serde_q::QRepr;
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&format_q(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        let raw = Option::<QRepr>::deserialize(d)?;
        raw.map(|r| r.into_q().map_err(de::Error::custom)).transpose()
    }
}
