use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, Q};

pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// q-adic valuation; `Infinite` for the zero series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Q),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<Q> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => f.write_str(&format_q(v)),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            Ok(Valuation::Infinite)
        } else {
            parse_q(&s).map(Valuation::Finite).map_err(de::Error::custom)
        }
    }
}

/// A truncated Novikov series `Σ c_i q^{e_i}` known modulo `q^trunc`.
///
/// Terms are kept sorted by exponent with no exponent at or beyond `trunc`
/// and no negligible coefficient.
#[derive(Clone, Debug)]
pub struct Series<C> {
    terms: Vec<(Q, C)>,
    trunc: Q,
    tol: f64,
}

pub type ExactSeries = Series<BigRational>;
pub type ComplexSeries = Series<Complex64>;

impl<C: PartialEq> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.terms == other.terms
    }
}

impl<C: Coefficient> Series<C> {
    pub fn zero(trunc: Q) -> Self {
        Series { terms: Vec::new(), trunc, tol: DEFAULT_ZERO_TOL }
    }

    pub fn one(trunc: Q) -> Self {
        Self::constant(C::one(), trunc)
    }

    pub fn constant(c: C, trunc: Q) -> Self {
        Self::monomial(Q::zero(), c, trunc)
    }

    pub fn monomial(exp: Q, c: C, trunc: Q) -> Self {
        Self::from_terms([(exp, c)], trunc)
    }

    /// `q^exp` with unit coefficient.
    pub fn q_pow(exp: Q, trunc: Q) -> Self {
        Self::monomial(exp, C::one(), trunc)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Q, C)>, trunc: Q) -> Self {
        Self::from_terms_tol(terms, trunc, DEFAULT_ZERO_TOL)
    }

    pub fn from_terms_tol(terms: impl IntoIterator<Item = (Q, C)>, trunc: Q, tol: f64) -> Self {
        let mut acc: BTreeMap<Q, C> = BTreeMap::new();
        for (e, c) in terms {
            if e >= trunc {
                continue;
            }
            let slot = acc.entry(e).or_insert_with(C::zero);
            *slot = slot.clone() + c;
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_negligible(tol)).collect();
        Series { terms, trunc, tol }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.normalize()
    }

    /// Re-sorts, merges and drops negligible terms. Idempotent.
    pub fn normalize(self) -> Self {
        let tol = self.tol;
        Self::from_terms_tol(self.terms, self.trunc, tol)
    }

    pub fn terms(&self) -> &[(Q, C)] {
        &self.terms
    }

    pub fn trunc(&self) -> Q {
        self.trunc
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(*e),
            None => Valuation::Infinite,
        }
    }

    pub fn leading(&self) -> Option<(&Q, &C)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn coeff(&self, exp: &Q) -> C {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(exp))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| C::zero())
    }

    /// Largest coefficient magnitude, 0 for the zero series.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.magnitude()).fold(0.0, f64::max)
    }

    fn check_trunc(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    fn tol_with(&self, other: &Self) -> f64 {
        self.tol.max(other.tol)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_trunc(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_trunc(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let tol = self.tol_with(other);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.clone() + other.terms[j].1.clone();
                    if !c.is_negligible(tol) {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Series { terms: out, trunc: self.trunc.min(other.trunc), tol }
    }

    /// Sum, truncated to the coarser of the two orders.
    pub fn add_lossy(&self, other: &Self) -> Self {
        let t = self.trunc.min(other.trunc);
        self.truncate_lossy(t).add_unchecked(&other.truncate_lossy(t))
    }

    pub fn sub_lossy(&self, other: &Self) -> Self {
        self.add_lossy(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Series {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
            trunc: self.trunc,
            tol: self.tol,
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::from_terms_tol(self.terms.iter().map(|(e, c)| (*e, c.clone() * k.clone())), self.trunc, self.tol)
    }

    /// Multiplication by `q^a`: exponents and truncation both move by `a`.
    pub fn shift(&self, a: Q) -> Self {
        Series {
            terms: self.terms.iter().map(|(e, c)| (*e + a, c.clone())).collect(),
            trunc: self.trunc + a,
            tol: self.tol,
        }
    }

    fn convolve(&self, other: &Self, trunc: Q) -> Self {
        let mut acc: BTreeMap<Q, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = *ea + *eb;
                if e >= trunc {
                    break;
                }
                let slot = acc.entry(e).or_insert_with(C::zero);
                *slot = slot.clone() + ca.clone() * cb.clone();
            }
        }
        let tol = self.tol_with(other);
        Series {
            terms: acc.into_iter().filter(|(_, c)| !c.is_negligible(tol)).collect(),
            trunc,
            tol,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_trunc(other)?;
        Ok(self.convolve(other, self.trunc))
    }

    /// Product of series known to different orders; the result is known
    /// modulo `q^min(Ta + val b, Tb + val a)`.
    pub fn mul_tracking(&self, other: &Self) -> Self {
        let t = match (self.valuation(), other.valuation()) {
            (Valuation::Finite(va), Valuation::Finite(vb)) => (self.trunc + vb).min(other.trunc + va),
            (Valuation::Finite(va), Valuation::Infinite) => other.trunc + va,
            (Valuation::Infinite, Valuation::Finite(vb)) => self.trunc + vb,
            (Valuation::Infinite, Valuation::Infinite) => self.trunc + other.trunc,
        };
        self.convolve(other, t)
    }

    pub fn truncate(&self, e: Q) -> Result<Self> {
        if e > self.trunc {
            return Err(Error::TruncationUnavailable { requested: e, available: self.trunc });
        }
        Ok(self.truncate_lossy(e))
    }

    /// Like [`truncate`](Self::truncate) but clamps `e` to the known order.
    pub fn truncate_lossy(&self, e: Q) -> Self {
        let e = e.min(self.trunc);
        Series {
            terms: self.terms.iter().filter(|(x, _)| *x < e).cloned().collect(),
            trunc: e,
            tol: self.tol,
        }
    }

    /// Re-labels the known order upward. Only sound when the caller knows
    /// the missing terms vanish.
    pub fn extend_trunc(&self, e: Q) -> Self {
        Series { terms: self.terms.clone(), trunc: e.max(self.trunc), tol: self.tol }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.leading(), Some((e, c)) if e.is_zero() && c.inv().is_some())
    }

    /// Inverse of a unit `c·(1+u)`, `val u > 0`, as `c⁻¹ Σ (−u)^k`.
    pub fn invert_unit(&self) -> Result<Self> {
        let Some((e, c)) = self.leading() else {
            return Err(Error::NotAUnit { valuation: "inf".into() });
        };
        if !e.is_zero() {
            return Err(Error::NotAUnit { valuation: format_q(e) });
        }
        let c_inv = c.inv().ok_or_else(|| Error::NotAUnit { valuation: "0".into() })?;
        let u = Series::from_terms_tol(
            self.terms[1..].iter().map(|(e, x)| (*e, x.clone() * c_inv.clone())),
            self.trunc,
            self.tol,
        );
        let minus_u = u.neg();
        let mut acc = Series::one(self.trunc).with_tol(self.tol);
        let mut power = Series::one(self.trunc).with_tol(self.tol);
        loop {
            power = power.convolve(&minus_u, self.trunc);
            if power.is_zero() {
                break;
            }
            acc = acc.add_unchecked(&power);
        }
        Ok(acc.scale(&c_inv))
    }

    /// Division by a series of valuation `v`; the quotient is known modulo
    /// `q^min(Ta − v, Tb − 2v + val a)`.
    pub fn div(&self, den: &Self) -> Result<Self> {
        let Some((&v, _)) = den.leading() else {
            return Err(Error::NotAUnit { valuation: "inf".into() });
        };
        let unit = den.shift(-v);
        let inv = unit.invert_unit()?;
        Ok(self.shift(-v).mul_tracking(&inv))
    }

    /// Integer power of a unit (negative exponents invert first).
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.invert_unit()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Series::one(self.trunc).with_tol(self.tol);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.convolve(&sq, self.trunc);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.convolve(&sq, self.trunc);
            }
        }
        Ok(acc)
    }

    /// Truncated exponential `Σ x^k / k!` for `val x > 0`.
    pub fn exp(&self) -> Result<Self> {
        if let Valuation::Finite(v) = self.valuation() {
            if v <= Q::zero() {
                return Err(Error::InvalidPotential(format!(
                    "exp needs positive valuation, got {}",
                    format_q(&v)
                )));
            }
        }
        let mut acc = Series::one(self.trunc).with_tol(self.tol);
        let mut term = Series::one(self.trunc).with_tol(self.tol);
        let mut k = 1i64;
        loop {
            term = term.convolve(self, self.trunc).scale(&C::from_rational(&Q::new(1, k)));
            if term.is_zero() {
                break;
            }
            acc = acc.add_unchecked(&term);
            k += 1;
        }
        Ok(acc)
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series::from_terms_tol(self.terms.iter().map(|(e, c)| (*e, f(c))), self.trunc, self.tol)
    }

    pub fn to_complex(&self) -> ComplexSeries {
        self.map_coeffs(|c| c.to_complex())
    }

    /// Largest coefficient distance after aligning truncations.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub_lossy(other).max_magnitude()
    }
}

impl<C: Coefficient> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})q^{}", format_q(e))?;
        }
        write!(f, " mod q^{}", format_q(&self.trunc))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: String,
    re: Value,
    #[serde(default)]
    im: Option<Value>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    terms: Vec<TermRepr>,
    trunc: String,
}

impl<C: Coefficient> Serialize for Series<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = SeriesRepr {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (re, im) = c.to_json();
                    TermRepr { exp: format_q(e), re, im: Some(im) }
                })
                .collect(),
            trunc: format_q(&self.trunc),
        };
        repr.serialize(s)
    }
}

impl<'de, C: Coefficient> Deserialize<'de> for Series<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        let trunc = parse_q(&repr.trunc).map_err(de::Error::custom)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let e = parse_q(&t.exp).map_err(de::Error::custom)?;
            let c = C::from_json(&t.re, t.im.as_ref()).map_err(de::Error::custom)?;
            terms.push((e, c));
        }
        Ok(Series::from_terms(terms, trunc))
    }
}

impl<C: Coefficient> Series<C> {
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }
}
