use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::novikov::{Coefficient, LocalSystem, Series};
use crate::polytope::Polytope;
use crate::rational::{serde_q, Q};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "serde_q")]
    pub area: Q,
    pub exponent: Vec<i64>,
    pub coef: Complex64,
}

/// `Σ coef · q^area · y^exponent`, known modulo `q^trunc`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentPotential {
    pub dim: usize,
    pub terms: Vec<Term>,
    #[serde(with = "serde_q")]
    pub trunc: Q,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Key(Q, Vec<i64>);

impl LaurentPotential {
    pub fn new(dim: usize, terms: Vec<Term>, trunc: Q) -> Result<Self> {
        let mut acc: BTreeMap<Key, Complex64> = BTreeMap::new();
        for t in terms {
            if t.exponent.len() != dim {
                return Err(Error::Dimension { expected: dim, got: t.exponent.len() });
            }
            if t.area.is_negative() {
                return Err(Error::InvalidPotential("negative area".into()));
            }
            if t.area >= trunc {
                continue;
            }
            *acc.entry(Key(t.area, t.exponent)).or_insert_with(Complex64::zero) += t.coef;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| *c != Complex64::zero())
            .map(|(Key(area, exponent), coef)| Term { area, exponent, coef })
            .collect();
        Ok(LaurentPotential { dim, terms, trunc })
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_area(&self) -> Option<Q> {
        self.terms.iter().map(|t| t.area).min()
    }

    /// Adds further terms (user-supplied higher corrections).
    pub fn with_terms(&self, extra: Vec<Term>) -> Result<Self> {
        let mut all = self.terms.clone();
        all.extend(extra);
        Self::new(self.dim, all, self.trunc)
    }

    /// Multiplies by `q^{-a}`; used to work relative to the leading area.
    pub fn shift_areas(&self, a: Q) -> Self {
        LaurentPotential {
            dim: self.dim,
            terms: self.terms.iter().map(|t| Term { area: t.area - a, ..t.clone() }).collect(),
            trunc: self.trunc - a,
        }
    }

    /// Sum of the terms of minimal area.
    pub fn leading_part(&self) -> Result<Self> {
        let a = self.min_area().ok_or_else(|| Error::InvalidPotential("empty potential".into()))?;
        Ok(LaurentPotential {
            dim: self.dim,
            terms: self.terms.iter().filter(|t| t.area == a).cloned().collect(),
            trunc: self.trunc,
        })
    }

    /// `y_i ∂_{y_i} W` (0-based `i`).
    pub fn log_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(Error::Dimension { expected: self.dim, got: i + 1 });
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coef: t.coef * t.exponent[i] as f64, ..t.clone() })
            .collect();
        Self::new(self.dim, terms, self.trunc)
    }

    /// Evaluation at a unit local system; the result is known to
    /// `min(trunc, y.trunc + min area)`.
    pub fn eval<C: Coefficient>(&self, y: &LocalSystem<C>) -> Result<Series<C>> {
        if y.dim() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: y.dim() });
        }
        let tol = y.values()[0].tol();
        let known = self.min_area().map_or(self.trunc, |a| (y.trunc() + a).min(self.trunc));
        let mut acc = Series::<C>::zero(known).with_tol(tol);
        for t in &self.terms {
            let c = C::from_complex(t.coef)
                .ok_or_else(|| Error::InvalidPotential(format!("coefficient {} not representable", t.coef)))?;
            let m = y.monomial_eval(&t.exponent)?.scale(&c).shift(t.area);
            acc = acc.add_lossy(&m);
        }
        Ok(acc.truncate_lossy(known))
    }

    /// Numeric value of `Σ coef · y^ν`, ignoring `q`.
    pub fn eval_numeric(&self, y: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|t| t.coef * monomial(y, &t.exponent)).sum()
    }

    /// Gradient of `W` in log coordinates at `q = 1`.
    pub fn log_gradient_numeric(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut g = vec![Complex64::zero(); self.dim];
        for t in &self.terms {
            let m = t.coef * monomial(y, &t.exponent);
            for (gi, &e) in g.iter_mut().zip(&t.exponent) {
                *gi += m * e as f64;
            }
        }
        g
    }

    pub fn log_hessian_numeric(&self, y: &[Complex64]) -> Vec<Vec<Complex64>> {
        let n = self.dim;
        let mut h = vec![vec![Complex64::zero(); n]; n];
        for t in &self.terms {
            let m = t.coef * monomial(y, &t.exponent);
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += m * (t.exponent[i] * t.exponent[j]) as f64;
                }
            }
        }
        h
    }
}

pub(crate) fn monomial(y: &[Complex64], nu: &[i64]) -> Complex64 {
    y.iter().zip(nu).map(|(yi, &k)| yi.powi(k as i32)).product()
}

/// One term `q^{⟨λ,ν_j⟩−c_j} y^{ν_j}` per facet.
pub fn toric_potential(p: &Polytope, lambda: &[Q], trunc: Q) -> Result<LaurentPotential> {
    if lambda.len() != p.dim() {
        return Err(Error::Dimension { expected: p.dim(), got: lambda.len() });
    }
    if !p.is_interior(lambda) {
        return Err(Error::InvalidGeometry("fibre point is not interior".into()));
    }
    let gaps = p.facet_gaps(lambda);
    let terms = p
        .normals()
        .iter()
        .zip(gaps)
        .map(|(n, a)| Term { area: a, exponent: n.clone(), coef: Complex64::new(1.0, 0.0) })
        .collect();
    LaurentPotential::new(p.dim(), terms, trunc)
}

/// Leading potential of the exceptional local model,
/// `q^ε(y₁ + … + yₙ + y₁⋯y_{n₊}/(y_{n₊+1}⋯yₙ))` with `n = n₊ + n₋ − 1`.
pub fn exceptional_potential(n_plus: usize, n_minus: usize, eps: Q, trunc: Q) -> Result<LaurentPotential> {
    if n_minus == 0 || n_plus <= n_minus {
        return Err(Error::InvalidSignature { n_plus, n_minus });
    }
    let n = n_plus + n_minus - 1;
    let one = Complex64::new(1.0, 0.0);
    let mut terms: Vec<Term> =
        (0..n).map(|i| Term { area: eps, exponent: (0..n).map(|j| i64::from(i == j)).collect(), coef: one }).collect();
    terms.push(Term { area: eps, exponent: (0..n).map(|j| if j < n_plus { 1 } else { -1 }).collect(), coef: one });
    LaurentPotential::new(n, terms, trunc)
}

/// Maslov index `2Σd_j` of the Blaschke disk of multidegree `d`.
pub fn blaschke_maslov(degrees: &[u64]) -> u64 {
    2 * degrees.iter().sum::<u64>()
}
