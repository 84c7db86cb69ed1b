use serde::{Deserialize, Serialize};

use super::coeff::Coefficient;
use super::series::Series;
use crate::error::{Error, Result};
use crate::rational::Q;

/// A homomorphism `π₁(T^n) → Λ^×`, one unit per generator of `H¹`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coefficient")]
pub struct LocalSystem<C: Coefficient> {
    values: Vec<Series<C>>,
}

impl<C: Coefficient> LocalSystem<C> {
    pub fn new(values: Vec<Series<C>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        let t = values[0].trunc();
        for v in &values {
            if v.trunc() != t {
                return Err(Error::TruncationMismatch(t, v.trunc()));
            }
            if !v.is_unit() {
                return Err(Error::NotAUnit { valuation: v.valuation().to_string() });
            }
        }
        Ok(LocalSystem { values })
    }

    /// Constant local system with the given leading coefficients.
    pub fn constant(coeffs: &[C], trunc: Q) -> Result<Self> {
        Self::new(coeffs.iter().map(|c| Series::constant(c.clone(), trunc)).collect())
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Series<C>] {
        &self.values
    }

    pub fn trunc(&self) -> Q {
        self.values[0].trunc()
    }

    pub fn leading_coeffs(&self) -> Vec<C> {
        self.values.iter().map(|v| v.coeff(&Q::from_integer(0))).collect()
    }

    /// `Π y_i^{ν_i}`.
    pub fn monomial_eval(&self, nu: &[i64]) -> Result<Series<C>> {
        if nu.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: nu.len() });
        }
        let tol = self.values[0].tol();
        let mut acc = Series::one(self.trunc()).with_tol(tol);
        for (y, &k) in self.values.iter().zip(nu) {
            if k != 0 {
                acc = acc.mul(&y.powi(k)?)?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::ExactSeries;
    use crate::rational::qi;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn monomials() {
        let y = LocalSystem::constant(&[r(1), r(1)], qi(3)).unwrap();
        assert!(y.monomial_eval(&[3, -2]).unwrap().is_one());
        let y = LocalSystem::constant(&[r(2), r(1)], qi(3)).unwrap();
        assert_eq!(y.monomial_eval(&[-1, 0]).unwrap().coeff(&qi(0)), BigRational::new(BigInt::from(1), BigInt::from(2)));
        let one_plus_q = ExactSeries::from_terms([(qi(0), r(1)), (qi(1), r(1))], qi(3));
        let y = LocalSystem::new(vec![one_plus_q, ExactSeries::one(qi(3))]).unwrap();
        let sq = y.monomial_eval(&[2, 0]).unwrap();
        assert_eq!(sq, ExactSeries::from_terms([(qi(0), r(1)), (qi(1), r(2)), (qi(2), r(1))], qi(3)));
        assert!(y.monomial_eval(&[1]).is_err());
    }

    #[test]
    fn rejects_non_units() {
        assert!(LocalSystem::new(vec![ExactSeries::q_pow(qi(1), qi(3))]).is_err());
    }
}
