use num_traits::Zero;

use super::critical::{build_point, gradient, hessian_log, CriticalPoint};
use super::laurent::LaurentPotential;
use crate::error::{Error, Result};
use crate::novikov::{matrix, ComplexSeries, LocalSystem, Series, Valuation};
use crate::rational::Q;

const MAX_STEPS: usize = 256;
/// Series zero tolerance inside the iteration. Dropping coefficients at the
/// caller's tolerance would be amplified by later orders.
const WORKING_TOL: f64 = 1e-15;


fn min_valuation(fs: &[ComplexSeries]) -> Valuation {
    fs.iter().map(|f| f.valuation()).min().unwrap_or(Valuation::Infinite)
}

/// Lifts a leading-order critical point to one of `w` modulo `q^e`.
///
/// Works with `q^{-ε₀}W` so the log-Hessian is invertible over the
/// valuation ring; each step solves `H δ = −∇W` and sets `y ← y·exp(δ)`.
pub fn newton_lift(w: &LaurentPotential, y0: &CriticalPoint, e: Q) -> Result<CriticalPoint> {
    if !y0.nondegenerate {
        return Err(Error::DegenerateHessian);
    }
    if w.trunc < e {
        return Err(Error::TruncationUnavailable { requested: e, available: w.trunc });
    }
    let eps0 = w.min_area().ok_or_else(|| Error::InvalidPotential("empty potential".into()))?;
    if e <= eps0 {
        return Err(Error::InvalidPotential("lift order must exceed the leading area".into()));
    }
    let target = e - eps0;
    let wn = LaurentPotential::new(w.dim, w.terms.clone(), e)?.shift_areas(eps0);
    let mut y = LocalSystem::new(
        y0.y.values().iter().map(|s| s.truncate_lossy(target).extend_trunc(target).with_tol(WORKING_TOL)).collect(),
    )?;
    let mut history = Vec::new();
    for _ in 0..MAX_STEPS {
        let f = gradient(&wn, &y)?;
        let v = min_valuation(&f);
        let shifted = match v {
            Valuation::Finite(x) => Valuation::Finite(x + eps0),
            Valuation::Infinite => Valuation::Infinite,
        };
        if let (Some(prev), Valuation::Finite(x)) = (history.last(), &shifted) {
            if shifted <= *prev {
                return Err(Error::NewtonStuck(*x));
            }
        }
        if f.iter().all(|s| s.is_zero()) {
            return build_point(w, y, history);
        }
        history.push(shifted);
        let h = hessian_log(&wn, &y)?;
        let rhs: Vec<ComplexSeries> = f.iter().map(|s| s.neg()).collect();
        let delta = matrix::solve(&h.matrix, &rhs).map_err(|_| Error::DegenerateHessian)?;
        if delta.iter().any(|d| d.trunc() < target) {
            return Err(Error::DegenerateHessian);
        }
        if delta.iter().all(|d| d.is_zero()) {
            // the correction is below working precision
            return build_point(w, y, history);
        }
        let next: Result<Vec<ComplexSeries>> = y
            .values()
            .iter()
            .zip(&delta)
            .map(|(yi, d)| {
                let d0 = d.coeff(&Q::zero());
                if d0.norm() > d.tol() {
                    // A constant correction means the seed was not a leading-order zero.
                    return Err(Error::NewtonStuck(Q::zero()));
                }
                let d = Series::from_terms_tol(d.terms().iter().filter(|(a, _)| !a.is_zero()).cloned(), d.trunc(), d.tol());
                yi.mul(&d.exp()?)
            })
            .collect();
        y = LocalSystem::new(next?)?;
    }
    Err(Error::NewtonStuck(min_valuation(&gradient(&wn, &y)?).finite().unwrap_or(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{critical_points_leading, Term};
    use num_complex::Complex64;
    use crate::rational::{q, qi};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn perturbed() -> LaurentPotential {
        LaurentPotential::new(
            1,
            vec![
                Term { area: qi(1), exponent: vec![1], coef: c(1.0) },
                Term { area: qi(1), exponent: vec![-1], coef: c(1.0) },
                Term { area: q(3, 2), exponent: vec![2], coef: c(1.0) },
            ],
            qi(6),
        )
        .unwrap()
    }

    #[test]
    fn identity_lift_without_corrections() {
        let w = LaurentPotential::new(
            1,
            vec![
                Term { area: qi(1), exponent: vec![1], coef: c(1.0) },
                Term { area: qi(1), exponent: vec![-1], coef: c(1.0) },
            ],
            qi(6),
        )
        .unwrap();
        let cps = critical_points_leading(&w.leading_part().unwrap()).unwrap();
        let lifted = newton_lift(&w, &cps[1], qi(5)).unwrap();
        assert_eq!(lifted.y.values()[0].terms().len(), 1);
        assert!(lifted.history.is_empty());
        assert!(lifted.residual_order >= qi(5));
    }

    #[test]
    fn perturbed_lifts_are_distinct() {
        let w = perturbed();
        let cps = critical_points_leading(&w.leading_part().unwrap()).unwrap();
        let a = newton_lift(&w, &cps[0], qi(5)).unwrap();
        let b = newton_lift(&w, &cps[1], qi(5)).unwrap();
        assert!(a.residual_order >= qi(5) && b.residual_order >= qi(5));
        assert!(a.y.values()[0].distance(&b.y.values()[0]) > 0.5);
        // y = 1 − q^{1/2} + … to first order: (y∂)W = q(y − 1/y) + 2q^{3/2}y².
        let y = &b.y.values()[0];
        assert!((y.coeff(&q(1, 2)) + c(1.0)).norm() < 1e-12);
        for pair in b.history.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }
}
