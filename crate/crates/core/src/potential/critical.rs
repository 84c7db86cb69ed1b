use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPotential;
use crate::error::{Error, Result};
use crate::novikov::{matrix, Coefficient, ComplexSeries, LocalSystem, Series, Valuation, DEFAULT_ZERO_TOL};
use crate::rational::{serde_q, Q};

pub const NEWTON_RESIDUAL: f64 = 1e-12;
pub const DEDUP_DISTANCE: f64 = 1e-6;
pub const MAX_ROOT_ORDER: usize = 8;
pub const MAX_SEEDS: usize = 20_000;
/// Relative rounding floor for residual coefficients.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub y: LocalSystem<Complex64>,
    pub hessian_det: ComplexSeries,
    pub nondegenerate: bool,
    /// Every log-derivative vanishes modulo `q^residual_order`.
    #[serde(with = "serde_q")]
    pub residual_order: Q,
    /// Residual valuation before each lifting step.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<Valuation>,
}

impl CriticalPoint {
    pub fn leading_coeffs(&self) -> Vec<Complex64> {
        self.y.leading_coeffs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "C: Coefficient")]
pub struct Hessian<C: Coefficient> {
    pub matrix: Vec<Vec<Series<C>>>,
    pub det: Series<C>,
}

/// `(y_i∂_i)(y_j∂_j)W` at `y`, and its determinant.
pub fn hessian_log<C: Coefficient>(w: &LaurentPotential, y: &LocalSystem<C>) -> Result<Hessian<C>> {
    let n = w.dim;
    let mut m = Vec::with_capacity(n);
    for i in 0..n {
        let di = w.log_derivative(i)?;
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(di.log_derivative(j)?.eval(y)?);
        }
        m.push(row);
    }
    let t = m.iter().flatten().map(|s| s.trunc()).min().expect("dim ≥ 1");
    let m: Vec<Vec<Series<C>>> = m.into_iter().map(|r| r.into_iter().map(|s| s.truncate_lossy(t)).collect()).collect();
    let det = matrix::det(&m)?;
    Ok(Hessian { matrix: m, det })
}

fn det_numeric(h: &[Vec<Complex64>]) -> Complex64 {
    let n = h.len();
    DMatrix::from_fn(n, n, |i, j| h[i][j]).determinant()
}

/// Recognizes `Σ_i y_i + y^ν`, `ν ∈ {±1}ⁿ`, all coefficients 1.
fn exceptional_shape(w0: &LaurentPotential) -> Option<Vec<i64>> {
    let n = w0.dim;
    if w0.terms.len() != n + 1 || w0.terms.iter().any(|t| t.coef != Complex64::new(1.0, 0.0)) {
        return None;
    }
    let mut seen = vec![false; n];
    let mut nu = None;
    for t in &w0.terms {
        let support: Vec<usize> = (0..n).filter(|&i| t.exponent[i] != 0).collect();
        if support.len() == 1 && t.exponent[support[0]] == 1 && !seen[support[0]] {
            seen[support[0]] = true;
        } else if nu.is_none() && t.exponent.iter().all(|&e| e == 1 || e == -1) {
            nu = Some(t.exponent.clone());
        } else {
            return None;
        }
    }
    seen.iter().all(|&s| s).then_some(nu?)
}

/// Roots of `y_i = −ν_i m`, `m^{p−r−1} = (−1)^p` with `p`, `r` the numbers of
/// `+1` and `−1` entries of `ν`.
fn exceptional_roots(nu: &[i64]) -> Option<Vec<Vec<Complex64>>> {
    let p = nu.iter().filter(|&&e| e == 1).count() as i64;
    let r = nu.iter().filter(|&&e| e == -1).count() as i64;
    let k = p - r - 1;
    if k <= 0 {
        return None;
    }
    let roots = (0..k)
        .map(|j| {
            let m = Complex64::from_polar(1.0, PI * (p + 2 * j) as f64 / k as f64);
            nu.iter().map(|&e| -m * e as f64).collect()
        })
        .collect();
    Some(roots)
}

/// Aberth–Ehrlich simultaneous iteration; `coeffs[k]` multiplies `y^k`.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let mut zeros = 0;
    while c.first().is_some_and(|x| x.norm() == 0.0) {
        c.remove(0);
        zeros += 1;
    }
    let deg = c.len().saturating_sub(1);
    let mut out = vec![Complex64::zero(); zeros];
    if deg == 0 {
        return out;
    }
    let lead = c[deg];
    let radius = 1.0 + c[..deg].iter().map(|x| (x / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius * 0.5 + 0.25, 2.0 * PI * k as f64 / deg as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    out.extend(z);
    out
}

fn solve_dim1(w0: &LaurentPotential) -> Vec<Vec<Complex64>> {
    let deriv: Vec<(i64, Complex64)> =
        w0.terms.iter().map(|t| (t.exponent[0], t.coef * t.exponent[0] as f64)).filter(|(_, c)| c.norm() > 0.0).collect();
    let Some(lo) = deriv.iter().map(|(e, _)| *e).min() else { return Vec::new() };
    let hi = deriv.iter().map(|(e, _)| *e).max().unwrap();
    let mut poly = vec![Complex64::zero(); (hi - lo + 1) as usize];
    for (e, c) in deriv {
        poly[(e - lo) as usize] += c;
    }
    polynomial_roots(&poly).into_iter().filter(|r| r.norm() > 1e-9).map(|r| vec![r]).collect()
}

fn newton_log(w0: &LaurentPotential, seed: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = w0.dim;
    let mut z: Vec<Complex64> = seed.iter().map(|y| y.ln()).collect();
    for _ in 0..80 {
        let y: Vec<Complex64> = z.iter().map(|x| x.exp()).collect();
        let g = w0.log_gradient_numeric(&y);
        let res = g.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if !res.is_finite() {
            return None;
        }
        if res <= NEWTON_RESIDUAL {
            return y.iter().all(|v| v.norm() > 1e-8 && v.norm() < 1e8).then_some(y);
        }
        let h = w0.log_hessian_numeric(&y);
        let jm = DMatrix::from_fn(n, n, |i, j| h[i][j]);
        let rhs = DVector::from_iterator(n, g.iter().map(|x| -x));
        let step = jm.lu().solve(&rhs)?;
        for (zi, s) in z.iter_mut().zip(step.iter()) {
            *zi += s;
        }
    }
    None
}

fn seed_grid(n: usize) -> Vec<Vec<Complex64>> {
    let mut seeds = Vec::new();
    for k in 1..=MAX_ROOT_ORDER {
        let count = k.checked_pow(n as u32).unwrap_or(usize::MAX);
        if seeds.len() + count > MAX_SEEDS {
            break;
        }
        for idx in 0..count {
            let mut rest = idx;
            let seed = (0..n)
                .map(|_| {
                    let j = rest % k;
                    rest /= k;
                    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64)
                })
                .collect();
            seeds.push(seed);
        }
    }
    seeds
}

fn solve_general(w0: &LaurentPotential) -> Result<Vec<Vec<Complex64>>> {
    let seeds = seed_grid(w0.dim);
    let found: Vec<Option<Vec<Complex64>>> = seeds.par_iter().map(|s| newton_log(w0, s)).collect();
    let sols: Vec<Vec<Complex64>> = found.into_iter().flatten().collect();
    if sols.is_empty() {
        return Err(Error::NoConvergence { seeds_tried: seeds.len() });
    }
    Ok(sols)
}

fn dedup(points: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.iter().zip(&p).all(|(a, b)| (a - b).norm() < DEDUP_DISTANCE)) {
            out.push(p);
        }
    }
    out
}

fn sort_key(p: &[Complex64]) -> Vec<(i64, i64)> {
    p.iter().map(|z| ((z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64)).collect()
}

/// Largest summand of any log-derivative at each exponent. Rounding error
/// in a residual coefficient is relative to this, not to 1.
fn summand_scale(w: &LaurentPotential, y: &LocalSystem<Complex64>) -> Result<BTreeMap<Q, f64>> {
    let mut scale = BTreeMap::new();
    for t in &w.terms {
        let nu = t.exponent.iter().map(|e| e.unsigned_abs()).max().unwrap_or(0) as f64;
        for (e, c) in y.monomial_eval(&t.exponent)?.terms() {
            let slot = scale.entry(e + t.area).or_insert(0.0f64);
            *slot = slot.max(t.coef.norm() * nu * c.norm());
        }
    }
    Ok(scale)
}

/// Log-derivatives of `w` at `y`, with coefficients at rounding level
/// (below `NOISE_FLOOR` times the summand scale at that exponent, or
/// times 1) dropped.
pub(crate) fn gradient(w: &LaurentPotential, y: &LocalSystem<Complex64>) -> Result<Vec<ComplexSeries>> {
    let scale = summand_scale(w, y)?;
    (0..w.dim)
        .map(|i| {
            let f = w.log_derivative(i)?.eval(y)?;
            let kept = f
                .terms()
                .iter()
                .filter(|(e, c)| c.norm() > NOISE_FLOOR * scale.get(e).copied().unwrap_or(0.0).max(1.0))
                .cloned();
            Ok(Series::from_terms_tol(kept, f.trunc(), f.tol()))
        })
        .collect()
}

/// Order to which every log-derivative of `w` vanishes at `y`.
pub(crate) fn residual_order(w: &LaurentPotential, y: &LocalSystem<Complex64>) -> Result<(Q, Valuation)> {
    let mut order = w.trunc;
    let mut val = Valuation::Infinite;
    for f in gradient(w, y)? {
        order = order.min(f.trunc());
        if let Valuation::Finite(v) = f.valuation() {
            order = order.min(v);
        }
        val = val.min(f.valuation());
    }
    Ok((order, val))
}

pub(crate) fn build_point(w: &LaurentPotential, y: LocalSystem<Complex64>, history: Vec<Valuation>) -> Result<CriticalPoint> {
    let hess = hessian_log(w, &y)?;
    let a = w.min_area().unwrap_or_else(Q::zero);
    let expected = a * Q::from_integer(w.dim as i64);
    let lead = w.leading_part()?;
    let h0 = lead.log_hessian_numeric(&y.leading_coeffs());
    let nondegenerate = det_numeric(&h0).norm() > DEFAULT_ZERO_TOL
        && hess.det.valuation() == Valuation::Finite(expected);
    let (residual_order, _) = residual_order(w, &y)?;
    Ok(CriticalPoint { y, hessian_det: hess.det, nondegenerate, residual_order, history })
}

/// All critical points of a potential concentrated at one area.
pub fn critical_points_leading(w0: &LaurentPotential) -> Result<Vec<CriticalPoint>> {
    let a = w0.min_area().ok_or_else(|| Error::InvalidPotential("empty potential".into()))?;
    if w0.terms.iter().any(|t| t.area != a) {
        return Err(Error::InvalidPotential("potential is not concentrated at one area".into()));
    }
    let raw = if let Some(roots) = exceptional_shape(w0).and_then(|nu| exceptional_roots(&nu)) {
        roots
    } else if w0.dim == 1 {
        solve_dim1(w0)
    } else {
        solve_general(w0)?
    };
    let mut pts = dedup(raw);
    pts.sort_by_key(|p| sort_key(p));
    let trunc = w0.trunc - a;
    pts.into_iter()
        .map(|p| {
            let y = LocalSystem::new(p.iter().map(|c| Series::constant(*c, trunc)).collect())?;
            build_point(w0, y, Vec::new())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{shapes, Polytope};
    use crate::potential::toric_potential;
    use crate::rational::{q, qi};

    fn p1(a1: Q, a2: Q) -> LaurentPotential {
        let seg = Polytope::from_facets(1, vec![vec![1], vec![-1]], vec![qi(0), -(a1 + a2)]).unwrap();
        toric_potential(&seg, &[a1], qi(10)).unwrap()
    }

    #[test]
    fn p1_equal_areas() {
        let w = p1(qi(1), qi(1));
        let cps = critical_points_leading(&w.leading_part().unwrap()).unwrap();
        assert_eq!(cps.len(), 2);
        let ys: Vec<f64> = cps.iter().map(|c| c.leading_coeffs()[0].re).collect();
        assert!((ys[0] + 1.0).abs() < 1e-12 && (ys[1] - 1.0).abs() < 1e-12);
        assert!(cps.iter().all(|c| c.nondegenerate));
        let d = &cps[1].hessian_det;
        assert_eq!(d.valuation(), Valuation::Finite(qi(1)));
        assert!((d.coeff(&qi(1)) - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn p1_unequal_areas() {
        let w = p1(qi(1), q(3, 2));
        assert!(critical_points_leading(&w.leading_part().unwrap()).unwrap().is_empty());
    }

    #[test]
    fn exceptional_3_2() {
        let p = shapes::exceptional_model(3, 2, q(1, 3), qi(20)).unwrap();
        let w = toric_potential(&p, &[q(1, 3); 4], qi(10)).unwrap();
        let cps = critical_points_leading(&w.leading_part().unwrap()).unwrap();
        assert_eq!(cps.len(), 1);
        let y = cps[0].leading_coeffs();
        assert!((y[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((y[3] + Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let lead = w.leading_part().unwrap();
        assert!(lead.log_gradient_numeric(&y).iter().all(|g| g.norm() < 1e-12));
    }

    #[test]
    fn square_center_hessian() {
        let w = toric_potential(&shapes::unit_square(), &[q(1, 2), q(1, 2)], qi(10)).unwrap();
        let y = LocalSystem::constant(&[Complex64::new(1.0, 0.0); 2], qi(9)).unwrap();
        let h = hessian_log(&w, &y).unwrap();
        assert_eq!(h.matrix[0][1], ComplexSeries::zero(h.matrix[0][1].trunc()));
        assert!((h.det.coeff(&qi(1)) - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        let cps = critical_points_leading(&w.leading_part().unwrap()).unwrap();
        assert_eq!(cps.len(), 4);
    }

    #[test]
    fn aberth_matches_known_roots() {
        // (y−1)(y+2)(y−3i)
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let c = [6.0 * i, -2.0 * one - 3.0 * i, one - 3.0 * i, one];
        let roots = polynomial_roots(&c);
        let val = |x: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, a| acc * x + a);
        assert!(roots.iter().all(|r| val(*r).norm() < 1e-9));
    }
}
