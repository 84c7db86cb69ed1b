mod common;

use mmpfloer::novikov::LocalSystem;
use mmpfloer::polytope::shapes;
use mmpfloer::potential::{
    critical_points_leading, hessian_log, hf_certificate, newton_lift, toric_potential, LaurentPotential, Term,
};
use mmpfloer::rational::{q, qi};
use mmpfloer::{BigRational, Complex64, ExactSeries, Polytope, Series, Valuation, Q};
use nalgebra::{DMatrix, Schur};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Random one-variable Laurent polynomial at a single area with integer
/// coefficients on exponents `−lo..=hi`.
fn random_dim1(rng: &mut ChaCha8Rng) -> LaurentPotential {
    let (lo, hi) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let terms = (-lo..=hi)
        .filter(|&k| k != 0)
        .map(|k| {
            let mut c = rng.gen_range(-4..=4);
            if k == -lo || k == hi {
                c = if c == 0 { 1 } else { c }; // keep the extreme degrees
            }
            Term { area: q(1, 2), exponent: vec![k], coef: Complex64::new(c as f64, 0.0) }
        })
        .collect();
    LaurentPotential::new(1, terms, qi(3)).unwrap()
}

/// Nonzero roots of `y·W'(y)·y^lo`, from the companion matrix.
fn companion_roots(w: &LaurentPotential) -> Option<Vec<Complex64>> {
    let lo = -w.terms.iter().map(|t| t.exponent[0]).min().unwrap();
    let deg = (w.terms.iter().map(|t| t.exponent[0]).max().unwrap() + lo) as usize;
    let mut p = vec![0.0; deg + 1];
    for t in &w.terms {
        p[(t.exponent[0] + lo) as usize] += t.coef.re * t.exponent[0] as f64;
    }
    // strip the zero roots and normalize
    let start = p.iter().position(|c| *c != 0.0).unwrap();
    let p = &p[start..];
    let d = p.len() - 1;
    if d == 0 {
        return Some(Vec::new());
    }
    let lead = p[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -p[i] / lead;
    }
    // plain QR can cycle on companion matrices, so cap the sweeps
    let schur = Schur::try_new(m, 1e-14, 10_000)?;
    Some(schur.complex_eigenvalues().iter().copied().collect())
}

fn has_double_root(w: &LaurentPotential, roots: &[Complex64]) -> bool {
    roots.iter().any(|y| w.log_hessian_numeric(&[*y])[0][0].norm() < 1e-6)
}

#[test]
fn dim1_roots_match_companion_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let mut checked = 0;
    while checked < 60 {
        let w = random_dim1(&mut rng);
        let Some(expect) = companion_roots(&w) else { continue };
        if has_double_root(&w, &expect) {
            continue;
        }
        checked += 1;
        let got: Vec<Complex64> = critical_points_leading(&w).unwrap().iter().map(|c| c.leading_coeffs()[0]).collect();
        assert_eq!(got.len(), expect.len(), "{w:?}: {got:?} vs {expect:?}");
        for r in &expect {
            let near = got.iter().map(|g| (g - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(near < 1e-6, "root {r} missing for {w:?}");
        }
    }
}

fn random_polygon(rng: &mut ChaCha8Rng) -> Polytope {
    let (a, b) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
    let d = q(rng.gen_range(1..=3), 2);
    shapes::chopped_rectangle(qi(a), qi(b), d)
}

#[test]
fn potential_areas_are_facet_gaps() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let p = random_polygon(&mut rng);
        let v = &p.vertices();
        // a strictly interior rational point: average of the vertices, nudged
        let mut lambda = vec![qi(0); 2];
        for x in v.iter() {
            lambda[0] += x.point[0] / qi(v.len() as i64);
            lambda[1] += x.point[1] / qi(v.len() as i64);
        }
        lambda[0] += q(rng.gen_range(-1..=1), 7);
        let w = toric_potential(&p, &lambda, qi(4)).unwrap();
        let mut got: Vec<(Q, Vec<i64>)> = w.terms.iter().map(|t| (t.area, t.exponent.clone())).collect();
        let mut expect: Vec<(Q, Vec<i64>)> = p.facet_gaps(&lambda).into_iter().zip(p.normals().iter().cloned()).collect();
        got.sort();
        expect.sort();
        assert_eq!(got, expect);
    }
}

fn random_potential(rng: &mut ChaCha8Rng, dim: usize) -> LaurentPotential {
    let terms = (0..rng.gen_range(2..=6))
        .map(|_| Term {
            area: q(rng.gen_range(0..=8), 4),
            exponent: (0..dim).map(|_| rng.gen_range(-2..=2)).collect(),
            coef: Complex64::new(rng.gen_range(-8..=8) as f64 / 4.0, 0.0),
        })
        .collect();
    LaurentPotential::new(dim, terms, qi(3)).unwrap()
}

#[test]
fn log_derivative_scales_each_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let dim = rng.gen_range(1..=3);
        let w = random_potential(&mut rng, dim);
        let y: Vec<Complex64> = (0..dim).map(|_| Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..6.0))).collect();
        let grad = w.log_gradient_numeric(&y);
        for i in 0..dim {
            let d = w.log_derivative(i).unwrap();
            for t in &w.terms {
                let k = t.exponent[i];
                let found = d.terms.iter().find(|s| s.area == t.area && s.exponent == t.exponent);
                match found {
                    Some(s) => assert_eq!(s.coef, t.coef * k as f64),
                    None => assert_eq!(k, 0),
                }
            }
            assert!((d.eval_numeric(&y) - grad[i]).norm() < 1e-9);
            // central difference along y_i ↦ y_i·e^s
            let h = 1e-5;
            let at = |s: f64| {
                let mut z = y.clone();
                z[i] *= Complex64::new(s, 0.0).exp();
                w.eval_numeric(&z)
            };
            let fd = (at(h) - at(-h)) / (2.0 * h);
            assert!((fd - grad[i]).norm() < 1e-4 * (1.0 + grad[i].norm()));
        }
    }
}

fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn hessian_is_exactly_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..40 {
        let dim = rng.gen_range(1..=3);
        let w = random_potential(&mut rng, dim);
        let values: Vec<ExactSeries> = (0..dim)
            .map(|_| {
                let lead = br(rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3));
                let tail = (1..4).map(|k| (q(k, 4), br(rng.gen_range(-3..=3), 2)));
                Series::from_terms(std::iter::once((qi(0), lead)).chain(tail), qi(3))
            })
            .collect();
        let y = LocalSystem::new(values).unwrap();
        let h = hessian_log(&w, &y).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                assert_eq!(h.matrix[i][j], h.matrix[j][i]);
            }
        }
    }
}

/// `q(y + 1/y) + q^{3/2}y²`.
fn skewed_p1() -> LaurentPotential {
    let terms = vec![
        Term { area: qi(1), exponent: vec![1], coef: one() },
        Term { area: qi(1), exponent: vec![-1], coef: one() },
        Term { area: q(3, 2), exponent: vec![2], coef: one() },
    ];
    LaurentPotential::new(1, terms, qi(6)).unwrap()
}

#[test]
fn skewed_p1_lifts_match_series_oracle() {
    let w = skewed_p1();
    let e = qi(5);
    let seeds = critical_points_leading(&w.leading_part().unwrap()).unwrap();
    assert_eq!(seeds.len(), 2);
    let mut lifts = Vec::new();
    for cp in &seeds {
        let lifted = newton_lift(&w, cp, e).unwrap();
        assert!(lifted.residual_order >= e);
        assert!(lifted.history.windows(2).all(|p| p[0] < p[1]), "{:?}", lifted.history);
        let oracle = common::undetermined_lift(&w, &cp.leading_coeffs(), e, q(1, 2));
        let yi = &lifted.y.values()[0];
        for (k, c) in oracle[0].iter().enumerate() {
            assert!((yi.coeff(&q(k as i64, 2)) - c).norm() < 1e-9, "order {k}: {} vs {c}", yi.coeff(&q(k as i64, 2)));
        }
        let cert = hf_certificate(&w, &lifted).unwrap();
        assert!(cert.granted);
        assert_eq!(cert.val_q, Valuation::Finite(qi(1)));
        lifts.push(lifted.y.values()[0].clone());
    }
    assert!(lifts[0].distance(&lifts[1]) > 1.0);
}

#[test]
fn unperturbed_lift_is_the_identity() {
    let w = toric_potential(&shapes::unit_square(), &[q(1, 2), q(1, 2)], qi(4)).unwrap();
    for cp in critical_points_leading(&w).unwrap() {
        let lifted = newton_lift(&w, &cp, qi(4)).unwrap();
        for (a, b) in lifted.y.values().iter().zip(cp.y.values()) {
            assert!(a.distance(b) < 1e-12);
        }
    }
}
