#![allow(dead_code)]

use mmpfloer::potential::{LaurentPotential, Term};
use mmpfloer::Q;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;

pub type Poly = Vec<Complex64>;

fn exp_poly(d: &Poly) -> Poly {
    let n = d.len();
    let mut e = vec![Complex64::zero(); n];
    e[0] = Complex64::new(1.0, 0.0);
    for k in 1..n {
        let mut acc = Complex64::zero();
        for j in 1..=k {
            acc += d[j] * e[k - j] * j as f64;
        }
        e[k] = acc / k as f64;
    }
    e
}

fn mul_poly(a: &Poly, b: &Poly) -> Poly {
    let n = a.len();
    let mut out = vec![Complex64::zero(); n];
    for i in 0..n {
        if a[i] == Complex64::zero() {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

fn monomial(y: &[Complex64], nu: &[i64]) -> Complex64 {
    y.iter().zip(nu).map(|(v, &k)| v.powi(k as i32)).product()
}

/// Independent lift by undetermined coefficients: `log y = log y₀ + Σ_k a_k s^k`
/// with `s = q^step`, solving `H₀ a_k = −[s^k]∇W` one order at a time.
/// Returns `y_i` as polynomials in `s` below `q^{e − ε₀}`.
pub fn undetermined_lift(w: &LaurentPotential, y0: &[Complex64], e: Q, step: Q) -> Vec<Poly> {
    let n = w.dim;
    let eps0 = w.terms.iter().map(|t| t.area).min().unwrap();
    let span = (e - eps0) / step;
    let len = span.ceil().to_integer() as usize;
    let offsets: Vec<usize> = w
        .terms
        .iter()
        .map(|t| {
            let k = (t.area - eps0) / step;
            assert!(k.is_integer(), "areas must sit on the step lattice");
            k.to_integer() as usize
        })
        .collect();
    let mut h0 = DMatrix::<Complex64>::zeros(n, n);
    for (t, &o) in w.terms.iter().zip(&offsets) {
        if o == 0 {
            let m = t.coef * monomial(y0, &t.exponent);
            for i in 0..n {
                for j in 0..n {
                    h0[(i, j)] += m * (t.exponent[i] * t.exponent[j]) as f64;
                }
            }
        }
    }
    let lu = h0.lu();
    let mut delta: Vec<Poly> = vec![vec![Complex64::zero(); len]; n];
    let gradient = |delta: &[Poly]| -> Vec<Poly> {
        let mut f = vec![vec![Complex64::zero(); len]; n];
        for (t, &o) in w.terms.iter().zip(&offsets) {
            if o >= len {
                continue;
            }
            let mut arg = vec![Complex64::zero(); len];
            for (j, &k) in t.exponent.iter().enumerate() {
                for (a, d) in arg.iter_mut().zip(&delta[j]) {
                    *a += d * k as f64;
                }
            }
            let ex = exp_poly(&arg);
            let c = t.coef * monomial(y0, &t.exponent);
            for i in 0..n {
                let k = t.exponent[i] as f64;
                if k == 0.0 {
                    continue;
                }
                for p in 0..len - o {
                    f[i][p + o] += c * ex[p] * k;
                }
            }
        }
        f
    };
    for k in 1..len {
        let f = gradient(&delta);
        let rhs = DVector::from_iterator(n, (0..n).map(|i| -f[i][k]));
        let a = lu.solve(&rhs).expect("nondegenerate leading Hessian");
        for i in 0..n {
            delta[i][k] = a[i];
        }
    }
    (0..n)
        .map(|i| {
            let mut y = vec![Complex64::zero(); len];
            y[0] = y0[i];
            mul_poly(&y, &exp_poly(&delta[i]))
        })
        .collect()
}

/// `W₀` plus three terms at areas `ε₀ + k/8`, `0 < k < 8`, with
/// coefficients of modulus in `[r/4, r)` and random phase.
pub fn perturb<R: Rng>(w0: &LaurentPotential, rng: &mut R, r: f64) -> LaurentPotential {
    let eps0 = w0.terms.iter().map(|t| t.area).min().unwrap();
    let mut terms = w0.terms.clone();
    for _ in 0..3 {
        let k = rng.gen_range(1..8);
        let exponent: Vec<i64> = (0..w0.dim).map(|_| rng.gen_range(-1..=1)).collect();
        let coef = Complex64::from_polar(rng.gen_range(r / 4.0..r), rng.gen_range(0.0..std::f64::consts::TAU));
        terms.push(Term { area: eps0 + Q::new(k, 8), exponent, coef });
    }
    LaurentPotential::new(w0.dim, terms, w0.trunc).unwrap()
}

/// Reducible-wall times and the terminal time of the flat running, found by
/// scanning the image of `t ↦ Σ_ε (λ_i − t)/(1 − 4t)` for half-integers.
pub fn flat_oracle(labels: &[Q]) -> Vec<Q> {
    use itertools::Itertools;
    use mmpfloer::mmp::{flat_nonempty, running_labels};
    let n = labels.len();
    let quarter = Q::new(1, 4);
    let half = Q::new(1, 2);
    let fib = labels.iter().map(|&l| l.min(half - l)).min().unwrap();
    // Emptiness: roots of each odd-subset inequality, confirmed just after.
    let mut roots: Vec<Q> = Vec::new();
    for size in (1..=n).step_by(2) {
        let k = Q::from_integer((size as i64 - 1) / 2);
        for subset in (0..n).combinations(size) {
            let a: Q = (0..n).map(|i| if subset.contains(&i) { labels[i] } else { -labels[i] }).sum();
            let c = Q::from_integer(n as i64 - 2 * size as i64);
            // (a + c·t)/(1 − 4t) = k
            let den = c + k * Q::from_integer(4);
            if !den.is_zero() {
                let t = (k - a) / den;
                if t > Q::zero() && t < quarter {
                    roots.push(t);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    let mut empty = None;
    for (i, &t) in roots.iter().enumerate() {
        let next = roots.get(i + 1).copied().unwrap_or(quarter);
        let probe = (t + next) / Q::from_integer(2);
        if !flat_nonempty(&running_labels(labels, probe)) {
            empty = Some(t);
            break;
        }
    }
    let end = empty.map_or(fib, |e| e.min(fib));
    let mut times = Vec::new();
    for size in 1..=n {
        for subset in (0..n).combinations(size) {
            let s0: Q = subset.iter().map(|&i| labels[i]).sum();
            let s = Q::from_integer(size as i64);
            let value = |t: Q| (s0 - s * t) / (Q::from_integer(1) - Q::from_integer(4) * t);
            // value(t) sums running labels, each in [0, 1/2].
            let hi = s / Q::from_integer(2);
            let mut h = Q::zero();
            while h <= hi {
                {
                    let den = s - Q::from_integer(4) * h;
                    if !den.is_zero() {
                        let t = (s0 - h) / den;
                        let ok = t > Q::zero()
                            && t < end
                            && running_labels(labels, t).iter().all(|&x| x >= Q::zero() && x <= half);
                        if ok && value(t) == h {
                            times.push(t);
                        }
                    }
                }
                h += half;
            }
        }
    }
    if end > Q::zero() && end < quarter {
        times.push(end);
    }
    times.sort();
    times.dedup();
    times
}

pub fn random_labels<R: Rng>(rng: &mut R, n: usize) -> Vec<Q> {
    (0..n).map(|_| Q::new(rng.gen_range(0..=20), 40)).collect()
}
