//! Safe constructors for algebras known to satisfy the A∞ relations, and
//! generators of Maurer–Cartan elements and gauge equivalences on them.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use super::algebra::{add, neg, sub, CurvedAInftyAlgebra, Element, Generator, MapEntry};
use super::mc::{mu1_pair, MCElement};
use crate::error::{Error, Result};
use crate::novikov::{Coefficient, LocalSystem, Series};
use crate::potential::LaurentPotential;
use crate::rational::Q;

type Sparse<C> = Vec<(usize, Series<C>)>;

/// Graded-commutative dg algebra with optional curvature `w·e`.
#[derive(Clone, Debug)]
pub struct Dga<C: Coefficient> {
    pub generators: Vec<Generator>,
    pub unit: usize,
    pub differential: Vec<Sparse<C>>,
    pub product: BTreeMap<(usize, usize), Sparse<C>>,
    pub curvature: Option<Series<C>>,
    pub energy: Q,
}

fn mono<C: Coefficient>(energy: Q, c: i64) -> Series<C> {
    Series::constant(C::from_i64(c), energy)
}

impl<C: Coefficient> Dga<C> {
    /// Exterior algebra on `k` degree-one generators with zero differential.
    pub fn exterior(k: usize, energy: Q) -> Self {
        let n = 1usize << k;
        let name = |mask: usize| {
            if mask == 0 {
                "e".to_string()
            } else {
                (0..k).filter(|i| mask & (1 << i) != 0).map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join("")
            }
        };
        let generators = (0..n).map(|m| Generator { name: name(m), degree: m.count_ones() as i64 }).collect();
        let mut product = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if i & j != 0 {
                    continue;
                }
                // Transpositions needed to sort x_I x_J.
                let swaps: u32 = (0..k).filter(|b| j & (1 << b) != 0).map(|b| (i >> (b + 1)).count_ones()).sum();
                let sign = if swaps % 2 == 0 { 1 } else { -1 };
                product.insert((i, j), vec![(i | j, mono(energy, sign))]);
            }
        }
        Dga { generators, unit: 0, differential: vec![Vec::new(); n], product, curvature: None, energy }
    }

    /// Unit `e` with two generators `u`, `v = u + 1` in degree and `du = c·v`.
    pub fn block(c: Series<C>, low_degree: i64, energy: Q) -> Self {
        let generators = vec![
            Generator { name: "e".into(), degree: 0 },
            Generator { name: "u".into(), degree: low_degree },
            Generator { name: "v".into(), degree: low_degree + 1 },
        ];
        let mut product = BTreeMap::new();
        for i in 0..3 {
            product.insert((0, i), vec![(i, mono(energy, 1))]);
            product.insert((i, 0), vec![(i, mono(energy, 1))]);
        }
        let differential = vec![Vec::new(), vec![(2, c.truncate_lossy(energy))], Vec::new()];
        Dga { generators, unit: 0, differential, product, curvature: None, energy }
    }

    pub fn with_curvature(mut self, w: Series<C>) -> Self {
        self.curvature = Some(w.truncate_lossy(self.energy));
        self
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Graded tensor product; curvatures add.
    pub fn tensor(&self, other: &Self) -> Self {
        let energy = self.energy.min(other.energy);
        let nb = other.dim();
        let idx = |i: usize, j: usize| i * nb + j;
        let mut generators = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                let name = match (a.name.as_str(), b.name.as_str()) {
                    ("e", "e") => "e".to_string(),
                    (x, "e") => x.to_string(),
                    ("e", y) => y.to_string(),
                    (x, y) => format!("{x}{y}"),
                };
                generators.push(Generator { name, degree: a.degree + b.degree });
            }
        }
        let mut differential = vec![Vec::new(); self.dim() * nb];
        for i in 0..self.dim() {
            for j in 0..nb {
                let d = &mut differential[idx(i, j)];
                for (k, c) in &self.differential[i] {
                    d.push((idx(*k, j), c.truncate_lossy(energy)));
                }
                let sign = if self.generators[i].degree.rem_euclid(2) == 0 { 1 } else { -1 };
                for (k, c) in &other.differential[j] {
                    d.push((idx(i, *k), c.truncate_lossy(energy).scale(&C::from_i64(sign))));
                }
            }
        }
        let mut product = BTreeMap::new();
        for (&(i1, i2), p1) in &self.product {
            for (&(j1, j2), p2) in &other.product {
                let koszul = other.generators[j1].degree * self.generators[i2].degree;
                let sign = C::from_i64(if koszul.rem_euclid(2) == 0 { 1 } else { -1 });
                let mut out = Vec::new();
                for (k1, c1) in p1 {
                    for (k2, c2) in p2 {
                        let c = c1.truncate_lossy(energy).mul_tracking(&c2.truncate_lossy(energy)).scale(&sign);
                        out.push((idx(*k1, *k2), c.truncate_lossy(energy)));
                    }
                }
                product.insert((idx(i1, j1), idx(i2, j2)), out);
            }
        }
        let curvature = match (&self.curvature, &other.curvature) {
            (None, None) => None,
            (Some(w), None) | (None, Some(w)) => Some(w.truncate_lossy(energy)),
            (Some(a), Some(b)) => Some(a.add_lossy(b).truncate_lossy(energy)),
        };
        Dga { generators, unit: idx(self.unit, other.unit), differential, product, curvature, energy }
    }

    /// `μ⁰ = w·e`, `μ¹ = d`, `μ²(a₁,a₂) = (−1)^{|a₁|}a₁a₂`.
    pub fn to_ainfty(&self, g: i64, arity_cutoff: usize) -> Result<CurvedAInftyAlgebra<C>> {
        let mut entries = Vec::new();
        if let Some(w) = &self.curvature {
            entries.push(MapEntry { arity: 0, inputs: vec![], out: self.unit, coef: w.clone() });
        }
        for (i, d) in self.differential.iter().enumerate() {
            for (o, c) in d {
                entries.push(MapEntry { arity: 1, inputs: vec![i], out: *o, coef: c.clone() });
            }
        }
        for (&(i, j), p) in &self.product {
            let sign = C::from_i64(if self.generators[i].degree.rem_euclid(2) == 0 { 1 } else { -1 });
            for (o, c) in p {
                entries.push(MapEntry { arity: 2, inputs: vec![i, j], out: *o, coef: c.scale(&sign) });
            }
        }
        CurvedAInftyAlgebra::new(g, self.generators.clone(), Some(self.unit), arity_cutoff.max(2), self.energy, entries)
    }
}

/// Exterior algebra `H(T^n)` with `μ⁰ = W(y)·e` and `μ¹` contraction with
/// the log-gradient of `W` at the local system `y`; graded mod 2.
pub fn torus_model(w: &LaurentPotential, y: &LocalSystem<Complex64>) -> Result<CurvedAInftyAlgebra<Complex64>> {
    let value = w.eval(y)?;
    let grads: Vec<Series<Complex64>> = (0..w.dim).map(|i| w.log_derivative(i)?.eval(y)).collect::<Result<_>>()?;
    let energy = grads.iter().map(|s| s.trunc()).fold(value.trunc(), Q::min);
    let mut dga = Dga::<Complex64>::exterior(w.dim, energy).with_curvature(value);
    let n = 1usize << w.dim;
    for mask in 0..n {
        let mut d = Vec::new();
        for i in 0..w.dim {
            if mask & (1 << i) == 0 {
                continue;
            }
            let before = (mask & ((1 << i) - 1)).count_ones();
            let sign = Complex64::new(if before % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
            d.push((mask & !(1 << i), grads[i].truncate_lossy(energy).scale(&sign)));
        }
        dga.differential[mask] = d;
    }
    dga.to_ainfty(2, 2)
}

fn random_series<C: Coefficient, R: Rng>(rng: &mut R, energy: Q, lowest_quarter: i64, max_terms: usize) -> Series<C> {
    let top = (energy * Q::from_integer(4)).ceil().to_integer();
    let count = rng.gen_range(1..=max_terms);
    let terms: Vec<(Q, C)> = (0..count)
        .map(|_| {
            let k = rng.gen_range(lowest_quarter..top.max(lowest_quarter + 1));
            let mut c = rng.gen_range(-3i64..=3);
            if c == 0 {
                c = 1;
            }
            (Q::new(k, 4), C::from_i64(c))
        })
        .collect();
    Series::from_terms(terms, energy)
}

/// `Λ[x₁,…,x_k] ⊗ B_c` with random `c` and curvature, graded mod 2.
pub fn random_dga<C: Coefficient, R: Rng>(rng: &mut R, energy: Q) -> Dga<C> {
    let k = rng.gen_range(1..=2);
    let low = if rng.gen_bool(0.5) { 0 } else { -1 };
    let c = random_series(rng, energy, 1, 2);
    let w = random_series(rng, energy, 1, 2);
    Dga::exterior(k, energy).tensor(&Dga::block(c, low, energy)).with_curvature(w)
}

/// Odd cocycle `b` in `A⁺`: a random combination of degree-one generators
/// with zero differential. Its curvature is `w·e` since odd elements square
/// to zero.
pub fn random_mc<C: Coefficient, R: Rng>(dga: &Dga<C>, rng: &mut R) -> MCElement<C> {
    let b = (0..dga.dim())
        .map(|i| {
            if dga.generators[i].degree == 1 && dga.differential[i].is_empty() && rng.gen_bool(0.7) {
                random_series(rng, dga.energy, 1, 3)
            } else {
                Series::zero(dga.energy)
            }
        })
        .collect();
    MCElement { b }
}

/// Random degree-one element in `A⁺` with no cocycle constraint.
pub fn random_odd<C: Coefficient, R: Rng>(dga: &Dga<C>, rng: &mut R) -> MCElement<C> {
    let b = (0..dga.dim())
        .map(|i| {
            if dga.generators[i].degree == 1 {
                random_series(rng, dga.energy, 1, 2)
            } else {
                Series::zero(dga.energy)
            }
        })
        .collect();
    MCElement { b }
}

/// Random degree-zero element of `A⁺⁺`.
pub fn random_gauge<C: Coefficient, R: Rng>(dga: &Dga<C>, rng: &mut R) -> Element<C> {
    (0..dga.dim())
        .map(|i| {
            if dga.generators[i].degree == 0 && rng.gen_bool(0.6) {
                random_series(rng, dga.energy, 1, 2)
            } else {
                Series::zero(dga.energy)
            }
        })
        .collect()
}

const FIXED_POINT_STEPS: usize = 512;

/// The `b₁` with `b₁ − b₀ = μ¹_{b₀,b₁}(h)`, by fixed-point iteration.
pub fn gauge_partner<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b0: &MCElement<C>, h: &Element<C>) -> Result<MCElement<C>> {
    let mut b1 = b0.b.clone();
    for _ in 0..FIXED_POINT_STEPS {
        let next = add(&b0.b, &mu1_pair(a, &b0.b, &b1, h));
        if super::algebra::is_zero(&sub(&next, &b1)) {
            return Ok(MCElement { b: next });
        }
        b1 = next;
    }
    Err(Error::NotStabilized(FIXED_POINT_STEPS))
}

/// `h₀₁ + h₁₂ + sign·μ²_{b₀,b₁,b₂}(h₀₁,h₁₂)`.
pub fn compose_gauge<C: Coefficient>(
    a: &CurvedAInftyAlgebra<C>,
    bs: [&MCElement<C>; 3],
    h01: &Element<C>,
    h12: &Element<C>,
    sign: i64,
) -> Element<C> {
    let m2 = a.apply(Some(&[&bs[0].b, &bs[1].b, &bs[2].b]), &[h01, h12]);
    let m2: Element<C> = m2.iter().map(|s| s.scale(&C::from_i64(sign))).collect();
    add(&add(h01, h12), &m2)
}

/// `x ↦ (−1)^{|x|}x` on the parity components.
fn parity_sign<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, x: &Element<C>) -> Element<C> {
    let (even, odd) = a.parity_split(x);
    sub(&even, &odd)
}

/// Inverse gauge `h₁₀ = (ψ∘φ)⁻¹(−h₀₁ − (−1)^{|h₀₁|}μ²_{b₀,b₁,b₁}(h₀₁,h₀₁))`,
/// where `φ(x) = x − μ²_{b₁,b₀,b₁}((−1)^{|·|}x, h₀₁)` and
/// `ψ(x) = x + μ²_{b₁,b₁,b₀}(h₀₁, (−1)^{|·|}x)`. The inverse is a Neumann
/// series, finite modulo `q^E`.
pub fn inverse_gauge<C: Coefficient>(
    a: &CurvedAInftyAlgebra<C>,
    b0: &MCElement<C>,
    b1: &MCElement<C>,
    h01: &Element<C>,
) -> Result<Element<C>> {
    let phi = |x: &Element<C>| {
        let sx = parity_sign(a, x);
        sub(x, &a.apply(Some(&[&b1.b, &b0.b, &b1.b]), &[&sx, h01]))
    };
    let psi = |x: &Element<C>| {
        let sx = parity_sign(a, x);
        add(x, &a.apply(Some(&[&b1.b, &b1.b, &b0.b]), &[h01, &sx]))
    };
    let sh = parity_sign(a, h01);
    let rhs = neg(&add(h01, &a.apply(Some(&[&b0.b, &b1.b, &b1.b]), &[&sh, h01])));
    // Solve x + N(x) = rhs with N = ψ∘φ − 1.
    let mut x = rhs.clone();
    for _ in 0..FIXED_POINT_STEPS {
        let nx = sub(&psi(&phi(&x)), &x);
        let next = sub(&rhs, &nx);
        if super::algebra::is_zero(&sub(&next, &x)) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NotStabilized(FIXED_POINT_STEPS))
}
