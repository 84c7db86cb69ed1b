use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::algebra::{is_zero, max_magnitude, neg, sub, CurvedAInftyAlgebra, Element};
use crate::error::{Error, Result};
use crate::novikov::{Coefficient, Series, Valuation};
use crate::rational::Q;

/// Candidate bounding cochain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coefficient")]
pub struct MCElement<C: Coefficient> {
    pub b: Element<C>,
}

impl<C: Coefficient> MCElement<C> {
    pub fn zero(a: &CurvedAInftyAlgebra<C>) -> Self {
        MCElement { b: a.zero() }
    }
}

fn positive(v: Valuation) -> bool {
    match v {
        Valuation::Finite(x) => x > Q::zero(),
        Valuation::Infinite => true,
    }
}

fn nonnegative(v: Valuation) -> bool {
    match v {
        Valuation::Finite(x) => x >= Q::zero(),
        Valuation::Infinite => true,
    }
}

fn check_len<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, x: &Element<C>) -> Result<()> {
    if x.len() != a.dim() {
        return Err(Error::Dimension { expected: a.dim(), got: x.len() });
    }
    Ok(())
}

/// Membership in `A⁺`: positive-degree components have positive valuation.
pub fn in_a_plus<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b: &Element<C>) -> Result<()> {
    check_len(a, b)?;
    for (i, c) in b.iter().enumerate() {
        let v = c.valuation();
        if !nonnegative(v) || (a.degree(i) > 0 && !positive(v)) {
            return Err(Error::Filtration(format!("component {} of degree {} has valuation {v}", a.generators()[i].name, a.degree(i))));
        }
    }
    Ok(())
}

/// Membership in `A⁺⁺`: nonnegative-degree components have positive valuation.
pub fn in_a_plus_plus<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, h: &Element<C>) -> Result<()> {
    check_len(a, h)?;
    for (i, c) in h.iter().enumerate() {
        let v = c.valuation();
        if !nonnegative(v) || (a.degree(i) >= 0 && !positive(v)) {
            return Err(Error::Filtration(format!("component {} of degree {} has valuation {v}", a.generators()[i].name, a.degree(i))));
        }
    }
    Ok(())
}

/// The algebra with composition maps `μⁿ_b`.
pub fn deform<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b: &MCElement<C>) -> Result<CurvedAInftyAlgebra<C>> {
    in_a_plus(a, &b.b)?;
    let e = a.energy();
    let cutoff = a.arity_cutoff();
    let mut maps: BTreeMap<Vec<usize>, BTreeMap<usize, Series<C>>> = BTreeMap::new();
    for (key, outs) in a.tables() {
        let n = key.len();
        // Every way of reading some slots as `b`.
        for mask in 0u64..(1u64 << n) {
            let mut kept = Vec::with_capacity(n);
            let mut w = Series::one(e);
            for (j, &k) in key.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    w = w.mul_tracking(&b.b[k]).truncate_lossy(e);
                } else {
                    kept.push(k);
                }
            }
            if w.is_zero() || kept.len() > cutoff {
                continue;
            }
            let slot = maps.entry(kept).or_default();
            for (o, c) in outs {
                let t = w.mul_tracking(c).truncate_lossy(e);
                let cur = slot.remove(o).unwrap_or_else(|| Series::zero(e));
                slot.insert(*o, cur.add_lossy(&t));
            }
        }
    }
    Ok(CurvedAInftyAlgebra::from_tables(a, maps))
}

/// `μ⁰_b(1) = Σ μᵏ(b,…,b)`.
pub fn curvature<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b: &Element<C>) -> Element<C> {
    a.apply(Some(&[b]), &[])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "C: Coefficient")]
pub struct WeakMc<C: Coefficient> {
    pub is_solution: bool,
    /// Coefficient of the unit in `μ⁰_b(1)`.
    pub potential: Series<C>,
    pub curvature: Element<C>,
}

pub fn weak_mc_check<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b: &MCElement<C>) -> Result<WeakMc<C>> {
    let e = a.unit().ok_or(Error::NoUnit)?;
    check_len(a, &b.b)?;
    let m0 = curvature(a, &b.b);
    let is_solution = m0.iter().enumerate().all(|(i, c)| i == e || c.is_zero());
    Ok(WeakMc { is_solution, potential: m0[e].clone(), curvature: m0 })
}

/// `(μ¹_b)²(aᵢ)` for one basis element.
pub fn mu1b_squared_on<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b: &Element<C>, i: usize) -> Element<C> {
    let x = a.basis(i);
    let once = a.apply_deformed(b, &[&x]);
    a.apply_deformed(b, &[&once])
}

/// `−μ²_b(μ⁰_b, aᵢ) + (−1)^{|aᵢ|} μ²_b(aᵢ, μ⁰_b)`, the value forced on
/// `(μ¹_b)²(aᵢ)` by the A∞ relations.
pub fn curvature_commutator<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b: &Element<C>, i: usize) -> Element<C> {
    let x = a.basis(i);
    let m0 = curvature(a, b);
    let left = a.apply_deformed(b, &[&m0, &x]);
    let right = a.apply_deformed(b, &[&x, &m0]);
    let right = if a.degree(i).rem_euclid(2) == 1 { neg(&right) } else { right };
    sub(&right, &left)
}

/// Largest coefficient of `(μ¹_b)²` over the basis.
pub fn mu1b_squared<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b: &MCElement<C>) -> Result<f64> {
    check_len(a, &b.b)?;
    Ok((0..a.dim()).map(|i| max_magnitude(&mu1b_squared_on(a, &b.b, i))).fold(0.0, f64::max))
}

/// `μ¹_{b₀,b₁}(h)`: `b₀` inserted before `h`, `b₁` after.
pub fn mu1_pair<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b0: &Element<C>, b1: &Element<C>, h: &Element<C>) -> Element<C> {
    a.apply(Some(&[b0, b1]), &[h])
}

/// `b₁ − b₀ − μ¹_{b₀,b₁}(h)`.
pub fn gauge_defect<C: Coefficient>(
    a: &CurvedAInftyAlgebra<C>,
    b0: &MCElement<C>,
    b1: &MCElement<C>,
    h: &Element<C>,
) -> Result<Element<C>> {
    check_len(a, &b0.b)?;
    check_len(a, &b1.b)?;
    in_a_plus_plus(a, h)?;
    Ok(sub(&sub(&b1.b, &b0.b), &mu1_pair(a, &b0.b, &b1.b, h)))
}

pub fn gauge_verify<C: Coefficient>(
    a: &CurvedAInftyAlgebra<C>,
    b0: &MCElement<C>,
    b1: &MCElement<C>,
    h: &Element<C>,
) -> Result<bool> {
    Ok(is_zero(&gauge_defect(a, b0, b1, h)?))
}
