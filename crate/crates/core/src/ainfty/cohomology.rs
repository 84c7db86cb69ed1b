use std::collections::BTreeMap;

use serde::Serialize;

use super::algebra::CurvedAInftyAlgebra;
use super::mc::{weak_mc_check, MCElement};
use crate::error::{Error, Result};
use crate::novikov::{matrix, Coefficient, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "modulus", rename_all = "snake_case")]
pub enum Grading {
    Integer,
    Modular(i64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradedRanks {
    pub grading: Grading,
    pub degrees: Vec<i64>,
    pub ranks: Vec<usize>,
    pub total: usize,
    /// Some pivot vanished only because of the truncation.
    pub precision_warning: bool,
}

impl GradedRanks {
    pub fn rank_in(&self, degree: i64) -> usize {
        self.degrees.iter().position(|&d| d == degree).map_or(0, |i| self.ranks[i])
    }
}

/// `m[out][in]`.
fn graded_ranks<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, m: &[Vec<Series<C>>]) -> GradedRanks {
    let n = a.dim();
    let homogeneous = (0..n).all(|i| (0..n).all(|o| m[o][i].is_zero() || a.degree(o) == a.degree(i) + 1));
    let (grading, class): (Grading, Box<dyn Fn(i64) -> i64>) = if homogeneous {
        (Grading::Integer, Box::new(|d| d))
    } else {
        let g = if a.grading_modulus() == 0 { 2 } else { a.grading_modulus() };
        (Grading::Modular(g), Box::new(move |d: i64| d.rem_euclid(g)))
    };
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        groups.entry(class(a.degree(i))).or_default().push(i);
    }
    let succ = |k: i64| match grading {
        Grading::Integer => k + 1,
        Grading::Modular(g) => (k + 1).rem_euclid(g),
    };
    let mut warn = false;
    let mut rank_from: BTreeMap<i64, usize> = BTreeMap::new();
    for (&k, cols) in &groups {
        let Some(rows) = groups.get(&succ(k)) else { continue };
        let sub: Vec<Vec<Series<C>>> = rows.iter().map(|&o| cols.iter().map(|&i| m[o][i].clone()).collect()).collect();
        let r = matrix::rank(&sub);
        warn |= r.precision_warning;
        rank_from.insert(k, r.rank);
    }
    let mut degrees = Vec::new();
    let mut ranks = Vec::new();
    for (&k, gens) in &groups {
        let out = rank_from.get(&k).copied().unwrap_or(0);
        let pred = groups.keys().copied().find(|&j| succ(j) == k);
        let inc = pred.and_then(|j| rank_from.get(&j).copied()).unwrap_or(0);
        degrees.push(k);
        ranks.push(gens.len() - out - inc);
    }
    GradedRanks { grading, total: ranks.iter().sum(), degrees, ranks, precision_warning: warn }
}

fn mu1_matrix<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b: Option<&MCElement<C>>) -> Vec<Vec<Series<C>>> {
    let n = a.dim();
    let mut m = vec![vec![Series::zero(a.energy()); n]; n];
    for i in 0..n {
        let x = a.basis(i);
        let col = match b {
            Some(b) => a.apply_deformed(&b.b, &[&x]),
            None => a.apply(None, &[&x]),
        };
        for (o, c) in col.into_iter().enumerate() {
            m[o][i] = c;
        }
    }
    m
}

/// Ranks of `H(μ¹_b)` over the Novikov field.
pub fn cohomology_rank<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, b: &MCElement<C>) -> Result<GradedRanks> {
    if !weak_mc_check(a, b)?.is_solution {
        return Err(Error::InvalidAlgebra("b does not solve the weak Maurer–Cartan equation".into()));
    }
    Ok(graded_ranks(a, &mu1_matrix(a, Some(b))))
}

/// Ranks of the cohomology of the `q⁰` part of `μ¹`.
pub fn morse_page<C: Coefficient>(a: &CurvedAInftyAlgebra<C>) -> GradedRanks {
    let zero = num_traits::Zero::zero();
    let m: Vec<Vec<Series<C>>> = mu1_matrix(a, None)
        .into_iter()
        .map(|row| row.into_iter().map(|s| Series::constant(s.coeff(&zero), a.energy())).collect())
        .collect();
    let mut out = graded_ranks(a, &m);
    out.precision_warning = false;
    out
}
