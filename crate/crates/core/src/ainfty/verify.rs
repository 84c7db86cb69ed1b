use rayon::prelude::*;
use serde::Serialize;

use super::algebra::{is_zero, max_magnitude, CurvedAInftyAlgebra, Element};
use crate::error::{Error, Result};
use crate::novikov::{Coefficient, Series};

/// Keep at most this many failing tuples in a report.
const MAX_LISTED: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AInftyReport {
    pub max_residual: f64,
    /// Worst residual landing on each generator.
    pub residuals: Vec<f64>,
    pub failing: Vec<Vec<usize>>,
    pub tuples_checked: usize,
    pub max_arity: usize,
}

impl AInftyReport {
    pub fn holds(&self) -> bool {
        self.failing.is_empty()
    }
}

fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let count = n.pow(len as u32);
    (0..count)
        .map(|mut idx| {
            let mut t = vec![0; len];
            for slot in t.iter_mut().rev() {
                *slot = idx % n;
                idx /= n;
            }
            t
        })
        .collect()
}

/// Left side of the A∞ relation on one basis tuple.
pub fn relation<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, tuple: &[usize]) -> Element<C> {
    let d = tuple.len();
    let mut out = a.zero();
    let mut key = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let prefix_deg: i64 = a.degree_of(&tuple[..n]);
        let sign_negative = (n as i64 + prefix_deg).rem_euclid(2) == 1;
        for m in 0..=(d - n) {
            let Some(inner) = a.lookup(&tuple[n..n + m]) else { continue };
            for (k, c) in inner {
                key.clear();
                key.extend_from_slice(&tuple[..n]);
                key.push(*k);
                key.extend_from_slice(&tuple[n + m..]);
                let Some(outer) = a.lookup(&key) else { continue };
                for (o, c2) in outer {
                    let term: Series<C> = c.mul_tracking(c2).truncate_lossy(a.energy());
                    out[*o] = if sign_negative { out[*o].sub_lossy(&term) } else { out[*o].add_lossy(&term) };
                }
            }
        }
    }
    out
}

/// Checks the A∞ relations on all basis tuples of length ≤ `max_arity`.
pub fn verify_ainfty_to<C: Coefficient>(a: &CurvedAInftyAlgebra<C>, max_arity: usize) -> AInftyReport {
    let mut residuals = vec![0.0f64; a.dim()];
    let mut failing = Vec::new();
    let mut checked = 0;
    for d in 0..=max_arity {
        let ts = tuples(a.dim(), d);
        checked += ts.len();
        let results: Vec<(Vec<usize>, Element<C>)> = ts.into_par_iter().map(|t| {
            let r = relation(a, &t);
            (t, r)
        }).collect();
        for (t, r) in results {
            if is_zero(&r) {
                continue;
            }
            for (slot, c) in residuals.iter_mut().zip(&r) {
                *slot = slot.max(c.max_magnitude());
            }
            if failing.len() < MAX_LISTED {
                failing.push(t);
            }
        }
    }
    AInftyReport {
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
        failing,
        tuples_checked: checked,
        max_arity,
    }
}

pub fn verify_ainfty<C: Coefficient>(a: &CurvedAInftyAlgebra<C>) -> AInftyReport {
    verify_ainfty_to(a, a.arity_cutoff())
}

/// `μ²(e,a) = a = (−1)^{|a|}μ²(a,e)` and `e` kills every other arity.
pub fn verify_strict_unit<C: Coefficient>(a: &CurvedAInftyAlgebra<C>) -> Result<bool> {
    let e = a.unit().ok_or(Error::NoUnit)?;
    let ee = a.basis(e);
    for i in 0..a.dim() {
        let x = a.basis(i);
        let left = a.apply(None, &[&ee, &x]);
        let right = a.apply(None, &[&x, &ee]);
        let right = if a.degree(i).rem_euclid(2) == 1 { super::algebra::neg(&right) } else { right };
        if max_magnitude(&super::algebra::sub(&left, &x)) > 0.0 || max_magnitude(&super::algebra::sub(&right, &x)) > 0.0 {
            return Ok(false);
        }
    }
    let stray = a.tables().iter().any(|(k, outs)| k.len() != 2 && k.contains(&e) && outs.values().any(|c| !c.is_zero()));
    Ok(!stray)
}
