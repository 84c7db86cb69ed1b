use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::critical::{gradient, CriticalPoint};
use super::laurent::LaurentPotential;
use crate::error::{Error, Result};
use crate::novikov::{ComplexSeries, LocalSystem, Valuation};
use crate::rational::{serde_q, Q};

/// Floer non-triviality at one critical local system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HfCertificate {
    pub granted: bool,
    pub dim: usize,
    /// Rank of `HF ≅ H(L)` over the Novikov field.
    pub rank: u64,
    pub graded_ranks: Vec<u64>,
    pub potential: LaurentPotential,
    pub local_system: LocalSystem<Complex64>,
    /// Derivatives vanish modulo `q^order`.
    #[serde(with = "serde_q")]
    pub order: Q,
    pub value: ComplexSeries,
    pub val_q: Valuation,
}

fn binomials(n: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

pub fn hf_certificate(w: &LaurentPotential, y: &CriticalPoint) -> Result<HfCertificate> {
    let mut order = w.trunc;
    for (i, f) in gradient(w, &y.y)?.into_iter().enumerate() {
        if let Valuation::Finite(v) = f.valuation() {
            return Err(Error::CertificateRefused { index: i, valuation: v });
        }
        order = order.min(f.trunc());
    }
    let value = w.eval(&y.y)?;
    let graded_ranks = binomials(w.dim);
    Ok(HfCertificate {
        granted: true,
        dim: w.dim,
        rank: graded_ranks.iter().sum(),
        graded_ranks,
        potential: w.clone(),
        local_system: y.y.clone(),
        order,
        val_q: value.valuation(),
        value,
    })
}

/// Number of critical local systems created by a transition with weight
/// signature `(n_plus, n_minus)`.
pub fn multiplicity(n_plus: usize, n_minus: usize) -> Result<i64> {
    if n_minus == 0 || n_plus <= n_minus {
        return Err(Error::InvalidSignature { n_plus, n_minus });
    }
    Ok(n_plus as i64 - n_minus as i64)
}
