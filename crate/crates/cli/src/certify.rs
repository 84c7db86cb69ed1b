use mmpfloer::mmp::{run_mmp, toric_regular_fiber, FiberReport, Geometry, TransitionKind};
use mmpfloer::potential::{critical_points_leading, hf_certificate, newton_lift, toric_potential, LaurentPotential};
use mmpfloer::rational::serde_q;
use mmpfloer::{Complex64, ComplexSeries, LocalSystem, Valuation, Q};
use serde::{Deserialize, Serialize};

use crate::config::{CoeffMode, RunConfig};
use crate::Failure;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedPoint {
    pub local_system: LocalSystem<Complex64>,
    pub hessian_det: ComplexSeries,
    pub value: ComplexSeries,
    pub val_q: Valuation,
    pub granted: bool,
    /// Why the certificate was refused, if it was.
    pub refusal: Option<String>,
    pub newton_history: Vec<Valuation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub transition: usize,
    #[serde(with = "serde_q")]
    pub time: Q,
    pub kind: TransitionKind,
    pub fiber: FiberReport,
    pub potential: LaurentPotential,
    #[serde(with = "serde_q")]
    pub truncation: Q,
    pub critical_points: Vec<CertifiedPoint>,
    /// Vertex drop reported by the transition.
    pub expected_multiplicity: Option<i64>,
    pub multiplicity_matches: bool,
    pub granted: bool,
}

fn trim(s: &ComplexSeries, tol: f64) -> ComplexSeries {
    s.clone().with_tol(tol)
}

pub fn certify(cfg: &RunConfig, index: usize) -> Result<CertifyReport, Failure> {
    if cfg.coefficient_mode == CoeffMode::Exact {
        return Err(Failure::Spec("certify needs complex coefficients; critical points are roots of unity".into()));
    }
    let geometry = cfg.geometry()?;
    if !matches!(geometry, Geometry::Toric(_) | Geometry::Exceptional { .. }) {
        return Err(Failure::Spec("certify takes a toric or exceptional geometry".into()));
    }
    let p = geometry.polytope()?;
    let running = run_mmp(&geometry)?;
    let tr = running.transitions.get(index).ok_or_else(|| {
        Failure::Spec(format!("transition {index} does not exist ({} transitions)", running.transitions.len()))
    })?;
    if !matches!(tr.kind, TransitionKind::Flip | TransitionKind::DivisorialContraction) {
        return Err(Failure::Spec(format!("transition {index} is a {:?}, not a flip or contraction", tr.kind)));
    }
    let fiber = toric_regular_fiber(&p, tr)?;
    let e = cfg.truncation;
    let w = toric_potential(&p, &fiber.point, e)?;
    let seeds = critical_points_leading(&w.leading_part()?)?;
    let mut points = Vec::with_capacity(seeds.len());
    for seed in &seeds {
        let lifted = newton_lift(&w, seed, e)?;
        let cert = hf_certificate(&w, &lifted);
        let value = w.eval(&lifted.y)?;
        let local = LocalSystem::new(lifted.y.values().iter().map(|s| trim(s, cfg.zero_tol)).collect())?;
        points.push(CertifiedPoint {
            local_system: local,
            hessian_det: trim(&lifted.hessian_det, cfg.zero_tol),
            val_q: value.valuation(),
            value: trim(&value, cfg.zero_tol),
            granted: cert.as_ref().is_ok_and(|c| c.granted),
            refusal: cert.err().map(|e| e.to_string()),
            newton_history: lifted.history,
        });
    }
    let multiplicity_matches = tr.multiplicity == Some(points.len() as i64);
    let granted = !points.is_empty() && points.iter().all(|c| c.granted);
    Ok(CertifyReport {
        transition: index,
        time: tr.time,
        kind: tr.kind,
        fiber,
        potential: w,
        truncation: e,
        critical_points: points,
        expected_multiplicity: tr.multiplicity,
        multiplicity_matches,
        granted,
    })
}
