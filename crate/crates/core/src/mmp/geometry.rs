use serde::{Deserialize, Serialize};

use super::polygon::{describe, pretty_space};
use super::toric::{describe_vertices, toric_regular_fiber};
use super::{
    build_stages, flag_walk, flat_transition_times, polygon_transition_times, toric_transition_times, MmpRunning,
    RegularLagrangian, Terminal, TransitionKind,
};
use crate::error::{Error, Result};
use crate::polytope::{shapes, Polytope};
use crate::rational::{serde_q, serde_qopt, serde_qvec, Q};

/// Tagged geometry input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Toric(Polytope),
    Polygon {
        #[serde(with = "serde_qvec")]
        lengths: Vec<Q>,
    },
    Flat {
        #[serde(with = "serde_qvec")]
        labels: Vec<Q>,
    },
    Flag {
        #[serde(with = "serde_qvec")]
        weights: Vec<Q>,
    },
    /// Local model of a simple flip (or blow-up when `n_minus = 1`).
    Exceptional {
        n_plus: usize,
        n_minus: usize,
        #[serde(with = "serde_q")]
        size: Q,
        #[serde(default, with = "serde_qopt", skip_serializing_if = "Option::is_none")]
        far: Option<Q>,
    },
}

impl Geometry {
    /// The polytope behind a toric or exceptional spec.
    pub fn polytope(&self) -> Result<Polytope> {
        match self {
            Geometry::Toric(p) => Ok(p.clone()),
            Geometry::Exceptional { n_plus, n_minus, size, far } => {
                let n = (n_plus + n_minus) as i64;
                let far = far.unwrap_or(*size * Q::from_integer(10 * n));
                shapes::exceptional_model(*n_plus, *n_minus, *size, far)
            }
            _ => Err(Error::InvalidGeometry("not a toric geometry".into())),
        }
    }
}

fn run_toric(geometry: Geometry) -> Result<MmpRunning> {
    let p = geometry.polytope()?;
    let mut transitions = toric_transition_times(&p);
    for tr in transitions.iter_mut() {
        if matches!(tr.kind, TransitionKind::Flip | TransitionKind::DivisorialContraction) {
            tr.regular_lagrangian = toric_regular_fiber(&p, tr).ok().map(RegularLagrangian::Fiber);
        }
    }
    let mut descriptions = vec![describe_vertices(p.dim(), p.vertices().len())];
    for tr in &transitions[..transitions.len() - 1] {
        let after = tr.before_after.as_ref().map(|b| b.after.clone()).unwrap_or_default();
        descriptions.push(after);
    }
    let times: Vec<Q> = transitions.iter().map(|t| t.time).collect();
    let last = transitions.last().expect("collapse time is always present");
    let terminal = Terminal {
        time: Some(last.time),
        description: format!(
            "Mori fibration over {}",
            last.before_after.as_ref().map(|b| b.after.as_str()).unwrap_or("point")
        ),
        last_stage: descriptions.last().cloned().unwrap_or_default(),
        overall: descriptions[0].clone(),
    };
    Ok(MmpRunning { geometry, stages: build_stages(&times, descriptions), transitions, terminal })
}

fn run_polygon(lengths: Vec<Q>) -> Result<MmpRunning> {
    let transitions = polygon_transition_times(&lengths)?;
    let (last, overall) = describe(&transitions);
    let n = transitions.len();
    let mut descriptions = Vec::with_capacity(n);
    let blowdowns_after = |i: usize| {
        transitions[i..n - 1].iter().filter(|t| t.kind == TransitionKind::DivisorialContraction).count()
    };
    for i in 0..n {
        let d = blowdowns_after(i);
        let flips = transitions[i..n - 1].iter().filter(|t| t.kind == TransitionKind::Flip).count();
        descriptions.push(match (flips, d) {
            (0, 0) => last.clone(),
            (0, 1) => format!("blow-up of {last}"),
            (0, d) => format!("{} blow-up of {last}", super::times_word(d)),
            (f, d) => format!("{f} flip(s) and {d} blow-down(s) from {last}"),
        });
    }
    let end = transitions.last().expect("terminal event");
    let terminal = Terminal {
        time: Some(end.time),
        description: format!(
            "Mori fibration over {}",
            end.before_after.as_ref().map(|b| pretty_space(&b.after)).unwrap_or_default()
        ),
        last_stage: last,
        overall,
    };
    let times: Vec<Q> = transitions.iter().map(|t| t.time).collect();
    Ok(MmpRunning {
        geometry: Geometry::Polygon { lengths },
        stages: build_stages(&times, descriptions),
        transitions,
        terminal,
    })
}

fn run_flat(labels: Vec<Q>) -> Result<MmpRunning> {
    let transitions = flat_transition_times(&labels)?;
    let n = labels.len();
    let dim = 2 * (n as i64 - 3);
    let base = format!("moduli of flat SU(2) bundles on the {n}-punctured sphere (real dim {dim})");
    let times: Vec<Q> = transitions.iter().map(|t| t.time).collect();
    let end = transitions.iter().rev().find(|t| t.kind == TransitionKind::MoriFibration);
    let terminal = match end {
        Some(e) => Terminal {
            time: Some(e.time),
            description: e.before_after.as_ref().map(|b| b.after.clone()).unwrap_or_default(),
            last_stage: e.before_after.as_ref().map(|b| b.before.clone()).unwrap_or_default(),
            overall: base.clone(),
        },
        None => Terminal {
            time: None,
            description: "trivial running".into(),
            last_stage: base.clone(),
            overall: base.clone(),
        },
    };
    let descriptions = std::iter::once(base.clone())
        .chain(transitions.iter().map(|t| t.before_after.as_ref().map(|b| b.after.clone()).unwrap_or_default()))
        .take(transitions.len().max(1))
        .collect();
    Ok(MmpRunning { geometry: Geometry::Flat { labels }, stages: build_stages(&times, descriptions), transitions, terminal })
}

pub fn run_mmp(geometry: &Geometry) -> Result<MmpRunning> {
    match geometry {
        Geometry::Toric(_) | Geometry::Exceptional { .. } => run_toric(geometry.clone()),
        Geometry::Polygon { lengths } => run_polygon(lengths.clone()),
        Geometry::Flat { labels } => run_flat(labels.clone()),
        Geometry::Flag { weights } => flag_walk(weights),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn pentagon_running() {
        let g = Geometry::Polygon { lengths: [10, 10, 12, 13, 14].iter().map(|&x| qi(x)).collect() };
        let r = run_mmp(&g).unwrap();
        assert_eq!(r.times(), vec![qi(5), qi(7), qi(9), qi(10)]);
        assert_eq!(r.terminal.overall, "thrice blow-up of S²×S²");
        assert_eq!(r.terminal.last_stage, "S²×S²");
        assert_eq!(r.stages.len(), 4);
        for t in &r.transitions[..3] {
            let Some(RegularLagrangian::Labels(l)) = &t.regular_lagrangian else { panic!("labels") };
            assert_eq!(l.looseness, t.time);
            assert!(l.ordering_ok);
        }
    }

    #[test]
    fn simplex_running() {
        let r = run_mmp(&Geometry::Toric(shapes::simplex(2, qi(1)))).unwrap();
        assert_eq!(r.transitions.len(), 1);
        assert_eq!(r.terminal.description, "Mori fibration over point");
    }

    #[test]
    fn flag_and_flat() {
        let r = run_mmp(&Geometry::Flag { weights: vec![qi(2), qi(1), qi(-3)] }).unwrap();
        assert_eq!(r.count(TransitionKind::MoriFibration), 2);
        let r = run_mmp(&Geometry::Flat { labels: vec![q(1, 4); 5] }).unwrap();
        assert!(r.transitions.is_empty());
    }

    #[test]
    fn geometry_json() {
        let js = r#"{"kind":"polygon","lengths":[10,10,"12","13","14"]}"#;
        let g: Geometry = serde_json::from_str(js).unwrap();
        assert!(matches!(g, Geometry::Polygon { .. }));
        let js = r#"{"kind":"toric","dim":2,"normals":[[1,0],[0,1],[-1,0],[0,-1]],"constants":["0","0","-1","-1"]}"#;
        let g: Geometry = serde_json::from_str(js).unwrap();
        let back: Geometry = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(g, back);
    }
}
