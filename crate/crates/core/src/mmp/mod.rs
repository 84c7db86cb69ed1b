//! Minimal-model-program runnings for toric manifolds, polygon spaces,
//! flat-bundle moduli and flag varieties.

mod flag;
mod flat;
mod geometry;
mod looseness;
mod polygon;
mod toric;

use serde::{Deserialize, Serialize};

use crate::rational::{serde_q, serde_qopt, serde_qvec, Q};

pub use flag::flag_walk;
pub use flat::{flat_fibration_time, flat_nonempty, flat_transition_times, running_labels};
pub use geometry::{run_mmp, Geometry};
pub use looseness::{
    looseness_pants, looseness_triangle, piece_defects, regular_labels, regular_labels_fixed, LabelMode, LabelResult, Slot,
    Triangulation,
};
pub use polygon::{classify_polygon_transition, polygon_nonempty, polygon_transition_times};
pub use toric::{classify_toric_transition, toric_regular_fiber, toric_transition_times, FiberReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransitionKind {
    Flip,
    DivisorialContraction,
    MoriFibration,
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Locus {
    #[serde(with = "serde_qvec")]
    pub mu: Vec<Q>,
    /// Facets at distance exactly `t` from `mu`.
    pub active: Vec<usize>,
    /// The minimal dependent facet set producing this point.
    pub circuit: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignWitness {
    /// `+1` / `−1` per edge, normalized so that `Σε > 0`.
    pub signs: Vec<i8>,
    /// The degenerate polygon as an equation among edge lengths at `t`.
    pub equation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducibleWitness {
    pub subset: Vec<usize>,
    #[serde(with = "serde_q")]
    pub h: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// Toric: dependent active facets at the listed points.
    Degenerate { loci: Vec<Locus> },
    /// Toric: the shrunken polytope loses its interior.
    Collapse {
        loci: Vec<Locus>,
        #[serde(with = "serde_qvec")]
        center: Vec<Q>,
        base_dim: usize,
    },
    SignVectors { vectors: Vec<SignWitness> },
    /// Edge lengths or labels reaching the boundary of their range.
    EdgeCollapse { edges: Vec<usize> },
    Reducible { pairs: Vec<ReducibleWitness> },
    /// Odd subset whose flat-bundle inequality becomes sharp.
    Treloar { subset: Vec<usize> },
    WeylWall { walls: Vec<usize>, blocks_after: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeforeAfter {
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RegularLagrangian {
    Fiber(FiberReport),
    Labels(LabelResult),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    #[serde(with = "serde_q")]
    pub time: Q,
    pub kind: TransitionKind,
    pub witness: Witness,
    pub multiplicity: Option<i64>,
    pub regular_lagrangian: Option<RegularLagrangian>,
    pub before_after: Option<BeforeAfter>,
}

/// Space description on `[from, to)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    #[serde(with = "serde_q")]
    pub from: Q,
    #[serde(with = "serde_qopt")]
    pub to: Option<Q>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Terminal {
    #[serde(with = "serde_qopt")]
    pub time: Option<Q>,
    /// What the space becomes at the terminal time.
    pub description: String,
    /// The space just before the terminal time.
    pub last_stage: String,
    /// The initial space described relative to the last stage.
    pub overall: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MmpRunning {
    pub geometry: Geometry,
    pub transitions: Vec<Transition>,
    pub stages: Vec<Stage>,
    pub terminal: Terminal,
}

impl MmpRunning {
    pub fn times(&self) -> Vec<Q> {
        self.transitions.iter().map(|t| t.time).collect()
    }

    pub fn count(&self, kind: TransitionKind) -> usize {
        self.transitions.iter().filter(|t| t.kind == kind).count()
    }
}

pub(crate) fn times_word(k: usize) -> String {
    match k {
        1 => "once".into(),
        2 => "twice".into(),
        3 => "thrice".into(),
        k => format!("{k}-fold"),
    }
}

/// Stages from the ordered transition times and per-interval descriptions.
pub(crate) fn build_stages(times: &[Q], descriptions: Vec<String>) -> Vec<Stage> {
    let mut from = Q::from_integer(0);
    let mut out = Vec::new();
    for (i, d) in descriptions.into_iter().enumerate() {
        let to = times.get(i).copied();
        out.push(Stage { from, to, description: d });
        if let Some(t) = to {
            from = t;
        }
    }
    out
}
