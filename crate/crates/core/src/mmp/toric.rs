use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{BeforeAfter, Locus, Transition, TransitionKind, Witness};
use crate::error::{Error, Result};
use crate::linalg::{self, Solution};
use crate::polytope::{Polytope, Shrunk, VertexData};
use crate::rational::{serde_q, serde_qvec, Q};

/// Equal-gap fiber at a transition together with its regularity verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    #[serde(with = "serde_qvec")]
    pub point: Vec<Q>,
    #[serde(with = "serde_qvec")]
    pub gaps: Vec<Q>,
    #[serde(with = "serde_q")]
    pub t: Q,
    /// Facets required to sit at distance `t`.
    pub active: Vec<usize>,
    pub regular: bool,
    /// The transition is the terminal fibration rather than a flip or
    /// contraction.
    pub terminal: bool,
}

fn affine_dim(vs: &[VertexData]) -> usize {
    if vs.len() <= 1 {
        return 0;
    }
    let base = &vs[0].point;
    let rows: Vec<Vec<Q>> = vs[1..].iter().map(|v| v.point.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    linalg::rank(&rows)
}

pub(crate) fn describe_vertices(dim: usize, nverts: usize) -> String {
    match dim {
        0 => "point".into(),
        1 => "P1".into(),
        2 => format!("toric surface with {nverts} vertices"),
        k => format!("toric {k}-fold with {nverts} vertices"),
    }
}

/// Transition times grouped by `t`; the collapse time is always last.
fn grouped_times(p: &Polytope) -> (BTreeMap<Q, Vec<Locus>>, Q) {
    let cap = p.collapse_time();
    let mut by_t: BTreeMap<Q, Vec<Locus>> = BTreeMap::new();
    for d in p.degenerate_locus() {
        by_t.entry(d.t).or_default().push(Locus { mu: d.mu, active: d.active, circuit: d.circuit });
    }
    by_t.entry(cap).or_default();
    (by_t, cap)
}

/// All transition times of the anticanonical running, each classified.
pub fn toric_transition_times(p: &Polytope) -> Vec<Transition> {
    let (by_t, _) = grouped_times(p);
    by_t.keys()
        .map(|&t| classify_toric_transition(p, t).expect("listed times are transition times"))
        .collect()
}

pub fn classify_toric_transition(p: &Polytope, t: Q) -> Result<Transition> {
    let (by_t, cap) = grouped_times(p);
    let Some(loci) = by_t.get(&t).cloned() else {
        return Err(Error::NotATransition(t));
    };
    let mut nearest = t;
    for &o in by_t.keys() {
        if o != t {
            nearest = nearest.min((o - t).abs());
        }
    }
    let delta = nearest / Q::from_integer(2);
    let before = p.shrink(t - delta);
    let before_n = match &before {
        Shrunk::Polytope(b) => b.vertices().len(),
        _ => return Err(Error::Infeasible("polytope degenerates before the transition".into())),
    };
    let terminal_here = t == cap;
    let after = if terminal_here { Shrunk::Empty } else { p.shrink(t + delta) };
    let after_poly = after.polytope().filter(|_| !terminal_here);
    let Some(after_p) = after_poly else {
        let limit = p.shrink(cap);
        let limit_vs = match &limit {
            Shrunk::LowerDimensional(v) => v.clone(),
            _ => Vec::new(),
        };
        let base_dim = affine_dim(&limit_vs);
        let k = Q::from_integer(limit_vs.len().max(1) as i64);
        let center: Vec<Q> =
            (0..p.dim()).map(|i| limit_vs.iter().map(|v| v.point[i]).sum::<Q>() / k).collect();
        let loci = if loci.is_empty() {
            let active = p.facet_gaps(&center).iter().enumerate().filter(|(_, g)| **g == t).map(|(j, _)| j).collect();
            vec![Locus { mu: center.clone(), active, circuit: Vec::new() }]
        } else {
            loci
        };
        return Ok(Transition {
            time: t,
            kind: TransitionKind::MoriFibration,
            witness: Witness::Collapse { loci, center, base_dim },
            multiplicity: None,
            regular_lagrangian: None,
            before_after: Some(BeforeAfter {
                before: describe_vertices(p.dim(), before_n),
                after: describe_vertices(base_dim, limit_vs.len()),
            }),
        });
    };
    let Shrunk::Polytope(before_p) = &before else { unreachable!() };
    let after_n = after_p.vertices().len();
    let touches = |q: &Polytope, j: usize| q.vertices().iter().any(|v| v.active.contains(&j));
    let vanished: Vec<usize> = (0..p.num_facets()).filter(|&j| touches(before_p, j) && !touches(after_p, j)).collect();
    let (kind, before_after) = if vanished.is_empty() {
        (
            TransitionKind::Flip,
            BeforeAfter {
                before: describe_vertices(p.dim(), before_n),
                after: describe_vertices(p.dim(), after_n),
            },
        )
    } else {
        (
            TransitionKind::DivisorialContraction,
            BeforeAfter {
                before: format!("{} with facet {:?}", describe_vertices(p.dim(), before_n), vanished),
                after: describe_vertices(p.dim(), after_n),
            },
        )
    };
    Ok(Transition {
        time: t,
        kind,
        witness: Witness::Degenerate { loci },
        multiplicity: Some(before_n as i64 - after_n as i64),
        regular_lagrangian: None,
        before_after: Some(before_after),
    })
}

/// The point at distance `t` from every facet of the transition's circuit.
pub fn toric_regular_fiber(p: &Polytope, tr: &Transition) -> Result<FiberReport> {
    let t = tr.time;
    let (loci, terminal) = match &tr.witness {
        Witness::Degenerate { loci } => (loci, false),
        Witness::Collapse { loci, .. } => (loci, true),
        _ => return Err(Error::InvalidGeometry("not a toric transition".into())),
    };
    let locus = loci.first().ok_or(Error::NotATransition(t))?;
    let point = if terminal {
        locus.mu.clone()
    } else {
        let rows: Vec<Vec<Q>> = locus
            .circuit
            .iter()
            .map(|&j| p.normals()[j].iter().map(|&x| Q::from_integer(x)).collect())
            .collect();
        let rhs: Vec<Q> = locus.circuit.iter().map(|&j| p.constants()[j] + t).collect();
        match linalg::solve(&rows, &rhs) {
            Solution::Unique(x) => x,
            Solution::Underdetermined(_, k) => {
                return Err(Error::Singular(format!("equal-gap system on facets {:?} has nullity {k}", locus.circuit)))
            }
            Solution::Inconsistent => {
                return Err(Error::Singular(format!("equal-gap system on facets {:?} is inconsistent", locus.circuit)))
            }
        }
    };
    let gaps = p.facet_gaps(&point);
    let circuit = &locus.circuit;
    let regular = !circuit.is_empty()
        && circuit.iter().all(|&j| gaps[j] == t)
        && gaps.iter().enumerate().all(|(j, g)| circuit.contains(&j) || *g > t);
    Ok(FiberReport { point, gaps, t, active: circuit.clone(), regular, terminal })
}
