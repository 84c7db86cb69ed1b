use num_traits::Zero;

use super::{build_stages, BeforeAfter, MmpRunning, Terminal, Transition, TransitionKind, Witness};
use crate::error::{Error, Result};
use crate::rational::Q;

fn blocks_label(blocks: &[usize]) -> String {
    let n: usize = blocks.iter().sum();
    if blocks.len() == 1 {
        return "point".into();
    }
    if blocks.iter().all(|&b| b == 1) {
        return format!("Fl(C{n})");
    }
    if blocks.len() == 2 {
        let k = blocks[0].min(blocks[1]);
        return if k == 1 { format!("P{}", n - 1) } else { format!("Gr({k},{n})") };
    }
    format!("Fl({};C{n})", blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","))
}

/// Walks `λ − tρ`, projecting `ρ` onto each wall it reaches.
pub fn flag_walk(weights: &[Q]) -> Result<MmpRunning> {
    let n = weights.len();
    if n < 2 || weights.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidGeometry("weight must be strictly dominant".into()));
    }
    let rho: Vec<Q> = (0..n).map(|i| Q::new(n as i64 - 1 - 2 * i as i64, 2)).collect();
    let mut blocks: Vec<usize> = vec![1; n];
    let mut lam = weights.to_vec();
    let mut t = Q::zero();
    let mut transitions = Vec::new();
    let mut descriptions = vec![blocks_label(&blocks)];
    while blocks.len() > 1 {
        // projected ρ, constant on blocks
        let mut cur = Vec::with_capacity(n);
        let mut start = 0;
        for &b in &blocks {
            let avg = rho[start..start + b].iter().sum::<Q>() / Q::from_integer(b as i64);
            cur.extend(std::iter::repeat_n(avg, b));
            start += b;
        }
        let mut ends = Vec::new();
        let mut acc = 0;
        for &b in &blocks[..blocks.len() - 1] {
            acc += b;
            ends.push(acc - 1);
        }
        let dt = ends
            .iter()
            .map(|&i| (lam[i] - lam[i + 1]) / (cur[i] - cur[i + 1]))
            .min()
            .expect("at least two blocks");
        for (l, r) in lam.iter_mut().zip(&cur) {
            *l -= *r * dt;
        }
        t += dt;
        let walls: Vec<usize> = (0..ends.len()).filter(|&k| lam[ends[k]] == lam[ends[k] + 1]).collect();
        let before = blocks_label(&blocks);
        let mut merged = Vec::new();
        let mut k = 0;
        while k < blocks.len() {
            let mut b = blocks[k];
            while walls.contains(&k) {
                k += 1;
                b += blocks[k];
            }
            merged.push(b);
            k += 1;
        }
        blocks = merged;
        let after = blocks_label(&blocks);
        transitions.push(Transition {
            time: t,
            kind: TransitionKind::MoriFibration,
            witness: Witness::WeylWall { walls: walls.iter().map(|&w| ends[w]).collect(), blocks_after: blocks.clone() },
            multiplicity: None,
            regular_lagrangian: None,
            before_after: Some(BeforeAfter { before, after: after.clone() }),
        });
        descriptions.push(after);
    }
    descriptions.pop();
    let times: Vec<Q> = transitions.iter().map(|tr| tr.time).collect();
    let stages = build_stages(&times, descriptions.clone());
    let last = descriptions.last().cloned().unwrap_or_else(|| "point".into());
    Ok(MmpRunning {
        geometry: super::Geometry::Flag { weights: weights.to_vec() },
        terminal: Terminal {
            time: times.last().copied(),
            description: "point".into(),
            last_stage: last,
            overall: blocks_label(&vec![1; n]),
        },
        transitions,
        stages,
    })
}
