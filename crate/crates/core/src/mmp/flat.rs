use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::looseness::{regular_labels_ordered, LabelMode};
use super::{BeforeAfter, ReducibleWitness, RegularLagrangian, Transition, TransitionKind, Witness};
use crate::error::{Error, Result};
use crate::rational::Q;

fn quarter() -> Q {
    Q::new(1, 4)
}

fn half() -> Q {
    Q::new(1, 2)
}

/// Labels of the running at time `t`: `(λ_i − t)/(1 − 4t)`.
pub fn running_labels(labels: &[Q], t: Q) -> Vec<Q> {
    let d = Q::one() - t * Q::from_integer(4);
    labels.iter().map(|l| (*l - t) / d).collect()
}

fn in_range(labels: &[Q]) -> bool {
    labels.iter().all(|l| !l.is_negative() && *l <= half())
}

/// Empty iff some odd `I`, `|I| = 2k+1`, has `Σ_I λ > k + Σ_{I^c} λ`.
pub fn flat_nonempty(labels: &[Q]) -> bool {
    violated_subset(labels).is_none()
}

fn violated_subset(labels: &[Q]) -> Option<Vec<usize>> {
    let n = labels.len();
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as i64;
        if size % 2 == 0 {
            continue;
        }
        let k = (size - 1) / 2;
        let (mut inside, mut outside) = (Q::zero(), Q::zero());
        for (i, l) in labels.iter().enumerate() {
            if mask >> i & 1 == 1 {
                inside += l;
            } else {
                outside += l;
            }
        }
        if inside > Q::from_integer(k) + outside {
            return Some((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    None
}

/// First time a running label reaches 0 or 1/2.
pub fn flat_fibration_time(labels: &[Q]) -> Q {
    let dev = labels.iter().map(|l| (*l - quarter()).abs()).max().unwrap_or_else(Q::zero);
    quarter() - dev
}

/// Earliest time at which an odd-subset inequality becomes sharp.
fn emptiness_time(labels: &[Q]) -> Option<(Q, Vec<usize>)> {
    let n = labels.len();
    let mut best: Option<(Q, Vec<usize>)> = None;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as i64;
        if size % 2 == 0 {
            continue;
        }
        let k = Q::from_integer((size - 1) / 2);
        let mut a = Q::zero();
        for (i, l) in labels.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a += l;
            } else {
                a -= l;
            }
        }
        // f(t) = (a − k) + t·(4k − |I| + |I^c|)
        let slope = k * Q::from_integer(4) - Q::from_integer(size) + Q::from_integer(n as i64 - size);
        if !slope.is_positive() {
            continue;
        }
        let t = (k - a) / slope;
        if t.is_positive() && t < quarter() && best.as_ref().is_none_or(|(b, _)| t < *b) {
            best = Some((t, (0..n).filter(|i| mask >> i & 1 == 1).collect()));
        }
    }
    best
}

fn validate(labels: &[Q]) -> Result<()> {
    if labels.len() < 3 {
        return Err(Error::InvalidGeometry("need at least 3 markings".into()));
    }
    if !in_range(labels) {
        return Err(Error::InvalidGeometry("labels must lie in [0, 1/2]".into()));
    }
    if !flat_nonempty(labels) {
        return Err(Error::Infeasible("flat-bundle moduli space is empty".into()));
    }
    Ok(())
}

/// Terminal event time, if it occurs before `t = 1/4`.
fn terminal(labels: &[Q]) -> Option<Transition> {
    let fib = flat_fibration_time(labels);
    let empty = emptiness_time(labels);
    let n = labels.len();
    match empty {
        Some((te, subset)) if te < fib => Some(Transition {
            time: te,
            kind: TransitionKind::MoriFibration,
            witness: Witness::Treloar { subset },
            multiplicity: None,
            regular_lagrangian: None,
            before_after: Some(BeforeAfter { before: format!("P{}", n - 3), after: "empty".into() }),
        }),
        _ if fib.is_positive() && fib < quarter() => {
            let edges: Vec<usize> = (0..n).filter(|&i| (labels[i] - quarter()).abs() == quarter() - fib).collect();
            Some(Transition {
                time: fib,
                kind: TransitionKind::MoriFibration,
                witness: Witness::EdgeCollapse { edges },
                multiplicity: None,
                regular_lagrangian: None,
                before_after: Some(BeforeAfter {
                    before: format!("P1-fibration of moduli with {n} markings"),
                    after: format!("moduli with {} markings", n - 1),
                }),
            })
        }
        _ => None,
    }
}

pub fn flat_transition_times(labels: &[Q]) -> Result<Vec<Transition>> {
    validate(labels)?;
    let n = labels.len();
    let end = terminal(labels);
    let t_end = end.as_ref().map_or(quarter(), |t| t.time);
    let mut by_t: BTreeMap<Q, Vec<ReducibleWitness>> = BTreeMap::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let s = subset.len() as i64;
        let sl: Q = subset.iter().map(|&i| labels[i]).sum();
        for twice_h in 0..=s {
            let h = Q::new(twice_h, 2);
            let den = h * Q::from_integer(4) - Q::from_integer(s);
            if den.is_zero() {
                continue;
            }
            let t = (h - sl) / den;
            if !t.is_positive() || t >= t_end {
                continue;
            }
            if !in_range(&running_labels(labels, t)) {
                continue;
            }
            by_t.entry(t).or_default().push(ReducibleWitness { subset: subset.clone(), h });
        }
    }
    let mut out = Vec::new();
    for (t, pairs) in by_t {
        let size = pairs[0].subset.len();
        let (big, small) = (size.max(n - size), size.min(n - size));
        let (kind, multiplicity) = match small {
            0 | 1 => (TransitionKind::MoriFibration, None),
            2 => (TransitionKind::DivisorialContraction, Some((big - small) as i64)),
            _ => (TransitionKind::Flip, Some((big - small) as i64)),
        };
        let first = &pairs[0].subset;
        let order: Vec<usize> = first.iter().copied().chain((0..n).filter(|i| !first.contains(i))).collect();
        let regular = regular_labels_ordered(labels, &order, LabelMode::Pants, t).ok().map(RegularLagrangian::Labels);
        out.push(Transition {
            time: t,
            kind,
            witness: Witness::Reducible { pairs },
            multiplicity,
            regular_lagrangian: regular,
            before_after: Some(BeforeAfter {
                before: format!("P{}", big.saturating_sub(2)),
                after: if small >= 2 { format!("P{}", small - 2) } else { "empty".into() },
            }),
        });
    }
    out.extend(end);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn balanced_labels_are_trivial() {
        for n in [4, 5] {
            let l = vec![q(1, 4); n];
            assert!(flat_transition_times(&l).unwrap().is_empty());
            assert_eq!(running_labels(&l, q(1, 10)), l);
        }
    }

    #[test]
    fn nonemptiness() {
        assert!(flat_nonempty(&[q(1, 4); 4]));
        assert!(!flat_nonempty(&[q(1, 2), q(0, 1), q(0, 1)]));
        let l = [q(3, 10), q(3, 10), q(3, 10), q(9, 20)];
        assert!(flat_nonempty(&l));
    }

    #[test]
    fn fibration_time_formula() {
        assert_eq!(flat_fibration_time(&[q(1, 8), q(1, 4), q(3, 10)]), q(1, 8));
    }
}
