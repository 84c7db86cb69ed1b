use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::looseness::{regular_labels_ordered, LabelMode};
use super::{times_word, BeforeAfter, RegularLagrangian, SignWitness, Transition, TransitionKind, Witness};
use crate::error::{Error, Result};
use crate::rational::{format_q, Q};

pub fn polygon_nonempty(lengths: &[Q]) -> bool {
    let s: Q = lengths.iter().sum();
    lengths.len() >= 3 && lengths.iter().all(|l| l.is_positive() && *l + *l <= s)
}

fn validate(lengths: &[Q]) -> Result<()> {
    if lengths.len() < 3 {
        return Err(Error::InvalidGeometry("a polygon needs at least 3 edges".into()));
    }
    if !polygon_nonempty(lengths) {
        return Err(Error::Infeasible("polygon space is empty".into()));
    }
    Ok(())
}

fn equation(lengths: &[Q], t: Q, signs: &[i8]) -> String {
    let side = |s: i8| signs.iter().zip(lengths).filter(|(e, _)| **e == s).map(|(_, l)| format_q(&(*l - t))).join("+");
    format!("{}={}", side(1), side(-1))
}

/// Time at which the moduli space becomes empty, with the longest edge.
fn emptiness(lengths: &[Q]) -> (Q, usize) {
    let n = lengths.len() as i64;
    let s: Q = lengths.iter().sum();
    let (imax, lmax) = lengths.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))).unwrap();
    ((s - *lmax * Q::from_integer(2)) / Q::from_integer(n - 2), imax)
}

/// Terminal time and whether it is a fibration (an edge reaching zero).
fn terminal(lengths: &[Q]) -> (Q, bool) {
    let fib = *lengths.iter().min().unwrap();
    let (empty, _) = emptiness(lengths);
    if empty < fib {
        (empty, false)
    } else {
        (fib, true)
    }
}

pub fn polygon_transition_times(lengths: &[Q]) -> Result<Vec<Transition>> {
    validate(lengths)?;
    let n = lengths.len();
    let (t_end, fibration) = terminal(lengths);
    let mut by_t: BTreeMap<Q, Vec<Vec<i8>>> = BTreeMap::new();
    for mask in 0u32..(1 << n) {
        let signs: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
        let se: i64 = signs.iter().map(|&e| i64::from(e)).sum();
        if se <= 0 {
            continue;
        }
        let sel: Q = signs.iter().zip(lengths).map(|(&e, l)| *l * i64::from(e)).sum();
        let t = sel / Q::from_integer(se);
        if t.is_positive() && t < t_end {
            by_t.entry(t).or_default().push(signs);
        }
    }
    let mut out = Vec::new();
    for (t, vecs) in by_t {
        let mut tr = classify_polygon_transition(lengths, t, &vecs[0])?;
        if vecs.len() > 1 {
            let all = vecs
                .iter()
                .map(|s| SignWitness { signs: s.clone(), equation: equation(lengths, t, s) })
                .collect();
            tr.witness = Witness::SignVectors { vectors: all };
        }
        out.push(tr);
    }
    out.push(terminal_transition(lengths, t_end, fibration));
    Ok(out)
}

fn terminal_transition(lengths: &[Q], t: Q, fibration: bool) -> Transition {
    let n = lengths.len();
    if fibration {
        let edges: Vec<usize> = (0..n).filter(|&i| lengths[i] == t).collect();
        let base = base_description(lengths, t, &edges);
        Transition {
            time: t,
            kind: TransitionKind::MoriFibration,
            witness: Witness::EdgeCollapse { edges: edges.clone() },
            multiplicity: None,
            regular_lagrangian: None,
            before_after: Some(BeforeAfter { before: last_stage_fibration(lengths, &edges, &base), after: base }),
        }
    } else {
        let (_, imax) = emptiness(lengths);
        let signs: Vec<i8> = (0..n).map(|i| if i == imax { -1 } else { 1 }).collect();
        Transition {
            time: t,
            kind: TransitionKind::MoriFibration,
            witness: Witness::SignVectors {
                vectors: vec![SignWitness { equation: equation(lengths, t, &signs), signs }],
            },
            multiplicity: None,
            regular_lagrangian: None,
            before_after: Some(BeforeAfter { before: format!("P{}", n - 3), after: "point".into() }),
        }
    }
}

fn base_description(lengths: &[Q], t: Q, collapsing: &[usize]) -> String {
    let rest: Vec<Q> = (0..lengths.len()).filter(|i| !collapsing.contains(i)).map(|i| lengths[i] - t).collect();
    match rest.len() {
        0..=3 => "point".into(),
        _ => format!("polygon space M({})", rest.iter().map(format_q).join(",")),
    }
}

fn last_stage_fibration(lengths: &[Q], collapsing: &[usize], base: &str) -> String {
    let k = collapsing.len();
    let rest = lengths.len() - k;
    if rest == 0 {
        return format!("polygon space of {} equal edges", lengths.len());
    }
    let fiber = match k {
        1 => "S2".to_string(),
        2 => "S2xS2".to_string(),
        k => format!("(S2)^{k}"),
    };
    if base == "point" {
        fiber
    } else {
        format!("{fiber}-bundle over {base}")
    }
}

pub fn classify_polygon_transition(lengths: &[Q], t: Q, signs: &[i8]) -> Result<Transition> {
    if signs.len() != lengths.len() || signs.iter().any(|e| e.abs() != 1) {
        return Err(Error::InvalidGeometry("sign vector does not match the edges".into()));
    }
    let residual: Q = signs.iter().zip(lengths).map(|(&e, l)| (*l - t) * i64::from(e)).sum();
    if !residual.is_zero() {
        return Err(Error::InvalidGeometry(format!("sign vector is not degenerate at t = {}", format_q(&t))));
    }
    let flip_all = signs.iter().map(|&e| i64::from(e)).sum::<i64>() < 0;
    let signs: Vec<i8> = signs.iter().map(|&e| if flip_all { -e } else { e }).collect();
    let plus = signs.iter().filter(|&&e| e == 1).count();
    let minus = signs.len() - plus;
    if plus == minus {
        return Err(Error::InvalidGeometry("balanced sign vectors give no finite time".into()));
    }
    let proj = |k: usize| if k < 2 { "empty".to_string() } else { format!("P{}", k - 2) };
    let (kind, multiplicity) = match minus {
        1 => (TransitionKind::MoriFibration, None),
        2 => (TransitionKind::DivisorialContraction, Some((plus - minus) as i64)),
        _ => (TransitionKind::Flip, Some((plus - minus) as i64)),
    };
    let order: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] == 1).chain((0..signs.len()).filter(|&i| signs[i] == -1)).collect();
    let regular = regular_labels_ordered(lengths, &order, LabelMode::Triangle, t).ok().map(RegularLagrangian::Labels);
    Ok(Transition {
        time: t,
        kind,
        witness: Witness::SignVectors { vectors: vec![SignWitness { equation: equation(lengths, t, &signs), signs }] },
        multiplicity,
        regular_lagrangian: regular,
        before_after: Some(BeforeAfter { before: proj(plus), after: proj(minus) }),
    })
}

/// Last-stage description and the blow-up count phrase for the whole running.
pub(crate) fn describe(transitions: &[Transition]) -> (String, String) {
    let last = transitions.last().and_then(|t| t.before_after.as_ref()).map(|b| b.before.clone()).unwrap_or_default();
    let blowdowns = transitions.iter().filter(|t| t.kind == TransitionKind::DivisorialContraction).count();
    let flips = transitions.iter().filter(|t| t.kind == TransitionKind::Flip).count();
    let pretty = pretty_space(&last);
    let overall = match (flips, blowdowns) {
        (0, 0) => pretty.clone(),
        (0, 1) => format!("blow-up of {pretty}"),
        (0, d) => format!("{} blow-up of {pretty}", times_word(d)),
        (f, d) => format!("{f} flip(s) and {d} blow-down(s) from {pretty}"),
    };
    (pretty, overall)
}

pub(crate) fn pretty_space(s: &str) -> String {
    s.replace("S2xS2", "S²×S²").replace("S2", "S²")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn lens(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn pentagon_times() {
        let l = lens(&[10, 10, 12, 13, 14]);
        let ts = polygon_transition_times(&l).unwrap();
        let times: Vec<Q> = ts.iter().map(|t| t.time).collect();
        assert_eq!(times, vec![qi(5), qi(7), qi(9), qi(10)]);
        let Witness::SignVectors { vectors } = &ts[0].witness else { panic!() };
        assert_eq!(vectors[0].equation, "5+5+7=8+9");
        assert!(ts[..3].iter().all(|t| t.kind == TransitionKind::DivisorialContraction));
        assert_eq!(ts[3].before_after.as_ref().unwrap().before, "S2xS2");
        assert_eq!(ts[3].before_after.as_ref().unwrap().after, "point");
        let (last, overall) = describe(&ts);
        assert_eq!(last, "S²×S²");
        assert_eq!(overall, "thrice blow-up of S²×S²");
    }

    #[test]
    fn equal_quadrilateral_only_collapses() {
        let ts = polygon_transition_times(&lens(&[1, 1, 1, 1])).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].time, qi(1));
    }

    #[test]
    fn formula_cases() {
        let l = lens(&[1, 1, 1, 1, 1, 3]);
        let tr = classify_polygon_transition(&l, Q::new(1, 2), &[1, 1, 1, 1, -1, -1]);
        assert!(tr.is_err());
        let l = lens(&[3, 3, 3, 3, 4, 4]);
        // 4·(3−t) − 2·(4−t) = 0 at t = 2
        let tr = classify_polygon_transition(&l, qi(2), &[1, 1, 1, 1, -1, -1]).unwrap();
        assert_eq!(tr.multiplicity, Some(2));
        assert_eq!(tr.before_after.unwrap(), BeforeAfter { before: "P2".into(), after: "P0".into() });
    }

    #[test]
    fn rejects_empty_moduli() {
        assert!(polygon_transition_times(&lens(&[1, 1, 5])).is_err());
    }
}
