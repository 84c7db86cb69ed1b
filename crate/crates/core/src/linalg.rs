//! Exact linear algebra over `Q`.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

pub type QMatrix = Vec<Vec<Q>>;

/// Row-reduces `[a | b]` in place; returns pivot columns.
fn rref(a: &mut QMatrix, ncols: usize) -> Vec<usize> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..a[i].len() {
                    let v = a[r][j];
                    a[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &QMatrix) -> usize {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m = a.clone();
    rref(&mut m, ncols).len()
}

pub fn det(a: &QMatrix) -> Q {
    let n = a.len();
    let mut m = a.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = m[i][c] / m[c][c];
                for j in c..n {
                    let v = m[c][j];
                    m[i][j] -= f * v;
                }
            }
        }
    }
    d
}

pub fn det_i64(a: &[Vec<i64>]) -> Q {
    det(&a.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect())
}

/// Outcome of `a·x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Unique(Vec<Q>),
    /// A particular solution plus the nullity.
    Underdetermined(Vec<Q>, usize),
    Inconsistent,
}

pub fn solve(a: &QMatrix, b: &[Q]) -> Solution {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m: QMatrix = a.iter().zip(b).map(|(r, &bi)| {
        let mut row = r.clone();
        row.push(bi);
        row
    }).collect();
    let pivots = rref(&mut m, ncols);
    for row in m.iter().skip(pivots.len()) {
        if !row[ncols].is_zero() {
            return Solution::Inconsistent;
        }
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols];
    }
    if pivots.len() == ncols {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined(x, ncols - pivots.len())
    }
}

pub fn solve_unique(a: &QMatrix, b: &[Q]) -> Option<Vec<Q>> {
    match solve(a, b) {
        Solution::Unique(x) => Some(x),
        _ => None,
    }
}

/// Basis of the right null space.
pub fn nullspace(a: &QMatrix) -> Vec<Vec<Q>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m = a.clone();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f];
            }
            v
        })
        .collect()
}

/// Maximizes `obj·x` over `{eq·x = b_eq, ineq·x ≥ b_ineq}` by vertex
/// enumeration. Returns `None` when infeasible or without vertices.
pub fn lp_max_by_vertices(
    eqs: &[(Vec<Q>, Q)],
    ineqs: &[(Vec<Q>, Q)],
    obj: &[Q],
    nvars: usize,
) -> Option<(Q, Vec<Q>)> {
    let eq_rank = rank(&eqs.iter().map(|(r, _)| r.clone()).collect());
    let need = nvars.checked_sub(eq_rank)?;
    let mut best: Option<(Q, Vec<Q>)> = None;
    for combo in itertools::Itertools::combinations(0..ineqs.len(), need) {
        let mut a: QMatrix = eqs.iter().map(|(r, _)| r.clone()).collect();
        let mut b: Vec<Q> = eqs.iter().map(|(_, v)| *v).collect();
        for &i in &combo {
            a.push(ineqs[i].0.clone());
            b.push(ineqs[i].1);
        }
        let Some(x) = solve_unique(&a, &b) else { continue };
        let ok = ineqs.iter().all(|(r, c)| dotq(r, &x) >= *c);
        if !ok {
            continue;
        }
        let val = dotq(obj, &x);
        if best.as_ref().is_none_or(|(bv, bx)| val > *bv || (val == *bv && x < *bx)) {
            best = Some((val, x));
        }
    }
    best
}

pub fn dotq(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_unimodular(a: &[Vec<i64>]) -> bool {
    det_i64(a).abs() == Q::one()
}
