use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{serde_q, serde_qopt, serde_qvec, Q};

/// Halved triangle defect `min(μ_i+μ_j−μ_k)/2`.
pub fn looseness_triangle(a: Q, b: Q, c: Q) -> Q {
    let m = a.max(b).max(c);
    (a + b + c - m - m) / Q::from_integer(2)
}

/// `min(min(μ_i+μ_j−μ_k), 1−μ₁−μ₂−μ₃)`.
pub fn looseness_pants(a: Q, b: Q, c: Q) -> Q {
    let m = a.max(b).max(c);
    (a + b + c - m - m).min(Q::one() - a - b - c)
}

/// A boundary-or-diagonal position in a caterpillar decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    Edge(usize),
    Diagonal(usize),
}

/// Caterpillar triangulation of an `n`-gon: diagonal `j` separates edges
/// `0..=j+1` from the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub n: usize,
}

impl Triangulation {
    pub fn caterpillar(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidGeometry(format!("caterpillar needs n ≥ 4, got {n}")));
        }
        Ok(Triangulation { n })
    }

    pub fn num_diagonals(&self) -> usize {
        self.n - 3
    }

    /// Edge subsets `I_j` cut off by the diagonals, `|I_j| = j+1`.
    pub fn nested_subsets(&self) -> Vec<Vec<usize>> {
        (1..=self.num_diagonals()).map(|j| (0..=j).collect()).collect()
    }

    pub fn pieces(&self) -> Vec<[Slot; 3]> {
        let n = self.n;
        let mut out = vec![[Slot::Edge(0), Slot::Edge(1), Slot::Diagonal(0)]];
        for j in 1..n - 3 {
            out.push([Slot::Diagonal(j - 1), Slot::Edge(j + 1), Slot::Diagonal(j)]);
        }
        out.push([Slot::Diagonal(n - 4), Slot::Edge(n - 2), Slot::Edge(n - 1)]);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelMode {
    Triangle,
    Pants,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelResult {
    #[serde(with = "serde_qvec")]
    pub diagonals: Vec<Q>,
    /// Common defect of every piece: the unhalved triangle defect, or the
    /// pants looseness.
    #[serde(with = "serde_q")]
    pub looseness: Q,
    /// Active branch per piece.
    pub branches: Vec<usize>,
    /// Edge order the caterpillar was laid on.
    pub edge_order: Vec<usize>,
    #[serde(with = "serde_qopt")]
    pub first_fibration: Option<Q>,
    /// Whether the first fibration happens strictly after the looseness.
    pub ordering_ok: bool,
}

// A linear form over (μ_0..μ_{k-1}, l) plus a constant.
type Form = (Vec<Q>, Q);

fn slot_form(slot: Slot, lengths: &[Q], nvars: usize) -> Form {
    let mut v = vec![Q::zero(); nvars];
    match slot {
        Slot::Edge(i) => (v, lengths[i]),
        Slot::Diagonal(j) => {
            v[j] = Q::one();
            (v, Q::zero())
        }
    }
}

fn combine(terms: &[(i64, &Form)], constant: Q) -> Form {
    let nvars = terms[0].1 .0.len();
    let mut v = vec![Q::zero(); nvars];
    let mut c = constant;
    for (k, (f, fc)) in terms {
        for (x, y) in v.iter_mut().zip(f) {
            *x += y * *k;
        }
        c += fc * *k;
    }
    (v, c)
}

fn branch_forms(piece: &[Slot; 3], lengths: &[Q], nvars: usize, mode: LabelMode) -> Vec<Form> {
    let f: Vec<Form> = piece.iter().map(|s| slot_form(*s, lengths, nvars)).collect();
    let mut out = vec![
        combine(&[(1, &f[0]), (1, &f[1]), (-1, &f[2])], Q::zero()),
        combine(&[(1, &f[0]), (-1, &f[1]), (1, &f[2])], Q::zero()),
        combine(&[(-1, &f[0]), (1, &f[1]), (1, &f[2])], Q::zero()),
    ];
    if mode == LabelMode::Pants {
        out.push(combine(&[(-1, &f[0]), (-1, &f[1]), (-1, &f[2])], Q::one()));
    }
    out
}

pub(crate) fn first_fibration_time(lengths: &[Q], mode: LabelMode) -> Q {
    match mode {
        LabelMode::Triangle => lengths.iter().copied().min().expect("nonempty"),
        LabelMode::Pants => super::flat::flat_fibration_time(lengths),
    }
}

fn solve_labels(lengths: &[Q], tri: &Triangulation, mode: LabelMode, fixed_l: Option<Q>) -> Result<LabelResult> {
    if lengths.len() != tri.n {
        return Err(Error::Dimension { expected: tri.n, got: lengths.len() });
    }
    let k = tri.num_diagonals();
    let nvars = k + 1;
    let pieces = tri.pieces();
    let per_piece: Vec<Vec<Form>> = pieces.iter().map(|p| branch_forms(p, lengths, nvars, mode)).collect();
    // e(x) + c = l  ⇔  (e − l)·x = −c ; e(x) + c ≥ l ⇔ (e − l)·x ≥ −c
    let minus_l = |f: &Form| -> (Vec<Q>, Q) {
        let mut v = f.0.clone();
        v[k] -= Q::one();
        (v, -f.1)
    };
    let mut range: Vec<(Vec<Q>, Q)> = Vec::new();
    for j in 0..nvars {
        let mut v = vec![Q::zero(); nvars];
        v[j] = Q::one();
        range.push((v, Q::zero()));
    }
    if mode == LabelMode::Pants {
        for j in 0..k {
            let mut v = vec![Q::zero(); nvars];
            v[j] = -Q::one();
            range.push((v, -Q::new(1, 2)));
        }
    }
    let mut objective = vec![Q::zero(); nvars];
    let mut eq_l: Vec<(Vec<Q>, Q)> = Vec::new();
    match fixed_l {
        Some(l) => {
            let mut v = vec![Q::zero(); nvars];
            v[k] = Q::one();
            eq_l.push((v, l));
        }
        None => objective[k] = Q::one(),
    }
    let nb = per_piece[0].len();
    let mut best: Option<(Q, Vec<Q>, Vec<usize>)> = None;
    for branches in (0..pieces.len()).map(|_| 0..nb).multi_cartesian_product() {
        let mut eqs = eq_l.clone();
        let mut ineqs = range.clone();
        for (forms, &b) in per_piece.iter().zip(&branches) {
            for (i, f) in forms.iter().enumerate() {
                if i == b {
                    eqs.push(minus_l(f));
                } else {
                    ineqs.push(minus_l(f));
                }
            }
        }
        if let Some((val, x)) = linalg::lp_max_by_vertices(&eqs, &ineqs, &objective, nvars) {
            let better = match &best {
                None => true,
                Some((bv, bx, _)) => val > *bv || (val == *bv && x < *bx),
            };
            if better {
                best = Some((val, x, branches));
            }
        }
    }
    let (_, x, branches) = best.ok_or(Error::NoRegularLabelling)?;
    let looseness = x[k];
    let first_fibration = first_fibration_time(lengths, mode);
    Ok(LabelResult {
        diagonals: x[..k].to_vec(),
        looseness,
        branches,
        edge_order: (0..tri.n).collect(),
        first_fibration: Some(first_fibration),
        ordering_ok: first_fibration > looseness,
    })
}

/// Regular labelling maximizing the common defect.
pub fn regular_labels(lengths: &[Q], tri: &Triangulation, mode: LabelMode) -> Result<LabelResult> {
    solve_labels(lengths, tri, mode, None)
}

/// Regular labelling with a prescribed common defect `l`.
pub fn regular_labels_fixed(lengths: &[Q], tri: &Triangulation, mode: LabelMode, l: Q) -> Result<LabelResult> {
    solve_labels(lengths, tri, mode, Some(l))
}

/// Runs [`regular_labels_fixed`] after laying the edges out in `order`.
pub(crate) fn regular_labels_ordered(lengths: &[Q], order: &[usize], mode: LabelMode, l: Q) -> Result<LabelResult> {
    let tri = Triangulation::caterpillar(lengths.len())?;
    let permuted: Vec<Q> = order.iter().map(|&i| lengths[i]).collect();
    let mut res = regular_labels_fixed(&permuted, &tri, mode, l)?;
    res.edge_order = order.to_vec();
    Ok(res)
}

/// Per-piece defects of a labelling, in the units of [`LabelResult::looseness`].
pub fn piece_defects(lengths: &[Q], tri: &Triangulation, diagonals: &[Q], mode: LabelMode) -> Vec<Q> {
    let val = |s: Slot| match s {
        Slot::Edge(i) => lengths[i],
        Slot::Diagonal(j) => diagonals[j],
    };
    tri.pieces()
        .iter()
        .map(|p| {
            let (a, b, c) = (val(p[0]), val(p[1]), val(p[2]));
            match mode {
                LabelMode::Triangle => looseness_triangle(a, b, c) * Q::from_integer(2),
                LabelMode::Pants => looseness_pants(a, b, c),
            }
        })
        .collect()
}
