//! Linear algebra over truncated Novikov series with valuation pivoting.

use num_traits::Zero;

use super::coeff::Coefficient;
use super::series::{Series, Valuation};
use crate::error::{Error, Result};
use crate::rational::Q;

pub type SeriesMatrix<C> = Vec<Vec<Series<C>>>;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// Set when leftover entries vanished only below the input order.
    pub precision_warning: bool,
    #[serde(with = "crate::rational::serde_q")]
    pub min_trunc: Q,
}

fn pick_pivot<C: Coefficient>(m: &SeriesMatrix<C>, rows: &[usize], cols: &[usize]) -> Option<(usize, usize)> {
    let mut best: Option<(Valuation, usize, usize)> = None;
    for (ri, &r) in rows.iter().enumerate() {
        for (ci, &c) in cols.iter().enumerate() {
            let v = m[r][c].valuation();
            if v.is_infinite() {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                best = Some((v, ri, ci));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

fn min_trunc<C: Coefficient>(m: &SeriesMatrix<C>) -> Option<Q> {
    m.iter().flatten().map(|s| s.trunc()).min()
}

/// Rank by full valuation pivoting.
pub fn rank<C: Coefficient>(m: &SeriesMatrix<C>) -> RankReport {
    let input_trunc = min_trunc(m).unwrap_or_else(Q::zero);
    let mut a = m.clone();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rows: Vec<usize> = (0..nrows).collect();
    let mut cols: Vec<usize> = (0..ncols).collect();
    let mut rk = 0;
    while let Some((ri, ci)) = pick_pivot(&a, &rows, &cols) {
        let pr = rows.remove(ri);
        let pc = cols.remove(ci);
        let pivot = a[pr][pc].clone();
        for &r in &rows {
            if a[r][pc].is_zero() {
                continue;
            }
            let f = a[r][pc].div(&pivot).expect("pivot is nonzero");
            for &c in &cols {
                let upd = f.mul_tracking(&a[pr][c]);
                a[r][c] = a[r][c].sub_lossy(&upd);
            }
            a[r][pc] = Series::zero(a[r][pc].trunc());
        }
        rk += 1;
    }
    let rest_trunc = rows
        .iter()
        .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
        .map(|(r, c)| a[r][c].trunc())
        .min()
        .unwrap_or(input_trunc);
    RankReport { rank: rk, precision_warning: rest_trunc < input_trunc, min_trunc: rest_trunc }
}

/// Cofactor expansion up to this size; larger matrices use elimination.
const COFACTOR_MAX: usize = 4;

/// Determinant, known to the order the arithmetic guarantees.
pub fn det<C: Coefficient>(m: &SeriesMatrix<C>) -> Result<Series<C>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension { expected: n, got: m.first().map_or(0, |r| r.len()) });
    }
    if n == 0 {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    if n > COFACTOR_MAX {
        return det_elim(m);
    }
    let cols: Vec<usize> = (0..n).collect();
    det_rec(m, 0, &cols)
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 1
}

fn det_elim<C: Coefficient>(m: &SeriesMatrix<C>) -> Result<Series<C>> {
    let n = m.len();
    let mut a = m.clone();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut perm = vec![0; n];
    let mut acc: Option<Series<C>> = None;
    for _ in 0..n {
        let Some((ri, ci)) = pick_pivot(&a, &rows, &cols) else {
            // The remaining block vanishes to its known order.
            let rest = rows.iter().flat_map(|&r| cols.iter().map(move |&c| (r, c))).map(|(r, c)| a[r][c].trunc()).min();
            let lead = acc.as_ref().and_then(|s| s.valuation().finite()).unwrap_or_else(Q::zero);
            return Ok(Series::zero(lead + rest.unwrap_or_else(Q::zero)).with_tol(m[0][0].tol()));
        };
        let pr = rows.remove(ri);
        let pc = cols.remove(ci);
        perm[pr] = pc;
        let pivot = a[pr][pc].clone();
        for &r in &rows {
            if a[r][pc].is_zero() {
                continue;
            }
            let f = a[r][pc].div(&pivot)?;
            for &c in &cols {
                let upd = f.mul_tracking(&a[pr][c]);
                a[r][c] = a[r][c].sub_lossy(&upd);
            }
        }
        acc = Some(match acc {
            None => pivot,
            Some(x) => x.mul_tracking(&pivot),
        });
    }
    let d = acc.expect("n ≥ 1");
    Ok(if permutation_is_odd(&perm) { d.neg() } else { d })
}

fn det_rec<C: Coefficient>(m: &SeriesMatrix<C>, row: usize, cols: &[usize]) -> Result<Series<C>> {
    if cols.len() == 1 {
        return Ok(m[row][cols[0]].clone());
    }
    let mut acc = Series::zero(m[row][cols[0]].trunc()).with_tol(m[row][cols[0]].tol());
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(m, row + 1, &rest)?;
        let term = m[row][c].mul(&minor)?;
        acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

/// Solves the square system `m·x = b`. Precision is lost when pivots have
/// positive valuation; the returned series carry the reduced orders.
pub fn solve<C: Coefficient>(m: &SeriesMatrix<C>, b: &[Series<C>]) -> Result<Vec<Series<C>>> {
    let n = m.len();
    if b.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension { expected: n, got: b.len() });
    }
    let mut a = m.clone();
    let mut rhs = b.to_vec();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(n);
    for _ in 0..n {
        let (ri, ci) = pick_pivot(&a, &rows, &cols).ok_or_else(|| Error::Singular("series matrix".into()))?;
        let pr = rows.remove(ri);
        let pc = cols.remove(ci);
        let pivot = a[pr][pc].clone();
        for &r in &rows {
            if a[r][pc].is_zero() {
                continue;
            }
            let f = a[r][pc].div(&pivot)?;
            for &c in &cols {
                let upd = f.mul_tracking(&a[pr][c]);
                a[r][c] = a[r][c].sub_lossy(&upd);
            }
            rhs[r] = rhs[r].sub_lossy(&f.mul_tracking(&rhs[pr]));
            a[r][pc] = Series::zero(a[r][pc].trunc());
        }
        order.push((pr, pc));
    }
    let mut x: Vec<Option<Series<C>>> = vec![None; n];
    for &(pr, pc) in order.iter().rev() {
        let mut acc = rhs[pr].clone();
        for (c, xc) in x.iter().enumerate() {
            if let Some(xc) = xc {
                if c != pc && !a[pr][c].is_zero() {
                    acc = acc.sub_lossy(&a[pr][c].mul_tracking(xc));
                }
            }
        }
        x[pc] = Some(acc.div(&a[pr][pc])?);
    }
    Ok(x.into_iter().map(|s| s.expect("every column pivoted")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::ExactSeries;
    use crate::rational::qi;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn mono(e: i64, c: i64) -> ExactSeries {
        ExactSeries::monomial(qi(e), r(c), qi(4))
    }

    #[test]
    fn rank_of_q_times_identity() {
        let m = vec![vec![mono(1, 1), ExactSeries::zero(qi(4))], vec![ExactSeries::zero(qi(4)), mono(0, 2)]];
        let rep = rank(&m);
        assert_eq!(rep.rank, 2);
        let m1 = vec![vec![mono(1, 1)]];
        assert_eq!(rank(&m1).rank, 1);
    }

    #[test]
    fn dependent_rows_drop_rank() {
        let a = ExactSeries::from_terms([(qi(0), r(1)), (qi(1), r(1))], qi(4));
        let m = vec![vec![a.clone(), mono(1, 1)], vec![a.mul(&a).unwrap(), a.mul(&mono(1, 1)).unwrap()]];
        assert_eq!(rank(&m).rank, 1);
    }

    #[test]
    fn det_and_solve_agree() {
        let m = vec![vec![mono(0, 2), mono(1, 1)], vec![mono(1, 3), mono(0, 1)]];
        let d = det(&m).unwrap();
        assert_eq!(d, ExactSeries::from_terms([(qi(0), r(2)), (qi(2), r(-3))], qi(4)));
        let b = vec![mono(0, 1), mono(0, 0)];
        let x = solve(&m, &b).unwrap();
        for (i, row) in m.iter().enumerate() {
            let mut acc = ExactSeries::zero(qi(4));
            for (j, e) in row.iter().enumerate() {
                acc = acc.add_lossy(&e.mul_tracking(&x[j]));
            }
            assert_eq!(acc.sub_lossy(&b[i]).is_zero(), true);
        }
    }

    #[test]
    fn elimination_matches_cofactors() {
        // Entries 1 + k·q^{1/2} with k = (3i + 7j) mod 5: a unit-pivot 6×6 matrix.
        let n = 6;
        let m: SeriesMatrix<BigRational> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let k = ((3 * i + 7 * j + i * j) % 5) as i64;
                        ExactSeries::from_terms([(qi(0), r(i64::from(i == j) + k % 2)), (crate::rational::q(1, 2), r(k))], qi(4))
                    })
                    .collect()
            })
            .collect();
        let cols: Vec<usize> = (0..n).collect();
        let slow = det_rec(&m, 0, &cols).unwrap();
        let fast = det_elim(&m).unwrap();
        let t = slow.trunc().min(fast.trunc());
        assert_eq!(slow.truncate_lossy(t), fast.truncate_lossy(t));
        assert!(!fast.is_zero());
    }
}
