//! Rational convex polytopes `{μ : ⟨μ,ν_j⟩ ≥ c_j}` with primitive normals.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix};
use crate::rational::{format_q, gcd_slice, serde_qvec, Q};

/// Largest ambient dimension accepted by the exhaustive enumerators.
pub const MAX_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexData {
    #[serde(with = "serde_qvec")]
    pub point: Vec<Q>,
    pub active: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    pub dim: usize,
    pub normals: Vec<Vec<i64>>,
    #[serde(with = "serde_qvec")]
    pub constants: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeSpec", into = "PolytopeSpec")]
pub struct Polytope {
    dim: usize,
    normals: Vec<Vec<i64>>,
    constants: Vec<Q>,
    vertices: Vec<VertexData>,
}

impl TryFrom<PolytopeSpec> for Polytope {
    type Error = Error;
    fn try_from(s: PolytopeSpec) -> Result<Self> {
        Polytope::from_facets(s.dim, s.normals, s.constants)
    }
}

impl From<Polytope> for PolytopeSpec {
    fn from(p: Polytope) -> Self {
        PolytopeSpec { dim: p.dim, normals: p.normals, constants: p.constants }
    }
}

/// Result of moving every facet inward by `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum Shrunk {
    Polytope(Polytope),
    /// Feasible with empty interior; carries the vertices of the limit set.
    LowerDimensional(Vec<VertexData>),
    Empty,
}

impl Shrunk {
    pub fn polytope(&self) -> Option<&Polytope> {
        match self {
            Shrunk::Polytope(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexCertificate {
    #[serde(with = "serde_qvec")]
    pub point: Vec<Q>,
    pub active: Vec<usize>,
    /// Determinant of the active normals when there are exactly `dim` of them.
    pub det: Option<i64>,
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub vertices: Vec<VertexCertificate>,
}

/// A point where the facets at minimal distance `t` become dependent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degeneracy {
    #[serde(with = "crate::rational::serde_q")]
    pub t: Q,
    #[serde(with = "serde_qvec")]
    pub mu: Vec<Q>,
    pub active: Vec<usize>,
    /// First minimal dependent facet set (in enumeration order) at `(t, μ)`.
    pub circuit: Vec<usize>,
}

fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x)).collect()
}

impl Polytope {
    pub fn from_facets(dim: usize, normals: Vec<Vec<i64>>, constants: Vec<Q>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidPolytope(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if normals.len() != constants.len() {
            return Err(Error::InvalidPolytope(format!(
                "{} normals but {} constants",
                normals.len(),
                constants.len()
            )));
        }
        let mut ns = Vec::with_capacity(normals.len());
        let mut cs = Vec::with_capacity(constants.len());
        for (n, c) in normals.into_iter().zip(constants) {
            if n.len() != dim {
                return Err(Error::Dimension { expected: dim, got: n.len() });
            }
            let g = gcd_slice(&n);
            if g == 0 {
                return Err(Error::InvalidPolytope("zero normal".into()));
            }
            let n: Vec<i64> = n.iter().map(|x| x / g).collect();
            let c = c / g;
            if ns.iter().zip(&cs).any(|(m, d)| *m == n && *d == c) {
                return Err(Error::InvalidPolytope(format!("duplicate facet {n:?} ≥ {}", format_q(&c))));
            }
            ns.push(n);
            cs.push(c);
        }
        let mut p = Polytope { dim, normals: ns, constants: cs, vertices: Vec::new() };
        if !p.recession_cone_trivial() {
            return Err(Error::Unbounded);
        }
        p.vertices = p.enumerate_vertices();
        if p.vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        Ok(p)
    }

    /// Convenience constructor from integer constants.
    pub fn from_int_facets(dim: usize, normals: Vec<Vec<i64>>, constants: &[i64]) -> Result<Self> {
        Self::from_facets(dim, normals, constants.iter().map(|&c| Q::from_integer(c)).collect())
    }

    fn with_constants(&self, constants: Vec<Q>) -> Polytope {
        let mut p = Polytope { dim: self.dim, normals: self.normals.clone(), constants, vertices: Vec::new() };
        p.vertices = p.enumerate_vertices();
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn constants(&self) -> &[Q] {
        &self.constants
    }

    pub fn num_facets(&self) -> usize {
        self.normals.len()
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    fn recession_cone_trivial(&self) -> bool {
        let n: QMatrix = self.normals.iter().map(|v| to_q(v)).collect();
        if linalg::rank(&n) < self.dim {
            return false;
        }
        for combo in (0..self.normals.len()).combinations(self.dim - 1) {
            let sub: QMatrix = combo.iter().map(|&i| n[i].clone()).collect();
            let sub = if sub.is_empty() { vec![vec![Q::zero(); self.dim]] } else { sub };
            let ns = linalg::nullspace(&sub);
            if ns.len() != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let d: Vec<Q> = ns[0].iter().map(|x| x * sign).collect();
                if n.iter().all(|row| !linalg::dotq(row, &d).is_negative()) {
                    return false;
                }
            }
        }
        true
    }

    fn enumerate_vertices(&self) -> Vec<VertexData> {
        let n: QMatrix = self.normals.iter().map(|v| to_q(v)).collect();
        let mut found: BTreeMap<Vec<Q>, ()> = BTreeMap::new();
        for combo in (0..self.normals.len()).combinations(self.dim) {
            let a: QMatrix = combo.iter().map(|&i| n[i].clone()).collect();
            let b: Vec<Q> = combo.iter().map(|&i| self.constants[i]).collect();
            if let Some(x) = linalg::solve_unique(&a, &b) {
                if self.contains(&x) {
                    found.insert(x, ());
                }
            }
        }
        found
            .into_keys()
            .map(|point| {
                let active = self.facet_gaps(&point).iter().positions(|g| g.is_zero()).collect();
                VertexData { point, active }
            })
            .collect()
    }

    pub fn contains(&self, mu: &[Q]) -> bool {
        self.facet_gaps(mu).iter().all(|g| !g.is_negative())
    }

    pub fn is_interior(&self, mu: &[Q]) -> bool {
        self.facet_gaps(mu).iter().all(|g| g.is_positive())
    }

    /// `(⟨μ,ν_j⟩ − c_j)_j`.
    pub fn facet_gaps(&self, mu: &[Q]) -> Vec<Q> {
        self.normals
            .iter()
            .zip(&self.constants)
            .map(|(n, c)| crate::rational::dot(mu, n) - c)
            .collect()
    }

    pub fn is_smooth(&self) -> SmoothnessReport {
        let vertices: Vec<VertexCertificate> = self
            .vertices
            .iter()
            .map(|v| {
                let det = (v.active.len() == self.dim).then(|| {
                    let m: Vec<Vec<i64>> = v.active.iter().map(|&j| self.normals[j].clone()).collect();
                    *linalg::det_i64(&m).numer()
                });
                VertexCertificate {
                    point: v.point.clone(),
                    active: v.active.clone(),
                    det,
                    smooth: matches!(det, Some(1) | Some(-1)),
                }
            })
            .collect();
        SmoothnessReport { smooth: vertices.iter().all(|v| v.smooth), vertices }
    }

    /// Largest `t` for which the shrunken polytope is nonempty, with a
    /// point realizing it.
    pub fn collapse(&self) -> (Q, Vec<Q>) {
        let m = self.normals.len();
        let mut best: Option<(Q, Vec<Q>)> = None;
        for combo in (0..m).combinations(self.dim + 1) {
            let a: QMatrix = combo
                .iter()
                .map(|&j| {
                    let mut row = to_q(&self.normals[j]);
                    row.push(-Q::from_integer(1));
                    row
                })
                .collect();
            let b: Vec<Q> = combo.iter().map(|&j| self.constants[j]).collect();
            let Some(x) = linalg::solve_unique(&a, &b) else { continue };
            let (mu, t) = (x[..self.dim].to_vec(), x[self.dim]);
            if self.facet_gaps(&mu).iter().all(|g| *g >= t) && best.as_ref().is_none_or(|(bt, _)| t > *bt) {
                best = Some((t, mu));
            }
        }
        best.expect("bounded nonempty polytopes have a Chebyshev vertex")
    }

    pub fn collapse_time(&self) -> Q {
        self.collapse().0
    }

    pub fn shrink(&self, t: Q) -> Shrunk {
        let cap = self.collapse_time();
        let p = self.with_constants(self.constants.iter().map(|c| c + t).collect());
        if t > cap {
            Shrunk::Empty
        } else if t == cap {
            Shrunk::LowerDimensional(p.vertices)
        } else {
            Shrunk::Polytope(p)
        }
    }

    /// Vertices of `{⟨μ,ν_j⟩ ≥ c_j + t}`, empty when infeasible.
    pub fn vertices_at(&self, t: Q) -> Vec<VertexData> {
        self.with_constants(self.constants.iter().map(|c| c + t).collect()).vertices
    }

    /// Minimal dependent subsets of the normals with their dependency.
    pub fn circuits(&self) -> Vec<(Vec<usize>, Vec<Q>)> {
        let n: Vec<Vec<Q>> = self.normals.iter().map(|v| to_q(v)).collect();
        let mut out = Vec::new();
        for size in 2..=self.dim + 1 {
            for combo in (0..self.normals.len()).combinations(size) {
                // columns are the normals
                let a: QMatrix = (0..self.dim).map(|r| combo.iter().map(|&j| n[j][r]).collect()).collect();
                let ns = linalg::nullspace(&a);
                if ns.len() == 1 && ns[0].iter().all(|x| !x.is_zero()) {
                    out.push((combo, ns[0].clone()));
                }
            }
        }
        out
    }

    pub fn degenerate_locus(&self) -> Vec<Degeneracy> {
        let cap = self.collapse_time();
        let mut found: BTreeMap<(Q, Vec<Q>), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        let mut faces_cache: BTreeMap<Q, Vec<VertexData>> = BTreeMap::new();
        for (circuit, a) in self.circuits() {
            let sa: Q = a.iter().sum();
            if sa.is_zero() {
                continue;
            }
            let sac: Q = a.iter().zip(&circuit).map(|(x, &j)| x * self.constants[j]).sum();
            let t = -sac / sa;
            if !t.is_positive() || t > cap {
                continue;
            }
            let verts = faces_cache.entry(t).or_insert_with(|| self.vertices_at(t));
            let face: Vec<&VertexData> =
                verts.iter().filter(|v| circuit.iter().all(|j| v.active.contains(j))).collect();
            if face.is_empty() {
                continue;
            }
            let k = Q::from_integer(face.len() as i64);
            let mu: Vec<Q> = (0..self.dim).map(|i| face.iter().map(|v| v.point[i]).sum::<Q>() / k).collect();
            let active: Vec<usize> = self.facet_gaps(&mu).iter().positions(|g| *g == t).collect();
            found.entry((t, mu)).or_insert((active, circuit));
        }
        found
            .into_iter()
            .map(|((t, mu), (active, circuit))| Degeneracy { t, mu, active, circuit })
            .collect()
    }

    /// Applies `μ ↦ μ·U` to the polytope for a unimodular `U` (normals map
    /// by the inverse transpose).
    pub fn transform_normals(&self, u: &[Vec<i64>]) -> Result<Polytope> {
        let normals = self
            .normals
            .iter()
            .map(|n| (0..self.dim).map(|j| (0..self.dim).map(|i| n[i] * u[i][j]).sum()).collect())
            .collect();
        Polytope::from_facets(self.dim, normals, self.constants.clone())
    }
}

/// Polytopes used throughout the examples and tests.
pub mod shapes {
    use super::*;
    use crate::rational::qi;

    pub fn rectangle(a: Q, b: Q) -> Polytope {
        Polytope::from_facets(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]], vec![qi(0), qi(0), -a, -b])
            .expect("rectangle")
    }

    pub fn unit_square() -> Polytope {
        rectangle(qi(1), qi(1))
    }

    /// `{μ_i ≥ 0, Σμ_i ≤ size}`.
    pub fn simplex(dim: usize, size: Q) -> Polytope {
        let mut normals: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        normals.push(vec![-1; dim]);
        let mut c = vec![qi(0); dim];
        c.push(-size);
        Polytope::from_facets(dim, normals, c).expect("simplex")
    }

    /// `[0,a]×[0,b]` with the corner at the origin cut by `x+y ≥ depth`.
    pub fn chopped_rectangle(a: Q, b: Q, depth: Q) -> Polytope {
        Polytope::from_facets(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![1, 1]],
            vec![qi(0), qi(0), -a, -b, depth],
        )
        .expect("chopped rectangle")
    }

    pub fn chopped_square(depth: Q) -> Polytope {
        chopped_rectangle(qi(1), qi(1), depth)
    }

    /// Local model of a simple flip or blow-up with weights `(n₊, n₋)`:
    /// coordinates `μ_i ≥ 0`, the exceptional facet at distance `size` from
    /// `size·(1,…,1)`, and a far facet at `far` closing the polytope.
    pub fn exceptional_model(n_plus: usize, n_minus: usize, size: Q, far: Q) -> Result<Polytope> {
        if n_minus == 0 || n_plus <= n_minus {
            return Err(Error::InvalidSignature { n_plus, n_minus });
        }
        let n = n_plus + n_minus - 1;
        let mut normals: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let mut c = vec![qi(0); n];
        normals.push((0..n).map(|i| if i < n_plus { 1 } else { -1 }).collect());
        c.push(size * Q::from_integer(n_plus as i64 - n_minus as i64));
        normals.push((0..n).map(|i| if i < n_plus { -1 } else { 0 }).collect());
        c.push(-far);
        Polytope::from_facets(n, normals, c)
    }

    /// Four-dimensional polytope with a single flip replacing `P²` by `P¹`.
    pub fn flip_4d() -> Polytope {
        Polytope::from_facets(
            4,
            vec![
                vec![-1, -1, 1, 1],
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, -1, -1],
            ],
            vec![qi(-1), qi(0), qi(0), qi(0), qi(0), qi(-10)],
        )
        .expect("flip polytope")
    }
}
