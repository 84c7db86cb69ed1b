use mmpfloer::novikov::matrix;
use mmpfloer::rational::{q, qi};
use mmpfloer::{BigRational, ExactSeries, LocalSystem, Series, Valuation, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn series_from(raw: &[(i64, i64, i64)], trunc: Q) -> ExactSeries {
    Series::from_terms(raw.iter().map(|&(k, n, d)| (q(k, 4), br(n, d))), trunc)
}

/// Terms at `k/4` for `0 ≤ k < 12`, so every series is known mod `q^3`.
fn arb_series() -> impl Strategy<Value = ExactSeries> {
    prop::collection::vec((0i64..12, -5i64..=5, 1i64..=4), 0..7).prop_map(|raw| series_from(&raw, qi(3)))
}

fn arb_unit() -> impl Strategy<Value = ExactSeries> {
    (1i64..=5, prop::bool::ANY, arb_series()).prop_map(|(c, neg, s)| {
        let lead = Series::constant(br(if neg { -c } else { c }, 1), qi(3));
        let tail = ExactSeries::from_terms(s.terms().iter().filter(|(e, _)| !e.is_zero()).cloned(), qi(3));
        lead.add(&tail).unwrap()
    })
}

fn positive(s: &ExactSeries) -> ExactSeries {
    ExactSeries::from_terms(s.terms().iter().filter(|(e, _)| !e.is_zero()).cloned(), s.trunc())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&ExactSeries::one(qi(3))).unwrap(), a.clone());
    }

    #[test]
    fn unit_inverse(a in arb_unit()) {
        let inv = a.invert_unit().unwrap();
        prop_assert!(a.mul(&inv).unwrap().is_one());
        prop_assert_eq!(inv.invert_unit().unwrap(), a);
    }

    #[test]
    fn valuation_is_additive(a in arb_series(), b in arb_series()) {
        let p = a.mul(&b).unwrap();
        if let (Valuation::Finite(va), Valuation::Finite(vb)) = (a.valuation(), b.valuation()) {
            if va + vb < p.trunc() {
                prop_assert_eq!(p.valuation(), Valuation::Finite(va + vb));
            } else {
                prop_assert!(p.is_zero());
            }
        }
    }

    #[test]
    fn truncation_commutes_with_products(a in arb_series(), b in arb_series(), k in 1i64..12) {
        let e = q(k, 4);
        let lhs = a.mul(&b).unwrap().truncate(e).unwrap();
        let rhs = a.truncate(e).unwrap().mul(&b.truncate(e).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_is_a_homomorphism(a in arb_series(), b in arb_series()) {
        let (a, b) = (positive(&a), positive(&b));
        let lhs = a.add(&b).unwrap().exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomials_multiply(y1 in arb_unit(), y2 in arb_unit(), nu in prop::array::uniform2(-2i64..=2), mu in prop::array::uniform2(-2i64..=2)) {
        let y = LocalSystem::new(vec![y1, y2]).unwrap();
        let sum = [nu[0] + mu[0], nu[1] + mu[1]];
        let lhs = y.monomial_eval(&sum).unwrap();
        let rhs = y.monomial_eval(&nu).unwrap().mul(&y.monomial_eval(&mu).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip(a in arb_series()) {
        let back: ExactSeries = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }
}

/// Leibniz expansion over all permutations.
fn leibniz(m: &[Vec<ExactSeries>]) -> ExactSeries {
    use itertools::Itertools;
    let n = m.len();
    let trunc = m[0][0].trunc();
    let mut acc = ExactSeries::zero(trunc);
    for perm in (0..n).permutations(n) {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = ExactSeries::one(trunc);
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(&m[i][j]).unwrap();
        }
        acc = if inversions % 2 == 0 { acc.add(&term).unwrap() } else { acc.sub(&term).unwrap() };
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn determinant_matches_leibniz(n in 1usize..=6, cells in prop::collection::vec(arb_series(), 36)) {
        let m: Vec<Vec<ExactSeries>> = (0..n).map(|i| (0..n).map(|j| cells[i * 6 + j].clone()).collect()).collect();
        // elimination may know the result to a higher order than the entries
        let d = matrix::det(&m).unwrap();
        prop_assert!(d.trunc() >= qi(3));
        prop_assert_eq!(d.truncate(qi(3)).unwrap(), leibniz(&m));
    }

    #[test]
    fn solve_inverts_unit_diagonal(n in 1usize..=5, cells in prop::collection::vec(arb_series(), 25), rhs in prop::collection::vec(arb_series(), 5)) {
        // identity plus q^{1/4}·(anything) is invertible over Λ₀
        let shift = ExactSeries::monomial(q(1, 4), BigRational::one(), qi(3));
        let m: Vec<Vec<ExactSeries>> = (0..n)
            .map(|i| (0..n).map(|j| {
                let off = cells[i * 5 + j].mul(&shift).unwrap();
                if i == j { off.add(&ExactSeries::one(qi(3))).unwrap() } else { off }
            }).collect())
            .collect();
        let b = &rhs[..n];
        let x = matrix::solve(&m, b).unwrap();
        for i in 0..n {
            let mut row = ExactSeries::zero(qi(3));
            for j in 0..n {
                row = row.add(&m[i][j].mul(&x[j]).unwrap()).unwrap();
            }
            prop_assert_eq!(&row, &b[i]);
        }
    }
}
