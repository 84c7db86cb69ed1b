use mmpfloer::ainfty::fixtures::{compose_gauge, gauge_partner, inverse_gauge, random_dga, random_gauge, random_mc, Dga};
use mmpfloer::ainfty::{
    cohomology_rank, curvature, deform, gauge_verify, verify_ainfty, verify_strict_unit, weak_mc_check, MCElement,
};
use mmpfloer::novikov::Coefficient;
use mmpfloer::rational::{q, qi};
use mmpfloer::{BigRational, Complex64, Series};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c<C: Coefficient>(terms: &[(i64, i64, i64)]) -> Series<C> {
    Series::from_terms(terms.iter().map(|&(n, d, k)| (q(n, d), C::from_i64(k))), qi(3))
}

fn constructors<C: Coefficient>() -> Vec<Dga<C>> {
    let block = |x: &[(i64, i64, i64)], low| Dga::<C>::block(c(x), low, qi(3));
    vec![
        Dga::exterior(1, qi(3)),
        Dga::exterior(3, qi(3)),
        block(&[(1, 2, 1)], 0),
        block(&[(0, 1, 2), (1, 1, -1)], -1),
        Dga::exterior(2, qi(3)).tensor(&block(&[(1, 4, 3)], 0)),
        block(&[(1, 1, 1)], 0).tensor(&block(&[(1, 2, -2)], -1)),
        Dga::exterior(1, qi(3)).with_curvature(c(&[(1, 3, 5)])),
        Dga::exterior(2, qi(3)).tensor(&block(&[(3, 4, 1)], 0)).with_curvature(c(&[(1, 2, 1), (2, 1, -1)])),
    ]
}

fn constructors_verify<C: Coefficient>() {
    for dga in constructors::<C>() {
        for arity in [2, 3] {
            let a = dga.to_ainfty(2, arity).unwrap();
            let report = verify_ainfty(&a);
            assert!(report.holds(), "{report:?}");
            assert!(verify_strict_unit(&a).unwrap());
        }
    }
}

#[test]
fn safe_constructors_verify_exact() {
    constructors_verify::<BigRational>();
}

#[test]
fn safe_constructors_verify_complex() {
    constructors_verify::<Complex64>();
}

#[test]
fn deformation_curvature_is_mu0_b() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for _ in 0..30 {
        let dga = random_dga::<BigRational, _>(&mut rng, qi(3));
        let a = dga.to_ainfty(2, 2).unwrap();
        let b = random_mc(&dga, &mut rng);
        let ab = deform(&a, &b).unwrap();
        assert!(verify_ainfty(&ab).holds());
        assert_eq!(curvature(&ab, &ab.zero()), curvature(&a, &b.b));
        // deforming twice is deforming by the sum
        let b2 = random_mc(&dga, &mut rng);
        let twice = deform(&ab, &b2).unwrap();
        let sum = MCElement { b: mmpfloer::ainfty::add(&b.b, &b2.b) };
        assert_eq!(curvature(&twice, &twice.zero()), curvature(&a, &sum.b));
    }
}

fn gauge_suite<C: Coefficient>(seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..25 {
        let dga = random_dga::<C, _>(&mut rng, qi(3));
        let a = dga.to_ainfty(2, 2).unwrap();
        let b0 = random_mc(&dga, &mut rng);
        let h01 = random_gauge(&dga, &mut rng);
        let h12 = random_gauge(&dga, &mut rng);
        let b1 = gauge_partner(&a, &b0, &h01).unwrap();
        let b2 = gauge_partner(&a, &b1, &h12).unwrap();
        assert!(gauge_verify(&a, &b0, &b1, &h01).unwrap());
        let w = [&b0, &b1, &b2].map(|b| weak_mc_check(&a, b).unwrap());
        assert!(w.iter().all(|x| x.is_solution));
        assert_eq!(w[0].potential, w[1].potential);
        assert_eq!(w[1].potential, w[2].potential);
        let h = [&b0, &b1, &b2].map(|b| cohomology_rank(&a, b).unwrap());
        assert_eq!(h[0], h[1]);
        assert_eq!(h[1], h[2]);
        let h02 = compose_gauge(&a, [&b0, &b1, &b2], &h01, &h12, -1);
        assert!(gauge_verify(&a, &b0, &b2, &h02).unwrap());
        let h10 = inverse_gauge(&a, &b0, &b1, &h01).unwrap();
        assert!(gauge_verify(&a, &b1, &b0, &h10).unwrap());
    }
}

#[test]
fn gauge_equivalence_exact() {
    gauge_suite::<BigRational>(41);
}

#[test]
fn gauge_equivalence_complex() {
    gauge_suite::<Complex64>(42);
}
