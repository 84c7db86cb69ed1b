//! Benchmark fixtures. Everything is deterministic so runs compare.

use mmpfloer::ainfty::fixtures::Dga;
use mmpfloer::ainfty::CurvedAInftyAlgebra;
use mmpfloer::polytope::shapes;
use mmpfloer::potential::{exceptional_potential, toric_potential, LaurentPotential, Term};
use mmpfloer::rational::{q, qi};
use mmpfloer::{BigRational, Complex64, ExactSeries, Polytope, Series};

/// Dense exact unit `1 + Σ_k c_k q^{k/den}` below `q^trunc`.
pub fn dense_unit(den: i64, trunc: i64) -> ExactSeries {
    let terms = (0..den * trunc).map(|k| {
        let c = if k == 0 { BigRational::from_integer(1.into()) } else { BigRational::new(((k % 7) - 3).into(), (1 + k % 5).into()) };
        (q(k, den), c)
    });
    Series::from_terms(terms, qi(trunc))
}

/// Square potential with three fixed higher terms.
pub fn perturbed_square(trunc: i64) -> LaurentPotential {
    let base = toric_potential(&shapes::unit_square(), &[q(1, 2), q(1, 2)], qi(trunc)).expect("square");
    let extra = vec![
        Term { area: q(5, 8), exponent: vec![1, 1], coef: Complex64::new(0.2, -0.1) },
        Term { area: q(7, 8), exponent: vec![-1, 0], coef: Complex64::new(0.0, 0.15) },
        Term { area: q(9, 8), exponent: vec![0, 1], coef: Complex64::new(-0.1, 0.05) },
    ];
    base.with_terms(extra).expect("perturbation")
}

pub fn exceptional(n_plus: usize, n_minus: usize) -> LaurentPotential {
    exceptional_potential(n_plus, n_minus, q(1, 3), qi(3)).expect("exceptional model")
}

/// `[0,a]×[0,b]` with every corner cut at a different depth.
pub fn octagon() -> Polytope {
    Polytope::from_facets(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]],
        vec![qi(0), qi(0), qi(-4), qi(-3), q(1, 4), q(-7, 2), q(-5, 2), q(-13, 2)],
    )
    .expect("octagon")
}

pub fn exterior_algebra(k: usize) -> CurvedAInftyAlgebra<BigRational> {
    Dga::<BigRational>::exterior(k, qi(3)).to_ainfty(2, 3).expect("exterior algebra")
}
