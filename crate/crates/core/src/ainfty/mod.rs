//! Finite curved A∞ algebras over the Novikov ring: the A∞ relations, strict
//! units, Maurer–Cartan deformation, gauge equivalence and cohomology.

mod algebra;
mod cohomology;
pub mod fixtures;
mod mc;
mod verify;

pub use algebra::{add, is_zero, max_magnitude, neg, sub, AlgebraSpec, CurvedAInftyAlgebra, Element, Generator, MapEntry};
pub use cohomology::{cohomology_rank, morse_page, GradedRanks, Grading};
pub use mc::{
    curvature, curvature_commutator, deform, gauge_defect, gauge_verify, in_a_plus, in_a_plus_plus, mu1_pair,
    mu1b_squared, mu1b_squared_on, weak_mc_check, MCElement, WeakMc,
};
pub use verify::{relation, verify_ainfty, verify_ainfty_to, verify_strict_unit, AInftyReport};
