//! Symplectic minimal-model-program runnings and Floer non-triviality
//! certificates: Novikov series, lattice polytopes, toric and moduli-space
//! runnings, Landau–Ginzburg potentials and curved A∞ algebras.

pub mod ainfty;
pub mod error;
pub mod linalg;
pub mod mmp;
pub mod novikov;
pub mod polytope;
pub mod potential;
pub mod rational;

pub use error::{Error, Result};
pub use novikov::{Coefficient, ComplexSeries, ExactSeries, LocalSystem, Series, Valuation};
pub use polytope::{Polytope, Shrunk, VertexData};
pub use rational::{parse_q, Q};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
