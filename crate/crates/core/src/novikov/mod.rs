//! Truncated Novikov series, local systems and series linear algebra.

mod coeff;
mod local_system;
pub mod matrix;
mod series;

pub use coeff::Coefficient;
pub use local_system::LocalSystem;
pub use series::{ComplexSeries, ExactSeries, Series, Valuation, DEFAULT_ZERO_TOL};

