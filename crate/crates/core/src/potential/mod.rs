//! Leading-order disk potentials, their critical points and Floer certificates.

mod certificate;
mod critical;
mod laurent;
mod newton;

pub use certificate::{hf_certificate, multiplicity, HfCertificate};
pub use critical::{
    critical_points_leading, hessian_log, polynomial_roots, CriticalPoint, Hessian, DEDUP_DISTANCE, MAX_ROOT_ORDER,
    MAX_SEEDS, NEWTON_RESIDUAL, NOISE_FLOOR,
};
pub use laurent::{blaschke_maslov, exceptional_potential, toric_potential, LaurentPotential, Term};
pub use newton::newton_lift;
