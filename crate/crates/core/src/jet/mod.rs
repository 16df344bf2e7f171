//! Jet coordinates, total derivatives, Taylor germs and sampling of points
//! on the prolonged equation.

pub mod dual;
pub mod germ;
pub mod sample;
pub mod taylor;
pub mod total;

pub use dual::{dual_evaluate, dual_evaluate_poly, linearize, DualScalar, Linearized};
pub use germ::{compose_to_degree, compose_with_germ, JetGerm};
pub use sample::{random_germ, sample_sde_germ, sample_with_counts};
pub use taylor::TaylorPoly;
pub use total::{iterated_total_derivative, sde_dim, total_derivative, SDESystem};
