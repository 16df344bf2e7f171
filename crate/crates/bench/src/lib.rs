//! Shared inputs for the benchmarks.

use sdeinv_core::jet::sample_sde_germ;
use sdeinv_core::JetGerm;

/// On-equation germ of the given order from a fixed seed.
pub fn fixture(order: u32) -> JetGerm {
    sample_sde_germ(order, 17).expect("fixed seed samples")
}
