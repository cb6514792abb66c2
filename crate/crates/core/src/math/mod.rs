//! Shared numerical primitives: special functions, dense Hermitian
//! matrices in a truncated number basis, and seeded random streams.

mod fock;
mod hermitian;
mod rng;
mod special;

pub use fock::{coherent_amplitudes, coherent_density};
pub use hermitian::{hermitian_eigen, trace_norm, HermitianMatrix, SpectralResult, EIGEN_MAX_ITER};
pub use rng::SeededRng;
pub use special::{laguerre, ln_factorial};
