//! Quantum limits on measure-and-prepare spoofing of coherent-state signals.
//!
//! A transmitter sends a coherent state drawn from a known signal set; a
//! spoofer intercepts it, measures it, and re-emits a state prepared from the
//! classical outcome. The receiver runs a Helstrom-optimal test between a
//! genuine return (`H0`) and a spoof (`H1`). The modules here compute the
//! resulting success probabilities for three scenarios:
//!
//! * [`bpsk`]: the two-state `{|α>, |-α>}` signal set, closed form plus a
//!   truncated Fock-basis oracle.
//! * [`bayes`]: sequential Bayesian detection over repeated BPSK pulses.
//! * [`gaussian`]: Gaussian-modulated amplitudes against a heterodyne spoofer.
//! * [`two_pulse`]: skin return and spoof pulse received together.
//!
//! [`figures`] turns these into sweep tables and [`emit`] writes them as CSV
//! or SVG.

pub mod bayes;
pub mod bpsk;
pub mod emit;
pub mod error;
pub mod figures;
pub mod gaussian;
pub mod math;
pub mod two_pulse;
pub mod verify;

pub use bpsk::ScenarioParams;
pub use error::{Error, Result};
pub use math::{HermitianMatrix, SpectralResult};
