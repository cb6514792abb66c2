//! Binary phase-shift keying: the transmitter sends `|α>` or `|-α>` with
//! equal probability, and the spoofer re-emits whichever state its optimal
//! two-state measurement reports.
//!
//! Under `H0` the receiver sees `ρ0 = |α><α|`; under `H1` it sees the
//! mixture `ρ1 = γ|α><α| + (1-γ)|-α><-α|`. Only two eigenvalues of
//! `pρ1 - (1-p)ρ0` are nonzero, and they follow from a 2×2 determinant
//! in the non-orthogonal basis `{|α>, |-α>}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{coherent_density, hermitian_eigen, SpectralResult};

/// Discriminant values above this (negative) floor are clamped to zero.
const DISCRIMINANT_CLAMP: f64 = -1e-10;

/// The knobs shared by every scenario: mean photon number `N = α²`, prior
/// probability `p` of a spoof, and optionally a forced spoofer success
/// probability `γ` (otherwise the Helstrom value for `N`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub mean_photon_number: f64,
    pub prior_spoof: f64,
    gamma_override: Option<f64>,
}

impl ScenarioParams {
    pub fn new(mean_photon_number: f64, prior_spoof: f64) -> Result<Self> {
        if !(mean_photon_number >= 0.0 && mean_photon_number.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mean photon number must be finite and >= 0, got {mean_photon_number}"
            )));
        }
        check_probability("prior spoof probability", prior_spoof)?;
        Ok(Self {
            mean_photon_number,
            prior_spoof,
            gamma_override: None,
        })
    }

    /// Force the spoofer's discrimination probability, e.g. `γ = 1` for a
    /// perfect spoofer.
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        check_probability("spoofer success probability", gamma)?;
        self.gamma_override = Some(gamma);
        Ok(self)
    }

    pub fn with_prior(mut self, prior_spoof: f64) -> Result<Self> {
        check_probability("prior spoof probability", prior_spoof)?;
        self.prior_spoof = prior_spoof;
        Ok(self)
    }

    /// Real, non-negative field amplitude `α = √N`.
    pub fn amplitude(&self) -> f64 {
        self.mean_photon_number.sqrt()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_override
            .unwrap_or_else(|| gamma(self.mean_photon_number))
    }

    pub fn gamma_override(&self) -> Option<f64> {
        self.gamma_override
    }
}

pub(crate) fn check_probability(what: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{what} must lie in [0, 1], got {value}"
        )))
    }
}

/// `<α|-α> = e^{-2N}`.
pub fn overlap(n: f64) -> f64 {
    (-2.0 * n).exp()
}

/// Helstrom success probability of the spoofer's measurement between `|α>`
/// and `|-α>` at equal priors: `(1 + √(1 - e^{-4N})) / 2`.
pub fn gamma(n: f64) -> f64 {
    0.5 * (1.0 + (-(-4.0 * n).exp_m1()).sqrt())
}

/// The two nonzero eigenvalues of `pρ1 - (1-p)ρ0`, `eta_plus >= eta_minus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaPair {
    pub eta_plus: f64,
    pub eta_minus: f64,
}

/// Matrix of `pρ1 - (1-p)ρ0` acting on coefficients `(c+, c-)` of
/// `c+|α> + c-|-α>`.
pub fn subspace_matrix(params: &ScenarioParams) -> [[f64; 2]; 2] {
    let p = params.prior_spoof;
    let g = params.gamma();
    let s = overlap(params.mean_photon_number);
    let a = p * g - (1.0 - p);
    let b = p * (1.0 - g);
    [[a, a * s], [b * s, b]]
}

/// Characteristic determinant `det(M - ηI)` of [`subspace_matrix`].
pub fn characteristic_determinant(params: &ScenarioParams, eta: f64) -> f64 {
    let m = subspace_matrix(params);
    (m[0][0] - eta) * (m[1][1] - eta) - m[0][1] * m[1][0]
}

pub fn eta_pair(params: &ScenarioParams) -> Result<EtaPair> {
    let p = params.prior_spoof;
    let g = params.gamma();
    let n = params.mean_photon_number;
    let centre = p - 0.5;
    let one_minus_s2 = -(-4.0 * n).exp_m1();
    let disc = centre * centre - (p * g - 1.0 + p) * p * (1.0 - g) * one_minus_s2;
    if disc < DISCRIMINANT_CLAMP {
        return Err(Error::NumericalInconsistency {
            context: "eta discriminant",
            value: disc,
        });
    }
    let root = disc.max(0.0).sqrt();
    Ok(EtaPair {
        eta_plus: centre + root,
        eta_minus: centre - root,
    })
}

/// Helstrom probability that the receiver correctly identifies a return
/// versus a spoof: `(1 + |η+| + |η-|) / 2`.
pub fn p_success_bpsk(params: &ScenarioParams) -> Result<f64> {
    if params.gamma() == 1.0 {
        return Ok(p_success_prior_only(params.prior_spoof));
    }
    let eta = eta_pair(params)?;
    Ok(0.5 * (1.0 + eta.eta_plus.abs() + eta.eta_minus.abs()))
}

/// Success probability of guessing the more likely hypothesis without a
/// measurement.
pub fn p_success_prior_only(p: f64) -> f64 {
    p.max(1.0 - p)
}

/// Prior `1/(γ+1)` above which the optimal receiver skips the measurement
/// and declares a spoof.
pub fn spoof_assumption_threshold(n: f64) -> f64 {
    1.0 / (gamma(n) + 1.0)
}

/// Cutoff used when none is given: covers the Poisson tail of `|±α>` far
/// beyond 10 standard deviations for the photon numbers of interest.
pub fn default_oracle_cutoff(n: f64) -> usize {
    30 + (10.0 * n).ceil() as usize
}

/// Spectrum of `pρ1 - (1-p)ρ0` built directly in the truncated number basis.
pub fn bpsk_fock_oracle(params: &ScenarioParams, cutoff: usize) -> Result<SpectralResult> {
    let n = params.mean_photon_number;
    let required = (10.0 * n.max(1.0)).ceil() as usize;
    if cutoff < required {
        return Err(Error::InsufficientCutoff { cutoff, required });
    }
    let dim = cutoff + 1;
    let alpha = params.amplitude();
    let g = params.gamma();
    let p = params.prior_spoof;
    let plus = coherent_density(Complex64::new(alpha, 0.0), dim);
    let minus = coherent_density(Complex64::new(-alpha, 0.0), dim);
    let rho1 = plus.combine(g, &minus, 1.0 - g);
    let op = rho1.combine(p, &plus, -(1.0 - p));
    hermitian_eigen(&op, false)
}
