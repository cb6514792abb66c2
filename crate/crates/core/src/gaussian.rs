//! Gaussian-modulated coherent states against a heterodyne
//! measure-and-prepare spoofer.
//!
//! The transmitter draws `α` from `(λ/π) e^{-λ|α|²}`. A spoofer that
//! heterodynes the pulse and re-emits `|α'>` leaves the receiver, who knows
//! `α` but not `α'`, with the displaced thermal state
//! `ρ1 = (1/π) ∫ e^{-|β-α|²} |β><β| d²β` (mean noise photon number 1) to
//! distinguish from `ρ0 = |α><α|`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{
    coherent_amplitudes, coherent_density, laguerre, ln_factorial, trace_norm, HermitianMatrix,
    SeededRng,
};

/// Amplitude prior `(λ/π) e^{-λ|α|²}`; `λ = 0` is the flat limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPrior {
    lambda: f64,
}

impl GaussianPrior {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda >= 0.0 && lambda.is_finite() {
            Ok(Self { lambda })
        } else {
            Err(Error::InvalidParameter(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Number-basis truncation: states `|0>..|cutoff>` are kept and any
/// constructed density matrix must retain at least `1 - tail_tolerance` of
/// its trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub cutoff: usize,
    pub tail_tolerance: f64,
}

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;

impl TruncationPolicy {
    pub fn new(cutoff: usize) -> Self {
        Self {
            cutoff,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }

    /// Cutoff covering the displaced thermal state at amplitude `alpha`:
    /// mean `α² + 1` plus 14 standard deviations `√(3α² + 2)`, plus a fixed
    /// margin for the geometric tail.
    pub fn for_amplitude(alpha: f64) -> Self {
        let n = alpha * alpha;
        Self::new((n + 21.0 + 14.0 * (3.0 * n + 2.0).sqrt()).ceil() as usize)
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    /// Same policy with the cutoff scaled by `factor` (rounded up).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            cutoff: (self.cutoff as f64 * factor).ceil() as usize,
            ..*self
        }
    }

    fn require(&self, required: f64) -> Result<()> {
        let required = required.ceil() as usize;
        if self.cutoff < required {
            Err(Error::InsufficientCutoff {
                cutoff: self.cutoff,
                required,
            })
        } else {
            Ok(())
        }
    }

    fn check_trace(&self, m: &HermitianMatrix) -> Result<()> {
        let deficit = 1.0 - m.trace();
        if deficit > self.tail_tolerance {
            // Report the smallest cutoff that could plausibly work.
            Err(Error::InsufficientCutoff {
                cutoff: self.cutoff,
                required: self.cutoff + 1,
            })
        } else {
            Ok(())
        }
    }
}

/// Upper bound `(1+λ)/(2+λ)` on the average fidelity of any
/// measure-and-prepare reconstruction.
pub fn avg_fidelity_bound(prior: &GaussianPrior) -> f64 {
    (1.0 + prior.lambda) / (2.0 + prior.lambda)
}

/// Ideal heterodyne outcome on `|α>`: density `(1/π) e^{-|α'-α|²}`, i.e.
/// independent quadrature noise of variance 1/2.
pub fn heterodyne_sample(alpha: Complex64, rng: &mut SeededRng) -> Complex64 {
    let sd = std::f64::consts::FRAC_1_SQRT_2;
    Complex64::new(rng.normal(alpha.re, sd), rng.normal(alpha.im, sd))
}

/// Amplitude gain the optimal spoofer applies to its heterodyne outcome
/// before re-preparing: the posterior mean of `α` is `α'/(1+λ)`.
pub fn prepare_gain(prior: &GaussianPrior) -> f64 {
    1.0 / (1.0 + prior.lambda)
}

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_trials: usize,
}

/// Average fidelity `|<α|β>|² = e^{-|α-β|²}` achieved by heterodyne
/// measure-and-prepare, with `β = α'/(1+λ)`.
pub fn mc_average_fidelity(
    prior: &GaussianPrior,
    n_trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    if prior.lambda == 0.0 {
        return Err(Error::NonNormalizablePrior);
    }
    if n_trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let mut rng = SeededRng::new(seed);
    let sd = (0.5 / prior.lambda).sqrt();
    let gain = prepare_gain(prior);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n_trials {
        let alpha = Complex64::new(rng.normal(0.0, sd), rng.normal(0.0, sd));
        let prepared = heterodyne_sample(alpha, &mut rng) * gain;
        let f = (-(alpha - prepared).norm_sqr()).exp();
        sum += f;
        sum_sq += f * f;
    }
    let n = n_trials as f64;
    let mean = sum / n;
    let var = if n_trials > 1 {
        (sum_sq - n * mean * mean).max(0.0) / (n - 1.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        n_trials,
    })
}

/// `ρ0 = |α><α|` in the truncated number basis.
pub fn coherent_rho0(alpha: f64, policy: &TruncationPolicy) -> Result<HermitianMatrix> {
    let n = alpha * alpha;
    policy.require(n + 8.0 * (n + 1.0).sqrt())?;
    let m = coherent_density(Complex64::new(alpha, 0.0), policy.dim());
    policy.check_trace(&m)?;
    Ok(m)
}

/// Displaced thermal state with amplitude `alpha` and mean noise photon
/// number `mean_noise > 0`:
///
/// `<m|ρ|n> = n̄ⁿ/(1+n̄)^{m+1} √(n!/m!) α^{m-n} e^{-α²/(1+n̄)} L_n^{(m-n)}(-α²/(n̄(1+n̄)))`
/// for `m >= n`, mirrored above the diagonal.
pub fn displaced_thermal(
    alpha: f64,
    mean_noise: f64,
    policy: &TruncationPolicy,
) -> Result<HermitianMatrix> {
    if !(mean_noise > 0.0 && mean_noise.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "mean noise photon number must be > 0, got {mean_noise}"
        )));
    }
    let n_sig = alpha * alpha;
    let ln_nbar = mean_noise.ln();
    let ln_1p = mean_noise.ln_1p();
    let x = -n_sig / (mean_noise * (1.0 + mean_noise));
    let ln_abs_alpha = alpha.abs().ln();
    let m = HermitianMatrix::from_lower_fn(policy.dim(), |m, n| {
        let k = m - n;
        if alpha == 0.0 && k > 0 {
            return Complex64::new(0.0, 0.0);
        }
        // Laguerre at a non-positive argument is a sum of positive terms.
        let lag = laguerre(n, k, x);
        let ln_mag = n as f64 * ln_nbar - (m + 1) as f64 * ln_1p
            + 0.5 * (ln_factorial(n) - ln_factorial(m))
            - n_sig / (1.0 + mean_noise)
            + if k > 0 { k as f64 * ln_abs_alpha } else { 0.0 }
            + lag.ln();
        let sign = if alpha < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        Complex64::new(sign * ln_mag.exp(), 0.0)
    });
    policy.check_trace(&m)?;
    Ok(m)
}

/// `ρ1` of the heterodyne spoofer: displaced thermal with one noise photon.
pub fn displaced_thermal_rho1(alpha: f64, policy: &TruncationPolicy) -> Result<HermitianMatrix> {
    let n = alpha * alpha;
    policy.require(n + 1.0 + 8.0 * (n + 2.0).sqrt())?;
    displaced_thermal(alpha, 1.0, policy)
}

/// `<α|ρ1|α>`, the squared fidelity between the two hypotheses.
pub fn fidelity_anchor(alpha: f64, policy: &TruncationPolicy) -> Result<f64> {
    let rho1 = displaced_thermal_rho1(alpha, policy)?;
    let v = coherent_amplitudes(Complex64::new(alpha, 0.0), policy.dim());
    Ok(rho1.expectation(&v))
}

/// Helstrom success probability at prior `p` of a spoof.
pub fn p_success_gaussian_with_prior(alpha: f64, p: f64, policy: &TruncationPolicy) -> Result<f64> {
    crate::bpsk::check_probability("prior spoof probability", p)?;
    let rho0 = coherent_rho0(alpha, policy)?;
    let rho1 = displaced_thermal_rho1(alpha, policy)?;
    Ok(0.5 * (1.0 + trace_norm(&rho1.combine(p, &rho0, -(1.0 - p)))?))
}

/// Helstrom success probability at `p = 1/2`.
pub fn p_success_gaussian(alpha: f64, policy: &TruncationPolicy) -> Result<f64> {
    p_success_gaussian_with_prior(alpha, 0.5, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::hermitian_eigen;

    fn policy(alpha: f64) -> TruncationPolicy {
        TruncationPolicy::for_amplitude(alpha)
    }

    #[test]
    fn fidelity_bound_values() {
        assert_eq!(avg_fidelity_bound(&GaussianPrior::new(0.0).unwrap()), 0.5);
        assert_eq!(avg_fidelity_bound(&GaussianPrior::new(2.0).unwrap()), 0.75);
        assert!((avg_fidelity_bound(&GaussianPrior::new(1e12).unwrap()) - 1.0).abs() < 1e-11);
        assert!(GaussianPrior::new(-1.0).is_err());
    }

    #[test]
    fn heterodyne_moments() {
        let mut rng = SeededRng::new(11);
        let n = 1_000_000;
        let (mut s_re, mut s_im, mut s_re2, mut s_fid) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let z = heterodyne_sample(Complex64::new(0.0, 0.0), &mut rng);
            s_re += z.re;
            s_im += z.im;
            s_re2 += z.re * z.re;
            s_fid += (-z.norm_sqr()).exp();
        }
        let nf = n as f64;
        let var = s_re2 / nf - (s_re / nf).powi(2);
        assert!((var - 0.5).abs() < 0.005, "variance {var}");
        // Standard error of the mean is √(0.5/n) ≈ 7e-4.
        assert!((s_re / nf).abs() < 4e-3 && (s_im / nf).abs() < 4e-3);
        assert!((s_fid / nf - 0.5).abs() < 0.005);
    }

    #[test]
    fn heterodyne_is_unbiased_off_origin() {
        let mut rng = SeededRng::new(12);
        let alpha = Complex64::new(1.5, -0.7);
        let n = 200_000;
        let mean: Complex64 = (0..n)
            .map(|_| heterodyne_sample(alpha, &mut rng))
            .sum::<Complex64>()
            / n as f64;
        assert!((mean - alpha).norm() < 0.01);
    }

    #[test]
    fn mc_fidelity_saturates_bound() {
        for lambda in [1.0, 4.0] {
            let prior = GaussianPrior::new(lambda).unwrap();
            let est = mc_average_fidelity(&prior, 100_000, 5).unwrap();
            let bound = avg_fidelity_bound(&prior);
            assert!(
                (est.mean - bound).abs() < 3.0 * est.std_error,
                "{lambda}: {est:?} vs {bound}"
            );
        }
        assert!(matches!(
            mc_average_fidelity(&GaussianPrior::new(0.0).unwrap(), 10, 0),
            Err(Error::NonNormalizablePrior)
        ));
    }

    #[test]
    fn rho0_examples() {
        let vac = coherent_rho0(0.0, &TruncationPolicy::new(10)).unwrap();
        assert_eq!(vac.entry(0, 0).re, 1.0);
        assert_eq!(vac.trace(), 1.0);

        let one = coherent_rho0(1.0, &TruncationPolicy::new(30)).unwrap();
        assert!((one.trace() - 1.0).abs() < 1e-12);
        assert!((one.entry(0, 0).re - (-1.0f64).exp()).abs() < 1e-15);
        let spec = hermitian_eigen(&one, false).unwrap();
        assert!(spec.eigenvalues[0] > 1.0 - 1e-10);
    }

    #[test]
    fn cutoff_guards() {
        assert!(matches!(
            coherent_rho0(3.0, &TruncationPolicy::new(10)),
            Err(Error::InsufficientCutoff { .. })
        ));
        assert!(matches!(
            displaced_thermal_rho1(2.0, &TruncationPolicy::new(20)),
            Err(Error::InsufficientCutoff { .. })
        ));
        // Passes the tail rule but not the trace check.
        assert!(matches!(
            displaced_thermal_rho1(2.0, &TruncationPolicy::new(35)),
            Err(Error::InsufficientCutoff { .. })
        ));
    }

    #[test]
    fn rho1_vacuum_is_geometric_with_unit_mean() {
        let rho1 = displaced_thermal_rho1(0.0, &policy(0.0)).unwrap();
        assert!((rho1.entry(0, 0).re - 0.5).abs() < 1e-15);
        assert!((rho1.entry(1, 1).re - 0.25).abs() < 1e-15);
        assert_eq!(rho1.entry(1, 0).re, 0.0);
        let mean: f64 = (0..rho1.dim())
            .map(|m| m as f64 * rho1.entry(m, m).re)
            .sum();
        assert!((mean - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rho1_trace_at_cutoff_40() {
        // Geometric tail beyond 40 photons leaves a deficit of 2.93e-10.
        let pol = TruncationPolicy {
            cutoff: 40,
            tail_tolerance: 1e-9,
        };
        let rho1 = displaced_thermal_rho1(1.0, &pol).unwrap();
        assert!((1.0 - rho1.trace() - 2.9305e-10).abs() < 1e-13);
        let rho1 = displaced_thermal_rho1(1.0, &TruncationPolicy::new(50)).unwrap();
        assert!((rho1.trace() - 1.0).abs() < 1e-12);
    }

    /// Trapezoid rule over a square around `α` of `f(β) e^{-|β-α|²}/π`;
    /// spectrally accurate for Gaussian-weighted smooth integrands.
    fn rho1_by_quadrature(alpha: f64, dim: usize) -> Vec<Vec<f64>> {
        let half_width = 9.0;
        let steps = 180;
        let h = 2.0 * half_width / steps as f64;
        let mut out = vec![vec![0.0; dim]; dim];
        for i in 0..=steps {
            for j in 0..=steps {
                let (x, y) = (-half_width + i as f64 * h, -half_width + j as f64 * h);
                let w = (-(x * x + y * y)).exp() * h * h / std::f64::consts::PI;
                let beta = Complex64::new(alpha + x, y);
                let v = coherent_amplitudes(beta, dim);
                for m in 0..dim {
                    for n in 0..dim {
                        out[m][n] += w * (v[m] * v[n].conj()).re;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn rho1_matches_integral_form() {
        for alpha in [0.0, 0.4, 0.9, -0.6] {
            let dim = 12;
            let quad = rho1_by_quadrature(alpha, dim);
            // Entries inside the truncated block do not depend on the cutoff.
            let closed = displaced_thermal(
                alpha,
                1.0,
                &TruncationPolicy {
                    cutoff: dim - 1,
                    tail_tolerance: 1.0,
                },
            )
            .unwrap();
            for (m, row) in quad.iter().enumerate() {
                for (n, &q) in row.iter().enumerate() {
                    let diff = (closed.entry(m, n).re - q).abs();
                    assert!(diff < 1e-6, "alpha {alpha} ({m},{n}): {diff}");
                }
            }
        }
    }

    #[test]
    fn operators_hermitian_with_unit_trace() {
        for n in [0.0f64, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let alpha = n.sqrt();
            let pol = policy(alpha);
            for m in [
                coherent_rho0(alpha, &pol).unwrap(),
                displaced_thermal_rho1(alpha, &pol).unwrap(),
            ] {
                for i in 0..m.dim() {
                    for j in 0..m.dim() {
                        assert_eq!(m.entry(i, j), m.entry(j, i).conj());
                    }
                }
                assert!((m.trace() - 1.0).abs() < 1e-10);
            }
            let spec =
                hermitian_eigen(&displaced_thermal_rho1(alpha, &pol).unwrap(), false).unwrap();
            assert!(*spec.eigenvalues.last().unwrap() > -1e-9);
        }
    }

    #[test]
    fn fidelity_anchor_is_one_half() {
        for n in [0.0f64, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let a = n.sqrt();
            let f2 = fidelity_anchor(a, &policy(a)).unwrap();
            assert!((f2 - 0.5).abs() < 1e-6, "N = {n}: {f2}");
        }
    }

    #[test]
    fn vacuum_case_matches_diagonal_spectrum() {
        // (1/2)ρ1 - (1/2)|0><0| is diagonal at α = 0.
        let pol = policy(0.0);
        let mut abs_sum = 0.0;
        for m in 0..pol.dim() {
            let thermal = 0.5f64.powi(m as i32 + 1);
            let vac = if m == 0 { 1.0 } else { 0.0 };
            abs_sum += (0.5 * thermal - 0.5 * vac).abs();
        }
        let expected = 0.5 * (1.0 + abs_sum);
        let got = p_success_gaussian(0.0, &pol).unwrap();
        assert!((got - expected).abs() < 1e-14);
        assert!((got - 0.75).abs() < 1e-10);
    }

    #[test]
    fn success_never_below_three_quarters_and_cutoff_stable() {
        for n in [0.01f64, 0.3, 1.0, 2.0, 5.0, 12.0, 20.0] {
            let a = n.sqrt();
            let pol = policy(a);
            let ps = p_success_gaussian(a, &pol).unwrap();
            assert!(ps >= 0.75 - 1e-6, "N = {n}: {ps}");
            assert!(ps <= 1.0);
            let wider = p_success_gaussian(a, &pol.scaled(1.25)).unwrap();
            assert!((ps - wider).abs() < 1e-6);
        }
    }

    #[test]
    fn phase_of_alpha_does_not_matter() {
        // Rotating ρ0 and ρ1 by e^{iθn̂} leaves the trace norm unchanged.
        let a = 1.2;
        let pol = TruncationPolicy::new(50);
        let rho0 = coherent_rho0(a, &pol).unwrap();
        let rho1 = displaced_thermal_rho1(a, &pol).unwrap();
        let op = rho1.combine(0.5, &rho0, -0.5);
        let theta = 0.83;
        let rotated = HermitianMatrix::from_lower_fn(op.dim(), |m, n| {
            op.entry(m, n) * Complex64::from_polar(1.0, theta * (m as f64 - n as f64))
        });
        let t0 = trace_norm(&op).unwrap();
        let t1 = trace_norm(&rotated).unwrap();
        assert!((t0 - t1).abs() < 1e-9);
    }
}
