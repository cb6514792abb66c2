//! Sequential Bayesian spoof detection over repeated BPSK pulses.
//!
//! Each pulse is measured with the projector onto `|η+>`, the eigenvector of
//! `pρ1 - (1-p)ρ0` with the positive eigenvalue. Outcome `1` is the
//! projector firing (evidence for a spoof), outcome `0` its complement. The
//! outcome likelihoods `P(i|Hj)` then drive an ordinary Bayes update of the
//! hypothesis priors.

use std::fmt;

use num_complex::Complex64;

use crate::bpsk::{eta_pair, overlap, subspace_matrix, ScenarioParams};
use crate::error::{Error, Result};
use crate::math::SeededRng;

/// Eigenvalues within this distance of zero count as zero.
const EIGEN_TOL: f64 = 1e-12;
/// Slack allowed when checking that a probability lies in `[0, 1]`.
const PROB_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// Genuine return from the target.
    H0,
    /// Spoofed pulse.
    H1,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::H0 => f.write_str("H0"),
            Hypothesis::H1 => f.write_str("H1"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Projector onto `|η+>` did not fire.
    Zero,
    /// Projector onto `|η+>` fired.
    One,
}

/// How `|η+> = c+|α> + c-|-α>` is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `<η+|η+> = 1` using the Gram matrix of the non-orthogonal pair.
    #[default]
    Gram,
    /// `|c+|² + |c-|² = 1`, i.e. treating `|±α>` as orthonormal. The result
    /// is sub-normalized whenever `c+ c- < 0`.
    Euclidean,
}

/// Which prior the receiver uses to build its projector on each pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProjectorMode {
    /// Helstrom projector for the balanced prior `p = 1/2`, every pulse.
    #[default]
    Fixed,
    /// Helstrom projector for the current prior. Once the prior of `H1`
    /// passes `1/(γ+1)` the optimal measurement is trivial and the priors
    /// stop moving.
    Adaptive,
}

impl std::str::FromStr for ProjectorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(ProjectorMode::Fixed),
            "adaptive" => Ok(ProjectorMode::Adaptive),
            other => Err(Error::InvalidParameter(format!(
                "unknown projector mode '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrajectoryConfig {
    pub mode: ProjectorMode,
    pub normalization: Normalization,
}

/// Coefficients of `|η+>` over `{|α>, |-α>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorCoeffs {
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

impl ProjectorCoeffs {
    /// `<η+|η+>` computed with the Gram matrix of `{|α>, |-α>}`.
    pub fn gram_norm_sqr(&self, n: f64) -> f64 {
        let s = overlap(n);
        self.c_plus.norm_sqr()
            + self.c_minus.norm_sqr()
            + 2.0 * (self.c_plus.conj() * self.c_minus).re * s
    }

    /// `<α|η+>`.
    pub fn overlap_plus(&self, n: f64) -> Complex64 {
        self.c_plus + self.c_minus * overlap(n)
    }

    /// `<-α|η+>`.
    pub fn overlap_minus(&self, n: f64) -> Complex64 {
        self.c_plus * overlap(n) + self.c_minus
    }
}

/// Likelihoods `P(i|Hj)` of a single measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeProbs {
    pub p1_given_h0: f64,
    pub p1_given_h1: f64,
    pub p0_given_h0: f64,
    pub p0_given_h1: f64,
}

impl OutcomeProbs {
    pub fn new(p1_given_h0: f64, p1_given_h1: f64) -> Result<Self> {
        crate::bpsk::check_probability("P(1|H0)", p1_given_h0)?;
        crate::bpsk::check_probability("P(1|H1)", p1_given_h1)?;
        Ok(Self {
            p1_given_h0,
            p1_given_h1,
            p0_given_h0: 1.0 - p1_given_h0,
            p0_given_h1: 1.0 - p1_given_h1,
        })
    }

    pub fn likelihood(&self, outcome: Outcome, hypothesis: Hypothesis) -> f64 {
        match (outcome, hypothesis) {
            (Outcome::One, Hypothesis::H0) => self.p1_given_h0,
            (Outcome::One, Hypothesis::H1) => self.p1_given_h1,
            (Outcome::Zero, Hypothesis::H0) => self.p0_given_h0,
            (Outcome::Zero, Hypothesis::H1) => self.p0_given_h1,
        }
    }

    /// Kullback-Leibler divergence (nats) of the outcome distribution under
    /// `truth` from the one under the other hypothesis.
    pub fn kl_divergence(&self, truth: Hypothesis) -> f64 {
        let (t, o) = match truth {
            Hypothesis::H0 => (
                [self.p0_given_h0, self.p1_given_h0],
                [self.p0_given_h1, self.p1_given_h1],
            ),
            Hypothesis::H1 => (
                [self.p0_given_h1, self.p1_given_h1],
                [self.p0_given_h0, self.p1_given_h0],
            ),
        };
        t.iter()
            .zip(&o)
            .filter(|(ti, _)| **ti > 0.0)
            .map(|(ti, oi)| {
                if *oi > 0.0 {
                    ti * (ti / oi).ln()
                } else {
                    f64::INFINITY
                }
            })
            .sum()
    }
}

/// Current hypothesis priors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesState {
    pub prior_h0: f64,
    pub prior_h1: f64,
    pub pulse_index: usize,
    /// Set when the pulse that produced this state needed no measurement
    /// because the optimal receiver decides this hypothesis outright.
    pub forced_decision: Option<Hypothesis>,
}

impl BayesState {
    pub fn new(prior_h1: f64) -> Result<Self> {
        crate::bpsk::check_probability("prior of H1", prior_h1)?;
        Ok(Self {
            prior_h0: 1.0 - prior_h1,
            prior_h1,
            pulse_index: 0,
            forced_decision: None,
        })
    }

    pub fn even() -> Self {
        Self {
            prior_h0: 0.5,
            prior_h1: 0.5,
            pulse_index: 0,
            forced_decision: None,
        }
    }

    pub fn prior(&self, h: Hypothesis) -> f64 {
        match h {
            Hypothesis::H0 => self.prior_h0,
            Hypothesis::H1 => self.prior_h1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesTrajectory {
    pub states: Vec<BayesState>,
    pub true_hypothesis: Hypothesis,
    pub seed: u64,
    pub mean_photon_number: f64,
}

impl BayesTrajectory {
    pub fn final_state(&self) -> &BayesState {
        self.states
            .last()
            .expect("trajectory holds at least the initial state")
    }
}

pub fn projector_coeffs(params: &ScenarioParams) -> Result<ProjectorCoeffs> {
    projector_coeffs_with(params, Normalization::Gram)
}

/// Solve `(M - η+ I) c = 0` for the coefficients of `|η+>`.
///
/// Fails with [`Error::DegenerateProjector`] when the optimal measurement is
/// trivial: no positive eigenvalue (always decide `H0`) or two positive
/// eigenvalues (always decide `H1`).
pub fn projector_coeffs_with(
    params: &ScenarioParams,
    normalization: Normalization,
) -> Result<ProjectorCoeffs> {
    let eta = eta_pair(params)?;
    if eta.eta_plus <= EIGEN_TOL {
        return Err(Error::DegenerateProjector {
            decision: Hypothesis::H0,
        });
    }
    if eta.eta_minus > EIGEN_TOL {
        return Err(Error::DegenerateProjector {
            decision: Hypothesis::H1,
        });
    }
    let m = subspace_matrix(params);
    let e = eta.eta_plus;
    // Null vectors read off either row; keep the better-conditioned one.
    let from_row0 = [m[0][1], e - m[0][0]];
    let from_row1 = [e - m[1][1], m[1][0]];
    let n0 = from_row0[0].hypot(from_row0[1]);
    let n1 = from_row1[0].hypot(from_row1[1]);
    let [mut cp, mut cm] = if n0 >= n1 { from_row0 } else { from_row1 };
    if n0.max(n1) == 0.0 {
        // M = η+ I: every vector is an eigenvector.
        [cp, cm] = [1.0, 0.0];
    }
    if cp.abs() < cm.abs() && cm < 0.0 || cp.abs() >= cm.abs() && cp < 0.0 {
        cp = -cp;
        cm = -cm;
    }
    let norm_sqr = match normalization {
        Normalization::Gram => {
            cp * cp + cm * cm + 2.0 * cp * cm * overlap(params.mean_photon_number)
        }
        Normalization::Euclidean => cp * cp + cm * cm,
    };
    if norm_sqr.is_nan() || norm_sqr <= 0.0 {
        return Err(Error::NumericalInconsistency {
            context: "projector normalization",
            value: norm_sqr,
        });
    }
    let scale = norm_sqr.sqrt().recip();
    Ok(ProjectorCoeffs {
        c_plus: Complex64::new(cp * scale, 0.0),
        c_minus: Complex64::new(cm * scale, 0.0),
    })
}

pub fn outcome_probs(params: &ScenarioParams) -> Result<OutcomeProbs> {
    outcome_probs_with(params, Normalization::Gram)
}

/// `P(1|H0) = |<α|η+>|²` and `P(1|H1) = γ P(1|H0) + (1-γ)|<-α|η+>|²`.
pub fn outcome_probs_with(
    params: &ScenarioParams,
    normalization: Normalization,
) -> Result<OutcomeProbs> {
    let c = projector_coeffs_with(params, normalization)?;
    let n = params.mean_photon_number;
    let g = params.gamma();
    let p1h0 = clamp_probability(c.overlap_plus(n).norm_sqr())?;
    let p1h1 = clamp_probability(g * p1h0 + (1.0 - g) * c.overlap_minus(n).norm_sqr())?;
    OutcomeProbs::new(p1h0, p1h1)
}

fn clamp_probability(x: f64) -> Result<f64> {
    if (-PROB_TOL..=1.0 + PROB_TOL).contains(&x) {
        Ok(x.clamp(0.0, 1.0))
    } else {
        Err(Error::NumericalInconsistency {
            context: "outcome probability",
            value: x,
        })
    }
}

/// Posterior priors after observing `outcome`.
pub fn bayes_update(
    state: &BayesState,
    outcome: Outcome,
    probs: &OutcomeProbs,
) -> Result<BayesState> {
    let w0 = probs.likelihood(outcome, Hypothesis::H0) * state.prior_h0;
    let w1 = probs.likelihood(outcome, Hypothesis::H1) * state.prior_h1;
    let denom = w0 + w1;
    if denom == 0.0 {
        return Err(Error::ImpossibleOutcome);
    }
    let prior_h0 = w0 / denom;
    Ok(BayesState {
        prior_h0,
        prior_h1: 1.0 - prior_h0,
        pulse_index: state.pulse_index + 1,
        forced_decision: None,
    })
}

pub fn simulate_trajectory(
    truth: Hypothesis,
    params: &ScenarioParams,
    n_pulses: usize,
    seed: u64,
) -> Result<BayesTrajectory> {
    simulate_trajectory_with(truth, params, n_pulses, seed, &TrajectoryConfig::default())
}

/// Run `n_pulses` measurements starting from even priors. The prior in
/// `params` is ignored; `γ` (forced or derived from `N`) is kept.
pub fn simulate_trajectory_with(
    truth: Hypothesis,
    params: &ScenarioParams,
    n_pulses: usize,
    seed: u64,
    config: &TrajectoryConfig,
) -> Result<BayesTrajectory> {
    if n_pulses == 0 {
        return Err(Error::InvalidParameter(
            "trajectory needs at least one pulse".into(),
        ));
    }
    let mut rng = SeededRng::new(seed);
    let balanced = params.with_prior(0.5)?;
    let fixed = match config.mode {
        ProjectorMode::Fixed => Some(probs_or_decision(&balanced, config.normalization)?),
        ProjectorMode::Adaptive => None,
    };

    let mut states = Vec::with_capacity(n_pulses + 1);
    let mut state = BayesState::even();
    states.push(state);
    for _ in 0..n_pulses {
        let step = match fixed {
            Some(step) => step,
            None => probs_or_decision(&params.with_prior(state.prior_h1)?, config.normalization)?,
        };
        state = match step {
            Step::Measure(probs) => {
                let p_one = match truth {
                    Hypothesis::H0 => probs.p1_given_h0,
                    Hypothesis::H1 => probs.p1_given_h1,
                };
                let outcome = if rng.bernoulli(p_one) {
                    Outcome::One
                } else {
                    Outcome::Zero
                };
                bayes_update(&state, outcome, &probs)?
            }
            Step::Decide(h) => BayesState {
                pulse_index: state.pulse_index + 1,
                forced_decision: Some(h),
                ..state
            },
        };
        states.push(state);
    }
    Ok(BayesTrajectory {
        states,
        true_hypothesis: truth,
        seed,
        mean_photon_number: params.mean_photon_number,
    })
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Measure(OutcomeProbs),
    Decide(Hypothesis),
}

fn probs_or_decision(params: &ScenarioParams, normalization: Normalization) -> Result<Step> {
    match outcome_probs_with(params, normalization) {
        Ok(p) => Ok(Step::Measure(p)),
        Err(Error::DegenerateProjector { decision }) => Ok(Step::Decide(decision)),
        Err(e) => Err(e),
    }
}
