//! Parameter sweeps that regenerate the figure curves as tables.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bayes::{
    simulate_trajectory_with, BayesTrajectory, Hypothesis, ProjectorMode, TrajectoryConfig,
};
use crate::bpsk::{p_success_bpsk, p_success_prior_only, ScenarioParams};
use crate::error::{Error, Result};
use crate::gaussian::{p_success_gaussian, TruncationPolicy};
use crate::two_pulse::p_success_two_pulse;

/// One named curve of a [`SweepTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub label: String,
    pub values: Vec<f64>,
}

/// Ordered `(x, y1, y2, ...)` records plus scalar annotations such as the
/// location of a peak.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub x_name: String,
    pub x_values: Vec<f64>,
    pub x_log: bool,
    pub series: Vec<Series>,
    pub notes: Vec<(String, f64)>,
}

impl SweepTable {
    pub fn new(x_name: impl Into<String>, x_values: Vec<f64>, x_log: bool) -> Result<Self> {
        if x_values
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::InvalidGrid(
                "x values must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            x_name: x_name.into(),
            x_values,
            x_log,
            series: Vec::new(),
            notes: Vec::new(),
        })
    }

    pub fn push_series(
        &mut self,
        name: impl Into<String>,
        label: impl Into<String>,
        values: Vec<f64>,
    ) -> Result<()> {
        if values.len() != self.x_values.len() {
            return Err(Error::InvalidGrid(format!(
                "series has {} values for {} grid points",
                values.len(),
                self.x_values.len()
            )));
        }
        self.series.push(Series {
            name: name.into(),
            label: label.into(),
            values,
        });
        Ok(())
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn note(&self, key: &str) -> Option<f64> {
        self.notes.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// Grid point at which `series` is largest (first one on ties).
    pub fn argmax(&self, series: &str) -> Option<f64> {
        let s = self.series(series)?;
        let mut best = 0;
        for (i, v) in s.values.iter().enumerate() {
            if *v > s.values[best] {
                best = i;
            }
        }
        self.x_values.get(best).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl Grid {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            log: false,
        }
    }

    pub fn log(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            log: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidGrid(format!(
                "grid count must be >= 2, got {}",
                self.count
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidGrid(format!(
                "need finite min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.log && self.min <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "log grid needs min > 0, got {}",
                self.min
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let last = (self.count - 1) as f64;
        let mut v: Vec<f64> = if self.log {
            let (a, b) = (self.min.log10(), self.max.log10());
            (0..self.count)
                .map(|i| 10f64.powf(a + (b - a) * i as f64 / last))
                .collect()
        } else {
            (0..self.count)
                .map(|i| self.min + (self.max - self.min) * i as f64 / last)
                .collect()
        };
        // Pin the endpoints exactly.
        v[0] = self.min;
        v[self.count - 1] = self.max;
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    BpskVsP,
    BpskVsN,
    Bayes,
    GaussVsN,
    TwoPulseVsP,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::BpskVsP,
        Scenario::BpskVsN,
        Scenario::Bayes,
        Scenario::GaussVsN,
        Scenario::TwoPulseVsP,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::BpskVsP => "bpsk-vs-p",
            Scenario::BpskVsN => "bpsk-vs-n",
            Scenario::Bayes => "bayes",
            Scenario::GaussVsN => "gauss-vs-n",
            Scenario::TwoPulseVsP => "twopulse-vs-p",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scenario '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(Error::InvalidParameter(format!("unknown format '{other}'"))),
        }
    }
}

/// Everything a figure or sweep run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub grid: Grid,
    pub mean_photon_number: f64,
    pub prior_spoof: f64,
    pub seed: u64,
    pub n_pulses: usize,
    pub n_trials: usize,
    pub cutoff: Option<usize>,
    pub format: OutputFormat,
    /// Receiver strategy for the sequential-detection scenario.
    pub projector: ProjectorMode,
}

pub const DEFAULT_P_POINTS: usize = 101;
pub const DEFAULT_N_POINTS: usize = 61;

impl RunConfig {
    /// Defaults that regenerate the published curve for `scenario`.
    pub fn defaults(scenario: Scenario) -> Self {
        let grid = match scenario {
            Scenario::BpskVsP | Scenario::TwoPulseVsP => Grid::linear(0.0, 1.0, DEFAULT_P_POINTS),
            Scenario::BpskVsN => Grid::log(1e-5, 10.0, DEFAULT_N_POINTS),
            Scenario::GaussVsN => Grid::log(0.01, 20.0, DEFAULT_N_POINTS),
            // Pulse axis; only the count is used.
            Scenario::Bayes => Grid::linear(0.0, 200.0, 201),
        };
        Self {
            scenario,
            grid,
            mean_photon_number: 0.1,
            prior_spoof: 0.5,
            seed: 0,
            n_pulses: 200,
            n_trials: 500,
            cutoff: None,
            format: OutputFormat::Csv,
            projector: ProjectorMode::Fixed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenario != Scenario::Bayes {
            self.grid.validate()?;
        }
        ScenarioParams::new(self.mean_photon_number, self.prior_spoof)?;
        if self.n_pulses == 0 {
            return Err(Error::InvalidParameter("pulse count must be >= 1".into()));
        }
        Ok(())
    }
}

fn p_grid_checked(config: &RunConfig) -> Result<Vec<f64>> {
    let xs = config.grid.values()?;
    if xs[0] < 0.0 || xs[xs.len() - 1] > 1.0 {
        return Err(Error::InvalidGrid(
            "prior grid must lie within [0, 1]".into(),
        ));
    }
    Ok(xs)
}

fn n_grid_checked(config: &RunConfig) -> Result<Vec<f64>> {
    let xs = config.grid.values()?;
    if xs[0] < 0.0 {
        return Err(Error::InvalidGrid(
            "photon-number grid must be non-negative".into(),
        ));
    }
    Ok(xs)
}

/// BPSK success probability against the prior-only guess, versus `p`.
pub fn run_fig1(config: &RunConfig) -> Result<SweepTable> {
    let ps = p_grid_checked(config)?;
    let n = config.mean_photon_number;
    let solid = ps
        .iter()
        .map(|&p| p_success_bpsk(&ScenarioParams::new(n, p)?))
        .collect::<Result<Vec<_>>>()?;
    let dashed: Vec<f64> = ps.iter().map(|&p| p_success_prior_only(p)).collect();
    let separation = solid
        .iter()
        .zip(&dashed)
        .map(|(a, b)| a - b)
        .fold(0.0, f64::max);
    let mut t = SweepTable::new("p", ps, config.grid.log)?;
    t.push_series("p_success", "optimal classical spoofer", solid)?;
    t.push_series("p_prior_only", "perfect spoofer (prior only)", dashed)?;
    t.notes.push(("n".into(), n));
    t.notes.push(("max_separation".into(), separation));
    Ok(t)
}

/// BPSK success probability at `p = 1/2` versus `N`.
pub fn run_fig2(config: &RunConfig) -> Result<SweepTable> {
    let ns = n_grid_checked(config)?;
    let vals = ns
        .iter()
        .map(|&n| p_success_bpsk(&ScenarioParams::new(n, 0.5)?))
        .collect::<Result<Vec<_>>>()?;
    let mut t = SweepTable::new("n", ns, config.grid.log)?;
    t.push_series("p_success", "p = 1/2", vals)?;
    let peak = t.argmax("p_success").expect("series exists");
    t.notes.push(("argmax_n".into(), peak));
    Ok(t)
}

/// A true-`H0` and a true-`H1` Bayesian trajectory from even priors.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Result {
    pub h0_true: BayesTrajectory,
    pub h1_true: BayesTrajectory,
}

impl Fig3Result {
    pub fn to_table(&self) -> Result<SweepTable> {
        let xs: Vec<f64> = self
            .h0_true
            .states
            .iter()
            .map(|s| s.pulse_index as f64)
            .collect();
        let mut t = SweepTable::new("pulse_index", xs, false)?;
        for (tag, traj) in [("h0_true", &self.h0_true), ("h1_true", &self.h1_true)] {
            t.push_series(
                format!("{tag}_P(H0)"),
                format!("{tag}: P(H0)"),
                traj.states.iter().map(|s| s.prior_h0).collect(),
            )?;
            t.push_series(
                format!("{tag}_P(H1)"),
                format!("{tag}: P(H1)"),
                traj.states.iter().map(|s| s.prior_h1).collect(),
            )?;
        }
        t.notes.push(("n".into(), self.h0_true.mean_photon_number));
        t.notes.push(("seed".into(), self.h0_true.seed as f64));
        Ok(t)
    }
}

pub fn run_fig3(config: &RunConfig) -> Result<Fig3Result> {
    let params = ScenarioParams::new(config.mean_photon_number, 0.5)?;
    let tc = TrajectoryConfig {
        mode: config.projector,
        ..TrajectoryConfig::default()
    };
    Ok(Fig3Result {
        h0_true: simulate_trajectory_with(
            Hypothesis::H0,
            &params,
            config.n_pulses,
            config.seed,
            &tc,
        )?,
        h1_true: simulate_trajectory_with(
            Hypothesis::H1,
            &params,
            config.n_pulses,
            config.seed,
            &tc,
        )?,
    })
}

/// Median final posterior of the true hypothesis over `n_trials`
/// trajectories seeded `seed, seed+1, ...`, for true `H0` and true `H1`.
pub fn bayes_ensemble_medians(config: &RunConfig) -> Result<(f64, f64)> {
    if config.n_trials == 0 {
        return Err(Error::InvalidParameter("trial count must be >= 1".into()));
    }
    let params = ScenarioParams::new(config.mean_photon_number, 0.5)?;
    let tc = TrajectoryConfig {
        mode: config.projector,
        ..TrajectoryConfig::default()
    };
    let median_for = |truth: Hypothesis| -> Result<f64> {
        let mut finals = (0..config.n_trials as u64)
            .into_par_iter()
            .map(|i| {
                let traj = simulate_trajectory_with(
                    truth,
                    &params,
                    config.n_pulses,
                    config.seed.wrapping_add(i),
                    &tc,
                )?;
                Ok(traj.final_state().prior(truth))
            })
            .collect::<Result<Vec<f64>>>()?;
        finals.sort_by(f64::total_cmp);
        let k = finals.len();
        Ok(if k % 2 == 1 {
            finals[k / 2]
        } else {
            0.5 * (finals[k / 2 - 1] + finals[k / 2])
        })
    };
    Ok((median_for(Hypothesis::H0)?, median_for(Hypothesis::H1)?))
}

/// Gaussian-modulation success probability at `p = 1/2` versus `N`.
pub fn run_fig4(config: &RunConfig) -> Result<SweepTable> {
    let ns = n_grid_checked(config)?;
    let vals = ns
        .par_iter()
        .map(|&n| {
            let alpha = n.sqrt();
            let policy = match config.cutoff {
                Some(c) => TruncationPolicy::new(c),
                None => TruncationPolicy::for_amplitude(alpha),
            };
            p_success_gaussian(alpha, &policy)
        })
        .collect::<Result<Vec<_>>>()?;
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let mut t = SweepTable::new("n", ns, config.grid.log)?;
    t.push_series("p_success", "heterodyne spoofer, p = 1/2", vals)?;
    let peak = t.argmax("p_success").expect("series exists");
    t.notes.push(("argmax_n".into(), peak));
    t.notes.push(("min_p_success".into(), min));
    Ok(t)
}

/// Two received pulses: success probability versus `p`, with the perfect
/// spoofer for reference.
pub fn run_fig5(config: &RunConfig) -> Result<SweepTable> {
    let ps = p_grid_checked(config)?;
    let n = config.mean_photon_number;
    let solid = ps
        .iter()
        .map(|&p| p_success_two_pulse(&ScenarioParams::new(n, p)?))
        .collect::<Result<Vec<_>>>()?;
    let dashed: Vec<f64> = ps.iter().map(|&p| p_success_prior_only(p)).collect();
    let mut t = SweepTable::new("p", ps, config.grid.log)?;
    t.push_series("p_success", "optimal classical spoofer", solid)?;
    t.push_series("p_prior_only", "perfect spoofer (prior only)", dashed)?;
    t.notes.push(("n".into(), n));
    Ok(t)
}

/// Run `config.scenario` and return its table.
pub fn run_scenario(config: &RunConfig) -> Result<SweepTable> {
    config.validate()?;
    match config.scenario {
        Scenario::BpskVsP => run_fig1(config),
        Scenario::BpskVsN => run_fig2(config),
        Scenario::Bayes => {
            let mut t = run_fig3(config)?.to_table()?;
            let (h0, h1) = bayes_ensemble_medians(config)?;
            t.notes.push(("median_final_P(H0)_h0_true".into(), h0));
            t.notes.push(("median_final_P(H1)_h1_true".into(), h1));
            Ok(t)
        }
        Scenario::GaussVsN => run_fig4(config),
        Scenario::TwoPulseVsP => run_fig5(config),
    }
}
