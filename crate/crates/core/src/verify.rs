//! Oracle-agreement checks: each closed form against an independent
//! truncated number-basis computation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bpsk::{
    bpsk_fock_oracle, default_oracle_cutoff, eta_pair, gamma, p_success_bpsk,
    spoof_assumption_threshold, ScenarioParams,
};
use crate::error::Result;
use crate::gaussian::{fidelity_anchor, TruncationPolicy};
use crate::math::{coherent_density, trace_norm};
use crate::two_pulse::{cubic_coeffs, solve_cubic, two_pulse_fock_oracle};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

const PRIORS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Largest mismatch between two sorted lists; a length mismatch counts as
/// infinite error.
fn list_error(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn nonzero_closed_form(values: &[f64]) -> Vec<f64> {
    values.iter().copied().filter(|v| v.abs() > 1e-9).collect()
}

pub fn bpsk_oracle_check() -> Result<Check> {
    let grid: Vec<(f64, f64)> = PRIORS
        .iter()
        .flat_map(|&p| [0.01, 0.1, 1.0, 2.0].map(|n| (p, n)))
        .collect();
    let errors = grid
        .par_iter()
        .map(|&(p, n)| {
            let sp = ScenarioParams::new(n, p)?;
            let eta = eta_pair(&sp)?;
            let fock = bpsk_fock_oracle(&sp, default_oracle_cutoff(n))?.nonzero(1e-9);
            Ok(list_error(
                &fock,
                &nonzero_closed_form(&[eta.eta_plus, eta.eta_minus]),
            ))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Check {
        name: "bpsk eigenvalues vs Fock spectrum",
        max_error: errors.into_iter().fold(0.0, f64::max),
        tolerance: 1e-8,
    })
}

pub fn two_pulse_oracle_check() -> Result<Check> {
    let grid: Vec<(f64, f64)> = PRIORS
        .iter()
        .flat_map(|&p| [0.05, 0.1, 0.5, 1.0].map(|n| (p, n)))
        .collect();
    let errors = grid
        .par_iter()
        .map(|&(p, n)| {
            let sp = ScenarioParams::new(n, p)?;
            let roots = solve_cubic(&cubic_coeffs(&sp))?;
            let fock = two_pulse_fock_oracle(&sp, 30)?.nonzero(1e-9);
            Ok(list_error(&fock, &nonzero_closed_form(&roots)))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Check {
        name: "two-pulse cubic roots vs two-mode Fock spectrum",
        max_error: errors.into_iter().fold(0.0, f64::max),
        tolerance: 1e-8,
    })
}

pub fn gamma_check() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in [0.01, 0.1, 0.5, 1.0, 2.0] {
        let dim = default_oracle_cutoff(n) + 1;
        let a = coherent_density(Complex64::new(n.sqrt(), 0.0), dim);
        let b = coherent_density(Complex64::new(-n.sqrt(), 0.0), dim);
        let helstrom = 0.5 * (1.0 + trace_norm(&a.combine(0.5, &b, -0.5))?);
        worst = worst.max((helstrom - gamma(n)).abs());
    }
    Ok(Check {
        name: "spoofer success probability vs pure-state Helstrom",
        max_error: worst,
        tolerance: 1e-10,
    })
}

pub fn threshold_check() -> Result<Check> {
    let n = 0.1;
    let t = spoof_assumption_threshold(n);
    let mut worst: f64 = 0.0;
    for i in 1..=20 {
        let p = t + (1.0 - t) * i as f64 / 21.0;
        worst = worst.max((p_success_bpsk(&ScenarioParams::new(n, p)?)? - p).abs());
    }
    Ok(Check {
        name: "success equals prior above 1/(gamma+1)",
        max_error: worst,
        tolerance: 1e-12,
    })
}

pub fn fidelity_anchor_check() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in [0.0f64, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let a = n.sqrt();
        worst = worst.max((fidelity_anchor(a, &TruncationPolicy::for_amplitude(a))? - 0.5).abs());
    }
    Ok(Check {
        name: "<alpha|rho1|alpha> = 1/2",
        max_error: worst,
        tolerance: 1e-6,
    })
}

/// Every check, in a fixed order.
pub fn run_all() -> Result<Vec<Check>> {
    Ok(vec![
        bpsk_oracle_check()?,
        gamma_check()?,
        threshold_check()?,
        fidelity_anchor_check()?,
        two_pulse_oracle_check()?,
    ])
}
