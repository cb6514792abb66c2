//! Skin return plus spoof pulse: two modes arrive and the receiver must
//! decide which one is the spoof.
//!
//! `H0`: first mode is the skin return, `ρ0 = ρ_ret ⊗ ρ_sp`.
//! `H1`: the converse, `ρ1 = ρ_sp ⊗ ρ_ret`.
//!
//! The nonzero spectrum of `pρ1 - (1-p)ρ0` lives in the span of
//! `{|α,α>, |α,-α>, |-α,α>}` and solves a cubic.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::bpsk::{p_success_prior_only, ScenarioParams};
use crate::error::{Error, Result};
use crate::math::{coherent_density, hermitian_eigen, SpectralResult};

/// Largest per-mode cutoff accepted by the two-mode oracle; the dense
/// eigensolve is on `(cutoff + 1)²` states.
pub const MAX_TWO_MODE_CUTOFF: usize = 40;

/// Imaginary parts of companion-matrix eigenvalues up to this size (relative
/// to the coefficient scale) are treated as rounding noise.
const COMPLEX_ROOT_TOL: f64 = 1e-6;

/// Coefficients of `a3 η³ + a2 η² + a1 η + a0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoeffs {
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl CubicCoeffs {
    pub fn eval(&self, eta: f64) -> f64 {
        ((self.a3 * eta + self.a2) * eta + self.a1) * eta + self.a0
    }

    fn derivative(&self, eta: f64) -> f64 {
        (3.0 * self.a3 * eta + 2.0 * self.a2) * eta + self.a1
    }
}

pub fn cubic_coeffs(params: &ScenarioParams) -> CubicCoeffs {
    let p = params.prior_spoof;
    let g = params.gamma();
    let n = params.mean_photon_number;
    // e^{-4N} - 1 and e^{-8N} - 1, accurate for small N.
    let d4 = (-4.0 * n).exp_m1();
    let d8 = (-8.0 * n).exp_m1();
    let q = 2.0 * p - 1.0;
    let h = 1.0 - g;
    CubicCoeffs {
        a3: -1.0,
        a2: q,
        a1: q * q * g * h * d4 - p * (1.0 - p) * h * h * d8,
        a0: -q * g * p * (1.0 - p) * h * h * d4 * d4,
    }
}

/// Matrix of `pρ1 - (1-p)ρ0` acting on the coefficients of
/// `c++|α,α> + c+-|α,-α> + c-+|-α,α>`.
pub fn subspace_matrix(params: &ScenarioParams) -> [[f64; 3]; 3] {
    let p = params.prior_spoof;
    let g = params.gamma();
    let s = crate::bpsk::overlap(params.mean_photon_number);
    let w0 = (2.0 * p - 1.0) * g;
    let w1 = (p - 1.0) * (1.0 - g);
    let w2 = p * (1.0 - g);
    [
        [w0, w0 * s, w0 * s],
        [w1 * s, w1, w1 * s * s],
        [w2 * s, w2 * s * s, w2],
    ]
}

/// Real roots sorted descending.
///
/// Eigenvalues of the companion matrix, each refined by a few Newton steps.
/// Exactly vanishing trailing coefficients are deflated first so the
/// perfect-spoofer case returns exact zeros.
pub fn solve_cubic(coeffs: &CubicCoeffs) -> Result<[f64; 3]> {
    if coeffs.a3 == 0.0 {
        return Err(Error::InvalidParameter(
            "leading cubic coefficient is zero".into(),
        ));
    }
    let (b2, b1, b0) = (
        coeffs.a2 / coeffs.a3,
        coeffs.a1 / coeffs.a3,
        coeffs.a0 / coeffs.a3,
    );
    let mut roots = if b0 == 0.0 && b1 == 0.0 {
        [-b2, 0.0, 0.0]
    } else if b0 == 0.0 {
        let [r1, r2] = quadratic_roots(b2, b1)?;
        [r1, r2, 0.0]
    } else {
        let companion = Matrix3::new(-b2, -b1, -b0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
        let eig = companion.complex_eigenvalues();
        let scale = 1.0f64
            .max(b2.abs())
            .max(b1.abs().sqrt())
            .max(b0.abs().cbrt());
        let mut out = [0.0; 3];
        for (slot, z) in out.iter_mut().zip(eig.iter()) {
            let z: Complex64 = *z;
            if z.im.abs() > COMPLEX_ROOT_TOL * scale {
                return Err(Error::NumericalInconsistency {
                    context: "cubic has complex roots",
                    value: z.im,
                });
            }
            *slot = polish(coeffs, z.re);
        }
        out
    };
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots)
}

/// Roots of `x² + b x + c` (real by construction here).
fn quadratic_roots(b: f64, c: f64) -> Result<[f64; 2]> {
    let disc = b * b - 4.0 * c;
    if disc < -1e-14 * (1.0 + b * b) {
        return Err(Error::NumericalInconsistency {
            context: "quadratic has complex roots",
            value: disc,
        });
    }
    let sq = disc.max(0.0).sqrt();
    // Cancellation-free pair.
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        return Ok([0.0, 0.0]);
    }
    Ok([q, c / q])
}

fn polish(coeffs: &CubicCoeffs, mut x: f64) -> f64 {
    for _ in 0..4 {
        let d = coeffs.derivative(x);
        if d == 0.0 {
            break;
        }
        let step = coeffs.eval(x) / d;
        let next = x - step;
        if !next.is_finite() || coeffs.eval(next).abs() > coeffs.eval(x).abs() {
            break;
        }
        x = next;
    }
    x
}

/// Helstrom success probability `(1 + Σ|ηi|) / 2` over the cubic's roots.
pub fn p_success_two_pulse(params: &ScenarioParams) -> Result<f64> {
    // A perfect spoof makes the hypotheses identical; the root sum would
    // only reproduce the prior guess up to rounding.
    if params.gamma() == 1.0 {
        return Ok(p_success_prior_only(params.prior_spoof));
    }
    let roots = solve_cubic(&cubic_coeffs(params))?;
    Ok(0.5 * (1.0 + roots.iter().map(|r| r.abs()).sum::<f64>()))
}

pub fn default_two_mode_cutoff(n: f64) -> usize {
    ((10.0 * n).ceil() as usize).clamp(30, MAX_TWO_MODE_CUTOFF)
}

/// Spectrum of `pρ1 - (1-p)ρ0` in the truncated two-mode number basis.
pub fn two_pulse_fock_oracle(params: &ScenarioParams, cutoff: usize) -> Result<SpectralResult> {
    if cutoff > MAX_TWO_MODE_CUTOFF {
        return Err(Error::InvalidParameter(format!(
            "two-mode cutoff {cutoff} exceeds {MAX_TWO_MODE_CUTOFF}"
        )));
    }
    let n = params.mean_photon_number;
    let required = (10.0 * n.max(1.0)).ceil() as usize;
    if cutoff < required {
        return Err(Error::InsufficientCutoff { cutoff, required });
    }
    let dim = cutoff + 1;
    let alpha = params.amplitude();
    let g = params.gamma();
    let p = params.prior_spoof;
    let ret = coherent_density(Complex64::new(alpha, 0.0), dim);
    let minus = coherent_density(Complex64::new(-alpha, 0.0), dim);
    let sp = ret.combine(g, &minus, 1.0 - g);
    let rho0 = ret.kron(&sp);
    let rho1 = sp.kron(&ret);
    hermitian_eigen(&rho1.combine(p, &rho0, -(1.0 - p)), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bpsk::p_success_prior_only;
    use crate::math::SeededRng;
    use proptest::prelude::*;

    fn params(n: f64, p: f64) -> ScenarioParams {
        ScenarioParams::new(n, p).unwrap()
    }

    fn det3(m: [[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    fn char_det(sp: &ScenarioParams, eta: f64) -> f64 {
        let mut m = subspace_matrix(sp);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= eta;
        }
        det3(m)
    }

    #[test]
    fn perfect_spoofer_coefficients() {
        let c = cubic_coeffs(&params(0.1, 0.7).with_gamma(1.0).unwrap());
        assert_eq!((c.a3, c.a1, c.a0), (-1.0, 0.0, 0.0));
        assert!((c.a2 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn even_prior_kills_even_terms() {
        let c = cubic_coeffs(&params(0.3, 0.5));
        assert_eq!(c.a2, 0.0);
        assert_eq!(c.a0, 0.0);
        assert!(c.a1 > 0.0);
    }

    #[test]
    fn coefficients_match_sampled_determinant() {
        // det(M - ηI) is a cubic in η; matching it at 20 random points pins
        // all four coefficients.
        let sp = params(0.1, 0.3);
        let c = cubic_coeffs(&sp);
        let mut rng = SeededRng::new(3);
        for _ in 0..20 {
            let eta = 2.0 * rng.uniform() - 1.0;
            assert!((c.eval(eta) - char_det(&sp, eta)).abs() < 1e-10);
        }
    }

    #[test]
    fn factorized_cases() {
        let roots = solve_cubic(&CubicCoeffs {
            a3: -1.0,
            a2: 0.4,
            a1: 0.0,
            a0: 0.0,
        })
        .unwrap();
        assert_eq!(roots, [0.4, 0.0, 0.0]);
        let a1 = 0.09;
        let roots = solve_cubic(&CubicCoeffs {
            a3: -1.0,
            a2: 0.0,
            a1,
            a0: 0.0,
        })
        .unwrap();
        assert!(
            (roots[0] - 0.3).abs() < 1e-15 && roots[1] == 0.0 && (roots[2] + 0.3).abs() < 1e-15
        );
    }

    #[test]
    fn rejects_complex_roots() {
        // -(η² + 1)(η - 1)
        let c = CubicCoeffs {
            a3: -1.0,
            a2: 1.0,
            a1: -1.0,
            a0: 1.0,
        };
        assert!(matches!(
            solve_cubic(&c),
            Err(Error::NumericalInconsistency { .. })
        ));
    }

    #[test]
    fn roots_have_small_residual() {
        for &(n, p) in &[(0.1, 0.3), (0.5, 0.35), (1.0, 0.9), (0.05, 0.1)] {
            let c = cubic_coeffs(&params(n, p));
            for r in solve_cubic(&c).unwrap() {
                assert!(c.eval(r).abs() < 1e-9 * c.a0.abs().max(1.0));
            }
        }
    }

    #[test]
    fn perfect_spoofer_gives_prior() {
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            let sp = params(0.1, p).with_gamma(1.0).unwrap();
            assert_eq!(
                p_success_two_pulse(&sp).unwrap(),
                p_success_prior_only(p),
                "p = {p}"
            );
        }
    }

    #[test]
    fn even_prior_beats_coin_flip() {
        assert!(p_success_two_pulse(&params(0.1, 0.5)).unwrap() > 0.5);
    }

    #[test]
    fn oracle_examples() {
        let sp = params(0.1, 0.5).with_gamma(1.0).unwrap();
        let nz = two_pulse_fock_oracle(&sp, 30).unwrap().nonzero(1e-9);
        assert_eq!(nz, vec![]);

        let sp = params(0.1, 0.3).with_gamma(1.0).unwrap();
        let nz = two_pulse_fock_oracle(&sp, 30).unwrap().nonzero(1e-9);
        assert_eq!(nz.len(), 1);
        assert!((nz[0] + 0.4).abs() < 1e-12);

        let sp = params(0.1, 0.5);
        let nz = two_pulse_fock_oracle(&sp, 30).unwrap().nonzero(1e-9);
        let root = cubic_coeffs(&sp).a1.sqrt();
        assert_eq!(nz.len(), 2);
        assert!((nz[0] - root).abs() < 1e-8 && (nz[1] + root).abs() < 1e-8);

        let sp = params(0.5, 0.35);
        let nz = two_pulse_fock_oracle(&sp, 30).unwrap().nonzero(1e-9);
        let roots = solve_cubic(&cubic_coeffs(&sp)).unwrap();
        assert_eq!(nz.len(), 3);
        for (a, b) in nz.iter().zip(roots) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn oracle_cutoff_limits() {
        assert!(two_pulse_fock_oracle(&params(0.1, 0.5), 41).is_err());
        assert!(two_pulse_fock_oracle(&params(2.0, 0.5), 15).is_err());
    }

    #[test]
    fn vacuum_gives_prior() {
        for p in [0.1, 0.4, 0.5, 0.8] {
            let ps = p_success_two_pulse(&params(0.0, p)).unwrap();
            assert!((ps - p_success_prior_only(p)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn root_sum_symmetry_and_dominance(p in 0.0..=1.0f64, n in 0.0..3.0f64) {
            let sp = params(n, p);
            let roots = solve_cubic(&cubic_coeffs(&sp)).unwrap();
            prop_assert!((roots.iter().sum::<f64>() - (2.0 * p - 1.0)).abs() < 1e-10);
            let ps = p_success_two_pulse(&sp).unwrap();
            let mirrored = p_success_two_pulse(&params(n, 1.0 - p)).unwrap();
            prop_assert!((ps - mirrored).abs() < 1e-12);
            prop_assert!(ps >= p_success_prior_only(p) - 1e-12);
            prop_assert!(ps <= 1.0 + 1e-12);
        }
    }
}
