use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use num_complex::Complex64;
use proptest::prelude::*;

use spoof_limits::gaussian::{coherent_rho0, displaced_thermal_rho1, TruncationPolicy};
use spoof_limits::math::{hermitian_eigen, laguerre, trace_norm, HermitianMatrix, SeededRng};

/// Σ_i (-1)^i C(m+k, m-i) x^i / i!, summed exactly.
fn laguerre_series_exact(m: usize, k: usize, x: &BigRational) -> BigRational {
    let binom = |n: usize, r: usize| -> BigInt {
        let mut acc = BigInt::one();
        for j in 0..r {
            acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
        }
        acc
    };
    let mut sum = BigRational::zero();
    let mut x_pow = BigRational::one();
    let mut fact = BigInt::one();
    for i in 0..=m {
        if i > 0 {
            x_pow = &x_pow * x;
            fact *= BigInt::from(i);
        }
        let term = BigRational::from_integer(binom(m + k, m - i)) * &x_pow
            / BigRational::from_integer(fact.clone());
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

#[test]
fn laguerre_example_against_series() {
    let x = BigRational::new(BigInt::from(3), BigInt::from(2));
    let exact = laguerre_series_exact(3, 2, &x).to_f64().unwrap();
    assert!((laguerre(3, 2, 1.5) - exact).abs() < 1e-10 * exact.abs().max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // x = num/4 keeps the oracle exact.
    #[test]
    fn laguerre_recurrence_matches_exact_series(m in 0usize..=30, k in 0usize..=30, num4 in -200i64..=200) {
        let x = num4 as f64 / 4.0;
        let exact = laguerre_series_exact(m, k, &BigRational::new(BigInt::from(num4), BigInt::from(4)))
            .to_f64()
            .unwrap();
        let got = laguerre(m, k, x);
        // Relative agreement, floored where the polynomial passes near a root.
        let scale = exact.abs().max(1.0);
        prop_assert!((got - exact).abs() <= 1e-10 * scale, "L_{}^({})({}) = {} vs {}", m, k, x, got, exact);
    }

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>(), dim in 1usize..12) {
        let mut rng = SeededRng::new(seed);
        let m = HermitianMatrix::from_lower_fn(dim, |_, _| Complex64::new(rng.standard_normal(), rng.standard_normal()));
        let spec = hermitian_eigen(&m, true).unwrap();
        prop_assert_eq!(spec.eigenvalues.len(), dim);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let sum: f64 = spec.eigenvalues.iter().sum();
        prop_assert!((sum - m.trace()).abs() < 1e-9);
        let vecs = spec.eigenvectors.unwrap();
        for (lambda, v) in spec.eigenvalues.iter().zip(&vecs) {
            let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-10);
            let hv = m.apply(v);
            let res: f64 = hv.iter().zip(v).map(|(a, b)| (a - b * *lambda).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(res < 1e-8 * m.norm().max(1.0));
        }
    }

    #[test]
    fn trace_norm_is_phase_rotation_invariant(seed in any::<u64>(), dim in 2usize..8, theta in -3.2..3.2f64) {
        let mut rng = SeededRng::new(seed);
        let m = HermitianMatrix::from_lower_fn(dim, |_, _| Complex64::new(rng.standard_normal(), rng.standard_normal()));
        // U(θ) = diag(e^{iθm}); (U M U†)_{mn} = e^{iθ(m-n)} M_{mn}.
        let rotated = HermitianMatrix::from_lower_fn(dim, |a, b| m.entry(a, b) * Complex64::from_polar(1.0, theta * (a as f64 - b as f64)));
        let t0 = trace_norm(&m).unwrap();
        let t1 = trace_norm(&rotated).unwrap();
        prop_assert!((t0 - t1).abs() < 1e-9);
        prop_assert!(t0 > 0.0);
    }
}

#[test]
fn gaussian_trace_norm_respects_fidelity_bound() {
    let pol = TruncationPolicy::for_amplitude(1.0);
    let rho0 = coherent_rho0(1.0, &pol).unwrap();
    let rho1 = displaced_thermal_rho1(1.0, &pol).unwrap();
    let tn = trace_norm(&rho1.combine(0.5, &rho0, -0.5)).unwrap();
    assert!(tn >= 0.5 - 1e-9, "{tn}");
}
