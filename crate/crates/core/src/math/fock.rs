use num_complex::Complex64;

use super::{ln_factorial, HermitianMatrix};

/// Number-basis amplitudes `<n|α> = e^{-|α|²/2} αⁿ / √(n!)` for `n < dim`,
/// evaluated in log space.
pub fn coherent_amplitudes(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let r = alpha.norm();
    if r == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    let (ln_r, theta) = (r.ln(), alpha.arg());
    (0..dim)
        .map(|n| {
            let mag = (-0.5 * r * r + n as f64 * ln_r - 0.5 * ln_factorial(n)).exp();
            // Keep real amplitudes exactly real: e^{iπn} would leave
            // ~1e-16 imaginary residue and force the complex solver.
            if alpha.im == 0.0 {
                let sign = if alpha.re < 0.0 && n % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                Complex64::new(sign * mag, 0.0)
            } else {
                Complex64::from_polar(mag, n as f64 * theta)
            }
        })
        .collect()
}

/// `|α><α|` truncated to `dim` number states.
pub fn coherent_density(alpha: Complex64, dim: usize) -> HermitianMatrix {
    HermitianMatrix::projector(&coherent_amplitudes(alpha, dim), 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_amplitude_gives_real_density() {
        assert!(coherent_density(Complex64::new(-0.1, 0.0), 31).is_real());
        let v = coherent_amplitudes(Complex64::new(-2.0, 0.0), 4);
        assert!(v[1].re < 0.0 && v[2].re > 0.0 && v[3].re < 0.0);
    }

    #[test]
    fn vacuum_and_normalization() {
        let v = coherent_amplitudes(Complex64::new(0.0, 0.0), 5);
        assert_eq!(v[0], Complex64::new(1.0, 0.0));
        assert!(v[1..].iter().all(|x| x.norm() == 0.0));

        let v = coherent_amplitudes(Complex64::from_polar(1.5, 0.3), 60);
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-13);
    }

    #[test]
    fn overlap_of_opposite_states() {
        let n = 0.4_f64;
        let a = coherent_amplitudes(Complex64::new(n.sqrt(), 0.0), 50);
        let b = coherent_amplitudes(Complex64::new(-n.sqrt(), 0.0), 50);
        let ov: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        assert!((ov.re - (-2.0 * n).exp()).abs() < 1e-14);
    }
}
