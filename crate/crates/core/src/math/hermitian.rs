use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration cap handed to the implicit-QL eigensolver.
pub const EIGEN_MAX_ITER: usize = 100_000;

/// Dense complex Hermitian matrix in a truncated number basis.
///
/// Every write goes through [`HermitianMatrix::set`], which stores the
/// conjugate mirror and zeroes the imaginary part of diagonal entries, so
/// Hermiticity holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.set(i, i, Complex64::new(1.0, 0.0));
        }
        out
    }

    /// Build from the lower triangle (`m >= n`); the upper triangle is the
    /// conjugate mirror.
    pub fn from_lower_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut out = Self::zeros(dim);
        for m in 0..dim {
            for n in 0..=m {
                out.set(m, n, f(m, n));
            }
        }
        out
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out.set(i, i, Complex64::new(d, 0.0));
        }
        out
    }

    /// `weight * |v><v|`.
    pub fn projector(v: &[Complex64], weight: f64) -> Self {
        Self::from_lower_fn(v.len(), |m, n| v[m] * v[n].conj() * weight)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.entries[m * self.dim + n]
    }

    pub fn set(&mut self, m: usize, n: usize, value: Complex64) {
        if m == n {
            self.entries[m * self.dim + m] = Complex64::new(value.re, 0.0);
        } else {
            self.entries[m * self.dim + n] = value;
            self.entries[n * self.dim + m] = value.conj();
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &HermitianMatrix, b: f64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x * a + y * b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * a).collect(),
        }
    }

    /// Tensor product `self ⊗ other`, row index `i * other.dim + j`.
    pub fn kron(&self, other: &HermitianMatrix) -> Self {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..da {
            for k in 0..da {
                let a = self.entry(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..db {
                    let row = (i * db + j) * dim;
                    for l in 0..db {
                        entries[row + k * db + l] = a * other.entry(j, l);
                    }
                }
            }
        }
        Self { dim, entries }
    }

    /// `<v|self|v>` (real for Hermitian `self`).
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, vm) in v.iter().enumerate() {
            let row = &self.entries[m * self.dim..(m + 1) * self.dim];
            let hv: Complex64 = row.iter().zip(v).map(|(h, x)| h * x).sum();
            acc += vm.conj() * hv;
        }
        acc.re
    }

    /// `H v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|m| {
                let row = &self.entries[m * self.dim..(m + 1) * self.dim];
                row.iter().zip(v).map(|(h, x)| h * x).sum()
            })
            .collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|x| x.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|x| x.im == 0.0)
    }

    fn to_real(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |m, n| self.entry(m, n).re)
    }

    fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |m, n| self.entry(m, n))
    }
}

/// Eigenvalues sorted descending (ties keep original order), optionally with
/// unit-norm eigenvectors aligned to them.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
}

impl SpectralResult {
    /// Eigenvalues whose magnitude exceeds `tol`, still sorted descending.
    pub fn nonzero(&self, tol: f64) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|l| l.abs() > tol)
            .collect()
    }

    pub fn abs_sum(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).sum()
    }
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

/// Full spectrum of a Hermitian matrix.
///
/// Purely real input takes the real symmetric path; otherwise the complex
/// Hermitian solver is used. Both are tridiagonalization followed by implicit
/// QL, capped at [`EIGEN_MAX_ITER`] iterations.
pub fn hermitian_eigen(matrix: &HermitianMatrix, want_vectors: bool) -> Result<SpectralResult> {
    let dim = matrix.dim();
    let fail = || Error::NoConvergence {
        dim,
        max_iter: EIGEN_MAX_ITER,
    };

    // Large, nearly null matrices (blocks of vanishing diagonal coupled by
    // ~1e-190 entries) can make the QL sweep produce NaN. Retrying on
    // `M + cI`, with `c` bounding the spectral radius, gives every diagonal a
    // scale; eigenvalues shift by `c` and come back with absolute error ~`cε`.
    let (values, vectors) = match solve(matrix, 0.0, want_vectors) {
        Some(found) => found,
        None => {
            let shift = matrix.norm().max(f64::MIN_POSITIVE);
            let (vals, vecs) = solve(matrix, shift, want_vectors).ok_or_else(fail)?;
            (vals.into_iter().map(|v| v - shift).collect(), vecs)
        }
    };

    let order = sorted_order(&values);
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = vectors.map(|vs| {
        let mut vs: Vec<Option<Vec<Complex64>>> = vs.into_iter().map(Some).collect();
        order
            .iter()
            .map(|&i| vs[i].take().expect("each index used once"))
            .collect()
    });
    Ok(SpectralResult {
        eigenvalues,
        eigenvectors,
    })
}

type RawSpectrum = (Vec<f64>, Option<Vec<Vec<Complex64>>>);

fn solve(matrix: &HermitianMatrix, shift: f64, want_vectors: bool) -> Option<RawSpectrum> {
    if matrix.is_real() {
        let mut m = matrix.to_real();
        for i in 0..matrix.dim() {
            m[(i, i)] += shift;
        }
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, EIGEN_MAX_ITER)?;
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let vecs = want_vectors.then(|| {
            eig.eigenvectors
                .column_iter()
                .map(|c| c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect()
        });
        Some((eig.eigenvalues.iter().copied().collect(), vecs))
    } else {
        let mut m = matrix.to_complex();
        for i in 0..matrix.dim() {
            m[(i, i)] += Complex64::new(shift, 0.0);
        }
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, EIGEN_MAX_ITER)?;
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let vecs = want_vectors.then(|| {
            eig.eigenvectors
                .column_iter()
                .map(|c| c.iter().copied().collect())
                .collect()
        });
        Some((eig.eigenvalues.iter().copied().collect(), vecs))
    }
}

/// Trace norm: sum of absolute eigenvalues.
pub fn trace_norm(matrix: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_eigen(matrix, false)?.abs_sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_diagonal_spectra() {
        let spec = hermitian_eigen(&HermitianMatrix::identity(3), false).unwrap();
        assert_eq!(spec.eigenvalues, vec![1.0, 1.0, 1.0]);

        let spec = hermitian_eigen(
            &HermitianMatrix::from_real_diagonal(&[2.0, -1.0, 0.0]),
            false,
        )
        .unwrap();
        assert_eq!(spec.eigenvalues, vec![2.0, 0.0, -1.0]);
    }

    #[test]
    fn nearly_null_two_mode_matrix_has_finite_spectrum() {
        use crate::math::coherent_density;
        let a = coherent_density(c(0.1, 0.0), 31);
        let b = coherent_density(c(-0.1, 0.0), 31);
        let m = a.kron(&b).combine(0.5, &b.kron(&a), -0.5);
        let spec = hermitian_eigen(&m, false).unwrap();
        assert!(spec.eigenvalues.iter().all(|v| v.is_finite()));
        assert!((spec.eigenvalues.iter().sum::<f64>() - m.trace()).abs() < 1e-12);
    }

    #[test]
    fn pauli_x_spectrum() {
        let mut m = HermitianMatrix::zeros(2);
        m.set(1, 0, c(1.0, 0.0));
        let spec = hermitian_eigen(&m, true).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((spec.eigenvalues[1] + 1.0).abs() < 1e-15);
        let vecs = spec.eigenvectors.unwrap();
        // (1, 1)/√2 for +1
        assert!((vecs[0][0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((vecs[0][0] - vecs[0][1]).norm() < 1e-12);
    }

    #[test]
    fn complex_hermitian_eigenpairs() {
        // Pauli-Y: eigenvalues ±1.
        let mut m = HermitianMatrix::zeros(2);
        m.set(0, 1, c(0.0, -1.0));
        assert_eq!(m.entry(1, 0), c(0.0, 1.0));
        let spec = hermitian_eigen(&m, true).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] + 1.0).abs() < 1e-14);
        for (lambda, v) in spec
            .eigenvalues
            .iter()
            .zip(spec.eigenvectors.as_ref().unwrap())
        {
            let hv = m.apply(v);
            let res: f64 = hv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum();
            assert!(res.sqrt() < 1e-12);
        }
    }

    #[test]
    fn diagonal_writes_drop_imaginary_part() {
        let mut m = HermitianMatrix::zeros(2);
        m.set(1, 1, c(3.0, 5.0));
        assert_eq!(m.entry(1, 1), c(3.0, 0.0));
    }

    #[test]
    fn trace_norm_trivial_cases() {
        assert_eq!(trace_norm(&HermitianMatrix::zeros(4)).unwrap(), 0.0);
        let m = HermitianMatrix::from_real_diagonal(&[0.5, -0.5]);
        assert!((trace_norm(&m).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kron_of_diagonals() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]);
        let b = HermitianMatrix::from_real_diagonal(&[3.0, 5.0, 7.0]);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 6);
        let diag: Vec<f64> = (0..6).map(|i| k.entry(i, i).re).collect();
        assert_eq!(diag, vec![3.0, 5.0, 7.0, 6.0, 10.0, 14.0]);
        assert!((k.trace() - a.trace() * b.trace()).abs() < 1e-14);
    }
}
