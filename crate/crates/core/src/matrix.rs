//! Dense complex matrices and vectors, plus the handful of factorizations the
//! dilation pipelines need.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

fn all_finite(data: &[C64]) -> bool {
    data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix("dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if !all_finite(&data) {
            return Err(Error::InvalidMatrix("entries must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &ComplexVector, b: &ComplexVector) -> Self {
        let mut m = Self::zeros(a.dim(), b.dim());
        for (i, x) in a.as_slice().iter().enumerate() {
            for (j, y) in b.as_slice().iter().enumerate() {
                m[(i, j)] = x * y.conj();
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Matrix product. Panics if the inner dimensions differ.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn checked_matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        Ok(self.matmul(rhs))
    }

    /// Matrix-vector product. Panics if the dimensions differ.
    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "mul_vec: dimensions differ");
        let data = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.as_slice())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        ComplexVector { data }
    }

    pub fn checked_mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok(self.mul_vec(v))
    }

    fn zip_with(&self, rhs: &ComplexMatrix, f: impl Fn(C64, C64) -> C64) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shapes differ"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_ij |self_ij - rhs_ij|`; infinite when the shapes differ.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    /// Copy of the `rows × cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(
            r0 + rows <= self.rows && c0 + cols <= self.cols,
            "block out of range"
        );
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            m.data[i * cols..(i + 1) * cols].copy_from_slice(
                &self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + cols],
            );
        }
        m
    }

    /// Overwrites the block at `(r0, c0)` with `src`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &ComplexMatrix) {
        assert!(
            r0 + src.rows <= self.rows && c0 + src.cols <= self.cols,
            "block out of range"
        );
        for i in 0..src.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + src.cols].copy_from_slice(src.row(i));
        }
    }

    /// `diag(self, I)` padded with identity up to `dim`.
    pub fn embed_top_left(&self, dim: usize) -> ComplexMatrix {
        assert!(self.is_square() && self.rows <= dim, "cannot embed");
        let mut m = Self::identity(dim);
        m.set_block(0, 0, self);
        m
    }

    /// `max |M - M†|`.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        self.add(&self.adjoint()).scale_real(0.5)
    }

    /// `Tr(M M)` for a square matrix; the purity when `M` is a density matrix.
    pub fn trace_of_square(&self) -> C64 {
        self.matmul(self).trace()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<C64>,
}

impl ComplexVector {
    pub fn new(data: Vec<C64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidMatrix("vector must be non-empty"));
        }
        if !all_finite(&data) {
            return Err(Error::InvalidMatrix("entries must be finite"));
        }
        Ok(Self { data })
    }

    pub fn from_real(data: &[f64]) -> Result<Self> {
        Self::new(data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![ZERO; dim],
        }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn scale_real(&self, s: f64) -> ComplexVector {
        ComplexVector {
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn max_abs_diff(&self, rhs: &ComplexVector) -> f64 {
        if self.dim() != rhs.dim() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Squared moduli `|v_j|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm_sqr()).collect()
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;

    #[inline]
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

/// Hilbert-Schmidt (Frobenius) norm `sqrt(Σ |M_ij|²)`.
pub fn hs_norm(m: &ComplexMatrix) -> f64 {
    libm::sqrt(m.as_slice().iter().map(|z| z.norm_sqr()).sum())
}

/// Largest singular value, from the spectrum of `M†M`.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let gram = if m.rows() >= m.cols() {
        m.adjoint().matmul(m)
    } else {
        m.matmul(&m.adjoint())
    };
    let (values, _) = hermitian_eigen(&gram);
    let top = values.last().copied().unwrap_or(0.0);
    libm::sqrt(top.max(0.0))
}

/// Principal square root of a Hermitian matrix, clamping every negative
/// eigenvalue to zero without checking it.
pub(crate) fn sqrt_psd_clamped(h: &ComplexMatrix) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(&h.hermitian_part());
    let roots: Vec<f64> = values.iter().map(|&l| libm::sqrt(l.max(0.0))).collect();
    let n = h.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z: C64 = (0..n)
                .map(|k| vectors[(i, k)] * roots[k] * vectors[(j, k)].conj())
                .sum();
            out[(i, j)] = z;
            out[(j, i)] = z.conj();
        }
        out[(i, i)].im = 0.0;
    }
    out
}

/// Hermitian positive-semidefinite square root `S` with `S·S = H`.
///
/// Eigenvalues in `[-tol, 0)` are treated as zero.
pub fn principal_sqrt_psd(h: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: h.cols(),
        });
    }
    let asym = h.hermitian_residual();
    if asym > tol {
        return Err(Error::NotHermitian(asym));
    }
    let (values, _) = hermitian_eigen(&h.hermitian_part());
    if let Some(&min) = values.first() {
        if min < -tol {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(sqrt_psd_clamped(h))
}

/// Lower-triangular `L` with `L·L† = H` for Hermitian positive-semidefinite `H`.
///
/// A pivot in `[-tol, tol]` yields a zero column, so singular input is accepted.
pub fn cholesky_psd(h: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: h.cols(),
        });
    }
    let asym = h.hermitian_residual();
    if asym > tol.max(crate::DEFAULT_TOL) {
        return Err(Error::NotHermitian(asym));
    }
    let n = h.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let pivot = h[(j, j)].re - (0..j).map(|k| l[(j, k)].norm_sqr()).sum::<f64>();
        if pivot < -tol {
            return Err(Error::NotPsd(pivot));
        }
        if pivot <= tol {
            continue;
        }
        let d = libm::sqrt(pivot);
        l[(j, j)] = C64::new(d, 0.0);
        for i in j + 1..n {
            let s: C64 = (0..j).map(|k| l[(i, k)] * l[(j, k)].conj()).sum();
            l[(i, j)] = (h[(i, j)] - s) / d;
        }
    }
    Ok(l)
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for p in 0..rb {
                for q in 0..cb {
                    out[(i * rb + p, j * cb + q)] = x * b[(p, q)];
                }
            }
        }
    }
    out
}

/// `max |U†U - I|`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    u.adjoint()
        .matmul(u)
        .max_abs_diff(&ComplexMatrix::identity(u.rows()))
}

pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    unitarity_residual(u) <= tol
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    hermitian_eigen(&h.hermitian_part()).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(rng: &mut impl Rng, r: usize, cc: usize) -> ComplexMatrix {
        let data = (0..r * cc)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::new(r, cc, data).unwrap()
    }

    fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        // Gram-Schmidt on a random complex matrix
        let a = random_matrix(rng, n, n);
        let mut cols: Vec<Vec<C64>> = Vec::new();
        for j in 0..n {
            let mut v: Vec<C64> = (0..n).map(|i| a[(i, j)]).collect();
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        let mut q = ComplexMatrix::zeros(n, n);
        for (j, col) in cols.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                q[(i, j)] = *z;
            }
        }
        q
    }

    /// Power iteration on M†M, independent of the Jacobi solver.
    fn power_iteration_norm(m: &ComplexMatrix) -> f64 {
        let g = m.adjoint().matmul(m);
        let mut v = ComplexVector::new(vec![c(1.0, 0.3); g.cols()]).unwrap();
        let mut lambda = 0.0;
        for _ in 0..5000 {
            let w = g.mul_vec(&v);
            lambda = w.norm() / v.norm();
            v = w.scale_real(1.0 / w.norm());
        }
        lambda.sqrt()
    }

    #[test]
    fn hs_norm_examples() {
        let o = ComplexMatrix::from_real(2, 2, &[-2.0, 0.5, 0.5, 1.0]).unwrap();
        assert!((hs_norm(&o) - 22f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((hs_norm(&o) - 2.345).abs() < 1e-3);
        assert!((hs_norm(&ComplexMatrix::identity(2)) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(hs_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn operator_norm_examples() {
        for n in 1..6 {
            assert!((operator_norm(&ComplexMatrix::identity(n)) - 1.0).abs() < 1e-12);
        }
        let d = ComplexMatrix::diag_real(&[1.0, 0.5f64.sqrt()]);
        assert!((operator_norm(&d) - 1.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 4, 4);
            let expected = power_iteration_norm(&m);
            assert!(
                (operator_norm(&m) - expected).abs() < 1e-9,
                "{} vs {}",
                operator_norm(&m),
                expected
            );
        }
    }

    #[test]
    fn sqrt_examples() {
        let h = ComplexMatrix::diag_real(&[0.0, 0.5]);
        let s = principal_sqrt_psd(&h, 1e-10).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::diag_real(&[0.0, 0.5f64.sqrt()])) < 1e-14);

        let i3 = ComplexMatrix::identity(3);
        assert!(principal_sqrt_psd(&i3, 1e-10).unwrap().max_abs_diff(&i3) < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_unitary(&mut rng, 2);
        let h = q
            .matmul(&ComplexMatrix::diag_real(&[4.0, 1.0]))
            .matmul(&q.adjoint());
        let expected = q
            .matmul(&ComplexMatrix::diag_real(&[2.0, 1.0]))
            .matmul(&q.adjoint());
        let s = principal_sqrt_psd(&h, 1e-10).unwrap();
        assert!(s.max_abs_diff(&expected) < 1e-12);
        assert!(s.matmul(&s).max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn sqrt_clamps_tiny_negative_eigenvalues() {
        let h = ComplexMatrix::diag_real(&[-5e-11, 1.0]);
        let s = principal_sqrt_psd(&h, 1e-10).unwrap();
        assert_eq!(s[(0, 0)], ZERO);
    }

    #[test]
    fn sqrt_errors() {
        let h = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.0, 1.0]).unwrap();
        assert!(matches!(
            principal_sqrt_psd(&h, 1e-10),
            Err(Error::NotHermitian(_))
        ));
        let h = ComplexMatrix::diag_real(&[-0.1, 1.0]);
        assert!(matches!(
            principal_sqrt_psd(&h, 1e-10),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn cholesky_examples() {
        let hs = 22f64.sqrt() / 2.0;
        let o = ComplexMatrix::from_real(2, 2, &[-2.0, 0.5, 0.5, 1.0]).unwrap();
        let tilde = o
            .add(&ComplexMatrix::identity(2).scale_real(hs))
            .scale_real(0.5 / hs);
        let l = cholesky_psd(&tilde, 1e-12).unwrap();
        let reference = [0.271, 0.0, 0.393, 0.748];
        for (got, want) in l.as_slice().iter().zip(reference) {
            assert!(
                (got.re - want).abs() < 5e-4 && got.im == 0.0,
                "{got} vs {want}"
            );
        }

        let i = ComplexMatrix::identity(3);
        assert_eq!(cholesky_psd(&i, 1e-12).unwrap(), i);

        let v = ComplexVector::from_real(&[0.6, 0.8]).unwrap();
        let h = ComplexMatrix::outer(&v, &v);
        let l = cholesky_psd(&h, 1e-12).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.6, 0.0, 0.8, 0.0]).unwrap();
        assert!(l.max_abs_diff(&expected) < 1e-12);
        assert!(l.matmul(&l.adjoint()).max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let h = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(matches!(cholesky_psd(&h, 1e-12), Err(Error::NotPsd(_))));
    }

    #[test]
    fn kron_examples() {
        assert_eq!(
            kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );

        let m0 = ComplexMatrix::diag_real(&[1.0, 0.5f64.sqrt()]);
        let lifted = kron(&m0, &ComplexMatrix::identity(2));
        let r = 0.5f64.sqrt();
        assert!(lifted.max_abs_diff(&ComplexMatrix::diag_real(&[1.0, 1.0, r, r])) < 1e-15);

        let sigma_plus = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let k = kron(&sigma_plus, &sigma_plus);
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(0, 3)] = ONE;
        assert_eq!(k, expected);
    }

    #[test]
    fn unitary_predicate() {
        assert!(is_unitary(&ComplexMatrix::identity(3), 1e-10));
        assert!(!is_unitary(&ComplexMatrix::diag_real(&[1.0, 0.5]), 1e-10));
        assert!(!is_unitary(&ComplexMatrix::zeros(2, 3), 1e-10));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(ComplexMatrix::new(2, 2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
        assert!(ComplexMatrix::from_real(1, 1, &[f64::NAN]).is_err());
        assert!(ComplexVector::from_real(&[f64::INFINITY]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(r: usize, c: usize) -> impl Strategy<Value = ComplexMatrix> {
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), r * c).prop_map(move |v| {
                ComplexMatrix::new(r, c, v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
                    .unwrap()
            })
        }

        fn square(max: usize) -> impl Strategy<Value = ComplexMatrix> {
            (1..=max).prop_flat_map(|n| matrix(n, n))
        }

        proptest! {
            #[test]
            fn sqrt_squares_back(a in square(8)) {
                let h = a.adjoint().matmul(&a);
                let s = principal_sqrt_psd(&h, 1e-10).unwrap();
                prop_assert!(s.matmul(&s).max_abs_diff(&h) < 1e-9);
                prop_assert!(s.hermitian_residual() < 1e-10);
            }

            #[test]
            fn cholesky_reconstructs(a in square(8)) {
                let h = a.matmul(&a.adjoint());
                let l = cholesky_psd(&h, 1e-12).unwrap();
                prop_assert!(l.matmul(&l.adjoint()).max_abs_diff(&h) < 1e-9);
                for i in 0..l.rows() {
                    prop_assert!(l[(i, i)].im == 0.0 && l[(i, i)].re >= 0.0);
                    for j in i + 1..l.cols() {
                        prop_assert_eq!(l[(i, j)], ZERO);
                    }
                }
            }

            #[test]
            fn operator_norm_bounded_by_hs(a in square(6)) {
                prop_assert!(operator_norm(&a) <= hs_norm(&a) + 1e-12);
            }

            #[test]
            fn kron_mixed_product(a in matrix(2, 3), b in matrix(2, 2), cm in matrix(3, 2), d in matrix(2, 3)) {
                let lhs = kron(&a, &b).matmul(&kron(&cm, &d));
                let rhs = kron(&a.matmul(&cm), &b.matmul(&d));
                prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
            }

            #[test]
            fn kron_associative(a in matrix(2, 2), b in matrix(1, 3), cm in matrix(2, 1)) {
                let lhs = kron(&kron(&a, &b), &cm);
                let rhs = kron(&a, &kron(&b, &cm));
                prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
            }
        }
    }
}
