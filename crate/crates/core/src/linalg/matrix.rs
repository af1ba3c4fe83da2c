use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use super::{TENSOR_DIM_GUARD, VALIDATION_TOL};
use crate::error::{Error, Result};

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Build from a raw row-major buffer, rejecting NaN and infinities.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        assert_eq!(data.len(), rows * cols, "buffer length mismatch");
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec(rows, cols, data)
    }

    /// Build from rows of real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_vec(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_assign_at(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn conjugate_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the own conjugate transpose.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum (operator 1-norm).
    pub fn one_norm(&self) -> f64 {
        let mut best: f64 = 0.0;
        for j in 0..self.cols {
            let s: f64 = (0..self.rows).map(|i| self.get(i, j).norm()).sum();
            best = best.max(s);
        }
        best
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        // ikj order keeps the inner loop contiguous in both operands.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let lhs = i * out.cols;
                let rhs = k * other.cols;
                for j in 0..other.cols {
                    out.data[lhs + j] += a * other.data[rhs + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * v[j])
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// Hilbert-Schmidt inner product `tr(self^dagger other)`.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Outer product `|u><v|` of two vectors.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut out = Self::zeros(u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                out.set(i, j, a * b.conj());
            }
        }
        out
    }

    /// Solve `self * X = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let n = self.require_square()?;
        assert_eq!(rhs.rows, n);
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let (mut pivot, mut best) = (col, a.get(col, col).norm());
            for r in col + 1..n {
                let v = a.get(r, col).norm();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best == 0.0 {
                return Err(Error::InternalConsistency(
                    "singular matrix in linear solve".into(),
                ));
            }
            if pivot != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(pivot, j));
                    a.set(col, j, y);
                    a.set(pivot, j, x);
                }
                for j in 0..b.cols {
                    let (x, y) = (b.get(col, j), b.get(pivot, j));
                    b.set(col, j, y);
                    b.set(pivot, j, x);
                }
            }
            let inv = Complex64::new(1.0, 0.0) / a.get(col, col);
            for r in col + 1..n {
                let factor = a.get(r, col) * inv;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a.get(r, j) - factor * a.get(col, j);
                    a.set(r, j, v);
                }
                for j in 0..b.cols {
                    let v = b.get(r, j) - factor * b.get(col, j);
                    b.set(r, j, v);
                }
            }
        }
        let mut x = Self::zeros(n, b.cols);
        for j in 0..b.cols {
            for i in (0..n).rev() {
                let mut acc = b.get(i, j);
                for k in i + 1..n {
                    acc -= a.get(i, k) * x.get(k, j);
                }
                x.set(i, j, acc / a.get(i, i));
            }
        }
        Ok(x)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(other)
    }
}

/// Kronecker product with the lexicographic index convention
/// `(i,j) -> i*q + j` for a `p`-factor and a `q`-factor.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let dim = rows.max(cols);
    if dim > TENSOR_DIM_GUARD {
        return Err(Error::DimensionGuard {
            dim,
            guard: TENSOR_DIM_GUARD,
        });
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.get(i, j);
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Discrete Fourier transform matrix: entry `(k,j) = omega^(k*j)/sqrt(p)`
/// with `omega = exp(2*pi*i/p)` the principal root of unity.
pub fn dft_matrix(p: usize) -> UnitaryMatrix {
    assert!(p >= 1, "dft_matrix requires p >= 1");
    let norm = 1.0 / (p as f64).sqrt();
    let m = ComplexMatrix::from_fn(p, p, |k, j| {
        let angle = 2.0 * PI * ((k * j) % p) as f64 / p as f64;
        Complex64::from_polar(norm, angle)
    })
    .expect("finite by construction");
    UnitaryMatrix::new(m).expect("DFT matrix is unitary")
}

/// Square matrix validated to satisfy `U U^dagger = I` within `1e-10`.
#[derive(Debug, Clone)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.require_square()?;
        let gram = matrix.matmul(&matrix.conjugate_transpose());
        let dev = gram.max_abs_diff(&ComplexMatrix::identity(n));
        if dev > VALIDATION_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.matrix.rows()).map(|i| self.matrix.get(i, j)).collect()
    }
}

/// Positive semidefinite, trace-one Hermitian matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eigen_floor: f64,
}

impl DensityMatrix {
    /// Validate Hermiticity (1e-10), positivity (eigenvalues >= -1e-10)
    /// and unit trace (1e-10).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_floor(matrix, VALIDATION_TOL)
    }

    pub fn with_floor(matrix: ComplexMatrix, eigen_floor: f64) -> Result<Self> {
        matrix.require_square()?;
        let dev = matrix.hermitian_deviation();
        if dev > VALIDATION_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(Error::InvalidTrace { trace: tr.re });
        }
        let eig = super::eigen_hermitian(&matrix)?;
        if let Some(&min) = eig
            .values
            .first()
            .filter(|&&v| v < -eigen_floor)
        {
            return Err(Error::NotPositive { value: min });
        }
        Ok(Self { matrix, eigen_floor })
    }

    pub fn uniform(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64);
        Self {
            matrix: m,
            eigen_floor: VALIDATION_TOL,
        }
    }

    /// Pure state `|v><v|` for a unit vector `v`.
    pub fn pure(v: &[Complex64]) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidTrace { trace: norm * norm });
        }
        Self::new(ComplexMatrix::outer(v, v))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigen_floor(&self) -> f64 {
        self.eigen_floor
    }

    /// True when the state is the normalized identity.
    pub fn is_uniform(&self, tol: f64) -> bool {
        let d = self.dim();
        self.matrix
            .max_abs_diff(&ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
            <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen_hermitian;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tensor_identity_cases() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = tensor_product(&i2, &i2).unwrap();
        assert_eq!(i4.max_abs_diff(&ComplexMatrix::identity(4)), 0.0);

        // Degenerate 1x1 factor leaves the other factor unchanged.
        let j2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let j2_again = tensor_product(&j2, &ComplexMatrix::identity(1)).unwrap();
        assert_eq!(j2_again.max_abs_diff(&j2), 0.0);
    }

    #[test]
    fn tensor_shift_moves_basis_pairs() {
        // J2 (x) J2 sends e1 (x) e1 to e0 (x) e0: index 3 -> index 0.
        let j2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let jj = tensor_product(&j2, &j2).unwrap();
        let e11 = vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let out = jj.mul_vec(&e11);
        assert_eq!(out[0], c(1.0, 0.0));
        assert!(out[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn tensor_is_associative() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, j as f64)).unwrap();
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64 - j as f64, 1.0)).unwrap();
        let d = ComplexMatrix::from_fn(2, 2, |i, j| c(0.5 * i as f64, -(j as f64))).unwrap();
        let left = tensor_product(&tensor_product(&a, &b).unwrap(), &d).unwrap();
        let right = tensor_product(&a, &tensor_product(&b, &d).unwrap()).unwrap();
        assert_eq!(left.max_abs_diff(&right), 0.0);
    }

    #[test]
    fn tensor_guard_rejects_oversized_products() {
        let a = ComplexMatrix::identity(64);
        let err = tensor_product(&a, &a).unwrap_err();
        assert!(matches!(err, Error::DimensionGuard { dim: 4096, .. }));
    }

    #[test]
    fn dft_small_cases() {
        assert_eq!(dft_matrix(1).matrix().get(0, 0), c(1.0, 0.0));

        let f2 = dft_matrix(2);
        let s = 1.0 / 2f64.sqrt();
        let expected =
            ComplexMatrix::from_real_rows(&[&[s, s], &[s, -s]]).unwrap();
        assert!(f2.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn dft_unitary_up_to_sixteen() {
        for p in 1..=16 {
            let f = dft_matrix(p);
            let gram = f.matrix().matmul(&f.matrix().conjugate_transpose());
            assert!(
                gram.max_abs_diff(&ComplexMatrix::identity(p)) < 1e-12,
                "p = {p}"
            );
        }
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2).scale_real(0.5)).is_ok());

        // trace 2
        let err = DensityMatrix::new(ComplexMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::InvalidTrace { .. }));

        // negative eigenvalue
        let m = ComplexMatrix::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]).unwrap();
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotPositive { .. })
        ));

        // non-Hermitian: upper triangular with unequal off-diagonals
        let m = ComplexMatrix::from_fn(2, 2, |i, j| {
            if j >= i { c(0.5, 0.0) } else { c(0.0, 0.0) }
        })
        .unwrap();
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn solve_recovers_inverse_action() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| {
            c(
                1.0 + ((2 * i + 3 * j + i * i * j) % 7) as f64,
                (i as f64 - j as f64) * 0.3,
            )
        })
        .unwrap();
        let x = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64, j as f64 + 0.5)).unwrap();
        let b = a.matmul(&x);
        let solved = a.solve(&b).unwrap();
        assert!(solved.max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn eigen_reconstructs_after_sorting() {
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 1.0]]).unwrap();
        let eig = eigen_hermitian(&m).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0]);
    }
}
