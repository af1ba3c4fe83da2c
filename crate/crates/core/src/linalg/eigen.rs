use num_complex::Complex64;

use super::matrix::{ComplexMatrix, UnitaryMatrix};
use super::VALIDATION_TOL;
use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues
/// and a unitary whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: UnitaryMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// Residual of `A V - V diag(values)`.
    pub fn reconstruction_error(&self, a: &ComplexMatrix) -> f64 {
        let v = self.vectors.matrix();
        let av = a.matmul(v);
        let mut dev: f64 = 0.0;
        for j in 0..self.values.len() {
            for i in 0..v.rows() {
                let lhs = av.get(i, j);
                let rhs = v.get(i, j) * self.values[j];
                dev = dev.max((lhs - rhs).norm());
            }
        }
        dev
    }
}

/// Cyclic Jacobi diagonalization for Hermitian matrices.
///
/// Dimensions in this crate stay in the low hundreds, where Jacobi is
/// plenty fast and its rotations keep the accumulated eigenvector matrix
/// unitary to machine precision.
pub fn eigen_hermitian(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = a.require_square()?;
    let dev = a.hermitian_deviation();
    if dev > VALIDATION_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: UnitaryMatrix::new(ComplexMatrix::identity(0))?,
        });
    }

    // Work on the explicitly Hermitized copy so validated inputs with
    // deviations below tolerance still diagonalize cleanly.
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            m.set(i, j, v);
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = 1e-15 * scale;
    let max_sweeps = 80;

    for _ in 0..max_sweeps {
        let mut off: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m.get(i, j).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                let mag = apq.norm();
                if mag <= target / (n as f64) {
                    continue;
                }
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_phase = phase * s;

                // A <- G* A G with G the identity outside the (p,q) block,
                // G[p][p]=c, G[p][q]=s*phase, G[q][p]=-s*conj(phase), G[q][q]=c.
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, akp * c - akq * s_phase.conj());
                    m.set(k, q, akp * s_phase + akq * c);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, apk * c - aqk * s_phase);
                    m.set(q, k, apk * s_phase.conj() + aqk * c);
                }
                // Accumulate eigenvectors: V <- V G.
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * s_phase.conj());
                    v.set(k, q, vkp * s_phase + vkq * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]))?;

    Ok(EigenDecomposition {
        values,
        vectors: UnitaryMatrix::new(vectors)?,
    })
}
