use super::eigen::eigen_hermitian;
use super::matrix::DensityMatrix;
use super::EIGEN_CLIP;
use crate::error::{Error, Result};

/// Mass of `eta`'s support allowed outside the support of `rho` before the
/// relative entropy is declared infinite.
const SUPPORT_LEAK_TOL: f64 = 1e-10;

/// Quantum relative entropy `S(eta, rho) = tr(eta log eta - eta log rho)`
/// in nats.
///
/// Eigenvalues below `1e-12` are treated as exactly zero (`0 log 0 = 0`),
/// and the result is `+inf` when the support of `eta` is not contained in
/// the support of `rho`.
pub fn relative_entropy(eta: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    if eta.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: eta.dim(),
            got: rho.dim(),
        });
    }

    let eig_eta = eigen_hermitian(eta.matrix())?;
    let eig_rho = eigen_hermitian(rho.matrix())?;

    let clip = |v: f64| if v < EIGEN_CLIP { 0.0 } else { v };
    let lam: Vec<f64> = eig_eta.values.iter().map(|&v| clip(v)).collect();
    let mu: Vec<f64> = eig_rho.values.iter().map(|&v| clip(v)).collect();

    let n = lam.len();
    let mut entropy_term = 0.0;
    for &l in &lam {
        if l > 0.0 {
            entropy_term += l * l.ln();
        }
    }

    // Overlaps |<v_i, w_j>|^2 between the two eigenbases.
    let overlap = eig_eta
        .vectors
        .matrix()
        .conjugate_transpose()
        .matmul(eig_rho.vectors.matrix());

    let mut cross_term = 0.0;
    let mut leaked = 0.0;
    for i in 0..n {
        if lam[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            let p = overlap.get(i, j).norm_sqr();
            if mu[j] == 0.0 {
                leaked += lam[i] * p;
            } else {
                cross_term += lam[i] * p * mu[j].ln();
            }
        }
    }
    if leaked > SUPPORT_LEAK_TOL {
        return Ok(f64::INFINITY);
    }

    let s = entropy_term - cross_term;
    // Klein's inequality: exact arithmetic keeps this nonnegative.
    Ok(if s < 0.0 && s > -1e-9 { 0.0 } else { s })
}
