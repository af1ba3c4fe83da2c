use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::Result;

/// Pade [13/13] coefficients for the matrix exponential.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// 1-norm bound below which the unscaled [13/13] approximant already
/// attains full double precision.
const THETA13: f64 = 5.371920351148152;

/// Dense matrix exponential `exp(t*A)` by Pade approximation with scaling
/// and squaring.
///
/// This is the reference route for the circulant closed forms, so it never
/// touches the Fourier machinery.
pub fn matrix_exponential(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let at = a.scale_real(t);
    let norm = at.one_norm();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }

    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = at.scale_real(0.5f64.powi(s as i32));

    let ident = ComplexMatrix::identity(n);
    let a2 = scaled.matmul(&scaled);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    let coeff = |k: usize| Complex64::new(PADE13[k], 0.0);

    // u = A * (A6*(b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let inner_u = &(&a6.scale(coeff(13)) + &a4.scale(coeff(11))) + &a2.scale(coeff(9));
    let u_poly = &(&(&a6.matmul(&inner_u) + &a6.scale(coeff(7))) + &a4.scale(coeff(5)))
        + &(&a2.scale(coeff(3)) + &ident.scale(coeff(1)));
    let u = scaled.matmul(&u_poly);

    // v = A6*(b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let inner_v = &(&a6.scale(coeff(12)) + &a4.scale(coeff(10))) + &a2.scale(coeff(8));
    let v = &(&(&a6.matmul(&inner_v) + &a6.scale(coeff(6))) + &a4.scale(coeff(4)))
        + &(&a2.scale(coeff(2)) + &ident.scale(coeff(0)));

    // exp(scaled) ~= (v - u)^-1 (v + u)
    let mut result = (&v - &u).solve(&(&v + &u))?;
    for _ in 0..s {
        result = result.matmul(&result);
    }
    Ok(result)
}
