//! Circulant and block circulant matrices over products of cyclic groups.
//!
//! A weight table over `G = Z_p1 x ... x Z_pn` assembles into the
//! bi-stochastic matrix `sum_g alpha(g) J^g` built from tensor powers of
//! the primary shifts. The discrete Fourier transform diagonalizes every
//! such matrix, which gives the spectrum and the closed-form exponential
//! of the associated rate matrix without any numerical integration.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Tolerance for probability-table validation (sums, identity weight).
pub const WEIGHT_TOL: f64 = 1e-12;

/// Tolerance for recognizing a matrix as block circulant.
const CIRCULANT_TOL: f64 = 1e-10;

/// Residual imaginary part above which the evaluation of a Fourier kernel
/// signals an internal inconsistency.
const PHI_IMAG_HARD: f64 = 1e-8;

/// Index bookkeeping for a product of cyclic groups, in lexicographic
/// order: `(i1, ..., in) -> ((i1*p2 + i2)*p3 + ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLayout {
    orders: Vec<usize>,
}

impl GroupLayout {
    pub fn new(orders: &[usize]) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidWeights("orders must be non-empty".into()));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidWeights("orders must be positive".into()));
        }
        Ok(Self {
            orders: orders.to_vec(),
        })
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn dim(&self) -> usize {
        self.orders.iter().product()
    }

    pub fn factors(&self) -> usize {
        self.orders.len()
    }

    pub fn flatten(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.orders.len()
            || index.iter().zip(&self.orders).any(|(&i, &p)| i >= p)
        {
            return Err(Error::IndexOutOfRange {
                index: index.to_vec(),
                orders: self.orders.clone(),
            });
        }
        Ok(index
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&i, &p)| acc * p + i))
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &p) in out.iter_mut().zip(&self.orders).rev() {
            *slot = flat % p;
            flat /= p;
        }
        out
    }

    /// Group addition on flat indices.
    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ia, ib) = (self.unflatten(a), self.unflatten(b));
        let sum: Vec<usize> = ia
            .iter()
            .zip(&ib)
            .zip(&self.orders)
            .map(|((&x, &y), &p)| (x + y) % p)
            .collect();
        self.flatten(&sum).unwrap()
    }

    /// Group inverse on flat indices: `g -> -g`.
    pub fn negate(&self, a: usize) -> usize {
        let ia = self.unflatten(a);
        let neg: Vec<usize> = ia
            .iter()
            .zip(&self.orders)
            .map(|(&x, &p)| (p - x) % p)
            .collect();
        self.flatten(&neg).unwrap()
    }

    /// Offset `b - a` on flat indices.
    pub fn sub(&self, b: usize, a: usize) -> usize {
        self.add(b, self.negate(a))
    }

    /// Character pairing `prod_k omega_{p_k}^{g_k * x_k}` between a group
    /// element and a frequency, for the principal roots of unity.
    pub fn character(&self, g: usize, freq: usize) -> Complex64 {
        let (ig, ix) = (self.unflatten(g), self.unflatten(freq));
        let mut angle = 0.0;
        for ((&gk, &xk), &p) in ig.iter().zip(&ix).zip(&self.orders) {
            angle += 2.0 * PI * ((gk * xk) % p) as f64 / p as f64;
        }
        Complex64::from_polar(1.0, angle)
    }
}

/// Probability table over the product group with no mass at the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleWeights {
    layout: GroupLayout,
    alpha: Vec<f64>,
}

/// Rate-matrix coefficients: the same table with `-1` at the identity, so
/// that all entries sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorCoefficients {
    layout: GroupLayout,
    coeffs: Vec<f64>,
}

/// Anything that assigns a real coefficient to every group element.
pub trait WeightTable {
    fn layout(&self) -> &GroupLayout;
    fn coeff(&self, flat: usize) -> f64;
}

impl CycleWeights {
    pub fn new(orders: &[usize], alpha: Vec<f64>) -> Result<Self> {
        let layout = GroupLayout::new(orders)?;
        if alpha.len() != layout.dim() {
            return Err(Error::InvalidWeights(format!(
                "expected {} weights, got {}",
                layout.dim(),
                alpha.len()
            )));
        }
        if let Some((g, &v)) = alpha.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "negative weight {v} at {:?}",
                layout.unflatten(g)
            )));
        }
        if alpha[0].abs() > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!(
                "identity weight must be zero, got {}",
                alpha[0]
            )));
        }
        let total: f64 = alpha.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights must sum to 1, got {total:.15}"
            )));
        }
        let mut alpha = alpha;
        alpha[0] = 0.0;
        Ok(Self { layout, alpha })
    }

    /// Weight table concentrated on a single group element.
    pub fn point_mass(orders: &[usize], index: &[usize]) -> Result<Self> {
        let layout = GroupLayout::new(orders)?;
        let flat = layout.flatten(index)?;
        let mut alpha = vec![0.0; layout.dim()];
        alpha[flat] = 1.0;
        Self::new(orders, alpha)
    }

    pub fn orders(&self) -> &[usize] {
        self.layout.orders()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn get(&self, index: &[usize]) -> Result<f64> {
        Ok(self.alpha[self.layout.flatten(index)?])
    }

    /// Table with every weight moved to the inverse group element.
    pub fn reversed(&self) -> CycleWeights {
        let mut alpha = vec![0.0; self.alpha.len()];
        for (g, &v) in self.alpha.iter().enumerate() {
            alpha[self.layout.negate(g)] = v;
        }
        CycleWeights {
            layout: self.layout.clone(),
            alpha,
        }
    }

    /// Largest deviation `|alpha(g) - alpha(-g)|` over the group.
    pub fn max_asymmetry(&self) -> f64 {
        self.alpha
            .iter()
            .enumerate()
            .map(|(g, &v)| (v - self.alpha[self.layout.negate(g)]).abs())
            .fold(0.0, f64::max)
    }

    pub fn generator(&self) -> GeneratorCoefficients {
        let mut coeffs = self.alpha.clone();
        coeffs[0] = -1.0;
        GeneratorCoefficients {
            layout: self.layout.clone(),
            coeffs,
        }
    }

    /// True when the support of the table generates the whole group.
    pub fn support_generates(&self) -> bool {
        let dim = self.layout.dim();
        let mut reached = vec![false; dim];
        reached[0] = true;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for (g, &v) in self.alpha.iter().enumerate() {
                if v > 0.0 {
                    let y = self.layout.add(x, g);
                    if !reached[y] {
                        reached[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        reached.into_iter().all(|b| b)
    }
}

impl GeneratorCoefficients {
    pub fn from_weights(w: &CycleWeights) -> Self {
        w.generator()
    }

    pub fn orders(&self) -> &[usize] {
        self.layout.orders()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn validate(&self) -> Result<()> {
        let total: f64 = self.coeffs.iter().sum();
        if total.abs() > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!(
                "generator coefficients must sum to 0, got {total:.3e}"
            )));
        }
        if let Some((g, &v)) = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &v)| v < 0.0)
        {
            return Err(Error::InvalidWeights(format!(
                "negative off-identity coefficient {v} at {:?}",
                self.layout.unflatten(g)
            )));
        }
        Ok(())
    }
}

impl WeightTable for CycleWeights {
    fn layout(&self) -> &GroupLayout {
        &self.layout
    }
    fn coeff(&self, flat: usize) -> f64 {
        self.alpha[flat]
    }
}

impl WeightTable for GeneratorCoefficients {
    fn layout(&self) -> &GroupLayout {
        &self.layout
    }
    fn coeff(&self, flat: usize) -> f64 {
        self.coeffs[flat]
    }
}

/// Fourier spectrum of a weight table, indexed by frequency.
#[derive(Debug, Clone)]
pub struct Spectrum {
    layout: GroupLayout,
    lambda: Vec<Complex64>,
}

impl Spectrum {
    pub fn orders(&self) -> &[usize] {
        self.layout.orders()
    }

    pub fn lambda(&self) -> &[Complex64] {
        &self.lambda
    }

    pub fn get(&self, freq: &[usize]) -> Result<Complex64> {
        Ok(self.lambda[self.layout.flatten(freq)?])
    }

    /// Largest violation of `lambda(-k) = conj(lambda(k))`.
    pub fn conjugate_symmetry_deviation(&self) -> f64 {
        self.lambda
            .iter()
            .enumerate()
            .map(|(k, z)| (self.lambda[self.layout.negate(k)] - z.conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// The block circulant matrix `sum_g w(g) J^g`, with `J^g` the tensor
/// product of shift powers: `(J^g)[x][y] = 1` iff `y = x + g`.
pub fn assemble<T: WeightTable>(w: &T) -> ComplexMatrix {
    let layout = w.layout();
    let dim = layout.dim();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        for g in 0..dim {
            let v = w.coeff(g);
            if v != 0.0 {
                m.add_assign_at(x, layout.add(x, g), Complex64::new(v, 0.0));
            }
        }
    }
    m
}

/// Invert [`assemble`]: read the coefficients off the first row and verify
/// every entry follows the block circulant pattern.
pub fn birkhoff_coefficients(m: &ComplexMatrix, orders: &[usize]) -> Result<CycleWeights> {
    let layout = GroupLayout::new(orders)?;
    let dim = layout.dim();
    if m.require_square()? != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: m.rows(),
        });
    }
    let mut alpha = vec![0.0; dim];
    for g in 0..dim {
        let z = m.get(0, g);
        if z.im.abs() > CIRCULANT_TOL {
            return Err(Error::NotCirculant {
                row: 0,
                col: g,
                expected: 0.0,
                got: z.im,
            });
        }
        alpha[g] = z.re;
    }
    for x in 0..dim {
        for y in 0..dim {
            let g = layout.sub(y, x);
            let got = m.get(x, y);
            let expected = alpha[g];
            if (got.re - expected).abs() > CIRCULANT_TOL || got.im.abs() > CIRCULANT_TOL {
                return Err(Error::NotCirculant {
                    row: x,
                    col: y,
                    expected,
                    got: got.re,
                });
            }
        }
    }
    CycleWeights::new(orders, alpha)
}

/// Fourier spectrum `lambda_k = sum_g w(g) conj(omega)^(g.k)`.
pub fn spectrum<T: WeightTable>(w: &T) -> Spectrum {
    let layout = w.layout().clone();
    let dim = layout.dim();
    let lambda = (0..dim)
        .map(|k| {
            (0..dim)
                .map(|g| layout.character(g, k).conj() * w.coeff(g))
                .sum()
        })
        .collect();
    Spectrum { layout, lambda }
}

/// All Fourier kernel values `Phi_m(t) = sum_k omega^(m.k) exp(t lambda_k)`
/// at once; they are real for real coefficient tables.
pub fn phi_table(gen: &GeneratorCoefficients, t: f64) -> Result<Vec<f64>> {
    let t = t.max(0.0);
    let layout = &gen.layout;
    let dim = layout.dim();
    let spec = spectrum(gen);
    let exps: Vec<Complex64> = spec.lambda().iter().map(|l| (l * t).exp()).collect();
    let mut out = Vec::with_capacity(dim);
    for m in 0..dim {
        let z: Complex64 = (0..dim).map(|k| layout.character(m, k) * exps[k]).sum();
        if z.im.abs() > PHI_IMAG_HARD * (dim as f64) {
            return Err(Error::InternalConsistency(format!(
                "Fourier kernel at {:?} has imaginary part {:.3e}",
                layout.unflatten(m),
                z.im
            )));
        }
        out.push(z.re);
    }
    Ok(out)
}

/// Single Fourier kernel value `Phi_m(t)`.
pub fn phi_function(gen: &GeneratorCoefficients, t: f64, index: &[usize]) -> Result<f64> {
    let flat = gen.layout.flatten(index)?;
    Ok(phi_table(gen, t)?[flat])
}

/// Closed-form stochastic matrix `exp(t Q)` for the rate matrix
/// `Q = assemble(gen)`: entry `(x, y) = Phi_{y-x}(t) / dim`.
pub fn exp_generator(gen: &GeneratorCoefficients, t: f64) -> Result<ComplexMatrix> {
    let layout = &gen.layout;
    let dim = layout.dim();
    let phi = phi_table(gen, t)?;
    let scale = 1.0 / dim as f64;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        for y in 0..dim {
            let v = phi[layout.sub(y, x)] * scale;
            if !(-1e-10..=1.0 + 1e-10).contains(&v) {
                return Err(Error::InternalConsistency(format!(
                    "transition probability {v:.3e} outside [0,1] at ({x},{y})"
                )));
            }
            m.set(x, y, Complex64::new(v, 0.0));
        }
    }
    for x in 0..dim {
        let row: f64 = (0..dim).map(|y| m.get(x, y).re).sum();
        if (row - 1.0).abs() > 1e-10 {
            return Err(Error::InternalConsistency(format!(
                "row {x} of exp(tQ) sums to {row:.15}"
            )));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matrix_exponential, tensor_product, dft_matrix};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_weights(rng: &mut ChaCha8Rng, orders: &[usize]) -> CycleWeights {
        let dim: usize = orders.iter().product();
        let mut alpha: Vec<f64> = (0..dim).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
        alpha[0] = 0.0;
        let total: f64 = alpha.iter().sum();
        for a in alpha.iter_mut() {
            *a /= total;
        }
        CycleWeights::new(orders, alpha).unwrap()
    }

    #[test]
    fn group_layout_roundtrip_and_arithmetic() {
        let l = GroupLayout::new(&[3, 2]).unwrap();
        assert_eq!(l.dim(), 6);
        assert_eq!(l.flatten(&[2, 1]).unwrap(), 5);
        assert_eq!(l.unflatten(5), vec![2, 1]);
        assert_eq!(l.add(5, 3), l.flatten(&[(2 + 1) % 3, (1 + 1) % 2]).unwrap());
        assert_eq!(l.negate(l.flatten(&[1, 1]).unwrap()), l.flatten(&[2, 1]).unwrap());
        assert!(l.flatten(&[3, 0]).is_err());
    }

    #[test]
    fn point_mass_assembles_to_shift() {
        // alpha = (0,1,0,0) on Z4 assembles to the primary shift J4.
        let w = CycleWeights::point_mass(&[4], &[1]).unwrap();
        let m = assemble(&w);
        let j4 = crate::cycles::primary_permutation(4);
        assert_eq!(m.max_abs_diff(j4.matrix()), 0.0);
    }

    #[test]
    fn two_factor_assembly_matches_kronecker() {
        // alpha(0,1) = alpha(1,0) = 1/2 on Z2 x Z2 gives (J (x) I + I (x) J)/2.
        let mut alpha = vec![0.0; 4];
        let layout = GroupLayout::new(&[2, 2]).unwrap();
        alpha[layout.flatten(&[0, 1]).unwrap()] = 0.5;
        alpha[layout.flatten(&[1, 0]).unwrap()] = 0.5;
        let w = CycleWeights::new(&[2, 2], alpha).unwrap();
        let m = assemble(&w);

        let j2 = crate::cycles::primary_permutation(2);
        let i2 = ComplexMatrix::identity(2);
        let expected = &tensor_product(j2.matrix(), &i2).unwrap()
            + &tensor_product(&i2, j2.matrix()).unwrap();
        assert_eq!(m.max_abs_diff(&expected.scale_real(0.5)), 0.0);

        // Bi-stochastic: all rows and columns sum to 1.
        for i in 0..4 {
            let row: f64 = (0..4).map(|j| m.get(i, j).re).sum();
            let col: f64 = (0..4).map(|j| m.get(j, i).re).sum();
            assert!((row - 1.0).abs() < 1e-15 && (col - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rows_sum_to_one_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for orders in [vec![5], vec![3, 4], vec![2, 3, 2]] {
            let w = random_weights(&mut rng, &orders);
            let m = assemble(&w);
            for i in 0..m.rows() {
                let row: f64 = (0..m.cols()).map(|j| m.get(i, j).re).sum();
                assert!((row - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn birkhoff_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let w = random_weights(&mut rng, &[3, 2]);
            let back = birkhoff_coefficients(&assemble(&w), &[3, 2]).unwrap();
            for (a, b) in w.alpha().iter().zip(back.alpha()) {
                assert!((a - b).abs() < 1e-12);
            }
        }

        let j4 = crate::cycles::primary_permutation(4);
        let w = birkhoff_coefficients(j4.matrix(), &[4]).unwrap();
        assert_eq!(w.alpha(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn birkhoff_rejects_non_circulant() {
        // Average of the swap (01) and the 3-cycle: bi-stochastic but not
        // shift invariant.
        let m = ComplexMatrix::from_real_rows(&[
            &[0.0, 1.0, 0.0],
            &[0.5, 0.0, 0.5],
            &[0.5, 0.0, 0.5],
        ])
        .unwrap();
        let err = birkhoff_coefficients(&m, &[3]).unwrap_err();
        assert!(matches!(err, Error::NotCirculant { .. }));
    }

    #[test]
    fn generator_spectrum_values() {
        // Z2, generator coefficients (-1, 1): lambda = (0, -2).
        let w = CycleWeights::point_mass(&[2], &[1]).unwrap();
        let s = spectrum(&w.generator());
        assert!((s.get(&[0]).unwrap() - Complex64::new(0.0, 0.0)).norm() < 1e-15);
        assert!((s.get(&[1]).unwrap() - Complex64::new(-2.0, 0.0)).norm() < 1e-15);

        // lambda at frequency 0 vanishes for every generator.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let w = random_weights(&mut rng, &[4, 3]);
            let s = spectrum(&w.generator());
            assert!(s.lambda()[0].norm() < 1e-12);
        }
    }

    #[test]
    fn dft_conjugation_diagonalizes_assembled_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for orders in [vec![4], vec![3, 2], vec![2, 2, 3]] {
            let w = random_weights(&mut rng, &orders);
            let m = assemble(&w);
            let mut f = dft_matrix(orders[0]).matrix().clone();
            for &p in &orders[1..] {
                f = tensor_product(&f, dft_matrix(p).matrix()).unwrap();
            }
            let diag = f.matmul(&m).matmul(&f.conjugate_transpose());
            let s = spectrum(&w);
            let mut dev: f64 = 0.0;
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let expected = if i == j { s.lambda()[i] } else { Complex64::new(0.0, 0.0) };
                    dev = dev.max((diag.get(i, j) - expected).norm());
                }
            }
            assert!(dev < 1e-10, "orders {orders:?}: deviation {dev:.3e}");
        }
    }

    #[test]
    fn spectrum_conjugate_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let w = random_weights(&mut rng, &[5, 3]);
            assert!(spectrum(&w).conjugate_symmetry_deviation() < 1e-12);
            assert!(spectrum(&w.generator()).conjugate_symmetry_deviation() < 1e-12);
        }
    }

    #[test]
    fn phi_at_zero_is_scaled_point_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let w = random_weights(&mut rng, &[3, 2]);
        let phi = phi_table(&w.generator(), 0.0).unwrap();
        assert!((phi[0] - 6.0).abs() < 1e-12);
        for &v in &phi[1..] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn phi_sums_to_dimension() {
        // Only the zero frequency survives the sum over all offsets.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = random_weights(&mut rng, &[4, 3]);
        for t in [0.3, 1.0, 2.5] {
            let phi = phi_table(&w.generator(), t).unwrap();
            let total: f64 = phi.iter().sum();
            assert!((total - 12.0).abs() < 1e-10);
        }
    }

    #[test]
    fn two_state_phi_values() {
        let w = CycleWeights::point_mass(&[2], &[1]).unwrap();
        let gen = w.generator();
        let e2 = (-2.0f64).exp();
        assert!((phi_function(&gen, 1.0, &[0]).unwrap() - (1.0 + e2)).abs() < 1e-14);
        assert!((phi_function(&gen, 1.0, &[1]).unwrap() - (1.0 - e2)).abs() < 1e-14);
    }

    #[test]
    fn exponential_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let w = random_weights(&mut rng, &[3, 5]);
        let gen = w.generator();
        let q = assemble(&gen);
        for t in [0.1, 1.0, 5.0] {
            let closed = exp_generator(&gen, t).unwrap();
            let oracle = matrix_exponential(&q, t).unwrap();
            assert!(
                closed.max_abs_diff(&oracle) < 1e-10,
                "t = {t}: {:.3e}",
                closed.max_abs_diff(&oracle)
            );
        }
    }

    #[test]
    fn exponential_identities() {
        let w = CycleWeights::point_mass(&[2], &[1]).unwrap();
        let gen = w.generator();
        assert_eq!(
            exp_generator(&gen, 0.0).unwrap().max_abs_diff(&ComplexMatrix::identity(2)),
            0.0
        );
        let e2 = (-2.0f64).exp();
        let expected = ComplexMatrix::from_real_rows(&[
            &[(1.0 + e2) / 2.0, (1.0 - e2) / 2.0],
            &[(1.0 - e2) / 2.0, (1.0 + e2) / 2.0],
        ])
        .unwrap();
        assert!(exp_generator(&gen, 1.0).unwrap().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn semigroup_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = random_weights(&mut rng, &[4, 2]);
        let gen = w.generator();
        let (s, t) = (0.4, 1.3);
        let prod = exp_generator(&gen, s)
            .unwrap()
            .matmul(&exp_generator(&gen, t).unwrap());
        let whole = exp_generator(&gen, s + t).unwrap();
        assert!(prod.max_abs_diff(&whole) < 1e-9);
    }

    #[test]
    fn weight_validation_errors() {
        assert!(CycleWeights::new(&[2], vec![0.0, 0.5]).is_err()); // sum != 1
        assert!(CycleWeights::new(&[2], vec![0.5, 0.5]).is_err()); // identity mass
        assert!(CycleWeights::new(&[2], vec![0.0, -1.0]).is_err()); // negative
        assert!(CycleWeights::new(&[], vec![]).is_err());
        assert!(CycleWeights::new(&[3], vec![0.0, 1.0]).is_err()); // wrong length
    }

    #[test]
    fn support_generation() {
        let w = CycleWeights::point_mass(&[4], &[1]).unwrap();
        assert!(w.support_generates());
        let w = CycleWeights::point_mass(&[4], &[2]).unwrap();
        assert!(!w.support_generates());
        let w = CycleWeights::point_mass(&[3, 2], &[1, 1]).unwrap();
        assert!(w.support_generates()); // (1,1) generates Z3 x Z2
        let w = CycleWeights::point_mass(&[2, 2], &[1, 1]).unwrap();
        assert!(!w.support_generates()); // diagonal subgroup only
    }
}
