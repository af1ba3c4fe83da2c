//! Choi-state dynamics and entropy production rates.
//!
//! The forward dynamics doubles the space, purifies a stationary state
//! `rho` into `Omega = sum_a sqrt(rho_a) (v_a (x) v_a)`, and pushes the
//! second leg through the semigroup. For circulant generators the whole
//! construction diagonalizes: the evolved state is
//!
//! ```text
//! Omega_t = (1/d) sum_m Phi_m(t) |u_m><u_m|,       d = p1*...*pn,
//! ```
//!
//! with `Phi` the Fourier kernels of the generator and `u_m` unit vectors
//! built from the Fourier frame of `rho`. The reversed semigroup produces
//! the same family with the kernel table reflected through the group
//! inverse, so the relative entropy between forward and backward states,
//! and with it the entropy production rate, reduces to a classical
//! divergence of kernel tables. Every spectral-formula state is
//! cross-checked against the direct construction that evolves matrix
//! units with the closed-form exponential.

use num_complex::Complex64;

use crate::circulant::{exp_generator, phi_table, CycleWeights, GroupLayout};
use crate::error::{Error, Result};
use crate::linalg::{eigen_hermitian, relative_entropy, ComplexMatrix, DensityMatrix};
use crate::qms::CirculantGenerator;

/// Residual bound for the direct-versus-spectral Choi cross-check.
const CHOI_CROSS_TOL: f64 = 1e-9;

/// Residual bound for the stationarity precondition.
const STATIONARY_TOL: f64 = 1e-8;

/// Below this magnitude a Fourier kernel value counts as an exact zero
/// (an offset the chain cannot reach).
const KERNEL_ZERO: f64 = 1e-250;

/// Default descending grid for the numerical entropy production rate.
pub const DEFAULT_T_GRID: [f64; 5] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];

/// Choi state of the (forward or reversed) semigroup at one time, with the
/// rank-one decomposition over the `u` family.
#[derive(Debug, Clone)]
pub struct ChoiState {
    state: DensityMatrix,
    eigen_values: Vec<f64>,
    eigen_basis: Vec<Vec<Complex64>>,
    cross_residual: f64,
}

impl ChoiState {
    /// The density matrix on the doubled space.
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    /// Weights `Phi_m(t)/d` of the rank-one decomposition, indexed by flat
    /// group offset. For the uniform stationary state these are exactly
    /// the eigenvalues of the state.
    pub fn eigen_values(&self) -> &[f64] {
        &self.eigen_values
    }

    /// The unit vectors of the decomposition.
    pub fn eigen_basis(&self) -> &[Vec<Complex64>] {
        &self.eigen_basis
    }

    /// Largest entrywise deviation between the direct construction and the
    /// spectral formula.
    pub fn cross_residual(&self) -> f64 {
        self.cross_residual
    }

    /// Residual of reconstructing the state from the rank-one family.
    pub fn reconstruction_residual(&self) -> f64 {
        let dim = self.state.dim();
        let mut rebuilt = ComplexMatrix::zeros(dim, dim);
        for (w, u) in self.eigen_values.iter().zip(&self.eigen_basis) {
            if *w == 0.0 {
                continue;
            }
            rebuilt = &rebuilt + &ComplexMatrix::outer(u, u).scale_real(*w);
        }
        rebuilt.max_abs_diff(self.state.matrix())
    }
}

/// Purification vector `Omega = sum_a sqrt(rho_a) (v_a (x) v_a)` over the
/// eigenbasis of `rho`, with each eigenvector phase-canonicalized.
pub fn omega_vector(rho: &DensityMatrix) -> Result<Vec<Complex64>> {
    let eig = eigen_hermitian(rho.matrix())?;
    let d = rho.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for a in 0..d {
        let lam = eig.values[a].max(0.0);
        if lam == 0.0 {
            continue;
        }
        let v = canonical_phase(eig.vector(a));
        let s = lam.sqrt();
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] += v[i] * v[j] * s;
            }
        }
    }
    Ok(out)
}

fn canonical_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let mut best = 0;
    let mut mag = 0.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > mag {
            mag = z.norm();
            best = i;
        }
    }
    if mag > 0.0 {
        let correction = (v[best] / mag).conj();
        for z in v.iter_mut() {
            *z *= correction;
        }
    }
    v
}

/// The Fourier frame of a stationary state: its eigenvalues over the
/// frequency lattice together with the group layout. The eigenvectors are
/// the Fourier vectors `f_k[x] = conj(omega^(k.x)) / sqrt(d)`.
struct FourierFrame {
    layout: GroupLayout,
    rho_tilde: Vec<f64>,
}

impl FourierFrame {
    fn fourier_vector(&self, k: usize) -> Vec<Complex64> {
        let d = self.layout.dim();
        let norm = 1.0 / (d as f64).sqrt();
        (0..d)
            .map(|x| self.layout.character(x, k).conj() * norm)
            .collect()
    }

    /// Doubled-space vector `f_k (x) f_k`.
    fn doubled_vector(&self, k: usize) -> Vec<Complex64> {
        let f = self.fourier_vector(k);
        let d = f.len();
        let mut out = Vec::with_capacity(d * d);
        for a in &f {
            for b in &f {
                out.push(a * b);
            }
        }
        out
    }
}

/// Project a stationary state onto the shift family and return its
/// coefficients, rejecting states that are not stationary for `gen`.
fn stationary_coefficients(
    gen: &CirculantGenerator,
    rho: &DensityMatrix,
) -> Result<Vec<Complex64>> {
    let layout = GroupLayout::new(gen.orders())?;
    let d = layout.dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: rho.dim(),
        });
    }
    let residual = gen.generator_apply(rho.matrix())?.max_abs();
    if residual > STATIONARY_TOL {
        return Err(Error::NonStationary { residual });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d];
    for g in 0..d {
        let mut acc = Complex64::new(0.0, 0.0);
        for x in 0..d {
            acc += rho.matrix().get(x, layout.add(x, g));
        }
        coeffs[g] = acc / d as f64;
    }
    // Every stationary state of a circulant generator lies in the shift
    // span; enforce it so the Fourier frame below is exact.
    let mut rebuilt = ComplexMatrix::zeros(d, d);
    for (g, c) in coeffs.iter().enumerate() {
        for x in 0..d {
            rebuilt.add_assign_at(x, layout.add(x, g), *c);
        }
    }
    let structural = rebuilt.max_abs_diff(rho.matrix());
    if structural > STATIONARY_TOL {
        return Err(Error::NonStationary {
            residual: structural,
        });
    }
    Ok(coeffs)
}

fn fourier_frame(gen: &CirculantGenerator, rho: &DensityMatrix) -> Result<FourierFrame> {
    let layout = GroupLayout::new(gen.orders())?;
    let coeffs = stationary_coefficients(gen, rho)?;
    let d = layout.dim();
    let mut rho_tilde = Vec::with_capacity(d);
    for k in 0..d {
        let z: Complex64 = (0..d)
            .map(|g| coeffs[g] * layout.character(g, k).conj())
            .sum();
        if z.im.abs() > 1e-10 {
            return Err(Error::InternalConsistency(format!(
                "complex Fourier eigenvalue {z} of a stationary state"
            )));
        }
        rho_tilde.push(z.re.max(0.0));
    }
    Ok(FourierFrame { layout, rho_tilde })
}

/// Apply the closed-form semigroup at time `t` to an arbitrary matrix by
/// evolving each offset diagonal with `exp(tQ)` through the row-vector
/// isomorphism.
fn evolve_matrix(layout: &GroupLayout, e: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    let d = layout.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for o in 0..d {
        for m in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..d {
                acc += y.get(x, layout.add(x, o)) * e.get(x, m);
            }
            out.set(m, layout.add(m, o), acc);
        }
    }
    out
}

/// Direct Choi construction: purify `rho` in its Fourier frame and push
/// the second leg through the semigroup.
fn direct_choi(
    gen: &CirculantGenerator,
    frame: &FourierFrame,
    t: f64,
) -> Result<ComplexMatrix> {
    let layout = &frame.layout;
    let d = layout.dim();
    let e = exp_generator(&gen.generator_coefficients(), t)?;

    let mut omega = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        let w = frame.rho_tilde[k].sqrt();
        if w == 0.0 {
            continue;
        }
        for (i, z) in frame.doubled_vector(k).into_iter().enumerate() {
            omega[i] += z * w;
        }
    }
    let pure = ComplexMatrix::outer(&omega, &omega);

    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            let block = ComplexMatrix::from_fn(d, d, |i, j| pure.get(a * d + i, b * d + j))?;
            let evolved = evolve_matrix(layout, &e, &block);
            for i in 0..d {
                for j in 0..d {
                    out.set(a * d + i, b * d + j, evolved.get(i, j));
                }
            }
        }
    }
    Ok(out)
}

/// The rank-one family `u_m = sum_k sqrt(rho_tilde_k) omega^(m.k)
/// (f_k (x) f_k)` of the spectral formula.
fn choi_family(frame: &FourierFrame) -> Vec<Vec<Complex64>> {
    let layout = &frame.layout;
    let d = layout.dim();
    let doubled: Vec<Vec<Complex64>> = (0..d).map(|k| frame.doubled_vector(k)).collect();
    (0..d)
        .map(|m| {
            let mut u = vec![Complex64::new(0.0, 0.0); d * d];
            for k in 0..d {
                let w = frame.rho_tilde[k].sqrt();
                if w == 0.0 {
                    continue;
                }
                let phase = layout.character(m, k) * w;
                for (slot, z) in u.iter_mut().zip(&doubled[k]) {
                    *slot += phase * z;
                }
            }
            u
        })
        .collect()
}

fn spectral_choi(weights: &[f64], family: &[Vec<Complex64>], dim: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (w, u) in weights.iter().zip(family) {
        if *w == 0.0 {
            continue;
        }
        for i in 0..dim {
            let wi = u[i] * *w;
            for j in 0..dim {
                out.add_assign_at(i, j, wi * u[j].conj());
            }
        }
    }
    out
}

fn build_choi(
    gen: &CirculantGenerator,
    rho: &DensityMatrix,
    t: f64,
    reversed: bool,
) -> Result<ChoiState> {
    let t = t.max(0.0);
    let frame = fourier_frame(gen, rho)?;
    let layout = &frame.layout;
    let d = layout.dim();

    let evolving = if reversed { gen.rho_adjoint() } else { gen.clone() };
    let phi = phi_table(&evolving.generator_coefficients(), t)?;
    let weights: Vec<f64> = (0..d).map(|m| (phi[m] / d as f64).max(0.0)).collect();

    let family = choi_family(&frame);
    let spectral = spectral_choi(&weights, &family, d * d);
    let direct = direct_choi(&evolving, &frame, t)?;

    let cross_residual = spectral.max_abs_diff(&direct);
    if cross_residual > CHOI_CROSS_TOL {
        return Err(Error::InternalConsistency(format!(
            "spectral Choi formula deviates from the direct construction by {cross_residual:.3e}"
        )));
    }

    Ok(ChoiState {
        state: DensityMatrix::new(direct)?,
        eigen_values: weights,
        eigen_basis: family,
        cross_residual,
    })
}

/// Choi state of the forward semigroup at time `t` with respect to the
/// stationary state `rho`.
pub fn forward_choi(
    gen: &CirculantGenerator,
    rho: &DensityMatrix,
    t: f64,
) -> Result<ChoiState> {
    build_choi(gen, rho, t, false)
}

/// Choi state of the reversed (adjoint) semigroup. Computed both as the
/// forward state of the adjoint generator and by reflecting the kernel
/// table over the same rank-one family; the two routes must agree.
pub fn backward_choi(
    gen: &CirculantGenerator,
    rho: &DensityMatrix,
    t: f64,
) -> Result<ChoiState> {
    let via_adjoint = forward_choi(&gen.rho_adjoint(), rho, t)?;

    let reflected = build_choi(gen, rho, t, true)?;
    let dev = via_adjoint
        .state
        .matrix()
        .max_abs_diff(reflected.state.matrix());
    if dev > 1e-10 {
        return Err(Error::InternalConsistency(format!(
            "adjoint-generator route deviates from reflected-kernel route by {dev:.3e}"
        )));
    }
    Ok(reflected)
}

/// Closed-form entropy production rate and its per-offset terms.
#[derive(Debug, Clone)]
pub struct ClosedFormEpr {
    /// `0.5 * sum_m (alpha(m) - alpha(-m)) ln(alpha(m)/alpha(-m))`, with
    /// `+inf` as soon as some weight has a vanishing reverse.
    pub value: f64,
    /// The individual summands, indexed by flat group element; each one is
    /// nonnegative.
    pub terms: Vec<f64>,
}

/// Closed-form quantum entropy production rate of the circulant
/// semigroup. Zero exactly at detailed balance.
pub fn qepr_closed_form(gen: &CirculantGenerator) -> ClosedFormEpr {
    let layout = GroupLayout::new(gen.orders()).expect("validated orders");
    let alpha = gen.weights().alpha();
    let d = layout.dim();
    let mut terms = Vec::with_capacity(d);
    let mut total = 0.0;
    for m in 0..d {
        let fwd = alpha[m];
        let bwd = alpha[layout.negate(m)];
        let term = if fwd == 0.0 && bwd == 0.0 {
            0.0
        } else if fwd == 0.0 || bwd == 0.0 {
            f64::INFINITY
        } else {
            (fwd - bwd) * (fwd / bwd).ln()
        };
        terms.push(term);
        total += term;
    }
    ClosedFormEpr {
        value: 0.5 * total,
        terms,
    }
}

/// Relative entropy `S(Omega_t, reversed Omega_t)` at one time.
///
/// For the uniform stationary state the two states commute and the value
/// reduces to the classical divergence of the kernel tables; for other
/// invariant states the full matrix relative entropy is used.
pub fn choi_relative_entropy(
    gen: &CirculantGenerator,
    rho: &DensityMatrix,
    t: f64,
) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    if rho.is_uniform(1e-12) {
        let layout = GroupLayout::new(gen.orders())?;
        let d = layout.dim();
        let phi = phi_table(&gen.generator_coefficients(), t)?;
        let mut s = 0.0;
        for m in 0..d {
            let fwd = phi[m].max(0.0) / d as f64;
            let bwd = phi[layout.negate(m)].max(0.0) / d as f64;
            if fwd <= KERNEL_ZERO {
                continue;
            }
            if bwd <= KERNEL_ZERO {
                return Ok(f64::INFINITY);
            }
            s += fwd * (fwd / bwd).ln();
        }
        Ok(s.max(0.0))
    } else {
        let fwd = forward_choi(gen, rho, t)?;
        let bwd = backward_choi(gen, rho, t)?;
        relative_entropy(fwd.state(), bwd.state())
    }
}

/// Outcome of the numerical entropy production rate.
#[derive(Debug, Clone)]
pub struct NumericalEpr {
    /// Extrapolated limit of `S(t)/t`, or `None` when the quotient
    /// diverges (one-sided zero weights).
    pub value: Option<f64>,
    /// The raw sequence `(t, S(t)/t)` over the grid.
    pub raw: Vec<(f64, f64)>,
    pub divergent: bool,
}

/// Numerical entropy production rate: evaluate `S(Omega_t, reversed)/t`
/// over a descending grid and Richardson-extrapolate to `t -> 0`.
pub fn qepr_numerical(
    gen: &CirculantGenerator,
    rho: &DensityMatrix,
    grid: &[f64],
) -> Result<NumericalEpr> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if grid.iter().any(|&t| t <= 0.0) {
        return Err(Error::InvalidArgument(
            "numerical QEPR grid times must be positive".into(),
        ));
    }
    if grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidArgument(
            "numerical QEPR grid must be strictly descending".into(),
        ));
    }

    let mut raw = Vec::with_capacity(grid.len());
    let mut saw_infinite = false;
    for &t in grid {
        let s = choi_relative_entropy(gen, rho, t)?;
        if !s.is_finite() {
            saw_infinite = true;
        }
        raw.push((t, s / t));
    }

    let closed_infinite = !qepr_closed_form(gen).value.is_finite();
    if closed_infinite || saw_infinite {
        return Ok(NumericalEpr {
            value: None,
            raw,
            divergent: true,
        });
    }

    // Neville extrapolation of the polynomial model S(t)/t = e + c t + ...
    let mut f: Vec<f64> = raw.iter().map(|&(_, v)| v).collect();
    let t: Vec<f64> = raw.iter().map(|&(t, _)| t).collect();
    let n = f.len();
    for j in 1..n {
        for i in 0..n - j {
            f[i] = (t[i + j] * f[i] - t[i] * f[i + 1]) / (t[i + j] - t[i]);
        }
    }
    Ok(NumericalEpr {
        value: Some(f[0]),
        raw,
        divergent: false,
    })
}

/// Classical entropy production rate of the diagonal restriction: the
/// uniform-measure rate formula on the rate matrix assembled from the
/// weight table, with the same zero-rate conventions as the closed form.
pub fn classical_epr(gen: &CirculantGenerator) -> Result<f64> {
    let d = gen.dim();
    let zero = vec![0usize; gen.orders().len()];
    let transition = gen.subspace_action(&zero)?;
    let q = &transition - &ComplexMatrix::identity(d);
    let pi = 1.0 / d as f64;
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let fwd = pi * q.get(i, j).re;
            let bwd = pi * q.get(j, i).re;
            if fwd <= 0.0 && bwd <= 0.0 {
                continue;
            }
            if fwd <= 0.0 || bwd <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total += (fwd - bwd) * (fwd / bwd).ln();
        }
    }
    Ok(0.5 * total)
}

/// Entropy curve `t -> S(Omega_t, reversed Omega_t)` over an ascending
/// grid of nonnegative times.
pub fn entropy_curve(
    gen: &CirculantGenerator,
    rho: &DensityMatrix,
    ts: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if ts.iter().any(|&t| t < 0.0) {
        return Err(Error::InvalidArgument("curve times must be >= 0".into()));
    }
    if ts.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("curve times must be ascending".into()));
    }
    ts.iter()
        .map(|&t| Ok((t, choi_relative_entropy(gen, rho, t)?)))
        .collect()
}

/// Separability diagnostics for product weight tables. See
/// [`separability_check`].
#[derive(Debug, Clone)]
pub struct SeparabilityReport {
    pub alpha_first: Vec<f64>,
    pub alpha_second: Vec<f64>,
    /// Deviation of the Choi state from the tensor product of the factor
    /// Choi states (after leg reordering). This does not vanish: the two
    /// factors jump on a shared clock, which correlates them.
    pub product_residual: f64,
    /// Deviations of the factor marginals from the factor Choi states.
    pub marginal_residual_first: f64,
    pub marginal_residual_second: f64,
    /// Truncation-aware residual of the explicit separable decomposition
    /// (a Poisson mixture of product Choi states).
    pub mixture_residual: f64,
    pub mixture_terms: usize,
    /// True when marginals and mixture agree within `1e-9`: the state is
    /// verified separable across the factor split.
    pub separable: bool,
}

/// For a two-factor generator whose weights factor as
/// `alpha(i,j) = alpha_p(i) * alpha_q(j)`, verify the factor structure of
/// the forward Choi state at time `t` (uniform stationary state).
///
/// The state is separable across the factor split: conditioning on the
/// number of jumps of the shared clock exhibits it as a Poisson mixture of
/// product Choi states, and its marginals are exactly the factor Choi
/// states. The report also carries the deviation from the plain tensor
/// product of the marginals, which stays finite for entangling-free but
/// correlated dynamics.
pub fn separability_check(gen: &CirculantGenerator, t: f64) -> Result<SeparabilityReport> {
    let orders = gen.orders();
    if orders.len() != 2 {
        return Err(Error::NotProductWeights(
            "separability check needs exactly two factors".into(),
        ));
    }
    let (p, q) = (orders[0], orders[1]);
    let layout = GroupLayout::new(orders)?;
    let alpha = gen.weights().alpha();

    // Rank-one test on the p x q table via its 2x2 minors.
    for i in 0..p {
        for k in 0..p {
            for j in 0..q {
                for l in 0..q {
                    let a = alpha[layout.flatten(&[i, j]).unwrap()];
                    let b = alpha[layout.flatten(&[k, l]).unwrap()];
                    let c = alpha[layout.flatten(&[i, l]).unwrap()];
                    let d = alpha[layout.flatten(&[k, j]).unwrap()];
                    if (a * b - c * d).abs() > 1e-10 {
                        return Err(Error::NotProductWeights(format!(
                            "2x2 minor at rows ({i},{k}), columns ({j},{l}) is {:.3e}",
                            a * b - c * d
                        )));
                    }
                }
            }
        }
    }
    let alpha_first: Vec<f64> = (0..p)
        .map(|i| (0..q).map(|j| alpha[layout.flatten(&[i, j]).unwrap()]).sum())
        .collect();
    let alpha_second: Vec<f64> = (0..q)
        .map(|j| (0..p).map(|i| alpha[layout.flatten(&[i, j]).unwrap()]).sum())
        .collect();

    let d = layout.dim();
    let uniform = DensityMatrix::uniform(d);
    let omega_t = forward_choi(gen, &uniform, t)?;

    let factor_first = factor_choi(&alpha_first, t)?;
    let factor_second = factor_choi(&alpha_second, t)?;

    // Reorder legs (1p 1q 2p 2q) -> (1p 2p)(1q 2q) and compare.
    let reorder = |mp: &ComplexMatrix, mq: &ComplexMatrix| -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(d * d, d * d);
        for a1 in 0..p {
            for b1 in 0..q {
                for a2 in 0..p {
                    for b2 in 0..q {
                        let row = ((a1 * q + b1) * p + a2) * q + b2;
                        for c1 in 0..p {
                            for d1 in 0..q {
                                for c2 in 0..p {
                                    for d2 in 0..q {
                                        let col = ((c1 * q + d1) * p + c2) * q + d2;
                                        let v = mp.get(a1 * p + a2, c1 * p + c2)
                                            * mq.get(b1 * q + b2, d1 * q + d2);
                                        out.set(row, col, v);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    };

    let product = reorder(&factor_first, &factor_second);
    let product_residual = omega_t.state().matrix().max_abs_diff(&product);

    // Factor marginals of the Choi state.
    let marginal_first = partial_trace_second(omega_t.state().matrix(), p, q);
    let marginal_second = partial_trace_first(omega_t.state().matrix(), p, q);
    let marginal_residual_first = marginal_first.max_abs_diff(&factor_first);
    let marginal_residual_second = marginal_second.max_abs_diff(&factor_second);

    // Explicit separable decomposition: conditioning on the number of
    // jumps k of the shared Poisson clock gives
    //   Omega_t = sum_k e^-t t^k/k! C_p(k) (x) C_q(k),
    // with C_s(k) the Choi state of the k-fold power of the factor map.
    let mut mixture = ComplexMatrix::zeros(d * d, d * d);
    let mut weight = (-t).exp();
    let mut cumulative = 0.0;
    let mut conv_first = delta_table(p);
    let mut conv_second = delta_table(q);
    let mut k = 0usize;
    loop {
        let term = reorder(
            &choi_of_factor_table(&conv_first),
            &choi_of_factor_table(&conv_second),
        );
        mixture = &mixture + &term.scale_real(weight);
        cumulative += weight;
        if 1.0 - cumulative < 1e-13 || k > 400 {
            break;
        }
        conv_first = convolve(&conv_first, &alpha_first);
        conv_second = convolve(&conv_second, &alpha_second);
        k += 1;
        weight *= t / k as f64;
    }
    let mixture_residual = omega_t.state().matrix().max_abs_diff(&mixture);

    let separable = marginal_residual_first <= 1e-9
        && marginal_residual_second <= 1e-9
        && mixture_residual <= 1e-9;

    Ok(SeparabilityReport {
        alpha_first,
        alpha_second,
        product_residual,
        marginal_residual_first,
        marginal_residual_second,
        mixture_residual,
        mixture_terms: k + 1,
        separable,
    })
}

fn delta_table(s: usize) -> Vec<f64> {
    let mut t = vec![0.0; s];
    t[0] = 1.0;
    t
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let s = a.len();
    let mut out = vec![0.0; s];
    for (x, &va) in a.iter().enumerate() {
        if va == 0.0 {
            continue;
        }
        for (y, &vb) in b.iter().enumerate() {
            out[(x + y) % s] += va * vb;
        }
    }
    out
}

/// Choi state `(1 (x) Lambda)|Omega><Omega|` of the CP map with weight
/// table `beta` on a single cyclic factor, in the Fourier-frame
/// purification convention used throughout this module
/// (`Omega = (1/sqrt(s)) sum_n e_n (x) e_{-n}`).
fn choi_of_factor_table(beta: &[f64]) -> ComplexMatrix {
    let s = beta.len();
    let mut out = ComplexMatrix::zeros(s * s, s * s);
    let norm = 1.0 / s as f64;
    // The map conjugates by J^i with weight beta(-i); the shifted
    // purification has components delta_{m, -n-i}/sqrt(s).
    for i in 0..s {
        let w = beta[(s - i) % s];
        if w == 0.0 {
            continue;
        }
        for n in 0..s {
            let row = n * s + (2 * s - n - i) % s;
            for m in 0..s {
                let col = m * s + (2 * s - m - i) % s;
                out.add_assign_at(row, col, Complex64::new(w * norm, 0.0));
            }
        }
    }
    out
}

/// Choi state of the factor semigroup generated by a single-factor weight
/// table that may carry identity mass `c`; the generator rescales to a
/// proper circulant generator run for time `(1-c) t`.
fn factor_choi(alpha_s: &[f64], t: f64) -> Result<ComplexMatrix> {
    let s = alpha_s.len();
    let c = alpha_s[0];
    if 1.0 - c <= 1e-14 {
        // Frozen factor: the Choi state stays pure.
        return Ok(choi_of_factor_table(&delta_table(s)));
    }
    let mut rescaled = vec![0.0; s];
    for (i, &v) in alpha_s.iter().enumerate().skip(1) {
        rescaled[i] = v / (1.0 - c);
    }
    // Guard against rounding drift in the sum.
    let total: f64 = rescaled.iter().sum();
    for v in rescaled.iter_mut() {
        *v /= total;
    }
    let weights = CycleWeights::new(&[s], rescaled)?;
    let gen = CirculantGenerator::new(weights);
    let uniform = DensityMatrix::uniform(s);
    Ok(forward_choi(&gen, &uniform, (1.0 - c) * t)?
        .state()
        .matrix()
        .clone())
}

/// Trace out the second factor's two legs of a doubled two-factor space:
/// input indices `((a1 b1),(a2 b2))`, output `(a1 a2)`.
fn partial_trace_second(m: &ComplexMatrix, p: usize, q: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(p * p, p * p);
    for a1 in 0..p {
        for a2 in 0..p {
            for c1 in 0..p {
                for c2 in 0..p {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b1 in 0..q {
                        for b2 in 0..q {
                            let row = ((a1 * q + b1) * p + a2) * q + b2;
                            let col = ((c1 * q + b1) * p + c2) * q + b2;
                            acc += m.get(row, col);
                        }
                    }
                    out.set(a1 * p + a2, c1 * p + c2, acc);
                }
            }
        }
    }
    out
}

fn partial_trace_first(m: &ComplexMatrix, p: usize, q: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(q * q, q * q);
    for b1 in 0..q {
        for b2 in 0..q {
            for d1 in 0..q {
                for d2 in 0..q {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a1 in 0..p {
                        for a2 in 0..p {
                            let row = ((a1 * q + b1) * p + a2) * q + b2;
                            let col = ((a1 * q + d1) * p + a2) * q + d2;
                            acc += m.get(row, col);
                        }
                    }
                    out.set(b1 * q + b2, d1 * q + d2, acc);
                }
            }
        }
    }
    out
}

/// Full entropy production report for one generator.
#[derive(Debug, Clone)]
pub struct EprReport {
    pub orders: Vec<usize>,
    pub qepr_closed: f64,
    pub qepr_numerical: NumericalEpr,
    pub classical_epr: f64,
    pub detailed_balance: bool,
    pub terms: Vec<f64>,
}

/// Assemble the report: closed form, numerical limit, classical rate of
/// the diagonal restriction, detailed-balance verdict and per-offset
/// terms.
pub fn epr_report(
    gen: &CirculantGenerator,
    rho: Option<&DensityMatrix>,
    grid: &[f64],
    db_tol: f64,
) -> Result<EprReport> {
    let closed = qepr_closed_form(gen);
    let uniform = DensityMatrix::uniform(gen.dim());
    let rho = rho.unwrap_or(&uniform);
    let numerical = qepr_numerical(gen, rho, grid)?;
    let classical = classical_epr(gen)?;
    Ok(EprReport {
        orders: gen.orders().to_vec(),
        qepr_closed: closed.value,
        qepr_numerical: numerical,
        classical_epr: classical,
        detailed_balance: gen.check_detailed_balance(db_tol),
        terms: closed.terms,
    })
}
