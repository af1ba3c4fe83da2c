//! Circulant completely positive maps and GKSL generators.
//!
//! The CP map of a weight table `alpha` on `G = Z_p x Z_q` conjugates by
//! tensor powers of the cyclic shifts, with the weight of the inverse
//! group element attached to each shift:
//!
//! ```text
//! Phi(x) = sum_g alpha(-g) S_g x S_g*,      L(x) = Phi(x) - x,
//! ```
//!
//! where `S_g e_x = e_{x-g}`. Every offset subspace
//! `B_o = span{ |e_x><e_{x+o}| }` is invariant, and on each of them the map
//! acts as the assembled block circulant matrix through the row-vector
//! isomorphism `|e_x><e_{x+o}| -> e_x`. The generator has no Hamiltonian
//! part: the GKSL form of this class is pure dissipation, and
//! [`CirculantGenerator::hamiltonian`] returns the explicit zero.

use num_complex::Complex64;
use rand::Rng;

use crate::circulant::{CycleWeights, GeneratorCoefficients, GroupLayout};
use crate::cycles::{permutation_orbits, Cycle};
use crate::error::{Error, Result};
use crate::linalg::{eigen_hermitian, ComplexMatrix, DensityMatrix};

/// Residual bound for the invariant-subspace and weighted-balance checks.
const SUBSPACE_TOL: f64 = 1e-10;

/// Smallest singular value below which a Kraus family is declared linearly
/// dependent.
const INDEPENDENCE_TOL: f64 = 1e-8;

/// GKSL generator of a circulant quantum Markov semigroup, determined by
/// its cycle weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantGenerator {
    weights: CycleWeights,
}

/// Kraus family `L_g = alpha(-g)^(1/2) S_g`, labelled by group elements.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
    labels: Vec<Vec<usize>>,
    dim: usize,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>, labels: Vec<Vec<usize>>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidArgument("empty Kraus family".into()));
        }
        let dim = operators[0].require_square()?;
        for op in &operators {
            if op.require_square()? != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: op.rows(),
                });
            }
        }
        assert_eq!(operators.len(), labels.len());
        Ok(Self {
            operators,
            labels,
            dim,
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `sum_k L_k x L_k*`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for op in &self.operators {
            out = &out + &op.matmul(x).matmul(&op.conjugate_transpose());
        }
        Ok(out)
    }

    /// Deviation of `sum_k L_k* L_k` from the identity.
    pub fn completeness_deviation(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for op in &self.operators {
            acc = &acc + &op.conjugate_transpose().matmul(op);
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }
}

/// The shift unitary `S_g`: `(S_g)[x][y] = 1` iff `y = x + g`.
pub fn shift_matrix(layout: &GroupLayout, g: usize) -> ComplexMatrix {
    let dim = layout.dim();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        m.set(x, layout.add(x, g), Complex64::new(1.0, 0.0));
    }
    m
}

/// Ratio table `q(g) = alpha(g) / alpha(-g)` with the limiting conventions
/// `0/0 -> 1` (term absent) and `x/0 -> +inf`.
#[derive(Debug, Clone)]
pub struct WeightRatios {
    orders: Vec<usize>,
    ratios: Vec<f64>,
    residual: Option<f64>,
}

impl WeightRatios {
    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// Ratios indexed by flat group element; the identity slot is 1.
    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    /// Residual of the weighted-balance identity over the matrix-unit
    /// basis; `None` when some ratio is infinite.
    pub fn residual(&self) -> Option<f64> {
        self.residual
    }

    pub fn all_unit(&self, tol: f64) -> bool {
        self.ratios
            .iter()
            .all(|&q| q.is_finite() && (q - 1.0).abs() <= tol)
    }
}

impl CirculantGenerator {
    pub fn new(weights: CycleWeights) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &CycleWeights {
        &self.weights
    }

    pub fn orders(&self) -> &[usize] {
        self.weights.orders()
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    fn layout(&self) -> GroupLayout {
        GroupLayout::new(self.orders()).expect("validated orders")
    }

    pub fn generator_coefficients(&self) -> GeneratorCoefficients {
        self.weights.generator()
    }

    /// The Hamiltonian part of the GKSL form, identically zero for this
    /// class.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        ComplexMatrix::zeros(self.dim(), self.dim())
    }

    pub fn kraus_set(&self) -> KrausSet {
        let layout = self.layout();
        let mut operators = vec![];
        let mut labels = vec![];
        for g in 0..layout.dim() {
            let w = self.weights.alpha()[layout.negate(g)];
            if w > 0.0 {
                operators.push(shift_matrix(&layout, g).scale_real(w.sqrt()));
                labels.push(layout.unflatten(g));
            }
        }
        KrausSet::new(operators, labels).expect("non-empty by weight normalization")
    }

    /// The embedded CP map `Phi(x) = sum_g alpha(-g) S_g x S_g*`.
    pub fn cp_apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let layout = self.layout();
        let dim = layout.dim();
        if x.rows() != dim || x.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(dim, dim);
        for g in 0..dim {
            let w = self.weights.alpha()[layout.negate(g)];
            if w == 0.0 {
                continue;
            }
            for a in 0..dim {
                let ag = layout.add(a, g);
                for b in 0..dim {
                    let v = x.get(ag, layout.add(b, g)) * w;
                    out.add_assign_at(a, b, v);
                }
            }
        }
        Ok(out)
    }

    /// `L(x) = Phi(x) - x`.
    pub fn generator_apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(&self.cp_apply(x)? - x)
    }

    /// The adjoint with respect to any invariant state of this class: the
    /// circulant generator with every weight moved to the inverse group
    /// element.
    pub fn rho_adjoint(&self) -> CirculantGenerator {
        CirculantGenerator::new(self.weights.reversed())
    }

    /// True iff `max |alpha(g) - alpha(-g)| <= tol`.
    pub fn check_detailed_balance(&self, tol: f64) -> bool {
        self.weights.max_asymmetry() <= tol
    }

    pub fn support_is_generating(&self) -> bool {
        self.weights.support_generates()
    }

    /// Weight ratios of the weighted detailed balance structure, together
    /// with the residual of the defining identity when all ratios are
    /// finite.
    pub fn weighted_db(&self) -> Result<WeightRatios> {
        let layout = self.layout();
        let dim = layout.dim();
        let alpha = self.weights.alpha();
        let mut ratios = vec![1.0; dim];
        for g in 1..dim {
            let num = alpha[g];
            let den = alpha[layout.negate(g)];
            ratios[g] = if den > 0.0 {
                num / den
            } else if num == 0.0 {
                1.0
            } else {
                f64::INFINITY
            };
        }
        let residual = if ratios.iter().all(|q| q.is_finite()) {
            Some(self.weighted_db_residual(&ratios)?)
        } else {
            None
        };
        Ok(WeightRatios {
            orders: self.orders().to_vec(),
            ratios,
            residual,
        })
    }

    /// Verify `(Ltilde - L)(x) = sum_g (q(g)-1) L_g* x L_g` on the full
    /// matrix-unit basis and return the largest deviation.
    fn weighted_db_residual(&self, ratios: &[f64]) -> Result<f64> {
        let layout = self.layout();
        let dim = layout.dim();
        let alpha = self.weights.alpha();
        let mut worst: f64 = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                let mut unit = ComplexMatrix::zeros(dim, dim);
                unit.set(a, b, Complex64::new(1.0, 0.0));

                // (Ltilde - L)(x) = sum_h (alpha(-h) - alpha(h)) S_h x S_h*.
                let mut lhs = ComplexMatrix::zeros(dim, dim);
                let mut rhs = ComplexMatrix::zeros(dim, dim);
                for h in 1..dim {
                    let neg_h = layout.negate(h);
                    let dw = alpha[neg_h] - alpha[h];
                    if dw != 0.0 {
                        // S_h E_{a,b} S_h* = E_{a-h, b-h}.
                        lhs.add_assign_at(
                            layout.sub(a, h),
                            layout.sub(b, h),
                            Complex64::new(dw, 0.0),
                        );
                    }
                    // L_h* x L_h = alpha(-h) S_{-h} x S_{-h}* = alpha(-h) E_{a+h, b+h}.
                    let w = (ratios[h] - 1.0) * alpha[neg_h];
                    if w != 0.0 {
                        rhs.add_assign_at(
                            layout.add(a, h),
                            layout.add(b, h),
                            Complex64::new(w, 0.0),
                        );
                    }
                }
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
        Ok(worst)
    }

    /// The block circulant matrix realizing the CP map on the offset
    /// subspace `B_o`, via `|e_x><e_{x+o}| -> e_x` and row-vector action.
    /// The result is the same for every offset.
    pub fn subspace_action(&self, offset: &[usize]) -> Result<ComplexMatrix> {
        let layout = self.layout();
        let off = layout.flatten(offset)?;
        let dim = layout.dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for x in 0..dim {
            let mut unit = ComplexMatrix::zeros(dim, dim);
            unit.set(x, layout.add(x, off), Complex64::new(1.0, 0.0));
            let image = self.cp_apply(&unit)?;
            for y in 0..dim {
                m.set(x, y, image.get(y, layout.add(y, off)));
            }
        }
        Ok(m)
    }

    /// Verify that every offset subspace is invariant under the CP map and
    /// that distinct subspaces stay Hilbert-Schmidt orthogonal.
    pub fn check_invariant_subspaces(&self) -> Result<bool> {
        let layout = self.layout();
        check_invariant_subspaces_kraus(&layout, &self.kraus_set())
    }
}

/// Subspace-invariance check for an arbitrary Kraus family on the same
/// indexing: used both for circulant families and as a negative control
/// with corrupted operators.
pub fn check_invariant_subspaces_kraus(layout: &GroupLayout, kraus: &KrausSet) -> Result<bool> {
    let dim = layout.dim();
    if kraus.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: kraus.dim(),
        });
    }
    // Matrix units in distinct offset classes are HS-orthogonal.
    for x in 0..dim {
        for o in 0..dim {
            let mut e1 = ComplexMatrix::zeros(dim, dim);
            e1.set(x, layout.add(x, o), Complex64::new(1.0, 0.0));
            for y in 0..dim {
                for o2 in 0..dim {
                    if o2 == o {
                        continue;
                    }
                    let mut e2 = ComplexMatrix::zeros(dim, dim);
                    e2.set(y, layout.add(y, o2), Complex64::new(1.0, 0.0));
                    if e1.hs_inner(&e2).norm() > SUBSPACE_TOL {
                        return Ok(false);
                    }
                }
            }
        }
    }
    // Images of units keep all their mass at the same offset.
    for o in 0..dim {
        for x in 0..dim {
            let mut unit = ComplexMatrix::zeros(dim, dim);
            unit.set(x, layout.add(x, o), Complex64::new(1.0, 0.0));
            let image = kraus.apply(&unit)?;
            let mut leak = 0.0;
            for a in 0..dim {
                for b in 0..dim {
                    if layout.sub(b, a) != o {
                        leak += image.get(a, b).norm_sqr();
                    }
                }
            }
            if leak.sqrt() > SUBSPACE_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Diagnostics for a special GKSL representation: per-operator traces
/// against the state and linear independence of the family extended by the
/// identity.
#[derive(Debug, Clone)]
pub struct SpecialRepReport {
    pub trace_residuals: Vec<f64>,
    pub min_singular_value: f64,
    pub traces_vanish: bool,
    pub independent: bool,
}

pub fn special_representation_check(
    kraus: &KrausSet,
    rho: &DensityMatrix,
) -> Result<SpecialRepReport> {
    let dim = kraus.dim();
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: rho.dim(),
        });
    }
    let trace_residuals: Vec<f64> = kraus
        .operators()
        .iter()
        .map(|l| rho.matrix().matmul(l).trace().norm())
        .collect();
    let traces_vanish = trace_residuals.iter().all(|&r| r <= SUBSPACE_TOL);

    // Smallest singular value of the vectorized family {1, L_1, ...} from
    // the Gram matrix of Hilbert-Schmidt inner products.
    let mut family: Vec<&ComplexMatrix> = vec![];
    let ident = ComplexMatrix::identity(dim);
    family.push(&ident);
    family.extend(kraus.operators().iter());
    let n = family.len();
    let mut gram = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gram.set(i, j, family[i].hs_inner(family[j]));
        }
    }
    let eig = eigen_hermitian(&gram)?;
    let min_singular_value = eig.values[0].max(0.0).sqrt();

    Ok(SpecialRepReport {
        trace_residuals,
        min_singular_value,
        traces_vanish,
        independent: min_singular_value > INDEPENDENCE_TOL,
    })
}

/// Coefficients of an invariant state in the shift basis:
/// `rho = sum_g r(g) S_g` with `r(0) = 1/dim` and `r(-g) = conj(r(g))`.
#[derive(Debug, Clone)]
pub struct InvariantStateParams {
    layout: GroupLayout,
    coeffs: Vec<Complex64>,
}

impl InvariantStateParams {
    pub fn new(orders: &[usize], coeffs: Vec<Complex64>) -> Result<Self> {
        let layout = GroupLayout::new(orders)?;
        let dim = layout.dim();
        if coeffs.len() != dim {
            return Err(Error::InvalidStateParams(format!(
                "expected {dim} coefficients, got {}",
                coeffs.len()
            )));
        }
        let expected = 1.0 / dim as f64;
        if (coeffs[0] - Complex64::new(expected, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidStateParams(format!(
                "identity coefficient must be 1/{dim}, got {}",
                coeffs[0]
            )));
        }
        for g in 0..dim {
            let dev = (coeffs[layout.negate(g)] - coeffs[g].conj()).norm();
            if dev > 1e-12 {
                return Err(Error::InvalidStateParams(format!(
                    "Hermiticity violated at {:?} by {dev:.3e}",
                    layout.unflatten(g)
                )));
            }
        }
        Ok(Self { layout, coeffs })
    }

    /// Coefficient table with everything but the identity set to zero: the
    /// uniform state.
    pub fn uniform(orders: &[usize]) -> Result<Self> {
        let layout = GroupLayout::new(orders)?;
        let dim = layout.dim();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        coeffs[0] = Complex64::new(1.0 / dim as f64, 0.0);
        Self::new(orders, coeffs)
    }

    pub fn orders(&self) -> &[usize] {
        self.layout.orders()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Fourier eigenvalues `1/dim + sum_g r(g) conj(omega)^(g.k)`; these
    /// are the eigenvalues of the assembled state.
    pub fn fourier_eigenvalues(&self) -> Vec<f64> {
        let dim = self.layout.dim();
        (0..dim)
            .map(|k| {
                let z: Complex64 = (0..dim)
                    .map(|g| self.coeffs[g] * self.layout.character(g, k).conj())
                    .sum();
                z.re
            })
            .collect()
    }

    pub fn assemble_state_matrix(&self) -> ComplexMatrix {
        let dim = self.layout.dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for g in 0..dim {
            let c = self.coeffs[g];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for x in 0..dim {
                m.add_assign_at(x, self.layout.add(x, g), c);
            }
        }
        m
    }
}

/// Build the stationary state of the parameter table, rejecting parameter
/// sets whose Fourier eigenvalues dip below `-1e-12`.
pub fn make_invariant_state(
    gen: &CirculantGenerator,
    params: &InvariantStateParams,
) -> Result<DensityMatrix> {
    if params.orders() != gen.orders() {
        return Err(Error::InvalidStateParams(format!(
            "orders {:?} do not match generator orders {:?}",
            params.orders(),
            gen.orders()
        )));
    }
    let eigenvalues = params.fourier_eigenvalues();
    for (k, &v) in eigenvalues.iter().enumerate() {
        if v < -1e-12 {
            return Err(Error::InvalidStateParams(format!(
                "Fourier eigenvalue {v:.3e} at frequency {:?} is negative",
                params.layout.unflatten(k)
            )));
        }
    }
    let rho = DensityMatrix::new(params.assemble_state_matrix())?;
    for g in [gen.clone(), gen.rho_adjoint()] {
        let residual = g.generator_apply(rho.matrix())?.max_abs();
        if residual > SUBSPACE_TOL {
            return Err(Error::InternalConsistency(format!(
                "constructed state is not stationary (residual {residual:.3e})"
            )));
        }
    }
    Ok(rho)
}

/// Sample a stationary state by drawing its Fourier eigenvalues from the
/// uniform simplex and inverse transforming; positivity is automatic.
pub fn sample_invariant_state<R: Rng>(
    gen: &CirculantGenerator,
    rng: &mut R,
) -> Result<(InvariantStateParams, DensityMatrix)> {
    let layout = GroupLayout::new(gen.orders())?;
    let dim = layout.dim();
    let mut eigenvalues: Vec<f64> = (0..dim)
        .map(|_| -rng.gen::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = eigenvalues.iter().sum();
    for v in eigenvalues.iter_mut() {
        *v /= total;
    }
    let coeffs: Vec<Complex64> = (0..dim)
        .map(|g| {
            let z: Complex64 = (0..dim)
                .map(|k| layout.character(g, k) * eigenvalues[k])
                .sum();
            z / dim as f64
        })
        .collect();
    let params = InvariantStateParams::new(gen.orders(), coeffs)?;
    let rho = make_invariant_state(gen, &params)?;
    Ok((params, rho))
}

/// Cycle structure of one Kraus operator: either the unique maximal cycle
/// of an irreducible permutation, or the orbit decomposition of a
/// reducible one.
#[derive(Debug, Clone, PartialEq)]
pub enum CycleStructure {
    Maximal(Cycle),
    Orbits(Vec<Cycle>),
}

/// One term of a cycle representation: a weight and the cycle(s) of the
/// scaled permutation behind it.
#[derive(Debug, Clone)]
pub struct CycleTerm {
    pub weight: f64,
    pub structure: CycleStructure,
}

/// Read a Kraus family as a cycle representation: every operator must be a
/// nonnegative scalar multiple of a permutation matrix.
pub fn cycle_representation(kraus: &KrausSet) -> Result<Vec<CycleTerm>> {
    let mut terms = vec![];
    for (index, op) in kraus.operators().iter().enumerate() {
        let dim = op.rows();
        let scale = op.max_abs();
        if scale <= 0.0 {
            return Err(Error::NotCycleRepresentation { index });
        }
        let mut pattern = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = op.get(i, j);
                if z.im.abs() > 1e-10 * scale || z.re < -1e-10 * scale {
                    return Err(Error::NotCycleRepresentation { index });
                }
                if (z.re - scale).abs() <= 1e-10 * scale {
                    pattern.set(i, j, Complex64::new(1.0, 0.0));
                } else if z.re.abs() > 1e-10 * scale {
                    return Err(Error::NotCycleRepresentation { index });
                }
            }
        }
        let orbits = permutation_orbits(&pattern)
            .map_err(|_| Error::NotCycleRepresentation { index })?;
        let structure = if orbits.len() == 1 {
            CycleStructure::Maximal(orbits.into_iter().next().unwrap())
        } else {
            CycleStructure::Orbits(orbits)
        };
        terms.push(CycleTerm {
            weight: scale * scale,
            structure,
        });
    }
    Ok(terms)
}
