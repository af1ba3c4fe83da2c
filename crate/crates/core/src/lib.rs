//! Circulant quantum Markov semigroups on finite abelian groups.
//!
//! The state space is a product of cyclic groups `Z_p1 x ... x Z_pn`. A
//! probability table `alpha` on the group (with no mass at the identity)
//! defines a bi-stochastic block circulant transition matrix, a completely
//! positive map built from tensor powers of cyclic shifts, and the GKSL
//! generator `L(x) = Phi(x) - x` of a uniformly continuous semigroup.
//! Everything about these semigroups is computable in closed form through
//! the discrete Fourier transform, which this crate exploits end to end:
//!
//! - [`cycles`]: directed cycles, passage matrices and orbit tracing for
//!   permutation matrices.
//! - [`circulant`]: weight tables, Birkhoff coefficients, Fourier spectra
//!   and the closed-form semigroup exponential.
//! - [`qms`]: the CP map and generator, Kraus families, the adjoint with
//!   respect to an invariant state, weighted detailed balance, invariant
//!   subspaces and stationary states.
//! - [`entropy`]: Choi-state dynamics of the forward and reversed
//!   semigroups, quantum and classical entropy production rates, and
//!   separability diagnostics for product weight tables.
//! - [`linalg`]: the dense complex-matrix substrate (Hermitian
//!   eigendecomposition, Pade matrix exponential, relative entropy).
//!
//! The `cqms` binary exposes the analyses over a small JSON schema; see
//! the crate README.

pub mod circulant;
pub mod cycles;
pub mod entropy;
mod error;
pub mod io;
pub mod linalg;
pub mod qms;

pub use circulant::{
    assemble, birkhoff_coefficients, exp_generator, phi_function, spectrum, CycleWeights,
    GeneratorCoefficients, Spectrum,
};
pub use cycles::{cycle_from_permutation, is_irreducible, primary_permutation, Cycle, PassageMatrix};
pub use entropy::{
    backward_choi, classical_epr, entropy_curve, forward_choi, omega_vector, qepr_closed_form,
    qepr_numerical, separability_check, ChoiState, EprReport,
};
pub use error::{Error, Result};
pub use linalg::{
    dft_matrix, eigen_hermitian, matrix_exponential, relative_entropy, tensor_product,
    ComplexMatrix, DensityMatrix, UnitaryMatrix,
};
pub use qms::{
    cycle_representation, make_invariant_state, sample_invariant_state,
    special_representation_check, CirculantGenerator, InvariantStateParams, KrausSet, WeightRatios,
};
