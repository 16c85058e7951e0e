//! Dense complex linear algebra and probability primitives shared by every
//! other module.
//!
//! Index convention: in a tensor product the first factor is the most
//! significant digit of the row/column index. For a database of `k` items of
//! `m` bits, item 0 occupies the most significant `m` bits of the
//! configuration index.

mod entropy;
mod kron;
mod linalg;
mod permutation;
mod random;
mod state;

pub use entropy::{entropy_bits, h2, shannon_entropy};
pub use kron::KronOperator;
pub use linalg::{
    adjoint, adjoint_mul, ensure_finite, ensure_square, exp_i_hermitian, hermitian_eigen, identity,
    inverse_sqrt_psd, is_hadamard, is_unitary, linf, linf_overlap, matrix_power,
    min_hermitian_eigenvalue, tensor_power, tensor_product, unitary_deviation, unitary_log,
    ComplexMatrix, C64, UNITARY_TOL,
};
pub use permutation::{rotate_index, rotation_permutation};
pub use random::{haar_unitary, random_state, SeededRng};
pub use state::{ProbabilityDistribution, QuantumState, NORM_TOL};
