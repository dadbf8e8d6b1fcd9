//! Dense complex matrices, tensor-slot embeddings and the handful of
//! factorisations the verifier needs.

mod decomp;
mod eigen;
mod matrix;
mod tensor;

pub use decomp::{inverse, null_space, singular_values, NULL_SPACE_TOLERANCE};
pub use eigen::{eigenvalues, hermitian_eigenvalues, hermitian_eigs, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use tensor::{
    apply_local, clock_matrix, embed, permutation_operator, to_dense, to_dense_with_cap, DENSE_CAP,
};
