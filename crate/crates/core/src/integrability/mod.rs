//! Lax operators, R matrices, transfer matrices and the conserved charges
//! they generate, with Yang–Baxter, free-fermion and limit checks.
//!
//! Layout conventions: a Lax operator acts on `aux ⊗ phys` with the
//! auxiliary factor most significant; an R matrix acts on `aux ⊗ aux`.
//! The monodromy is `L_{a,1} ⋯ L_{a,L}` and `T = Tr_a M`.

mod checks;
mod lax;
mod limits;
mod rmatrix;
mod transfer;

pub use checks::{
    check_charges, check_free_fermion, check_transfer_commutation, check_transfer_hamiltonian, check_ybe,
    relative_residual, FreeFermionSource, YbeForm,
};
pub use lax::{
    eight_vertex_full_weights, eight_vertex_weights, lax_8v, lax_8v_full, lax_fendley, lax_fendley_full,
    lax_for_model, EightVertexWeights, Lax, LaxOperator, Parametrization,
};
pub use limits::{check_inverse_relation, check_r_limits};
pub use rmatrix::{
    difference_form_deviation, inverse_relation_scalar, r_8v, r_8v_full, r_fendley, r_fendley_printed,
    swap_factors, EightVertexFullR, EightVertexR, FendleyR, FnR, RMatrixSpec,
};
pub use transfer::{charge, finite_difference_derivatives, monodromy, transfer, transfer_derivatives};
