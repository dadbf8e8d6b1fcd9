//! Representations of the generalised Clifford algebra and the operators
//! built from them: Temperley–Lieb and Onsager generators, the additional
//! commuting charges, Hamiltonians, the dual representation and the Clifford
//! transformation relating the two.
//!
//! Generator indices `j` are 1-based and periodic, matching the usual
//! lattice notation; site indices inside [`ClockString`]s are 0-based.
//!
//! [`ClockString`]: crate::ClockString

mod builders;
mod spec;
mod tower;

pub use builders::{
    clifford_transform, commuting_charge, commuting_charge_with, dual_generator, gca_generator,
    hamiltonian, onsager_generator, onsager_generators, tl_generator, ChargeConvention,
};
pub use spec::{Boundary, ModelKind, ModelSpec};
pub use tower::{onsager_tower, OnsagerTower};
