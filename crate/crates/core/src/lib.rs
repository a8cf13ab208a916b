//! Steady-state uniqueness for finite-dimensional Lindblad (LGKS) master
//! equations.
//!
//! [`criteria`] implements the classical sufficient conditions (the GKS
//! c-matrix rank test, the self-adjoint span tests, the commutant test) and
//! the ladder-operator criteria for single and composite systems. Every
//! verdict can be cross-checked against the dense Liouvillian oracle in
//! [`superop`]; [`audit`](criteria::audit) does both and reports agreement.

pub mod algebra;
pub mod criteria;
pub mod model;
pub mod operator;
pub mod random;
pub mod superop;
pub mod zoo;

pub use model::{Channel, CompositeLayout, LgksModel, ModelError};
pub use operator::{ComplexMatrix, ComplexVector, LinalgError, C64, DEFAULT_TOL};
