//! The kernel class C_α, the grid supremum A_α and the intrinsic square
//! functions built from it.

pub mod dictionary;
pub mod field;
pub mod kernel;
pub mod operators;

pub use dictionary::{refined_lower_bound, Dictionary, RefinedBound, DEFAULT_SEED as DEFAULT_DICTIONARY_SEED};
pub use field::{a_alpha_field, kernel_lp_max, objective, AField, CommutatorField, Supremum, DEFAULT_DICTIONARY_SIZE};
pub use kernel::{kernel_decay_check, KernelGrid, KernelLp, KernelOptimum};
pub use operators::{ConeParams, Intrinsic, OperatorKind, DEFAULT_WEIGHT_FLOOR};
