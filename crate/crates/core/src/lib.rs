//! Group inverses of block matrices, pseudo Schur complements and pseudo
//! principal pivot transforms over dense complex matrices.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line tool live in the companion `pseudopivot-cli` crate.
#![no_std]

extern crate alloc;

pub mod block;
pub mod error;
pub mod gen;
pub mod geninv;
mod lu;
pub mod matrix;
pub mod ppt;
pub mod rng;
mod svd;

pub use block::{
    block_group_inverse, block_group_inverse_complementary, check_hypotheses, complementary_schur, pseudo_schur,
    theorem1_candidate, theorem2_candidate, verify_group_inverse, BlockMatrix, Hypothesis, HypothesisReport,
    Verification,
};
pub use error::{Error, Operand, Result};
pub use gen::{
    both_theorems_instance, random_index1, theorem1_instance, theorem1_violating_instance, theorem2_instance,
    theorem2_violating_instance, InstanceSpec,
};
pub use geninv::{group_inverse, has_index_at_most_one, moore_penrose, range_included, GroupInverseResult};
pub use matrix::{conjugate_transpose, mat_approx_eq, numerical_rank, Matrix, Tolerance, C64};
pub use ppt::{
    cpppt, cpppt_involution_check, exchange_equivalence_check, exchange_equivalence_check_complementary,
    exchange_forward, exchange_sides, exchange_sides_complementary, pppt, pppt_involution_check, ExchangeSides,
    ExchangeVectors,
};
pub use rng::SplitMix64;
