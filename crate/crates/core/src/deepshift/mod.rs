//! Hierarchical standard-block families.
//!
//! Level 0 holds constant squares (two-block mode) or the first `ℓ_0`
//! binary matrices (multi-block mode). Each higher level tiles an
//! `n_i × n_i` grid with lower blocks, choosing the arrangement as the
//! lexicographically first one of high time-bounded complexity. The shift
//! is the closure: every pattern occurring in a 2×2 array of same-level
//! standard blocks.

mod archive;
mod code;
mod family;
mod member;
mod params;

pub use archive::{read_manifest, verify_archive, write_archive, ArchiveReport, Manifest, MANIFEST};
pub use code::{decode_two_part, two_part_code, CodeReport, TwoPartCode};
pub use family::{
    block_name, extract_ids, extract_r, permutation_ranks, substitute, BlockStore, Level, LevelWitness,
    StandardBlockFamily,
};
pub use member::{decision_level, member, reconstruct_block, reconstruct_from_member, MemberWitness};
pub use params::{
    schedule_params, BudgetOverride, DeepConfig, DeepParams, LevelBudgets, Mode, Oracle, FLAG_ARRANGEMENTS,
    FLAG_NON_THEOREM, FLAG_PROXY,
};
