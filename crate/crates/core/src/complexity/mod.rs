//! Time-bounded description complexity on one fixed machine.
//!
//! The machine ([`run_program`]) is total over bit strings and has a literal
//! mode, so every string `x` has a description of length `|x| + 1` that
//! runs in `|x| + 1` steps. Exact values come from exhaustive program
//! enumeration; [`proxy_upper_bound`] is a compressor-based upper bound for
//! sizes where enumeration is out of reach.

mod machine;
mod perm;
mod proxy;
mod search;

pub use machine::{bits_from_str, bits_to_string, run_program, Op, Program, RunOutcome};
pub use perm::{permutation_rank, permutation_unrank, tuple_bits, tuple_threshold};
pub use proxy::{proxy_upper_bound, PROXY_HEADER_BITS};
pub use search::{
    compressible_outputs, ctime, incompressible_distinct_permutations, incompressible_permutations,
    lex_first_incompressible, proxy_incompressible_matrix, proxy_incompressible_permutations, ComplexityResult,
    CompressibleSet, MAX_EXACT_PROGRAM_LEN, PROXY_ATTEMPTS,
};
