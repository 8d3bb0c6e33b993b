//! Workbench for two-dimensional symbolic dynamics.
//!
//! * [`pattern`] and [`shift`]: alphabets, finite patterns, forbidden-pattern
//!   shift specifications.
//! * [`admissibility`]: local checks, margin-bounded extension, lex-first
//!   completions, block counting.
//! * [`complexity`]: a fixed description machine and exact time-bounded
//!   complexity by program enumeration.
//! * [`deepshift`]: hierarchical standard-block families and their closure.
//! * [`lowcfg`]: recursive lex-first squares for nearest-neighbor SFTs.
//! * [`epitomes`]: profile/mirror epitomes, enforcer windows, border checks.

pub mod admissibility;
pub mod complexity;
pub mod deepshift;
pub mod epitomes;
pub mod error;
pub mod lowcfg;
pub mod pattern;
pub mod shift;

pub use error::{Error, Result};
pub use pattern::{Alphabet, Canvas, Cell, Letter, Pattern, Rect};
pub use shift::{contains_forbidden, Occurrence, ShiftSpec};

/// Version string embedded in reports and archive manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
