//! Epitomes: values attached to finite patterns that the rest of a
//! configuration is supposed to control. Includes profiles of the
//! red-black shift, enforcing windows, finite property checks and border
//! consistency for nearest-neighbor covers.

mod border;
mod check;
mod enforcer;
mod family;
mod profile;

pub use border::{border_epitome_consistency, BorderConflict, BorderReport, Projection};
pub use check::{epitome_property_check, mirror_window, Counterexample, PropertyReport, WindowSource, CHECK_LIMIT};
pub use enforcer::{build_enforcer, verify_enforcer, window_admissible, EnforcerReport, EnforcerWindow, Stripe};
pub use family::{
    family_by_name, maximal_elements, mirror_epitome, ConstantFamily, EpitomeFamily, EpitomeKind, EpitomeValue,
    IdentityFamily, InteriorCountFamily, MirrorFamily, ProfileFamily, FAMILY_NAMES,
};
pub use profile::{profile, profile_leq, simple_pattern, simple_pattern_census, Profile, CENSUS_MAX_SIDE};
