//! Epitome families: partial maps from `n × n` patterns to values that a
//! pattern's surroundings are supposed to pin down (plain) or bound from
//! above (ordered).

use std::fmt;

use serde::Serialize;

use crate::pattern::{Letter, Pattern};
use crate::shift::RedBlackSpec;

use super::profile::{profile, profile_leq, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpitomeKind {
    /// The surroundings determine the value.
    Plain,
    /// The surroundings determine the maximum over compatible patterns.
    Ordered,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum EpitomeValue {
    Unit,
    Count(usize),
    Bits(String),
    Profile(Profile),
    Pattern(String),
}

impl fmt::Display for EpitomeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpitomeValue::Unit => f.write_str("()"),
            EpitomeValue::Count(c) => write!(f, "{c}"),
            EpitomeValue::Bits(b) => write!(f, "{b:?}"),
            EpitomeValue::Profile(p) => write!(f, "{p}"),
            EpitomeValue::Pattern(p) => f.write_str(&p.replace('\n', "/")),
        }
    }
}

pub trait EpitomeFamily: Send + Sync {
    fn name(&self) -> &str;
    fn kind(&self) -> EpitomeKind;
    /// `None` where the epitome is undefined.
    fn evaluate(&self, p: &Pattern) -> Option<EpitomeValue>;
    /// Partial order on values; plain families use equality.
    fn leq(&self, a: &EpitomeValue, b: &EpitomeValue) -> bool {
        a == b
    }
}

/// Red-free patterns map to their row-major encoding with black as `0`
/// and white as `1`; patterns with a red cell map to the empty string.
pub fn mirror_epitome(p: &Pattern) -> String {
    let letters = p.letters();
    if letters.contains(&RedBlackSpec::RED) {
        return String::new();
    }
    letters
        .iter()
        .map(|&l| if l == RedBlackSpec::BLACK { '0' } else { '1' })
        .collect()
}

pub struct MirrorFamily;

impl EpitomeFamily for MirrorFamily {
    fn name(&self) -> &str {
        "mirror"
    }

    fn kind(&self) -> EpitomeKind {
        EpitomeKind::Plain
    }

    fn evaluate(&self, p: &Pattern) -> Option<EpitomeValue> {
        Some(EpitomeValue::Bits(mirror_epitome(p)))
    }
}

/// Profiles of simple patterns, ordered coordinate-wise.
pub struct ProfileFamily;

impl EpitomeFamily for ProfileFamily {
    fn name(&self) -> &str {
        "profile"
    }

    fn kind(&self) -> EpitomeKind {
        EpitomeKind::Ordered
    }

    fn evaluate(&self, p: &Pattern) -> Option<EpitomeValue> {
        profile(p).map(EpitomeValue::Profile)
    }

    fn leq(&self, a: &EpitomeValue, b: &EpitomeValue) -> bool {
        match (a, b) {
            (EpitomeValue::Profile(x), EpitomeValue::Profile(y)) => profile_leq(x, y).unwrap_or(false),
            _ => false,
        }
    }
}

/// The pattern itself, defined everywhere.
pub struct IdentityFamily;

impl EpitomeFamily for IdentityFamily {
    fn name(&self) -> &str {
        "identity"
    }

    fn kind(&self) -> EpitomeKind {
        EpitomeKind::Plain
    }

    fn evaluate(&self, p: &Pattern) -> Option<EpitomeValue> {
        Some(EpitomeValue::Pattern(p.to_text()))
    }
}

pub struct ConstantFamily;

impl EpitomeFamily for ConstantFamily {
    fn name(&self) -> &str {
        "constant"
    }

    fn kind(&self) -> EpitomeKind {
        EpitomeKind::Plain
    }

    fn evaluate(&self, _: &Pattern) -> Option<EpitomeValue> {
        Some(EpitomeValue::Unit)
    }
}

/// Number of cells off the border ring holding `letter`.
pub struct InteriorCountFamily {
    pub letter: Letter,
}

impl EpitomeFamily for InteriorCountFamily {
    fn name(&self) -> &str {
        "interior-popcount"
    }

    fn kind(&self) -> EpitomeKind {
        EpitomeKind::Plain
    }

    fn evaluate(&self, p: &Pattern) -> Option<EpitomeValue> {
        let (w, h) = (p.width(), p.height());
        let mut count = 0;
        for y in 1..h.saturating_sub(1) {
            for x in 1..w.saturating_sub(1) {
                if p.get(x, y)? == self.letter {
                    count += 1;
                }
            }
        }
        Some(EpitomeValue::Count(count))
    }
}

pub const FAMILY_NAMES: [&str; 5] = ["profile", "mirror", "identity", "constant", "interior-popcount"];

pub fn family_by_name(name: &str) -> Option<Box<dyn EpitomeFamily>> {
    match name {
        "profile" => Some(Box::new(ProfileFamily)),
        "mirror" => Some(Box::new(MirrorFamily)),
        "identity" => Some(Box::new(IdentityFamily)),
        "constant" => Some(Box::new(ConstantFamily)),
        "interior-popcount" => Some(Box::new(InteriorCountFamily { letter: 1 })),
        _ => None,
    }
}

/// Maximal elements of `values` under `fam.leq`, in sorted order.
pub fn maximal_elements(fam: &dyn EpitomeFamily, values: &[EpitomeValue]) -> Vec<EpitomeValue> {
    let mut out: Vec<EpitomeValue> = values
        .iter()
        .filter(|v| !values.iter().any(|w| w != *v && fam.leq(v, w)))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}
