//! Border consistency: in a nearest-neighbor cover, the border ring of an
//! `n × n` square determines which interiors fit, so an epitome that is
//! realized through the cover should be a function of the ring. The
//! ring costs `(4n − 4) · ceil(log₂|Σ′|)` bits.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::admissibility::admissible_patterns;
use crate::error::{Error, Result};
use crate::lowcfg::{ring_of, NNSpec};
use crate::pattern::{ceil_log2, Alphabet, Canvas, Letter, Pattern};

use super::family::{maximal_elements, EpitomeFamily, EpitomeKind, EpitomeValue};

/// Letter-to-letter map from a cover alphabet onto a target alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    target: Alphabet,
    map: Vec<Letter>,
}

impl Projection {
    pub fn new(cover: &Alphabet, target: Alphabet, map: Vec<Letter>) -> Result<Self> {
        if map.len() != cover.len() || map.iter().any(|&l| usize::from(l) >= target.len()) {
            return Err(Error::Invalid(format!(
                "projection needs one target letter per cover letter ({} of {})",
                map.len(),
                cover.len()
            )));
        }
        Ok(Projection { target, map })
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Projection {
            target: alphabet.clone(),
            map: (0..alphabet.len() as Letter).collect(),
        }
    }

    /// Parse `a=x,b=y,...` (cover letter `=` target letter, every cover
    /// letter once).
    pub fn parse(cover: &Alphabet, target: Alphabet, text: &str) -> Result<Self> {
        let mut map = vec![None; cover.len()];
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let mut chars = item.chars();
            let (Some(a), Some('='), Some(b), None) = (chars.next(), chars.next(), chars.next(), chars.next()) else {
                return Err(Error::Parse(format!("bad projection entry {item:?}")));
            };
            let from = cover
                .index_of(a)
                .ok_or_else(|| Error::Parse(format!("{a:?} is not a cover letter")))?;
            let to = target
                .index_of(b)
                .ok_or_else(|| Error::Parse(format!("{b:?} is not a target letter")))?;
            map[usize::from(from)] = Some(to);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::Parse(format!("no image for {:?}", cover.char_of(i as Letter)))))
            .collect::<Result<Vec<_>>>()?;
        Projection::new(cover, target, map)
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn apply(&self, p: &Pattern) -> Pattern {
        let mut c = Canvas::empty(p.width(), p.height());
        for y in 0..p.height() {
            for x in 0..p.width() {
                c.set(x, y, p.get(x, y).map(|l| self.map[usize::from(l)]));
            }
        }
        Pattern::from_canvas(&self.target, c).with_origin(p.origin())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorderConflict {
    pub ring: String,
    pub values: Vec<String>,
    /// Maximal values in the group (ordered families).
    pub maximal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorderReport {
    pub spec: String,
    pub family: String,
    pub kind: EpitomeKind,
    pub n: usize,
    pub cover_patterns: usize,
    /// Rings with at least one defined value.
    pub rings: usize,
    pub consistent: usize,
    pub border_bits: usize,
    pub conflicts: Vec<BorderConflict>,
    pub pass: bool,
}

/// Group the `margin`-extendable `n × n` cover patterns by border ring and
/// check that each ring pins down the epitome of the projected pattern.
pub fn border_epitome_consistency(
    cover: &NNSpec,
    projection: &Projection,
    fam: &dyn EpitomeFamily,
    n: usize,
    margin: usize,
) -> Result<BorderReport> {
    if n < 2 {
        return Err(Error::Invalid("border consistency needs n >= 2".into()));
    }
    let alphabet = cover.alphabet();
    let patterns = admissible_patterns(cover.spec(), n, margin)?;
    let mut groups: BTreeMap<String, Vec<EpitomeValue>> = BTreeMap::new();
    for p in &patterns {
        let ring = ring_of(alphabet, p.canvas(), 0, 0, n).to_text();
        let values = groups.entry(ring).or_default();
        if let Some(v) = fam.evaluate(&projection.apply(p)) {
            values.push(v);
        }
    }
    let mut report = BorderReport {
        spec: cover.spec().name().to_string(),
        family: fam.name().to_string(),
        kind: fam.kind(),
        n,
        cover_patterns: patterns.len(),
        rings: 0,
        consistent: 0,
        border_bits: (4 * n - 4) * ceil_log2(alphabet.len() as u128) as usize,
        conflicts: Vec::new(),
        pass: false,
    };
    for (ring, mut values) in groups {
        if values.is_empty() {
            continue;
        }
        report.rings += 1;
        values.sort();
        values.dedup();
        let maximal = maximal_elements(fam, &values);
        let ok = match fam.kind() {
            EpitomeKind::Plain => values.len() == 1,
            EpitomeKind::Ordered => maximal.len() == 1,
        };
        if ok {
            report.consistent += 1;
        } else {
            report.conflicts.push(BorderConflict {
                ring,
                values: values.iter().map(|v| v.to_string()).collect(),
                maximal: maximal.iter().map(|v| v.to_string()).collect(),
            });
        }
    }
    report.pass = report.conflicts.is_empty() && report.rings > 0;
    Ok(report)
}
