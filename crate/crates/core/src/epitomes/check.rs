//! Finite checks of the epitome property: for a pattern `P`, some
//! surrounding `R` must be compatible with `P` and force every other
//! compatible pattern's value to equal (plain) or stay below (ordered)
//! the value of `P`.
//!
//! The surroundings of the definition cover the whole rest of the plane.
//! Here they are replaced by a finite window and "compatible" means the
//! window is locally admissible; reports say which window was used.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::{Alphabet, Canvas, Letter, Pattern};
use crate::shift::{Matcher, RedBlackSpec, ShiftSpec};

use super::enforcer::build_enforcer;
use super::family::{maximal_elements, EpitomeFamily, EpitomeKind, EpitomeValue};
use super::profile::profile;

/// Where candidate surroundings come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum WindowSource {
    /// Every coloring of the ring of width `margin` around the slot.
    Annulus { margin: usize },
    /// The enforcing window built from the pattern's profile (red-black).
    Enforcer,
    /// A red row directly below the slot and the slot's mirror image below
    /// it, as wide as the slot (mirror shift, red-free patterns).
    Mirror,
}

impl WindowSource {
    fn describe(&self) -> String {
        match self {
            WindowSource::Annulus { margin } => {
                format!("all colorings of the width-{margin} annulus; the rest of the plane is not modeled")
            }
            WindowSource::Enforcer => "the 3n×4n enforcing window; cells outside it are taken white".to_string(),
            WindowSource::Mirror => "red row below the slot plus the mirrored slot, n columns wide".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub pattern: String,
    pub value: String,
    /// The surrounding examined (the first one compatible with `pattern`).
    pub window: Option<String>,
    /// A pattern sharing that surrounding whose value breaks the property.
    pub other: Option<String>,
    pub other_value: Option<String>,
    /// Maximal values among the patterns compatible with that surrounding.
    pub maximal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub spec: String,
    pub family: String,
    pub kind: EpitomeKind,
    pub n: usize,
    pub window: WindowSource,
    pub approximation: String,
    /// Patterns with a defined value that some surrounding accepts.
    pub patterns_checked: usize,
    pub holding: usize,
    /// Defined patterns no surrounding accepts, or outside the window
    /// construction's domain.
    pub skipped: usize,
    pub failures: Vec<Counterexample>,
    pub pass: bool,
}

/// Enumeration ceiling for patterns and annulus colorings.
pub const CHECK_LIMIT: u128 = 1 << 22;

fn decode(mut code: u64, base: u64, out: &mut [Letter]) {
    for c in out.iter_mut().rev() {
        *c = (code % base) as Letter;
        code /= base;
    }
}

fn count(base: usize, cells: usize, what: &str) -> Result<u64> {
    match (base as u128).checked_pow(cells as u32) {
        Some(t) if t <= CHECK_LIMIT => Ok(t as u64),
        _ => Err(Error::Infeasible(format!(
            "{base}^{cells} {what} exceed the enumeration limit {CHECK_LIMIT}"
        ))),
    }
}

fn all_square_patterns(alphabet: &Alphabet, n: usize) -> Result<Vec<Pattern>> {
    let total = count(alphabet.len(), n * n, "slot patterns")?;
    let mut buf = vec![0; n * n];
    (0..total)
        .map(|code| {
            decode(code, alphabet.len() as u64, &mut buf);
            Pattern::from_letters(alphabet, n, n, buf.iter().copied())
        })
        .collect()
}

fn satisfied(fam: &dyn EpitomeFamily, other: &EpitomeValue, own: &EpitomeValue) -> bool {
    match fam.kind() {
        EpitomeKind::Plain => other == own,
        EpitomeKind::Ordered => fam.leq(other, own),
    }
}

/// Check the property for every `n × n` pattern with a defined value.
pub fn epitome_property_check(
    spec: &dyn ShiftSpec,
    fam: &dyn EpitomeFamily,
    n: usize,
    window: WindowSource,
) -> Result<PropertyReport> {
    let patterns = all_square_patterns(spec.alphabet(), n)?;
    let defined: Vec<(Pattern, EpitomeValue)> = patterns
        .into_iter()
        .filter_map(|p| fam.evaluate(&p).map(|v| (p, v)))
        .collect();
    let mut report = PropertyReport {
        spec: spec.name().to_string(),
        family: fam.name().to_string(),
        kind: fam.kind(),
        n,
        window,
        approximation: window.describe(),
        patterns_checked: 0,
        holding: 0,
        skipped: 0,
        failures: Vec::new(),
        pass: false,
    };
    match window {
        WindowSource::Annulus { margin } => annulus_check(spec, fam, n, margin, &defined, &mut report)?,
        WindowSource::Enforcer => {
            if *spec.alphabet() != Alphabet::black_white_red() {
                return Err(Error::Invalid("enforcer windows need the red-black alphabet".into()));
            }
            constructed_check(spec, fam, &defined, &mut report, |p| {
                profile(p).map(|prof| {
                    let w = build_enforcer(&prof);
                    (w.window, w.slot)
                })
            })?
        }
        WindowSource::Mirror => {
            if *spec.alphabet() != Alphabet::black_white_red() {
                return Err(Error::Invalid(
                    "mirror windows need the black/white/red alphabet".into(),
                ));
            }
            constructed_check(spec, fam, &defined, &mut report, mirror_window)?
        }
    }
    report.pass = report.failures.is_empty() && report.patterns_checked > 0;
    Ok(report)
}

/// Slot on top, then a red row, then the slot reflected.
pub fn mirror_window(p: &Pattern) -> Option<(Pattern, (usize, usize))> {
    let n = p.width();
    if p.letters().contains(&RedBlackSpec::RED) {
        return None;
    }
    let mut c = Canvas::empty(n, 2 * n + 1);
    for x in 0..n {
        c.set(x, n, Some(RedBlackSpec::RED));
        for y in 0..n {
            c.set(x, 2 * n - y, p.get(x, y));
        }
    }
    Some((Pattern::from_canvas(p.alphabet(), c), (0, 0)))
}

fn place(window: &Canvas, slot: (usize, usize), p: &Pattern) -> Canvas {
    let mut c = window.clone();
    c.blit(p.canvas(), slot.0, slot.1);
    c
}

fn constructed_check(
    spec: &dyn ShiftSpec,
    fam: &dyn EpitomeFamily,
    defined: &[(Pattern, EpitomeValue)],
    report: &mut PropertyReport,
    build: impl Fn(&Pattern) -> Option<(Pattern, (usize, usize))> + Sync,
) -> Result<()> {
    let results: Vec<Option<(bool, Option<Counterexample>)>> = defined
        .par_iter()
        .map(|(p, v)| {
            let (window, slot) = build(p)?;
            let matcher = spec.matcher(window.extent());
            if !matcher.is_admissible(&place(window.canvas(), slot, p)) {
                return Some((
                    false,
                    Some(Counterexample {
                        pattern: p.to_text(),
                        value: v.to_string(),
                        window: Some(window.to_text()),
                        other: None,
                        other_value: None,
                        maximal: Vec::new(),
                    }),
                ));
            }
            let compatible: Vec<&(Pattern, EpitomeValue)> = defined
                .iter()
                .filter(|(q, _)| matcher.is_admissible(&place(window.canvas(), slot, q)))
                .collect();
            let bad = compatible.iter().find(|(_, w)| !satisfied(fam, w, v));
            Some(match bad {
                None => (true, None),
                Some((q, w)) => {
                    let values: Vec<EpitomeValue> = compatible.iter().map(|(_, w)| w.clone()).collect();
                    (
                        false,
                        Some(Counterexample {
                            pattern: p.to_text(),
                            value: v.to_string(),
                            window: Some(window.to_text()),
                            other: Some(q.to_text()),
                            other_value: Some(w.to_string()),
                            maximal: maximal_elements(fam, &values).iter().map(|m| m.to_string()).collect(),
                        }),
                    )
                }
            })
        })
        .collect();
    for r in results {
        match r {
            None => report.skipped += 1,
            Some((ok, cx)) => {
                report.patterns_checked += 1;
                if ok {
                    report.holding += 1;
                }
                report.failures.extend(cx);
            }
        }
    }
    Ok(())
}

/// Per-pattern outcome while scanning annulus colorings.
#[derive(Clone)]
struct Scan {
    holds: bool,
    /// Smallest annulus code compatible with the pattern, with the index of
    /// a pattern breaking the property there.
    first: Option<(u64, usize)>,
}

fn merge(mut a: Vec<Scan>, b: Vec<Scan>) -> Vec<Scan> {
    for (x, y) in a.iter_mut().zip(b) {
        x.holds |= y.holds;
        x.first = match (x.first, y.first) {
            (Some(p), Some(q)) => Some(if p.0 <= q.0 { p } else { q }),
            (p, q) => p.or(q),
        };
    }
    a
}

fn annulus_check(
    spec: &dyn ShiftSpec,
    fam: &dyn EpitomeFamily,
    n: usize,
    margin: usize,
    defined: &[(Pattern, EpitomeValue)],
    report: &mut PropertyReport,
) -> Result<()> {
    let side = n + 2 * margin;
    let ring: Vec<(usize, usize)> = (0..side)
        .flat_map(|y| (0..side).map(move |x| (x, y)))
        .filter(|&(x, y)| x < margin || y < margin || x >= margin + n || y >= margin + n)
        .collect();
    let base = spec.alphabet().len() as u64;
    let total = count(spec.alphabet().len(), ring.len(), "annulus colorings")?;
    let matcher = spec.matcher(side);
    let empty = vec![
        Scan {
            holds: false,
            first: None,
        };
        defined.len()
    ];
    let scans = (0..total)
        .into_par_iter()
        .fold(
            || (empty.clone(), vec![0 as Letter; ring.len()]),
            |(mut acc, mut buf), code| {
                decode(code, base, &mut buf);
                let mut host = Canvas::empty(side, side);
                for (&(x, y), &l) in ring.iter().zip(&buf) {
                    host.set(x, y, Some(l));
                }
                let compat = compatible_set(matcher.as_ref(), &host, margin, defined);
                for &i in &compat {
                    let violator = compat
                        .iter()
                        .copied()
                        .find(|&j| !satisfied(fam, &defined[j].1, &defined[i].1));
                    match violator {
                        None => acc[i].holds = true,
                        Some(j) => {
                            if acc[i].first.is_none_or(|(c, _)| code < c) {
                                acc[i].first = Some((code, j));
                            }
                        }
                    }
                }
                (acc, buf)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(|| empty.clone(), merge);
    for (i, s) in scans.iter().enumerate() {
        if s.holds {
            report.patterns_checked += 1;
            report.holding += 1;
            continue;
        }
        let Some((code, j)) = s.first else {
            // no surrounding in the annulus accepts this pattern
            report.skipped += 1;
            continue;
        };
        report.patterns_checked += 1;
        let mut buf = vec![0 as Letter; ring.len()];
        decode(code, base, &mut buf);
        let mut host = Canvas::empty(side, side);
        for (&(x, y), &l) in ring.iter().zip(&buf) {
            host.set(x, y, Some(l));
        }
        let compat = compatible_set(matcher.as_ref(), &host, margin, defined);
        let values: Vec<EpitomeValue> = compat.iter().map(|&k| defined[k].1.clone()).collect();
        report.failures.push(Counterexample {
            pattern: defined[i].0.to_text(),
            value: defined[i].1.to_string(),
            window: Some(Pattern::from_canvas(spec.alphabet(), host).to_text()),
            other: Some(defined[j].0.to_text()),
            other_value: Some(defined[j].1.to_string()),
            maximal: maximal_elements(fam, &values).iter().map(|m| m.to_string()).collect(),
        });
    }
    Ok(())
}

fn compatible_set(
    matcher: &dyn Matcher,
    host: &Canvas,
    margin: usize,
    defined: &[(Pattern, EpitomeValue)],
) -> Vec<usize> {
    if !matcher.is_admissible(host) {
        return Vec::new();
    }
    defined
        .iter()
        .enumerate()
        .filter(|(_, (p, _))| matcher.is_admissible(&place(host, (margin, margin), p)))
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epitomes::family::{ConstantFamily, IdentityFamily, MirrorFamily, ProfileFamily};
    use crate::shift::{FiniteSpec, MirrorSpec};

    #[test]
    fn red_black_profiles_hold_via_enforcers() {
        let spec = RedBlackSpec::default();
        for n in 2..=3 {
            let r = epitome_property_check(&spec, &ProfileFamily, n, WindowSource::Enforcer).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.patterns_checked, (n + 1).pow(n as u32));
        }
    }

    #[test]
    fn mirror_holds() {
        let r = epitome_property_check(&MirrorSpec::default(), &MirrorFamily, 2, WindowSource::Mirror).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.patterns_checked, 16);
    }

    #[test]
    fn identity_on_red_black_fails() {
        let spec = RedBlackSpec::default();
        let r = epitome_property_check(&spec, &IdentityFamily, 1, WindowSource::Annulus { margin: 1 }).unwrap();
        assert!(!r.pass);
        let cx = &r.failures[0];
        assert_eq!(cx.pattern, "1 1 BWR\nB\n");
        assert_eq!(cx.other.as_deref(), Some("1 1 BWR\nW\n"));
    }

    #[test]
    fn constant_family_holds_on_annulus() {
        let hs = FiniteSpec::hard_square();
        let r = epitome_property_check(&hs, &ConstantFamily, 2, WindowSource::Annulus { margin: 1 }).unwrap();
        assert!(r.pass);
        assert_eq!(r.patterns_checked, 7);
    }
}
