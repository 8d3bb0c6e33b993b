//! Neighborhoods that enforce a maximal profile.
//!
//! Lines are numbered bottom-up from the slot's bottom row (line 1) to the
//! window's top row (line `3n`); in top-down window coordinates line `i`
//! is row `3n − i`, and slot row `j` (profile index `j`) is line `n − j`.
//!
//! Line `i ≤ n` carries a black run of total length `3n − 2i + 1` ending at
//! the last black cell of the slot row. Line `3n − i + 1` carries a red run
//! of length `3n − 2i + 2` starting above the black run's first cell. The
//! two runs are the top and bottom of a square of side `3n − 2i + 2` that
//! misses being forbidden by exactly one black cell: one more black cell in
//! slot line `i` completes it.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::{Alphabet, Canvas, Letter, Pattern};
use crate::shift::{Matcher, RedBlackSpec, ShiftSpec};

use super::profile::{profile_leq, profile_of_letters, simple_pattern, Profile};

const BLACK: Letter = RedBlackSpec::BLACK;
const WHITE: Letter = RedBlackSpec::WHITE;
const RED: Letter = RedBlackSpec::RED;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stripe {
    /// Bottom-up line number.
    pub line: usize,
    /// First column, in window coordinates.
    pub start: usize,
    pub len: usize,
}

/// A `3n × 4n` window: columns `−(3n − 1) … n` relative to the slot's left
/// edge, rows `line 3n … line 1`. Slot cells are left uncolored.
#[derive(Clone, Debug)]
pub struct EnforcerWindow {
    pub profile: Profile,
    pub window: Pattern,
    /// Top-left slot cell in window coordinates.
    pub slot: (usize, usize),
    pub black: Vec<Stripe>,
    pub red: Vec<Stripe>,
}

impl EnforcerWindow {
    pub fn side(&self) -> usize {
        self.profile.side()
    }

    /// The window with `p` in the slot.
    pub fn place(&self, p: &Pattern) -> Result<Pattern> {
        let n = self.side();
        if p.width() != n || p.height() != n || p.alphabet() != self.window.alphabet() {
            return Err(Error::Invalid(format!("slot pattern must be {n}×{n} over BWR")));
        }
        let mut c = self.window.canvas().clone();
        c.blit(p.canvas(), self.slot.0, self.slot.1);
        Ok(Pattern::from_canvas(self.window.alphabet(), c))
    }

    fn place_letters(&self, base: &mut Canvas, letters: &[Letter]) {
        let n = self.side();
        for (i, &l) in letters.iter().enumerate() {
            base.set(self.slot.0 + i % n, self.slot.1 + i / n, Some(l));
        }
    }
}

/// Build the enforcing window for `prof`.
pub fn build_enforcer(prof: &Profile) -> EnforcerWindow {
    let n = prof.side();
    let rows = 3 * n;
    let cols = 4 * n;
    let slot = (3 * n - 1, 2 * n);
    let mut canvas = Canvas::filled(cols, rows, WHITE);
    for y in 0..n {
        for x in 0..n {
            canvas.set(slot.0 + x, slot.1 + y, None);
        }
    }
    let mut black = Vec::with_capacity(n);
    let mut red = Vec::with_capacity(n);
    for line in 1..=n {
        let k = prof.counts()[n - line];
        let len = 3 * n - 2 * line + 1;
        // the run ends at slot column k − 1
        let start = slot.0 + k - len;
        let row = rows - line;
        for x in start..slot.0 {
            canvas.set(x, row, Some(BLACK));
        }
        black.push(Stripe { line, start, len });
        let red_line = 3 * n - line + 1;
        let red_len = len + 1;
        for x in start..start + red_len {
            canvas.set(x, rows - red_line, Some(RED));
        }
        red.push(Stripe {
            line: red_line,
            start,
            len: red_len,
        });
    }
    EnforcerWindow {
        profile: prof.clone(),
        window: Pattern::from_canvas(&Alphabet::black_white_red(), canvas),
        slot,
        black,
        red,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnforcerReport {
    pub n: usize,
    pub profile: Profile,
    /// The pattern with this profile fits its own window.
    pub clause1: bool,
    pub candidates: usize,
    pub compatible: usize,
    /// Compatible simple patterns whose profile is not below `profile`.
    pub clause2_violations: Vec<Profile>,
    /// Simple patterns exceeding `profile` in some row that the window
    /// nevertheless accepts.
    pub clause3_violations: Vec<Profile>,
    /// Patterns below `profile` that the window rejects; not required by
    /// the claims, reported to show whether compatibility is exactly the
    /// down-set.
    pub rejected_below: Vec<Profile>,
    pub pass: bool,
}

/// Check the enforcer of `prof` against every simple pattern of its side.
pub fn verify_enforcer(prof: &Profile, spec: &dyn ShiftSpec) -> Result<EnforcerReport> {
    if *spec.alphabet() != Alphabet::black_white_red() {
        return Err(Error::AlphabetMismatch(
            spec.alphabet().as_string(),
            Alphabet::black_white_red().as_string(),
        ));
    }
    let n = prof.side();
    let win = build_enforcer(prof);
    let matcher = spec.matcher(3 * n.max(1) + n);
    let own = win.place(&simple_pattern(prof))?;
    let clause1 = matcher.is_admissible(own.canvas());

    let all = Profile::all(n);
    let verdicts: Vec<(Profile, bool)> = all
        .par_iter()
        .map(|p| {
            let mut c = win.window.canvas().clone();
            let letters = simple_pattern(p).letters();
            debug_assert_eq!(profile_of_letters(&letters, n).as_ref(), Some(p));
            win.place_letters(&mut c, &letters);
            (p.clone(), matcher.is_admissible(&c))
        })
        .collect();
    let mut report = EnforcerReport {
        n,
        profile: prof.clone(),
        clause1,
        candidates: verdicts.len(),
        compatible: 0,
        clause2_violations: Vec::new(),
        clause3_violations: Vec::new(),
        rejected_below: Vec::new(),
        pass: false,
    };
    for (p, ok) in verdicts {
        let below = profile_leq(&p, prof)?;
        if ok {
            report.compatible += 1;
            if !below {
                report.clause2_violations.push(p.clone());
                report.clause3_violations.push(p);
            }
        } else if below {
            report.rejected_below.push(p);
        }
    }
    report.pass = report.clause1 && report.clause2_violations.is_empty() && report.clause3_violations.is_empty();
    Ok(report)
}

/// Same check through an arbitrary matcher over the placed window; used to
/// cross-check the specialized red-black scan.
pub fn window_admissible(win: &EnforcerWindow, p: &Pattern, matcher: &dyn Matcher) -> Result<bool> {
    Ok(matcher.is_admissible(win.place(p)?.canvas()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{contains_forbidden, ListMatcher};

    fn sample_profile() -> Profile {
        Profile::new(vec![4, 3, 8, 5, 4, 2, 4, 6]).unwrap()
    }

    #[test]
    fn stripe_lengths_for_n8() {
        let w = build_enforcer(&sample_profile());
        assert_eq!(w.black[0].len, 23);
        assert_eq!(w.red[0].line, 24);
        assert_eq!(w.red[0].len, 24);
        assert_eq!(w.black[7].len, 9);
        assert_eq!(w.red[7].len, 10);
        assert_eq!(w.window.width(), 32);
        assert_eq!(w.window.height(), 24);
        for (b, r) in w.black.iter().zip(&w.red) {
            assert_eq!(b.start, r.start);
            // black run ends on the last black cell of its slot row
            let k = sample_profile().counts()[8 - b.line];
            assert_eq!(b.start + b.len, w.slot.0 + k);
        }
    }

    #[test]
    fn one_extra_black_cell_is_forbidden() {
        let prof = sample_profile();
        let w = build_enforcer(&prof);
        let mut more = prof.counts().to_vec();
        more[3] += 1;
        let p = simple_pattern(&Profile::new(more).unwrap());
        assert!(contains_forbidden(&w.place(&p).unwrap(), &RedBlackSpec::default()).is_some());
        assert!(contains_forbidden(&w.place(&simple_pattern(&prof)).unwrap(), &RedBlackSpec::default()).is_none());
    }

    #[test]
    fn n2_full_sweep() {
        let spec = RedBlackSpec::default();
        for prof in Profile::all(2) {
            let r = verify_enforcer(&prof, &spec).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.candidates, 9);
            assert!(r.rejected_below.is_empty());
        }
    }

    #[test]
    fn generic_matcher_agrees() {
        let spec = RedBlackSpec::default();
        // the full family is only listable up to extent 4; compare at that cap
        let list = ListMatcher::new(&spec.enumerate_forbidden(4));
        for prof in Profile::all(2) {
            let w = build_enforcer(&prof);
            for p in Profile::all(2) {
                let pat = simple_pattern(&p);
                let fast = window_admissible(&w, &pat, spec.matcher(4).as_ref()).unwrap();
                assert_eq!(fast, window_admissible(&w, &pat, &list).unwrap());
            }
        }
    }

    #[test]
    fn empty_slot_windows_are_clean() {
        let spec = RedBlackSpec::default();
        for n in 1..=4 {
            let white = simple_pattern(&Profile::new(vec![0; n]).unwrap());
            for prof in Profile::all(n) {
                let w = build_enforcer(&prof);
                assert!(contains_forbidden(&w.place(&white).unwrap(), &spec).is_none());
            }
        }
    }
}
