//! Shift specifications given by (possibly infinite) families of forbidden
//! patterns, exposed through a size-bounded enumerator.
//!
//! Checking a host of extent `e` only needs forbidden patterns of extent at
//! most `e`: larger ones cannot embed. [`ShiftSpec::matcher`] compiles the
//! relevant part of the family once so that repeated scans (backtracking,
//! sweeps) stay cheap.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::{Alphabet, Canvas, Cell, Letter, Pattern};

/// A forbidden pattern found inside a host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    /// Position in `enumerate_forbidden(host extent)`.
    #[serde(serialize_with = "ser_biguint")]
    pub forbidden_index: BigUint,
    /// Where the forbidden pattern's bounding-box origin lands, in the
    /// host's absolute coordinates.
    pub anchor: Cell,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub trait ShiftSpec: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn alphabet(&self) -> &Alphabet;

    /// Forbidden patterns with both bounding-box sides `<= max_extent`,
    /// ordered by extent first so that smaller extents give a prefix.
    fn enumerate_forbidden(&self, max_extent: usize) -> Vec<Pattern>;

    /// Size of `enumerate_forbidden(max_extent)` without materializing it.
    fn forbidden_count(&self, max_extent: usize) -> BigUint {
        BigUint::from(self.enumerate_forbidden(max_extent).len())
    }

    /// Checker for hosts whose bounding box fits in `max_extent`.
    fn matcher(&self, max_extent: usize) -> Box<dyn Matcher + '_> {
        Box::new(ListMatcher::new(&self.enumerate_forbidden(max_extent)))
    }
}

/// Scans partially or fully colored canvases for forbidden patterns.
///
/// `None` cells are treated as uncolored: an occurrence only counts when
/// every cell of the forbidden pattern's support is colored and matches.
pub trait Matcher: Send + Sync {
    /// First occurrence in row-major anchor order, ties broken by
    /// forbidden index. Returns `(x, y, index)` in canvas coordinates.
    fn first_occurrence(&self, host: &Canvas) -> Option<(usize, usize, BigUint)>;

    /// Whether some fully colored occurrence covers `(x, y)`.
    fn violation_at(&self, host: &Canvas, x: usize, y: usize) -> bool;

    fn is_admissible(&self, host: &Canvas) -> bool {
        self.first_occurrence(host).is_none()
    }
}

/// Locally admissible iff `None`; otherwise the first occurrence.
pub fn contains_forbidden(p: &Pattern, spec: &dyn ShiftSpec) -> Option<Occurrence> {
    let m = spec.matcher(p.extent());
    m.first_occurrence(p.canvas()).map(|(x, y, idx)| Occurrence {
        forbidden_index: idx,
        anchor: Cell::new(p.origin().x + x as i64, p.origin().y + y as i64),
    })
}

pub fn is_locally_admissible(p: &Pattern, spec: &dyn ShiftSpec) -> bool {
    spec.matcher(p.extent()).is_admissible(p.canvas())
}

struct Compiled {
    width: usize,
    height: usize,
    cells: Vec<(usize, usize, Letter)>,
}

impl Compiled {
    fn new(p: &Pattern) -> Self {
        let mut cells = Vec::new();
        for y in 0..p.height() {
            for x in 0..p.width() {
                if let Some(l) = p.get(x, y) {
                    cells.push((x, y, l));
                }
            }
        }
        Compiled {
            width: p.width(),
            height: p.height(),
            cells,
        }
    }

    #[inline]
    fn matches(&self, host: &Canvas, ax: usize, ay: usize) -> bool {
        self.cells
            .iter()
            .all(|&(dx, dy, l)| host.get(ax + dx, ay + dy) == Some(l))
    }
}

/// Generic matcher over an explicit forbidden list.
pub struct ListMatcher {
    forbidden: Vec<Compiled>,
}

impl ListMatcher {
    pub fn new(forbidden: &[Pattern]) -> Self {
        ListMatcher {
            forbidden: forbidden.iter().map(Compiled::new).collect(),
        }
    }
}

impl Matcher for ListMatcher {
    fn first_occurrence(&self, host: &Canvas) -> Option<(usize, usize, BigUint)> {
        for ay in 0..host.height {
            for ax in 0..host.width {
                for (i, f) in self.forbidden.iter().enumerate() {
                    if ax + f.width <= host.width && ay + f.height <= host.height && f.matches(host, ax, ay) {
                        return Some((ax, ay, BigUint::from(i)));
                    }
                }
            }
        }
        None
    }

    fn violation_at(&self, host: &Canvas, x: usize, y: usize) -> bool {
        for f in &self.forbidden {
            for &(dx, dy, l) in &f.cells {
                if x < dx || y < dy || host.get(x, y) != Some(l) {
                    continue;
                }
                let (ax, ay) = (x - dx, y - dy);
                if ax + f.width <= host.width && ay + f.height <= host.height && f.matches(host, ax, ay) {
                    return true;
                }
            }
        }
        false
    }
}

/// Shift given by a finite forbidden list (hard-square, user files, test
/// variants).
#[derive(Clone, Debug)]
pub struct FiniteSpec {
    name: String,
    alphabet: Alphabet,
    forbidden: Vec<Pattern>,
}

impl FiniteSpec {
    pub fn new(name: impl Into<String>, alphabet: Alphabet, mut forbidden: Vec<Pattern>) -> Result<Self> {
        for f in &forbidden {
            if f.alphabet() != &alphabet {
                return Err(Error::AlphabetMismatch(alphabet.as_string(), f.alphabet().as_string()));
            }
            if f.support_size() == 0 {
                return Err(Error::Invalid("empty forbidden pattern".into()));
            }
        }
        forbidden.sort_by_key(Pattern::extent);
        Ok(FiniteSpec {
            name: name.into(),
            alphabet,
            forbidden,
        })
    }

    /// Binary shift without two orthogonally adjacent 1s.
    pub fn hard_square() -> Self {
        let a = Alphabet::binary();
        let h = Pattern::from_rows(&a, &["11"]).unwrap();
        let v = Pattern::from_rows(&a, &["1", "1"]).unwrap();
        FiniteSpec::new("hard-square", a, vec![h, v]).unwrap()
    }

    /// Nearest-neighbor spec forbidding the listed horizontal pairs
    /// `(left, right)` and vertical pairs `(top, bottom)`.
    pub fn dominoes(
        name: impl Into<String>,
        alphabet: Alphabet,
        horizontal: &[(Letter, Letter)],
        vertical: &[(Letter, Letter)],
    ) -> Result<Self> {
        let mut forbidden = Vec::new();
        for &(a, b) in horizontal {
            forbidden.push(Pattern::from_letters(&alphabet, 2, 1, [a, b])?);
        }
        for &(a, b) in vertical {
            forbidden.push(Pattern::from_letters(&alphabet, 1, 2, [a, b])?);
        }
        FiniteSpec::new(name, alphabet, forbidden)
    }

    /// Patterns in the text format, separated by blank lines; the spec is
    /// named after the file stem.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        Self::parse(name, &text)
    }

    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut patterns = Vec::new();
        for block in text.split("\n\n").map(str::trim).filter(|b| !b.is_empty()) {
            patterns.push(Pattern::from_text(block)?);
        }
        let alphabet = patterns
            .first()
            .map(|p| p.alphabet().clone())
            .ok_or_else(|| Error::Parse("no forbidden patterns in file".into()))?;
        FiniteSpec::new(name, alphabet, patterns)
    }

    pub fn forbidden(&self) -> &[Pattern] {
        &self.forbidden
    }
}

impl ShiftSpec for FiniteSpec {
    fn name(&self) -> &str {
        &self.name
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn enumerate_forbidden(&self, max_extent: usize) -> Vec<Pattern> {
        self.forbidden
            .iter()
            .filter(|p| p.extent() <= max_extent)
            .cloned()
            .collect()
    }
}

const BLACK: Letter = 0;
const WHITE: Letter = 1;
const RED: Letter = 2;

/// Three letters; forbidden: every square of side `s >= 2` whose top row
/// is all red and bottom row all black, with arbitrary middle rows.
#[derive(Clone, Debug)]
pub struct RedBlackSpec {
    alphabet: Alphabet,
}

impl Default for RedBlackSpec {
    fn default() -> Self {
        RedBlackSpec {
            alphabet: Alphabet::black_white_red(),
        }
    }
}

impl RedBlackSpec {
    pub const BLACK: Letter = BLACK;
    pub const WHITE: Letter = WHITE;
    pub const RED: Letter = RED;

    fn per_size(s: usize) -> BigUint {
        BigUint::from(3u32).pow((s * (s - 2)) as u32)
    }

    fn offset(s: usize) -> BigUint {
        (2..s).map(Self::per_size).sum()
    }
}

impl ShiftSpec for RedBlackSpec {
    fn name(&self) -> &str {
        "red-black"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn enumerate_forbidden(&self, max_extent: usize) -> Vec<Pattern> {
        let mut out = Vec::new();
        for s in 2..=max_extent {
            let free = s * (s - 2);
            let total = 3usize
                .checked_pow(free as u32)
                .expect("red-black forbidden family too large to enumerate");
            for rank in 0..total {
                let mut letters = vec![BLACK; s * s];
                letters[..s].fill(RED);
                let mut r = rank;
                for i in (0..free).rev() {
                    letters[s + i] = (r % 3) as Letter;
                    r /= 3;
                }
                out.push(Pattern::from_letters(&self.alphabet, s, s, letters).unwrap());
            }
        }
        out
    }

    fn forbidden_count(&self, max_extent: usize) -> BigUint {
        (2..=max_extent).map(Self::per_size).sum()
    }

    fn matcher(&self, max_extent: usize) -> Box<dyn Matcher + '_> {
        Box::new(RedBlackMatcher { max_extent })
    }
}

struct RedBlackMatcher {
    max_extent: usize,
}

impl RedBlackMatcher {
    #[inline]
    fn is_square_forbidden(host: &Canvas, ax: usize, ay: usize, s: usize) -> bool {
        let bottom = ay + s - 1;
        for x in ax..ax + s {
            if host.get(x, ay) != Some(RED) || host.get(x, bottom) != Some(BLACK) {
                return false;
            }
        }
        for y in ay + 1..bottom {
            for x in ax..ax + s {
                if host.get(x, y).is_none() {
                    return false;
                }
            }
        }
        true
    }

    fn interior_rank(host: &Canvas, ax: usize, ay: usize, s: usize) -> BigUint {
        let mut r = BigUint::from(0u32);
        for y in ay + 1..ay + s - 1 {
            for x in ax..ax + s {
                r = r * 3u32 + u32::from(host.get(x, y).unwrap());
            }
        }
        r
    }
}

impl Matcher for RedBlackMatcher {
    fn first_occurrence(&self, host: &Canvas) -> Option<(usize, usize, BigUint)> {
        for ay in 0..host.height {
            for ax in 0..host.width {
                if host.get(ax, ay) != Some(RED) {
                    continue;
                }
                let limit = self.max_extent.min(host.width - ax).min(host.height - ay);
                for s in 2..=limit {
                    if host.get(ax + s - 1, ay) != Some(RED) {
                        break;
                    }
                    if Self::is_square_forbidden(host, ax, ay, s) {
                        let idx = RedBlackSpec::offset(s) + Self::interior_rank(host, ax, ay, s);
                        return Some((ax, ay, idx));
                    }
                }
            }
        }
        None
    }

    fn violation_at(&self, host: &Canvas, x: usize, y: usize) -> bool {
        let limit = self.max_extent.min(host.width).min(host.height);
        for s in 2..=limit {
            let ay_lo = (y + 1).saturating_sub(s);
            let ay_hi = y.min(host.height - s);
            let ax_lo = (x + 1).saturating_sub(s);
            let ax_hi = x.min(host.width - s);
            for ay in ay_lo..=ay_hi {
                for ax in ax_lo..=ax_hi {
                    if Self::is_square_forbidden(host, ax, ay, s) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn is_admissible(&self, host: &Canvas) -> bool {
        // Run lengths make full scans linear in the number of (anchor, size)
        // pairs that survive the red/black prefix tests.
        let (w, h) = (host.width, host.height);
        let mut red_run = vec![0usize; w * h];
        let mut black_run = vec![0usize; w * h];
        for y in 0..h {
            for x in (0..w).rev() {
                let i = y * w + x;
                let next = |run: &Vec<usize>| if x + 1 < w { run[i + 1] } else { 0 };
                red_run[i] = if host.cells[i] == Some(RED) {
                    1 + next(&red_run)
                } else {
                    0
                };
                black_run[i] = if host.cells[i] == Some(BLACK) {
                    1 + next(&black_run)
                } else {
                    0
                };
            }
        }
        let full = host.is_full();
        for ay in 0..h {
            for ax in 0..w {
                let r = red_run[ay * w + ax];
                if r < 2 {
                    continue;
                }
                let limit = self.max_extent.min(r).min(h - ay);
                for s in 2..=limit {
                    if black_run[(ay + s - 1) * w + ax] >= s && (full || Self::is_square_forbidden(host, ax, ay, s)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Mirror shift: red cells form full horizontal lines, at most one per
/// column, and the black/white rows above and below a red cell are mirror
/// images of each other.
///
/// Concretized forbidden family, ordered by extent:
/// * a red cell horizontally next to a non-red cell (four dominoes);
/// * two red cells in one column at vertical distance `d >= 1`
///   (two-cell support, extent `d + 1`);
/// * for `d >= 1`, a red cell with differing letters at vertical offsets
///   `-d` and `+d` (three-cell support, extent `2d + 1`).
#[derive(Clone, Debug)]
pub struct MirrorSpec {
    alphabet: Alphabet,
}

impl Default for MirrorSpec {
    fn default() -> Self {
        MirrorSpec {
            alphabet: Alphabet::black_white_red(),
        }
    }
}

impl MirrorSpec {
    fn at_extent(&self, e: usize) -> Vec<Pattern> {
        let a = &self.alphabet;
        let mut out = Vec::new();
        if e == 2 {
            for other in [BLACK, WHITE] {
                out.push(Pattern::from_letters(a, 2, 1, [RED, other]).unwrap());
                out.push(Pattern::from_letters(a, 2, 1, [other, RED]).unwrap());
            }
        }
        if e >= 2 {
            let d = (e - 1) as i64;
            out.push(Pattern::from_cells(a, &[(Cell::new(0, 0), RED), (Cell::new(0, d), RED)]).unwrap());
        }
        if e >= 3 && e % 2 == 1 {
            let d = ((e - 1) / 2) as i64;
            for top in 0..3 {
                for bottom in 0..3 {
                    if top == bottom {
                        continue;
                    }
                    out.push(
                        Pattern::from_cells(
                            a,
                            &[
                                (Cell::new(0, 0), top),
                                (Cell::new(0, d), RED),
                                (Cell::new(0, 2 * d), bottom),
                            ],
                        )
                        .unwrap(),
                    );
                }
            }
        }
        out
    }
}

impl ShiftSpec for MirrorSpec {
    fn name(&self) -> &str {
        "mirror"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn enumerate_forbidden(&self, max_extent: usize) -> Vec<Pattern> {
        (1..=max_extent).flat_map(|e| self.at_extent(e)).collect()
    }
}

pub const BUILTIN_SPECS: [&str; 3] = ["hard-square", "red-black", "mirror"];

pub fn builtin(name: &str) -> Option<Arc<dyn ShiftSpec>> {
    match name {
        "hard-square" => Some(Arc::new(FiniteSpec::hard_square())),
        "red-black" => Some(Arc::new(RedBlackSpec::default())),
        "mirror" => Some(Arc::new(MirrorSpec::default())),
        _ => None,
    }
}

/// Built-in name, or `file:PATH` for a finite list loaded from disk.
pub fn resolve(selector: &str) -> Result<Arc<dyn ShiftSpec>> {
    if let Some(path) = selector.strip_prefix("file:") {
        return Ok(Arc::new(FiniteSpec::load(Path::new(path))?));
    }
    builtin(selector).ok_or_else(|| {
        Error::Invalid(format!(
            "unknown spec {selector:?}; expected one of {BUILTIN_SPECS:?} or file:PATH"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bwr(rows: &[&str]) -> Pattern {
        Pattern::from_rows(&Alphabet::black_white_red(), rows).unwrap()
    }

    #[test]
    fn red_black_counts() {
        let rb = RedBlackSpec::default();
        let two = rb.enumerate_forbidden(2);
        assert_eq!(two.len(), 1);
        assert_eq!(two[0], bwr(&["RR", "BB"]));
        assert_eq!(rb.enumerate_forbidden(3).len(), 28);
        assert_eq!(rb.forbidden_count(3), BigUint::from(28u32));
        assert_eq!(rb.forbidden_count(4), BigUint::from(28u32 + 6561));
        assert!(rb.enumerate_forbidden(1).is_empty());
    }

    #[test]
    fn hard_square_list() {
        let hs = FiniteSpec::hard_square();
        assert!(hs.enumerate_forbidden(1).is_empty());
        for e in [2, 3, 7] {
            let f = hs.enumerate_forbidden(e);
            assert_eq!(f.len(), 2);
            assert_eq!((f[0].width(), f[0].height()), (2, 1));
            assert_eq!((f[1].width(), f[1].height()), (1, 2));
        }
    }

    #[test]
    fn red_black_scan() {
        let rb = RedBlackSpec::default();
        assert!(contains_forbidden(&bwr(&["WWW", "WWW", "WWW"]), &rb).is_none());
        let occ = contains_forbidden(&bwr(&["RR", "BB"]), &rb).unwrap();
        assert_eq!(occ.anchor, Cell::ORIGIN);
        assert_eq!(occ.forbidden_index, BigUint::from(0u32));
        // 3x3 with interior "WBR" has rank 1*9 + 0*3 + 2 = 11 among size-3 squares
        let occ = contains_forbidden(&bwr(&["WWWW", "WRRR", "WWBR", "WBBB"]), &rb).unwrap();
        assert_eq!(occ.anchor, Cell::new(1, 1));
        assert_eq!(occ.forbidden_index, BigUint::from(1u32 + 11));
        let listed = &rb.enumerate_forbidden(3)[12];
        assert_eq!(listed, &bwr(&["RRR", "WBR", "BBB"]));
    }

    #[test]
    fn red_black_matcher_agrees_with_list() {
        let rb = RedBlackSpec::default();
        let list = ListMatcher::new(&rb.enumerate_forbidden(3));
        let fast = rb.matcher(3);
        for p in crate::pattern::all_patterns(rb.alphabet(), 3, 3).step_by(7) {
            let c = p.canvas();
            assert_eq!(list.first_occurrence(c), fast.first_occurrence(c));
            assert_eq!(list.is_admissible(c), fast.is_admissible(c));
            for y in 0..3 {
                for x in 0..3 {
                    assert_eq!(list.violation_at(c, x, y), fast.violation_at(c, x, y));
                }
            }
        }
    }

    #[test]
    fn mirror_family_shape() {
        let m = MirrorSpec::default();
        assert!(m.enumerate_forbidden(1).is_empty());
        assert_eq!(m.enumerate_forbidden(2).len(), 5);
        assert_eq!(m.enumerate_forbidden(3).len(), 5 + 1 + 6);
        let small = m.enumerate_forbidden(4);
        let big = m.enumerate_forbidden(6);
        assert_eq!(&big[..small.len()], &small[..]);
        for p in &big {
            assert!(p.extent() <= 6);
        }
        // a symmetric configuration around a red line is admissible
        let ok = bwr(&["BWB", "RRR", "BWB"]);
        assert!(contains_forbidden(&ok, &m).is_none());
        let bad = bwr(&["BWB", "RRR", "BWW"]);
        assert!(contains_forbidden(&bad, &m).is_some());
        assert!(contains_forbidden(&bwr(&["RW"]), &m).is_some());
        assert!(contains_forbidden(&bwr(&["R", "B", "R"]), &m).is_some());
    }

    #[test]
    fn finite_spec_file_format() {
        let text = "2 1 01\n11\n\n1 2 01\n1\n1\n";
        let spec = FiniteSpec::parse("hs", text).unwrap();
        assert_eq!(
            spec.enumerate_forbidden(2),
            FiniteSpec::hard_square().enumerate_forbidden(2)
        );
        assert!(resolve("nope").is_err());
        assert_eq!(resolve("red-black").unwrap().name(), "red-black");
    }
}
