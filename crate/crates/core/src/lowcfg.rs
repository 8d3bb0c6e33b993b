//! Recursive lexicographically first squares for nearest-neighbor shifts
//! of finite type, and short descriptions of their subpatterns.
//!
//! A square of side `2^k + 1` is filled from its border inwards: the
//! middle row and middle column get the lexicographically first coloring
//! under which the rest of the interior can still be completed, then each
//! of the four quarter squares (side `2^{k−1} + 1`, sharing the
//! centerlines as borders) is handled the same way. With nearest-neighbor
//! constraints the quarters only interact through their borders, so the
//! whole square is a function of its border ring ("standard square").

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::admissibility::backtrack;
use crate::error::{Error, Result};
use crate::pattern::{Alphabet, Canvas, Pattern, Rect};
use crate::shift::{Matcher, ShiftSpec};

/// Extent up to which [`NNSpec::new`] checks that no forbidden pattern
/// besides monominoes and dominoes shows up.
pub const NN_CHECK_EXTENT: usize = 8;

/// A shift spec whose forbidden patterns are single cells or pairs of
/// neighboring cells.
#[derive(Clone, Debug)]
pub struct NNSpec {
    spec: Arc<dyn ShiftSpec>,
}

impl NNSpec {
    pub fn new(spec: Arc<dyn ShiftSpec>) -> Result<Self> {
        let small = spec.enumerate_forbidden(2);
        for p in &small {
            let ok = match p.support_size() {
                1 => true,
                2 => p.is_rectangular() && p.width() * p.height() == 2,
                _ => false,
            };
            if !ok {
                return Err(Error::Invalid(format!(
                    "spec {} has a forbidden pattern that is not a domino:\n{}",
                    spec.name(),
                    p.render()
                )));
            }
        }
        if spec.forbidden_count(NN_CHECK_EXTENT) != spec.forbidden_count(2) {
            return Err(Error::Invalid(format!(
                "spec {} has forbidden patterns wider than a domino",
                spec.name()
            )));
        }
        Ok(NNSpec { spec })
    }

    pub fn spec(&self) -> &dyn ShiftSpec {
        self.spec.as_ref()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.spec.alphabet()
    }

    fn matcher(&self) -> Box<dyn Matcher + '_> {
        // dominoes never exceed extent 2
        self.spec.matcher(2)
    }
}

pub fn square_side(k: u32) -> usize {
    (1usize << k) + 1
}

fn ring_cells(side: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for y in 0..side {
        for x in 0..side {
            if x == 0 || y == 0 || x + 1 == side || y + 1 == side {
                cells.push((x, y));
            }
        }
    }
    cells
}

fn interior_cells(side: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for y in 1..side.saturating_sub(1) {
        for x in 1..side - 1 {
            cells.push((x, y));
        }
    }
    cells
}

/// The border ring of the `side`-square at `(x0, y0)` of `canvas`, as a
/// pattern with an uncolored interior.
pub fn ring_of(alphabet: &Alphabet, canvas: &Canvas, x0: usize, y0: usize, side: usize) -> Pattern {
    let mut ring = Canvas::empty(side, side);
    for (x, y) in ring_cells(side) {
        ring.set(x, y, canvas.get(x0 + x, y0 + y));
    }
    Pattern::from_canvas(alphabet, ring)
}

/// Lexicographically first border ring (ring cells in row-major order) of
/// the `(2^k + 1)`-square that has a locally admissible completion.
pub fn choose_border(spec: &NNSpec, k: u32) -> Result<Pattern> {
    let side = square_side(k);
    let mut canvas = Canvas::empty(side, side);
    let mut order = ring_cells(side);
    order.extend(interior_cells(side));
    let matcher = spec.matcher();
    if !backtrack(&mut canvas, &order, matcher.as_ref(), spec.alphabet().len()) {
        return Err(Error::Unsatisfiable(format!(
            "spec {} has no locally admissible {side}×{side} pattern",
            spec.spec().name()
        )));
    }
    Ok(ring_of(spec.alphabet(), &canvas, 0, 0, side))
}

/// The recursive lex-first filling seeded with `border`; the result for
/// the border returned by [`choose_border`] is `P_k`.
pub fn build_pk(spec: &NNSpec, k: u32, border: &Pattern) -> Result<Pattern> {
    standard_square(spec, border, k)
}

fn check_border(spec: &NNSpec, border: &Pattern, m: u32) -> Result<Canvas> {
    let side = square_side(m);
    if border.width() != side || border.height() != side {
        return Err(Error::Invalid(format!(
            "border must be {side}×{side}, got {}×{}",
            border.width(),
            border.height()
        )));
    }
    if border.alphabet() != spec.alphabet() {
        return Err(Error::AlphabetMismatch(
            border.alphabet().as_string(),
            spec.alphabet().as_string(),
        ));
    }
    let mut canvas = Canvas::empty(side, side);
    for (x, y) in ring_cells(side) {
        let l = border
            .get(x, y)
            .ok_or_else(|| Error::Invalid(format!("border cell ({x},{y}) is uncolored")))?;
        canvas.set(x, y, Some(l));
    }
    Ok(canvas)
}

/// The square determined by `border` (side `2^m + 1`).
pub fn standard_square(spec: &NNSpec, border: &Pattern, m: u32) -> Result<Pattern> {
    let mut canvas = check_border(spec, border, m)?;
    let side = square_side(m);
    let matcher = spec.matcher();
    if !matcher.is_admissible(&canvas) {
        return Err(Error::Unsatisfiable("border is not locally admissible".into()));
    }
    let mut probe = canvas.clone();
    if !backtrack(
        &mut probe,
        &interior_cells(side),
        matcher.as_ref(),
        spec.alphabet().len(),
    ) {
        return Err(Error::Unsatisfiable("border has no admissible completion".into()));
    }
    fill(&mut canvas, 0, 0, side, matcher.as_ref(), spec.alphabet().len())?;
    Ok(Pattern::from_canvas(spec.alphabet(), canvas))
}

/// Centerline cells of the square at `(x0, y0)`: middle row left to right,
/// then middle column top to bottom, the center cell once.
fn centerline_cells(x0: usize, y0: usize, side: usize) -> Vec<(usize, usize)> {
    let mid = side / 2;
    let mut cells: Vec<(usize, usize)> = (1..side - 1).map(|x| (x0 + x, y0 + mid)).collect();
    cells.extend((1..side - 1).filter(|&y| y != mid).map(|y| (x0 + mid, y0 + y)));
    cells
}

fn fill(canvas: &mut Canvas, x0: usize, y0: usize, side: usize, matcher: &dyn Matcher, letters: usize) -> Result<()> {
    if side <= 2 {
        return Ok(());
    }
    let center = centerline_cells(x0, y0, side);
    let mut order = center.clone();
    order.extend(
        interior_cells(side)
            .into_iter()
            .map(|(x, y)| (x0 + x, y0 + y))
            .filter(|c| !center.contains(c)),
    );
    let mut work = canvas.clone();
    if !backtrack(&mut work, &order, matcher, letters) {
        return Err(Error::Unsatisfiable(format!(
            "no completion of the {side}-square at ({x0},{y0})"
        )));
    }
    for &(x, y) in &center {
        canvas.set(x, y, work.get(x, y));
    }
    let half = side / 2;
    for (dx, dy) in [(0, 0), (half, 0), (0, half), (half, half)] {
        fill(canvas, x0 + dx, y0 + dy, half + 1, matcher, letters)?;
    }
    Ok(())
}

/// A subpattern of `P_k` described by the borders of at most four standard
/// squares of side `2^level + 1` on the grid of step `2^level`, the layout
/// of those squares, and the rectangle's position inside them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareDescription {
    pub level: u32,
    /// Covering squares per row and per column (1 or 2 each).
    pub cols: usize,
    pub rows: usize,
    /// Top-left of the rectangle relative to the covering squares.
    pub offset: (usize, usize),
    pub width: usize,
    pub height: usize,
    /// Row-major: top-left, top-right, bottom-left, bottom-right.
    pub borders: Vec<Pattern>,
    /// Where the rectangle sat in `P_k`; informational, not part of the
    /// encoding.
    pub rect: Rect,
}

#[derive(Serialize, Deserialize)]
struct DescriptionFile {
    level: u32,
    rect: Rect,
    offsets: (usize, usize),
    layout: (usize, usize),
    width: usize,
    height: usize,
    bits: usize,
    borders: Vec<String>,
}

/// Declared constant `C` in `bits ≤ C · n` for an alphabet needing `b`
/// bits per letter. Borders take at most `4 · 4 · 2^m · b < 32 · n · b`
/// bits since `2^m < 2n`; the rest is logarithmic and fits in `8n`.
pub fn declared_constant(bits_per_letter: u32) -> usize {
    32 * bits_per_letter as usize + 8
}

fn gamma_len(v: usize) -> usize {
    2 * (usize::BITS - v.leading_zeros()) as usize - 1
}

impl SquareDescription {
    /// Length of the bit encoding: `gamma(level + 1)`, 2 layout bits, two
    /// `level`-bit offsets, two `(level + 1)`-bit dimensions, then the
    /// border rings.
    pub fn bit_length(&self) -> usize {
        let m = self.level as usize;
        let b = self
            .borders
            .first()
            .map_or(1, |p| p.alphabet().bits_per_letter() as usize);
        let ring = 4 * (1usize << m) * b;
        gamma_len(m + 1) + 2 + 2 * m + 2 * (m + 1) + self.borders.len() * ring
    }

    pub fn to_json(&self) -> Value {
        let file = DescriptionFile {
            level: self.level,
            rect: self.rect,
            offsets: self.offset,
            layout: (self.cols, self.rows),
            width: self.width,
            height: self.height,
            bits: self.bit_length(),
            borders: self.borders.iter().map(Pattern::to_text).collect(),
        };
        json!(file)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let f: DescriptionFile = serde_json::from_value(v.clone())?;
        Ok(SquareDescription {
            level: f.level,
            cols: f.layout.0,
            rows: f.layout.1,
            offset: f.offsets,
            width: f.width,
            height: f.height,
            borders: f.borders.iter().map(|t| Pattern::from_text(t)).collect::<Result<_>>()?,
            rect: f.rect,
        })
    }
}

/// Describe `rect` of `pk` (side `2^k + 1`) by the minimal covering level.
pub fn describe_subpattern(pk: &Pattern, k: u32, rect: Rect) -> Result<SquareDescription> {
    let side = square_side(k);
    if pk.width() != side || pk.height() != side {
        return Err(Error::Invalid(format!("P_{k} must be {side}×{side}")));
    }
    let inside = rect.x >= 0
        && rect.y >= 0
        && rect.width > 0
        && rect.height > 0
        && rect.x as usize + rect.width <= side
        && rect.y as usize + rect.height <= side;
    if !inside {
        return Err(Error::RectOutsideSupport(rect.to_string()));
    }
    let n = rect.width.max(rect.height);
    let level = (0..=k).find(|&m| square_side(m) >= n).expect("P_k covers every rect");
    let step = 1usize << level;
    let last = (1usize << (k - level)) - 1;
    let axis = |start: usize, len: usize| {
        let a = (start / step).min(last);
        let count = if start + len - 1 <= a * step + step { 1 } else { 2 };
        (a, count, start - a * step)
    };
    let (ax, cols, dx) = axis(rect.x as usize, rect.width);
    let (ay, rows, dy) = axis(rect.y as usize, rect.height);
    let mut borders = Vec::with_capacity(cols * rows);
    for j in 0..rows {
        for i in 0..cols {
            borders.push(ring_of(
                pk.alphabet(),
                pk.canvas(),
                (ax + i) * step,
                (ay + j) * step,
                step + 1,
            ));
        }
    }
    Ok(SquareDescription {
        level,
        cols,
        rows,
        offset: (dx, dy),
        width: rect.width,
        height: rect.height,
        borders,
        rect,
    })
}

/// Rebuild each standard square from its border, stitch them, and cut the
/// rectangle out.
pub fn reconstruct_subpattern(desc: &SquareDescription, spec: &NNSpec) -> Result<Pattern> {
    if desc.cols == 0 || desc.rows == 0 || desc.cols > 2 || desc.rows > 2 || desc.borders.len() != desc.cols * desc.rows
    {
        return Err(Error::Invalid("inconsistent square layout".into()));
    }
    let step = 1usize << desc.level;
    let mut canvas = Canvas::empty(desc.cols * step + 1, desc.rows * step + 1);
    for (i, border) in desc.borders.iter().enumerate() {
        let sq = standard_square(spec, border, desc.level)?;
        canvas.blit(sq.canvas(), (i % desc.cols) * step, (i / desc.cols) * step);
    }
    let whole = Pattern::from_canvas(spec.alphabet(), canvas);
    whole.subpattern(Rect::new(
        desc.offset.0 as i64,
        desc.offset.1 as i64,
        desc.width,
        desc.height,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{is_locally_admissible, FiniteSpec};

    fn hs() -> NNSpec {
        NNSpec::new(Arc::new(FiniteSpec::hard_square())).unwrap()
    }

    #[test]
    fn hard_square_border_is_all_zero() {
        let b = choose_border(&hs(), 2).unwrap();
        assert_eq!(b.support_size(), 16);
        assert!(b.support().all(|(_, l)| l == 0));
    }

    #[test]
    fn k1_all_zero() {
        let s = hs();
        let p = build_pk(&s, 1, &choose_border(&s, 1).unwrap()).unwrap();
        assert_eq!(p, Pattern::filled(s.alphabet(), 3, 3, 0));
    }

    #[test]
    fn degenerate_specs() {
        let a = Alphabet::binary();
        let zero = Pattern::from_rows(&a, &["0"]).unwrap();
        let no_zero = NNSpec::new(Arc::new(FiniteSpec::new("no-zero", a.clone(), vec![zero]).unwrap())).unwrap();
        let b = choose_border(&no_zero, 2).unwrap();
        assert!(b.support().all(|(_, l)| l == 1));

        let pairs = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let empty = FiniteSpec::dominoes("empty", a, &pairs, &pairs).unwrap();
        let empty = NNSpec::new(Arc::new(empty)).unwrap();
        assert!(choose_border(&empty, 1).is_err());
    }

    #[test]
    fn non_domino_spec_rejected() {
        let a = Alphabet::binary();
        let tri = Pattern::from_rows(&a, &["111"]).unwrap();
        assert!(NNSpec::new(Arc::new(FiniteSpec::new("tri", a, vec![tri]).unwrap())).is_err());
    }

    #[test]
    fn bad_border_rejected() {
        let s = hs();
        let mut ring = choose_border(&s, 1).unwrap().into_canvas();
        ring.set(0, 0, Some(1));
        ring.set(1, 0, Some(1));
        let p = Pattern::from_canvas(s.alphabet(), ring);
        assert!(standard_square(&s, &p, 1).is_err());
    }

    #[test]
    fn nontrivial_border_fills_admissibly() {
        let s = hs();
        let mut ring = choose_border(&s, 3).unwrap().into_canvas();
        for (x, y) in [(2, 0), (0, 4), (8, 1), (5, 8), (8, 7)] {
            ring.set(x, y, Some(1));
        }
        let border = Pattern::from_canvas(s.alphabet(), ring);
        let sq = standard_square(&s, &border, 3).unwrap();
        assert!(sq.canvas().is_full());
        assert!(is_locally_admissible(&sq, s.spec()));
        assert_eq!(ring_of(s.alphabet(), sq.canvas(), 0, 0, 9), border);
        assert_eq!(standard_square(&s, &border, 3).unwrap(), sq);
    }

    #[test]
    fn centerline_split_geometry() {
        let s = hs();
        let pk = build_pk(&s, 4, &choose_border(&s, 4).unwrap()).unwrap();
        let d = describe_subpattern(&pk, 4, Rect::square(5, 6, 7)).unwrap();
        assert_eq!(d.level, 3);
        assert_eq!((d.cols, d.rows), (2, 2));
        assert_eq!(d.borders[0].width(), 9);
        assert_eq!(
            reconstruct_subpattern(&d, &s).unwrap(),
            pk.subpattern(Rect::square(5, 6, 7)).unwrap()
        );
        let one = describe_subpattern(&pk, 4, Rect::square(8, 0, 9)).unwrap();
        assert_eq!(one.borders.len(), 1);
        assert_eq!(one.offset, (0, 0));
    }

    #[test]
    fn description_json_round_trip() {
        let s = hs();
        let pk = build_pk(&s, 3, &choose_border(&s, 3).unwrap()).unwrap();
        let d = describe_subpattern(&pk, 3, Rect::new(1, 2, 4, 3)).unwrap();
        assert_eq!(SquareDescription::from_json(&d.to_json()).unwrap(), d);
    }
}
