//! Alphabets and finite patterns on the integer plane.
//!
//! Coordinates are `(x, y)` with `x` the column and `y` the row; rows grow
//! downwards, so row 0 is the top row of every rendered grid. Lexicographic
//! comparisons between rectangular patterns use row-major order, top row
//! first, letters compared by their position in the [`Alphabet`].

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a letter inside its alphabet.
pub type Letter = u8;

/// Marker for cells of the bounding box that are outside the support.
pub const HOLE: char = '.';

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Arc<[char]>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if letters.len() > usize::from(Letter::MAX) {
            return Err(Error::Invalid("alphabet too large".into()));
        }
        for (i, &c) in letters.iter().enumerate() {
            if c == HOLE || c.is_whitespace() || c == '|' {
                return Err(Error::ReservedLetter(c));
            }
            if letters[..i].contains(&c) {
                return Err(Error::DuplicateLetter(c));
            }
        }
        Ok(Alphabet {
            letters: letters.into(),
        })
    }

    /// `{0, 1}`.
    pub fn binary() -> Self {
        Alphabet::new(['0', '1']).expect("static alphabet")
    }

    /// Black, white, red: the three-letter alphabet of the mirror and
    /// red-black shifts, in that order.
    pub fn black_white_red() -> Self {
        Alphabet::new(['B', 'W', 'R']).expect("static alphabet")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn index_of(&self, c: char) -> Option<Letter> {
        self.letters.iter().position(|&l| l == c).map(|i| i as Letter)
    }

    pub fn char_of(&self, letter: Letter) -> char {
        self.letters[usize::from(letter)]
    }

    pub fn is_binary(&self) -> bool {
        self.letters.len() == 2
    }

    /// `ceil(log2 |alphabet|)`, the width of a fixed-length letter code.
    pub fn bits_per_letter(&self) -> u32 {
        ceil_log2(self.letters.len() as u128)
    }

    pub fn as_string(&self) -> String {
        self.letters.iter().collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({})", self.as_string())
    }
}

/// `ceil(log2 n)` for `n >= 1`; 0 for `n <= 1`.
pub fn ceil_log2(n: u128) -> u32 {
    if n <= 1 {
        0
    } else {
        128 - (n - 1).leading_zeros()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Cell {
    pub const ORIGIN: Cell = Cell { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        Cell { x, y }
    }
}

/// Axis-aligned rectangle `[x, x + width) × [y, y + height)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: i64,
    pub y: i64,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn new(x: i64, y: i64, width: usize, height: usize) -> Self {
        Rect { x, y, width, height }
    }

    pub fn square(x: i64, y: i64, side: usize) -> Self {
        Rect::new(x, y, side, side)
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}@({},{})", self.width, self.height, self.x, self.y)
    }
}

/// Dense storage for a bounding box; `None` marks a cell outside the
/// support (or, during searches, a cell not yet colored).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Canvas {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<Option<Letter>>,
}

impl Canvas {
    pub fn empty(width: usize, height: usize) -> Self {
        Canvas {
            width,
            height,
            cells: vec![None; width * height],
        }
    }

    pub fn filled(width: usize, height: usize, letter: Letter) -> Self {
        Canvas {
            width,
            height,
            cells: vec![Some(letter); width * height],
        }
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<Letter> {
        self.cells[y * self.width + x]
    }

    /// Like [`Canvas::get`] but tolerates out-of-box coordinates.
    #[inline]
    pub fn get_signed(&self, x: i64, y: i64) -> Option<Letter> {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            None
        } else {
            self.get(x as usize, y as usize)
        }
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, letter: Option<Letter>) {
        let i = self.idx(x, y);
        self.cells[i] = letter;
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    /// Copy every colored cell of `src` into `self` at offset `(dx, dy)`.
    pub fn blit(&mut self, src: &Canvas, dx: usize, dy: usize) {
        for y in 0..src.height {
            for x in 0..src.width {
                if let Some(l) = src.get(x, y) {
                    self.set(dx + x, dy + y, Some(l));
                }
            }
        }
    }
}

/// A coloring of a finite subset of the plane.
///
/// The support is stored as a dense bounding box anchored at `origin`;
/// cells of the box outside the support hold `None`. Rectangular patterns
/// (every cell present) are the common case.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    alphabet: Alphabet,
    origin: Cell,
    canvas: Canvas,
}

impl Pattern {
    /// Rectangular pattern from rows of letter characters, top row first.
    pub fn from_rows<S: AsRef<str>>(alphabet: &Alphabet, rows: &[S]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().chars().count());
        let mut cells = Vec::with_capacity(width * height);
        for (row, r) in rows.iter().enumerate() {
            let found = r.as_ref().chars().count();
            if found != width {
                return Err(Error::RaggedRows {
                    row,
                    expected: width,
                    found,
                });
            }
            for (col, c) in r.as_ref().chars().enumerate() {
                let l = alphabet
                    .index_of(c)
                    .ok_or(Error::UnknownLetter { letter: c, row, col })?;
                cells.push(Some(l));
            }
        }
        Ok(Pattern {
            alphabet: alphabet.clone(),
            origin: Cell::ORIGIN,
            canvas: Canvas { width, height, cells },
        })
    }

    /// Rectangular pattern from row-major letter indices.
    pub fn from_letters(
        alphabet: &Alphabet,
        width: usize,
        height: usize,
        letters: impl IntoIterator<Item = Letter>,
    ) -> Result<Self> {
        let cells: Vec<Option<Letter>> = letters.into_iter().map(Some).collect();
        if cells.len() != width * height {
            return Err(Error::Invalid(format!(
                "{} letters for a {}x{} pattern",
                cells.len(),
                width,
                height
            )));
        }
        if let Some(bad) = cells.iter().flatten().find(|&&l| usize::from(l) >= alphabet.len()) {
            return Err(Error::Invalid(format!("letter index {bad} outside alphabet")));
        }
        Ok(Pattern {
            alphabet: alphabet.clone(),
            origin: Cell::ORIGIN,
            canvas: Canvas { width, height, cells },
        })
    }

    pub fn filled(alphabet: &Alphabet, width: usize, height: usize, letter: Letter) -> Self {
        Pattern {
            alphabet: alphabet.clone(),
            origin: Cell::ORIGIN,
            canvas: Canvas::filled(width, height, letter),
        }
    }

    /// Wrap a canvas; `None` cells are outside the support.
    pub fn from_canvas(alphabet: &Alphabet, canvas: Canvas) -> Self {
        Pattern {
            alphabet: alphabet.clone(),
            origin: Cell::ORIGIN,
            canvas,
        }
    }

    /// Sparse pattern from explicit cells, re-anchored so that its
    /// bounding box starts at the origin.
    pub fn from_cells(alphabet: &Alphabet, cells: &[(Cell, Letter)]) -> Result<Self> {
        if cells.is_empty() {
            return Ok(Pattern::from_canvas(alphabet, Canvas::empty(0, 0)));
        }
        let min_x = cells.iter().map(|(c, _)| c.x).min().unwrap();
        let min_y = cells.iter().map(|(c, _)| c.y).min().unwrap();
        let max_x = cells.iter().map(|(c, _)| c.x).max().unwrap();
        let max_y = cells.iter().map(|(c, _)| c.y).max().unwrap();
        let mut canvas = Canvas::empty((max_x - min_x + 1) as usize, (max_y - min_y + 1) as usize);
        for &(c, l) in cells {
            if usize::from(l) >= alphabet.len() {
                return Err(Error::Invalid(format!("letter index {l} outside alphabet")));
            }
            let (x, y) = ((c.x - min_x) as usize, (c.y - min_y) as usize);
            if canvas.get(x, y).is_some() {
                return Err(Error::Invalid(format!("cell {c:?} colored twice")));
            }
            canvas.set(x, y, Some(l));
        }
        Ok(Pattern::from_canvas(alphabet, canvas))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn origin(&self) -> Cell {
        self.origin
    }

    pub fn with_origin(mut self, origin: Cell) -> Self {
        self.origin = origin;
        self
    }

    pub fn canvas(&self) -> &Canvas {
        &self.canvas
    }

    pub fn into_canvas(self) -> Canvas {
        self.canvas
    }

    pub fn width(&self) -> usize {
        self.canvas.width
    }

    pub fn height(&self) -> usize {
        self.canvas.height
    }

    /// Larger of the two bounding-box sides.
    pub fn extent(&self) -> usize {
        self.width().max(self.height())
    }

    pub fn is_rectangular(&self) -> bool {
        self.canvas.is_full()
    }

    pub fn support_size(&self) -> usize {
        self.canvas.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Letter at local coordinates (relative to the bounding box).
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<Letter> {
        self.canvas.get(x, y)
    }

    /// Letter at absolute plane coordinates.
    pub fn letter_at(&self, cell: Cell) -> Option<Letter> {
        self.canvas.get_signed(cell.x - self.origin.x, cell.y - self.origin.y)
    }

    /// Support cells in absolute coordinates, row-major.
    pub fn support(&self) -> impl Iterator<Item = (Cell, Letter)> + '_ {
        let (w, ox, oy) = (self.canvas.width, self.origin.x, self.origin.y);
        self.canvas
            .cells
            .iter()
            .enumerate()
            .filter_map(move |(i, c)| c.map(|l| (Cell::new(ox + (i % w) as i64, oy + (i / w) as i64), l)))
    }

    /// Row-major letters of a rectangular pattern.
    pub fn letters(&self) -> Vec<Letter> {
        self.canvas
            .cells
            .iter()
            .map(|c| c.expect("rectangular pattern"))
            .collect()
    }

    /// Row-major bit string of a binary pattern (letter index 1 = `true`).
    pub fn bits(&self) -> Vec<bool> {
        self.canvas
            .cells
            .iter()
            .map(|c| c.expect("rectangular pattern") == 1)
            .collect()
    }

    /// Restriction to `rect` (local coordinates), re-anchored at the origin.
    pub fn subpattern(&self, rect: Rect) -> Result<Pattern> {
        let fits = rect.x >= 0
            && rect.y >= 0
            && rect.x as usize + rect.width <= self.width()
            && rect.y as usize + rect.height <= self.height();
        if !fits {
            return Err(Error::RectOutsideSupport(rect.to_string()));
        }
        let (x0, y0) = (rect.x as usize, rect.y as usize);
        let mut cells = Vec::with_capacity(rect.width * rect.height);
        for y in y0..y0 + rect.height {
            for x in x0..x0 + rect.width {
                match self.canvas.get(x, y) {
                    Some(l) => cells.push(Some(l)),
                    None => return Err(Error::RectOutsideSupport(rect.to_string())),
                }
            }
        }
        Ok(Pattern {
            alphabet: self.alphabet.clone(),
            origin: Cell::ORIGIN,
            canvas: Canvas {
                width: rect.width,
                height: rect.height,
                cells,
            },
        })
    }

    /// Flip every letter of a binary pattern.
    pub fn invert(&self) -> Result<Pattern> {
        if !self.alphabet.is_binary() {
            return Err(Error::NonBinary(self.alphabet.as_string()));
        }
        let mut out = self.clone();
        for c in out.canvas.cells.iter_mut().flatten() {
            *c ^= 1;
        }
        Ok(out)
    }

    /// Row-major lexicographic comparison of two patterns with equal
    /// bounding boxes. Holes sort before letters.
    pub fn lex_cmp(&self, other: &Pattern) -> Ordering {
        (self.canvas.height, self.canvas.width, &self.canvas.cells).cmp(&(
            other.canvas.height,
            other.canvas.width,
            &other.canvas.cells,
        ))
    }

    /// Text format: header `W H letters`, then `H` rows of `W` characters.
    /// Cells outside the support are written as `.`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.width(), self.height(), self.alphabet.as_string());
        s.push_str(&self.render());
        s
    }

    /// The grid rows only, one line per row.
    pub fn render(&self) -> String {
        let mut s = String::with_capacity((self.width() + 1) * self.height());
        for y in 0..self.height() {
            for x in 0..self.width() {
                s.push(self.get(x, y).map_or(HOLE, |l| self.alphabet.char_of(l)));
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Pattern> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad dimension {s:?}")))
        };
        let (width, height) = (parse(fields[0])?, parse(fields[1])?);
        let alphabet = Alphabet::new(fields[2].chars())?;
        let mut canvas = Canvas::empty(width, height);
        for y in 0..height {
            let row = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {height} rows, found {y}")))?;
            let chars: Vec<char> = row.chars().collect();
            if chars.len() != width {
                return Err(Error::RaggedRows {
                    row: y,
                    expected: width,
                    found: chars.len(),
                });
            }
            for (x, &c) in chars.iter().enumerate() {
                if c == HOLE {
                    continue;
                }
                let l = alphabet.index_of(c).ok_or(Error::UnknownLetter {
                    letter: c,
                    row: y,
                    col: x,
                })?;
                canvas.set(x, y, Some(l));
            }
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after grid".into()));
        }
        Ok(Pattern::from_canvas(&alphabet, canvas))
    }

    /// Same cells, different (equal-size) alphabet.
    pub fn relabel(&self, alphabet: &Alphabet) -> Result<Pattern> {
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::AlphabetMismatch(self.alphabet.as_string(), alphabet.as_string()));
        }
        Ok(Pattern {
            alphabet: alphabet.clone(),
            ..self.clone()
        })
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Pattern {}x{} @{:?}", self.width(), self.height(), self.origin)?;
        f.write_str(&self.render())
    }
}

/// Every rectangular `width × height` pattern, in lexicographic order.
pub fn all_patterns(alphabet: &Alphabet, width: usize, height: usize) -> AllPatterns {
    AllPatterns {
        alphabet: alphabet.clone(),
        width,
        height,
        next: Some(vec![0; width * height]),
    }
}

pub struct AllPatterns {
    alphabet: Alphabet,
    width: usize,
    height: usize,
    next: Option<Vec<Letter>>,
}

impl Iterator for AllPatterns {
    type Item = Pattern;

    fn next(&mut self) -> Option<Pattern> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let base = self.alphabet.len() as Letter;
        let mut i = succ.len();
        let mut carried_out = true;
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < base {
                carried_out = false;
                break;
            }
            succ[i] = 0;
        }
        if !carried_out {
            self.next = Some(succ);
        }
        Some(Pattern::from_letters(&self.alphabet, self.width, self.height, cur).expect("in range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(rows: &[&str]) -> Pattern {
        Pattern::from_rows(&Alphabet::binary(), rows).unwrap()
    }

    #[test]
    fn constant_pattern() {
        let p = bin(&["00", "00"]);
        assert_eq!(p.support_size(), 4);
        assert!(p.letters().iter().all(|&l| l == 0));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Pattern::from_rows(&Alphabet::binary(), &["000", "00"]).unwrap_err();
        assert!(matches!(err, Error::RaggedRows { row: 1, .. }));
    }

    #[test]
    fn unknown_letter_rejected() {
        let err = Pattern::from_rows(&Alphabet::binary(), &["0x"]).unwrap_err();
        assert!(matches!(err, Error::UnknownLetter { letter: 'x', .. }));
    }

    #[test]
    fn alphabet_invariants() {
        assert!(matches!(Alphabet::new([]), Err(Error::EmptyAlphabet)));
        assert!(matches!(Alphabet::new(['a', 'a']), Err(Error::DuplicateLetter('a'))));
        assert_eq!(Alphabet::black_white_red().bits_per_letter(), 2);
        assert_eq!(Alphabet::binary().bits_per_letter(), 1);
        assert_eq!(Alphabet::new(['x']).unwrap().bits_per_letter(), 0);
    }

    #[test]
    fn subpattern_identity_and_cell() {
        let p = bin(&["01", "10"]);
        assert_eq!(p.subpattern(Rect::new(0, 0, 2, 2)).unwrap(), p);
        let z = bin(&["00", "00"]);
        assert_eq!(z.subpattern(Rect::new(0, 0, 1, 1)).unwrap(), bin(&["0"]));
        assert!(p.subpattern(Rect::new(1, 1, 2, 1)).is_err());
        assert!(p.subpattern(Rect::new(-1, 0, 1, 1)).is_err());
    }

    #[test]
    fn invert_constant_and_involution() {
        let z = bin(&["000", "000", "000"]);
        assert_eq!(z.invert().unwrap(), bin(&["111", "111", "111"]));
        let p = bin(&["011", "100"]);
        assert_eq!(p.invert().unwrap().invert().unwrap(), p);
        let three = Pattern::from_rows(&Alphabet::black_white_red(), &["BW"]).unwrap();
        assert!(matches!(three.invert(), Err(Error::NonBinary(_))));
    }

    #[test]
    fn text_round_trip_and_truncation() {
        let p = Pattern::from_rows(&Alphabet::black_white_red(), &["BWR", "RRB"]).unwrap();
        let t = p.to_text();
        assert_eq!(t, "3 2 BWR\nBWR\nRRB\n");
        assert_eq!(Pattern::from_text(&t).unwrap(), p);
        assert!(Pattern::from_text("3 2 BWR\nBWR\n").is_err());
        assert!(Pattern::from_text("3 2 BWR\nBWR\nRR\n").is_err());
    }

    #[test]
    fn sparse_cells_render_with_holes() {
        let a = Alphabet::black_white_red();
        let p = Pattern::from_cells(&a, &[(Cell::new(0, 0), 2), (Cell::new(0, 2), 0)]).unwrap();
        assert_eq!(p.render(), "R\n.\nB\n");
        assert!(!p.is_rectangular());
        assert_eq!(Pattern::from_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<Pattern> = all_patterns(&Alphabet::binary(), 2, 1).collect();
        let rendered: Vec<String> = all.iter().map(|p| p.render()).collect();
        assert_eq!(rendered, ["00\n", "01\n", "10\n", "11\n"]);
        assert_eq!(all_patterns(&Alphabet::black_white_red(), 2, 2).count(), 81);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(7), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }
}
