//! Two-part code for patterns tiled by admissible `k × k` blocks: a
//! dictionary of every admissible block, then one dictionary index per
//! tile.

use serde::Serialize;

use crate::admissibility::admissible_patterns;
use crate::error::{Error, Result};
use crate::pattern::{ceil_log2, Alphabet, Canvas, Pattern, Rect};
use crate::shift::ShiftSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    /// Tiles per side.
    pub n: usize,
    pub k: usize,
    pub dictionary_size: usize,
    pub header_bits: usize,
    pub dictionary_bits: usize,
    pub index_bits: usize,
    /// Dictionary plus indices; the header is excluded.
    pub payload_bits: usize,
    /// `L_k · k² · ceil(log₂|Σ|) + N² · ceil(log₂ L_k)`.
    pub formula_bits: usize,
    pub total_bits: usize,
}

#[derive(Clone, Debug)]
pub struct TwoPartCode {
    pub bits: Vec<bool>,
    pub report: CodeReport,
}

/// Elias gamma code of `v ≥ 1`.
fn gamma(v: usize, out: &mut Vec<bool>) {
    let width = usize::BITS - v.leading_zeros();
    out.extend(std::iter::repeat_n(false, width as usize - 1));
    for k in (0..width).rev() {
        out.push((v >> k) & 1 == 1);
    }
}

fn fixed(v: usize, width: u32, out: &mut Vec<bool>) {
    for k in (0..width).rev() {
        out.push((v >> k) & 1 == 1);
    }
}

struct Reader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl Reader<'_> {
    fn bit(&mut self) -> Result<bool> {
        let b = *self
            .bits
            .get(self.pos)
            .ok_or_else(|| Error::Parse("code ends early".into()))?;
        self.pos += 1;
        Ok(b)
    }

    fn gamma(&mut self) -> Result<usize> {
        let mut zeros = 0;
        while !self.bit()? {
            zeros += 1;
            if zeros >= usize::BITS {
                return Err(Error::Parse("gamma code too long".into()));
            }
        }
        let mut v = 1usize;
        for _ in 0..zeros {
            v = (v << 1) | usize::from(self.bit()?);
        }
        Ok(v)
    }

    fn fixed(&mut self, width: u32) -> Result<usize> {
        let mut v = 0usize;
        for _ in 0..width {
            v = (v << 1) | usize::from(self.bit()?);
        }
        Ok(v)
    }
}

/// Encode `p`, an `(N·k) × (N·k)` pattern, against the dictionary of
/// `margin`-extendable `k × k` patterns of `spec` (lexicographic order).
pub fn two_part_code(p: &Pattern, k: usize, spec: &dyn ShiftSpec, margin: usize) -> Result<TwoPartCode> {
    if k == 0 || !p.is_rectangular() || p.width() != p.height() || !p.width().is_multiple_of(k) || p.width() == 0 {
        return Err(Error::Invalid(format!(
            "expected a square pattern with side a positive multiple of {k}, got {}×{}",
            p.width(),
            p.height()
        )));
    }
    if p.alphabet() != spec.alphabet() {
        return Err(Error::AlphabetMismatch(
            p.alphabet().as_string(),
            spec.alphabet().as_string(),
        ));
    }
    let n = p.width() / k;
    let dict = admissible_patterns(spec, k, margin)?;
    let bpl = spec.alphabet().bits_per_letter();
    let index_width = ceil_log2(dict.len() as u128);

    let mut bits = Vec::new();
    gamma(n, &mut bits);
    gamma(k, &mut bits);
    gamma(dict.len(), &mut bits);
    let header_bits = bits.len();
    for d in &dict {
        for l in d.letters() {
            fixed(usize::from(l), bpl, &mut bits);
        }
    }
    let dictionary_bits = bits.len() - header_bits;
    for ty in 0..n {
        for tx in 0..n {
            let tile = p.subpattern(Rect::square((tx * k) as i64, (ty * k) as i64, k))?;
            let idx = dict
                .binary_search_by(|d| d.lex_cmp(&tile))
                .map_err(|_| Error::Invalid(format!("tile ({tx},{ty}) is not in the dictionary")))?;
            fixed(idx, index_width, &mut bits);
        }
    }
    let index_bits = bits.len() - header_bits - dictionary_bits;
    let report = CodeReport {
        n,
        k,
        dictionary_size: dict.len(),
        header_bits,
        dictionary_bits,
        index_bits,
        payload_bits: dictionary_bits + index_bits,
        formula_bits: dict.len() * k * k * bpl as usize + n * n * index_width as usize,
        total_bits: bits.len(),
    };
    Ok(TwoPartCode { bits, report })
}

/// Invert [`two_part_code`]. Needs only the alphabet, not the spec.
pub fn decode_two_part(bits: &[bool], alphabet: &Alphabet) -> Result<Pattern> {
    let mut r = Reader { bits, pos: 0 };
    let n = r.gamma()?;
    let k = r.gamma()?;
    let size = r.gamma()?;
    let bpl = alphabet.bits_per_letter();
    let mut dict = Vec::with_capacity(size);
    for _ in 0..size {
        let mut letters = Vec::with_capacity(k * k);
        for _ in 0..k * k {
            let l = r.fixed(bpl)?;
            if l >= alphabet.len() {
                return Err(Error::Parse(format!("letter index {l} outside alphabet")));
            }
            letters.push(l as u8);
        }
        dict.push(Pattern::from_letters(alphabet, k, k, letters)?);
    }
    let width = ceil_log2(size as u128);
    let mut canvas = Canvas::empty(n * k, n * k);
    for ty in 0..n {
        for tx in 0..n {
            let idx = r.fixed(width)?;
            let tile = dict
                .get(idx)
                .ok_or_else(|| Error::Parse(format!("index {idx} beyond dictionary of {size}")))?;
            canvas.blit(tile.canvas(), tx * k, ty * k);
        }
    }
    if r.pos != bits.len() {
        return Err(Error::Parse(format!("{} trailing bits", bits.len() - r.pos)));
    }
    Ok(Pattern::from_canvas(alphabet, canvas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::FiniteSpec;

    #[test]
    fn gamma_round_trip() {
        for v in 1..200 {
            let mut b = Vec::new();
            gamma(v, &mut b);
            assert_eq!(b.len(), 2 * (usize::BITS - v.leading_zeros()) as usize - 1);
            assert_eq!(Reader { bits: &b, pos: 0 }.gamma().unwrap(), v);
        }
    }

    #[test]
    fn hard_square_payload() {
        let hs = FiniteSpec::hard_square();
        let p = Pattern::from_rows(
            hs.alphabet(),
            &[
                "10000100", "00101000", "01000010", "00010000", "10000001", "00100100", "10001000", "00100010",
            ],
        )
        .unwrap();
        let code = two_part_code(&p, 2, &hs, 0).unwrap();
        assert_eq!(code.report.dictionary_size, 7);
        assert_eq!(code.report.payload_bits, 76);
        assert_eq!(code.report.formula_bits, 76);
        assert_eq!(decode_two_part(&code.bits, hs.alphabet()).unwrap(), p);
    }

    #[test]
    fn inadmissible_tile_rejected() {
        let hs = FiniteSpec::hard_square();
        let p = Pattern::from_rows(hs.alphabet(), &["11", "00"]).unwrap();
        assert!(two_part_code(&p, 2, &hs, 0).is_err());
    }
}
