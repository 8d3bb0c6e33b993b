//! Closure membership and block reconstruction.
//!
//! A pattern of side at most `N_i` belongs to the closure iff it occurs in
//! a 2×2 array of level-`i` standard blocks, `i` minimal with `N_i` at
//! least the pattern's longer side. Higher levels need not be tried: every
//! higher block is itself tiled by level-`i` blocks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::{Canvas, Pattern};

use super::family::{BlockStore, StandardBlockFamily};
use super::params::Mode;

/// Where a pattern was found: its top-left corner sits at `offset` inside
/// the `2N × 2N` array with blocks `ids = [top-left, top-right,
/// bottom-left, bottom-right]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MemberWitness {
    pub level: usize,
    pub ids: [usize; 4],
    pub offset: (usize, usize),
}

/// Minimal level whose blocks are at least `side` wide.
pub fn decision_level(side: usize, store: &dyn BlockStore, depth: usize) -> Result<usize> {
    (0..=depth).find(|&i| store.side(i) >= side).ok_or_else(|| {
        Error::Invalid(format!(
            "side {side} exceeds the decidable range (N_depth = {})",
            store.side(depth)
        ))
    })
}

/// Whether the part of `p` covering quadrant `(qx, qy)` of the array agrees
/// with `block` when `p` sits at `(ox, oy)`.
fn quadrant_agrees(p: &Pattern, block: &Pattern, ox: usize, oy: usize, qx: usize, qy: usize) -> bool {
    let n = block.width();
    let (ax0, ay0) = (qx * n, qy * n);
    let x_lo = ax0.max(ox);
    let x_hi = (ax0 + n).min(ox + p.width());
    let y_lo = ay0.max(oy);
    let y_hi = (ay0 + n).min(oy + p.height());
    for ay in y_lo..y_hi {
        for ax in x_lo..x_hi {
            if p.get(ax - ox, ay - oy) != block.get(ax - ax0, ay - ay0) {
                return false;
            }
        }
    }
    true
}

/// Decide membership. Offsets are scanned row-major; at each offset the
/// four quadrants are matched independently and the least matching id is
/// taken for each (0 for quadrants `p` does not touch).
pub fn member(p: &Pattern, fam: &StandardBlockFamily) -> Result<Option<MemberWitness>> {
    if !p.is_rectangular() {
        return Err(Error::Invalid("membership is decided for rectangular patterns".into()));
    }
    if !p.alphabet().is_binary() {
        return Err(Error::NonBinary(p.alphabet().as_string()));
    }
    let level = decision_level(p.extent(), fam, fam.depth())?;
    let n = fam.side(level);
    let blocks = &fam.level(level).blocks;
    for oy in 0..=2 * n - p.height() {
        for ox in 0..=2 * n - p.width() {
            let mut ids = [0usize; 4];
            let found = (0..4).all(|q| {
                let (qx, qy) = (q % 2, q / 2);
                match blocks.iter().position(|b| quadrant_agrees(p, b, ox, oy, qx, qy)) {
                    Some(j) => {
                        ids[q] = j;
                        true
                    }
                    None => false,
                }
            });
            if found {
                return Ok(Some(MemberWitness {
                    level,
                    ids,
                    offset: (ox, oy),
                }));
            }
        }
    }
    Ok(None)
}

/// Reassemble `Q_level^0` of a two-block family from an `N × N` pattern
/// found at `offset` in the array with the given block ids.
///
/// Every cell of the standard block shows up exactly once in `p`, inside
/// one of the four array quadrants; a quadrant holding `Q^1` contributes
/// inverted cells. Only `store.side` is consulted, never block contents.
pub fn reconstruct_block(
    p: &Pattern,
    offset: (usize, usize),
    ids: [usize; 4],
    store: &dyn BlockStore,
    level: usize,
) -> Result<Pattern> {
    let n = store.side(level);
    if p.width() != n || p.height() != n || !p.is_rectangular() {
        return Err(Error::Invalid(format!(
            "expected a {n}×{n} pattern, got {}×{}",
            p.width(),
            p.height()
        )));
    }
    if !p.alphabet().is_binary() {
        return Err(Error::NonBinary(p.alphabet().as_string()));
    }
    let (ox, oy) = offset;
    if ox > n || oy > n {
        return Err(Error::Invalid(format!("offset ({ox},{oy}) outside [0,{n}]²")));
    }
    if let Some(bad) = ids.iter().find(|&&j| j > 1) {
        return Err(Error::Invalid(format!("block id {bad} in a two-block witness")));
    }
    let mut canvas = Canvas::empty(n, n);
    for y in 0..n {
        for x in 0..n {
            let qx = usize::from(x < ox);
            let qy = usize::from(y < oy);
            let (ax, ay) = (x + qx * n, y + qy * n);
            let l = p.get(ax - ox, ay - oy).expect("rectangular pattern");
            let flip = ids[qy * 2 + qx] as u8;
            canvas.set(x, y, Some(l ^ flip));
        }
    }
    Ok(Pattern::from_canvas(p.alphabet(), canvas))
}

/// Convenience wrapper: decide membership of an `N_i × N_i` pattern and
/// rebuild `Q_i^0` from it.
pub fn reconstruct_from_member(p: &Pattern, fam: &StandardBlockFamily) -> Result<Pattern> {
    if fam.mode() != Mode::TwoBlock {
        return Err(Error::Invalid(
            "reconstruction is defined for two-block families".into(),
        ));
    }
    let w = member(p, fam)?.ok_or_else(|| Error::Invalid("pattern is not in the closure".into()))?;
    reconstruct_block(p, w.offset, w.ids, fam, w.level)
}
