//! Local admissibility, margin-bounded extension and lexicographically
//! first completions by backtracking.
//!
//! Global admissibility has no finite certificate in general. A pattern is
//! called `m`-extendable when it sits in the middle of some locally
//! admissible pattern with `m` extra cells on every side; every globally
//! admissible pattern is `m`-extendable for every `m`, not conversely.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pattern::{all_patterns, Alphabet, Canvas, Letter, Pattern};
use crate::shift::{Matcher, ShiftSpec};

/// Host canvas with some uncolored cells and the order in which the search
/// assigns them. The order fixes the meaning of "lexicographically first".
#[derive(Clone, Debug)]
pub struct CompletionRegion {
    alphabet: Alphabet,
    host: Canvas,
    free: Vec<(usize, usize)>,
}

impl CompletionRegion {
    /// Every uncolored cell of `host` is free, taken in row-major order.
    pub fn row_major(alphabet: &Alphabet, host: Canvas) -> Self {
        let mut free = Vec::new();
        for y in 0..host.height {
            for x in 0..host.width {
                if host.get(x, y).is_none() {
                    free.push((x, y));
                }
            }
        }
        CompletionRegion {
            alphabet: alphabet.clone(),
            host,
            free,
        }
    }

    /// Explicit free-cell order. The listed cells must be exactly the
    /// uncolored cells of `host`, each once.
    pub fn with_order(alphabet: &Alphabet, host: Canvas, order: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = vec![false; host.cells.len()];
        for &(x, y) in &order {
            if x >= host.width || y >= host.height {
                return Err(Error::Invalid(format!("free cell ({x},{y}) outside host")));
            }
            let i = host.idx(x, y);
            if host.cells[i].is_some() {
                return Err(Error::Invalid(format!("free cell ({x},{y}) is already colored")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Invalid(format!("free cell ({x},{y}) listed twice")));
            }
        }
        if let Some(i) = (0..host.cells.len()).find(|&i| host.cells[i].is_none() && !seen[i]) {
            return Err(Error::Invalid(format!(
                "uncolored cell ({},{}) missing from the order",
                i % host.width,
                i / host.width
            )));
        }
        Ok(CompletionRegion {
            alphabet: alphabet.clone(),
            host,
            free: order,
        })
    }

    pub fn free_cells(&self) -> &[(usize, usize)] {
        &self.free
    }

    pub fn host(&self) -> &Canvas {
        &self.host
    }
}

/// Depth-first search assigning `free` in order, letters in alphabet order.
/// On success the canvas holds the lexicographically first solution.
pub(crate) fn backtrack(canvas: &mut Canvas, free: &[(usize, usize)], matcher: &dyn Matcher, letters: usize) -> bool {
    let letters = letters as Letter;
    let mut next = vec![0 as Letter; free.len()];
    let mut i = 0;
    while i < free.len() {
        let (x, y) = free[i];
        let mut placed = false;
        while next[i] < letters {
            let l = next[i];
            next[i] += 1;
            canvas.set(x, y, Some(l));
            if !matcher.violation_at(canvas, x, y) {
                placed = true;
                break;
            }
        }
        if placed {
            i += 1;
        } else {
            canvas.set(x, y, None);
            next[i] = 0;
            if i == 0 {
                return false;
            }
            i -= 1;
        }
    }
    true
}

/// Lexicographically least assignment to the region's free cells that
/// leaves the whole host locally admissible; `None` if there is none or
/// the colored part is already inadmissible.
pub fn lex_first_completion(region: &CompletionRegion, spec: &dyn ShiftSpec) -> Option<Pattern> {
    let host = &region.host;
    let matcher = spec.matcher(host.width.max(host.height));
    complete_with(region, matcher.as_ref())
}

pub(crate) fn complete_with(region: &CompletionRegion, matcher: &dyn Matcher) -> Option<Pattern> {
    if !matcher.is_admissible(&region.host) {
        return None;
    }
    let mut canvas = region.host.clone();
    backtrack(&mut canvas, &region.free, matcher, region.alphabet.len())
        .then(|| Pattern::from_canvas(&region.alphabet, canvas))
}

/// Lex-first locally admissible `(w + 2m) × (h + 2m)` pattern with `p` in
/// the middle, or `None`.
pub fn extendable(p: &Pattern, spec: &dyn ShiftSpec, margin: usize) -> Option<Pattern> {
    let side = p.extent() + 2 * margin;
    let matcher = spec.matcher(side);
    extendable_with(p, spec.alphabet(), matcher.as_ref(), margin)
}

fn extendable_with(p: &Pattern, alphabet: &Alphabet, matcher: &dyn Matcher, margin: usize) -> Option<Pattern> {
    let mut host = Canvas::empty(p.width() + 2 * margin, p.height() + 2 * margin);
    host.blit(p.canvas(), margin, margin);
    complete_with(&CompletionRegion::row_major(alphabet, host), matcher)
}

const ENUMERATION_LIMIT: u128 = 1 << 32;

fn check_enumerable(alphabet: &Alphabet, n: usize) -> Result<()> {
    let cells = (n * n) as u32;
    match (alphabet.len() as u128).checked_pow(cells) {
        Some(total) if total <= ENUMERATION_LIMIT => Ok(()),
        _ => Err(Error::Infeasible(format!(
            "{}^{} candidate patterns exceed the enumeration limit",
            alphabet.len(),
            cells
        ))),
    }
}

/// Number of `n × n` patterns that are `margin`-extendable.
pub fn count_admissible(spec: &dyn ShiftSpec, n: usize, margin: usize) -> Result<u64> {
    check_enumerable(spec.alphabet(), n)?;
    let matcher = spec.matcher(n + 2 * margin);
    let alphabet = spec.alphabet();
    Ok(all_patterns(alphabet, n, n)
        .par_bridge()
        .filter(|p| extendable_with(p, alphabet, matcher.as_ref(), margin).is_some())
        .count() as u64)
}

/// The `margin`-extendable `n × n` patterns in lexicographic order.
pub fn admissible_patterns(spec: &dyn ShiftSpec, n: usize, margin: usize) -> Result<Vec<Pattern>> {
    check_enumerable(spec.alphabet(), n)?;
    let matcher = spec.matcher(n + 2 * margin);
    let alphabet = spec.alphabet();
    let candidates: Vec<Pattern> = all_patterns(alphabet, n, n).collect();
    Ok(candidates
        .into_par_iter()
        .filter(|p| extendable_with(p, alphabet, matcher.as_ref(), margin).is_some())
        .collect())
}
