//! Simple patterns of the red-black shift and their profiles.
//!
//! A simple pattern is an `n × n` black/white square whose every row is a
//! run of black cells followed by white cells. Its profile lists the run
//! lengths, top row first.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{Alphabet, Letter, Pattern};
use crate::shift::RedBlackSpec;

const BLACK: Letter = RedBlackSpec::BLACK;
const WHITE: Letter = RedBlackSpec::WHITE;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        let n = counts.len();
        if let Some(&bad) = counts.iter().find(|&&k| k > n) {
            return Err(Error::Invalid(format!("profile entry {bad} exceeds side {n}")));
        }
        Ok(Profile(counts))
    }

    pub fn side(&self) -> usize {
        self.0.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// Every profile of side `n`, lexicographically.
    pub fn all(n: usize) -> Vec<Profile> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; n];
        loop {
            out.push(Profile(cur.clone()));
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < n {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Profile of a row-major `n × n` letter array, if it is simple.
pub(crate) fn profile_of_letters(letters: &[Letter], n: usize) -> Option<Profile> {
    let mut counts = Vec::with_capacity(n);
    for row in letters.chunks_exact(n) {
        let k = row.iter().take_while(|&&l| l == BLACK).count();
        if row[k..].iter().any(|&l| l != WHITE) {
            return None;
        }
        counts.push(k);
    }
    Some(Profile(counts))
}

/// Defined exactly on simple patterns over the black/white/red alphabet.
pub fn profile(p: &Pattern) -> Option<Profile> {
    let n = p.width();
    if p.height() != n || !p.is_rectangular() || *p.alphabet() != Alphabet::black_white_red() {
        return None;
    }
    profile_of_letters(&p.letters(), n)
}

/// Coordinate-wise comparison.
pub fn profile_leq(a: &Profile, b: &Profile) -> Result<bool> {
    if a.side() != b.side() {
        return Err(Error::Invalid(format!(
            "profiles of sides {} and {} are not comparable",
            a.side(),
            b.side()
        )));
    }
    Ok(a.0.iter().zip(&b.0).all(|(x, y)| x <= y))
}

/// The simple pattern with the given profile.
pub fn simple_pattern(prof: &Profile) -> Pattern {
    let n = prof.side();
    let letters = prof
        .0
        .iter()
        .flat_map(|&k| (0..n).map(move |x| if x < k { BLACK } else { WHITE }));
    Pattern::from_letters(&Alphabet::black_white_red(), n, n, letters).expect("valid profile")
}

/// Largest side the census enumerates (3^25 patterns).
pub const CENSUS_MAX_SIDE: usize = 5;

/// Number of `n × n` black/white/red patterns with a defined profile,
/// counted by visiting every pattern.
pub fn simple_pattern_census(n: usize) -> Result<u64> {
    if n == 0 || n > CENSUS_MAX_SIDE {
        return Err(Error::Infeasible(format!(
            "census enumerates 3^(n²) patterns; side {n} is outside 1..={CENSUS_MAX_SIDE}"
        )));
    }
    let cells = n * n;
    let total = 3u64.pow(cells as u32);
    Ok((0..total)
        .into_par_iter()
        .map_init(
            || vec![0 as Letter; cells],
            |buf, mut code| {
                for c in buf.iter_mut().rev() {
                    *c = (code % 3) as Letter;
                    code /= 3;
                }
                u64::from(profile_of_letters(buf, n).is_some())
            },
        )
        .sum())
}
