//! Standard blocks `Q_i^j`, built level by level.

use crate::complexity::{
    incompressible_distinct_permutations, lex_first_incompressible, permutation_rank, proxy_incompressible_matrix,
    proxy_incompressible_permutations, tuple_threshold, MAX_EXACT_PROGRAM_LEN,
};
use crate::error::{Error, Result};
use crate::pattern::{Alphabet, Canvas, Pattern};

use super::params::{schedule_params, DeepConfig, DeepParams, Mode, Oracle};

/// How a level was put together from the level below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelWitness {
    /// Level 0 has no lower level.
    Base,
    /// Two-block mode: `R_i`, with entry `b` standing for `Q_{i−1}^b`.
    Matrix(Pattern),
    /// Multi-block mode: block `j` puts `Q_{i−1}^{π_j[p]}` at grid
    /// position `p` (row-major).
    Permutations(Vec<Vec<usize>>),
}

#[derive(Clone, Debug)]
pub struct Level {
    pub blocks: Vec<Pattern>,
    pub witness: LevelWitness,
}

/// Read access to standard blocks. Procedures that must not look at block
/// contents take this trait so a test can wrap it and count reads.
pub trait BlockStore {
    fn side(&self, level: usize) -> usize;
    fn block_count(&self, level: usize) -> usize;
    fn block(&self, level: usize, j: usize) -> &Pattern;
}

#[derive(Clone, Debug)]
pub struct StandardBlockFamily {
    params: DeepParams,
    levels: Vec<Level>,
}

pub fn block_name(level: usize, j: usize) -> String {
    format!("Q_{level}^{j}")
}

/// Tile an `n × n` grid with `blocks[ids[p]]` at row-major position `p`.
pub fn substitute(n: usize, ids: &[usize], blocks: &[Pattern]) -> Result<Pattern> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::Invalid("no blocks to substitute".into()))?;
    if ids.len() != n * n {
        return Err(Error::Invalid(format!("{} ids for a {n}×{n} grid", ids.len())));
    }
    let side = first.width();
    let mut canvas = Canvas::empty(n * side, n * side);
    for (p, &id) in ids.iter().enumerate() {
        let b = blocks
            .get(id)
            .ok_or_else(|| Error::Invalid(format!("block id {id} out of range")))?;
        canvas.blit(b.canvas(), (p % n) * side, (p / n) * side);
    }
    Ok(Pattern::from_canvas(first.alphabet(), canvas))
}

fn matrix_ids(r: &Pattern) -> Vec<usize> {
    r.bits().into_iter().map(usize::from).collect()
}

fn check_exact(threshold: usize, level: usize) -> Result<()> {
    if threshold > MAX_EXACT_PROGRAM_LEN + 1 {
        return Err(Error::Infeasible(format!(
            "level {level} needs complexity {threshold}, beyond exact enumeration \
             (programs up to {MAX_EXACT_PROGRAM_LEN} bits); use the proxy oracle or a structural override"
        )));
    }
    Ok(())
}

impl StandardBlockFamily {
    pub fn build(config: &DeepConfig) -> Result<Self> {
        let params = schedule_params(config)?;
        match params.mode() {
            Mode::TwoBlock => build_two_block(params),
            Mode::MultiBlock => build_multi_block(params),
        }
    }

    pub fn params(&self) -> &DeepParams {
        &self.params
    }

    pub fn depth(&self) -> usize {
        self.params.depth()
    }

    pub fn mode(&self) -> Mode {
        self.params.mode()
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// `R_i` of a two-block family.
    pub fn arrangement(&self, level: usize) -> Option<&Pattern> {
        match &self.levels.get(level)?.witness {
            LevelWitness::Matrix(r) => Some(r),
            _ => None,
        }
    }
}

impl BlockStore for StandardBlockFamily {
    fn side(&self, level: usize) -> usize {
        self.params.big_n[level]
    }

    fn block_count(&self, level: usize) -> usize {
        self.levels[level].blocks.len()
    }

    fn block(&self, level: usize, j: usize) -> &Pattern {
        &self.levels[level].blocks[j]
    }
}

fn build_two_block(params: DeepParams) -> Result<StandardBlockFamily> {
    let bin = Alphabet::binary();
    let n0 = params.n[0];
    let mut levels = vec![Level {
        blocks: vec![Pattern::filled(&bin, n0, n0, 0), Pattern::filled(&bin, n0, n0, 1)],
        witness: LevelWitness::Base,
    }];
    for i in 1..=params.depth() {
        let side = params.n[i];
        let r = match (&params.config.arrangements, params.config.oracle) {
            (Some(arr), _) => {
                let letters = arr[i - 1].bytes().map(|b| b - b'0');
                Pattern::from_letters(&bin, side, side, letters)?
            }
            (None, Oracle::Exact) => {
                let threshold = side * side;
                check_exact(threshold, i)?;
                lex_first_incompressible(side, params.budgets[i].t, threshold)?
            }
            (None, Oracle::Proxy) => proxy_incompressible_matrix(side, side * side, params.config.proxy_seed)?,
        };
        let q0 = substitute(side, &matrix_ids(&r), &levels[i - 1].blocks)?;
        let q1 = q0.invert()?;
        levels.push(Level {
            blocks: vec![q0, q1],
            witness: LevelWitness::Matrix(r),
        });
    }
    Ok(StandardBlockFamily { params, levels })
}

fn build_multi_block(params: DeepParams) -> Result<StandardBlockFamily> {
    let bin = Alphabet::binary();
    let n0 = params.n[0];
    let cells = n0 * n0;
    // lex-first distinct matrices are simply the first ℓ_0 bit strings
    let base: Vec<Pattern> = (0..params.blocks[0] as u128)
        .map(|code| {
            let letters = (0..cells).rev().map(|k| ((code >> k) & 1) as u8);
            Pattern::from_letters(&bin, n0, n0, letters)
        })
        .collect::<Result<_>>()?;
    let mut levels = vec![Level {
        blocks: base,
        witness: LevelWitness::Base,
    }];
    for i in 1..=params.depth() {
        let l = params.blocks[i - 1];
        let count = params.blocks[i];
        let perms = match params.config.oracle {
            Oracle::Exact => {
                check_exact(tuple_threshold(l, count), i)?;
                incompressible_distinct_permutations(l, count, params.budgets[i].t)?
            }
            Oracle::Proxy => proxy_incompressible_permutations(l, count, true, params.config.proxy_seed)?,
        };
        let side = params.n[i];
        let blocks = perms
            .iter()
            .map(|p| substitute(side, p, &levels[i - 1].blocks))
            .collect::<Result<Vec<_>>>()?;
        levels.push(Level {
            blocks,
            witness: LevelWitness::Permutations(perms),
        });
    }
    Ok(StandardBlockFamily { params, levels })
}

/// Classify each `N_{level−1}` sub-block of `q` as a lower standard block
/// and return the ids in row-major grid order.
pub fn extract_ids(q: &Pattern, level: usize, fam: &StandardBlockFamily) -> Result<Vec<usize>> {
    if level == 0 {
        return Err(Error::Invalid("level 0 blocks have no sub-block structure".into()));
    }
    if level > fam.depth() {
        return Err(Error::Invalid(format!("level {level} exceeds depth {}", fam.depth())));
    }
    let side = fam.side(level);
    if q.width() != side || q.height() != side {
        return Err(Error::Invalid(format!(
            "expected a {side}×{side} block, got {}×{}",
            q.width(),
            q.height()
        )));
    }
    let sub = fam.side(level - 1);
    let n = fam.params().n[level];
    let lower = &fam.level(level - 1).blocks;
    let mut ids = Vec::with_capacity(n * n);
    for gy in 0..n {
        for gx in 0..n {
            let part = q.subpattern(crate::pattern::Rect::square((gx * sub) as i64, (gy * sub) as i64, sub))?;
            let id = lower.iter().position(|b| *b == part).ok_or_else(|| {
                Error::Verification(format!("sub-block ({gx},{gy}) matches no level-{} block", level - 1))
            })?;
            ids.push(id);
        }
    }
    Ok(ids)
}

/// The arrangement matrix read back from a two-block level block.
pub fn extract_r(q: &Pattern, level: usize, fam: &StandardBlockFamily) -> Result<Pattern> {
    if fam.mode() != Mode::TwoBlock {
        return Err(Error::Invalid(
            "arrangement matrices exist only in two-block mode".into(),
        ));
    }
    let ids = extract_ids(q, level, fam)?;
    let n = fam.params().n[level];
    Pattern::from_letters(&Alphabet::binary(), n, n, ids.into_iter().map(|b| b as u8))
}

/// Ranks of the permutations of a multi-block level, for reports.
pub fn permutation_ranks(perms: &[Vec<usize>]) -> Vec<u128> {
    perms.iter().map(|p| permutation_rank(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structural(mode: Mode) -> StandardBlockFamily {
        StandardBlockFamily::build(&DeepConfig::structural(2, 3, mode)).unwrap()
    }

    #[test]
    fn two_block_levels() {
        let f = structural(Mode::TwoBlock);
        assert_eq!(f.block(0, 0).to_text(), "2 2 01\n00\n00\n");
        for i in 0..=3 {
            assert_eq!(f.block(i, 0).width(), [2, 4, 8, 16][i]);
            assert_eq!(f.block(i, 1), &f.block(i, 0).invert().unwrap());
        }
    }

    #[test]
    fn extract_and_substitute_are_inverse() {
        let mut c = DeepConfig::structural(2, 3, Mode::TwoBlock);
        c.arrangements = Some(vec!["0110".into(), "1000".into(), "0111".into()]);
        let f = StandardBlockFamily::build(&c).unwrap();
        for i in 1..=3 {
            let r = extract_r(f.block(i, 0), i, &f).unwrap();
            assert_eq!(&r, f.arrangement(i).unwrap());
            assert_eq!(extract_r(f.block(i, 1), i, &f).unwrap(), r.invert().unwrap());
            let again = substitute(2, &matrix_ids(&r), &f.level(i - 1).blocks).unwrap();
            assert_eq!(&again, f.block(i, 0));
        }
        assert!(extract_r(f.block(0, 0), 0, &f).is_err());
    }

    #[test]
    fn multi_block_uses_every_lower_block_once() {
        let f = structural(Mode::MultiBlock);
        for i in 1..=3 {
            let lower = f.block_count(i - 1);
            for j in 0..f.block_count(i) {
                let mut ids = extract_ids(f.block(i, j), i, &f).unwrap();
                ids.sort_unstable();
                assert_eq!(ids, (0..lower).collect::<Vec<_>>());
            }
            let blocks = &f.level(i).blocks;
            for a in 0..blocks.len() {
                for b in a + 1..blocks.len() {
                    assert_ne!(blocks[a], blocks[b]);
                }
            }
        }
    }

    #[test]
    fn exact_oracle_limit() {
        let e = StandardBlockFamily::build(&DeepConfig::new(2, 3, 1, Mode::TwoBlock)).unwrap_err();
        assert!(e.is_infeasible(), "{e}");
    }
}
