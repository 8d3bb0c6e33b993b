//! Level sizes and time budgets of a standard-block family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Two blocks per level, the second the inversion of the first.
    TwoBlock,
    /// `ℓ_i` blocks per level, each arranging every lower block once.
    MultiBlock,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    /// Exhaustive program enumeration on the fixed machine.
    Exact,
    /// Compressor stand-in; results are not incompressibility certificates.
    Proxy,
}

/// Uniform replacements for the default budget formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_t: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
}

/// Everything a family build depends on. Serialized into archive
/// manifests so that a build can be replayed from the manifest alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeepConfig {
    pub n0: usize,
    pub c: u32,
    pub depth: usize,
    pub mode: Mode,
    pub oracle: Oracle,
    /// Explicit `n_0, n_1, …`; bypasses the growth schedule and the `c ≥ 3`
    /// check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structural_override: Option<Vec<usize>>,
    #[serde(default)]
    pub budgets: BudgetOverride,
    /// Explicit arrangement matrices `R_1, …, R_depth` as row-major bit
    /// strings (two-block mode only); replaces the incompressibility search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrangements: Option<Vec<String>>,
    /// Seed of the proxy oracle's candidate order.
    #[serde(default)]
    pub proxy_seed: u64,
}

impl DeepConfig {
    pub fn new(n0: usize, c: u32, depth: usize, mode: Mode) -> Self {
        DeepConfig {
            n0,
            c,
            depth,
            mode,
            oracle: Oracle::Exact,
            structural_override: None,
            budgets: BudgetOverride::default(),
            arrangements: None,
            proxy_seed: 0,
        }
    }

    /// Constant side `n` at every level, `depth + 1` levels.
    pub fn structural(n: usize, depth: usize, mode: Mode) -> Self {
        DeepConfig {
            structural_override: Some(vec![n; depth + 1]),
            ..DeepConfig::new(n, 3, depth, mode)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBudgets {
    /// Budget under which subpatterns are measured, `T(N_i)`.
    pub big_t: u64,
    /// Budget of the block-level complexity claims, `t′_i`.
    pub t_prime: u64,
    /// Budget of the arrangement search, `t_i`.
    pub t: u64,
}

/// Validated parameters with every derived quantity materialized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeepParams {
    pub config: DeepConfig,
    /// `n_0, …, n_depth`.
    pub n: Vec<usize>,
    /// `N_i = n_0 ⋯ n_i`.
    pub big_n: Vec<usize>,
    /// Blocks per level: 2 in two-block mode, `ℓ_i = n_{i+1}²` otherwise.
    pub blocks: Vec<usize>,
    /// Per level; level 0 has no search and carries zeros.
    pub budgets: Vec<LevelBudgets>,
    pub flags: Vec<String>,
}

pub const FLAG_NON_THEOREM: &str = "non-theorem-parameters";
pub const FLAG_PROXY: &str = "proxy-oracle";
pub const FLAG_ARRANGEMENTS: &str = "explicit-arrangements";

fn overflow(what: &str) -> Error {
    Error::Infeasible(format!("{what} overflows 64 bits"))
}

/// `n_{i+1} = N_i^c`.
fn next_side(big_n: usize, c: u32) -> Result<usize> {
    big_n.checked_pow(c).ok_or_else(|| overflow("n_{i+1}"))
}

impl DeepParams {
    pub fn depth(&self) -> usize {
        self.config.depth
    }

    pub fn mode(&self) -> Mode {
        self.config.mode
    }
}

/// Validate a configuration and derive level sizes, block counts and
/// budgets.
pub fn schedule_params(config: &DeepConfig) -> Result<DeepParams> {
    if config.n0 < 2 {
        return Err(Error::Invalid(format!("n0 must be at least 2, got {}", config.n0)));
    }
    let depth = config.depth;
    let mut flags = Vec::new();
    let mut n = Vec::with_capacity(depth + 1);
    let mut big_n = Vec::with_capacity(depth + 1);
    // one side beyond the top level fixes the top block count in
    // multi-block mode
    let mut next_top = None;
    match &config.structural_override {
        Some(list) => {
            if list.len() < depth + 1 {
                return Err(Error::Invalid(format!(
                    "structural override lists {} sides, depth {} needs {}",
                    list.len(),
                    depth,
                    depth + 1
                )));
            }
            if list[0] != config.n0 {
                return Err(Error::Invalid(format!(
                    "structural override starts with {} but n0 is {}",
                    list[0], config.n0
                )));
            }
            if let Some(&bad) = list.iter().find(|&&s| s < 1) {
                return Err(Error::Invalid(format!("side {bad} in structural override")));
            }
            let mut acc = 1usize;
            for &s in &list[..=depth] {
                acc = acc.checked_mul(s).ok_or_else(|| overflow("N_i"))?;
                n.push(s);
                big_n.push(acc);
            }
            next_top = Some(*list.get(depth + 1).unwrap_or(&list[depth]));
            flags.push(FLAG_NON_THEOREM.to_string());
        }
        None => {
            if config.c < 3 {
                return Err(Error::Invalid(format!(
                    "exponent c must be at least 3 without a structural override, got {}",
                    config.c
                )));
            }
            n.push(config.n0);
            big_n.push(config.n0);
            for i in 0..depth {
                let s = next_side(big_n[i], config.c)?;
                let acc = big_n[i].checked_mul(s).ok_or_else(|| overflow("N_i"))?;
                n.push(s);
                big_n.push(acc);
            }
        }
    }
    if config.oracle == Oracle::Proxy {
        flags.push(FLAG_PROXY.to_string());
    }
    if let Some(arr) = &config.arrangements {
        if config.mode != Mode::TwoBlock {
            return Err(Error::Invalid("explicit arrangements need two-block mode".into()));
        }
        if arr.len() != depth {
            return Err(Error::Invalid(format!(
                "{} arrangements given, depth {} needs {}",
                arr.len(),
                depth,
                depth
            )));
        }
        for (i, r) in arr.iter().enumerate() {
            let side = n[i + 1];
            if r.len() != side * side || !r.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::Invalid(format!(
                    "arrangement R_{} must be {} bits of 0/1",
                    i + 1,
                    side * side
                )));
            }
        }
        flags.push(FLAG_ARRANGEMENTS.to_string());
    }

    let blocks = match config.mode {
        Mode::TwoBlock => vec![2; depth + 1],
        Mode::MultiBlock => {
            let mut b = Vec::with_capacity(depth + 1);
            for i in 0..=depth {
                let side = if i < depth {
                    n[i + 1]
                } else {
                    match next_top {
                        Some(s) => s,
                        None => next_side(big_n[depth], config.c)?,
                    }
                };
                b.push(side.checked_mul(side).ok_or_else(|| overflow("ℓ_i"))?);
            }
            let cells = n[0] * n[0];
            let feasible = cells >= 64 || (1u128 << cells) > b[0] as u128;
            if !feasible {
                return Err(Error::Infeasible(format!(
                    "base level needs {} distinct {}×{} matrices but only 2^{} = {} exist",
                    b[0],
                    n[0],
                    n[0],
                    cells,
                    1u128 << cells
                )));
            }
            b
        }
    };

    let budgets = schedule_budgets(&big_n, &blocks, &config.budgets);
    Ok(DeepParams {
        config: config.clone(),
        n,
        big_n,
        blocks,
        budgets,
        flags,
    })
}

/// Defaults: `T(N) = N²`, `t′ = 2T + N³`, `t = 2t′ + N³ + Σ_{j<i} ℓ_j N_j²`,
/// the last sum standing for the cost of producing every lower block.
fn schedule_budgets(big_n: &[usize], blocks: &[usize], o: &BudgetOverride) -> Vec<LevelBudgets> {
    let mut out = Vec::with_capacity(big_n.len());
    let mut lower_cost = 0u64;
    for (i, &side) in big_n.iter().enumerate() {
        let s = side as u64;
        let sq = s.saturating_mul(s);
        let cube = sq.saturating_mul(s);
        if i == 0 {
            out.push(LevelBudgets {
                big_t: 0,
                t_prime: 0,
                t: 0,
            });
        } else {
            let big_t = o.big_t.unwrap_or(sq);
            let t_prime = o
                .t_prime
                .unwrap_or_else(|| big_t.saturating_mul(2).saturating_add(cube));
            let t = o.t.unwrap_or_else(|| {
                t_prime
                    .saturating_mul(2)
                    .saturating_add(cube)
                    .saturating_add(lower_cost)
            });
            out.push(LevelBudgets { big_t, t_prime, t });
        }
        lower_cost = lower_cost.saturating_add((blocks[i] as u64).saturating_mul(sq));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_schedule() {
        let p = schedule_params(&DeepConfig::new(2, 3, 1, Mode::TwoBlock)).unwrap();
        assert_eq!(p.n, vec![2, 8]);
        assert_eq!(p.big_n, vec![2, 16]);
        assert!(p.flags.is_empty());
    }

    #[test]
    fn small_exponent_rejected() {
        assert!(schedule_params(&DeepConfig::new(2, 2, 1, Mode::TwoBlock)).is_err());
    }

    #[test]
    fn multi_block_base_must_fit() {
        let e = schedule_params(&DeepConfig::new(2, 3, 1, Mode::MultiBlock)).unwrap_err();
        assert!(e.is_infeasible(), "{e}");
    }

    #[test]
    fn structural_override() {
        let p = schedule_params(&DeepConfig::structural(2, 3, Mode::TwoBlock)).unwrap();
        assert_eq!(p.big_n, vec![2, 4, 8, 16]);
        assert_eq!(p.flags, vec![FLAG_NON_THEOREM.to_string()]);
        let m = schedule_params(&DeepConfig::structural(2, 3, Mode::MultiBlock)).unwrap();
        assert_eq!(m.blocks, vec![4, 4, 4, 4]);
    }

    #[test]
    fn default_budgets() {
        let p = schedule_params(&DeepConfig::structural(2, 1, Mode::TwoBlock)).unwrap();
        // N_1 = 4: T = 16, t' = 32 + 64, t = 192 + 64 + 2·2²
        assert_eq!(
            p.budgets[1],
            LevelBudgets {
                big_t: 16,
                t_prime: 96,
                t: 264
            }
        );
    }

    #[test]
    fn budget_overrides_propagate() {
        let mut c = DeepConfig::structural(2, 1, Mode::TwoBlock);
        c.budgets.big_t = Some(1);
        let p = schedule_params(&c).unwrap();
        assert_eq!(p.budgets[1].t_prime, 2 + 64);
        c.budgets.t = Some(5);
        assert_eq!(schedule_params(&c).unwrap().budgets[1].t, 5);
    }

    #[test]
    fn overflow_is_infeasible() {
        assert!(schedule_params(&DeepConfig::new(2, 3, 4, Mode::TwoBlock))
            .unwrap_err()
            .is_infeasible());
    }
}
