//! Exhaustive search over programs of the fixed machine.
//!
//! Programs are tried in length-ascending order and, within a length, in
//! lexicographic order (so VM programs before literal ones). Every VM body
//! of `k` opcodes first appears at length `3k + 1`; the longer variants
//! with 1–2 trailing bits behave identically, so each body is run once.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::machine::{Capped, Expect, Program, Vm, VmExit};
use super::perm::{factorial_checked, permutation_unrank, rank_width, tuple_threshold};
use super::proxy::{proxy_upper_bound, PROXY_HEADER_BITS};
use crate::error::{Error, Result};
use crate::pattern::{Alphabet, Pattern};

/// Longest program length the exact search accepts; beyond it the number
/// of VM bodies (8 per 3 bits) makes enumeration impractical.
pub const MAX_EXACT_PROGRAM_LEN: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityResult {
    /// `None` means no program up to `max_len` produced the string.
    pub value: Option<usize>,
    pub witness: Option<Program>,
    pub budget: u64,
    pub max_len: usize,
}

impl ComplexityResult {
    pub fn to_json(&self) -> Value {
        json!({
            "value": match self.value {
                Some(v) => json!(v),
                None => json!("inf"),
            },
            "witness_bits": self.witness.as_ref().map(|p| p.to_string()),
            "budget": self.budget,
            "max_len": self.max_len,
        })
    }
}

fn check_len(max_len: usize) -> Result<()> {
    if max_len > MAX_EXACT_PROGRAM_LEN {
        return Err(Error::Infeasible(format!(
            "exact search up to length {max_len} exceeds the cap of {MAX_EXACT_PROGRAM_LEN}"
        )));
    }
    Ok(())
}

fn body_count(k: usize) -> u64 {
    1u64 << (3 * k)
}

fn vm_program(code: u64, k: usize) -> Program {
    let mut bits = Vec::with_capacity(3 * k + 1);
    bits.push(false);
    for i in (0..3 * k).rev() {
        bits.push((code >> i) & 1 == 1);
    }
    Program::new(bits)
}

/// Lex-least VM body of `k` opcodes printing exactly `x` within `budget`.
fn first_vm_producer(x: &[bool], k: usize, budget: u64) -> Option<u64> {
    (0..body_count(k))
        .into_par_iter()
        .map_init(Vm::new, |vm, code| {
            if !vm.load_code(code, k) {
                return (code, false);
            }
            let mut sink = Expect { target: x, pos: 0 };
            let ok = matches!(vm.run(budget, &mut sink), VmExit::Halted(_)) && sink.pos == x.len();
            (code, ok)
        })
        .find_first(|&(_, ok)| ok)
        .map(|(code, _)| code)
}

/// Length of the shortest program printing exactly `x` and halting within
/// `budget` steps, searching lengths up to `max_len`.
pub fn ctime(x: &[bool], max_len: usize, budget: u64) -> Result<ComplexityResult> {
    check_len(max_len)?;
    let result = |value: Option<usize>, witness: Option<Program>| ComplexityResult {
        value,
        witness,
        budget,
        max_len,
    };
    if x.is_empty() {
        return Ok(result(Some(0), Some(Program::default())));
    }
    for len in 1..=max_len {
        if (len - 1) % 3 == 0 {
            let k = (len - 1) / 3;
            if let Some(code) = first_vm_producer(x, k, budget) {
                return Ok(result(Some(len), Some(vm_program(code, k))));
            }
        }
        if len == x.len() + 1 && len as u64 <= budget {
            return Ok(result(Some(len), Some(Program::literal(x))));
        }
    }
    Ok(result(None, None))
}

/// The strings of one fixed length that some short program prints.
#[derive(Clone, Debug)]
pub struct CompressibleSet {
    /// A literal program fits, so every string of the length is covered.
    pub all: bool,
    pub outputs: HashSet<Vec<bool>>,
}

impl CompressibleSet {
    pub fn contains(&self, x: &[bool]) -> bool {
        self.all || self.outputs.contains(x)
    }
}

/// Every string of length `out_len` printed by a program of length at most
/// `max_len` halting within `budget` steps.
pub fn compressible_outputs(out_len: usize, max_len: usize, budget: u64) -> Result<CompressibleSet> {
    check_len(max_len)?;
    let all = out_len < max_len && (out_len as u64) < budget;
    let mut outputs = HashSet::new();
    if out_len == 0 {
        outputs.insert(Vec::new());
    }
    if !all {
        let mut k = 0;
        while 3 * k < max_len {
            let found: Vec<Vec<bool>> = (0..body_count(k))
                .into_par_iter()
                .map_init(Vm::new, |vm, code| {
                    if !vm.load_code(code, k) {
                        return None;
                    }
                    let mut sink = Capped {
                        out: Vec::new(),
                        cap: out_len,
                    };
                    match vm.run(budget, &mut sink) {
                        VmExit::Halted(_) if sink.out.len() == out_len => Some(sink.out),
                        _ => None,
                    }
                })
                .flatten()
                .collect();
            outputs.extend(found);
            k += 1;
        }
    }
    Ok(CompressibleSet { all, outputs })
}

fn matrix_bits(n: usize, code: u128) -> Vec<bool> {
    let cells = n * n;
    (0..cells).rev().map(|i| (code >> i) & 1 == 1).collect()
}

fn check_threshold(cells: usize, threshold: usize) -> Result<()> {
    if threshold > cells + 1 {
        return Err(Error::Invalid(format!(
            "no {cells}-bit string has complexity {threshold}: the literal program has length {}",
            cells + 1
        )));
    }
    Ok(())
}

/// Lexicographically first `n × n` binary matrix (row-major) whose
/// time-bounded complexity is at least `threshold`.
pub fn lex_first_incompressible(n: usize, budget: u64, threshold: usize) -> Result<Pattern> {
    let cells = n * n;
    check_threshold(cells, threshold)?;
    if cells > 127 {
        return Err(Error::Infeasible(format!(
            "{n}×{n} matrices are too large to enumerate"
        )));
    }
    if threshold == 0 {
        return Ok(Pattern::filled(&Alphabet::binary(), n, n, 0));
    }
    let set = compressible_outputs(cells, threshold - 1, budget)?;
    // fewer than 2^threshold strings are compressible, so the scan is short
    let limit = if cells == 127 { u128::MAX } else { 1u128 << cells };
    let code = (0..limit)
        .find(|&c| !set.contains(&matrix_bits(n, c)))
        .ok_or_else(|| Error::Unsatisfiable(format!("every {n}×{n} matrix is compressible")))?;
    Ok(bits_to_matrix(n, &matrix_bits(n, code)))
}

/// Candidates drawn by the proxy searches before giving up.
pub const PROXY_ATTEMPTS: usize = 1 << 20;

fn proxy_payload(x: &[bool]) -> usize {
    proxy_upper_bound(x) - PROXY_HEADER_BITS
}

/// First `n × n` matrix, in a seeded pseudo-random order, whose proxy
/// payload reaches `threshold`. Low-entropy matrices come first in
/// lexicographic order and a compressor needs long inputs before it stops
/// shrinking them, so a lexicographic scan would not terminate in practice.
/// The result carries no incompressibility guarantee.
pub fn proxy_incompressible_matrix(n: usize, threshold: usize, seed: u64) -> Result<Pattern> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PROXY_ATTEMPTS {
        let bits: Vec<bool> = (0..n * n).map(|_| rng.gen()).collect();
        if proxy_payload(&bits) >= threshold {
            return Ok(bits_to_matrix(n, &bits));
        }
    }
    Err(Error::Infeasible(format!(
        "no {n}×{n} matrix reached proxy payload {threshold} in {PROXY_ATTEMPTS} draws"
    )))
}

/// Proxy counterpart of [`incompressible_permutations`], drawing tuples in
/// a seeded order.
pub fn proxy_incompressible_permutations(l: usize, count: usize, distinct: bool, seed: u64) -> Result<Vec<Vec<usize>>> {
    let total = factorial_checked(l).ok_or_else(|| Error::Infeasible(format!("{l}! does not fit in 128 bits")))?;
    if distinct && count as u128 > total {
        return Err(Error::Unsatisfiable(format!(
            "only {total} permutations of {l} elements, {count} distinct requested"
        )));
    }
    let threshold = tuple_threshold(l, count);
    let width = rank_width(l) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PROXY_ATTEMPTS {
        let ranks: Vec<u128> = (0..count).map(|_| rng.gen_range(0..total)).collect();
        if distinct && !all_distinct(&ranks) {
            continue;
        }
        if proxy_payload(&encode_ranks(&ranks, width)) >= threshold {
            return Ok(ranks.iter().map(|&r| permutation_unrank(l, r)).collect());
        }
    }
    Err(Error::Infeasible(format!(
        "no tuple of {count} permutations of {l} reached proxy payload {threshold} in {PROXY_ATTEMPTS} draws"
    )))
}

fn all_distinct(ranks: &[u128]) -> bool {
    let mut s = ranks.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

fn bits_to_matrix(n: usize, bits: &[bool]) -> Pattern {
    let letters: Vec<u8> = bits.iter().map(|&b| u8::from(b)).collect();
    Pattern::from_letters(&Alphabet::binary(), n, n, letters).expect("binary letters")
}

/// Lexicographically first tuple of `count` permutations of `{0, …, l−1}`
/// whose encoding has complexity at least `floor(count · log2 l!)`.
pub fn incompressible_permutations(l: usize, count: usize, budget: u64) -> Result<Vec<Vec<usize>>> {
    permutation_search(l, count, budget, false)
}

/// As [`incompressible_permutations`] but the permutations are pairwise
/// distinct.
pub fn incompressible_distinct_permutations(l: usize, count: usize, budget: u64) -> Result<Vec<Vec<usize>>> {
    permutation_search(l, count, budget, true)
}

fn permutation_search(l: usize, count: usize, budget: u64, distinct: bool) -> Result<Vec<Vec<usize>>> {
    let total = factorial_checked(l).ok_or_else(|| Error::Infeasible(format!("{l}! does not fit in 128 bits")))?;
    if distinct && count as u128 > total {
        return Err(Error::Unsatisfiable(format!(
            "only {total} permutations of {l} elements, {count} distinct requested"
        )));
    }
    let threshold = tuple_threshold(l, count);
    let width = rank_width(l) as usize;
    let set = if threshold == 0 {
        None
    } else {
        Some(compressible_outputs(count * width, threshold - 1, budget)?)
    };
    let mut ranks = vec![0u128; count];
    if distinct {
        for (i, r) in ranks.iter_mut().enumerate() {
            *r = i as u128;
        }
    }
    loop {
        if !distinct || all_distinct(&ranks) {
            let bits = encode_ranks(&ranks, width);
            if set.as_ref().is_none_or(|s| !s.contains(&bits)) {
                return Ok(ranks.iter().map(|&r| permutation_unrank(l, r)).collect());
            }
        }
        if !advance(&mut ranks, total) {
            return Err(Error::Unsatisfiable(format!(
                "no tuple of {count} permutations of {l} reaches complexity {threshold}"
            )));
        }
    }
}

fn encode_ranks(ranks: &[u128], width: usize) -> Vec<bool> {
    let mut bits = Vec::with_capacity(ranks.len() * width);
    for &r in ranks {
        for k in (0..width).rev() {
            bits.push((r >> k) & 1 == 1);
        }
    }
    bits
}

/// Odometer step, last position fastest. Returns `false` after the last
/// tuple.
fn advance(ranks: &mut [u128], total: u128) -> bool {
    for r in ranks.iter_mut().rev() {
        *r += 1;
        if *r < total {
            return true;
        }
        *r = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::machine::{bits_from_str, run_program};

    fn b(s: &str) -> Vec<bool> {
        bits_from_str(s).unwrap()
    }

    #[test]
    fn empty_string_is_free() {
        let r = ctime(&[], 10, 10).unwrap();
        assert_eq!(r.value, Some(0));
        assert!(r.witness.unwrap().is_empty());
    }

    #[test]
    fn single_bits_need_a_literal_or_one_op() {
        // "0 000" prints 0 in one step; literal "10" is shorter
        assert_eq!(ctime(&b("0"), 10, 10).unwrap().value, Some(2));
        assert_eq!(ctime(&b("1"), 10, 10).unwrap().value, Some(2));
    }

    #[test]
    fn short_strings_only_have_the_literal() {
        // every VM opcode costs three bits and prints at most one, so loops
        // only pay off far beyond the exactly searchable lengths
        for len in 1..=5usize {
            for code in 0..(1u32 << len) {
                let x: Vec<bool> = (0..len).rev().map(|i| (code >> i) & 1 == 1).collect();
                let r = ctime(&x, len + 1, 64).unwrap();
                assert_eq!(r.value, Some(len + 1));
                assert_eq!(r.witness.unwrap(), Program::literal(&x));
            }
        }
    }

    #[test]
    fn loops_beat_the_literal_on_long_runs() {
        // INC×8, WHILE, OUT0×8, DEC, ENDW prints 64 zeros with 58 bits
        let mut p = String::from("0");
        p.push_str(&"010".repeat(8));
        p.push_str("100");
        p.push_str(&"000".repeat(8));
        p.push_str("011101");
        let prog = Program::parse(&p).unwrap();
        assert_eq!(prog.len(), 58);
        let o = run_program(&prog, 1000);
        assert!(o.halted);
        assert_eq!(o.output, vec![false; 64]);
    }

    #[test]
    fn budget_too_small_means_infinite() {
        let r = ctime(&b("0101"), 4, 3).unwrap();
        assert_eq!(r.value, None);
        assert_eq!(r.to_json()["value"], "inf");
    }

    #[test]
    fn cap_is_enforced() {
        assert!(ctime(&b("1"), MAX_EXACT_PROGRAM_LEN + 1, 10)
            .unwrap_err()
            .is_infeasible());
    }

    #[test]
    fn short_strings_are_incompressible_from_the_start() {
        let m = lex_first_incompressible(2, 256, 4).unwrap();
        assert_eq!(m.to_text(), Pattern::filled(&Alphabet::binary(), 2, 2, 0).to_text());
        assert_eq!(ctime(&m.bits(), 5, 256).unwrap().value, Some(5));
    }

    #[test]
    fn threshold_beyond_literal_rejected() {
        assert!(lex_first_incompressible(2, 256, 6).is_err());
    }

    #[test]
    fn compressible_set_agrees_with_ctime() {
        let set = compressible_outputs(6, 7, 64).unwrap();
        for code in 0..64u128 {
            let x: Vec<bool> = (0..6).rev().map(|i| (code >> i) & 1 == 1).collect();
            let v = ctime(&x, 7, 64).unwrap().value;
            assert_eq!(set.contains(&x), v.is_some_and(|v| v <= 7), "{x:?}");
        }
    }

    #[test]
    fn proxy_searches_are_seeded() {
        let a = proxy_incompressible_matrix(8, 64, 7).unwrap();
        assert_eq!(a, proxy_incompressible_matrix(8, 64, 7).unwrap());
        assert!(proxy_upper_bound(&a.bits()) - PROXY_HEADER_BITS >= 64);
        let t = proxy_incompressible_permutations(4, 4, true, 1).unwrap();
        assert_eq!(t, proxy_incompressible_permutations(4, 4, true, 1).unwrap());
    }

    #[test]
    fn permutation_tuples() {
        let t = incompressible_permutations(3, 2, 64).unwrap();
        assert_eq!(t.len(), 2);
        let d = incompressible_distinct_permutations(3, 3, 64).unwrap();
        assert_ne!(d[0], d[1]);
        assert_ne!(d[1], d[2]);
        assert_ne!(d[0], d[2]);
        assert!(incompressible_distinct_permutations(2, 3, 64).is_err());
    }
}
