mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symdyn::complexity::{ctime, lex_first_incompressible, run_program};

const MAX_LEN: usize = 8;
const BUDGET: u64 = 256;

#[test]
fn ctime_matches_independent_enumerator() {
    let table = common::complexity_table(MAX_LEN, BUDGET);
    for len in 0..=10 {
        let mut below = 0u64;
        for x in common::bit_strings(len) {
            let r = ctime(&x, MAX_LEN, BUDGET).unwrap();
            assert_eq!(r.value, table.get(&x).copied(), "{x:?}");
            if let (Some(v), Some(w)) = (r.value, &r.witness) {
                assert_eq!(w.len(), v);
                let run = run_program(w, BUDGET);
                assert!(run.halted);
                assert_eq!(run.output, x);
                assert!(v <= len + 1);
                below += u64::from(v < len);
            }
        }
        assert!(below < 1 << len, "length {len}: {below} compressible");
    }
}

#[test]
fn literal_bound_holds_whenever_it_fits() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let len = rng.gen_range(0..20);
        let x: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
        let r = ctime(&x, len + 1, BUDGET).unwrap();
        assert!(r.value.unwrap() <= len + 1);
    }
}

#[test]
fn more_budget_never_hurts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let len = rng.gen_range(1..12);
        let x: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
        let budgets = [4u64, 16, 64, 256];
        let values: Vec<usize> = budgets
            .iter()
            .map(|&b| ctime(&x, 13, b).unwrap().value.unwrap_or(usize::MAX))
            .collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "{x:?}: {values:?}");
    }
}

#[test]
fn lex_first_incompressible_by_double_enumeration() {
    let m = lex_first_incompressible(2, BUDGET, 4).unwrap();
    let table = common::complexity_table(3, BUDGET);
    let first = common::bit_strings(4).find(|x| !table.contains_key(x)).unwrap();
    assert_eq!(m.bits(), first);
}
