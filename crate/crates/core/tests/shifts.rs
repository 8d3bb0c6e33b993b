mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symdyn::shift::{FiniteSpec, MirrorSpec, RedBlackSpec};
use symdyn::{contains_forbidden, Alphabet, Pattern, Rect, ShiftSpec};

fn random_pattern(rng: &mut ChaCha8Rng, a: &Alphabet, w: usize, h: usize, weights: &[u32]) -> Pattern {
    let total: u32 = weights.iter().sum();
    let letters: Vec<u8> = (0..w * h)
        .map(|_| {
            let mut r = rng.gen_range(0..total);
            let mut l = 0;
            while r >= weights[l] {
                r -= weights[l];
                l += 1;
            }
            l as u8
        })
        .collect();
    Pattern::from_letters(a, w, h, letters).unwrap()
}

fn agree(spec: &dyn ShiftSpec, max_side: usize, weights: &[u32], trials: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..trials {
        let (w, h) = (rng.gen_range(1..=max_side), rng.gen_range(1..=max_side));
        let p = random_pattern(&mut rng, spec.alphabet(), w, h, weights);
        let fast = contains_forbidden(&p, spec).is_some();
        assert_eq!(
            fast,
            common::brute_forbidden(&p, spec),
            "{}\n{}",
            spec.name(),
            p.render()
        );
        hits += usize::from(fast);
    }
    // both verdicts must be exercised
    assert!(hits > 0 && hits < trials, "{}: {hits}/{trials}", spec.name());
}

#[test]
fn hard_square_matches_brute_force() {
    agree(&FiniteSpec::hard_square(), 6, &[3, 1], 400, 1);
}

#[test]
fn red_black_matches_brute_force() {
    // black-heavy bottoms and red-heavy tops make squares likely
    agree(&RedBlackSpec::default(), 4, &[2, 1, 2], 400, 2);
}

#[test]
fn mirror_matches_brute_force() {
    agree(&MirrorSpec::default(), 5, &[2, 2, 1], 400, 3);
}

#[test]
fn enumeration_is_deterministic_and_monotone() {
    let specs: Vec<Box<dyn ShiftSpec>> = vec![
        Box::new(FiniteSpec::hard_square()),
        Box::new(RedBlackSpec::default()),
        Box::new(MirrorSpec::default()),
    ];
    for spec in &specs {
        let text = |e| {
            spec.enumerate_forbidden(e)
                .iter()
                .map(Pattern::to_text)
                .collect::<String>()
        };
        assert_eq!(text(4), text(4));
        let small = spec.enumerate_forbidden(3);
        let big = spec.enumerate_forbidden(4);
        assert!(small.iter().all(|p| big.contains(p)), "{}", spec.name());
        assert!(big.iter().all(|p| p.width() <= 4 && p.height() <= 4));
    }
}

#[test]
fn red_black_forbidden_counts() {
    let rb = RedBlackSpec::default();
    assert_eq!(rb.enumerate_forbidden(2).len(), 1);
    assert_eq!(rb.enumerate_forbidden(3).len(), 28);
    assert_eq!(FiniteSpec::hard_square().enumerate_forbidden(5).len(), 2);
}

fn binary_pattern() -> impl Strategy<Value = Pattern> {
    (1usize..7, 1usize..7).prop_flat_map(|(w, h)| {
        proptest::collection::vec(0u8..2, w * h)
            .prop_map(move |cells| Pattern::from_letters(&Alphabet::binary(), w, h, cells).unwrap())
    })
}

proptest! {
    #[test]
    fn invert_is_an_involution(p in binary_pattern()) {
        prop_assert_eq!(p.invert().unwrap().invert().unwrap(), p);
    }

    #[test]
    fn subpattern_commutes_with_invert(p in binary_pattern(), a in 0usize..6, b in 0usize..6) {
        let (x, y) = (a % p.width(), b % p.height());
        let r = Rect::new(x as i64, y as i64, p.width() - x, p.height() - y);
        prop_assert_eq!(p.subpattern(r).unwrap().invert().unwrap(), p.invert().unwrap().subpattern(r).unwrap());
    }

    #[test]
    fn text_round_trips(p in binary_pattern()) {
        prop_assert_eq!(Pattern::from_text(&p.to_text()).unwrap(), p);
    }
}
