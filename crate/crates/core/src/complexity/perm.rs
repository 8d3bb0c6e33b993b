//! Canonical bit encodings of permutation tuples.
//!
//! A permutation of `{0, …, l−1}` is ranked in the factorial number system
//! (Lehmer code), which orders ranks like the permutations themselves in
//! lexicographic order. A tuple of `count` permutations is the
//! concatenation of the ranks, each written MSB-first in
//! `ceil(log2 l!)` bits.

use num_bigint::BigUint;

use crate::pattern::ceil_log2;

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn permutation_rank(perm: &[usize]) -> u128 {
    let n = perm.len();
    let mut rank = 0u128;
    for i in 0..n {
        let smaller_after = perm[i + 1..].iter().filter(|&&v| v < perm[i]).count() as u128;
        rank = rank * (n - i) as u128 + smaller_after;
    }
    rank
}

pub fn permutation_unrank(l: usize, mut rank: u128) -> Vec<usize> {
    let mut digits = vec![0usize; l];
    for i in (0..l).rev() {
        let base = (l - i) as u128;
        digits[i] = (rank % base) as usize;
        rank /= base;
    }
    let mut pool: Vec<usize> = (0..l).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}

/// Width of one rank field.
pub(crate) fn rank_width(l: usize) -> u32 {
    ceil_log2(factorial(l))
}

pub(crate) fn factorial_checked(l: usize) -> Option<u128> {
    (1..=l as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

/// Encoded bits of a tuple of permutations of `{0, …, l−1}`.
pub fn tuple_bits(l: usize, perms: &[Vec<usize>]) -> Vec<bool> {
    let w = rank_width(l);
    let mut bits = Vec::with_capacity(perms.len() * w as usize);
    for p in perms {
        let r = permutation_rank(p);
        for k in (0..w).rev() {
            bits.push((r >> k) & 1 == 1);
        }
    }
    bits
}

/// `floor(count · log2(l!))`, computed exactly.
pub fn tuple_threshold(l: usize, count: usize) -> usize {
    let f = BigUint::from(factorial(l));
    let total = f.pow(count as u32);
    (total.bits() - 1) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ranks_follow_lex_order() {
        let perms: Vec<Vec<usize>> = (0..24).map(|r| permutation_unrank(4, r)).collect();
        let mut sorted = perms.clone();
        sorted.sort();
        assert_eq!(perms, sorted);
        assert_eq!(perms[0], vec![0, 1, 2, 3]);
        assert_eq!(perms[23], vec![3, 2, 1, 0]);
    }

    #[test]
    fn thresholds() {
        assert_eq!(tuple_threshold(1, 5), 0);
        assert_eq!(tuple_threshold(2, 2), 2);
        // 4 * log2(24) = 18.34
        assert_eq!(tuple_threshold(4, 4), 18);
        assert_eq!(rank_width(4), 5);
        assert_eq!(rank_width(1), 0);
        assert_eq!(tuple_bits(4, &[vec![0, 1, 2, 3], vec![0, 1, 3, 2]]).len(), 10);
    }

    proptest! {
        #[test]
        fn rank_unrank_inverse(l in 1usize..8, seed in any::<u64>()) {
            let r = u128::from(seed) % factorial(l);
            prop_assert_eq!(permutation_rank(&permutation_unrank(l, r)), r);
        }
    }
}
