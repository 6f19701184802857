//! Seeded random generators for test inputs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::monoid::{FinitePermutation, IncreasingMap};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Offset drawn from `offsets`, up to `max_gaps` distinct gaps drawn from `gap_range`.
pub fn increasing_map(
    rng: &mut impl Rng,
    offsets: (i64, i64),
    max_gaps: usize,
    gap_range: (i64, i64),
) -> IncreasingMap {
    let offset = rng.gen_range(offsets.0..=offsets.1);
    let span = (gap_range.1 - gap_range.0 + 1) as usize;
    let count = rng.gen_range(0..=max_gaps.min(span));
    let pool: Vec<i64> = (gap_range.0..=gap_range.1).collect();
    let gaps = pool.choose_multiple(rng, count).copied().collect();
    IncreasingMap::new(offset, gaps)
}

/// Default distribution: offsets in [−5, 5], at most 6 gaps in [−20, 20].
pub fn standard_map(rng: &mut impl Rng) -> IncreasingMap {
    increasing_map(rng, (-5, 5), 6, (-20, 20))
}

/// Uniform shuffle of a random subset of `range` of size at most `max_support`.
pub fn permutation(rng: &mut impl Rng, range: (i64, i64), max_support: usize) -> FinitePermutation {
    let pool: Vec<i64> = (range.0..=range.1).collect();
    let count = rng.gen_range(0..=max_support.min(pool.len()));
    let domain: Vec<i64> = pool.choose_multiple(rng, count).copied().collect();
    let mut image = domain.clone();
    image.shuffle(rng);
    FinitePermutation::from_pairs(domain.into_iter().zip(image)).expect("shuffle is a bijection")
}

/// Strictly increasing values of some map on `[k, k + len)`, with steps in `1..=max_step`.
pub fn increasing_values(rng: &mut impl Rng, start: (i64, i64), len: usize, max_step: i64) -> Vec<i64> {
    let mut v = rng.gen_range(start.0..=start.1);
    (0..len)
        .map(|i| {
            if i > 0 {
                v += rng.gen_range(1..=max_step);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_samples() {
        let a: Vec<_> = (0..20).map({
            let mut r = rng(3);
            move |_| standard_map(&mut r)
        }).collect();
        let b: Vec<_> = (0..20).map({
            let mut r = rng(3);
            move |_| standard_map(&mut r)
        }).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| (-5..=5).contains(&f.offset()) && f.gaps().len() <= 6));
    }

    #[test]
    fn permutations_are_bijective() {
        let mut r = rng(9);
        for _ in 0..50 {
            let p = permutation(&mut r, (-4, 4), 5);
            assert!(p.compose(&p.inverse()).is_identity());
        }
    }
}
