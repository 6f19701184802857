use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::IndexMap;
use crate::error::{Error, Result};

/// A finitely supported bijection of ℤ. Only moved points are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FinitePermutation {
    moved: BTreeMap<i64, i64>,
}

impl FinitePermutation {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a permutation from `(x, σ(x))` pairs. The domain of the pairs
    /// must equal their image.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        let mut moved = BTreeMap::new();
        for (x, y) in pairs {
            if let Some(prev) = moved.insert(x, y) {
                if prev != y {
                    return Err(Error::NotBijective(format!("{x} mapped to both {prev} and {y}")));
                }
            }
        }
        let domain: BTreeSet<i64> = moved.keys().copied().collect();
        let image: BTreeSet<i64> = moved.values().copied().collect();
        if domain != image || image.len() != moved.len() {
            return Err(Error::NotBijective(format!("domain {domain:?} vs image {image:?}")));
        }
        moved.retain(|x, y| x != y);
        Ok(FinitePermutation { moved })
    }

    /// Cyclic permutation `c[0] ↦ c[1] ↦ … ↦ c[last] ↦ c[0]`.
    pub fn cycle(points: &[i64]) -> Result<Self> {
        let n = points.len();
        Self::from_pairs((0..n).map(|i| (points[i], points[(i + 1) % n])))
    }

    pub fn transposition(a: i64, b: i64) -> Self {
        Self::from_pairs([(a, b), (b, a)]).expect("a transposition is a bijection")
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.moved.get(&x).copied().unwrap_or(x)
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.moved.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.moved.len()
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FinitePermutation) -> FinitePermutation {
        let points: BTreeSet<i64> = self.support().chain(other.support()).collect();
        let moved = points
            .into_iter()
            .map(|x| (x, self.apply(other.apply(x))))
            .filter(|(x, y)| x != y)
            .collect();
        FinitePermutation { moved }
    }

    pub fn inverse(&self) -> FinitePermutation {
        FinitePermutation { moved: self.moved.iter().map(|(&x, &y)| (y, x)).collect() }
    }

    pub fn pow(&self, n: usize) -> FinitePermutation {
        (0..n).fold(Self::identity(), |acc, _| acc.compose(self))
    }
}

impl IndexMap for FinitePermutation {
    fn map_index(&self, k: i64) -> i64 {
        self.apply(k)
    }
}

impl fmt::Display for FinitePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moved.is_empty() {
            return f.write_str("perm[]");
        }
        f.write_str("perm[")?;
        for (i, (x, y)) in self.moved.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}->{y}")?;
        }
        f.write_str("]")
    }
}

/// The cycle `k ↦ k+1 ↦ … ↦ l+1 ↦ k`, which agrees with the one-step shift on
/// `[k, l]` and is supported in `[k, l+1]`.
pub fn cycle_for_interval(k: i64, l: i64) -> Result<FinitePermutation> {
    if k > l {
        return Err(Error::EmptyInterval { k, l });
    }
    let points: Vec<i64> = (k..=l + 1).collect();
    FinitePermutation::cycle(&points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_agrees_with_shift_and_is_bijective() {
        let s = cycle_for_interval(0, 2).unwrap();
        for j in 0..=2 {
            assert_eq!(s.apply(j), j + 1);
        }
        assert_eq!(s.apply(3), 0);
        // brute-force bijectivity on a window containing the support
        let mut images: Vec<i64> = (-5..=8).map(|x| s.apply(x)).collect();
        images.sort_unstable();
        assert_eq!(images, (-5..=8).collect::<Vec<_>>());
        assert!(s.support().all(|x| (0..=3).contains(&x)));
    }

    #[test]
    fn unit_interval_gives_transposition() {
        assert_eq!(cycle_for_interval(5, 5).unwrap(), FinitePermutation::transposition(5, 6));
    }

    #[test]
    fn cycle_order_equals_support_size() {
        for (k, l) in [(0, 0), (-3, 2), (4, 9)] {
            let s = cycle_for_interval(k, l).unwrap();
            let n = s.support_len();
            assert!(s.pow(n).is_identity());
            assert!(!s.pow(n - 1).is_identity());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(cycle_for_interval(3, 2).is_err());
        assert!(FinitePermutation::from_pairs([(0, 1), (1, 2)]).is_err());
        assert!(FinitePermutation::from_pairs([(0, 1), (0, 2)]).is_err());
    }

    #[test]
    fn inverse_and_compose() {
        let s = FinitePermutation::cycle(&[1, 4, -2]).unwrap();
        assert!(s.compose(&s.inverse()).is_identity());
        assert_eq!(s.to_string(), "perm[-2->1,1->4,4->-2]");
    }
}
