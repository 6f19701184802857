use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::IndexMap;
use crate::error::{Error, Result};

/// A strictly increasing map of ℤ with finite co-range, in canonical form.
///
/// The map is determined by its left asymptotic offset `n` (so `f(k) = k + n`
/// for all sufficiently negative `k`) and the finite sorted set of integers it
/// misses. Two maps are equal as functions iff their canonical forms agree.
///
/// All arithmetic is on `i64`; arguments and gaps are assumed to satisfy
/// `|x| < 2^60`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IncreasingMap {
    offset: i64,
    gaps: Vec<i64>,
}

impl IncreasingMap {
    /// Builds a map from an offset and an arbitrary gap list (sorted and
    /// deduplicated here).
    pub fn new(offset: i64, mut gaps: Vec<i64>) -> Self {
        gaps.sort_unstable();
        gaps.dedup();
        IncreasingMap { offset, gaps }
    }

    /// Builds a map from an already canonical gap list, rejecting unsorted or
    /// repeated gaps.
    pub fn from_canonical(offset: i64, gaps: Vec<i64>) -> Result<Self> {
        if gaps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing(format!("{gaps:?}")));
        }
        Ok(IncreasingMap { offset, gaps })
    }

    pub fn identity() -> Self {
        IncreasingMap { offset: 0, gaps: Vec::new() }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn gaps(&self) -> &[i64] {
        &self.gaps
    }

    pub fn is_identity(&self) -> bool {
        self.offset == 0 && self.gaps.is_empty()
    }

    /// Offset seen far to the right: `f(k) = k + right_offset()` for all
    /// large `k`.
    pub fn right_offset(&self) -> i64 {
        self.offset + self.gaps.len() as i64
    }

    /// The unique `x` outside the gap set with `x - #{g < x} = k + offset`.
    pub fn evaluate(&self, k: i64) -> i64 {
        let mut x = k + self.offset;
        for &g in &self.gaps {
            if g <= x {
                x += 1;
            } else {
                break;
            }
        }
        x
    }

    /// Inverse on the range; `None` for gap points.
    pub fn preimage(&self, x: i64) -> Option<i64> {
        match self.gaps.binary_search(&x) {
            Ok(_) => None,
            Err(below) => Some(x - below as i64 - self.offset),
        }
    }

    pub fn contains_in_range(&self, x: i64) -> bool {
        self.gaps.binary_search(&x).is_err()
    }

    /// `self ∘ other`, i.e. `k ↦ self(other(k))`.
    pub fn compose(&self, other: &IncreasingMap) -> IncreasingMap {
        let mut gaps = self.gaps.clone();
        gaps.extend(other.gaps.iter().map(|&g| self.evaluate(g)));
        gaps.sort_unstable();
        IncreasingMap { offset: self.offset + other.offset, gaps }
    }

    /// Conjugation `τ^m ∘ self ∘ τ^{-m}`.
    pub fn conjugate_by_shift(&self, m: i64) -> IncreasingMap {
        IncreasingMap { offset: self.offset, gaps: self.gaps.iter().map(|g| g + m).collect() }
    }
}

impl IndexMap for IncreasingMap {
    fn map_index(&self, k: i64) -> i64 {
        self.evaluate(k)
    }
}

/// Right partial shift: identity below `h`, `+1` from `h` on.
pub fn theta(h: i64) -> IncreasingMap {
    IncreasingMap { offset: 0, gaps: vec![h] }
}

/// Left partial shift: identity above `h`, `-1` up to and including `h`.
pub fn psi(h: i64) -> IncreasingMap {
    IncreasingMap { offset: -1, gaps: vec![h] }
}

/// `n`-th power of the one-step shift `k ↦ k + 1`.
pub fn tau_pow(n: i64) -> IncreasingMap {
    IncreasingMap { offset: n, gaps: Vec::new() }
}

impl fmt::Display for IncreasingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};gaps=[", self.offset)?;
        for (i, g) in self.gaps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for IncreasingMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected `n=<int>;gaps=[...]`, got `{s}`"));
        let s = s.trim();
        let (n_part, gaps_part) = s.split_once(';').ok_or_else(bad)?;
        let offset = n_part
            .trim()
            .strip_prefix("n=")
            .ok_or_else(bad)?
            .trim()
            .parse::<i64>()
            .map_err(|_| bad())?;
        let list = gaps_part
            .trim()
            .strip_prefix("gaps=")
            .and_then(|r| r.trim().strip_prefix('['))
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let gaps = parse_int_list(list)?;
        IncreasingMap::from_canonical(offset, gaps)
    }
}

pub(crate) fn parse_int_list(list: &str) -> Result<Vec<i64>> {
    let list = list.trim();
    if list.is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
        .collect()
}
