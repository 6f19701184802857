//! Monoids of strictly increasing maps of ℤ and finite permutations.
//!
//! [`IncreasingMap`] holds elements with finite co-range in canonical
//! `(offset, gaps)` form; general increasing maps (infinite co-range) only
//! enter through their values on a finite interval, see [`localize`].

mod increasing;
mod permutation;
mod semidirect;
mod word;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use increasing::{psi, tau_pow, theta, IncreasingMap};
pub use permutation::{cycle_for_interval, FinitePermutation};
pub use semidirect::{
    decompose_right, decompose_semidirect, eta, realize_left, realize_right, semidirect_multiply,
    semidirect_multiply_right, ShiftPair,
};
pub use word::{factor_backward, factor_forward, localize, localize_map, Generator, GeneratorWord};

pub(crate) use increasing::parse_int_list;

/// Anything that relabels integer indices.
pub trait IndexMap {
    fn map_index(&self, k: i64) -> i64;
}

impl<F: Fn(i64) -> i64> IndexMap for F {
    fn map_index(&self, k: i64) -> i64 {
        self(k)
    }
}

/// A relabeling drawn from one of the symmetry families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relabeling {
    Increasing(IncreasingMap),
    Permutation(FinitePermutation),
}

impl IndexMap for Relabeling {
    fn map_index(&self, k: i64) -> i64 {
        match self {
            Relabeling::Increasing(f) => f.evaluate(k),
            Relabeling::Permutation(p) => p.apply(k),
        }
    }
}

impl fmt::Display for Relabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relabeling::Increasing(m) => m.fmt(f),
            Relabeling::Permutation(p) => p.fmt(f),
        }
    }
}

impl From<IncreasingMap> for Relabeling {
    fn from(f: IncreasingMap) -> Self {
        Relabeling::Increasing(f)
    }
}

impl From<FinitePermutation> for Relabeling {
    fn from(p: FinitePermutation) -> Self {
        Relabeling::Permutation(p)
    }
}
