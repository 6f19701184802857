use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::increasing::{psi, theta, IncreasingMap};
use super::IndexMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    Theta(i64),
    Psi(i64),
}

impl Generator {
    pub fn to_map(self) -> IncreasingMap {
        match self {
            Generator::Theta(h) => theta(h),
            Generator::Psi(h) => psi(h),
        }
    }

    pub fn apply(self, k: i64) -> i64 {
        match self {
            Generator::Theta(h) if k >= h => k + 1,
            Generator::Psi(h) if k <= h => k - 1,
            _ => k,
        }
    }
}

/// A product of partial shifts. The leftmost generator is applied last, so
/// `[a, b]` denotes `a ∘ b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GeneratorWord(pub Vec<Generator>);

impl GeneratorWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    /// True when only forward shifts occur (the word lies in the monoid they
    /// generate).
    pub fn is_forward_only(&self) -> bool {
        self.0.iter().all(|g| matches!(g, Generator::Theta(_)))
    }

    pub fn is_backward_only(&self) -> bool {
        self.0.iter().all(|g| matches!(g, Generator::Psi(_)))
    }

    /// Canonical form of the composed map.
    pub fn realize(&self) -> IncreasingMap {
        self.0.iter().fold(IncreasingMap::identity(), |acc, g| acc.compose(&g.to_map()))
    }

    /// Letter-by-letter evaluation, right to left.
    pub fn apply(&self, k: i64) -> i64 {
        self.0.iter().rev().fold(k, |x, g| g.apply(x))
    }
}

impl IndexMap for GeneratorWord {
    fn map_index(&self, k: i64) -> i64 {
        self.apply(k)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            match g {
                Generator::Theta(h) => write!(f, "T({h})")?,
                Generator::Psi(h) => write!(f, "P({h})")?,
            }
        }
        Ok(())
    }
}

impl FromStr for GeneratorWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "id" {
            return Ok(Self::empty());
        }
        s.split('.')
            .map(|tok| {
                let tok = tok.trim();
                let bad = || Error::Parse(format!("bad generator token `{tok}`"));
                let (head, rest) = tok.split_at(tok.find('(').ok_or_else(bad)?);
                let h = rest
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(bad)?
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| bad())?;
                match head {
                    "T" => Ok(Generator::Theta(h)),
                    "P" => Ok(Generator::Psi(h)),
                    _ => Err(bad()),
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(GeneratorWord)
    }
}

/// Writes an offset-zero map as a product of forward shifts, one per gap.
///
/// Gaps are emitted in descending order: the word `θ_{g_k} ∘ … ∘ θ_{g_1}`
/// first opens the smallest gap, and each later (larger) gap sits above all
/// gaps already opened, so earlier gaps are never moved.
pub fn factor_forward(d: &IncreasingMap) -> Result<GeneratorWord> {
    if d.offset() != 0 {
        return Err(Error::WrongOffset { expected: 0, found: d.offset() });
    }
    Ok(GeneratorWord(d.gaps().iter().rev().map(|&g| Generator::Theta(g)).collect()))
}

/// Writes a map with offset `-|gaps|` as a product of backward shifts.
///
/// Gaps are emitted in ascending order, the mirror image of
/// [`factor_forward`].
pub fn factor_backward(e: &IncreasingMap) -> Result<GeneratorWord> {
    let expected = -(e.gaps().len() as i64);
    if e.offset() != expected {
        return Err(Error::WrongOffset { expected, found: e.offset() });
    }
    Ok(GeneratorWord(e.gaps().iter().map(|&g| Generator::Psi(g)).collect()))
}

/// Finds a partial-shift word agreeing with the given strictly increasing
/// values on the interval `[k, k + values.len() - 1]`.
///
/// The word first translates the interval so its left end lands on the
/// target (`θ_k` repeated for a rightward move, `ψ_l` for a leftward one),
/// then opens the required holes between consecutive targets, highest hole
/// first, with `θ` at the current position of the next point. Word length is
/// `|f(k) - k| + Σ (f(j+1) - f(j) - 1)`.
pub fn localize(k: i64, values: &[i64]) -> Result<GeneratorWord> {
    if values.is_empty() {
        return Err(Error::EmptyInterval { k, l: k - 1 });
    }
    if let Some(w) = values.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::NotIncreasing(format!("{} then {}", w[0], w[1])));
    }
    let l = k + values.len() as i64 - 1;
    let start = values[0];
    let shift = start - k;

    // Applied first, so placed rightmost in the word.
    let translation: Vec<Generator> = if shift >= 0 {
        vec![Generator::Theta(k); shift as usize]
    } else {
        vec![Generator::Psi(l); (-shift) as usize]
    };

    // Holes between consecutive points; the hole after index i is opened by θ
    // at the position the point i+1 has right after translation. Opening
    // from the highest hole down leaves lower positions untouched, and the
    // lowest hole ends up leftmost (applied last).
    let mut word = Vec::new();
    for (i, pair) in values.windows(2).enumerate() {
        let hole = pair[1] - pair[0] - 1;
        let position = start + i as i64 + 1;
        word.extend(std::iter::repeat_n(Generator::Theta(position), hole as usize));
    }
    word.extend(translation);
    Ok(GeneratorWord(word))
}

/// [`localize`] for a map given in canonical form.
pub fn localize_map(f: &impl IndexMap, k: i64, l: i64) -> Result<GeneratorWord> {
    if k > l {
        return Err(Error::EmptyInterval { k, l });
    }
    let values: Vec<i64> = (k..=l).map(|j| f.map_index(j)).collect();
    localize(k, &values)
}
