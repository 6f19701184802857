use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::IndexMap;

/// One factor of a word: a generator at an integer site, or the unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Creator(i64),
    Annihilator(i64),
    /// Creator plus annihilator at the same site.
    Position(i64),
    Unit,
}

impl Letter {
    pub fn index(self) -> Option<i64> {
        match self {
            Letter::Creator(i) | Letter::Annihilator(i) | Letter::Position(i) => Some(i),
            Letter::Unit => None,
        }
    }

    pub fn adjoint(self) -> Letter {
        match self {
            Letter::Creator(i) => Letter::Annihilator(i),
            Letter::Annihilator(i) => Letter::Creator(i),
            other => other,
        }
    }

    pub fn relabel(self, g: &impl IndexMap) -> Letter {
        match self {
            Letter::Creator(i) => Letter::Creator(g.map_index(i)),
            Letter::Annihilator(i) => Letter::Annihilator(g.map_index(i)),
            Letter::Position(i) => Letter::Position(g.map_index(i)),
            Letter::Unit => Letter::Unit,
        }
    }
}

/// A product of generators, written left to right as an operator string:
/// `[L₁, L₂, …, Lₙ]` stands for `L₁ L₂ ⋯ Lₙ`, so `Lₙ` acts first on a vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().filter_map(|l| l.index())
    }

    pub fn max_index(&self) -> Option<i64> {
        self.indices().max()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.indices().min()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Reversed word with creators and annihilators swapped.
    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    /// Same letters with every index sent through `g`.
    pub fn relabel(&self, g: &impl IndexMap) -> Word {
        Word(self.0.iter().map(|l| l.relabel(g)).collect())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match l {
                Letter::Creator(j) => write!(f, "c({j})")?,
                Letter::Annihilator(j) => write!(f, "a({j})")?,
                Letter::Position(j) => write!(f, "x({j})")?,
                Letter::Unit => f.write_str("1")?,
            }
        }
        Ok(())
    }
}

/// Parses whitespace- or `.`-separated tokens `name(i)`. Creator names:
/// `c`, `adag`, `bdag`, `ldag`; annihilators: `a`, `b`, `l`; positions: `x`,
/// `s`; the unit is `1`.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(|c: char| c.is_whitespace() || c == '.')
            .filter(|t| !t.is_empty())
            .map(parse_letter)
            .collect()
    }
}

fn parse_letter(tok: &str) -> Result<Letter> {
    if tok == "1" {
        return Ok(Letter::Unit);
    }
    let bad = || Error::Parse(format!("bad letter `{tok}`"));
    let open = tok.find('(').ok_or_else(bad)?;
    let (name, rest) = tok.split_at(open);
    let index = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?
        .trim()
        .parse::<i64>()
        .map_err(|_| bad())?;
    match name {
        "c" | "adag" | "bdag" | "ldag" | "A+" => Ok(Letter::Creator(index)),
        "a" | "b" | "l" | "A" => Ok(Letter::Annihilator(index)),
        "x" | "s" => Ok(Letter::Position(index)),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{psi, theta, IncreasingMap};

    #[test]
    fn relabel_examples() {
        let w: Word = "c(0) a(0)".parse().unwrap();
        assert_eq!(w.relabel(&IncreasingMap::identity()), w);
        assert_eq!(w.relabel(&theta(0)), "c(1) a(1)".parse().unwrap());
        // ψ_0: 1 ↦ 1, -1 ↦ -2
        let w: Word = "c(1) c(-1)".parse().unwrap();
        assert_eq!(w.relabel(&psi(0)), Word(vec![Letter::Creator(1), Letter::Creator(-2)]));
    }

    #[test]
    fn parse_aliases_and_display() {
        let w: Word = "ldag(1).l(2) s(-3) 1".parse().unwrap();
        assert_eq!(
            w,
            Word(vec![Letter::Creator(1), Letter::Annihilator(2), Letter::Position(-3), Letter::Unit])
        );
        assert_eq!(w.to_string(), "c(1) a(2) x(-3) 1");
        assert!("q(1)".parse::<Word>().is_err());
        assert!("c(1".parse::<Word>().is_err());
        assert!("".parse::<Word>().unwrap().is_empty());
    }

    #[test]
    fn adjoint_reverses_and_swaps() {
        let w: Word = "c(1) a(2) x(3)".parse().unwrap();
        assert_eq!(w.adjoint(), "x(3) c(2) a(1)".parse().unwrap());
        assert_eq!(w.adjoint().adjoint(), w);
    }
}
