//! Splitting a cofinite increasing map into a pure shift and an offset-zero
//! part, and multiplying such pairs without leaving pair form.
//!
//! Two normal forms are provided. The left form writes `f = τ^n ∘ d`; the
//! right form writes `f = d ∘ τ^n`. In both, `d` has offset zero and so lies
//! in the monoid generated by forward partial shifts. The pair laws differ by
//! which factor gets conjugated by the shift action `η_m(d) = τ^m ∘ d ∘ τ^{-m}`:
//!
//! * right form: `(m₁, d₁)(m₂, d₂) = (m₁ + m₂, d₁ ∘ η_{m₁}(d₂))`
//! * left form:  `(m₁, d₁)(m₂, d₂) = (m₁ + m₂, η_{-m₂}(d₁) ∘ d₂)`

use serde::{Deserialize, Serialize};

use super::increasing::{tau_pow, IncreasingMap};
use crate::error::{Error, Result};

/// Shift exponent plus offset-zero body.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftPair {
    pub shift: i64,
    pub body: IncreasingMap,
}

impl ShiftPair {
    pub fn new(shift: i64, body: IncreasingMap) -> Result<Self> {
        if body.offset() != 0 {
            return Err(Error::WrongOffset { expected: 0, found: body.offset() });
        }
        Ok(ShiftPair { shift, body })
    }
}

/// The shift action on offset-zero maps.
pub fn eta(m: i64, d: &IncreasingMap) -> IncreasingMap {
    d.conjugate_by_shift(m)
}

/// `f = τ^n ∘ d` with `n` the offset of `f`.
pub fn decompose_semidirect(f: &IncreasingMap) -> ShiftPair {
    let n = f.offset();
    ShiftPair { shift: n, body: tau_pow(-n).compose(f) }
}

/// Inverse of [`decompose_semidirect`]: `(n, d) ↦ τ^n ∘ d`.
pub fn realize_left(p: &ShiftPair) -> IncreasingMap {
    tau_pow(p.shift).compose(&p.body)
}

/// Pair product in left normal form; `realize_left` turns it into `compose`.
pub fn semidirect_multiply(p1: &ShiftPair, p2: &ShiftPair) -> Result<ShiftPair> {
    check_body(p1)?;
    check_body(p2)?;
    Ok(ShiftPair { shift: p1.shift + p2.shift, body: eta(-p2.shift, &p1.body).compose(&p2.body) })
}

/// `f = d ∘ τ^n` with `n` the offset of `f`.
pub fn decompose_right(f: &IncreasingMap) -> ShiftPair {
    let n = f.offset();
    ShiftPair { shift: n, body: f.compose(&tau_pow(-n)) }
}

/// `(n, d) ↦ d ∘ τ^n`.
pub fn realize_right(p: &ShiftPair) -> IncreasingMap {
    p.body.compose(&tau_pow(p.shift))
}

/// Pair product in right normal form: `(m₁ + m₂, d₁ ∘ η_{m₁}(d₂))`.
pub fn semidirect_multiply_right(p1: &ShiftPair, p2: &ShiftPair) -> Result<ShiftPair> {
    check_body(p1)?;
    check_body(p2)?;
    Ok(ShiftPair { shift: p1.shift + p2.shift, body: p1.body.compose(&eta(p1.shift, &p2.body)) })
}

fn check_body(p: &ShiftPair) -> Result<()> {
    if p.body.offset() != 0 {
        return Err(Error::WrongOffset { expected: 0, found: p.body.offset() });
    }
    Ok(())
}
