//! Discrete monotone Fock space.
//!
//! Basis vectors are labelled by strictly increasing tuples `(i₁ < … < i_k)`
//! with entries in the window and `k ≤ depth`; the empty tuple is the vacuum.

use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::monoid::parse_int_list;
use crate::op::{basis_state, FockModel, Letter, MatrixModel, Operator, StateFunctional, StateKind, Word};
use crate::scalar::{c_one, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneModel<S> {
    lo: i64,
    hi: i64,
    depth: usize,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> MonotoneModel<S> {
    pub fn new(window: (i64, i64), depth: usize) -> Result<Self> {
        if window.0 > window.1 {
            return Err(Error::Invalid(format!("empty window {}..{}", window.0, window.1)));
        }
        Ok(MonotoneModel { lo: window.0, hi: window.1, depth, _scalar: PhantomData })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `Σ_{k ≤ depth} C(|window|, k)`.
    pub fn basis_len(&self) -> usize {
        let n = (self.hi - self.lo + 1) as usize;
        let mut total = 0;
        let mut binom = 1usize;
        for k in 0..=self.depth.min(n) {
            total += binom;
            binom = binom * (n - k) / (k + 1);
        }
        total
    }
}

impl<S: Scalar> FockModel<S> for MonotoneModel<S> {
    type Label = Vec<i64>;

    fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    fn vacuum(&self) -> Vec<i64> {
        Vec::new()
    }

    fn create(&self, site: i64, t: &Vec<i64>) -> Vec<(Vec<i64>, Complex<S>)> {
        if t.len() < self.depth && t.first().is_none_or(|&first| site < first) {
            let mut out = Vec::with_capacity(t.len() + 1);
            out.push(site);
            out.extend_from_slice(t);
            vec![(out, c_one())]
        } else {
            Vec::new()
        }
    }

    fn annihilate(&self, site: i64, t: &Vec<i64>) -> Vec<(Vec<i64>, Complex<S>)> {
        match t.first() {
            Some(&first) if first == site => vec![(t[1..].to_vec(), c_one())],
            _ => Vec::new(),
        }
    }

    /// Graded lexicographic order: by length, then lexicographically.
    fn basis(&self) -> Vec<Vec<i64>> {
        let sites: Vec<i64> = (self.lo..=self.hi).collect();
        let mut out = Vec::with_capacity(self.basis_len());
        for k in 0..=self.depth.min(sites.len()) {
            combinations(&sites, k, &mut Vec::new(), 0, &mut out);
        }
        out
    }
}

fn combinations(sites: &[i64], k: usize, prefix: &mut Vec<i64>, from: usize, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    for i in from..sites.len() {
        prefix.push(sites[i]);
        combinations(sites, k, prefix, i + 1, out);
        prefix.pop();
    }
}

/// Normally ordered word `a†_{i₁}⋯a†_{i_m} a_{j₁}⋯a_{j_n}` with `i₁ < … < i_m`
/// and `j₁ > … > j_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaForm {
    creators: Vec<i64>,
    annihilators: Vec<i64>,
}

impl LambdaForm {
    pub fn new(creators: Vec<i64>, annihilators: Vec<i64>) -> Result<Self> {
        if creators.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Ordering(format!("creator indices {creators:?} must increase")));
        }
        if annihilators.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Ordering(format!("annihilator indices {annihilators:?} must decrease")));
        }
        Ok(LambdaForm { creators, annihilators })
    }

    pub fn identity() -> Self {
        LambdaForm { creators: Vec::new(), annihilators: Vec::new() }
    }

    pub fn creators(&self) -> &[i64] {
        &self.creators
    }

    pub fn annihilators(&self) -> &[i64] {
        &self.annihilators
    }

    /// `m + n`.
    pub fn len(&self) -> usize {
        self.creators.len() + self.annihilators.len()
    }

    pub fn is_identity(&self) -> bool {
        self.len() == 0
    }

    /// True for the forms `a†_i a_i`, which the Hamel basis replaces by `a_i a†_i`.
    pub fn is_diagonal_pair(&self) -> bool {
        self.creators.len() == 1 && self.creators == self.annihilators
    }

    pub fn word(&self) -> Word {
        self.creators
            .iter()
            .map(|&i| Letter::Creator(i))
            .chain(self.annihilators.iter().map(|&j| Letter::Annihilator(j)))
            .collect()
    }

    /// Every form with indices in `[lo, hi]`, `m ≤ max_m`, `n ≤ max_n` and
    /// `m + n ≤ max_len`, in a fixed order.
    pub fn enumerate(window: (i64, i64), max_m: usize, max_n: usize, max_len: usize) -> Vec<LambdaForm> {
        let sites: Vec<i64> = (window.0..=window.1).collect();
        let mut increasing = Vec::new();
        for k in 0..=max_m.max(max_n).min(sites.len()) {
            combinations(&sites, k, &mut Vec::new(), 0, &mut increasing);
        }
        let mut out = Vec::new();
        for c in increasing.iter().filter(|c| c.len() <= max_m) {
            for a in increasing.iter().filter(|a| a.len() <= max_n && c.len() + a.len() <= max_len) {
                let mut a = a.clone();
                a.reverse();
                out.push(LambdaForm { creators: c.clone(), annihilators: a });
            }
        }
        out
    }
}

/// `D[i1,...]A[j1,...]`.
impl fmt::Display for LambdaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "D[{}]A[{}]", join(&self.creators), join(&self.annihilators))
    }
}

impl FromStr for LambdaForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad lambda form `{s}`"));
        let rest = s.trim().strip_prefix("D[").ok_or_else(bad)?;
        let (creators, rest) = rest.split_once(']').ok_or_else(bad)?;
        let annihilators = rest.strip_prefix("A[").and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        LambdaForm::new(parse_int_list(creators)?, parse_int_list(annihilators)?)
    }
}

/// Matrix of a λ-form on the model's truncated basis.
pub fn lambda_matrix<S: Scalar>(m: &MatrixModel<'_, S, MonotoneModel<S>>, lambda: &LambdaForm) -> Result<Operator<S>> {
    m.word(&lambda.word())
}

/// `ω = ⟨·Ω, Ω⟩`.
pub fn vacuum_state<S: Scalar>(model: Arc<MonotoneModel<S>>) -> StateFunctional<S> {
    basis_state(model, Vec::new(), "monotone vacuum")
}

/// `⟨· e_(j), e_(j)⟩`, restricted to words whose indices all lie strictly
/// above `j`.
///
/// On such a word every non-empty product of creators and annihilators sends
/// `e_(j)` to zero (a creator below `j` cannot be prepended, an annihilator
/// other than `a_j` finds the wrong first entry), so the value is the
/// coefficient of the identity in the word's expansion.
pub fn probe_state<S: Scalar>(model: Arc<MonotoneModel<S>>, j: i64) -> StateFunctional<S> {
    let label = format!("monotone probe e_({j})");
    let inner = basis_state(model, vec![j], label.clone());
    StateFunctional::new(StateKind::AtInfinity, label, move |w| {
        if let Some(min) = w.min_index().filter(|&m| m <= j) {
            return Err(Error::NoProbeIndex { min_index: min, probe: j });
        }
        inner.evaluate(w)
    })
}

/// `ω_∞(X + cI) = c`, evaluated with the probe vector `e_(lo)`; words must
/// stay strictly above the bottom of the window.
pub fn state_at_infinity<S: Scalar>(model: Arc<MonotoneModel<S>>) -> StateFunctional<S> {
    let lo = model.window().0;
    let probe = probe_state(model, lo);
    StateFunctional::new(StateKind::AtInfinity, "monotone state at infinity", move |w| probe.evaluate(w))
}

/// Largest entry of `a_i a†_i − (I − Σ_{k ≤ i} a†_k a_k)` over the columns
/// where `a†_i` is not cut off by the depth truncation.
pub fn commutation_defect<S: Scalar>(m: &MatrixModel<'_, S, MonotoneModel<S>>, model: &MonotoneModel<S>, i: i64) -> Result<f64> {
    let lhs = m.annihilator(i)?.try_mul(&m.creator(i)?)?;
    let mut rhs = m.identity();
    for k in model.window().0..=i {
        rhs = rhs.try_sub(&m.creator(k)?.try_mul(&m.annihilator(k)?)?)?;
    }
    let truncated = |j: usize| {
        let label = m.space().label(j);
        label.len() == model.depth() && label.first().is_none_or(|&first| i < first)
    };
    Ok(lhs.try_sub(&rhs)?.restrict_columns(|j| !truncated(j)).max_abs())
}

/// The finite Hamel family on `window`: λ-forms with `m, n ≤ 2` other than
/// `a†_i a_i`, together with every `a_i a†_i`. Includes the identity.
pub fn hamel_family(window: (i64, i64)) -> Vec<Word> {
    let mut words: Vec<Word> = LambdaForm::enumerate(window, 2, 2, 4)
        .into_iter()
        .filter(|l| !l.is_diagonal_pair())
        .map(|l| l.word())
        .collect();
    words.extend((window.0..=window.1).map(|i| Word(vec![Letter::Annihilator(i), Letter::Creator(i)])));
    words
}

/// Smallest singular value of the matrix whose columns are the vectorized
/// operators.
pub fn smallest_singular_value<S: Scalar>(ops: &[Operator<S>]) -> f64 {
    let Some(first) = ops.first() else { return 0.0 };
    let rows = first.rows() * first.cols();
    let mut dense = DMatrix::<f64>::zeros(2 * rows, ops.len());
    for (c, op) in ops.iter().enumerate() {
        for (i, j, v) in op.entries() {
            let r = i * first.cols() + j;
            dense[(r, c)] = v.re.to_f64();
            dense[(rows + r, c)] = v.im.to_f64();
        }
    }
    dense.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}
