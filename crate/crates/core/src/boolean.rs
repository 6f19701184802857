//! Boolean Fock space `ℂ ⊕ ℓ²(W)` and the action of increasing maps and
//! permutations on its operators.
//!
//! Operators are carried as `X = K + γI` with `K` supported on the window, so
//! the state at infinity `X ↦ γ` is exact.

use std::marker::PhantomData;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::{IndexMap, Relabeling};
use crate::op::{basis_state, FockModel, Letter, Operator, StateFunctional, StateKind, Word};
use crate::scalar::{c_one, c_zero, conj, real, to_pair, Scalar};

/// Basis label: `None` is `#` (the vacuum), `Some(k)` is `e_k`.
pub type BooleanLabel = Option<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanModel<S> {
    lo: i64,
    hi: i64,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> BooleanModel<S> {
    pub fn new(window: (i64, i64)) -> Result<Self> {
        if window.0 > window.1 {
            return Err(Error::Invalid(format!("empty window {}..{}", window.0, window.1)));
        }
        Ok(BooleanModel { lo: window.0, hi: window.1, _scalar: PhantomData })
    }
}

impl<S: Scalar> FockModel<S> for BooleanModel<S> {
    type Label = BooleanLabel;

    fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    fn vacuum(&self) -> BooleanLabel {
        None
    }

    fn create(&self, site: i64, label: &BooleanLabel) -> Vec<(BooleanLabel, Complex<S>)> {
        match label {
            None => vec![(Some(site), c_one())],
            Some(_) => Vec::new(),
        }
    }

    fn annihilate(&self, site: i64, label: &BooleanLabel) -> Vec<(BooleanLabel, Complex<S>)> {
        match label {
            Some(k) if *k == site => vec![(None, c_one())],
            _ => Vec::new(),
        }
    }

    /// `#` first, then the window in increasing order.
    fn basis(&self) -> Vec<BooleanLabel> {
        std::iter::once(None).chain((self.lo..=self.hi).map(Some)).collect()
    }
}

/// `K + γI` with `K` a matrix on `{#} ∪ window`.
#[derive(Debug, Clone, PartialEq)]
pub struct BooleanElement<S: Scalar> {
    window: (i64, i64),
    compact: Operator<S>,
    scalar: Complex<S>,
}

fn slot(window: (i64, i64), label: BooleanLabel) -> Result<usize> {
    match label {
        None => Ok(0),
        Some(k) if k >= window.0 && k <= window.1 => Ok((k - window.0 + 1) as usize),
        Some(k) => Err(Error::IndexOutsideWindow { index: k, lo: window.0, hi: window.1 }),
    }
}

fn dim(window: (i64, i64)) -> usize {
    (window.1 - window.0 + 2) as usize
}

impl<S: Scalar> BooleanElement<S> {
    pub fn new(window: (i64, i64), compact: Operator<S>, scalar: Complex<S>) -> Result<Self> {
        let n = dim(window);
        if compact.rows() != n || compact.cols() != n {
            return Err(Error::DimensionMismatch { left: n, right: compact.rows() });
        }
        Ok(BooleanElement { window, compact, scalar })
    }

    pub fn zero(window: (i64, i64)) -> Self {
        BooleanElement { window, compact: Operator::zeros(dim(window), dim(window)), scalar: c_zero() }
    }

    pub fn identity(window: (i64, i64)) -> Self {
        BooleanElement { scalar: c_one(), ..Self::zero(window) }
    }

    /// Matrix unit `ε_{kl}`.
    pub fn matrix_unit(window: (i64, i64), k: BooleanLabel, l: BooleanLabel) -> Result<Self> {
        let mut x = Self::zero(window);
        x.compact.set(slot(window, k)?, slot(window, l)?, c_one());
        Ok(x)
    }

    /// `b†_j = ε_{j#}`.
    pub fn creator(window: (i64, i64), j: i64) -> Result<Self> {
        Self::matrix_unit(window, Some(j), None)
    }

    /// `b_j = ε_{#j}`.
    pub fn annihilator(window: (i64, i64), j: i64) -> Result<Self> {
        Self::matrix_unit(window, None, Some(j))
    }

    pub fn position(window: (i64, i64), j: i64) -> Result<Self> {
        Self::creator(window, j)?.try_add(&Self::annihilator(window, j)?)
    }

    /// Ordered product of the word's letters.
    pub fn from_word(window: (i64, i64), w: &Word) -> Result<Self> {
        w.letters().iter().try_fold(Self::identity(window), |acc, &l| {
            let factor = match l {
                Letter::Creator(j) => Self::creator(window, j)?,
                Letter::Annihilator(j) => Self::annihilator(window, j)?,
                Letter::Position(j) => Self::position(window, j)?,
                Letter::Unit => Self::identity(window),
            };
            acc.try_mul(&factor)
        })
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn compact(&self) -> &Operator<S> {
        &self.compact
    }

    pub fn scalar(&self) -> &Complex<S> {
        &self.scalar
    }

    pub fn entry(&self, k: BooleanLabel, l: BooleanLabel) -> Result<Complex<S>> {
        Ok(self.compact.get(slot(self.window, k)?, slot(self.window, l)?))
    }

    fn check_window(&self, other: &Self) -> Result<()> {
        if self.window != other.window {
            return Err(Error::DimensionMismatch { left: dim(self.window), right: dim(other.window) });
        }
        Ok(())
    }

    /// `(K₁K₂ + γ₁K₂ + γ₂K₁, γ₁γ₂)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_window(other)?;
        let compact = self
            .compact
            .try_mul(&other.compact)?
            .try_add(&other.compact.scale(&self.scalar))?
            .try_add(&self.compact.scale(&other.scalar))?;
        Ok(BooleanElement { window: self.window, compact, scalar: self.scalar.clone() * other.scalar.clone() })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_window(other)?;
        Ok(BooleanElement {
            window: self.window,
            compact: self.compact.try_add(&other.compact)?,
            scalar: self.scalar.clone() + other.scalar.clone(),
        })
    }

    pub fn scale(&self, c: &Complex<S>) -> Self {
        BooleanElement { window: self.window, compact: self.compact.scale(c), scalar: self.scalar.clone() * c.clone() }
    }

    pub fn adjoint(&self) -> Self {
        BooleanElement { window: self.window, compact: self.compact.adjoint(), scalar: conj(&self.scalar) }
    }

    /// `K + γI` as a single matrix on the window.
    pub fn to_window_matrix(&self) -> Operator<S> {
        &self.compact + &Operator::identity(dim(self.window)).scale(&self.scalar)
    }

    /// Largest entrywise difference of the compact parts and the scalars.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.window != other.window {
            return f64::INFINITY;
        }
        let ds = crate::scalar::modulus(&(self.scalar.clone() - other.scalar.clone()));
        self.compact.max_abs_diff(&other.compact).max(ds)
    }

    pub fn to_record(&self) -> BooleanRecord {
        let n = dim(self.window);
        BooleanRecord {
            window: self.window,
            matrix: (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| to_pair(&self.compact.get(i, j))).collect(),
            scalar: to_pair(&self.scalar),
        }
    }
}

/// Serialized form: dense row-major compact part plus the scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BooleanRecord {
    pub window: (i64, i64),
    pub matrix: Vec<[f64; 2]>,
    pub scalar: [f64; 2],
}

/// `V_g`: the isometry `e_# ↦ e_#`, `e_k ↦ e_{g(k)}` from `w_in` into `w_out`.
pub fn isometry<S: Scalar>(g: &impl IndexMap, w_in: (i64, i64), w_out: (i64, i64)) -> Result<Operator<S>> {
    let mut entries = vec![(0, 0, c_one())];
    for k in w_in.0..=w_in.1 {
        let image = g.map_index(k);
        if image < w_out.0 || image > w_out.1 {
            return Err(Error::WindowOverflow(image));
        }
        entries.push((slot(w_out, Some(image))?, slot(w_in, Some(k))?, c_one()));
    }
    Ok(Operator::from_triplets(dim(w_out), dim(w_in), entries))
}

fn in_range(g: &Relabeling, x: i64) -> bool {
    match g {
        Relabeling::Increasing(f) => f.preimage(x).is_some_and(|k| f.evaluate(k) == x),
        Relabeling::Permutation(p) => p.apply(p.inverse().apply(x)) == x,
    }
}

fn in_gaps(g: &Relabeling, x: i64) -> bool {
    match g {
        Relabeling::Increasing(f) => f.gaps().contains(&x),
        Relabeling::Permutation(_) => false,
    }
}

/// `α_g(K + γI) = V_g K V_gᴴ + γ(P_{range g_#} + P_{δ_g} − I) + γI`, written on
/// `w_out`. The projections are taken over all of `ℤ_#` and then restricted,
/// so the correction term is computed rather than assumed.
pub fn alpha<S: Scalar>(g: &Relabeling, x: &BooleanElement<S>, w_out: (i64, i64)) -> Result<BooleanElement<S>> {
    let v = isometry::<S>(g, x.window, w_out)?;
    let mut compact = v.try_mul(&x.compact)?.try_mul(&v.adjoint())?;
    let mut correction = Operator::zeros(dim(w_out), dim(w_out));
    for k in w_out.0..=w_out.1 {
        let s = slot(w_out, Some(k))?;
        let covered = u8::from(in_range(g, k)) + u8::from(in_gaps(g, k));
        correction.set(s, s, real(S::from_i64(i64::from(covered) - 1)));
    }
    compact = compact.try_add(&correction.scale(&x.scalar))?;
    BooleanElement::new(w_out, compact, x.scalar.clone())
}

/// Smallest window containing `g(window)`.
pub fn image_window(g: &impl IndexMap, window: (i64, i64)) -> (i64, i64) {
    let images = (window.0..=window.1).map(|k| g.map_index(k));
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for x in images {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (lo, hi)
}

/// `λ ω_# + (1 − λ) ω_∞` on elements: `λ (K[#,#] + γ) + (1 − λ) γ`.
pub fn simplex_value<S: Scalar>(x: &BooleanElement<S>, lambda: f64) -> Complex<S> {
    let l = real(S::from_f64(lambda));
    l * x.compact.get(0, 0) + x.scalar.clone()
}

/// `⟨X e_k, e_k⟩` on elements.
pub fn vector_value<S: Scalar>(x: &BooleanElement<S>, k: BooleanLabel) -> Result<Complex<S>> {
    Ok(x.entry(k, k)? + x.scalar.clone())
}

/// `ω_# = ⟨·e_#, e_#⟩` on words.
pub fn omega_sharp<S: Scalar>(model: Arc<BooleanModel<S>>) -> StateFunctional<S> {
    basis_state(model, None, "boolean vacuum")
}

/// `ω_∞` on words: the scalar part of the word's product.
pub fn omega_infinity<S: Scalar>(window: (i64, i64)) -> StateFunctional<S> {
    StateFunctional::new(StateKind::AtInfinity, "boolean state at infinity", move |w| {
        Ok(BooleanElement::from_word(window, w)?.scalar().clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{theta, IncreasingMap};
    use num_rational::Rational64;

    type E = BooleanElement<Rational64>;
    const W: (i64, i64) = (-2, 2);

    #[test]
    fn matrix_unit_products() {
        let e = |k, l| E::matrix_unit(W, k, l).unwrap();
        assert_eq!(e(None, Some(0)).try_mul(&e(Some(0), None)).unwrap(), e(None, None));
        assert_eq!(e(Some(0), Some(1)).try_mul(&e(Some(2), Some(-1))).unwrap(), E::zero(W));
        assert_eq!(e(Some(1), None).adjoint(), e(None, Some(1)));
        assert!(E::matrix_unit(W, Some(3), None).is_err());
    }

    #[test]
    fn theta_moves_matrix_units() {
        let f = Relabeling::from(theta(0));
        let e00 = E::matrix_unit((0, 0), Some(0), Some(0)).unwrap();
        let out = alpha(&f, &e00, (0, 1)).unwrap();
        assert_eq!(out, E::matrix_unit((0, 1), Some(1), Some(1)).unwrap());
        let sharp = E::matrix_unit((0, 0), None, None).unwrap();
        assert_eq!(alpha(&f, &sharp, (0, 1)).unwrap(), E::matrix_unit((0, 1), None, None).unwrap());
        assert_eq!(alpha(&f, &E::identity((0, 0)), (0, 1)).unwrap(), E::identity((0, 1)));
    }

    #[test]
    fn isometry_examples() {
        let v = isometry::<Rational64>(&theta(0), (0, 0), (0, 1)).unwrap();
        assert_eq!(v.get(2, 1), c_one());
        assert_eq!(v.get(0, 0), c_one());
        assert_eq!(&v.adjoint() * &v, Operator::identity(2));
        assert_eq!(isometry::<Rational64>(&IncreasingMap::identity(), W, W).unwrap(), Operator::identity(6));
        assert_eq!(isometry::<Rational64>(&theta(0), (0, 1), (0, 1)).unwrap_err(), Error::WindowOverflow(2));
    }

    #[test]
    fn states_on_elements() {
        let bb = E::annihilator(W, 0).unwrap().try_mul(&E::creator(W, 0).unwrap()).unwrap();
        assert_eq!(simplex_value(&bb, 1.0), c_one());
        assert_eq!(simplex_value(&bb, 0.0), c_zero());
        assert_eq!(simplex_value(&E::identity(W), 0.3), c_one());
    }
}
