//! q-deformed Fock space.
//!
//! Basis vectors are labelled by arbitrary tuples `(j₁, …, j_k)` over the
//! window with `k ≤ depth`; the empty tuple is the vacuum `ζ`. The basis is
//! not orthonormal: `⟨e_u, e_v⟩ = Σ_π q^{inv(π)} Π_k δ(u_k, v_{π(k)})`.

use std::marker::PhantomData;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::op::{basis_state, FockModel, MatrixModel, StateFunctional};
use crate::scalar::{c_one, real, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct QModel<S> {
    lo: i64,
    hi: i64,
    depth: usize,
    q: S,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> QModel<S> {
    /// Requires `-1 < q < 1`.
    pub fn new(window: (i64, i64), depth: usize, q: S) -> Result<Self> {
        if window.0 > window.1 {
            return Err(Error::Invalid(format!("empty window {}..{}", window.0, window.1)));
        }
        if q.abs_val() >= S::one() {
            return Err(Error::DeformationOutOfRange(q.to_f64()));
        }
        Ok(QModel { lo: window.0, hi: window.1, depth, q, _scalar: PhantomData })
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `Σ_{k ≤ depth} |window|^k`.
    pub fn basis_len(&self) -> usize {
        let n = (self.hi - self.lo + 1) as usize;
        (0..=self.depth as u32).map(|k| n.pow(k)).sum()
    }
}

/// q-inner product of two basis tuples, summing `q^{inv(π)}` over the
/// permutations `π` with `u_k = v_{π(k)}` for every `k`. Uses `0⁰ = 1`.
pub fn q_inner<S: Scalar>(u: &[i64], v: &[i64], q: &S) -> S {
    if u.len() != v.len() {
        return S::zero();
    }
    let mut used = vec![false; v.len()];
    let mut total = S::zero();
    matchings(u, v, q, &mut used, 0, &mut total);
    total
}

// Assigns u[k..] to unused slots of v. Choosing slot p for u[k] adds one
// inversion for every earlier u-entry sitting in a slot to the right of p.
fn matchings<S: Scalar>(u: &[i64], v: &[i64], q: &S, used: &mut [bool], inversions: u32, total: &mut S) {
    let k = used.iter().filter(|&&b| b).count();
    if k == u.len() {
        *total = total.clone() + q.ipow(inversions);
        return;
    }
    for p in 0..v.len() {
        if used[p] || v[p] != u[k] {
            continue;
        }
        let extra = used[p + 1..].iter().filter(|&&b| b).count() as u32;
        used[p] = true;
        matchings(u, v, q, used, inversions + extra, total);
        used[p] = false;
    }
}

impl<S: Scalar> FockModel<S> for QModel<S> {
    type Label = Vec<i64>;

    fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    fn vacuum(&self) -> Vec<i64> {
        Vec::new()
    }

    fn create(&self, site: i64, t: &Vec<i64>) -> Vec<(Vec<i64>, Complex<S>)> {
        if t.len() >= self.depth {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(t.len() + 1);
        out.push(site);
        out.extend_from_slice(t);
        vec![(out, c_one())]
    }

    fn annihilate(&self, site: i64, t: &Vec<i64>) -> Vec<(Vec<i64>, Complex<S>)> {
        t.iter()
            .enumerate()
            .filter(|&(_, &j)| j == site)
            .map(|(k, _)| {
                let mut rest = t.clone();
                rest.remove(k);
                (rest, real(self.q.ipow(k as u32)))
            })
            .collect()
    }

    /// All tuples by length, then lexicographically.
    fn basis(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        let mut level = vec![Vec::new()];
        for _ in 0..self.depth {
            level = level
                .iter()
                .flat_map(|t: &Vec<i64>| {
                    (self.lo..=self.hi).map(move |j| {
                        let mut next = t.clone();
                        next.push(j);
                        next
                    })
                })
                .collect();
            out.extend(level.iter().cloned());
        }
        out
    }

    fn basis_inner(&self, a: &Vec<i64>, b: &Vec<i64>) -> Complex<S> {
        real(q_inner(a, b, &self.q))
    }

    fn has_metric(&self) -> bool {
        true
    }
}

/// `ω_q = ⟨·ζ, ζ⟩`.
pub fn vacuum_state<S: Scalar>(model: Arc<QModel<S>>) -> StateFunctional<S> {
    basis_state(model, Vec::new(), "q-deformed vacuum")
}

/// Largest entry of `metric_adjoint(l_j) − l†_j` over the window.
pub fn adjointness_defect<S: Scalar>(m: &MatrixModel<'_, S, QModel<S>>, window: (i64, i64)) -> Result<f64> {
    let mut worst = 0.0f64;
    for j in window.0..=window.1 {
        let adj = m.metric_adjoint(&m.annihilator(j)?)?;
        worst = worst.max(adj.max_abs_diff(&m.creator(j)?));
    }
    Ok(worst)
}

/// Largest entry of `l_i l†_j − q l†_j l_i − δ_{ij} I` over all `i, j` in the
/// window, on columns below the top level.
pub fn commutation_defect<S: Scalar>(m: &MatrixModel<'_, S, QModel<S>>, model: &QModel<S>) -> Result<f64> {
    let (lo, hi) = model.window();
    let q = real(model.q().clone());
    let below_top = |c: usize| m.space().label(c).len() < model.depth();
    let mut worst = 0.0f64;
    for i in lo..=hi {
        for j in lo..=hi {
            let a = m.annihilator(i)?.try_mul(&m.creator(j)?)?;
            let b = m.creator(j)?.try_mul(&m.annihilator(i)?)?.scale(&q);
            let mut d = a.try_sub(&b)?;
            if i == j {
                d = d.try_sub(&m.identity())?;
            }
            worst = worst.max(d.restrict_columns(below_top).max_abs());
        }
    }
    Ok(worst)
}
