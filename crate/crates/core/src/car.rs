//! Canonical anticommutation relations on a finite chain, and a translation
//! invariant two-point function that is not invariant under partial shifts.

use std::f64::consts::PI;
use std::marker::PhantomData;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::{theta, IncreasingMap};
use crate::op::FockModel;
use crate::scalar::{c_one, Scalar};

/// Largest supported chain.
pub const MAX_SITES: i64 = 16;

/// Fermionic chain on the window; basis labels are occupation bitmasks with
/// bit `k − lo` for site `k`. `A_k` carries the sign `(−1)^{N_{<k}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermionChain<S> {
    lo: i64,
    hi: i64,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> FermionChain<S> {
    pub fn new(window: (i64, i64)) -> Result<Self> {
        if window.0 > window.1 {
            return Err(Error::Invalid(format!("empty window {}..{}", window.0, window.1)));
        }
        if window.1 - window.0 + 1 > MAX_SITES {
            return Err(Error::Invalid(format!("at most {MAX_SITES} sites")));
        }
        Ok(FermionChain { lo: window.0, hi: window.1, _scalar: PhantomData })
    }

    pub fn sites(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    fn jordan_wigner(&self, site: i64, occupation: u64, fill: bool) -> Vec<(u64, Complex<S>)> {
        let bit = 1u64 << (site - self.lo);
        if (occupation & bit != 0) == fill {
            return Vec::new();
        }
        let below = (occupation & (bit - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { c_one() } else { -c_one::<S>() };
        vec![(occupation ^ bit, sign)]
    }
}

impl<S: Scalar> FockModel<S> for FermionChain<S> {
    type Label = u64;

    fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    fn vacuum(&self) -> u64 {
        0
    }

    fn create(&self, site: i64, label: &u64) -> Vec<(u64, Complex<S>)> {
        self.jordan_wigner(site, *label, true)
    }

    fn annihilate(&self, site: i64, label: &u64) -> Vec<(u64, Complex<S>)> {
        self.jordan_wigner(site, *label, false)
    }

    fn basis(&self) -> Vec<u64> {
        (0..1u64 << self.sites()).collect()
    }
}

/// `T(m, n) = i·3C / (π²(m − n)²)` for `m > n`, `T(n, m) = conj T(m, n)`,
/// `T(m, m) = d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPointFunction {
    pub c: f64,
    pub diag: f64,
}

impl Default for TwoPointFunction {
    fn default() -> Self {
        TwoPointFunction { c: 1.0, diag: 0.5 }
    }
}

impl TwoPointFunction {
    pub fn new(c: f64, diag: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Invalid(format!("two-point constant must be non-negative, got {c}")));
        }
        if !(0.0..=1.0).contains(&diag) {
            return Err(Error::Invalid(format!("diagonal value must lie in [0, 1], got {diag}")));
        }
        Ok(TwoPointFunction { c, diag })
    }

    pub fn value(&self, m: i64, n: i64) -> Complex<f64> {
        if m == n {
            return Complex::new(self.diag, 0.0);
        }
        let d = (m - n) as f64;
        let v = Complex::new(0.0, 3.0 * self.c / (PI * PI * d * d));
        if m > n {
            v
        } else {
            v.conj()
        }
    }

    /// `[T(m, n)]` for `m, n` in the window.
    pub fn section(&self, window: (i64, i64)) -> DMatrix<Complex<f64>> {
        let n = (window.1 - window.0 + 1) as usize;
        DMatrix::from_fn(n, n, |r, c| self.value(window.0 + r as i64, window.0 + c as i64))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub range: (i64, i64),
    pub pairs: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Compares `T(m + 1, n + 1)` with `T(m, n)` for all `m, n` in `range`.
pub fn twopoint_stationarity(t: &TwoPointFunction, range: (i64, i64), tol: f64) -> StationarityReport {
    let mut pairs = 0;
    let mut worst = 0.0f64;
    for m in range.0..=range.1 {
        for n in range.0..=range.1 {
            pairs += 1;
            worst = worst.max((t.value(m + 1, n + 1) - t.value(m, n)).norm());
            worst = worst.max((t.value(n + 1, m + 1) - t.value(m + 1, n + 1).conj()).norm());
        }
    }
    StationarityReport { range, pairs, max_deviation: worst, passed: worst <= tol }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadWitness {
    pub map: IncreasingMap,
    pub m: i64,
    pub n: i64,
    /// `T(m, n)`.
    pub lhs: [f64; 2],
    /// `T(f(m), f(n))`.
    pub rhs: [f64; 2],
    /// `|lhs| / |rhs|`.
    pub ratio: f64,
}

/// Looks for `θ_h` and indices `m = k`, `n = −k` with `T(θ_h(m), θ_h(n)) ≠
/// T(m, n)`. Pairs are tried by increasing `k`, cut points `h` by increasing
/// distance from 0 (`0, 1, −1, 2, …`). `None` when the function is constant
/// off the diagonal.
pub fn spreadability_witness(t: &TwoPointFunction, tol: f64) -> Option<SpreadWitness> {
    const REACH: i64 = 10;
    let cuts = std::iter::once(0).chain((1..=REACH).flat_map(|h| [h, -h]));
    let cuts: Vec<i64> = cuts.collect();
    for k in 1..=REACH {
        for &h in &cuts {
            let f = theta(h);
            let (m, n) = (k, -k);
            let lhs = t.value(m, n);
            let rhs = t.value(f.evaluate(m), f.evaluate(n));
            if (lhs - rhs).norm() > tol {
                return Some(SpreadWitness {
                    map: f,
                    m,
                    n,
                    lhs: [lhs.re, lhs.im],
                    rhs: [rhs.re, rhs.im],
                    ratio: lhs.norm() / rhs.norm(),
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub window: (i64, i64),
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Whether every eigenvalue lies in `[0, 1]`, up to `1e-12`.
    pub within_unit_interval: bool,
}

/// Spectrum of the finite section of `T` on the window.
pub fn positivity_probe(t: &TwoPointFunction, window: (i64, i64)) -> PositivityReport {
    let eig = SymmetricEigen::new(t.section(window)).eigenvalues;
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    PositivityReport {
        window,
        min_eigenvalue: min,
        max_eigenvalue: max,
        within_unit_interval: min >= -1e-12 && max <= 1.0 + 1e-12,
    }
}
