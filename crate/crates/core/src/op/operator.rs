use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c_one, c_zero, conj, is_zero, modulus, Scalar};

/// Sparse complex matrix stored row by row. Exact zeros are never stored.
#[derive(Clone, PartialEq)]
pub struct Operator<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Complex<S>>>,
}

impl<S: Scalar> Operator<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Operator { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim, dim);
        for i in 0..dim {
            op.data[i].insert(i, c_one());
        }
        op
    }

    /// Sums duplicate coordinates.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Complex<S>)>,
    ) -> Self {
        let mut op = Self::zeros(rows, cols);
        for (i, j, v) in entries {
            op.add_at(i, j, v);
        }
        op
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<S> {
        self.data[i].get(&j).cloned().unwrap_or_else(c_zero)
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &Complex<S>)> {
        self.data[i].iter().map(|(&j, v)| (j, v))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Complex<S>)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<S>) {
        if is_zero(&v) {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: Complex<S>) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) outside {}x{}", self.rows, self.cols);
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.entries().map(|(i, j, v)| (j, i, conj(v))))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.entries().map(|(i, j, v)| (j, i, v.clone())))
    }

    pub fn scale(&self, c: &Complex<S>) -> Self {
        Self::from_triplets(self.rows, self.cols, self.entries().map(|(i, j, v)| (i, j, v.clone() * c.clone())))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Complex<S>> = BTreeMap::new();
            for (&k, a) in row {
                for (&j, b) in &rhs.data[k] {
                    let e = acc.entry(j).or_insert_with(c_zero);
                    *e = e.clone() + a.clone() * b.clone();
                }
            }
            acc.retain(|_, v| !is_zero(v));
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let mut out = self.clone();
        for (i, j, v) in rhs.entries() {
            out.add_at(i, j, v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let mut out = self.clone();
        for (i, j, v) in rhs.entries() {
            out.add_at(i, j, -v.clone());
        }
        Ok(out)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, rhs: &Self) -> Self {
        &(self * rhs) + &(rhs * self)
    }

    /// `AB - BA`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    pub fn apply(&self, v: &[Complex<S>]) -> Vec<Complex<S>> {
        assert_eq!(v.len(), self.cols, "vector length");
        self.data
            .iter()
            .map(|row| row.iter().fold(c_zero(), |acc, (&j, a)| acc + a.clone() * v[j].clone()))
            .collect()
    }

    /// Column `j` as a dense vector.
    pub fn column(&self, j: usize) -> Vec<Complex<S>> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Largest entrywise modulus of `self - rhs`; `f64::INFINITY` on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        match self.try_sub(rhs) {
            Ok(d) => d.max_abs(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, v)| modulus(v)).fold(0.0, f64::max)
    }

    /// Same matrix with every column outside `keep` zeroed.
    pub fn restrict_columns(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self::from_triplets(self.rows, self.cols, self.entries().filter(|(_, j, _)| keep(*j)).map(|(i, j, v)| (i, j, v.clone())))
    }

    pub fn to_dense(&self) -> DMatrix<Complex<f64>> {
        let mut m = DMatrix::from_element(self.rows, self.cols, Complex::new(0.0, 0.0));
        for (i, j, v) in self.entries() {
            m[(i, j)] = Complex::new(v.re.to_f64(), v.im.to_f64());
        }
        m
    }

    /// Entries in row-major order, flattened to a single vector.
    pub fn vectorize(&self) -> Vec<Complex<S>> {
        let mut out = vec![c_zero(); self.rows * self.cols];
        for (i, j, v) in self.entries() {
            out[i * self.cols + j] = v.clone();
        }
        out
    }

    pub fn is_hermitian_within(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch { left: self.rows, right: rhs.rows });
        }
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch { left: self.cols, right: rhs.cols });
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Operator<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({}x{}, nnz={}) {{", self.rows, self.cols, self.nnz())?;
        for (i, j, v) in self.entries().take(32) {
            write!(f, " ({i},{j})={v}")?;
        }
        if self.nnz() > 32 {
            f.write_str(" ...")?;
        }
        f.write_str(" }")
    }
}

impl<S: Scalar> Mul for &Operator<S> {
    type Output = Operator<S>;
    fn mul(self, rhs: Self) -> Operator<S> {
        self.try_mul(rhs).expect("operator product shape")
    }
}

impl<S: Scalar> Add for &Operator<S> {
    type Output = Operator<S>;
    fn add(self, rhs: Self) -> Operator<S> {
        self.try_add(rhs).expect("operator sum shape")
    }
}

impl<S: Scalar> Sub for &Operator<S> {
    type Output = Operator<S>;
    fn sub(self, rhs: Self) -> Operator<S> {
        self.try_sub(rhs).expect("operator difference shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn c(re: i64, im: i64) -> Complex<Rational64> {
        Complex::new(Rational64::from_integer(re), Rational64::from_integer(im))
    }

    #[test]
    fn product_and_adjoint() {
        let a = Operator::from_triplets(2, 3, [(0, 1, c(1, 2)), (1, 2, c(0, -1))]);
        let b = Operator::from_triplets(3, 2, [(1, 0, c(2, 0)), (2, 1, c(1, 1))]);
        let ab = &a * &b;
        assert_eq!(ab.get(0, 0), c(2, 4));
        assert_eq!(ab.get(1, 1), c(1, -1));
        assert_eq!(ab.adjoint(), &b.adjoint() * &a.adjoint());
        assert_eq!(a.adjoint().get(1, 0), c(1, -2));
        assert!(a.try_mul(&a).is_err());
    }

    #[test]
    fn cancellation_drops_entries() {
        let a = Operator::from_triplets(2, 2, [(0, 0, c(1, 0)), (0, 0, c(-1, 0))]);
        assert!(a.is_zero());
        let i = Operator::<Rational64>::identity(3);
        assert!((&i - &i).is_zero());
        assert_eq!(i.nnz(), 3);
    }

    #[test]
    fn apply_matches_columns() {
        let a = Operator::from_triplets(2, 2, [(0, 1, c(3, 0)), (1, 0, c(0, 1))]);
        let e1 = vec![c(0, 0), c(1, 0)];
        assert_eq!(a.apply(&e1), a.column(1));
    }
}
