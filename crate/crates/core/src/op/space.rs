use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_complex::Complex;

use super::operator::Operator;
use crate::error::{Error, Result};
use crate::scalar::{c_zero, conj, is_zero, modulus, Scalar};

/// Finite basis of labelled vectors with an optional Gram metric.
///
/// Without a metric the labels are orthonormal. With one, the inner product
/// (linear in the first slot) is `⟨u, v⟩ = vᴴ G u`, so `G[(a, b)] = ⟨e_b, e_a⟩`,
/// and adjoints are taken with respect to it.
#[derive(Debug, Clone)]
pub struct TruncatedSpace<L, S: Scalar> {
    labels: Vec<L>,
    index: HashMap<L, usize>,
    gram: Option<Metric<S>>,
}

#[derive(Debug, Clone)]
struct Metric<S: Scalar> {
    gram: Operator<S>,
    inverse: Operator<S>,
}

impl<L, S> TruncatedSpace<L, S>
where
    L: Clone + Eq + Hash + Debug,
    S: Scalar,
{
    pub fn orthonormal(labels: Vec<L>) -> Result<Self> {
        let index = index_labels(&labels)?;
        Ok(TruncatedSpace { labels, index, gram: None })
    }

    /// Validates the metric (Hermitian, positive definite) and precomputes its
    /// inverse block by block over the connected components of its sparsity
    /// pattern.
    pub fn with_gram(labels: Vec<L>, gram: Operator<S>) -> Result<Self> {
        let index = index_labels(&labels)?;
        if gram.rows() != labels.len() || gram.cols() != labels.len() {
            return Err(Error::DimensionMismatch { left: labels.len(), right: gram.rows() });
        }
        let herm_tol = if S::EXACT { 0.0 } else { 1e-12 * gram.max_abs().max(1.0) };
        if !gram.is_hermitian_within(herm_tol) {
            return Err(Error::NonHermitianGram);
        }
        let inverse = block_inverse(&gram, true)?;
        Ok(TruncatedSpace { labels, index, gram: Some(Metric { gram, inverse }) })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &L {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &L) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn gram(&self) -> Option<&Operator<S>> {
        self.gram.as_ref().map(|m| &m.gram)
    }

    pub fn gram_inverse(&self) -> Option<&Operator<S>> {
        self.gram.as_ref().map(|m| &m.inverse)
    }

    /// `G⁻¹ Aᴴ G`, or plain `Aᴴ` for an orthonormal basis.
    pub fn metric_adjoint(&self, a: &Operator<S>) -> Result<Operator<S>> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: a.rows() });
        }
        match &self.gram {
            None => Ok(a.adjoint()),
            Some(m) => m.inverse.try_mul(&a.adjoint())?.try_mul(&m.gram),
        }
    }

    /// `⟨u, v⟩` with the space's metric.
    pub fn inner(&self, u: &[Complex<S>], v: &[Complex<S>]) -> Complex<S> {
        match &self.gram {
            None => u.iter().zip(v).fold(c_zero(), |acc, (a, b)| acc + a.clone() * conj(b)),
            Some(m) => m
                .gram
                .entries()
                .fold(c_zero(), |acc, (i, j, g)| acc + conj(&v[i]) * g.clone() * u[j].clone()),
        }
    }

    /// Smallest eigenvalue of the metric (1 for an orthonormal basis),
    /// computed in `f64` block by block.
    pub fn min_gram_eigenvalue(&self) -> f64 {
        match &self.gram {
            None => 1.0,
            Some(m) => components(&m.gram)
                .iter()
                .map(|block| {
                    let dense = nalgebra::DMatrix::from_fn(block.len(), block.len(), |r, c| {
                        let v = m.gram.get(block[r], block[c]);
                        Complex::new(v.re.to_f64(), v.im.to_f64())
                    });
                    nalgebra::SymmetricEigen::new(dense).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
                })
                .fold(f64::INFINITY, f64::min),
        }
    }
}

fn index_labels<L: Clone + Eq + Hash + Debug>(labels: &[L]) -> Result<HashMap<L, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::Invalid(format!("duplicate label {l:?}")));
        }
    }
    Ok(index)
}

/// Connected components of the graph `i ~ j ⟺ A[i,j] ≠ 0 or A[j,i] ≠ 0`.
pub(crate) fn components<S: Scalar>(a: &Operator<S>) -> Vec<Vec<usize>> {
    let n = a.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, j, _) in a.entries() {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Inverse of a square matrix, block by block. With `require_positive`, each
/// block must also pass an LDLᴴ positivity test (Hermitian input assumed).
pub(crate) fn block_inverse<S: Scalar>(a: &Operator<S>, require_positive: bool) -> Result<Operator<S>> {
    let mut out = Operator::zeros(a.rows(), a.cols());
    for block in components(a) {
        let dense: Vec<Vec<Complex<S>>> =
            block.iter().map(|&r| block.iter().map(|&c| a.get(r, c)).collect()).collect();
        if require_positive && !ldl_positive(dense.clone()) {
            return Err(Error::SingularGram);
        }
        let inv = gauss_jordan_inverse(dense).ok_or(Error::SingularGram)?;
        for (bi, &r) in block.iter().enumerate() {
            for (bj, &c) in block.iter().enumerate() {
                out.set(r, c, inv[bi][bj].clone());
            }
        }
    }
    Ok(out)
}

/// Elimination without pivoting; a Hermitian matrix is positive definite iff
/// every pivot is real and positive.
fn ldl_positive<S: Scalar>(mut m: Vec<Vec<Complex<S>>>) -> bool {
    let n = m.len();
    for p in 0..n {
        let pivot = m[p][p].clone();
        if pivot.re <= S::zero() {
            return false;
        }
        for r in p + 1..n {
            if is_zero(&m[r][p]) {
                continue;
            }
            let factor = m[r][p].clone() / pivot.clone();
            for c in p..n {
                let delta = factor.clone() * m[p][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
    }
    true
}

fn gauss_jordan_inverse<S: Scalar>(mut m: Vec<Vec<Complex<S>>>) -> Option<Vec<Vec<Complex<S>>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Complex<S>>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { crate::scalar::c_one() } else { c_zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .filter(|&r| !is_zero(&m[r][col]))
            .max_by(|&a, &b| modulus(&m[a][col]).total_cmp(&modulus(&m[b][col])))?;
        if !S::EXACT && modulus(&m[pivot_row][col]) < 1e-300 {
            return None;
        }
        m.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let p = m[col][col].clone();
        for c in 0..n {
            m[col][c] = m[col][c].clone() / p.clone();
            inv[col][c] = inv[col][c].clone() / p.clone();
        }
        for r in 0..n {
            if r == col || is_zero(&m[r][col]) {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..n {
                let dm = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - dm;
                let di = factor.clone() * inv[col][c].clone();
                inv[r][c] = inv[r][c].clone() - di;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type Q = Rational64;

    fn r(n: i64, d: i64) -> Complex<Q> {
        Complex::new(Q::new(n, d), Q::from_integer(0))
    }

    #[test]
    fn orthonormal_adjoint_is_conjugate_transpose() {
        let space = TruncatedSpace::<u8, Q>::orthonormal(vec![0, 1]).unwrap();
        let a = Operator::from_triplets(2, 2, [(0, 1, Complex::new(Q::from_integer(2), Q::from_integer(3)))]);
        assert_eq!(space.metric_adjoint(&a).unwrap(), a.adjoint());
    }

    #[test]
    fn metric_adjoint_is_an_involution() {
        let g = Operator::from_triplets(3, 3, [(0, 0, r(1, 1)), (1, 1, r(2, 1)), (1, 2, r(1, 2)), (2, 1, r(1, 2)), (2, 2, r(1, 1))]);
        let space = TruncatedSpace::with_gram(vec!['a', 'b', 'c'], g.clone()).unwrap();
        let a = Operator::from_triplets(3, 3, [(0, 1, r(1, 1)), (2, 0, r(-3, 2)), (1, 2, r(5, 1))]);
        let adj = space.metric_adjoint(&a).unwrap();
        assert_eq!(space.metric_adjoint(&adj).unwrap(), a);
        // defining property: ⟨A u, v⟩ = ⟨u, A† v⟩ on basis vectors
        for i in 0..3 {
            for j in 0..3 {
                let ei: Vec<_> = (0..3).map(|k| if k == i { r(1, 1) } else { r(0, 1) }).collect();
                let ej: Vec<_> = (0..3).map(|k| if k == j { r(1, 1) } else { r(0, 1) }).collect();
                assert_eq!(space.inner(&a.apply(&ei), &ej), space.inner(&ei, &adj.apply(&ej)));
            }
        }
    }

    #[test]
    fn rejects_bad_metrics() {
        let non_herm = Operator::from_triplets(2, 2, [(0, 0, r(1, 1)), (0, 1, r(1, 2)), (1, 1, r(1, 1))]);
        assert_eq!(TruncatedSpace::with_gram(vec![0, 1], non_herm).unwrap_err(), Error::NonHermitianGram);
        let singular = Operator::from_triplets(2, 2, [(0, 0, r(1, 1)), (0, 1, r(1, 1)), (1, 0, r(1, 1)), (1, 1, r(1, 1))]);
        assert_eq!(TruncatedSpace::with_gram(vec![0, 1], singular).unwrap_err(), Error::SingularGram);
        let indefinite = Operator::from_triplets(2, 2, [(0, 0, r(1, 1)), (1, 1, r(-1, 1))]);
        assert_eq!(TruncatedSpace::with_gram(vec![0, 1], indefinite).unwrap_err(), Error::SingularGram);
        assert!(TruncatedSpace::<u8, Q>::orthonormal(vec![1, 1]).is_err());
    }

    #[test]
    fn block_inverse_matches_identity() {
        let g = Operator::from_triplets(4, 4, [(0, 0, r(2, 1)), (1, 1, r(1, 1)), (1, 3, r(1, 3)), (3, 1, r(1, 3)), (3, 3, r(1, 1)), (2, 2, r(5, 1))]);
        let inv = block_inverse(&g, true).unwrap();
        assert_eq!(&g * &inv, Operator::identity(4));
        assert_eq!(components(&g), vec![vec![0], vec![1, 3], vec![2]]);
    }
}
