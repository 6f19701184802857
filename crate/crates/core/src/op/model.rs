use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_complex::Complex;

use super::operator::Operator;
use super::space::TruncatedSpace;
use super::word::{Letter, Word};
use crate::error::{Error, Result};
use crate::scalar::{c_one, c_zero, conj, is_zero, Scalar};

/// Finitely supported vector keyed by basis label.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<L: Ord, S: Scalar>(pub BTreeMap<L, Complex<S>>);

impl<L: Ord + Clone, S: Scalar> SparseVector<L, S> {
    pub fn zero() -> Self {
        SparseVector(BTreeMap::new())
    }

    pub fn basis(label: L) -> Self {
        SparseVector(BTreeMap::from([(label, c_one())]))
    }

    pub fn add_scaled(&mut self, label: L, c: Complex<S>) {
        let e = self.0.entry(label.clone()).or_insert_with(c_zero);
        *e = e.clone() + c;
        if is_zero(e) {
            self.0.remove(&label);
        }
    }

    pub fn coefficient(&self, label: &L) -> Complex<S> {
        self.0.get(label).cloned().unwrap_or_else(c_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &Complex<S>)> {
        self.0.iter()
    }
}

/// A Fock-type model: a labelled basis, creation and annihilation rules on
/// basis vectors, and the inner product of basis vectors.
///
/// Everything else (position operators, words, sparse-vector action,
/// matrices on the truncated basis) is derived from these rules.
pub trait FockModel<S: Scalar>: Send + Sync {
    type Label: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    /// Sites `[lo, hi]` at which generators exist.
    fn window(&self) -> (i64, i64);

    fn vacuum(&self) -> Self::Label;

    /// Image of a basis vector under the creator at `site`.
    fn create(&self, site: i64, label: &Self::Label) -> Vec<(Self::Label, Complex<S>)>;

    /// Image of a basis vector under the annihilator at `site`.
    fn annihilate(&self, site: i64, label: &Self::Label) -> Vec<(Self::Label, Complex<S>)>;

    /// Enumerated truncated basis used for matrices.
    fn basis(&self) -> Vec<Self::Label>;

    /// `⟨e_a, e_b⟩`; orthonormal unless overridden.
    fn basis_inner(&self, a: &Self::Label, b: &Self::Label) -> Complex<S> {
        if a == b {
            c_one()
        } else {
            c_zero()
        }
    }

    /// True when `basis_inner` is not the Kronecker delta.
    fn has_metric(&self) -> bool {
        false
    }

    fn check_site(&self, site: i64) -> Result<()> {
        let (lo, hi) = self.window();
        if site < lo || site > hi {
            return Err(Error::IndexOutsideWindow { index: site, lo, hi });
        }
        Ok(())
    }

    fn apply_letter(
        &self,
        letter: Letter,
        v: &SparseVector<Self::Label, S>,
    ) -> Result<SparseVector<Self::Label, S>> {
        if let Some(site) = letter.index() {
            self.check_site(site)?;
        }
        let mut out = SparseVector::zero();
        for (label, c) in v.iter() {
            let images = match letter {
                Letter::Creator(j) => self.create(j, label),
                Letter::Annihilator(j) => self.annihilate(j, label),
                Letter::Position(j) => {
                    let mut both = self.create(j, label);
                    both.extend(self.annihilate(j, label));
                    both
                }
                Letter::Unit => vec![(label.clone(), c_one())],
            };
            for (image, coeff) in images {
                out.add_scaled(image, coeff * c.clone());
            }
        }
        Ok(out)
    }

    /// `W v`, rightmost letter first.
    fn apply_word(&self, w: &Word, v: &SparseVector<Self::Label, S>) -> Result<SparseVector<Self::Label, S>> {
        w.letters().iter().rev().try_fold(v.clone(), |acc, &l| self.apply_letter(l, &acc))
    }

    /// `⟨u, v⟩`, linear in `u`.
    fn inner(&self, u: &SparseVector<Self::Label, S>, v: &SparseVector<Self::Label, S>) -> Complex<S> {
        if !self.has_metric() {
            return u
                .iter()
                .filter_map(|(l, a)| v.0.get(l).map(|b| a.clone() * conj(b)))
                .fold(c_zero(), |acc, x| acc + x);
        }
        let mut acc = c_zero();
        for (a, ua) in u.iter() {
            for (b, vb) in v.iter() {
                let g = self.basis_inner(a, b);
                if !is_zero(&g) {
                    acc = acc + ua.clone() * conj(vb) * g;
                }
            }
        }
        acc
    }

    /// The enumerated basis with its metric.
    fn space(&self) -> Result<TruncatedSpace<Self::Label, S>> {
        let labels = self.basis();
        if !self.has_metric() {
            return TruncatedSpace::orthonormal(labels);
        }
        // G[(a, b)] = ⟨e_b, e_a⟩
        let mut entries = Vec::new();
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                let g = self.basis_inner(b, a);
                if !is_zero(&g) {
                    entries.push((i, j, g));
                }
            }
        }
        let n = labels.len();
        TruncatedSpace::with_gram(labels, Operator::from_triplets(n, n, entries))
    }

    /// Matrix of one letter on `space`. Images falling outside the enumerated
    /// basis are dropped (truncation).
    fn letter_matrix(&self, space: &TruncatedSpace<Self::Label, S>, letter: Letter) -> Result<Operator<S>> {
        let n = space.dim();
        let mut entries = Vec::new();
        for (j, label) in space.labels().iter().enumerate() {
            let image = self.apply_letter(letter, &SparseVector::basis(label.clone()))?;
            for (l, c) in image.iter() {
                if let Some(i) = space.index_of(l) {
                    entries.push((i, j, c.clone()));
                }
            }
        }
        Ok(Operator::from_triplets(n, n, entries))
    }
}

/// Ordered product of the letters' matrices; the empty word gives the
/// identity.
pub fn evaluate_word<S: Scalar, M: FockModel<S> + ?Sized>(
    model: &M,
    space: &TruncatedSpace<M::Label, S>,
    w: &Word,
) -> Result<Operator<S>> {
    let mut acc = Operator::identity(space.dim());
    for &letter in w.letters() {
        acc = acc.try_mul(&model.letter_matrix(space, letter)?)?;
    }
    Ok(acc)
}

/// Caches the letter matrices of a model on its enumerated basis.
pub struct MatrixModel<'a, S: Scalar, M: FockModel<S>> {
    model: &'a M,
    space: TruncatedSpace<M::Label, S>,
    cache: std::sync::Mutex<std::collections::HashMap<Letter, Operator<S>>>,
}

impl<'a, S: Scalar, M: FockModel<S>> MatrixModel<'a, S, M> {
    pub fn new(model: &'a M) -> Result<Self> {
        Ok(MatrixModel { model, space: model.space()?, cache: Default::default() })
    }

    pub fn space(&self) -> &TruncatedSpace<M::Label, S> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn letter(&self, letter: Letter) -> Result<Operator<S>> {
        if let Some(m) = self.cache.lock().expect("cache lock").get(&letter) {
            return Ok(m.clone());
        }
        let m = self.model.letter_matrix(&self.space, letter)?;
        self.cache.lock().expect("cache lock").insert(letter, m.clone());
        Ok(m)
    }

    pub fn creator(&self, site: i64) -> Result<Operator<S>> {
        self.letter(Letter::Creator(site))
    }

    pub fn annihilator(&self, site: i64) -> Result<Operator<S>> {
        self.letter(Letter::Annihilator(site))
    }

    pub fn position(&self, site: i64) -> Result<Operator<S>> {
        self.letter(Letter::Position(site))
    }

    pub fn identity(&self) -> Operator<S> {
        Operator::identity(self.dim())
    }

    pub fn word(&self, w: &Word) -> Result<Operator<S>> {
        w.letters().iter().try_fold(self.identity(), |acc, &l| acc.try_mul(&self.letter(l)?))
    }

    pub fn metric_adjoint(&self, a: &Operator<S>) -> Result<Operator<S>> {
        self.space.metric_adjoint(a)
    }

    pub fn index_of(&self, label: &M::Label) -> Option<usize> {
        self.space.index_of(label)
    }
}
