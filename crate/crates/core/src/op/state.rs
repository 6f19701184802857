use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::model::{FockModel, SparseVector};
use super::word::Word;
use crate::error::{Error, Result};
use crate::scalar::{real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    Vector,
    AtInfinity,
    Mixture,
}

type Rule<S> = dyn Fn(&Word) -> Result<Complex<S>> + Send + Sync;

/// A linear functional on words.
#[derive(Clone)]
pub struct StateFunctional<S: Scalar> {
    kind: StateKind,
    label: String,
    rule: Arc<Rule<S>>,
}

impl<S: Scalar> StateFunctional<S> {
    pub fn new(
        kind: StateKind,
        label: impl Into<String>,
        rule: impl Fn(&Word) -> Result<Complex<S>> + Send + Sync + 'static,
    ) -> Self {
        StateFunctional { kind, label: label.into(), rule: Arc::new(rule) }
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, w: &Word) -> Result<Complex<S>> {
        (self.rule)(w)
    }
}

impl<S: Scalar> fmt::Debug for StateFunctional<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateFunctional").field("kind", &self.kind).field("label", &self.label).finish()
    }
}

/// `w ↦ ⟨W v, v⟩` in the model's inner product.
pub fn vector_state<S, M>(model: Arc<M>, v: SparseVector<M::Label, S>, label: impl Into<String>) -> StateFunctional<S>
where
    S: Scalar,
    M: FockModel<S> + 'static,
    M::Label: 'static,
{
    StateFunctional::new(StateKind::Vector, label, move |w| {
        let image = model.apply_word(w, &v)?;
        Ok(model.inner(&image, &v))
    })
}

/// `w ↦ ⟨W e, e⟩` for a single basis vector `e`.
pub fn basis_state<S, M>(model: Arc<M>, e: M::Label, label: impl Into<String>) -> StateFunctional<S>
where
    S: Scalar,
    M: FockModel<S> + 'static,
    M::Label: 'static,
{
    vector_state(model, SparseVector::basis(e), label)
}

/// `(1 − x)·φ1 + x·φ2`.
pub fn mixture<S: Scalar>(phi1: &StateFunctional<S>, phi2: &StateFunctional<S>, x: f64) -> Result<StateFunctional<S>> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::WeightOutOfRange(x));
    }
    let (a, b) = (phi1.clone(), phi2.clone());
    let wx = real(S::from_f64(x));
    let w1 = real(S::from_f64(1.0) - S::from_f64(x));
    let label = format!("(1-{x})*{} + {x}*{}", a.label, b.label);
    Ok(StateFunctional::new(StateKind::Mixture, label, move |w| {
        Ok(w1.clone() * a.evaluate(w)? + wx.clone() * b.evaluate(w)?)
    }))
}
