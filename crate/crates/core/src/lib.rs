//! Distributional-symmetry checks for operator models at finite truncation.
//!
//! The [`monoid`] module holds the index maps (increasing maps of ℤ with
//! finite co-range, finite permutations). The [`op`] module provides sparse
//! operators, words in creators and annihilators, state functionals and the
//! symmetry harness. Each model ([`monotone`], [`qdeformed`], [`boolean`],
//! [`car`]) is generic over the scalar field; the aliases below pick `f64` or
//! exact rationals.

pub mod boolean;
pub mod car;
pub mod error;
pub mod monoid;
pub mod monotone;
pub mod op;
pub mod qdeformed;
pub mod sampling;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rational = num_rational::Rational64;

pub type Operator64 = op::Operator<f64>;
pub type OperatorQ = op::Operator<Rational>;
pub type Monotone64 = monotone::MonotoneModel<f64>;
pub type MonotoneQ = monotone::MonotoneModel<Rational>;
pub type QFock64 = qdeformed::QModel<f64>;
pub type QFockQ = qdeformed::QModel<Rational>;
pub type Boolean64 = boolean::BooleanModel<f64>;
pub type BooleanQ = boolean::BooleanModel<Rational>;
pub type BooleanElement64 = boolean::BooleanElement<f64>;
pub type BooleanElementQ = boolean::BooleanElement<Rational>;
pub type Chain64 = car::FermionChain<f64>;
pub type ChainQ = car::FermionChain<Rational>;
