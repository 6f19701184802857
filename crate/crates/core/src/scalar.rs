//! Scalar field abstraction.
//!
//! Every operator model in the crate is generic over a real scalar `S`; matrix
//! entries are `Complex<S>`. Floating types give fast approximate checks,
//! rational types give exact ones (all monotone, Boolean and CAR generators have
//! entries in {0, ±1}, and q-deformed entries are polynomials in q).

use std::fmt;
use std::ops::Neg;

use num_complex::Complex;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, ToPrimitive};

/// A real scalar usable as the coefficient field of an operator model.
pub trait Scalar:
    Num + Clone + PartialOrd + Neg<Output = Self> + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Nearest representable value. Exact types use a continued-fraction
    /// approximation, so `from_f64(0.5)` is exactly one half.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Integer power with the convention `0^0 = 1`.
    fn ipow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
    fn from_i64(n: i64) -> Self {
        n as f32
    }
}

impl Scalar for Rational64 {
    const EXACT: bool = true;
    fn from_f64(x: f64) -> Self {
        decimal_to_ratio(x)
            .and_then(|(n, d)| Some(Rational64::new(n.to_i64()?, d.to_i64()?)))
            .or_else(|| Rational64::approximate_float(x))
            .expect("finite value representable as a 64-bit ratio")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_i64(n: i64) -> Self {
        Rational64::from_integer(n)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn from_f64(x: f64) -> Self {
        match decimal_to_ratio(x) {
            Some((n, d)) => BigRational::new(n.into(), d.into()),
            None => BigRational::from_float(x).expect("finite value"),
        }
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

/// Reads a float back as the short decimal it was most likely written as
/// (`0.9` becomes 9/10 rather than its binary expansion).
fn decimal_to_ratio(x: f64) -> Option<(i128, i128)> {
    if !x.is_finite() {
        return None;
    }
    let mut den: i128 = 1;
    for _ in 0..12 {
        let scaled = x * den as f64;
        if scaled.abs() > 1e17 {
            return None;
        }
        if scaled == scaled.round() {
            let num = scaled.round() as i128;
            let g = gcd(num.abs(), den);
            return Some((num / g, den / g));
        }
        den *= 10;
    }
    None
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Modulus of a complex entry, evaluated in `f64`.
pub fn modulus<S: Scalar>(z: &Complex<S>) -> f64 {
    z.re.to_f64().hypot(z.im.to_f64())
}

pub fn conj<S: Scalar>(z: &Complex<S>) -> Complex<S> {
    Complex::new(z.re.clone(), -z.im.clone())
}

pub fn real<S: Scalar>(x: S) -> Complex<S> {
    Complex::new(x, S::zero())
}

pub fn c_one<S: Scalar>() -> Complex<S> {
    Complex::new(S::one(), S::zero())
}

pub fn c_zero<S: Scalar>() -> Complex<S> {
    Complex::new(S::zero(), S::zero())
}

pub fn is_zero<S: Scalar>(z: &Complex<S>) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// Complex value flattened to `[re, im]` for reports.
pub fn to_pair<S: Scalar>(z: &Complex<S>) -> [f64; 2] {
    [z.re.to_f64(), z.im.to_f64()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn decimal_inputs_become_short_ratios() {
        assert_eq!(Rational64::from_f64(0.9), Rational64::new(9, 10));
        assert_eq!(Rational64::from_f64(-0.5), Rational64::new(-1, 2));
        assert_eq!(BigRational::from_f64(0.3), BigRational::new(3.into(), 10.into()));
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(Scalar::ipow(&0.0_f64, 0), 1.0);
        assert_eq!(Rational64::zero().ipow(0), Rational64::one());
        assert_eq!(Rational64::new(1, 2).ipow(3), Rational64::new(1, 8));
    }
}
