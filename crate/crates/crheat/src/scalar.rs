//! Exact coefficient rings.
//!
//! Jets of the Folland-Stein frame live over ℚ, but the CR sphere's ambient
//! chart carries factors of √2 (from `X̂_α = √2 Re Z_α`). Both rings share the
//! small [`Scalar`] interface so the polynomial code is written once.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Build `p/q` as a [`Rational`].
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Build the integer `p` as a [`Rational`].
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Nearest `f64` to a rational.
pub fn rat_to_f64(r: &Rational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or_else(|| {
        // Huge numerators/denominators: fall back to a scaled division.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact commutative coefficient ring used by [`crate::poly::Poly`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    /// Multiply by a rational number.
    fn scale(&self, r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
}

/// An element `a + b√2` of ℚ[√2].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSqrt2 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt2 { a, b }
    }

    /// `√2` itself.
    pub fn sqrt2() -> Self {
        QSqrt2::new(Zero::zero(), One::one())
    }

    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        QSqrt2::new(Zero::zero(), rat(1, 2))
    }

    /// The rational part, provided the √2 part vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        if Zero::is_zero(&self.b) {
            Some(self.a.clone())
        } else {
            None
        }
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (Zero::is_zero(&self.a), Zero::is_zero(&self.b)) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt2", self.b),
            (false, false) => {
                let sign = if self.b.is_negative() { "-" } else { "+" };
                write!(f, "({} {} {}*sqrt2)", self.a, sign, self.b.abs())
            }
        }
    }
}

impl Scalar for QSqrt2 {
    fn zero() -> Self {
        QSqrt2::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        QSqrt2::new(One::one(), Zero::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn add(&self, o: &Self) -> Self {
        QSqrt2::new(&self.a + &o.a, &self.b + &o.b)
    }
    fn sub(&self, o: &Self) -> Self {
        QSqrt2::new(&self.a - &o.a, &self.b - &o.b)
    }
    fn mul(&self, o: &Self) -> Self {
        let two = int(2);
        QSqrt2::new(
            &self.a * &o.a + &self.b * &o.b * two,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
    fn neg(&self) -> Self {
        QSqrt2::new(-&self.a, -&self.b)
    }
    fn from_rational(r: Rational) -> Self {
        QSqrt2::new(r, Zero::zero())
    }
    fn scale(&self, r: &Rational) -> Self {
        QSqrt2::new(&self.a * r, &self.b * r)
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * std::f64::consts::SQRT_2
    }
}
