//! Exact scalars: the rationals and the cyclotomic field `Q(w)`, where `w` is a
//! primitive cube root of unity (`w^2 + w + 1 = 0`).
//!
//! Every tensor kernel in the crate is generic over [`Scalar`]. `Rational` is
//! used whenever no cube root of unity is needed; [`Cyc`] carries the Dic3
//! machinery, whose generator `phi` has eigenvalues `1, w, w^2`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed scalar {0:?}")]
    Malformed(String),
    #[error("scalar {0} is not rational")]
    NotRational(String),
}

/// The operations every coefficient type provides.
///
/// Equality is structural equality of the canonical form; there is no
/// tolerance anywhere.
pub trait Scalar:
    Clone
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Name used in algebra files: `"Q"` or `"Q(w)"`.
    const FIELD: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn from_rational(r: Rational) -> Self;
    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_i64(n))
    }
    fn inv(&self) -> Result<Self, ScalarError>;

    /// The primitive cube root of unity `w`, when the field contains it.
    fn omega() -> Option<Self>;

    /// Textual form used in files and reports.
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, ScalarError>;

    fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * &other.inv()?)
    }
    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }
}

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ScalarError::Malformed(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| bad())?;
        let den: BigInt = d.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

macro_rules! forward_binops {
    ($ty:ty) => {
        impl Add for $ty {
            type Output = $ty;
            fn add(self, o: $ty) -> $ty {
                self + &o
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, o: $ty) -> $ty {
                self - &o
            }
        }
        impl Mul for $ty {
            type Output = $ty;
            fn mul(self, o: $ty) -> $ty {
                self * &o
            }
        }
        impl<'a> AddAssign<&'a $ty> for $ty {
            fn add_assign(&mut self, o: &'a $ty) {
                *self = std::mem::replace(self, <$ty as Scalar>::zero()) + o;
            }
        }
        impl<'a> SubAssign<&'a $ty> for $ty {
            fn sub_assign(&mut self, o: &'a $ty) {
                *self = std::mem::replace(self, <$ty as Scalar>::zero()) - o;
            }
        }
        impl<'a> MulAssign<&'a $ty> for $ty {
            fn mul_assign(&mut self, o: &'a $ty) {
                *self = std::mem::replace(self, <$ty as Scalar>::zero()) * o;
            }
        }
    };
}

impl<'a> Add<&'a Rational> for Rational {
    type Output = Rational;
    fn add(self, o: &'a Rational) -> Rational {
        Rational(self.0 + &o.0)
    }
}
impl<'a> Sub<&'a Rational> for Rational {
    type Output = Rational;
    fn sub(self, o: &'a Rational) -> Rational {
        Rational(self.0 - &o.0)
    }
}
impl<'a> Mul<&'a Rational> for Rational {
    type Output = Rational;
    fn mul(self, o: &'a Rational) -> Rational {
        Rational(self.0 * &o.0)
    }
}
impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}
forward_binops!(Rational);

impl Scalar for Rational {
    const FIELD: &'static str = "Q";

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.0.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }
    fn omega() -> Option<Self> {
        None
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn from_json(v: &Value) -> Result<Self, ScalarError> {
        match v {
            Value::String(s) => s.parse(),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_i64(n.as_i64().unwrap_or(0))),
            Value::Object(_) => {
                let c = Cyc::from_json(v)?;
                c.as_rational()
                    .cloned()
                    .ok_or_else(|| ScalarError::NotRational(c.to_string()))
            }
            other => Err(ScalarError::Malformed(other.to_string())),
        }
    }
}

/// An element `a + b w` of `Q(w)`, with `w^2` always reduced to `-1 - w`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyc {
    pub a: Rational,
    pub b: Rational,
}

impl Cyc {
    pub fn new(a: Rational, b: Rational) -> Self {
        Cyc { a, b }
    }

    /// `w` itself.
    pub fn w() -> Self {
        Cyc::new(Rational::zero(), Rational::one())
    }

    /// Field norm `a^2 - ab + b^2`, multiplicative and zero only at zero.
    pub fn norm(&self) -> Rational {
        self.a.clone() * &self.a - self.a.clone() * &self.b + self.b.clone() * &self.b
    }

    /// Image under the nontrivial automorphism `w -> w^2`.
    pub fn conj(&self) -> Self {
        Cyc::new(self.a.clone() - &self.b, -self.b.clone())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }
}

impl From<Rational> for Cyc {
    fn from(r: Rational) -> Self {
        Cyc::new(r, Rational::zero())
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}w", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{}-{}w", self.a, -self.b.clone())
                } else {
                    write!(f, "{}+{}w", self.a, self.b)
                }
            }
        }
    }
}

impl<'a> Add<&'a Cyc> for Cyc {
    type Output = Cyc;
    fn add(self, o: &'a Cyc) -> Cyc {
        Cyc::new(self.a + &o.a, self.b + &o.b)
    }
}
impl<'a> Sub<&'a Cyc> for Cyc {
    type Output = Cyc;
    fn sub(self, o: &'a Cyc) -> Cyc {
        Cyc::new(self.a - &o.a, self.b - &o.b)
    }
}
impl<'a> Mul<&'a Cyc> for Cyc {
    type Output = Cyc;
    fn mul(self, o: &'a Cyc) -> Cyc {
        // (a + bw)(c + dw) = (ac - bd) + (ad + bc - bd)w
        if self.b.is_zero() && o.b.is_zero() {
            return Cyc::new(self.a * &o.a, Rational::zero());
        }
        let bd = self.b.clone() * &o.b;
        let a = self.a.clone() * &o.a - &bd;
        let b = self.a * &o.b + &(self.b * &o.a) - &bd;
        Cyc::new(a, b)
    }
}
impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc::new(-self.a, -self.b)
    }
}
forward_binops!(Cyc);

impl Scalar for Cyc {
    const FIELD: &'static str = "Q(w)";

    fn zero() -> Self {
        Cyc::new(Rational::zero(), Rational::zero())
    }
    fn one() -> Self {
        Cyc::new(Rational::one(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn from_rational(r: Rational) -> Self {
        Cyc::from(r)
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        let n = self.norm().inv()?;
        let c = self.conj();
        Ok(Cyc::new(c.a * &n, c.b * &n))
    }
    fn omega() -> Option<Self> {
        Some(Cyc::w())
    }
    fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("a".into(), self.a.to_json());
        m.insert("b".into(), self.b.to_json());
        Value::Object(m)
    }
    fn from_json(v: &Value) -> Result<Self, ScalarError> {
        match v {
            Value::Object(m) => {
                let part = |k: &str| match m.get(k) {
                    Some(x) => Rational::from_json(x),
                    None => Ok(Rational::zero()),
                };
                if m.keys().any(|k| k != "a" && k != "b") {
                    return Err(ScalarError::Malformed(v.to_string()));
                }
                Ok(Cyc::new(part("a")?, part("b")?))
            }
            other => Rational::from_json(other).map(Cyc::from),
        }
    }
}

/// One of the two signs `+1`, `-1` that parametrize the triple systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn scalar<S: Scalar>(self) -> S {
        S::from_i64(self.value())
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Shorthand for a rational constant; panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("nonzero denominator")
}

/// Converts a coefficient into any field containing `Q`.
pub fn lift<S: Scalar>(r: &Rational) -> S {
    S::from_rational(r.clone())
}
