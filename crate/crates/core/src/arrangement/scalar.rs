use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Integer type used by the arrangement kernel.
pub trait Scalar:
    Clone
    + Ord
    + Eq
    + Hash
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn from_i64(v: i64) -> Self;
}

impl Scalar for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
}

impl Scalar for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

/// `num / den` with `den > 0`, never reduced.
#[derive(Clone, Debug)]
pub struct Frac<S> {
    pub num: S,
    pub den: S,
}

impl<S: Scalar> Frac<S> {
    pub fn new(num: S, den: S) -> Self {
        if den < S::zero() {
            Frac { num: -num, den: -den }
        } else {
            debug_assert!(!den.is_zero());
            Frac { num, den }
        }
    }

    pub fn int(v: S) -> Self {
        Frac { num: v, den: S::one() }
    }

    /// Compares with an integer.
    pub fn cmp_int(&self, k: &S) -> Ordering {
        self.num.cmp(&(k.clone() * self.den.clone()))
    }
}

impl<S: Scalar> PartialEq for Frac<S> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Frac<S> {}

impl<S: Scalar> PartialOrd for Frac<S> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<S: Scalar> Ord for Frac<S> {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.num.clone() * o.den.clone()).cmp(&(o.num.clone() * self.den.clone()))
    }
}

/// An x-coordinate on the extended real line.
#[derive(Clone, Debug)]
pub enum XCoord<S> {
    NegInf,
    At(Frac<S>),
    PosInf,
}

impl<S: Scalar> XCoord<S> {
    pub fn finite(&self) -> Option<&Frac<S>> {
        match self {
            XCoord::At(f) => Some(f),
            _ => None,
        }
    }
}

impl<S: Scalar> PartialEq for XCoord<S> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for XCoord<S> {}

impl<S: Scalar> PartialOrd for XCoord<S> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<S: Scalar> Ord for XCoord<S> {
    fn cmp(&self, o: &Self) -> Ordering {
        use XCoord::*;
        match (self, o) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (At(a), At(b)) => a.cmp(b),
        }
    }
}

impl<S: Scalar> std::fmt::Display for XCoord<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XCoord::NegInf => write!(f, "-inf"),
            XCoord::PosInf => write!(f, "+inf"),
            XCoord::At(v) => write!(f, "{}/{}", v.num.to_big(), v.den.to_big()),
        }
    }
}
