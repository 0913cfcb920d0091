use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Exact non-negative rational, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: BigUint,
    den: BigUint,
}

impl Ratio {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Self {
        let num = num.into();
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        if g.is_one() || g.is_zero() {
            Ratio { num, den }
        } else {
            Ratio {
                num: num / &g,
                den: den / g,
            }
        }
    }

    pub fn zero() -> Self {
        Ratio {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    pub fn one() -> Self {
        Ratio {
            num: BigUint::one(),
            den: BigUint::one(),
        }
    }

    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    /// `1 - self`; panics if `self > 1`.
    pub fn complement(&self) -> Self {
        Ratio::new(&self.den - &self.num, self.den.clone())
    }

    /// Closed-interval test `lo <= self <= hi`.
    pub fn within(&self, lo: &Ratio, hi: &Ratio) -> bool {
        lo <= self && self <= hi
    }

    /// Decimal approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        match (self.num.to_f64(), self.den.to_f64()) {
            (Some(a), Some(b)) => a / b,
            _ => f64::NAN,
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
