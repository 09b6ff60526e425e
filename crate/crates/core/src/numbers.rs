//! Exact rationals and rotation numbers of roots of unity.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::Error;

pub type Rational = num_rational::Ratio<i64>;

/// Fractional part in `[0, 1)`.
pub fn frac(r: Rational) -> Rational {
    r - r.floor()
}

/// Always `a/b`, also for integers (`0/1`, `2/1`).
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: {s:?}"),
    };
    let s = s.trim();
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let a: i64 = a.parse().map_err(|_| bad("bad numerator"))?;
    let b: i64 = b.parse().map_err(|_| bad("bad denominator"))?;
    if b == 0 {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(a, b))
}

/// `θ ∈ [0, 1) ∩ Q`, standing for the root of unity `exp(2πiθ)`.
/// Ordered by denominator, then numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RotationNumber(Rational);

impl RotationNumber {
    pub fn new(theta: Rational) -> Self {
        RotationNumber(frac(theta))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(Rational::new(num, den))
    }

    pub fn one() -> Self {
        RotationNumber(Rational::zero())
    }

    pub fn theta(&self) -> Rational {
        self.0
    }

    /// Multiplicative order of the root of unity.
    pub fn order(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    /// The complex conjugate root, `1 - θ` mod 1.
    pub fn conjugate(&self) -> Self {
        Self::new(Rational::one() - self.0)
    }

    /// `λ^d = 1`, i.e. the order divides `d`.
    pub fn divides_order(&self, d: i64) -> bool {
        d % self.order() == 0
    }
}

impl Ord for RotationNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.denom(), self.0.numer()).cmp(&(other.0.denom(), other.0.numer()))
    }
}

impl PartialOrd for RotationNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

impl FromStr for RotationNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(Self::new(parse_rational(s)?))
    }
}
