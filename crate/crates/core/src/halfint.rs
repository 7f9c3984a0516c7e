//! Half-integer indices. Every basis-vector index lives in (1/2)Z; storing
//! twice the value keeps all index arithmetic in plain integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::ToPrimitive;

use crate::scalar::{rat, rat_frac, Rat};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };
    pub const HALF: HalfInt = HalfInt { doubled: 1 };

    pub fn from_int(n: i64) -> Self {
        HalfInt { doubled: 2 * n }
    }

    /// Builds the value `doubled / 2`.
    pub fn from_doubled(doubled: i64) -> Self {
        HalfInt { doubled }
    }

    pub fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    /// The integer value, when integral.
    pub fn as_int(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.doubled / 2)
        } else {
            None
        }
    }

    pub fn to_rat(self) -> Rat {
        rat_frac(self.doubled, 2)
    }

    /// Exact conversion from a rational in (1/2)Z; `None` otherwise.
    pub fn try_from_rat(r: &Rat) -> Option<Self> {
        let doubled = r * rat(2);
        if !crate::scalar::is_integer(&doubled) {
            return None;
        }
        Some(HalfInt {
            doubled: doubled.numer().to_i64()?,
        })
    }

    pub fn abs(self) -> Self {
        HalfInt {
            doubled: self.doubled.abs(),
        }
    }

    /// Same coset of Z, i.e. the difference is an integer.
    pub fn same_parity(self, other: HalfInt) -> bool {
        (self.doubled - other.doubled) % 2 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            doubled: self.doubled + rhs.doubled,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            doubled: self.doubled - rhs.doubled,
        }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt {
            doubled: -self.doubled,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.doubled % 2 == 0 {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}
