//! Exact rational scalars. All coefficients in the engine are
//! arbitrary-precision rationals; nothing is ever rounded.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Renders `p/q` in lowest terms, or just `p` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses an optionally signed integer or `p/q` literal into an exact
/// rational. Rejects zero denominators and anything non-numeric.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    let (num_s, den_s) = match text.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    let numer: BigInt = num_s.trim().parse().ok()?;
    let denom: BigInt = match den_s {
        Some(d) => d.trim().parse().ok()?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return None;
    }
    Some(Rat::new(numer, denom))
}

/// True iff `r` is an integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// True iff `2r` is an integer, i.e. `r` lies in (1/2)Z.
pub fn is_half_integer(r: &Rat) -> bool {
    is_integer(&(r * rat(2)))
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
