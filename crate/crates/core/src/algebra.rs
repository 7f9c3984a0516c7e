//! The three-family graded Lie algebra: basis vectors, parameters, exact
//! linear combinations, and the bracket.
//!
//! The algebra has basis `{L_n, M_n, Y_{n+s} | n in Z}` for a parameter
//! triple `(lambda, mu, s)` with `s` either 0 or 1/2. The nontrivial
//! brackets are
//!
//! ```text
//! [L_n, L_m]     = (m - n) L_{n+m}
//! [L_n, M_m]     = (m - lambda n + 2 mu) M_{n+m}
//! [L_n, Y_{m+s}] = (m + s - (lambda+1)/2 n + mu) Y_{n+m+s}
//! [Y_{n+s}, Y_{m+s}] = (m - n) M_{n+m+2s}
//! ```
//!
//! All other family pairs bracket to zero, and the pairs written in one
//! order are extended to the other order by antisymmetry.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::scalar::{format_rat, rat, Rat};
use num_traits::Zero;

/// The three generator families, ordered `L < M < Y`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    L,
    M,
    Y,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::L => write!(f, "L"),
            Family::M => write!(f, "M"),
            Family::Y => write!(f, "Y"),
        }
    }
}

/// A graded basis vector; its degree is its index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisVector {
    pub family: Family,
    pub index: HalfInt,
}

impl BasisVector {
    pub fn new(family: Family, index: HalfInt) -> Self {
        BasisVector { family, index }
    }

    pub fn l(n: i64) -> Self {
        BasisVector::new(Family::L, HalfInt::from_int(n))
    }

    pub fn m(n: i64) -> Self {
        BasisVector::new(Family::M, HalfInt::from_int(n))
    }

    pub fn y(index: HalfInt) -> Self {
        BasisVector::new(Family::Y, index)
    }

    /// L and M indices must be integers; Y indices must lie in `s + Z`.
    pub fn is_valid_for(&self, s: HalfInt) -> bool {
        match self.family {
            Family::L | Family::M => self.index.is_integer(),
            Family::Y => self.index.same_parity(s),
        }
    }

    pub fn degree(&self) -> HalfInt {
        self.index
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.family, self.index)
    }
}

/// The parameter triple `(lambda, mu, s)`.
///
/// Parameters are restricted to exact rationals so that the coset
/// membership tests driving the classification case split are decidable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Params {
    lambda: Rat,
    mu: Rat,
    s: HalfInt,
}

impl Params {
    pub fn new(lambda: Rat, mu: Rat, s: HalfInt) -> Result<Self> {
        if s != HalfInt::ZERO && s != HalfInt::HALF {
            return Err(Error::ParameterIncompatible(format!(
                "s must be 0 or 1/2, got {s}"
            )));
        }
        Ok(Params { lambda, mu, s })
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    pub fn mu(&self) -> &Rat {
        &self.mu
    }

    pub fn s(&self) -> HalfInt {
        self.s
    }

    /// mu in s + Z
    pub fn mu_in_s_plus_int(&self) -> bool {
        match HalfInt::try_from_rat(&self.mu) {
            Some(h) => h.same_parity(self.s),
            None => false,
        }
    }

    /// mu in s + 1/2 + Z
    pub fn mu_in_s_plus_half_plus_int(&self) -> bool {
        match HalfInt::try_from_rat(&self.mu) {
            Some(h) => !h.same_parity(self.s),
            None => false,
        }
    }

    /// mu in s + (1/2)Z, equivalently 2 mu in Z.
    pub fn mu_in_half_int(&self) -> bool {
        crate::scalar::is_half_integer(&self.mu)
    }

    /// `mu` as a half-integer, when it is one.
    pub fn mu_halfint(&self) -> Option<HalfInt> {
        HalfInt::try_from_rat(&self.mu)
    }

    /// `2 mu` as an integer-valued half-integer, when 2 mu in Z.
    pub fn two_mu_halfint(&self) -> Option<HalfInt> {
        let two_mu = &self.mu * rat(2);
        HalfInt::try_from_rat(&two_mu).filter(|h| h.is_integer())
    }
}

/// A finite exact-rational linear combination of basis vectors.
///
/// Zero coefficients are never stored, so the zero test is an emptiness
/// test, and iteration order is the canonical basis order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LinComb {
    terms: BTreeMap<BasisVector, Rat>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn single(b: BasisVector, coeff: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(b, coeff);
        }
        LinComb { terms }
    }

    pub fn basis(b: BasisVector) -> Self {
        LinComb::single(b, rat(1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &BasisVector) -> Rat {
        self.terms.get(b).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisVector, &Rat)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisVector> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, b: BasisVector, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, other: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (b, c) in other.iter() {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LinComb) -> LinComb {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinComb {
        LinComb {
            terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> LinComb {
        if k.is_zero() {
            return LinComb::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(b, c)| (*b, c * k)).collect(),
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*{}", format_rat(c), b)?;
        }
        Ok(())
    }
}

/// The bracket of two basis vectors. Total on valid inputs; every output
/// is a scalar multiple of a single basis vector whose degree is the sum
/// of the input degrees.
pub fn bracket_basis(x: &BasisVector, y: &BasisVector, p: &Params) -> LinComb {
    use Family::*;
    match (x.family, y.family) {
        (L, L) => {
            // [L_n, L_m] = (m - n) L_{n+m}
            let coeff = (y.index - x.index).to_rat();
            LinComb::single(BasisVector::new(L, x.index + y.index), coeff)
        }
        (L, M) => {
            // [L_n, M_m] = (m - lambda n + 2 mu) M_{n+m}
            let coeff = y.index.to_rat() - p.lambda() * x.index.to_rat() + p.mu() * rat(2);
            LinComb::single(BasisVector::new(M, x.index + y.index), coeff)
        }
        (L, Y) => {
            // [L_n, Y_a] = (a - (lambda+1)/2 n + mu) Y_{n+a}
            let half = (p.lambda() + rat(1)) / rat(2);
            let coeff = y.index.to_rat() - half * x.index.to_rat() + p.mu();
            LinComb::single(BasisVector::new(Y, x.index + y.index), coeff)
        }
        (Y, Y) => {
            // [Y_a, Y_b] = (b - a) M_{a+b}
            let coeff = (y.index - x.index).to_rat();
            LinComb::single(BasisVector::new(M, x.index + y.index), coeff)
        }
        // Pairs the formulas state in the other order: extend by antisymmetry.
        (M, L) | (Y, L) => bracket_basis(y, x, p).neg(),
        // [M, M], [M, Y], [Y, M] vanish.
        (M, M) | (M, Y) | (Y, M) => LinComb::zero(),
    }
}

/// Bilinear extension of `bracket_basis` to linear combinations.
pub fn bracket(u: &LinComb, v: &LinComb, p: &Params) -> LinComb {
    let mut out = LinComb::zero();
    for (x, a) in u.iter() {
        for (y, b) in v.iter() {
            let term = bracket_basis(x, y, p).scale(&(a * b));
            out = out.add(&term);
        }
    }
    out
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`, which must vanish identically.
pub fn jacobi_residual(x: &BasisVector, y: &BasisVector, z: &BasisVector, p: &Params) -> LinComb {
    let xb = LinComb::basis(*x);
    let yb = LinComb::basis(*y);
    let zb = LinComb::basis(*z);
    let t1 = bracket(&xb, &bracket(&yb, &zb, p), p);
    let t2 = bracket(&yb, &bracket(&zb, &xb, p), p);
    let t3 = bracket(&zb, &bracket(&xb, &yb, p), p);
    t1.add(&t2).add(&t3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_frac;

    fn params(lambda: Rat, mu: Rat, s: HalfInt) -> Params {
        Params::new(lambda, mu, s).unwrap()
    }

    #[test]
    fn params_rejects_bad_s() {
        assert!(Params::new(rat(0), rat(0), HalfInt::from_int(1)).is_err());
        assert!(Params::new(rat(0), rat(0), HalfInt::from_doubled(-1)).is_err());
    }

    #[test]
    fn coset_predicates() {
        let p = params(rat(1), rat_frac(3, 2), HalfInt::ZERO);
        assert!(p.mu_in_s_plus_half_plus_int());
        assert!(!p.mu_in_s_plus_int());
        assert!(p.mu_in_half_int());

        let q = params(rat(1), rat_frac(1, 2), HalfInt::HALF);
        assert!(q.mu_in_s_plus_int());

        let r = params(rat(1), rat_frac(1, 3), HalfInt::ZERO);
        assert!(!r.mu_in_half_int());
        assert!(!r.mu_in_s_plus_int());
        assert!(!r.mu_in_s_plus_half_plus_int());
    }

    #[test]
    fn bracket_ll() {
        let p = params(rat(5), rat_frac(1, 7), HalfInt::ZERO);
        let out = bracket_basis(&BasisVector::l(1), &BasisVector::l(2), &p);
        assert_eq!(out, LinComb::single(BasisVector::l(3), rat(1)));
        // diagonal vanishes
        assert!(bracket_basis(&BasisVector::l(4), &BasisVector::l(4), &p).is_zero());
    }

    #[test]
    fn bracket_lm() {
        let p = params(rat(1), rat(0), HalfInt::ZERO);
        let out = bracket_basis(&BasisVector::l(2), &BasisVector::m(3), &p);
        assert_eq!(out, LinComb::single(BasisVector::m(5), rat(1)));
    }

    #[test]
    fn bracket_yy_half() {
        let p = params(rat_frac(22, 7), rat_frac(-5, 3), HalfInt::HALF);
        let y1 = BasisVector::y(HalfInt::from_doubled(1));
        let y3 = BasisVector::y(HalfInt::from_doubled(3));
        let out = bracket_basis(&y1, &y3, &p);
        assert_eq!(out, LinComb::single(BasisVector::m(2), rat(1)));
    }

    #[test]
    fn bracket_my_vanishes() {
        let p = params(rat(2), rat(1), HalfInt::HALF);
        let y = BasisVector::y(HalfInt::from_doubled(3));
        assert!(bracket_basis(&BasisVector::m(1), &y, &p).is_zero());
        assert!(bracket_basis(&BasisVector::m(0), &BasisVector::m(1), &p).is_zero());
    }

    #[test]
    fn bracket_bilinear() {
        let p = params(rat(0), rat(0), HalfInt::ZERO);
        let u = LinComb::single(BasisVector::l(1), rat(2));
        let v = LinComb::single(BasisVector::l(2), rat(3));
        assert_eq!(
            bracket(&u, &v, &p),
            LinComb::single(BasisVector::l(3), rat(6))
        );

        // (L_1 + M_1, L_2) at lambda = mu = 0: L_3 - M_3
        let u = LinComb::basis(BasisVector::l(1)).add(&LinComb::basis(BasisVector::m(1)));
        let v = LinComb::basis(BasisVector::l(2));
        let mut expected = LinComb::basis(BasisVector::l(3));
        expected.add_term(BasisVector::m(3), rat(-1));
        assert_eq!(bracket(&u, &v, &p), expected);

        assert!(bracket(&LinComb::zero(), &v, &p).is_zero());
    }

    #[test]
    fn jacobi_examples() {
        let p = params(rat(1), rat(0), HalfInt::ZERO);
        assert!(jacobi_residual(
            &BasisVector::l(1),
            &BasisVector::l(2),
            &BasisVector::m(3),
            &p
        )
        .is_zero());

        let p = params(rat(3), rat_frac(1, 3), HalfInt::HALF);
        assert!(jacobi_residual(
            &BasisVector::l(1),
            &BasisVector::l(2),
            &BasisVector::y(HalfInt::from_doubled(1)),
            &p
        )
        .is_zero());

        let p = params(rat(-2), rat_frac(7, 5), HalfInt::HALF);
        assert!(jacobi_residual(
            &BasisVector::m(0),
            &BasisVector::m(1),
            &BasisVector::y(HalfInt::from_doubled(1)),
            &p
        )
        .is_zero());
    }

    #[test]
    fn degree_additivity_and_antisymmetry() {
        let p = params(rat_frac(-3, 2), rat_frac(5, 4), HalfInt::HALF);
        let basis = [
            BasisVector::l(-2),
            BasisVector::l(1),
            BasisVector::m(0),
            BasisVector::m(3),
            BasisVector::y(HalfInt::from_doubled(-1)),
            BasisVector::y(HalfInt::from_doubled(5)),
        ];
        for x in &basis {
            for y in &basis {
                let out = bracket_basis(x, y, &p);
                for (b, _) in out.iter() {
                    assert_eq!(b.index, x.index + y.index);
                }
                let flipped = bracket_basis(y, x, &p);
                assert!(out.add(&flipped).is_zero());
            }
        }
    }
}
