//! Bilinear maps and linear self-maps on the algebra: inner biderivations,
//! the exceptional maps defined at `lambda = 1`, standard commuting maps,
//! and exact residual checkers for their defining identities.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{bracket, bracket_basis, BasisVector, Family, LinComb, Params};
use crate::error::{Error, Result};
use crate::linalg::in_span;
use crate::scalar::{rat, Rat};
use crate::structure::{centralizer_of_derived, to_coords, Window};

/// A linear functional on the window basis, used as the scalar part of a
/// standard commuting map. Unlisted basis vectors map to 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctionalSpec {
    coefficients: BTreeMap<BasisVector, Rat>,
}

impl FunctionalSpec {
    pub fn zero() -> Self {
        FunctionalSpec::default()
    }

    pub fn set(&mut self, b: BasisVector, value: Rat) {
        if value.is_zero() {
            self.coefficients.remove(&b);
        } else {
            self.coefficients.insert(b, value);
        }
    }

    pub fn eval(&self, b: &BasisVector) -> Rat {
        self.coefficients.get(b).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryFlag {
    Skew,
    General,
}

#[derive(Clone, Debug)]
enum BilinearBacking {
    /// `(x, y) -> alpha [x, y]`
    Inner { alpha: Rat },
    /// `(L_n, L_m) -> (m - n) M_{n+m-2mu}`, others 0
    ExceptionalHalf,
    /// `(L_n, L_m) -> (m - n) Y_{n+m-mu}`,
    /// `(L_n, Y_a) -> (a - n + mu) M_{n+a-mu}`, others 0
    ExceptionalInt,
    /// `(x, y) -> [psi(x), y]` for a commuting self-map
    FromSelfMap(Box<LinearSelfMap>),
    /// Finite support over pairs from a window; zero within the window off
    /// the listed pairs, undefined outside it.
    Table {
        domain: Window,
        values: BTreeMap<(BasisVector, BasisVector), LinComb>,
    },
}

/// A bilinear map valued in the algebra. Formula-backed maps are total;
/// window-backed maps report `UndefinedSupport` outside their window.
#[derive(Clone, Debug)]
pub struct BilinearMap {
    backing: BilinearBacking,
    symmetry: SymmetryFlag,
}

impl BilinearMap {
    pub fn symmetry(&self) -> SymmetryFlag {
        self.symmetry
    }

    /// A window-backed map; for a skew map the keys must be canonically
    /// ordered pairs (first < second).
    pub fn from_table(
        domain: Window,
        values: BTreeMap<(BasisVector, BasisVector), LinComb>,
        symmetry: SymmetryFlag,
    ) -> Self {
        if symmetry == SymmetryFlag::Skew {
            debug_assert!(values.keys().all(|(a, b)| a < b));
        }
        BilinearMap {
            backing: BilinearBacking::Table { domain, values },
            symmetry,
        }
    }

    pub fn eval_basis(&self, x: &BasisVector, y: &BasisVector, p: &Params) -> Result<LinComb> {
        match &self.backing {
            BilinearBacking::Inner { alpha } => Ok(bracket_basis(x, y, p).scale(alpha)),
            BilinearBacking::ExceptionalHalf => {
                let two_mu = p
                    .two_mu_halfint()
                    .ok_or_else(|| Error::ParameterIncompatible("2 mu is not an integer".into()))?;
                match (x.family, y.family) {
                    (Family::L, Family::L) => {
                        let coeff = (y.index - x.index).to_rat();
                        let idx = x.index + y.index - two_mu;
                        Ok(LinComb::single(BasisVector::new(Family::M, idx), coeff))
                    }
                    _ => Ok(LinComb::zero()),
                }
            }
            BilinearBacking::ExceptionalInt => {
                let mu = p.mu_halfint().ok_or_else(|| {
                    Error::ParameterIncompatible("mu is not a half-integer".into())
                })?;
                match (x.family, y.family) {
                    (Family::L, Family::L) => {
                        let coeff = (y.index - x.index).to_rat();
                        let idx = x.index + y.index - mu;
                        Ok(LinComb::single(BasisVector::new(Family::Y, idx), coeff))
                    }
                    (Family::L, Family::Y) => {
                        let coeff = (y.index - x.index).to_rat() + p.mu();
                        let idx = x.index + y.index - mu;
                        Ok(LinComb::single(BasisVector::new(Family::M, idx), coeff))
                    }
                    (Family::Y, Family::L) => {
                        let coeff = (y.index - x.index).to_rat() - p.mu();
                        let idx = x.index + y.index - mu;
                        Ok(LinComb::single(BasisVector::new(Family::M, idx), coeff))
                    }
                    _ => Ok(LinComb::zero()),
                }
            }
            BilinearBacking::FromSelfMap(psi) => {
                let img = psi.eval_basis(x, p)?;
                Ok(bracket(&img, &LinComb::basis(*y), p))
            }
            BilinearBacking::Table { domain, values } => {
                if !domain.contains(x) || !domain.contains(y) {
                    return Err(Error::UndefinedSupport(format!(
                        "pair ({x}, {y}) outside the backing window"
                    )));
                }
                match self.symmetry {
                    SymmetryFlag::General => {
                        Ok(values.get(&(*x, *y)).cloned().unwrap_or_else(LinComb::zero))
                    }
                    SymmetryFlag::Skew => {
                        if x == y {
                            Ok(LinComb::zero())
                        } else if x < y {
                            Ok(values.get(&(*x, *y)).cloned().unwrap_or_else(LinComb::zero))
                        } else {
                            Ok(values
                                .get(&(*y, *x))
                                .map(|v| v.neg())
                                .unwrap_or_else(LinComb::zero))
                        }
                    }
                }
            }
        }
    }

    /// Bilinear extension to linear combinations in both slots.
    pub fn eval(&self, u: &LinComb, v: &LinComb, p: &Params) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for (x, a) in u.iter() {
            for (y, b) in v.iter() {
                let val = self.eval_basis(x, y, p)?;
                out = out.add(&val.scale(&(a * b)));
            }
        }
        Ok(out)
    }
}

/// The inner biderivation `(x, y) -> alpha [x, y]`.
pub fn inner_bider(alpha: Rat) -> BilinearMap {
    BilinearMap {
        backing: BilinearBacking::Inner { alpha },
        symmetry: SymmetryFlag::Skew,
    }
}

/// The exceptional biderivation defined when `lambda = 1` and
/// `mu in s + (1/2)Z`: `(L_n, L_m) -> (m - n) M_{n+m-2mu}`, others 0.
pub fn phi0(p: &Params) -> Result<BilinearMap> {
    if p.lambda() != &rat(1) || !p.mu_in_half_int() {
        return Err(Error::ParameterIncompatible(format!(
            "phi0 needs lambda = 1 and mu in s + (1/2)Z, got lambda = {}, mu = {}",
            p.lambda(),
            p.mu()
        )));
    }
    Ok(BilinearMap {
        backing: BilinearBacking::ExceptionalHalf,
        symmetry: SymmetryFlag::Skew,
    })
}

/// The exceptional biderivation defined when `lambda = 1` and
/// `mu in s + Z`: images land in the `Y` and `M` families shifted by `mu`.
pub fn phi1(p: &Params) -> Result<BilinearMap> {
    if p.lambda() != &rat(1) || !p.mu_in_s_plus_int() {
        return Err(Error::ParameterIncompatible(format!(
            "phi1 needs lambda = 1 and mu in s + Z, got lambda = {}, mu = {}",
            p.lambda(),
            p.mu()
        )));
    }
    Ok(BilinearMap {
        backing: BilinearBacking::ExceptionalInt,
        symmetry: SymmetryFlag::Skew,
    })
}

#[derive(Clone, Debug)]
enum SelfMapBacking {
    /// `x -> alpha x + f(x) M_{-2mu}`
    Standard { alpha: Rat, f: FunctionalSpec },
    /// `L_n -> M_{n-2mu}`, others 0
    ExceptionalHalf,
    /// `L_n -> Y_{n-mu}`, `Y_a -> M_{a-mu}`, `M -> 0`
    ExceptionalInt,
    /// Finite images over a window; undefined outside it.
    Table {
        domain: Window,
        images: BTreeMap<BasisVector, LinComb>,
    },
}

/// A linear self-map of the algebra.
#[derive(Clone, Debug)]
pub struct LinearSelfMap {
    backing: SelfMapBacking,
}

impl LinearSelfMap {
    pub fn identity() -> Self {
        LinearSelfMap {
            backing: SelfMapBacking::Standard {
                alpha: rat(1),
                f: FunctionalSpec::zero(),
            },
        }
    }

    pub fn from_table(domain: Window, images: BTreeMap<BasisVector, LinComb>) -> Self {
        LinearSelfMap {
            backing: SelfMapBacking::Table { domain, images },
        }
    }

    pub fn eval_basis(&self, b: &BasisVector, p: &Params) -> Result<LinComb> {
        match &self.backing {
            SelfMapBacking::Standard { alpha, f } => {
                let mut out = LinComb::single(*b, alpha.clone());
                let fv = f.eval(b);
                if !fv.is_zero() {
                    let two_mu = p.two_mu_halfint().ok_or_else(|| {
                        Error::ParameterIncompatible("2 mu is not an integer".into())
                    })?;
                    out.add_term(BasisVector::new(Family::M, -two_mu), fv);
                }
                Ok(out)
            }
            SelfMapBacking::ExceptionalHalf => {
                let two_mu = p
                    .two_mu_halfint()
                    .ok_or_else(|| Error::ParameterIncompatible("2 mu is not an integer".into()))?;
                Ok(match b.family {
                    Family::L => LinComb::basis(BasisVector::new(Family::M, b.index - two_mu)),
                    _ => LinComb::zero(),
                })
            }
            SelfMapBacking::ExceptionalInt => {
                let mu = p.mu_halfint().ok_or_else(|| {
                    Error::ParameterIncompatible("mu is not a half-integer".into())
                })?;
                Ok(match b.family {
                    Family::L => LinComb::basis(BasisVector::new(Family::Y, b.index - mu)),
                    Family::Y => LinComb::basis(BasisVector::new(Family::M, b.index - mu)),
                    Family::M => LinComb::zero(),
                })
            }
            SelfMapBacking::Table { domain, images } => {
                if !domain.contains(b) {
                    return Err(Error::UndefinedSupport(format!(
                        "{b} outside the backing window"
                    )));
                }
                Ok(images.get(b).cloned().unwrap_or_else(LinComb::zero))
            }
        }
    }

    pub fn eval(&self, v: &LinComb, p: &Params) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for (b, c) in v.iter() {
            out = out.add(&self.eval_basis(b, p)?.scale(c));
        }
        Ok(out)
    }
}

/// `L_n -> M_{n-2mu}`, others to 0; defined when `lambda = 1`,
/// `mu in s + (1/2)Z`.
pub fn psi0(p: &Params) -> Result<LinearSelfMap> {
    if p.lambda() != &rat(1) || !p.mu_in_half_int() {
        return Err(Error::ParameterIncompatible(format!(
            "psi0 needs lambda = 1 and mu in s + (1/2)Z, got lambda = {}, mu = {}",
            p.lambda(),
            p.mu()
        )));
    }
    Ok(LinearSelfMap {
        backing: SelfMapBacking::ExceptionalHalf,
    })
}

/// `L_n -> Y_{n-mu}`, `Y_a -> M_{a-mu}`, `M -> 0`; defined when
/// `lambda = 1`, `mu in s + Z`.
pub fn psi1(p: &Params) -> Result<LinearSelfMap> {
    if p.lambda() != &rat(1) || !p.mu_in_s_plus_int() {
        return Err(Error::ParameterIncompatible(format!(
            "psi1 needs lambda = 1 and mu in s + Z, got lambda = {}, mu = {}",
            p.lambda(),
            p.mu()
        )));
    }
    Ok(LinearSelfMap {
        backing: SelfMapBacking::ExceptionalInt,
    })
}

/// `x -> alpha x + f(x) M_{-2mu}`. A nonzero `f` needs a nonzero center,
/// i.e. `lambda = 0` and `2 mu in Z`.
pub fn standard_commuting(alpha: Rat, f: FunctionalSpec, p: &Params) -> Result<LinearSelfMap> {
    if !f.is_zero() && (p.lambda() != &rat(0) || !p.mu_in_half_int()) {
        return Err(Error::ParameterIncompatible(format!(
            "nonzero functional needs lambda = 0 and 2 mu in Z, got lambda = {}, mu = {}",
            p.lambda(),
            p.mu()
        )));
    }
    Ok(LinearSelfMap {
        backing: SelfMapBacking::Standard { alpha, f },
    })
}

/// First biderivation axiom residual:
/// `phi([x,y], z) - [x, phi(y,z)] - [phi(x,z), y]`.
pub fn bider_residual_1(
    phi: &BilinearMap,
    x: &BasisVector,
    y: &BasisVector,
    z: &BasisVector,
    p: &Params,
) -> Result<LinComb> {
    let xy = bracket_basis(x, y, p);
    let lhs = phi.eval(&xy, &LinComb::basis(*z), p)?;
    let t1 = bracket(&LinComb::basis(*x), &phi.eval_basis(y, z, p)?, p);
    let t2 = bracket(&phi.eval_basis(x, z, p)?, &LinComb::basis(*y), p);
    Ok(lhs.sub(&t1).sub(&t2))
}

/// Second biderivation axiom residual:
/// `phi(x, [y,z]) - [phi(x,y), z] - [y, phi(x,z)]`.
pub fn bider_residual_2(
    phi: &BilinearMap,
    x: &BasisVector,
    y: &BasisVector,
    z: &BasisVector,
    p: &Params,
) -> Result<LinComb> {
    let yz = bracket_basis(y, z, p);
    let lhs = phi.eval(&LinComb::basis(*x), &yz, p)?;
    let t1 = bracket(&phi.eval_basis(x, y, p)?, &LinComb::basis(*z), p);
    let t2 = bracket(&LinComb::basis(*y), &phi.eval_basis(x, z, p)?, p);
    Ok(lhs.sub(&t1).sub(&t2))
}

/// Verifies `phi(x, y) = -phi(y, x)` on the given pairs, plus vanishing on
/// each diagonal.
pub fn skew_check(
    phi: &BilinearMap,
    pairs: &[(BasisVector, BasisVector)],
    p: &Params,
) -> Result<bool> {
    for (x, y) in pairs {
        let fwd = phi.eval_basis(x, y, p)?;
        let bwd = phi.eval_basis(y, x, p)?;
        if !fwd.add(&bwd).is_zero() {
            return Ok(false);
        }
        if !phi.eval_basis(x, x, p)?.is_zero() || !phi.eval_basis(y, y, p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `[phi(x,y), [u,v]] - [[x,y], phi(u,v)]`, zero for every skew
/// biderivation.
pub fn lemma25_residual(
    phi: &BilinearMap,
    x: &BasisVector,
    y: &BasisVector,
    u: &BasisVector,
    v: &BasisVector,
    p: &Params,
) -> Result<LinComb> {
    let lhs = bracket(&phi.eval_basis(x, y, p)?, &bracket_basis(u, v, p), p);
    let rhs = bracket(&bracket_basis(x, y, p), &phi.eval_basis(u, v, p)?, p);
    Ok(lhs.sub(&rhs))
}

/// For a commuting pair (`[x, y] = 0`), checks that `phi(x, y)` lies in
/// the centralizer of the derived subalgebra on the window.
pub fn lemma26_check(
    phi: &BilinearMap,
    x: &BasisVector,
    y: &BasisVector,
    p: &Params,
    w: &Window,
) -> Result<bool> {
    if !bracket_basis(x, y, p).is_zero() {
        return Err(Error::PreconditionViolated(format!("[{x}, {y}] != 0")));
    }
    let val = phi.eval_basis(x, y, p)?;
    if val.is_zero() {
        return Ok(true);
    }
    let basis = w.basis();
    let Some(coords) = to_coords(&val, &basis) else {
        // support escapes the window, so it cannot lie in a subspace of it
        return Ok(false);
    };
    let centralizer = centralizer_of_derived(p, w, 2);
    in_span(&coords, &centralizer)
}

/// `[psi(x), x]`, zero for commuting maps.
pub fn commuting_residual(psi: &LinearSelfMap, x: &LinComb, p: &Params) -> Result<LinComb> {
    Ok(bracket(&psi.eval(x, p)?, x, p))
}

/// The polarized commuting residual `[psi(x), y] + [psi(y), x]`.
pub fn polarized_commuting_residual(
    psi: &LinearSelfMap,
    x: &BasisVector,
    y: &BasisVector,
    p: &Params,
) -> Result<LinComb> {
    let t1 = bracket(&psi.eval_basis(x, p)?, &LinComb::basis(*y), p);
    let t2 = bracket(&psi.eval_basis(y, p)?, &LinComb::basis(*x), p);
    Ok(t1.add(&t2))
}

/// The skew biderivation `(x, y) -> [psi(x), y]` induced by a commuting
/// map. The polarized residual is sampled on a small window first; a
/// nonzero sample rejects the construction.
pub fn bider_from_commuting(psi: &LinearSelfMap, p: &Params) -> Result<BilinearMap> {
    let w = Window::new(2, p.s());
    let basis = w.basis();
    for (i, x) in basis.iter().enumerate() {
        for y in basis.iter().skip(i) {
            let res = polarized_commuting_residual(psi, x, y, p)?;
            if !res.is_zero() {
                return Err(Error::NotCommuting(format!(
                    "polarized residual at ({x}, {y}) is {res}"
                )));
            }
        }
    }
    Ok(BilinearMap {
        backing: BilinearBacking::FromSelfMap(Box::new(psi.clone())),
        symmetry: SymmetryFlag::Skew,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::HalfInt;
    use crate::scalar::rat_frac;

    fn params(lambda: Rat, mu: Rat, s: HalfInt) -> Params {
        Params::new(lambda, mu, s).unwrap()
    }

    #[test]
    fn inner_examples() {
        let p = params(rat(2), rat_frac(1, 7), HalfInt::ZERO);
        let phi = inner_bider(rat(2));
        assert_eq!(
            phi.eval_basis(&BasisVector::l(1), &BasisVector::l(2), &p)
                .unwrap(),
            LinComb::single(BasisVector::l(3), rat(2))
        );
        let zero = inner_bider(rat(0));
        assert!(zero
            .eval_basis(&BasisVector::l(1), &BasisVector::m(2), &p)
            .unwrap()
            .is_zero());

        let ph = params(rat(1), rat(0), HalfInt::HALF);
        let phi = inner_bider(rat(1));
        let y1 = BasisVector::y(HalfInt::from_doubled(1));
        let y3 = BasisVector::y(HalfInt::from_doubled(3));
        assert_eq!(
            phi.eval_basis(&y1, &y3, &ph).unwrap(),
            LinComb::basis(BasisVector::m(2))
        );
    }

    #[test]
    fn phi0_examples() {
        let p = params(rat(1), rat_frac(1, 2), HalfInt::ZERO);
        let phi = phi0(&p).unwrap();
        assert_eq!(
            phi.eval_basis(&BasisVector::l(1), &BasisVector::l(2), &p)
                .unwrap(),
            LinComb::basis(BasisVector::m(2))
        );
        assert!(phi
            .eval_basis(&BasisVector::l(2), &BasisVector::l(2), &p)
            .unwrap()
            .is_zero());
        assert!(phi
            .eval_basis(&BasisVector::l(1), &BasisVector::m(2), &p)
            .unwrap()
            .is_zero());

        let bad = params(rat(1), rat_frac(1, 3), HalfInt::ZERO);
        assert!(matches!(phi0(&bad), Err(Error::ParameterIncompatible(_))));
        let bad = params(rat(2), rat_frac(1, 2), HalfInt::ZERO);
        assert!(phi0(&bad).is_err());
    }

    #[test]
    fn phi1_examples() {
        let p = params(rat(1), rat(1), HalfInt::ZERO);
        let phi = phi1(&p).unwrap();
        assert_eq!(
            phi.eval_basis(&BasisVector::l(1), &BasisVector::l(3), &p)
                .unwrap(),
            LinComb::single(BasisVector::y(HalfInt::from_int(3)), rat(2))
        );
        assert!(phi
            .eval_basis(
                &BasisVector::m(0),
                &BasisVector::y(HalfInt::from_int(1)),
                &p
            )
            .unwrap()
            .is_zero());

        let p0 = params(rat(1), rat(0), HalfInt::ZERO);
        let phi = phi1(&p0).unwrap();
        assert_eq!(
            phi.eval_basis(
                &BasisVector::y(HalfInt::from_int(2)),
                &BasisVector::l(1),
                &p0
            )
            .unwrap(),
            LinComb::single(BasisVector::m(3), rat(-1))
        );
    }

    #[test]
    fn psi_examples() {
        let p = params(rat(1), rat_frac(1, 2), HalfInt::ZERO);
        let psi = psi0(&p).unwrap();
        assert_eq!(
            psi.eval_basis(&BasisVector::l(3), &p).unwrap(),
            LinComb::basis(BasisVector::m(2))
        );
        assert!(psi.eval_basis(&BasisVector::m(3), &p).unwrap().is_zero());
        assert_eq!(
            psi.eval_basis(&BasisVector::l(0), &p).unwrap(),
            LinComb::basis(BasisVector::m(-1))
        );

        let p2 = params(rat(1), rat(2), HalfInt::ZERO);
        let psi = psi1(&p2).unwrap();
        assert_eq!(
            psi.eval_basis(&BasisVector::y(HalfInt::from_int(5)), &p2)
                .unwrap(),
            LinComb::basis(BasisVector::m(3))
        );
        let p1 = params(rat(1), rat(1), HalfInt::ZERO);
        let psi = psi1(&p1).unwrap();
        assert_eq!(
            psi.eval_basis(&BasisVector::l(0), &p1).unwrap(),
            LinComb::basis(BasisVector::y(HalfInt::from_int(-1)))
        );
        assert!(psi.eval_basis(&BasisVector::m(4), &p1).unwrap().is_zero());
    }

    #[test]
    fn standard_commuting_examples() {
        let p = params(rat(3), rat_frac(2, 5), HalfInt::ZERO);
        let id = standard_commuting(rat(1), FunctionalSpec::zero(), &p).unwrap();
        assert_eq!(
            id.eval_basis(&BasisVector::l(4), &p).unwrap(),
            LinComb::basis(BasisVector::l(4))
        );

        let p = params(rat(0), rat_frac(1, 2), HalfInt::ZERO);
        let mut f = FunctionalSpec::zero();
        f.set(BasisVector::l(1), rat(3));
        let psi = standard_commuting(rat(0), f, &p).unwrap();
        assert_eq!(
            psi.eval_basis(&BasisVector::l(1), &p).unwrap(),
            LinComb::single(BasisVector::m(-1), rat(3))
        );

        let p = params(rat(0), rat(0), HalfInt::ZERO);
        let mut f = FunctionalSpec::zero();
        f.set(BasisVector::m(0), rat(1));
        let psi = standard_commuting(rat(2), f, &p).unwrap();
        assert_eq!(
            psi.eval_basis(&BasisVector::m(0), &p).unwrap(),
            LinComb::single(BasisVector::m(0), rat(3))
        );

        // nonzero functional without a center is refused
        let p = params(rat(1), rat(0), HalfInt::ZERO);
        let mut f = FunctionalSpec::zero();
        f.set(BasisVector::l(0), rat(1));
        assert!(standard_commuting(rat(1), f, &p).is_err());
    }

    #[test]
    fn bider_residuals_vanish() {
        let p = params(rat(2), rat_frac(1, 7), HalfInt::ZERO);
        let phi = inner_bider(rat(5));
        assert!(bider_residual_1(
            &phi,
            &BasisVector::l(1),
            &BasisVector::l(2),
            &BasisVector::l(3),
            &p
        )
        .unwrap()
        .is_zero());
        assert!(bider_residual_2(
            &phi,
            &BasisVector::m(0),
            &BasisVector::l(1),
            &BasisVector::l(2),
            &p
        )
        .unwrap()
        .is_zero());

        let p = params(rat(1), rat_frac(1, 2), HalfInt::ZERO);
        let phi = phi0(&p).unwrap();
        assert!(bider_residual_1(
            &phi,
            &BasisVector::l(1),
            &BasisVector::l(2),
            &BasisVector::l(3),
            &p
        )
        .unwrap()
        .is_zero());
        let p32 = params(rat(1), rat_frac(3, 2), HalfInt::ZERO);
        let phi = phi0(&p32).unwrap();
        assert!(bider_residual_2(
            &phi,
            &BasisVector::l(2),
            &BasisVector::l(0),
            &BasisVector::l(1),
            &p32
        )
        .unwrap()
        .is_zero());

        let p1 = params(rat(1), rat(1), HalfInt::ZERO);
        let phi = phi1(&p1).unwrap();
        assert!(bider_residual_1(
            &phi,
            &BasisVector::l(0),
            &BasisVector::l(1),
            &BasisVector::y(HalfInt::from_int(2)),
            &p1
        )
        .unwrap()
        .is_zero());
    }

    #[test]
    fn skew_checks() {
        let p = params(rat(1), rat(1), HalfInt::ZERO);
        let pairs = vec![
            (BasisVector::l(1), BasisVector::l(2)),
            (BasisVector::l(0), BasisVector::y(HalfInt::from_int(1))),
            (BasisVector::m(1), BasisVector::y(HalfInt::from_int(-1))),
        ];
        assert!(skew_check(&inner_bider(rat(3)), &pairs, &p).unwrap());
        assert!(skew_check(&phi1(&p).unwrap(), &pairs, &p).unwrap());

        // a general-flagged table with a symmetric value fails
        let w = Window::new(2, HalfInt::ZERO);
        let mut values = BTreeMap::new();
        values.insert(
            (BasisVector::l(1), BasisVector::l(2)),
            LinComb::basis(BasisVector::m(0)),
        );
        values.insert(
            (BasisVector::l(2), BasisVector::l(1)),
            LinComb::basis(BasisVector::m(0)),
        );
        let sym = BilinearMap::from_table(w, values, SymmetryFlag::General);
        assert!(!skew_check(&sym, &[(BasisVector::l(1), BasisVector::l(2))], &p).unwrap());
    }

    #[test]
    fn lemma25_examples() {
        let p = params(rat(1), rat(0), HalfInt::ZERO);
        assert!(lemma25_residual(
            &inner_bider(rat(1)),
            &BasisVector::l(1),
            &BasisVector::l(2),
            &BasisVector::l(0),
            &BasisVector::l(3),
            &p
        )
        .unwrap()
        .is_zero());

        let p1 = params(rat(1), rat(1), HalfInt::ZERO);
        let phi = phi1(&p1).unwrap();
        assert!(lemma25_residual(
            &phi,
            &BasisVector::l(0),
            &BasisVector::l(1),
            &BasisVector::l(0),
            &BasisVector::y(HalfInt::from_int(1)),
            &p1
        )
        .unwrap()
        .is_zero());

        // [phi(x,y), [x,y]] = 0 special case
        let res = lemma25_residual(
            &phi,
            &BasisVector::l(1),
            &BasisVector::l(2),
            &BasisVector::l(1),
            &BasisVector::l(2),
            &p1,
        )
        .unwrap();
        assert!(res.is_zero());
    }

    #[test]
    fn lemma26_examples() {
        let p = params(rat(1), rat_frac(1, 2), HalfInt::ZERO);
        let w = Window::new(3, HalfInt::ZERO);
        let phi = phi0(&p).unwrap();
        assert!(lemma26_check(&phi, &BasisVector::m(1), &BasisVector::m(2), &p, &w).unwrap());
        assert!(lemma26_check(
            &inner_bider(rat(4)),
            &BasisVector::m(1),
            &BasisVector::m(2),
            &p,
            &w
        )
        .unwrap());
        // precondition: [L_1, L_2] != 0
        assert!(matches!(
            lemma26_check(&phi, &BasisVector::l(1), &BasisVector::l(2), &p, &w),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn commuting_residuals() {
        let p = params(rat(3), rat_frac(1, 4), HalfInt::ZERO);
        let id = LinearSelfMap::identity();
        let x = LinComb::basis(BasisVector::l(1)).add(&LinComb::basis(BasisVector::m(2)));
        assert!(commuting_residual(&id, &x, &p).unwrap().is_zero());

        let p = params(rat(1), rat_frac(1, 2), HalfInt::ZERO);
        let psi = psi0(&p).unwrap();
        let x = LinComb::basis(BasisVector::l(1)).add(&LinComb::basis(BasisVector::l(2)));
        assert!(commuting_residual(&psi, &x, &p).unwrap().is_zero());

        let p1 = params(rat(1), rat(1), HalfInt::ZERO);
        let psi = psi1(&p1).unwrap();
        let x = LinComb::basis(BasisVector::y(HalfInt::from_int(1)))
            .add(&LinComb::basis(BasisVector::l(0)));
        assert!(commuting_residual(&psi, &x, &p1).unwrap().is_zero());
    }

    #[test]
    fn polarized_examples() {
        let p = params(rat(7), rat_frac(5, 2), HalfInt::ZERO);
        assert!(polarized_commuting_residual(
            &LinearSelfMap::identity(),
            &BasisVector::l(1),
            &BasisVector::m(2),
            &p
        )
        .unwrap()
        .is_zero());

        let p1 = params(rat(1), rat(1), HalfInt::ZERO);
        let psi = psi1(&p1).unwrap();
        assert!(
            polarized_commuting_residual(&psi, &BasisVector::l(0), &BasisVector::l(1), &p1)
                .unwrap()
                .is_zero()
        );

        let p0 = params(rat(0), rat(0), HalfInt::ZERO);
        let mut f = FunctionalSpec::zero();
        f.set(BasisVector::l(0), rat(5));
        let psi = standard_commuting(rat(1), f, &p0).unwrap();
        assert!(polarized_commuting_residual(
            &psi,
            &BasisVector::l(0),
            &BasisVector::y(HalfInt::from_int(1)),
            &p0
        )
        .unwrap()
        .is_zero());
    }

    #[test]
    fn bider_from_commuting_reproduces_exceptional_maps() {
        // identity induces the inner biderivation
        let p = params(rat(4), rat_frac(1, 3), HalfInt::ZERO);
        let phi = bider_from_commuting(&LinearSelfMap::identity(), &p).unwrap();
        let inner = inner_bider(rat(1));
        let w = Window::new(2, HalfInt::ZERO);
        for x in w.basis() {
            for y in w.basis() {
                assert_eq!(
                    phi.eval_basis(&x, &y, &p).unwrap(),
                    inner.eval_basis(&x, &y, &p).unwrap()
                );
            }
        }

        // psi0 induces phi0
        let p = params(rat(1), rat_frac(1, 2), HalfInt::ZERO);
        let phi = bider_from_commuting(&psi0(&p).unwrap(), &p).unwrap();
        let expected = phi0(&p).unwrap();
        let w = Window::new(2, HalfInt::ZERO);
        for x in w.basis() {
            for y in w.basis() {
                assert_eq!(
                    phi.eval_basis(&x, &y, &p).unwrap(),
                    expected.eval_basis(&x, &y, &p).unwrap(),
                    "mismatch at ({x}, {y})"
                );
            }
        }

        // psi1 induces phi1
        let p1 = params(rat(1), rat(1), HalfInt::ZERO);
        let phi = bider_from_commuting(&psi1(&p1).unwrap(), &p1).unwrap();
        let expected = phi1(&p1).unwrap();
        for x in w.basis() {
            for y in w.basis() {
                assert_eq!(
                    phi.eval_basis(&x, &y, &p1).unwrap(),
                    expected.eval_basis(&x, &y, &p1).unwrap(),
                    "mismatch at ({x}, {y})"
                );
            }
        }

        // a non-commuting map is rejected
        let mut images = BTreeMap::new();
        images.insert(BasisVector::l(0), LinComb::basis(BasisVector::l(1)));
        let bad = LinearSelfMap::from_table(Window::new(2, HalfInt::ZERO), images);
        assert!(matches!(
            bider_from_commuting(&bad, &p1),
            Err(Error::NotCommuting(_))
        ));
    }
}
