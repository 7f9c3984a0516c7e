//! Property-based checks of the algebraic identities and serialization
//! round-trips.

use proptest::prelude::*;

use dsv_core::{
    bracket, bracket_basis, format_rat, jacobi_residual, parse_rat, BasisVector, Family, HalfInt,
    LinComb, Params, Rat,
};

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

fn params_strategy() -> impl Strategy<Value = Params> {
    (rat_strategy(), rat_strategy(), any::<bool>()).prop_map(|(l, m, half)| {
        let s = if half { HalfInt::HALF } else { HalfInt::ZERO };
        Params::new(l, m, s).unwrap()
    })
}

/// Raw (family, integer index) data, lifted to a valid basis vector once
/// the shift is known.
type RawVector = (usize, i64);

fn vector(raw: RawVector, s: HalfInt) -> BasisVector {
    match raw.0 {
        0 => BasisVector::new(Family::L, HalfInt::from_int(raw.1)),
        1 => BasisVector::new(Family::M, HalfInt::from_int(raw.1)),
        _ => BasisVector::new(Family::Y, HalfInt::from_int(raw.1) + s),
    }
}

fn raw_strategy() -> impl Strategy<Value = RawVector> {
    (0usize..3, -6i64..=6)
}

fn lincomb(terms: &[(RawVector, Rat)], s: HalfInt) -> LinComb {
    let mut v = LinComb::zero();
    for (raw, c) in terms {
        v.add_term(vector(*raw, s), c.clone());
    }
    v
}

proptest! {
    #[test]
    fn bracket_is_antisymmetric(
        p in params_strategy(),
        x in raw_strategy(),
        y in raw_strategy(),
    ) {
        let (x, y) = (vector(x, p.s()), vector(y, p.s()));
        let fwd = bracket_basis(&x, &y, &p);
        let bwd = bracket_basis(&y, &x, &p);
        prop_assert!(fwd.add(&bwd).is_zero());
    }

    #[test]
    fn jacobi_vanishes_on_random_triples(
        p in params_strategy(),
        x in raw_strategy(),
        y in raw_strategy(),
        z in raw_strategy(),
    ) {
        let s = p.s();
        let res = jacobi_residual(&vector(x, s), &vector(y, s), &vector(z, s), &p);
        prop_assert!(res.is_zero());
    }

    #[test]
    fn bracket_degree_is_additive(
        p in params_strategy(),
        x in raw_strategy(),
        y in raw_strategy(),
    ) {
        let (x, y) = (vector(x, p.s()), vector(y, p.s()));
        let expected = x.degree() + y.degree();
        for (b, _) in bracket_basis(&x, &y, &p).iter() {
            prop_assert_eq!(b.degree(), expected);
        }
    }

    #[test]
    fn bracket_is_bilinear(
        p in params_strategy(),
        a in rat_strategy(),
        b in rat_strategy(),
        u in proptest::collection::vec((raw_strategy(), rat_strategy()), 0..5),
        v in proptest::collection::vec((raw_strategy(), rat_strategy()), 0..5),
        w in proptest::collection::vec((raw_strategy(), rat_strategy()), 0..5),
    ) {
        let s = p.s();
        let (u, v, w) = (lincomb(&u, s), lincomb(&v, s), lincomb(&w, s));
        let combined = bracket(&u.scale(&a).add(&v.scale(&b)), &w, &p);
        let separate = bracket(&u, &w, &p).scale(&a).add(&bracket(&v, &w, &p).scale(&b));
        prop_assert_eq!(combined, separate);
    }

    #[test]
    fn rational_format_round_trips(r in rat_strategy()) {
        let text = format_rat(&r);
        prop_assert_eq!(parse_rat(&text), Some(r));
        prop_assert!(!text.contains('.'));
    }

    #[test]
    fn halfint_round_trips_through_rat(n in -200i64..=200) {
        let h = HalfInt::from_doubled(n);
        let r = h.to_rat();
        prop_assert_eq!(HalfInt::try_from_rat(&r), Some(h));
    }
}
