//! End-to-end acceptance gate: one test per criterion, each printing a
//! pass/fail line. All checks are exact (zero tolerance).

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use dsv_core::structure::to_coords;
use dsv_core::{
    abelianization_dim, bider_from_commuting, bider_residual_1, bider_residual_2, bracket_basis,
    center_window, centralizer_of_derived, classify_biderivations, classify_commuting,
    derived_window, in_span, inner_bider, jacobi_check_window, lemma25_residual, nullspace_exact,
    phi0, phi1, polarized_commuting_residual, psi0, psi1, rank_exact, rank_mod_p, skew_check,
    BasisVector, BilinearMap, Family, HalfInt, LinComb, Mode, ModularConfig, Params, Rat,
    SpanVerdict, SparseMatrix, SubspaceBasis, Window,
};

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn grid() -> Vec<Params> {
    let lambdas = [rat(-3), rat(-1), rat(0), rat_frac(1, 2), rat(1), rat(2)];
    let mus = [
        rat(0),
        rat_frac(1, 3),
        rat_frac(1, 2),
        rat(1),
        rat_frac(3, 2),
    ];
    let shifts = [HalfInt::ZERO, HalfInt::HALF];
    let mut out = Vec::new();
    for l in &lambdas {
        for m in &mus {
            for s in &shifts {
                out.push(Params::new(l.clone(), m.clone(), *s).unwrap());
            }
        }
    }
    out
}

fn criterion(n: u32, name: &str, f: impl FnOnce() + std::panic::UnwindSafe) {
    let result = std::panic::catch_unwind(f);
    match &result {
        Ok(()) => println!("criterion {n} ({name}): PASS"),
        Err(_) => println!("criterion {n} ({name}): FAIL"),
    }
    if let Err(e) = result {
        std::panic::resume_unwind(e);
    }
}

#[test]
fn criterion_1_lie_algebra_axioms() {
    criterion(1, "Lie-algebra axioms on the grid, N = 4", || {
        for p in grid() {
            let w = Window::new(4, p.s());
            let check = jacobi_check_window(&p, &w);
            assert!(check.ok, "Jacobi failed at {p:?}: {:?}", check.witness);
            let basis = w.basis();
            for x in &basis {
                for y in &basis {
                    let fwd = bracket_basis(x, y, &p);
                    // antisymmetry
                    assert!(fwd.add(&bracket_basis(y, x, &p)).is_zero());
                    // degree additivity
                    let expected = x.degree() + y.degree();
                    for (b, _) in fwd.iter() {
                        assert_eq!(b.degree(), expected);
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_2_lemma_31_reproduction() {
    criterion(
        2,
        "center / derived / abelianization / centralizer, N = 3",
        || {
            for p in grid() {
                let w = Window::new(3, p.s());
                let basis = w.basis();
                let center = center_window(&p, &w);
                let central_expected = p.lambda() == &rat(0) && p.mu_in_half_int();
                assert_eq!(
                    center.dim(),
                    if central_expected { 1 } else { 0 },
                    "center dim at {p:?}"
                );
                if central_expected {
                    let two_mu = p.two_mu_halfint().unwrap();
                    let m = LinComb::basis(BasisVector::new(Family::M, -two_mu));
                    let coords = to_coords(&m, &basis).unwrap();
                    assert!(in_span(&coords, &center).unwrap(), "center basis at {p:?}");
                }

                let ab = abelianization_dim(&p, &w, 2);
                let ab_expected = p.lambda() == &rat(-3) && p.mu_in_s_plus_int();
                assert_eq!(
                    ab,
                    if ab_expected { 1 } else { 0 },
                    "abelianization at {p:?}"
                );
                if ab_expected {
                    // the missing class is exactly Y_{-mu}
                    let derived = derived_window(&p, &w, 2);
                    let missing = BasisVector::new(
                        Family::Y,
                        HalfInt::try_from_rat(&-p.mu().clone()).unwrap(),
                    );
                    for b in &basis {
                        let coords = to_coords(&LinComb::basis(*b), &basis).unwrap();
                        let inside = in_span(&coords, &derived).unwrap();
                        assert_eq!(inside, *b != missing, "derived content of {b} at {p:?}");
                    }
                }

                let centralizer = centralizer_of_derived(&p, &w, 2);
                assert!(
                    center.same_subspace(&centralizer).unwrap(),
                    "centralizer != center at {p:?}"
                );
            }
        },
    );
}

/// Flattens a total bilinear map to a coefficient vector over the pairs
/// of `B(2)` and the inflated codomain, for exact rank witnesses.
fn flatten_bider(m: &BilinearMap, p: &Params) -> Vec<Rat> {
    let w = Window::new(2, p.s());
    let basis = w.basis();
    let codomain = w.inflate(6).basis();
    let mut out = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        for y in basis.iter().skip(i + 1) {
            let val = m.eval_basis(x, y, p).unwrap();
            let coords = to_coords(&val, &codomain).expect("image fits the codomain");
            out.extend(coords);
        }
    }
    out
}

#[test]
fn criterion_3_exceptional_maps() {
    criterion(
        3,
        "exceptional maps: residuals, independence, induction",
        || {
            let mut seen_phi0 = 0;
            let mut seen_phi1 = 0;
            for p in grid() {
                let w = Window::new(3, p.s());
                let basis = w.basis();
                let pairs: Vec<(BasisVector, BasisVector)> = basis
                    .iter()
                    .enumerate()
                    .flat_map(|(i, x)| basis.iter().skip(i + 1).map(move |y| (*x, *y)))
                    .collect();

                let mut defined: Vec<BilinearMap> = Vec::new();
                if let Ok(m) = phi0(&p) {
                    seen_phi0 += 1;
                    defined.push(m);
                }
                if let Ok(m) = phi1(&p) {
                    seen_phi1 += 1;
                    defined.push(m);
                }
                for phi in &defined {
                    for x in &basis {
                        for y in &basis {
                            for z in &basis {
                                assert!(bider_residual_1(phi, x, y, z, &p).unwrap().is_zero());
                                assert!(bider_residual_2(phi, x, y, z, &p).unwrap().is_zero());
                            }
                        }
                    }
                    assert!(skew_check(phi, &pairs, &p).unwrap());
                    for (x, y) in &pairs {
                        for (u, v) in &pairs {
                            assert!(lemma25_residual(phi, x, y, u, v, &p).unwrap().is_zero());
                        }
                    }
                }

                // exact rank witnesses for independence
                let inner = inner_bider(rat(1));
                let ambient = flatten_bider(&inner, &p).len();
                if let Ok(m0) = phi0(&p) {
                    let span =
                        SubspaceBasis::from_spanning(ambient, vec![flatten_bider(&inner, &p)]);
                    assert!(!span.contains(&flatten_bider(&m0, &p)).unwrap());
                    if let Ok(m1) = phi1(&p) {
                        let span = SubspaceBasis::from_spanning(
                            ambient,
                            vec![flatten_bider(&inner, &p), flatten_bider(&m0, &p)],
                        );
                        assert!(!span.contains(&flatten_bider(&m1, &p)).unwrap());
                    }
                }

                // commuting side
                for (psi, target) in [
                    (psi0(&p).ok(), phi0(&p).ok()),
                    (psi1(&p).ok(), phi1(&p).ok()),
                ] {
                    let (Some(psi), Some(target)) = (psi, target) else {
                        continue;
                    };
                    for (i, x) in basis.iter().enumerate() {
                        for y in basis.iter().skip(i) {
                            assert!(polarized_commuting_residual(&psi, x, y, &p)
                                .unwrap()
                                .is_zero());
                        }
                    }
                    let induced = bider_from_commuting(&psi, &p).unwrap();
                    for (x, y) in &pairs {
                        assert_eq!(
                            induced.eval_basis(x, y, &p).unwrap(),
                            target.eval_basis(x, y, &p).unwrap()
                        );
                    }
                }
            }
            assert!(seen_phi0 > 0 && seen_phi1 > 0);
        },
    );
}

fn branch_points(s: HalfInt) -> Vec<(Params, usize)> {
    let sv = s.to_rat();
    let p = |l: Rat, m: Rat| Params::new(l, m, s).unwrap();
    vec![
        // lambda = 1, mu - s in 1/2 + Z: dim 2
        (p(rat(1), &sv + rat_frac(1, 2)), 2),
        (p(rat(1), &sv + rat_frac(3, 2)), 2),
        // lambda = 1, mu - s in Z: dim 3
        (p(rat(1), sv.clone()), 3),
        (p(rat(1), &sv + rat(1)), 3),
        // otherwise: dim 1, including the trickiest eliminated cases
        (p(rat(-1), &sv + rat(1)), 1),
        (p(rat(-3), &sv + rat(1)), 1),
        (p(rat(2), rat_frac(1, 5)), 1),
        (p(rat_frac(1, 2), rat_frac(1, 3)), 1),
    ]
}

#[test]
fn criterion_4_theorem_32_desk_scale() {
    criterion(
        4,
        "biderivation classification, N = 2 full / N = 3 graded",
        || {
            let cfg = ModularConfig::from_seed(1);
            for s in [HalfInt::ZERO, HalfInt::HALF] {
                for (p, dim) in branch_points(s) {
                    for (radius, mode) in [(2, Mode::Full), (3, Mode::Graded)] {
                        let w = Window::new(radius, p.s());
                        let r = classify_biderivations(&p, &w, mode, &cfg).unwrap();
                        assert_eq!(r.span_verdict, SpanVerdict::Match, "{p:?} {mode:?}");
                        assert_eq!(r.core_dim, dim, "{p:?} {mode:?}");
                        assert_eq!(r.predicted_dim, dim, "{p:?} {mode:?}");
                        assert!(r.residuals_ok, "{p:?} {mode:?}");
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_5_theorem_43_desk_scale() {
    criterion(5, "commuting-map classification, N = 2", || {
        let cfg = ModularConfig::from_seed(1);
        for s in [HalfInt::ZERO, HalfInt::HALF] {
            let core_size = Window::new(1, s).dim();
            let mut points = branch_points(s);
            // the central branch: lambda = 0, 2 mu integral
            let p = Params::new(rat(0), rat_frac(1, 2), s).unwrap();
            points.push((p, 1 + core_size));
            let p = Params::new(rat(0), rat(1), s).unwrap();
            points.push((p, 1 + core_size));
            for (p, dim) in points {
                let w = Window::new(2, p.s());
                let r = classify_commuting(&p, &w, Mode::Full, &cfg).unwrap();
                assert_eq!(r.span_verdict, SpanVerdict::Match, "{p:?}");
                assert_eq!(r.core_dim, dim, "{p:?}");
                assert_eq!(r.predicted_dim, dim, "{p:?}");
                assert!(r.residuals_ok, "{p:?}");
            }
        }
    });
}

#[test]
fn criterion_6_linear_algebra_engine() {
    criterion(
        6,
        "exact/modular linear algebra on 200 random instances",
        || {
            let mut rng = ChaCha20Rng::seed_from_u64(42);
            let cfg = ModularConfig::from_seed(7);
            for _ in 0..200 {
                let rows = rng.gen_range(1..=12);
                let cols = rng.gen_range(1..=12);
                let mut a = SparseMatrix::new(rows, cols);
                for i in 0..rows {
                    for j in 0..cols {
                        if rng.gen_bool(0.3) {
                            let num = rng.gen_range(-9..=9);
                            let den = rng.gen_range(1..=4);
                            a.add(i, j, rat_frac(num, den));
                        }
                    }
                }

                let ns = nullspace_exact(&a);
                for v in ns.vectors() {
                    let out = a.mul_vec(v).unwrap();
                    assert!(out.iter().all(|x| x.is_zero()));
                }
                let rank = rank_exact(&a);
                assert_eq!(rank + ns.dim(), cols);
                assert_eq!(rank_mod_p(&a, &cfg).unwrap(), rank);

                // planted span membership
                let dim = ns.dim();
                if dim > 0 {
                    let mut planted = vec![Rat::zero(); cols];
                    for v in ns.vectors() {
                        let c = rat(rng.gen_range(-5..=5));
                        for (i, x) in v.iter().enumerate() {
                            planted[i] += &c * x;
                        }
                    }
                    assert!(in_span(&planted, &ns).unwrap());
                    if dim < cols {
                        // some standard basis vector must fall outside
                        let outside = (0..cols).any(|j| {
                            let mut e = vec![Rat::zero(); cols];
                            e[j] = rat(1);
                            !in_span(&e, &ns).unwrap()
                        });
                        assert!(outside);
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_7_determinism_across_workers() {
    criterion(
        7,
        "byte-identical grid reports across worker counts",
        || {
            let grid_path = std::env::temp_dir().join("dsv-acceptance-grid.txt");
            let mut f = std::fs::File::create(&grid_path).unwrap();
            writeln!(f, "1 0 0\n1 1/2 0\n2 1/5 0\n-1 1 0\n0 1/2 1/2\n-3 1 0").unwrap();
            drop(f);

            for sub in ["classify-bider", "classify-commuting"] {
                let mut outputs: BTreeSet<Vec<u8>> = BTreeSet::new();
                for workers in ["1", "3", "6"] {
                    let out = Command::new(env!("CARGO_BIN_EXE_dsv"))
                        .args([
                            sub,
                            "--grid",
                            grid_path.to_str().unwrap(),
                            "--window",
                            "2",
                            "--workers",
                            workers,
                        ])
                        .output()
                        .unwrap();
                    assert!(out.status.success(), "{sub} workers={workers}");
                    outputs.insert(out.stdout);
                }
                assert_eq!(
                    outputs.len(),
                    1,
                    "{sub} reports differ across worker counts"
                );
            }
        },
    );
}
