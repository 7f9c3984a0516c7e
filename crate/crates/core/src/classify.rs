//! Brute-force classification of skew-symmetric biderivations and linear
//! commuting maps on a finite window.
//!
//! The unknown map is supported on window pairs (or window basis vectors)
//! with images in an inflated codomain window, and is implicitly zero
//! elsewhere. The defining identities, linearized over the unknown
//! coefficients, give a sparse exact linear system whose nullspace is the
//! solution space. Solutions restricted to a core sub-window (indices at
//! most half the radius, to suppress boundary artifacts) are compared
//! against the predicted span.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::{bracket_basis, BasisVector, Family, LinComb, Params};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::{nullspace_exact, rank_mod_p, ModularConfig, SparseMatrix, SubspaceBasis};
use crate::maps::{
    bider_residual_1, bider_residual_2, inner_bider, phi0, phi1, polarized_commuting_residual,
    psi0, psi1, BilinearMap, LinearSelfMap, SymmetryFlag,
};
use crate::scalar::{rat, Rat};
use crate::structure::Window;

/// The parameter branch of the biderivation classification, together with
/// the structural flags from the center/abelianization computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiderCase {
    /// `lambda = 1`, `mu in s + 1/2 + Z`: inner plus the half-coset map.
    Lambda1HalfCoset,
    /// `lambda = 1`, `mu in s + Z`: inner plus both exceptional maps.
    Lambda1IntCoset,
    /// Everything else: inner only.
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseTag {
    pub bider_case: BiderCase,
    pub center_nonzero: bool,
    pub abelianization_nontrivial: bool,
}

/// Decides every coset membership exactly from the rational data.
pub fn detect_case(p: &Params) -> CaseTag {
    let lambda_is = |v: i64| p.lambda() == &rat(v);
    let bider_case = if lambda_is(1) && p.mu_in_s_plus_half_plus_int() {
        BiderCase::Lambda1HalfCoset
    } else if lambda_is(1) && p.mu_in_s_plus_int() {
        BiderCase::Lambda1IntCoset
    } else {
        BiderCase::Generic
    };
    CaseTag {
        bider_case,
        center_nonzero: lambda_is(0) && p.mu_in_half_int(),
        abelianization_nontrivial: lambda_is(-3) && p.mu_in_s_plus_int(),
    }
}

impl CaseTag {
    /// Dimension of the predicted biderivation span.
    pub fn predicted_bider_dim(&self) -> usize {
        match self.bider_case {
            BiderCase::Lambda1HalfCoset => 2,
            BiderCase::Lambda1IntCoset => 3,
            BiderCase::Generic => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    Graded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanVerdict {
    Match,
    ExtraSolutions,
    MissingExpected,
}

/// Variable layout for the biderivation system: one unknown per
/// (canonically ordered domain pair, codomain coordinate) kept by the
/// mode's support filter.
pub struct BiderVars {
    pub pairs: Vec<(BasisVector, BasisVector)>,
    pub codomain: Vec<BasisVector>,
    /// var id -> (pair index, codomain index)
    pub vars: Vec<(usize, usize)>,
    lookup: BTreeMap<(usize, usize), usize>,
    pair_lookup: BTreeMap<(BasisVector, BasisVector), usize>,
    cod_lookup: BTreeMap<BasisVector, usize>,
}

impl BiderVars {
    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    fn var(&self, pair: usize, cod: usize) -> Option<usize> {
        self.lookup.get(&(pair, cod)).copied()
    }

    /// Pair index and sign after canonical ordering; `None` on diagonal.
    fn pair_signed(&self, x: &BasisVector, y: &BasisVector) -> Option<(usize, i64)> {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => self.pair_lookup.get(&(*x, *y)).map(|&q| (q, 1)),
            std::cmp::Ordering::Greater => self.pair_lookup.get(&(*y, *x)).map(|&q| (q, -1)),
        }
    }
}

/// Grade targets an unknown biderivation value may occupy, per domain
/// pair. Derived from the constraint that `phi(x, y)` commutes with the
/// brackets of window elements; everything off these grades is forced to
/// zero in the full system, so restricting to them preserves the solution
/// space.
pub fn graded_support_filter(p: &Params, x: &BasisVector, y: &BasisVector) -> Vec<BasisVector> {
    let d = x.index + y.index;
    let d_rat = d.to_rat();
    let lambda = p.lambda();
    let mu = p.mu();
    let lambda_is = |v: i64| lambda == &rat(v);

    let mut targets: Vec<(Family, Rat)> = Vec::new();
    let center = (Family::M, -(mu * rat(2)));
    use Family::*;
    match (x.family, y.family) {
        (L, L) => {
            targets.push((L, d_rat.clone()));
            targets.push((M, lambda * &d_rat - mu * rat(2)));
            targets.push((Y, (lambda + rat(1)) / rat(2) * &d_rat - mu));
        }
        (L, M) | (M, L) => {
            targets.push((M, d_rat));
            if lambda_is(-1) {
                targets.push((Y, -mu.clone()));
            }
            if lambda_is(0) {
                targets.push(center.clone());
            }
        }
        (L, Y) | (Y, L) => {
            targets.push((Y, d_rat.clone()));
            if lambda_is(1) {
                targets.push((M, d_rat - mu));
            }
            if lambda_is(-1) {
                targets.push((Y, -mu.clone()));
            }
            if lambda_is(0) {
                targets.push(center.clone());
            }
        }
        (Y, Y) => {
            targets.push((M, d_rat));
            if lambda_is(-1) {
                targets.push((Y, -mu.clone()));
            }
            if lambda_is(0) {
                targets.push(center.clone());
            }
        }
        (M, M) | (M, Y) | (Y, M) => {
            // zero bracket: values land in the centralizer of the derived
            // subalgebra, i.e. the center
            if lambda_is(0) {
                targets.push(center.clone());
            }
        }
    }

    let mut out = Vec::new();
    for (fam, idx) in targets {
        let Some(h) = HalfInt::try_from_rat(&idx) else {
            continue;
        };
        let b = BasisVector::new(fam, h);
        if b.is_valid_for(p.s()) && !out.contains(&b) {
            out.push(b);
        }
    }
    out.sort();
    out
}

/// Default codomain inflation: large enough that the inner and
/// exceptional maps' images of window pairs always fit.
pub fn default_codomain_margin(p: &Params) -> i64 {
    let two_mu = (p.mu() * rat(2)).abs();
    let ceil = two_mu.ceil();
    ceil.to_integer().to_i64().unwrap_or(0) + 2
}

/// Assembles the linearized first biderivation axiom over the window,
/// with skew-symmetry built into the variable set.
pub fn assemble_bider_system(
    p: &Params,
    w: &Window,
    codomain_margin: i64,
    mode: Mode,
) -> (SparseMatrix, BiderVars) {
    let basis = w.basis();
    let codomain = w.inflate(codomain_margin).basis();
    let cod_lookup: BTreeMap<BasisVector, usize> =
        codomain.iter().enumerate().map(|(i, b)| (*b, i)).collect();

    let mut pairs = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        for y in basis.iter().skip(i + 1) {
            pairs.push((*x, *y));
        }
    }
    let pair_lookup: BTreeMap<(BasisVector, BasisVector), usize> =
        pairs.iter().enumerate().map(|(i, pr)| (*pr, i)).collect();

    let mut vars = Vec::new();
    let mut lookup = BTreeMap::new();
    for (q, (x, y)) in pairs.iter().enumerate() {
        match mode {
            Mode::Full => {
                for c in 0..codomain.len() {
                    lookup.insert((q, c), vars.len());
                    vars.push((q, c));
                }
            }
            Mode::Graded => {
                for b in graded_support_filter(p, x, y) {
                    if let Some(&c) = cod_lookup.get(&b) {
                        lookup.insert((q, c), vars.len());
                        vars.push((q, c));
                    }
                }
            }
        }
    }
    let vars_idx = BiderVars {
        pairs,
        codomain,
        vars,
        lookup,
        pair_lookup,
        cod_lookup,
    };

    let mut mat = SparseMatrix::new(0, vars_idx.num_vars());
    for (x, y) in vars_idx.pairs.clone() {
        let xy = bracket_basis(&x, &y, p);
        debug_assert!(xy.num_terms() <= 1);
        // the unknown is only defined on window pairs: skip triples whose
        // bracket escapes the domain window
        if xy.support().any(|b| !w.contains(b)) {
            continue;
        }
        for z in &basis {
            // residual of phi([x,y],z) = [x, phi(y,z)] + [phi(x,z), y],
            // one row per codomain coordinate of the outcome
            let mut row_entries: BTreeMap<BasisVector, Vec<(usize, Rat)>> = BTreeMap::new();
            let mut push = |coord: BasisVector, var: usize, coeff: Rat| {
                if !coeff.is_zero() {
                    row_entries.entry(coord).or_default().push((var, coeff));
                }
            };

            // phi([x,y], z)
            for (wv, c) in xy.iter() {
                if let Some((q, sign)) = vars_idx.pair_signed(wv, z) {
                    for (cod_idx, cod) in vars_idx.codomain.iter().enumerate() {
                        if let Some(var) = vars_idx.var(q, cod_idx) {
                            push(*cod, var, c * rat(sign));
                        }
                    }
                }
            }
            // -[x, phi(y, z)]
            if let Some((q, sign)) = vars_idx.pair_signed(&y, z) {
                for (cod_idx, cod) in vars_idx.codomain.iter().enumerate() {
                    if let Some(var) = vars_idx.var(q, cod_idx) {
                        for (out, c) in bracket_basis(&x, cod, p).iter() {
                            push(*out, var, -(c * rat(sign)));
                        }
                    }
                }
            }
            // -[phi(x, z), y]
            if let Some((q, sign)) = vars_idx.pair_signed(&x, z) {
                for (cod_idx, cod) in vars_idx.codomain.iter().enumerate() {
                    if let Some(var) = vars_idx.var(q, cod_idx) {
                        for (out, c) in bracket_basis(cod, &y, p).iter() {
                            push(*out, var, -(c * rat(sign)));
                        }
                    }
                }
            }

            for (_, entries) in row_entries {
                let row = mat.push_row();
                for (var, coeff) in entries {
                    mat.add(row, var, coeff);
                }
            }
        }
    }
    (mat, vars_idx)
}

/// Variable layout for the commuting-map system: one unknown per (window
/// basis vector, codomain coordinate).
pub struct CommutingVars {
    pub domain: Vec<BasisVector>,
    pub codomain: Vec<BasisVector>,
    pub vars: Vec<(usize, usize)>,
    lookup: BTreeMap<(usize, usize), usize>,
}

impl CommutingVars {
    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    fn var(&self, dom: usize, cod: usize) -> Option<usize> {
        self.lookup.get(&(dom, cod)).copied()
    }
}

/// Grade targets for an unknown commuting map's image of `b`, mirroring
/// the biderivation filter through `(x, y) -> [psi(x), y]`.
fn graded_selfmap_filter(p: &Params, b: &BasisVector) -> Vec<BasisVector> {
    let lambda_is = |v: i64| p.lambda() == &rat(v);
    let mu = p.mu();
    let d = b.index.to_rat();
    let mut targets: Vec<(Family, Rat)> = vec![(b.family, d.clone())];
    use Family::*;
    match b.family {
        L => {
            targets.push((M, &d - mu * rat(2)));
            targets.push((Y, &d - mu));
        }
        Y => {
            targets.push((M, &d - mu));
        }
        M => {}
    }
    // center-valued and lambda = -1 boundary candidates
    targets.push((M, -(mu * rat(2))));
    if lambda_is(-1) {
        targets.push((Y, -mu.clone()));
    }
    let mut out = Vec::new();
    for (fam, idx) in targets {
        let Some(h) = HalfInt::try_from_rat(&idx) else {
            continue;
        };
        let v = BasisVector::new(fam, h);
        if v.is_valid_for(p.s()) && !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort();
    out
}

/// Assembles the polarized commuting condition
/// `[psi(b_i), b_j] + [psi(b_j), b_i] = 0` over unordered window pairs.
pub fn assemble_commuting_system(
    p: &Params,
    w: &Window,
    codomain_margin: i64,
    mode: Mode,
) -> (SparseMatrix, CommutingVars) {
    let domain = w.basis();
    let codomain = w.inflate(codomain_margin).basis();
    let cod_lookup: BTreeMap<BasisVector, usize> =
        codomain.iter().enumerate().map(|(i, b)| (*b, i)).collect();

    let mut vars = Vec::new();
    let mut lookup = BTreeMap::new();
    for (i, b) in domain.iter().enumerate() {
        match mode {
            Mode::Full => {
                for c in 0..codomain.len() {
                    lookup.insert((i, c), vars.len());
                    vars.push((i, c));
                }
            }
            Mode::Graded => {
                for t in graded_selfmap_filter(p, b) {
                    if let Some(&c) = cod_lookup.get(&t) {
                        lookup.insert((i, c), vars.len());
                        vars.push((i, c));
                    }
                }
            }
        }
    }
    let vars_idx = CommutingVars {
        domain: domain.clone(),
        codomain,
        vars,
        lookup,
    };

    let mut mat = SparseMatrix::new(0, vars_idx.num_vars());
    for i in 0..domain.len() {
        for j in i..domain.len() {
            let mut row_entries: BTreeMap<BasisVector, Vec<(usize, Rat)>> = BTreeMap::new();
            let mut push = |coord: BasisVector, var: usize, coeff: Rat| {
                if !coeff.is_zero() {
                    row_entries.entry(coord).or_default().push((var, coeff));
                }
            };
            for (a, b) in [(i, j), (j, i)] {
                for (cod_idx, cod) in vars_idx.codomain.iter().enumerate() {
                    if let Some(var) = vars_idx.var(a, cod_idx) {
                        for (out, c) in bracket_basis(cod, &domain[b], p).iter() {
                            push(*out, var, c.clone());
                        }
                    }
                }
            }
            for (_, entries) in row_entries {
                let row = mat.push_row();
                for (var, coeff) in entries {
                    mat.add(row, var, coeff);
                }
            }
        }
    }
    (mat, vars_idx)
}

/// One classification run's outcome.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub params: Params,
    pub window: Window,
    pub mode: Mode,
    pub case: CaseTag,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    pub prime: u64,
    pub raw_dim: usize,
    pub core_dim: usize,
    pub predicted_dim: usize,
    pub span_verdict: SpanVerdict,
    /// Every solution's residuals re-checked exactly; must be true.
    pub residuals_ok: bool,
    /// Window-backed solution maps: pair (or basis vector, for commuting
    /// maps with the first slot `None`) to image.
    pub basis: Vec<Vec<(Option<BasisVector>, BasisVector, LinComb)>>,
}

fn modular_dim_check(a: &SparseMatrix, cfg: &ModularConfig, exact_dim: usize) -> Result<u64> {
    let mut cfg = *cfg;
    for attempt in 1..=8 {
        match rank_mod_p(a, &cfg) {
            Ok(rank) => {
                let dim_mod = a.cols() - rank;
                if dim_mod != exact_dim {
                    return Err(Error::ModularMismatch(format!(
                        "modular nullity {dim_mod} (p = {}) vs exact {exact_dim}",
                        cfg.prime
                    )));
                }
                return Ok(cfg.prime);
            }
            Err(Error::BadPrime { .. }) => {
                cfg = ModularConfig::from_seed_skipping(cfg.seed, attempt);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::ModularMismatch(
        "exhausted prime redraws, every candidate divided a denominator".into(),
    ))
}

fn core_window(w: &Window) -> Window {
    Window::new(w.radius() / 2, w.s())
}

fn verdict(
    expected_restrictions: &[Vec<Rat>],
    solution_restrictions: &[Vec<Rat>],
    ambient: usize,
) -> Result<(usize, usize, SpanVerdict)> {
    let sol_span = SubspaceBasis::from_spanning(ambient, solution_restrictions.to_vec());
    let exp_span = SubspaceBasis::from_spanning(ambient, expected_restrictions.to_vec());
    let mut expected_covered = true;
    for v in expected_restrictions {
        if !sol_span.contains(v)? {
            expected_covered = false;
            break;
        }
    }
    let mut solutions_covered = true;
    for v in solution_restrictions {
        if !exp_span.contains(v)? {
            solutions_covered = false;
            break;
        }
    }
    let verdict = if !expected_covered {
        SpanVerdict::MissingExpected
    } else if !solutions_covered {
        SpanVerdict::ExtraSolutions
    } else {
        SpanVerdict::Match
    };
    Ok((sol_span.dim(), exp_span.dim(), verdict))
}

/// Classifies skew-symmetric biderivations on the window and compares the
/// core-restricted solution span against the predicted one.
pub fn classify_biderivations(
    p: &Params,
    w: &Window,
    mode: Mode,
    cfg: &ModularConfig,
) -> Result<ClassificationReport> {
    let case = detect_case(p);
    let margin = default_codomain_margin(p);
    let (mat, vars) = assemble_bider_system(p, w, margin, mode);

    let ns = nullspace_exact(&mat);
    let raw_dim = ns.dim();
    let prime = modular_dim_check(&mat, cfg, raw_dim)?;

    // solutions as window-backed maps
    let solutions: Vec<BilinearMap> = ns
        .vectors()
        .iter()
        .map(|v| {
            let mut table: BTreeMap<(BasisVector, BasisVector), LinComb> = BTreeMap::new();
            for (var, coeff) in v.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let (q, c) = vars.vars[var];
                let (x, y) = vars.pairs[q];
                let cod = vars.codomain[c];
                table
                    .entry((x, y))
                    .or_insert_with(LinComb::zero)
                    .add_term(cod, coeff.clone());
            }
            BilinearMap::from_table(*w, table, SymmetryFlag::Skew)
        })
        .collect();

    // expected maps per case
    let mut expected: Vec<BilinearMap> = vec![inner_bider(rat(1))];
    if case.bider_case != BiderCase::Generic {
        expected.push(phi0(p)?);
    }
    if case.bider_case == BiderCase::Lambda1IntCoset {
        expected.push(phi1(p)?);
    }

    // flatten onto core pairs x codomain coordinates
    let core = core_window(w);
    let core_basis = core.basis();
    let mut core_pairs = Vec::new();
    for (i, x) in core_basis.iter().enumerate() {
        for y in core_basis.iter().skip(i + 1) {
            core_pairs.push((*x, *y));
        }
    }
    let ambient = core_pairs.len() * vars.codomain.len();
    let flatten = |m: &BilinearMap| -> Result<Vec<Rat>> {
        let mut out = vec![Rat::zero(); ambient];
        for (q, (x, y)) in core_pairs.iter().enumerate() {
            let val = m.eval_basis(x, y, p)?;
            for (b, c) in val.iter() {
                let idx = vars.cod_lookup.get(b).ok_or_else(|| {
                    Error::UndefinedSupport(format!("image coordinate {b} outside codomain"))
                })?;
                out[q * vars.codomain.len() + idx] = c.clone();
            }
        }
        Ok(out)
    };
    let sol_restrictions: Vec<Vec<Rat>> = solutions.iter().map(&flatten).collect::<Result<_>>()?;
    let exp_restrictions: Vec<Vec<Rat>> = expected.iter().map(&flatten).collect::<Result<_>>()?;
    let (core_dim, predicted_dim, span_verdict) =
        verdict(&exp_restrictions, &sol_restrictions, ambient)?;

    // exact residual re-verification of every solution on the
    // constraint-covered triples
    let basis_vs = w.basis();
    let mut residuals_ok = true;
    'outer: for sol in &solutions {
        for (i, x) in basis_vs.iter().enumerate() {
            for y in basis_vs.iter().skip(i + 1) {
                let xy = bracket_basis(x, y, p);
                if xy.support().any(|b| !w.contains(b)) {
                    continue;
                }
                for z in &basis_vs {
                    if !bider_residual_1(sol, x, y, z, p)?.is_zero() {
                        residuals_ok = false;
                        break 'outer;
                    }
                    // axiom 2 at (z, x, y) is covered exactly when
                    // [x, y] stays in the window
                    if !bider_residual_2(sol, z, x, y, p)?.is_zero() {
                        residuals_ok = false;
                        break 'outer;
                    }
                }
            }
        }
    }

    let basis_out = solutions
        .iter()
        .zip(ns.vectors())
        .map(|(_, v)| {
            let mut entries = Vec::new();
            let mut grouped: BTreeMap<(BasisVector, BasisVector), LinComb> = BTreeMap::new();
            for (var, coeff) in v.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let (q, c) = vars.vars[var];
                grouped
                    .entry(vars.pairs[q])
                    .or_insert_with(LinComb::zero)
                    .add_term(vars.codomain[c], coeff.clone());
            }
            for ((x, y), val) in grouped {
                entries.push((Some(x), y, val));
            }
            entries
        })
        .collect();

    Ok(ClassificationReport {
        params: p.clone(),
        window: *w,
        mode,
        case,
        matrix_rows: mat.rows(),
        matrix_cols: mat.cols(),
        prime,
        raw_dim,
        core_dim,
        predicted_dim,
        span_verdict,
        residuals_ok,
        basis: basis_out,
    })
}

/// Classifies linear commuting maps on the window.
pub fn classify_commuting(
    p: &Params,
    w: &Window,
    mode: Mode,
    cfg: &ModularConfig,
) -> Result<ClassificationReport> {
    let case = detect_case(p);
    let margin = default_codomain_margin(p);
    let (mat, vars) = assemble_commuting_system(p, w, margin, mode);

    let ns = nullspace_exact(&mat);
    let raw_dim = ns.dim();
    let prime = modular_dim_check(&mat, cfg, raw_dim)?;

    let solutions: Vec<LinearSelfMap> = ns
        .vectors()
        .iter()
        .map(|v| {
            let mut images: BTreeMap<BasisVector, LinComb> = BTreeMap::new();
            for (var, coeff) in v.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let (d, c) = vars.vars[var];
                images
                    .entry(vars.domain[d])
                    .or_insert_with(LinComb::zero)
                    .add_term(vars.codomain[c], coeff.clone());
            }
            LinearSelfMap::from_table(*w, images)
        })
        .collect();

    let core = core_window(w);
    let core_basis = core.basis();

    // expected maps: identity, the exceptional self-maps on their cosets,
    // and center-valued point functionals when the center is nonzero
    let mut expected: Vec<LinearSelfMap> = vec![LinearSelfMap::identity()];
    if case.bider_case != BiderCase::Generic {
        expected.push(psi0(p)?);
    }
    if case.bider_case == BiderCase::Lambda1IntCoset {
        expected.push(psi1(p)?);
    }
    if case.center_nonzero {
        let two_mu = p.two_mu_halfint().expect("center_nonzero implies 2mu in Z");
        let center = BasisVector::new(Family::M, -two_mu);
        for b in &core_basis {
            let mut images = BTreeMap::new();
            images.insert(*b, LinComb::basis(center));
            expected.push(LinearSelfMap::from_table(*w, images));
        }
    }

    let ambient = core_basis.len() * vars.codomain.len();
    let flatten = |m: &LinearSelfMap| -> Result<Vec<Rat>> {
        let mut out = vec![Rat::zero(); ambient];
        for (i, b) in core_basis.iter().enumerate() {
            let val = m.eval_basis(b, p)?;
            for (cb, c) in val.iter() {
                let idx = vars.codomain.iter().position(|x| x == cb).ok_or_else(|| {
                    Error::UndefinedSupport(format!("image coordinate {cb} outside codomain"))
                })?;
                out[i * vars.codomain.len() + idx] = c.clone();
            }
        }
        Ok(out)
    };
    let sol_restrictions: Vec<Vec<Rat>> = solutions.iter().map(&flatten).collect::<Result<_>>()?;
    let exp_restrictions: Vec<Vec<Rat>> = expected.iter().map(&flatten).collect::<Result<_>>()?;
    let (core_dim, predicted_dim, span_verdict) =
        verdict(&exp_restrictions, &sol_restrictions, ambient)?;

    // every solution re-passes the polarized residual exactly
    let basis_vs = w.basis();
    let mut residuals_ok = true;
    'outer: for sol in &solutions {
        for (i, x) in basis_vs.iter().enumerate() {
            for y in basis_vs.iter().skip(i) {
                if !polarized_commuting_residual(sol, x, y, p)?.is_zero() {
                    residuals_ok = false;
                    break 'outer;
                }
            }
        }
    }

    let basis_out = ns
        .vectors()
        .iter()
        .map(|v| {
            let mut grouped: BTreeMap<BasisVector, LinComb> = BTreeMap::new();
            for (var, coeff) in v.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let (d, c) = vars.vars[var];
                grouped
                    .entry(vars.domain[d])
                    .or_insert_with(LinComb::zero)
                    .add_term(vars.codomain[c], coeff.clone());
            }
            grouped.into_iter().map(|(b, val)| (None, b, val)).collect()
        })
        .collect();

    Ok(ClassificationReport {
        params: p.clone(),
        window: *w,
        mode,
        case,
        matrix_rows: mat.rows(),
        matrix_cols: mat.cols(),
        prime,
        raw_dim,
        core_dim,
        predicted_dim,
        span_verdict,
        residuals_ok,
        basis: basis_out,
    })
}
