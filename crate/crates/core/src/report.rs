//! Serializable report structures shared by the CLI and FFI layers.
//!
//! Every rational is serialized as a string `"p/q"` (or `"p"` for
//! integers) so exactness survives any JSON consumer; field and basis
//! order are canonical, making the serialized form byte-deterministic.

use serde::{Deserialize, Serialize};

use crate::algebra::{BasisVector, LinComb, Params};
use crate::classify::{BiderCase, CaseTag, ClassificationReport, Mode, SpanVerdict};
use crate::error::Result;
use crate::scalar::format_rat;
use crate::structure::{JacobiCheck, Window};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ParamsEcho {
    pub lambda: String,
    pub mu: String,
    pub s: String,
}

impl ParamsEcho {
    pub fn new(p: &Params) -> Self {
        ParamsEcho {
            lambda: format_rat(p.lambda()),
            mu: format_rat(p.mu()),
            s: p.s().to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CaseTagEcho {
    pub bider_case: String,
    pub center_nonzero: bool,
    pub abelianization_nontrivial: bool,
}

impl CaseTagEcho {
    pub fn new(tag: &CaseTag) -> Self {
        let bider_case = match tag.bider_case {
            BiderCase::Lambda1HalfCoset => "Lambda1HalfCoset",
            BiderCase::Lambda1IntCoset => "Lambda1IntCoset",
            BiderCase::Generic => "Generic",
        };
        CaseTagEcho {
            bider_case: bider_case.into(),
            center_nonzero: tag.center_nonzero,
            abelianization_nontrivial: tag.abelianization_nontrivial,
        }
    }
}

/// A linear combination as ordered (basis vector, coefficient) pairs.
pub fn lincomb_entries(v: &LinComb) -> Vec<(String, String)> {
    v.iter()
        .map(|(b, c)| (b.to_string(), format_rat(c)))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CaseReport {
    pub schema_version: u32,
    pub params: ParamsEcho,
    pub case: CaseTagEcho,
    pub predicted_bider_dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JacobiReport {
    pub schema_version: u32,
    pub params: ParamsEcho,
    pub window: i64,
    pub ok: bool,
    pub triples_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl JacobiReport {
    pub fn new(p: &Params, w: &Window, check: &JacobiCheck) -> Self {
        JacobiReport {
            schema_version: SCHEMA_VERSION,
            params: ParamsEcho::new(p),
            window: w.radius(),
            ok: check.ok,
            triples_checked: check.triples_checked,
            witness: check.witness.as_ref().map(|(x, y, z, res)| {
                vec![x.to_string(), y.to_string(), z.to_string(), res.to_string()]
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StructureReport {
    pub schema_version: u32,
    pub params: ParamsEcho,
    pub window: i64,
    pub case: CaseTagEcho,
    pub center_dim: usize,
    pub center_basis: Vec<Vec<(String, String)>>,
    pub derived_dim: usize,
    pub abelianization_dim: usize,
    pub centralizer_equals_center: bool,
    /// Observed dimensions agree with the case tag's predictions.
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapCheck {
    pub map: String,
    pub check: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyMapsReport {
    pub schema_version: u32,
    pub params: ParamsEcho,
    pub window: i64,
    pub checks: Vec<MapCheck>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SolutionEntry {
    /// Domain: a pair for biderivations, a single vector for self-maps.
    pub domain: Vec<String>,
    pub value: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassifyReport {
    pub schema_version: u32,
    pub kind: String,
    pub params: ParamsEcho,
    pub window: i64,
    pub mode: String,
    pub case: CaseTagEcho,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    pub prime: u64,
    pub raw_dim: usize,
    pub core_dim: usize,
    pub predicted_dim: usize,
    pub span_verdict: String,
    pub residual_max: String,
    pub basis: Vec<Vec<SolutionEntry>>,
}

impl ClassifyReport {
    pub fn new(kind: &str, r: &ClassificationReport) -> Self {
        let span_verdict = match r.span_verdict {
            SpanVerdict::Match => "match",
            SpanVerdict::ExtraSolutions => "extra_solutions",
            SpanVerdict::MissingExpected => "missing_expected",
        };
        let mode = match r.mode {
            Mode::Full => "full",
            Mode::Graded => "graded",
        };
        let basis = r
            .basis
            .iter()
            .map(|sol| {
                sol.iter()
                    .map(|(first, second, val)| SolutionEntry {
                        domain: match first {
                            Some(x) => vec![x.to_string(), second.to_string()],
                            None => vec![second.to_string()],
                        },
                        value: lincomb_entries(val),
                    })
                    .collect()
            })
            .collect();
        ClassifyReport {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            params: ParamsEcho::new(&r.params),
            window: r.window.radius(),
            mode: mode.into(),
            case: CaseTagEcho::new(&r.case),
            matrix_rows: r.matrix_rows,
            matrix_cols: r.matrix_cols,
            prime: r.prime,
            raw_dim: r.raw_dim,
            core_dim: r.core_dim,
            predicted_dim: r.predicted_dim,
            span_verdict: span_verdict.into(),
            residual_max: if r.residuals_ok {
                "0".into()
            } else {
                "nonzero".into()
            },
            basis,
        }
    }

    pub fn passed(&self) -> bool {
        self.span_verdict == "match" && self.residual_max == "0"
    }
}

/// Helper for formatting basis vectors uniformly in reports.
pub fn basis_label(b: &BasisVector) -> String {
    b.to_string()
}

pub fn case_report(p: &Params) -> CaseReport {
    let tag = crate::classify::detect_case(p);
    CaseReport {
        schema_version: SCHEMA_VERSION,
        params: ParamsEcho::new(p),
        case: CaseTagEcho::new(&tag),
        predicted_bider_dim: tag.predicted_bider_dim(),
    }
}

pub fn jacobi_report(p: &Params, radius: i64) -> JacobiReport {
    let w = Window::new(radius, p.s());
    let check = crate::structure::jacobi_check_window(p, &w);
    JacobiReport::new(p, &w, &check)
}

/// Computes center, derived subalgebra, abelianization, and centralizer
/// on the window and compares them against the predicted structure.
pub fn structure_report(p: &Params, radius: i64, margin: i64) -> Result<StructureReport> {
    use crate::structure::{
        abelianization_dim, center_window, centralizer_of_derived, derived_window, from_coords,
        to_coords,
    };

    let w = Window::new(radius, p.s());
    let tag = crate::classify::detect_case(p);
    let center = center_window(p, &w);
    let basis_vs = w.basis();
    let center_basis: Vec<Vec<(String, String)>> = center
        .vectors()
        .iter()
        .map(|coords| lincomb_entries(&from_coords(coords, &basis_vs)))
        .collect();
    let derived = derived_window(p, &w, margin).dim();
    let ab_dim = abelianization_dim(p, &w, margin);
    let centralizer = centralizer_of_derived(p, &w, margin);
    let centralizer_equals_center = center.same_subspace(&centralizer)?;

    let expected_center = if tag.center_nonzero { 1 } else { 0 };
    let expected_ab = if tag.abelianization_nontrivial { 1 } else { 0 };
    let mut consistent = center.dim() == expected_center
        && ab_dim == expected_ab
        && centralizer_equals_center
        && derived + ab_dim == w.dim();
    if tag.center_nonzero {
        let two_mu = p
            .two_mu_halfint()
            .expect("center flag implies 2mu integral");
        let central = LinComb::basis(BasisVector::new(crate::algebra::Family::M, -two_mu));
        let coords = to_coords(&central, &basis_vs).expect("central element lies in the window");
        consistent &= crate::linalg::in_span(&coords, &center)?;
    }

    Ok(StructureReport {
        schema_version: SCHEMA_VERSION,
        params: ParamsEcho::new(p),
        window: w.radius(),
        case: CaseTagEcho::new(&tag),
        center_dim: center.dim(),
        center_basis,
        derived_dim: derived,
        abelianization_dim: ab_dim,
        centralizer_equals_center,
        consistent,
    })
}

/// Runs the residual checkers on every exceptional map defined at the
/// parameters. Errors with `ParameterIncompatible` when none is.
pub fn verify_maps_report(p: &Params, radius: i64) -> Result<VerifyMapsReport> {
    use crate::maps::{
        bider_from_commuting, bider_residual_1, bider_residual_2, inner_bider, lemma25_residual,
        phi0, phi1, polarized_commuting_residual, psi0, psi1, skew_check, BilinearMap,
        LinearSelfMap,
    };
    use crate::scalar::rat;
    use crate::Error;

    let w = Window::new(radius, p.s());
    let maps0 = phi0(p);
    let maps1 = phi1(p);
    if maps0.is_err() && maps1.is_err() {
        return Err(Error::ParameterIncompatible(format!(
            "neither exceptional map is defined at lambda = {}, mu = {}, s = {}",
            format_rat(p.lambda()),
            format_rat(p.mu()),
            p.s()
        )));
    }

    let mut checks = Vec::new();
    let mut record = |map: &str, check: &str, ok: bool| {
        checks.push(MapCheck {
            map: map.into(),
            check: check.into(),
            ok,
        });
    };

    let basis = w.basis();
    let pairs: Vec<(BasisVector, BasisVector)> = basis
        .iter()
        .enumerate()
        .flat_map(|(i, x)| basis.iter().skip(i + 1).map(move |y| (*x, *y)))
        .collect();

    let mut bider_targets: Vec<(&str, BilinearMap)> = vec![("inner", inner_bider(rat(1)))];
    if let Ok(m) = &maps0 {
        bider_targets.push(("phi0", m.clone()));
    }
    if let Ok(m) = &maps1 {
        bider_targets.push(("phi1", m.clone()));
    }
    for (name, phi) in &bider_targets {
        let mut res_ok = true;
        'res: for x in &basis {
            for y in &basis {
                for z in &basis {
                    if !bider_residual_1(phi, x, y, z, p)?.is_zero()
                        || !bider_residual_2(phi, x, y, z, p)?.is_zero()
                    {
                        res_ok = false;
                        break 'res;
                    }
                }
            }
        }
        record(name, "bider_residuals", res_ok);
        record(name, "skew", skew_check(phi, &pairs, p)?);
        let mut l25_ok = true;
        'l25: for (x, y) in &pairs {
            for (u, v) in &pairs {
                if !lemma25_residual(phi, x, y, u, v, p)?.is_zero() {
                    l25_ok = false;
                    break 'l25;
                }
            }
        }
        record(name, "lemma25", l25_ok);
    }

    let mut self_targets: Vec<(&str, LinearSelfMap, Option<&BilinearMap>)> = Vec::new();
    if let Ok(m) = &maps0 {
        self_targets.push(("psi0", psi0(p)?, Some(m)));
    }
    if let Ok(m) = &maps1 {
        self_targets.push(("psi1", psi1(p)?, Some(m)));
    }
    for (name, psi, induced_target) in &self_targets {
        let mut pol_ok = true;
        'pol: for (i, x) in basis.iter().enumerate() {
            for y in basis.iter().skip(i) {
                if !polarized_commuting_residual(psi, x, y, p)?.is_zero() {
                    pol_ok = false;
                    break 'pol;
                }
            }
        }
        record(name, "polarized_commuting_residual", pol_ok);
        if let Some(target) = induced_target {
            let induced = bider_from_commuting(psi, p)?;
            let mut same = true;
            'cmp: for (x, y) in &pairs {
                if induced.eval_basis(x, y, p)? != target.eval_basis(x, y, p)? {
                    same = false;
                    break 'cmp;
                }
            }
            record(name, "induces_exceptional_bider", same);
        }
    }

    let ok = checks.iter().all(|c| c.ok);
    Ok(VerifyMapsReport {
        schema_version: SCHEMA_VERSION,
        params: ParamsEcho::new(p),
        window: w.radius(),
        checks,
        ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassifyKind {
    Biderivation,
    Commuting,
}

pub fn classify_report(
    kind: ClassifyKind,
    p: &Params,
    radius: i64,
    mode: Mode,
    cfg: &crate::linalg::ModularConfig,
) -> crate::error::Result<ClassifyReport> {
    let w = Window::new(radius, p.s());
    let (label, result) = match kind {
        ClassifyKind::Biderivation => (
            "biderivation",
            crate::classify::classify_biderivations(p, &w, mode, cfg)?,
        ),
        ClassifyKind::Commuting => (
            "commuting",
            crate::classify::classify_commuting(p, &w, mode, cfg)?,
        ),
    };
    Ok(ClassifyReport::new(label, &result))
}
