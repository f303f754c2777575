//! Named check suites run at a single parameter point. Each run yields one
//! [`Record`] that aggregates the per-relation reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlators::{self, corr2_report, omega_scan, sample_points, scaling_residuals, ward_residual};
use crate::error::{Error, Result};
use crate::fock::{self, Variant};
use crate::laurent::LaurentPoly;
use crate::ope::{self, contour_integral_numeric, mode_bracket, ope_contour, DeformedOpe, OpeIntegrand};
use crate::params::{ConvergenceReport, DeformationParams, RawParams, ABS_FLOOR};
use crate::qcalculus::{delta_n, general_variation};
use crate::relations::{check_relation, non_implication_witness, RelationId};
use crate::report::{ResidualReport, Verdict};
use crate::su;

/// Floor for checks that go through quadrature or infinite products.
pub const NUMERIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Params,
    Gd,
    Gchj,
    Ghy,
    Casimir,
    C2,
    JsSu2,
    JsGhy,
    Hp,
    HpEq36,
    Su11,
    Su11Quommutator,
    Coproduct,
    Ope,
    ModeBracket,
    VirasoroAntisym,
    Ward,
    Corr2,
}

impl Suite {
    pub const ALL: [Suite; 18] = [
        Suite::Params,
        Suite::Gd,
        Suite::Gchj,
        Suite::Ghy,
        Suite::Casimir,
        Suite::C2,
        Suite::JsSu2,
        Suite::JsGhy,
        Suite::Hp,
        Suite::HpEq36,
        Suite::Su11,
        Suite::Su11Quommutator,
        Suite::Coproduct,
        Suite::Ope,
        Suite::ModeBracket,
        Suite::VirasoroAntisym,
        Suite::Ward,
        Suite::Corr2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Params => "params",
            Suite::Gd => "gd",
            Suite::Gchj => "gchj",
            Suite::Ghy => "ghy",
            Suite::Casimir => "casimir",
            Suite::C2 => "c2",
            Suite::JsSu2 => "js-su2",
            Suite::JsGhy => "js-ghy",
            Suite::Hp => "hp",
            Suite::HpEq36 => "hp-eq36",
            Suite::Su11 => "su11",
            Suite::Su11Quommutator => "su11-quommutator",
            Suite::Coproduct => "coproduct",
            Suite::Ope => "ope",
            Suite::ModeBracket => "mode-bracket",
            Suite::VirasoroAntisym => "virasoro-antisym",
            Suite::Ward => "ward",
            Suite::Corr2 => "corr2",
        }
    }

    /// Suites whose records never gate.
    pub fn is_documentation(&self) -> bool {
        matches!(
            self,
            Suite::C2 | Suite::JsGhy | Suite::HpEq36 | Suite::Su11Quommutator | Suite::VirasoroAntisym | Suite::Corr2
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let known: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite {s:?}; known: {}", known.join(", "))
        })
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Suite {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        name.parse().map_err(serde::de::Error::custom)
    }
}

/// Everything a suite may read: deformation parameters plus the shift,
/// conformal weight, spin and truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    #[serde(flatten)]
    pub params: RawParams,
    pub nu0: f64,
    pub h: f64,
    pub j: f64,
    pub dim: usize,
}

impl Default for Point {
    fn default() -> Self {
        Point { params: RawParams::default(), nu0: 0.0, h: 1.0, j: 1.0, dim: 8 }
    }
}

impl Point {
    fn sort_key(&self) -> [f64; 9] {
        let p = &self.params;
        [p.p, p.q, p.alpha, p.gamma, p.l, self.nu0, self.h, self.j, self.dim as f64]
    }
}

/// Aggregated outcome of one suite at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub point: Point,
    /// Largest residual among the checks that decided the verdict.
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
    pub note: String,
    pub checks: Vec<ResidualReport>,
}

impl Record {
    fn from_checks(suite: Suite, point: Point, checks: Vec<ResidualReport>) -> Self {
        let gated = |r: &&ResidualReport| matches!(r.verdict, Verdict::Pass | Verdict::Fail);
        let verdict = if checks.iter().any(|r| r.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if checks.iter().any(|r| r.verdict == Verdict::Pass) {
            Verdict::Pass
        } else if checks.iter().any(|r| r.verdict == Verdict::Documented) {
            Verdict::Documented
        } else {
            Verdict::Vacuous
        };
        let deciding: Vec<&ResidualReport> = match verdict {
            Verdict::Pass | Verdict::Fail => checks.iter().filter(gated).collect(),
            Verdict::Documented => checks.iter().filter(|r| r.verdict == Verdict::Documented).collect(),
            _ => Vec::new(),
        };
        let worst = deciding.iter().max_by(|a, b| a.residual.total_cmp(&b.residual));
        let residual = worst.map(|r| r.residual);
        let tolerance = worst.map(|r| r.tolerance).filter(|t| t.is_finite());

        let mut parts: Vec<String> = checks
            .iter()
            .map(|r| format!("{}={:.3e} ({})", r.relation, r.residual, r.verdict.label()))
            .collect();
        let mut notes: Vec<&str> = checks.iter().map(|r| r.note.as_str()).filter(|n| n.contains("open question")).collect();
        notes.dedup();
        parts.extend(notes.into_iter().map(str::to_string));
        Record { suite, point, residual, tolerance, verdict, note: parts.join("; "), checks }
    }

    fn rejected(suite: Suite, point: Point, err: &Error) -> Self {
        let kind = err.kind();
        Record {
            suite,
            point,
            residual: None,
            tolerance: None,
            verdict: Verdict::Rejected(kind.to_string()),
            note: err.to_string(),
            checks: vec![ResidualReport::rejected(suite.name(), kind, err.to_string())],
        }
    }

    /// Deterministic ordering: suite name, then parameters, then dimension.
    pub fn cmp_key(&self, other: &Self) -> std::cmp::Ordering {
        self.suite.name().cmp(other.suite.name()).then_with(|| {
            let (a, b) = (self.point.sort_key(), other.point.sort_key());
            a.iter().zip(b.iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

/// Run `suite` at `point`. Precondition failures become `rejected` records.
pub fn run_suite(suite: Suite, point: &Point, tol: f64) -> Record {
    match suite_checks(suite, point, tol) {
        Ok(checks) => Record::from_checks(suite, *point, checks),
        Err(err) => Record::rejected(suite, *point, &err),
    }
}

fn ladder(point: &Point) -> Result<DeformationParams> {
    let p = point.params;
    DeformationParams::ladder(p.p, p.q, p.alpha, p.gamma, p.l)
}

fn scalar(point: &Point) -> Result<DeformationParams> {
    let p = point.params;
    DeformationParams::new(p.p, p.q, p.alpha, p.gamma, p.l)
}

fn relations(variant: Variant, point: &Point, list: &[RelationId], tol: f64) -> Result<Vec<ResidualReport>> {
    let rep = fock::build(variant, &ladder(point)?, point.dim, point.nu0)?;
    list.iter().map(|&r| check_relation(&rep, r, tol)).collect()
}

fn convergence_check(name: &str, report: &ConvergenceReport, tol: f64) -> ResidualReport {
    let last = report.last();
    let mut out = ResidualReport::gated(name, last, tol);
    if !report.monotone {
        out.verdict = Verdict::Fail;
    }
    out.with_note(format!("monotone={}, path length {}", report.monotone, report.residuals.len()))
}

/// `p = q = 1 + 10^-k`, `k = 1..=6`.
pub fn classical_path() -> Vec<DeformationParams> {
    (1..=6)
        .map(|k| {
            let p = 1.0 + 10f64.powi(-k);
            DeformationParams::ladder(p, p, 1.0, 1.0, 1.0).expect("valid path point")
        })
        .collect()
}

fn max_opt(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    values.into_iter().fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}

fn suite_checks(suite: Suite, point: &Point, tol: f64) -> Result<Vec<ResidualReport>> {
    if point.dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let numeric_tol = tol.max(NUMERIC_TOL);
    Ok(match suite {
        Suite::Params => params_checks(&scalar(point)?, point.dim, tol),
        Suite::Gd => relations(
            Variant::GD,
            point,
            &[
                RelationId::Gd7,
                RelationId::GChJ8,
                RelationId::GChJ9,
                RelationId::Ghy12,
                RelationId::Ghy13,
                RelationId::NumberComm,
                RelationId::Imply15,
            ],
            tol,
        )?,
        Suite::Gchj if point.nu0 == 0.0 => relations(
            Variant::GChJ,
            point,
            &[
                RelationId::GChJ8,
                RelationId::GChJ9,
                RelationId::NumberComm,
                RelationId::C1Commutes,
                RelationId::C1Eigenvalue18,
            ],
            tol,
        )?,
        Suite::Gchj => relations(
            Variant::GChJShifted,
            point,
            &[
                RelationId::GChJ8,
                RelationId::NumberComm,
                RelationId::C1Commutes,
                RelationId::C1Eigenvalue18,
                RelationId::Imply19_20,
                RelationId::Imply26,
            ],
            tol,
        )?,
        Suite::Ghy => relations(
            Variant::GHYShifted,
            point,
            &[RelationId::Ghy12, RelationId::Ghy13, RelationId::NumberComm],
            tol,
        )?,
        Suite::Casimir => {
            let mut out = relations(
                Variant::GChJShifted,
                point,
                &[RelationId::C1Commutes, RelationId::C1Eigenvalue18],
                tol,
            )?;
            if point.nu0 != 0.0 {
                out.push(non_implication_witness(&ladder(point)?, point.dim, point.nu0, 0.1)?);
            }
            out
        }
        Suite::C2 => relations(
            Variant::GHYShifted,
            point,
            &[RelationId::C2Commutes, RelationId::C2Eigenvalue, RelationId::Imply27_28],
            tol,
        )?,
        Suite::JsSu2 => {
            let variant = if point.nu0 == 0.0 { Variant::GChJ } else { Variant::GChJShifted };
            let rep = fock::build(variant, &ladder(point)?, point.dim, point.nu0)?;
            let real = su::jordan_schwinger(&rep, &rep)?;
            vec![
                su::check_js(&real, tol)?,
                ResidualReport::gated("JS_grading", Some(real.grading_residual()), tol.max(1e-12)),
                ResidualReport::gated("JS_ctilde_central", real.ctilde_residual(), tol),
            ]
        }
        Suite::JsGhy => {
            let rep = fock::build_ghy_shifted(&ladder(point)?, point.dim, point.nu0)?;
            let real = su::jordan_schwinger(&rep, &rep)?;
            vec![su::check_su2_ghy(&real, tol)?]
        }
        Suite::Hp => {
            let params = ladder(point)?;
            let rep = fock::build_gchj(&params, point.dim)?;
            let real = su::holstein_primakoff(&rep, point.j)?;
            let path = su::hp_classical_path(point.j.max(1.0), point.dim, &classical_path())?;
            vec![
                ResidualReport::gated("HP_grading", Some(real.grading_residual()), tol.max(1e-12)),
                ResidualReport::gated("HP_products", hp_products(&real), tol),
                convergence_check("HP_classical_limit", &path, 1e-8),
            ]
        }
        Suite::HpEq36 => {
            let rep = fock::build_gchj(&ladder(point)?, point.dim)?;
            vec![su::check_hp_constant_form(&su::holstein_primakoff(&rep, point.j)?)]
        }
        Suite::Su11 => {
            let rep = su11_rep(point)?;
            su::check_su11(&rep, tol).into_iter().filter(|r| r.verdict != Verdict::Documented).collect()
        }
        Suite::Su11Quommutator => {
            let rep = su11_rep(point)?;
            su::check_su11(&rep, tol).into_iter().filter(|r| r.relation == "SU11_quommutator").collect()
        }
        Suite::Coproduct => {
            let params = scalar(point)?;
            let (lo, hi) = window(point.dim.min(8));
            let mut out = su::coproduct_check(point.h, point.h, &params, lo, hi, tol);
            let residuals = classical_path()
                .iter()
                .map(|p| su::coproduct_classical_residual(point.h, point.h, p, lo, hi).unwrap_or(0.0))
                .collect();
            out.push(convergence_check(
                "Coproduct_classical_limit",
                &ConvergenceReport::from_residuals(residuals, ABS_FLOOR),
                1e-8,
            ));
            out
        }
        Suite::Ope => ope_checks(&scalar(point)?, point.h, tol, numeric_tol)?,
        Suite::ModeBracket => mode_bracket_checks(&scalar(point)?, point.h, tol),
        Suite::VirasoroAntisym => vec![ope::virasoro_antisymmetry_scan(&scalar(point)?, -3, 3)],
        Suite::Ward => ward_checks(&scalar(point)?, point.h, numeric_tol)?,
        Suite::Corr2 => {
            let params = scalar(point)?;
            vec![corr2_report(point.h, &params, &sample_points(point.h, &params)?)?]
        }
    })
}

fn window(dim: usize) -> (i64, i64) {
    let lo = -((dim / 2) as i64);
    (lo, lo + dim.max(1) as i64 - 1)
}

fn su11_rep(point: &Point) -> Result<su::Su11FieldRep> {
    let params = scalar(point)?;
    let (lo, hi) = window(point.dim);
    Ok(su::su11_field_rep(point.h, &params, lo, hi))
}

/// `J+J-|n> = r^n [n][2j-n+s]`, `J-J+|n> = r^(n+s) [n+s][2j-n]` on the interior.
fn hp_products(real: &su::Su2Realization) -> Option<f64> {
    let params = real.params;
    let s = params.step();
    let j = real.j.unwrap_or(0.0);
    let jpjm = &real.jp * &real.jm;
    let jmjp = &real.jm * &real.jp;
    max_opt(real.interior.iter().flat_map(|&i| {
        let n = real.j0[(i, i)] + j;
        let top = i + 1 == real.dim();
        let up = params.pq_pow(-n) * params.bracket(n) * params.bracket(2.0 * j - n + s);
        // the top state has no neighbour above it inside the truncation
        let down = if top { 0.0 } else { params.pq_pow(-(n + s)) * params.bracket(n + s) * params.bracket(2.0 * j - n) };
        let scale = up.abs().max(down.abs()).max(1.0);
        [(jpjm[(i, i)] - up).abs() / scale, (jmjp[(i, i)] - down).abs() / scale]
    }))
}

fn params_checks(params: &DeformationParams, dim: usize, tol: f64) -> Vec<ResidualReport> {
    let s = params.step();
    let (p, q) = (params.big_p(), params.big_q());
    let args: Vec<f64> = (0..dim).map(|i| i as f64 * s).collect();
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
    let shift_p = max_opt(args.iter().map(|&n| rel(params.bracket(n + s) - p.powf(s) * params.bracket(n), q.powf(n))));
    let shift_q = max_opt(args.iter().map(|&n| rel(params.bracket(n + s) - q.powf(s) * params.bracket(n), p.powf(n))));
    let reflect = max_opt(args.iter().map(|&n| rel(params.bracket(-n), -params.pq_pow(-n) * params.bracket(n))));
    vec![
        ResidualReport::gated("bracket_step_unit", Some(rel(params.bracket(s), 1.0)), tol),
        ResidualReport::gated("bracket_shift_P", shift_p, tol),
        ResidualReport::gated("bracket_shift_Q", shift_q, tol),
        ResidualReport::gated("bracket_reflection", reflect, tol),
    ]
}

/// Fixed test field `sum_(k=-3..3) c_k z^k`.
fn test_field() -> LaurentPoly {
    LaurentPoly::from_terms((-3..=3).map(|k: i64| (k, Complex64::new(1.0 + 0.25 * k as f64, 0.5 - 0.125 * k as f64))))
}

fn ope_checks(params: &DeformationParams, h: f64, tol: f64, numeric_tol: f64) -> Result<Vec<ResidualReport>> {
    let phi = test_field();
    let mut exact: f64 = 0.0;
    let mut variation: f64 = 0.0;
    let mut numeric: f64 = 0.0;
    let w = Complex64::new(0.9, 0.3);
    for n in -2..=2 {
        let by_residue = ope::ope_residue_variation(&phi, n, h, params);
        let by_rule = delta_n(&phi, n, h, params);
        let scale = by_rule.max_abs().max(1.0);
        exact = exact.max(by_residue.sub(&by_rule).max_abs() / scale);

        let eps = Complex64::new(0.5, -0.25);
        let general = general_variation(&phi, &LaurentPoly::monomial(n + 1, eps), h, params)?;
        variation = variation.max(general.sub(&by_rule.scale(eps)).max_abs() / scale);

        let ope = DeformedOpe::new(phi.clone(), h, params, w);
        let (center, radius) = ope_contour(&ope);
        let value = contour_integral_numeric(&OpeIntegrand { ope, n }, center, radius, 256)?;
        let target = by_residue.eval(w);
        numeric = numeric.max((value - target).norm() / target.norm().max(1.0));
    }
    Ok(vec![
        ResidualReport::gated("OPE_residue_vs_delta", Some(exact), tol),
        ResidualReport::gated("OPE_general_variation", Some(variation), tol),
        ResidualReport::gated("OPE_contour_M256", Some(numeric), numeric_tol),
    ])
}

fn mode_bracket_checks(params: &DeformationParams, h: f64, tol: f64) -> Vec<ResidualReport> {
    let mut worst: f64 = 0.0;
    let mut virasoro: f64 = 0.0;
    for n in -3..=3 {
        for m in -3..=3 {
            let modes: BTreeMap<i64, Complex64> =
                (-6..=6).map(|k: i64| (k, Complex64::new(1.0, 0.1 * k as f64))).collect();
            let scale = modes.values().map(|c| c.norm()).fold(1.0, f64::max);
            let result = mode_bracket(n, m, h, &modes, params);
            worst = worst.max(result.residual() / scale);

            let l_modes = BTreeMap::from([(n + m, Complex64::new(1.0, 0.0))]);
            let as_virasoro = mode_bracket(n, m, 2.0, &l_modes, params);
            let (_, _, rhs) = ope::virasoro_structure(n, m, params);
            virasoro = virasoro.max((as_virasoro.coefficient(n + m).re - rhs).abs() / rhs.abs().max(1.0));
        }
    }
    vec![
        ResidualReport::gated("Mode_bracket", Some(worst), tol),
        ResidualReport::gated("Mode_bracket_virasoro_h2", Some(virasoro), tol),
    ]
}

fn ward_checks(params: &DeformationParams, h: f64, numeric_tol: f64) -> Result<Vec<ResidualReport>> {
    let points = sample_points(h, params)?;
    let mut out = vec![ward_residual(h, h, params, &points, -2.0 * h, numeric_tol)?];

    let scaling = max_opt(
        points
            .iter()
            .map(|&(z1, z2)| scaling_residuals(z1, z2, h, params).map(|r| r.into_iter().fold(0.0, f64::max)))
            .collect::<Result<Vec<_>>>()?,
    );
    out.push(ResidualReport::gated("Two_point_scaling", scaling, numeric_tol.max(1e-10)).with_note("corr6 uses Q^omega"));

    if h != 0.0 {
        let omegas = [-2.0 * h - 1.0, -2.0 * h, -2.0 * h + 1.0];
        let scan = omega_scan(h, params, &omegas)?;
        let ok = scan.best == -2.0 * h && scan.separation >= 10.0;
        let mut report = ResidualReport::gated("Ward_omega_scan", Some(1.0 / scan.separation), 0.1);
        if !ok {
            report.verdict = Verdict::Fail;
        }
        out.push(report.with_note(format!("best omega={}, separation={:.3e}", scan.best, scan.separation)));
    }
    let _ = correlators::correlator_base(params)?;
    Ok(out.into_iter().map(|r| r.with_params(params.raw())).collect())
}
