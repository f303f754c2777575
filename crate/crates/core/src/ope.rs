//! Deformed operator product expansion `T(z) phi(w)`, its contour integrals,
//! the mode bracket `[L_n, phi_m]` and the centerless deformed Virasoro data.
//!
//! Only the pole structure of the OPE enters: two simple poles at `w P^h` and
//! `w Q^h` with numerators `phi(w P) / (w D)` and `-phi(w Q) / (w D)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::params::DeformationParams;
use crate::report::ResidualReport;

/// Pole data of `T(z) phi(w)` at a fixed `w`.
#[derive(Debug, Clone)]
pub struct DeformedOpe {
    pub h: f64,
    pub phi: LaurentPoly,
    pub params: DeformationParams,
    pub w: Complex64,
}

impl DeformedOpe {
    pub fn new(phi: LaurentPoly, h: f64, params: &DeformationParams, w: Complex64) -> Self {
        Self { h, phi, params: *params, w }
    }

    /// `[(location, numerator); 2]`.
    pub fn poles(&self) -> [(Complex64, Complex64); 2] {
        let (p, q) = (self.params.big_p(), self.params.big_q());
        let wd = self.w * self.params.denom();
        [
            (self.w * p.powf(self.h), self.phi.eval(self.w * p) / wd),
            (self.w * q.powf(self.h), -self.phi.eval(self.w * q) / wd),
        ]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.poles().iter().map(|&(at, num)| num / (z - at)).sum()
    }
}

/// Something that can be integrated around a circle.
pub trait Integrand {
    fn eval(&self, z: Complex64) -> Complex64;
    /// Singular points, used to refuse contours passing through them.
    fn poles(&self) -> Vec<Complex64>;
}

/// `sum_i r_i / (z - z_i)`.
#[derive(Debug, Clone)]
pub struct SimplePoles(pub Vec<(Complex64, Complex64)>);

impl Integrand for SimplePoles {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().map(|&(at, res)| res / (z - at)).sum()
    }

    fn poles(&self) -> Vec<Complex64> {
        self.0.iter().map(|&(at, _)| at).collect()
    }
}

/// `z^(n+1) T(z) phi(w)` as a function of `z`.
#[derive(Debug, Clone)]
pub struct OpeIntegrand {
    pub ope: DeformedOpe,
    pub n: i64,
}

impl Integrand for OpeIntegrand {
    fn eval(&self, z: Complex64) -> Complex64 {
        z.powi((self.n + 1) as i32) * self.ope.eval(z)
    }

    fn poles(&self) -> Vec<Complex64> {
        let mut poles: Vec<_> = self.ope.poles().iter().map(|&(at, _)| at).collect();
        if self.n + 1 < 0 {
            poles.push(Complex64::new(0.0, 0.0));
        }
        poles
    }
}

/// Trapezoidal rule for `(1 / 2 pi i) \oint f(z) dz` on `|z - center| = radius`.
pub fn contour_integral_numeric(
    f: &dyn Integrand,
    center: Complex64,
    radius: f64,
    points: usize,
) -> Result<Complex64> {
    if points < 64 {
        return Err(Error::TooFewPoints { points });
    }
    for pole in f.poles() {
        if ((pole - center).norm() - radius).abs() <= 10.0 * f64::EPSILON * radius {
            return Err(Error::PoleOnContour { pole });
        }
    }
    let sum: Complex64 = (0..points)
        .map(|j| {
            let theta = std::f64::consts::TAU * j as f64 / points as f64;
            let offset = Complex64::from_polar(radius, theta);
            f.eval(center + offset) * offset
        })
        .sum();
    Ok(sum / points as f64)
}

/// Circle enclosing both OPE poles and excluding the origin. The radius is
/// the geometric mean of the two distances, which balances the trapezoid
/// error from the poles inside against the origin outside. Nearly merged
/// poles get radius `|center| / 8`.
pub fn ope_contour(ope: &DeformedOpe) -> (Complex64, f64) {
    let [(a, _), (b, _)] = ope.poles();
    let center = (a + b) / 2.0;
    let to_poles = (a - b).norm() / 2.0;
    (center, (to_poles * center.norm()).sqrt().max(center.norm() / 8.0))
}

/// `(1 / 2 pi i) \oint_{C_P} z^(n+1) T(z) phi(w) dz` by exact residues:
/// `(1/(wD)) [(w P^h)^(n+1) phi(wP) - (w Q^h)^(n+1) phi(wQ)]`, as a Laurent
/// polynomial in `w`.
pub fn ope_residue_variation(phi: &LaurentPoly, n: i64, h: f64, params: &DeformationParams) -> LaurentPoly {
    let (p, q) = (params.big_p(), params.big_q());
    let lead = h * (n + 1) as f64;
    let mut out = LaurentPoly::zero();
    for (k, c) in phi.terms() {
        // w^(n+1) w^k / w
        let at_p = p.powf(lead) * p.powi(k as i32);
        let at_q = q.powf(lead) * q.powi(k as i32);
        out.add_term(n + k, c * ((at_p - at_q) / params.denom()));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeBracketResult {
    pub n: i64,
    pub m: i64,
    pub h: f64,
    /// Mode index -> coefficient of `phi_k` in `[L_n, phi_m]`.
    pub coefficients: BTreeMap<i64, Complex64>,
    /// `[(h-1)n - m] phi_(n+m)`.
    pub expected: Complex64,
}

impl ModeBracketResult {
    pub fn target(&self) -> i64 {
        self.n + self.m
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        self.coefficients.get(&k).copied().unwrap_or_default()
    }

    /// Largest deviation from `expected` at the target and from zero elsewhere.
    pub fn residual(&self) -> f64 {
        let target = self.target();
        let off = self
            .coefficients
            .iter()
            .filter(|(&k, _)| k != target)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        off.max((self.coefficient(target) - self.expected).norm())
    }
}

/// `[L_n, phi_m]` for `phi(w) = sum_k phi_k w^(-k-h)` with finitely many modes.
///
/// Each mode is carried through the inner residues separately. The factor
/// `w^(-h)` is divided out so the outer `w`-integral reduces to picking the
/// coefficient of `w^(-m)`.
pub fn mode_bracket(
    n: i64,
    m: i64,
    h: f64,
    modes: &BTreeMap<i64, Complex64>,
    params: &DeformationParams,
) -> ModeBracketResult {
    let (p, q) = (params.big_p(), params.big_q());
    let mut coefficients = BTreeMap::new();
    for (&k, &c) in modes {
        // phi_k (wX)^(-k-h) at the pole w X^h, times (w X^h)^(n+1) / (w D)
        let exponent = h * (n + 1) as f64 - k as f64 - h;
        let weight = (p.powf(exponent) - q.powf(exponent)) / params.denom();
        // w^(-h) w^(n-k): the outer integral keeps w^(-m)
        if n - k == -m {
            coefficients.insert(k, c * weight);
        } else {
            coefficients.insert(k, Complex64::new(0.0, 0.0));
        }
    }
    let target = modes.get(&(n + m)).copied().unwrap_or_default();
    let expected = target * params.bracket(((h - 1.0) * n as f64) - m as f64);
    ModeBracketResult { n, m, h, coefficients, expected }
}

/// `(p^(alpha(m+2)) q^(-gamma(n+2)), p^(alpha(n+2)) q^(-gamma(m+2)), [n - m])`.
pub fn virasoro_structure(n: i64, m: i64, params: &DeformationParams) -> (f64, f64, f64) {
    let (n, m) = (n as f64, m as f64);
    let p_w = |x: f64| params.p().powf(params.alpha() * x);
    let q_w = |x: f64| params.q().powf(-params.gamma() * x);
    (p_w(m + 2.0) * q_w(n + 2.0), p_w(n + 2.0) * q_w(m + 2.0), params.bracket(n - m))
}

/// `|[m - n] + [n - m]|` for every pair in the window.
pub fn antisymmetry_table(params: &DeformationParams, lo: i64, hi: i64) -> Vec<(i64, i64, f64)> {
    let mut rows = Vec::new();
    for n in lo..=hi {
        for m in lo..=hi {
            let x = (n - m) as f64;
            rows.push((n, m, (params.bracket(-x) + params.bracket(x)).abs()));
        }
    }
    rows
}

pub fn virasoro_antisymmetry_scan(params: &DeformationParams, lo: i64, hi: i64) -> ResidualReport {
    let worst = antisymmetry_table(params, lo, hi).into_iter().map(|(_, _, r)| r).fold(None, |acc: Option<f64>, r| {
        Some(acc.map_or(r, |a| a.max(r)))
    });
    ResidualReport::documented(
        "Virasoro_antisymmetry",
        worst,
        format!(
            "open question: [n-m] is odd only when PQ = 1 (PQ = {:.6e}); window {lo}..{hi}",
            params.big_p() * params.big_q()
        ),
    )
    .with_params(params.raw())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalculus::delta_n;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pow2() -> DeformationParams {
        DeformationParams::new(0.5, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn residues_match_delta() {
        let v = ope_residue_variation(&LaurentPoly::monomial(1, 1.0), 0, 1.0, &pow2());
        assert!((v.coeff(1) - 3.0).norm() < 1e-14);
        assert!(ope_residue_variation(&LaurentPoly::zero(), 2, 1.0, &pow2()).is_zero());

        let params = DeformationParams::new(0.8, 1.2, 2.0, 0.5, 1.5).unwrap();
        let phi = LaurentPoly::from_terms([(-3, c(1.0)), (2, Complex64::new(0.5, 2.0))]);
        for n in -2..=2 {
            let v = ope_residue_variation(&phi, n, 0.75, &params);
            assert!(v.approx_eq(&delta_n(&phi, n, 0.75, &params), 1e-12));
        }
    }

    #[test]
    fn cauchy_examples() {
        let unit = SimplePoles(vec![(c(0.0), c(1.0))]);
        let v = contour_integral_numeric(&unit, c(0.0), 1.0, 64).unwrap();
        assert!((v - 1.0).norm() < 1e-14);

        let two = SimplePoles(vec![(c(0.3), c(1.0)), (Complex64::new(0.0, 0.5), c(2.0))]);
        let v = contour_integral_numeric(&two, c(0.0), 1.0, 256).unwrap();
        assert!((v - 3.0).norm() < 1e-12);

        assert!(matches!(contour_integral_numeric(&two, c(0.0), 0.3, 256), Err(Error::PoleOnContour { .. })));
        assert_eq!(contour_integral_numeric(&unit, c(0.0), 1.0, 32), Err(Error::TooFewPoints { points: 32 }));
    }

    #[test]
    fn numeric_contour_cross_check() {
        let params = DeformationParams::new(0.8, 1.2, 1.0, 1.0, 1.0).unwrap();
        let phi = LaurentPoly::monomial(2, 1.0);
        let w = c(1.0);
        let ope = DeformedOpe::new(phi.clone(), 2.0, &params, w);
        let (center, radius) = ope_contour(&ope);
        let numeric = contour_integral_numeric(&OpeIntegrand { ope, n: 1 }, center, radius, 256).unwrap();
        let exact = ope_residue_variation(&phi, 1, 2.0, &params).eval(w);
        assert!((numeric - exact).norm() < 1e-8, "{numeric} vs {exact}");
    }

    #[test]
    fn mode_bracket_examples() {
        let params = DeformationParams::new(0.8, 1.2, 1.0, 1.0, 1.0).unwrap();
        let modes = BTreeMap::from([(1, c(1.0))]);
        let r = mode_bracket(1, 0, 2.0, &modes, &params);
        assert!((r.coefficient(1) - params.bracket(1.0)).norm() < 1e-13);
        assert!(r.residual() < 1e-13);

        let r = mode_bracket(1, 0, 2.0, &BTreeMap::from([(3, c(1.0))]), &params);
        assert_eq!(r.coefficient(1), c(0.0));
        assert!(r.residual() == 0.0);

        let r = mode_bracket(0, 0, 2.0, &BTreeMap::from([(0, c(1.0))]), &params);
        assert!(r.coefficient(0).norm() < 1e-15);
    }

    #[test]
    fn virasoro_examples() {
        let (a, b, rhs) = virasoro_structure(1, 0, &pow2());
        assert!((a - 0.25).abs() < 1e-15 && (b - 0.125).abs() < 1e-15);
        assert!((rhs - 1.0).abs() < 1e-15);

        let params = DeformationParams::new(0.8, 1.2, 1.0, 1.0, 1.0).unwrap();
        let (a, b, rhs) = virasoro_structure(2, 2, &params);
        assert_eq!(a, b);
        assert_eq!(rhs, 0.0);

        let report = virasoro_antisymmetry_scan(&pow2(), 0, 1);
        assert!((report.residual - 0.5).abs() < 1e-15);

        // P = 1/2, Q = 2
        let balanced = DeformationParams::new(2.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        assert!(virasoro_antisymmetry_scan(&balanced, -3, 3).residual < 1e-14);
    }
}
