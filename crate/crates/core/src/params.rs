//! Deformation parameter space and the generalized deformed number.
//!
//! The structure function is
//!
//! ```text
//! [x] = (P^x - Q^x) / D,   P = p^(-alpha), Q = q^gamma, D = P^s - Q^s, s = l / (alpha gamma)
//! ```
//!
//! and every other module in the crate is written in terms of `P`, `Q` and the
//! ladder step `s` rather than the raw five-tuple.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this separation `|P - Q|` the bracket uses its analytic limit.
pub const EPS_DEGENERATE: f64 = 1e-9;

/// Absolute tolerance for snapping the ladder step to an integer.
pub const STEP_SNAP_TOL: f64 = 1e-12;

/// Absolute floor applied to every relative comparison in the crate.
pub const ABS_FLOOR: f64 = 1e-14;

/// `|a - b| <= rel * max(|a|, |b|) + ABS_FLOOR`.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + ABS_FLOOR
}

/// The raw five-tuple, as it appears in CLI flags and report files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub l: f64,
}

impl RawParams {
    pub fn new(p: f64, q: f64, alpha: f64, gamma: f64, l: f64) -> Self {
        RawParams { p, q, alpha, gamma, l }
    }
}

impl Default for RawParams {
    fn default() -> Self {
        RawParams::new(1.0, 1.0, 1.0, 1.0, 1.0)
    }
}

/// Validated deformation parameters with cached derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    raw: RawParams,
    ln_big_p: f64,
    ln_big_q: f64,
    big_p: f64,
    big_q: f64,
    denom: f64,
    step: f64,
    ladder: bool,
    eps_degenerate: f64,
}

/// Validate a raw tuple. In ladder mode the step `l/(alpha gamma)` must be a
/// positive integer (within [`STEP_SNAP_TOL`]) and is snapped to it.
pub fn validate(raw: RawParams, ladder_mode: bool) -> Result<DeformationParams> {
    let RawParams { p, q, alpha, gamma, l } = raw;
    for (name, value) in [("p", p), ("q", q)] {
        if value.is_nan() || value <= 0.0 || value.is_infinite() {
            return Err(Error::NonPositiveBase { name, value });
        }
    }
    for (name, value) in [("alpha", alpha), ("gamma", gamma), ("l", l)] {
        if value == 0.0 || !value.is_finite() {
            return Err(Error::ZeroExponent { name });
        }
    }

    let mut step = l / (alpha * gamma);
    if ladder_mode {
        let snapped = step.round();
        if (step - snapped).abs() > STEP_SNAP_TOL || snapped < 1.0 {
            return Err(Error::NonIntegerStep { step });
        }
        step = snapped;
    }

    let ln_big_p = -alpha * p.ln();
    let ln_big_q = gamma * q.ln();
    let big_p = ln_big_p.exp();
    let big_q = ln_big_q.exp();
    let denom = p.powf(-l / gamma) - q.powf(l / alpha);

    let params = DeformationParams {
        raw,
        ln_big_p,
        ln_big_q,
        big_p,
        big_q,
        denom,
        step,
        ladder: ladder_mode,
        eps_degenerate: EPS_DEGENERATE,
    };
    debug_assert!(
        close(denom, big_p.powf(step) - big_q.powf(step), 1e-12),
        "D = P^s - Q^s violated for {raw:?}"
    );
    Ok(params)
}

impl DeformationParams {
    /// Scalar-mode parameters (non-integer step allowed).
    pub fn new(p: f64, q: f64, alpha: f64, gamma: f64, l: f64) -> Result<Self> {
        validate(RawParams::new(p, q, alpha, gamma, l), false)
    }

    /// Ladder-mode parameters, as required by every Fock representation.
    pub fn ladder(p: f64, q: f64, alpha: f64, gamma: f64, l: f64) -> Result<Self> {
        validate(RawParams::new(p, q, alpha, gamma, l), true)
    }

    /// Override the degenerate-branch threshold on `|P - Q|`.
    pub fn with_eps_degenerate(mut self, eps: f64) -> Self {
        self.eps_degenerate = eps;
        self
    }

    pub fn raw(&self) -> RawParams {
        self.raw
    }
    pub fn p(&self) -> f64 {
        self.raw.p
    }
    pub fn q(&self) -> f64 {
        self.raw.q
    }
    pub fn alpha(&self) -> f64 {
        self.raw.alpha
    }
    pub fn gamma(&self) -> f64 {
        self.raw.gamma
    }
    pub fn l(&self) -> f64 {
        self.raw.l
    }
    /// `P = p^(-alpha)`.
    pub fn big_p(&self) -> f64 {
        self.big_p
    }
    /// `Q = q^gamma`.
    pub fn big_q(&self) -> f64 {
        self.big_q
    }
    /// `D = p^(-l/gamma) - q^(l/alpha)`.
    pub fn denom(&self) -> f64 {
        self.denom
    }
    /// Ladder step `s = l / (alpha gamma)`.
    pub fn step(&self) -> f64 {
        self.step
    }
    pub fn is_ladder(&self) -> bool {
        self.ladder
    }
    pub fn eps_degenerate(&self) -> f64 {
        self.eps_degenerate
    }

    /// `P^x`, computed from the cached logarithm.
    pub fn p_pow(&self, x: f64) -> f64 {
        (self.ln_big_p * x).exp()
    }

    /// `Q^x`, computed from the cached logarithm.
    pub fn q_pow(&self, x: f64) -> f64 {
        (self.ln_big_q * x).exp()
    }

    /// `(PQ)^x = (p^(-alpha) q^gamma)^x`.
    pub fn pq_pow(&self, x: f64) -> f64 {
        ((self.ln_big_p + self.ln_big_q) * x).exp()
    }

    /// True when the bracket is evaluated through its `P = Q` limit.
    pub fn is_degenerate(&self) -> bool {
        (self.big_p - self.big_q).abs() < self.eps_degenerate
    }

    /// The generalized deformed number `[x]`.
    pub fn bracket(&self, x: f64) -> f64 {
        if self.is_degenerate() {
            self.bracket_limit(x)
        } else {
            self.bracket_direct(x)
        }
    }

    /// `(P^x - Q^x) / D` without the degenerate switch.
    ///
    /// Evaluated as `exp(m (x - s)) sinh(g x) / sinh(g s)` with
    /// `m = (ln P + ln Q)/2`, `g = (ln P - ln Q)/2`, which is the same function
    /// but keeps full relative accuracy as `P -> Q`.
    pub fn bracket_direct(&self, x: f64) -> f64 {
        let half_gap = 0.5 * (self.ln_big_p - self.ln_big_q);
        if half_gap == 0.0 {
            return self.bracket_limit(x);
        }
        let mid = 0.5 * (self.ln_big_p + self.ln_big_q);
        let s = self.step;
        let value = (mid * (x - s)).exp() * (half_gap * x).sinh() / (half_gap * s).sinh();
        if value.is_finite() {
            value
        } else {
            (self.p_pow(x) - self.q_pow(x)) / (self.p_pow(s) - self.q_pow(s))
        }
    }

    /// `(x/s) P^(x - s)`, the value of the bracket at `Q = P`.
    pub fn bracket_limit(&self, x: f64) -> f64 {
        x / self.step * self.p_pow(x - self.step)
    }

    /// `[n]! = [n][n-1]...[1]`, with `[0]! = 1`.
    pub fn bracket_factorial(&self, n: u32) -> f64 {
        (1..=n).map(|k| self.bracket(f64::from(k))).product()
    }

    /// Value of the bracket at `p = q = 1`: `x alpha gamma / l`.
    pub fn classical_value(&self, x: f64) -> f64 {
        x * self.raw.alpha * self.raw.gamma / self.raw.l
    }
}

/// Free function form of [`DeformationParams::bracket`].
pub fn bracket(x: f64, params: &DeformationParams) -> f64 {
    params.bracket(x)
}

/// Free function form of [`DeformationParams::bracket_factorial`].
pub fn bracket_factorial(n: u32, params: &DeformationParams) -> f64 {
    params.bracket_factorial(n)
}

/// Named one- and two-parameter deformations embedded in the unified family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Specialization {
    /// `(p = 1, q)`.
    ArikCoon { q: f64 },
    /// `(p = q^alpha, q^gamma)`; also covers the Kwek-Oh parametrization,
    /// which is printed identically.
    BiedenharnMacfarlane { q: f64, alpha: f64, gamma: f64 },
    /// Two-parameter `(p, q)` deformation.
    ChakrabartiJagannathan { p: f64, q: f64 },
    /// Undeformed oscillator.
    Classical,
}

impl Specialization {
    pub fn tag(&self) -> &'static str {
        match self {
            Specialization::ArikCoon { .. } => "ArikCoon",
            Specialization::BiedenharnMacfarlane { .. } => "BiedenharnMacfarlane",
            Specialization::ChakrabartiJagannathan { .. } => "ChakrabartiJagannathan",
            Specialization::Classical => "Classical",
        }
    }

    pub fn raw(&self) -> RawParams {
        match *self {
            Specialization::ArikCoon { q } => RawParams::new(1.0, q, 1.0, 1.0, 1.0),
            Specialization::BiedenharnMacfarlane { q, alpha, gamma } => {
                RawParams::new(q.powf(alpha), q.powf(gamma), 1.0, 1.0, 1.0)
            }
            Specialization::ChakrabartiJagannathan { p, q } => RawParams::new(p, q, 1.0, 1.0, 1.0),
            Specialization::Classical => RawParams::default(),
        }
    }

    pub fn params(&self) -> Result<DeformationParams> {
        validate(self.raw(), true)
    }
}

/// Residuals of some quantity along a path approaching an undeformed point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub residuals: Vec<f64>,
    pub monotone: bool,
}

impl ConvergenceReport {
    /// Monotone means each residual is no larger than its predecessor, with
    /// residuals at or below `floor` treated as zero.
    pub fn from_residuals(residuals: Vec<f64>, floor: f64) -> Self {
        let monotone = residuals
            .windows(2)
            .all(|w| w[1] <= w[0] || w[1] <= floor);
        ConvergenceReport { residuals, monotone }
    }

    pub fn last(&self) -> Option<f64> {
        self.residuals.last().copied()
    }
}

/// `|[x] - x alpha gamma / l|` along a path of parameters approaching `p = q = 1`.
pub fn classical_limit_check(x: f64, path: &[DeformationParams]) -> ConvergenceReport {
    let residuals = path
        .iter()
        .map(|params| (params.bracket(x) - params.classical_value(x)).abs())
        .collect();
    ConvergenceReport::from_residuals(residuals, ABS_FLOOR)
}

/// The property-test grid: p, q over five bases, alpha and gamma over
/// `{±1, ±2, 0.5}`, and `l` chosen so the step is 1 or 2.
pub fn standard_grid() -> Vec<DeformationParams> {
    const BASES: [f64; 5] = [0.5, 0.8, 1.0, 1.2, 2.0];
    const EXPONENTS: [f64; 5] = [1.0, -1.0, 2.0, -2.0, 0.5];
    let mut out = Vec::new();
    for &p in &BASES {
        for &q in &BASES {
            for &alpha in &EXPONENTS {
                for &gamma in &EXPONENTS {
                    for step in [1.0, 2.0] {
                        let l = step * alpha * gamma;
                        if let Ok(params) = DeformationParams::ladder(p, q, alpha, gamma, l) {
                            out.push(params);
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_formula(x: f64, raw: RawParams) -> f64 {
        let RawParams { p, q, alpha, gamma, l } = raw;
        (p.powf(-alpha * x) - q.powf(gamma * x)) / (p.powf(-l / gamma) - q.powf(l / alpha))
    }

    #[test]
    fn derived_fields() {
        let params = DeformationParams::new(0.8, 1.2, 1.0, 1.0, 1.0).unwrap();
        assert!(close(params.big_p(), 1.25, 1e-15));
        assert!(close(params.big_q(), 1.2, 1e-15));
        assert!(close(params.denom(), 0.05, 1e-12));
        assert_eq!(params.step(), 1.0);

        let params = DeformationParams::ladder(1.0, 0.5, 2.0, 1.0, 2.0).unwrap();
        assert_eq!(params.step(), 1.0);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            DeformationParams::ladder(0.8, 1.2, 1.0, 1.0, 0.5),
            Err(Error::NonIntegerStep { .. })
        ));
        assert!(matches!(
            DeformationParams::new(0.0, 1.2, 1.0, 1.0, 1.0),
            Err(Error::NonPositiveBase { name: "p", .. })
        ));
        assert!(matches!(
            DeformationParams::new(1.0, -1.0, 1.0, 1.0, 1.0),
            Err(Error::NonPositiveBase { name: "q", .. })
        ));
        assert!(matches!(
            DeformationParams::new(1.0, 1.0, 1.0, 0.0, 1.0),
            Err(Error::ZeroExponent { name: "gamma" })
        ));
        // negative step is not a ladder
        assert!(DeformationParams::ladder(0.8, 1.2, -1.0, 1.0, 1.0).is_err());
        // non-integer step is fine outside ladder mode
        assert_eq!(DeformationParams::new(0.8, 1.2, 1.0, 1.0, 0.5).unwrap().step(), 0.5);
    }

    #[test]
    fn step_snaps_to_integer() {
        let params = DeformationParams::ladder(0.8, 1.2, 3.0, 1.0, 6.0 + 1e-13).unwrap();
        assert_eq!(params.step(), 2.0);
    }

    #[test]
    fn bracket_examples() {
        let params = DeformationParams::new(0.8, 1.2, 1.0, 1.0, 1.0).unwrap();
        assert!(close(params.bracket(2.0), 2.45, 1e-13));
        assert_eq!(params.bracket(0.0), 0.0);
        assert!(close(params.bracket(1.0), 1.0, 1e-15));

        // P = 2, Q = 1: [x] = 2^x - 1
        let params = DeformationParams::new(0.5, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(close(params.bracket(3.0), 7.0, 1e-14));
        assert!(close(params.bracket(-1.0), -0.5, 1e-14));
    }

    #[test]
    fn factorial_examples() {
        let params = DeformationParams::new(0.8, 1.2, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(params.bracket_factorial(0), 1.0);
        assert!(close(params.bracket_factorial(2), 2.45, 1e-13));
        let params = DeformationParams::new(0.5, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(close(params.bracket_factorial(3), 21.0, 1e-14));
    }

    #[test]
    fn bracket_matches_direct_formula_on_grid() {
        for params in standard_grid() {
            if params.is_degenerate() || params.denom().abs() < 1e-3 {
                continue;
            }
            for x in [-3.0, -0.5, 0.0, 0.7, 1.0, 2.0, 5.5] {
                let expected = direct_formula(x, params.raw());
                assert!(
                    close(params.bracket(x), expected, 1e-11),
                    "{:?} x={x}: {} vs {expected}",
                    params.raw(),
                    params.bracket(x)
                );
            }
        }
    }

    #[test]
    fn two_parameter_specialization() {
        // alpha = gamma = l = 1 reduces to (p^-x - q^x)/(p^-1 - q)
        for (p, q) in [(0.8, 1.2), (0.5, 1.0), (2.0, 0.9)] {
            let params = Specialization::ChakrabartiJagannathan { p, q }.params().unwrap();
            for x in [0.0, 1.0, 2.5, 4.0] {
                let eq2 = (p.powf(-x) - q.powf(x)) / (1.0 / p - q);
                assert!(close(params.bracket(x), eq2, 1e-12));
            }
        }
    }

    #[test]
    fn specializations() {
        let ac = Specialization::ArikCoon { q: 0.7 }.raw();
        assert_eq!((ac.p, ac.q, ac.alpha, ac.gamma, ac.l), (1.0, 0.7, 1.0, 1.0, 1.0));
        // symmetric q-number (q^-x - q^x)/(q^-1 - q)
        let bm = Specialization::BiedenharnMacfarlane { q: 0.9, alpha: 1.0, gamma: 1.0 }
            .params()
            .unwrap();
        let x = 3.0;
        let qnum = (0.9f64.powf(-x) - 0.9f64.powf(x)) / (1.0 / 0.9 - 0.9);
        assert!(close(bm.bracket(x), qnum, 1e-12));
        let cl = Specialization::Classical.params().unwrap();
        assert!(close(cl.bracket(4.0), 4.0, 1e-15));
        assert_eq!(Specialization::Classical.tag(), "Classical");
    }

    #[test]
    fn degenerate_branch_continuity() {
        // Walk |P - Q| across the threshold and compare both branches.
        for gap in [1e-7, 3e-9, 1.1e-9, 0.9e-9, 1e-10] {
            let q = 1.3;
            let p = 1.0 / (q + gap);
            let params = DeformationParams::new(p, q, 1.0, 1.0, 1.0).unwrap();
            for x in [0.5, 2.0, 3.0, 7.0] {
                assert!(close(params.bracket_direct(x), params.bracket_limit(x), 1e-6));
            }
        }
        let params = DeformationParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(params.is_degenerate());
        assert_eq!(params.bracket(3.0), 3.0);
    }

    #[test]
    fn classical_limit_paths() {
        let path: Vec<_> = (2..=8)
            .map(|k| {
                let p = 1.0 + 10f64.powi(-k);
                DeformationParams::new(p, p, 1.0, 1.0, 1.0).unwrap()
            })
            .collect();
        let report = classical_limit_check(4.0, &path);
        assert!(report.monotone, "{:?}", report.residuals);
        assert!(report.last().unwrap() < 1e-12);

        let path: Vec<_> = (2..=8)
            .map(|k| {
                let p = 1.0 + 10f64.powi(-k);
                DeformationParams::new(p, p, 2.0, 1.0, 2.0).unwrap()
            })
            .collect();
        let report = classical_limit_check(4.0, &path);
        assert!(report.monotone, "{:?}", report.residuals);
        assert!((path[0].classical_value(4.0) - 4.0).abs() < 1e-15);

        let report = classical_limit_check(0.0, &path);
        assert!(report.residuals.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn grid_size() {
        // 25 (p,q) x 25 (alpha,gamma) x 2 steps
        assert_eq!(standard_grid().len(), 1250);
    }
}
