//! Truncated Fock representations of the deformed oscillator variants.
//!
//! Basis vector `i` carries the occupation `i * s`, so the matrices stay
//! `dim x dim` whatever the ladder step. The creator maps the top basis state
//! to zero; identities are only asserted on the interior (see
//! [`FockRep::interior`]).

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::DeformationParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Variant {
    /// Generalized Daskaloyannis.
    GD,
    /// Generalized Chakrabarti-Jagannathan.
    GChJ,
    /// GChJ with shifted number spectrum `n + nu0`, carrying `C1 != 0`.
    GChJShifted,
    /// Generalized Hong Yan with shifted spectrum `n - nu0`, carrying `C2 != 0`.
    GHYShifted,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::GD => "GD",
            Variant::GChJ => "GChJ",
            Variant::GChJShifted => "GChJ_shifted",
            Variant::GHYShifted => "GHY_shifted",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockRep {
    pub variant: Variant,
    pub dim: usize,
    pub nu0: f64,
    pub params: DeformationParams,
    /// Annihilator `a`.
    pub a: DMatrix<f64>,
    /// Creator `a+`.
    pub adag: DMatrix<f64>,
    /// Number operator `N` (diagonal).
    pub nop: DMatrix<f64>,
}

/// `(variant, dim, nu0)` as carried by residual reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepDescriptor {
    pub variant: Variant,
    pub dim: usize,
    pub nu0: f64,
}

impl FockRep {
    pub fn descriptor(&self) -> RepDescriptor {
        RepDescriptor { variant: self.variant, dim: self.dim, nu0: self.nu0 }
    }

    pub fn step(&self) -> f64 {
        self.params.step()
    }

    /// Eigenvalue of `N` on basis vector `i`.
    pub fn number(&self, i: usize) -> f64 {
        self.nop[(i, i)]
    }

    /// Diagonal of `N`.
    pub fn numbers(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.number(i)).collect()
    }

    /// Diagonal matrix `f(N)`, defined spectrally.
    pub fn func_of_n(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim,
            (0..self.dim).map(|i| f(self.number(i))),
        ))
    }

    /// Basis indices on which identities are checked. `top_margin` ladder
    /// steps are dropped at the top; the GHY-shifted variant also drops index
    /// 0, whose annihilation amplitude points below the truncation.
    pub fn interior(&self, top_margin: usize) -> Vec<usize> {
        let start = usize::from(self.variant == Variant::GHYShifted);
        let end = self.dim.saturating_sub(top_margin);
        (start..end).collect()
    }

    pub fn identity(&self) -> DMatrix<f64> {
        DMatrix::identity(self.dim, self.dim)
    }
}

fn ladder_rep(
    variant: Variant,
    params: &DeformationParams,
    dim: usize,
    nu0: f64,
    number: impl Fn(usize) -> f64,
    radicand: impl Fn(usize) -> (f64, f64),
) -> Result<FockRep> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    if !params.is_ladder() {
        return Err(Error::NonIntegerStep { step: params.step() });
    }
    let mut a = DMatrix::zeros(dim, dim);
    for i in 1..dim {
        let (at, value) = radicand(i);
        // tiny negative values are rounding noise around an exact zero
        if value < -1e-12 * value.abs().max(1.0) {
            return Err(Error::NegativeStructureValue { at, value });
        }
        a[(i - 1, i)] = value.max(0.0).sqrt();
    }
    let adag = a.transpose();
    let nop = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(dim, (0..dim).map(number)));
    Ok(FockRep { variant, dim, nu0, params: *params, a, adag, nop })
}

/// Generalized Chakrabarti-Jagannathan Fock representation:
/// `a|n> = sqrt([n]) |n - s>`, `a+|n> = sqrt([n + s]) |n + s>`, `N|n> = n|n>`.
pub fn build_gchj(params: &DeformationParams, dim: usize) -> Result<FockRep> {
    let s = params.step();
    ladder_rep(
        Variant::GChJ,
        params,
        dim,
        0.0,
        |i| i as f64 * s,
        |i| {
            let x = i as f64 * s;
            (x, params.bracket(x))
        },
    )
}

/// Daskaloyannis form `a+a = [N]`, `aa+ = [N + s]`. Its canonical Fock
/// representation has the same matrices as [`build_gchj`].
pub fn build_gd(params: &DeformationParams, dim: usize) -> Result<FockRep> {
    let mut rep = build_gchj(params, dim)?;
    rep.variant = Variant::GD;
    Ok(rep)
}

/// Shifted GChJ representation: amplitudes scaled by `q^(gamma nu0 / 2)`,
/// `N|n> = (n + nu0)|n>`.
pub fn build_gchj_shifted(params: &DeformationParams, dim: usize, nu0: f64) -> Result<FockRep> {
    let s = params.step();
    let scale = params.q_pow(nu0);
    ladder_rep(
        Variant::GChJShifted,
        params,
        dim,
        nu0,
        |i| i as f64 * s + nu0,
        |i| {
            let x = i as f64 * s;
            (x, scale * params.bracket(x))
        },
    )
}

/// Shifted GHY representation:
/// `a|n> = sqrt([n - nu0] + [nu0]) |n - s>`, `N|n> = (n - nu0)|n>`.
pub fn build_ghy_shifted(params: &DeformationParams, dim: usize, nu0: f64) -> Result<FockRep> {
    let s = params.step();
    let shift = params.bracket(nu0);
    ladder_rep(
        Variant::GHYShifted,
        params,
        dim,
        nu0,
        |i| i as f64 * s - nu0,
        |i| {
            let x = i as f64 * s - nu0;
            (x, params.bracket(x) + shift)
        },
    )
}

/// Build any variant; `nu0` is ignored by the unshifted ones.
pub fn build(variant: Variant, params: &DeformationParams, dim: usize, nu0: f64) -> Result<FockRep> {
    match variant {
        Variant::GD => build_gd(params, dim),
        Variant::GChJ => build_gchj(params, dim),
        Variant::GChJShifted => build_gchj_shifted(params, dim, nu0),
        Variant::GHYShifted => build_ghy_shifted(params, dim, nu0),
    }
}
