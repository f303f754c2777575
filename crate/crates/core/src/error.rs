use thiserror::Error;

use crate::fock::Variant;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("base {name} = {value} must be strictly positive")]
    NonPositiveBase { name: &'static str, value: f64 },

    #[error("exponent {name} must be nonzero")]
    ZeroExponent { name: &'static str },

    #[error("ladder step l/(alpha*gamma) = {step} is not a positive integer")]
    NonIntegerStep { step: f64 },

    #[error("structure value {value} at argument {at} is negative; parameters lie outside the positivity region")]
    NegativeStructureValue { at: f64, value: f64 },

    #[error("operation {op} is not defined on the {variant:?} representation")]
    WrongVariant { op: &'static str, variant: Variant },

    #[error("representations use different deformation parameters or variants")]
    ParamMismatch,

    #[error("truncation dimension must be at least 1")]
    EmptyDimension,

    #[error("epsilon must be a single monomial, got {terms} terms")]
    NonMonomialEpsilon { terms: usize },

    #[error("pole at {pole} lies on or next to the integration contour")]
    PoleOnContour { pole: num_complex::Complex64 },

    #[error("contour quadrature needs at least 64 points, got {points}")]
    TooFewPoints { points: usize },

    #[error("infinite product base r = {r} is not contractive (need 0 < |r| < 1)")]
    BaseNotContractive { r: f64 },

    #[error("denominator product (z; r) vanishes at z = {z}")]
    DenominatorZero { z: num_complex::Complex64 },

    #[error("first insertion point z1 must be nonzero")]
    OriginArgument,
}

impl Error {
    /// Short machine-readable name, used in report verdicts.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveBase { .. } => "NonPositiveBase",
            Error::ZeroExponent { .. } => "ZeroExponent",
            Error::NonIntegerStep { .. } => "NonIntegerStep",
            Error::NegativeStructureValue { .. } => "NegativeStructureValue",
            Error::WrongVariant { .. } => "WrongVariant",
            Error::ParamMismatch => "ParamMismatch",
            Error::EmptyDimension => "EmptyDimension",
            Error::NonMonomialEpsilon { .. } => "NonMonomialEpsilon",
            Error::PoleOnContour { .. } => "PoleOnContour",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::BaseNotContractive { .. } => "BaseNotContractive",
            Error::DenominatorZero { .. } => "DenominatorZero",
            Error::OriginArgument => "OriginArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
