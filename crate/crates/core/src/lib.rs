//! Verification workbench for the unified (p,q;alpha,gamma,l)-deformed
//! oscillator algebra, its su(2)/su(1,1) realizations and the deformed
//! two-dimensional CFT built on it.

pub mod error;
pub mod fock;
pub mod linalg;
pub mod params;
pub mod relations;
pub mod report;
pub mod su;
pub mod laurent;
pub mod qcalculus;
pub mod ope;
pub mod correlators;
pub mod suites;
pub mod document;

pub use error::{Error, Result};
pub use fock::{FockRep, Variant};
pub use params::{DeformationParams, RawParams, Specialization};
pub use relations::RelationId;
pub use report::{ResidualReport, Verdict};
