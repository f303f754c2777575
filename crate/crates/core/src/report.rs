//! Residual reports shared by every check in the crate.

use serde::{Serialize, Serializer};

use crate::fock::RepDescriptor;
use crate::params::RawParams;

/// Outcome class of a single check.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// Empty interior: nothing to check.
    Vacuous,
    /// Documentation check: the residual is recorded but never gates.
    Documented,
    /// A precondition failed; the payload is the error kind.
    Rejected(String),
}

impl Verdict {
    pub fn label(&self) -> String {
        match self {
            Verdict::Pass => "pass".into(),
            Verdict::Fail => "fail".into(),
            Verdict::Vacuous => "vacuous".into(),
            Verdict::Documented => "documented".into(),
            Verdict::Rejected(kind) => format!("rejected: {kind}"),
        }
    }

    /// Only `Fail` counts against the exit code.
    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::Fail)
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// One checked identity at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub relation: String,
    pub params: Option<RawParams>,
    pub rep: Option<RepDescriptor>,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub note: String,
}

impl ResidualReport {
    /// Gated check: pass iff `residual <= tolerance`. `None` means the
    /// interior was empty.
    pub fn gated(relation: impl Into<String>, residual: Option<f64>, tolerance: f64) -> Self {
        let (residual, verdict, note) = match residual {
            None => (0.0, Verdict::Vacuous, "vacuous".to_string()),
            Some(r) if r <= tolerance => (r, Verdict::Pass, String::new()),
            Some(r) => (r, Verdict::Fail, String::new()),
        };
        ResidualReport {
            relation: relation.into(),
            params: None,
            rep: None,
            residual,
            tolerance,
            verdict,
            note,
        }
    }

    /// Documentation check: residual recorded, verdict `Documented`.
    pub fn documented(relation: impl Into<String>, residual: Option<f64>, note: impl Into<String>) -> Self {
        let (residual, verdict) = match residual {
            None => (0.0, Verdict::Vacuous),
            Some(r) => (r, Verdict::Documented),
        };
        ResidualReport {
            relation: relation.into(),
            params: None,
            rep: None,
            residual,
            tolerance: f64::NAN,
            verdict,
            note: note.into(),
        }
    }

    /// Precondition failure.
    pub fn rejected(relation: impl Into<String>, kind: &str, note: impl Into<String>) -> Self {
        ResidualReport {
            relation: relation.into(),
            params: None,
            rep: None,
            residual: f64::NAN,
            tolerance: f64::NAN,
            verdict: Verdict::Rejected(kind.to_string()),
            note: note.into(),
        }
    }

    pub fn with_params(mut self, params: RawParams) -> Self {
        self.params = Some(params);
        self
    }

    pub fn with_rep(mut self, rep: RepDescriptor) -> Self {
        self.rep = Some(rep);
        self
    }

    /// Append to the note, separated by "; ".
    pub fn with_note(mut self, note: impl AsRef<str>) -> Self {
        let note = note.as_ref();
        if !note.is_empty() {
            if !self.note.is_empty() {
                self.note.push_str("; ");
            }
            self.note.push_str(note);
        }
        self
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::Vacuous)
    }
}
