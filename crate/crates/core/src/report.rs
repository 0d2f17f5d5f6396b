use std::fmt;

use serde::{Deserialize, Serialize};

/// One violated law together with the first witness found for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawFailure {
    pub law: String,
    pub witness: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl LawFailure {
    pub fn new(law: impl Into<String>, witness: Vec<String>) -> Self {
        LawFailure {
            law: law.into(),
            witness,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Pass/fail result of a law check. `ok` holds exactly when `failures` is
/// empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub failures: Vec<LawFailure>,
}

impl ValidationReport {
    pub fn from_failures(failures: Vec<LawFailure>) -> Self {
        ValidationReport {
            ok: failures.is_empty(),
            failures,
        }
    }

    pub fn pass() -> Self {
        Self::from_failures(Vec::new())
    }

    pub fn failure(&self, law: &str) -> Option<&LawFailure> {
        self.failures.iter().find(|f| f.law == law)
    }

    pub fn merge(mut self, other: ValidationReport) -> Self {
        self.failures.extend(other.failures);
        self.ok = self.failures.is_empty();
        self
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        for (i, fail) in self.failures.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} at ({})", fail.law, fail.witness.join(", "))?;
            if let Some(d) = &fail.detail {
                write!(f, ": {d}")?;
            }
        }
        Ok(())
    }
}
