use serde::Serialize;

/// One offending item from a failed check, rendered printable.
#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub label: String,
    pub value: String,
}

/// Outcome of a verification pass: the status is pass exactly when the
/// residual list is empty.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub residuals: Vec<Residual>,
}

impl CheckReport {
    pub fn new(name: &str, residuals: Vec<Residual>) -> Self {
        CheckReport { name: name.to_string(), pass: residuals.is_empty(), residuals }
    }

    pub fn pass(name: &str) -> Self {
        Self::new(name, Vec::new())
    }

    pub fn residual(label: impl Into<String>, value: impl ToString) -> Residual {
        Residual { label: label.into(), value: value.to_string() }
    }

    /// Merges sub-reports under a new name.
    pub fn combine(name: &str, parts: Vec<CheckReport>) -> Self {
        let mut residuals = Vec::new();
        for p in parts {
            for r in p.residuals {
                residuals.push(Residual { label: format!("{}: {}", p.name, r.label), value: r.value });
            }
        }
        Self::new(name, residuals)
    }
}
