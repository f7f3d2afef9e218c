//! Residual reports for structure checks.

use std::fmt;

/// A named collection of residuals from one family of checks.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub name: String,
    pub entries: Vec<(String, f64)>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), entries: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, residual: f64) {
        self.entries.push((label.into(), residual));
    }

    pub fn merge(&mut self, other: Report) {
        for (label, r) in other.entries {
            self.entries.push((format!("{}/{}", other.name, label), r));
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().fold(0.0, |a, (_, r)| a.max(*r))
    }

    pub fn worst(&self) -> Option<&(String, f64)> {
        self.entries
            .iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: max residual {:.3e}", self.name, self.max_residual())?;
        for (label, r) in &self.entries {
            writeln!(f, "  {:<48} {:.3e}", label, r)?;
        }
        Ok(())
    }
}
