//! JSON-ready summaries.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{ComplexVector, Tolerance};
use crate::tps::{SchmidtReport, Tps};

/// Everything the tps module can say about one state in one structure.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schmidt: SchmidtReport,
    pub product: bool,
    pub tps_shape: (usize, usize),
    pub compatibility: bool,
    pub residuals: BTreeMap<String, f64>,
}

pub fn analyze(w: &ComplexVector, tps: &Tps, tol: &Tolerance) -> Result<AnalysisReport> {
    let schmidt = tps.schmidt(w, tol)?;
    let coeffs = tps.coefficient_matrix(w)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("schmidt_reconstruction".to_owned(), (schmidt.reconstruct() - &coeffs).norm());
    residuals.insert(
        "state_reconstruction".to_owned(),
        (tps.compose(&coeffs)? - w).norm(),
    );
    residuals.insert(
        "discarded_weight".to_owned(),
        (coeffs.norm_squared() - schmidt.norm_squared()).abs().sqrt(),
    );
    Ok(AnalysisReport {
        product: schmidt.rank == 1,
        tps_shape: tps.shape(),
        compatibility: tps.is_inner_product_compatible(tol),
        residuals,
        schmidt,
    })
}

/// What a single check compared.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Residual { value: f64, bound: f64 },
    Count { observed: usize, expected: usize },
    Verdict { observed: bool, expected: bool },
    /// Recorded but not judged.
    Info { value: serde_json::Value },
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Residual { value, bound } => value <= bound,
            Outcome::Count { observed, expected } => observed == expected,
            Outcome::Verdict { observed, expected } => observed == expected,
            Outcome::Info { .. } => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(flatten)]
    pub outcome: Outcome,
}

/// Outcome of one of the worked examples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleReport {
    pub example: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub artifacts: BTreeMap<String, serde_json::Value>,
}

impl ExampleReport {
    pub fn new(example: &str) -> Self {
        ExampleReport {
            example: example.to_owned(),
            passed: true,
            checks: Vec::new(),
            artifacts: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, name: &str, outcome: Outcome) {
        let passed = outcome.passed();
        self.passed &= passed;
        self.checks.push(Check {
            name: name.to_owned(),
            passed,
            outcome,
        });
    }

    pub fn residual(&mut self, name: &str, value: f64, bound: f64) {
        self.record(name, Outcome::Residual { value, bound });
    }

    pub fn count(&mut self, name: &str, observed: usize, expected: usize) {
        self.record(name, Outcome::Count { observed, expected });
    }

    pub fn verdict(&mut self, name: &str, observed: bool, expected: bool) {
        self.record(name, Outcome::Verdict { observed, expected });
    }

    pub fn info(&mut self, name: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("serializable");
        self.record(name, Outcome::Info { value });
    }

    pub fn artifact(&mut self, name: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("serializable");
        self.artifacts.insert(name.to_owned(), value);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn analysis_of_a_product_state() {
        let tol = Tolerance::default();
        let w = ComplexVector::from_vec(vec![c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)]);
        let r = analyze(&w, &Tps::god_given(2, 2), &tol).unwrap();
        assert!(r.product && r.compatibility);
        assert_eq!(r.tps_shape, (2, 2));
        assert!((r.schmidt.coefficients[0] - 5.0).abs() < 1e-12);
        assert!(r.residuals.values().all(|&v| v < 1e-12));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["schmidt"]["rank"], 1);
    }

    #[test]
    fn report_tracks_failures() {
        let mut r = ExampleReport::new("demo");
        r.residual("small", 1e-14, 1e-12);
        r.count("rank", 2, 2);
        r.info("note", "anything");
        assert!(r.passed);
        r.verdict("flag", true, false);
        assert!(!r.passed);
        assert_eq!(r.failures().len(), 1);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["checks"][0]["kind"], "residual");
        assert_eq!(json["checks"][3]["expected"], false);
    }
}
