use serde::{Deserialize, Serialize};

/// A case whose observed verdict contradicts the claim under test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub case: usize,
    /// `label = word` pairs in word text format.
    pub inputs: Vec<String>,
    pub claim: String,
    pub observed: String,
    pub error_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub passes: usize,
    pub findings: Vec<Finding>,
    /// Sum of the per-case bounds of all probabilistic passes.
    pub error_bound_total: f64,
    pub millis: u64,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    /// The same report with the wall time zeroed, for determinism checks.
    pub fn without_timing(&self) -> Report {
        Report { millis: 0, ..self.clone() }
    }
}
