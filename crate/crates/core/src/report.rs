//! Per-claim verification records.

use serde::{Deserialize, Serialize};

use crate::frame::Frame;
use crate::linalg::{Field, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisStatus {
    Met,
    Violated,
    Skipped,
}

/// Coordinates of a witness vector: plain numbers for real frames, `[re, im]`
/// pairs for complex ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coords {
    Real(Vec<f64>),
    Complex(Vec<[f64; 2]>),
}

impl Coords {
    pub fn from_vector(v: &Vector, field: Field) -> Self {
        match field {
            Field::Real => Coords::Real(v.iter().map(|z| z.re).collect()),
            Field::Complex => Coords::Complex(v.iter().map(|z| [z.re, z.im]).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub coords: Coords,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// Stable identifier such as `sec3.jx-lower`.
    pub claim: String,
    pub frame: String,
    pub hypothesis: HypothesisStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// Signed slack of the claimed inequality; negative means violated.
    pub margin: Option<f64>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subset: Vec<usize>,
    pub samples: usize,
    pub seed: Option<u64>,
    pub pass: bool,
}

impl TheoremReport {
    /// A claim whose hypotheses hold. `margin >= -tolerance` decides `pass`.
    pub fn evaluated(claim: &str, frame: &Frame, lhs: f64, rhs: f64, margin: f64, tolerance: f64) -> Self {
        TheoremReport {
            claim: claim.to_string(),
            frame: frame.descriptor(),
            hypothesis: HypothesisStatus::Met,
            reason: None,
            lhs: Some(lhs),
            rhs: Some(rhs),
            margin: Some(margin),
            tolerance,
            witness: Vec::new(),
            subset: Vec::new(),
            samples: 0,
            seed: None,
            pass: margin >= -tolerance,
        }
    }

    /// Claim not applicable to this frame. Never counts as a failure.
    pub fn violated(claim: &str, frame: &Frame, reason: impl Into<String>) -> Self {
        Self::not_run(claim, frame, HypothesisStatus::Violated, reason.into())
    }

    /// Claim not run (budget or cap). Never counts as a failure.
    pub fn skipped(claim: &str, frame: &Frame, reason: impl Into<String>) -> Self {
        Self::not_run(claim, frame, HypothesisStatus::Skipped, reason.into())
    }

    fn not_run(claim: &str, frame: &Frame, status: HypothesisStatus, reason: String) -> Self {
        TheoremReport {
            claim: claim.to_string(),
            frame: frame.descriptor(),
            hypothesis: status,
            reason: Some(reason),
            lhs: None,
            rhs: None,
            margin: None,
            tolerance: 0.0,
            witness: Vec::new(),
            subset: Vec::new(),
            samples: 0,
            seed: None,
            pass: true,
        }
    }

    pub fn with_samples(mut self, samples: usize, seed: u64) -> Self {
        self.samples = samples;
        self.seed = Some(seed);
        self
    }

    pub fn with_witness(mut self, name: &str, v: &Vector, field: Field) -> Self {
        self.witness.push(Witness {
            name: name.to_string(),
            coords: Coords::from_vector(v, field),
        });
        self
    }

    pub fn with_subset(mut self, subset: Vec<usize>) -> Self {
        self.subset = subset;
        self
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    /// Forces the verdict for claims that are not a single inequality.
    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn is_failure(&self) -> bool {
        self.hypothesis == HypothesisStatus::Met && !self.pass
    }

    pub fn status_label(&self) -> &'static str {
        match (self.hypothesis, self.pass) {
            (HypothesisStatus::Met, true) => "pass",
            (HypothesisStatus::Met, false) => "FAIL",
            (HypothesisStatus::Violated, _) => "n/a",
            (HypothesisStatus::Skipped, _) => "skipped",
        }
    }
}
