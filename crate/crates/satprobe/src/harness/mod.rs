//! End-to-end evaluation pipeline: prompt construction, prediction backends,
//! response parsing, witness validation, and cross-representation agreement.
//!
//! The pipeline is backend-agnostic: scripted clients (oracle, fixed-bias,
//! scheduled-timeout) drive tests and CI, while [`backend::HttpBackend`]
//! talks to a live endpoint over the generic JSON wire format. With the
//! oracle client every metric attains its perfect value on a verified pair
//! set — the pipeline introduces no error of its own.

mod agreement;
mod backend;
mod parse;
mod prompt;
mod run;

pub use agreement::{cross_representation_agreement, paired_outcomes_from_records, AgreementReport};
pub use backend::{
    AlwaysSatClient, AlwaysUnsatClient, Backend, BackendConfig, BackendError, EvalTask,
    HttpBackend, OracleClient, PeriodicTimeoutClient,
};
pub use parse::parse_response;
pub use prompt::{render_instance_body, PromptTemplate, TemplateSet};
pub use run::{completion_rate, run_evaluation, validate_witness, RunOptions};

use crate::cnf::CnfFormula;
use crate::metrics::{Label, MetricsError};
use crate::reductions::{PackingInstance, PackingWitness, VertexCoverInstance};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("template for {expected} cannot render a {got} instance")]
    RepresentationMismatch {
        expected: Representation,
        got: Representation,
    },
    #[error("template must contain the {{instance}} placeholder exactly once, found {count}")]
    BadTemplate { count: usize },
    #[error("no instances supplied")]
    EmptyInput,
    #[error(
        "record sets cover different instance ids (missing from first: {missing_from_first:?}; \
         missing from second: {missing_from_second:?})"
    )]
    InstanceIdMismatch {
        missing_from_first: Vec<String>,
        missing_from_second: Vec<String>,
    },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// The three instance representations a backend can be asked about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    Cnf,
    VertexCover,
    Packing,
}

impl std::fmt::Display for Representation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Representation::Cnf => write!(f, "cnf"),
            Representation::VertexCover => write!(f, "vertex-cover"),
            Representation::Packing => write!(f, "packing"),
        }
    }
}

/// A parsed decision. CNF prompts answer in SAT vocabulary, reduction
/// prompts in YES/NO; both normalize to labels through [`Decision::as_label`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Sat,
    Unsat,
    Yes,
    No,
    /// No parseable decision: refusal, timeout, or garbage.
    Abstain,
}

impl Decision {
    pub fn as_label(self) -> Option<Label> {
        match self {
            Decision::Sat | Decision::Yes => Some(Label::Sat),
            Decision::Unsat | Decision::No => Some(Label::Unsat),
            Decision::Abstain => None,
        }
    }

    pub fn is_affirmative(self) -> bool {
        matches!(self, Decision::Sat | Decision::Yes)
    }
}

/// A witness extracted from a backend response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum WitnessPayload {
    /// Possibly partial variable assignment; unmentioned variables default
    /// to false during validation.
    Assignment(BTreeMap<u32, bool>),
    /// Vertex ids claimed to form a cover within budget.
    Cover(Vec<usize>),
    Packing(PackingWitness),
}

/// A parsed backend response.
///
/// Self-reported branch/conflict counts are recorded for comparison plots
/// but never enter correctness metrics. A witness is retained only for
/// affirmative decisions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub decision: Decision,
    pub branches: Option<u64>,
    pub conflicts: Option<u64>,
    pub witness: Option<WitnessPayload>,
    /// The unmodified response text (or the transport error that replaced it).
    pub raw_text: String,
    pub latency: Duration,
}

/// A labeled instance ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalInstance {
    pub id: String,
    pub label: Label,
    pub pair_id: Option<String>,
    pub n: u32,
    pub alpha: f64,
    pub body: InstanceBody,
}

/// The instance payload in one of the three representations.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceBody {
    Cnf(CnfFormula),
    VertexCover(VertexCoverInstance),
    Packing(PackingInstance),
}

impl InstanceBody {
    pub fn representation(&self) -> Representation {
        match self {
            InstanceBody::Cnf(_) => Representation::Cnf,
            InstanceBody::VertexCover(_) => Representation::VertexCover,
            InstanceBody::Packing(_) => Representation::Packing,
        }
    }
}

/// One evaluated instance: the prediction, its validated witness, and enough
/// metadata to score without the source manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub instance_id: String,
    /// Backend identifier the prediction came from.
    pub model: String,
    pub representation: Representation,
    pub n: u32,
    pub alpha: f64,
    pub true_label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_id: Option<String>,
    pub prediction: Prediction,
    /// Present iff the prediction carried a witness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_valid: Option<bool>,
    /// Why a witness was rejected, when it was.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_reason: Option<String>,
}

impl EvaluationRecord {
    /// The predicted label, `None` on abstention.
    pub fn predicted_label(&self) -> Option<Label> {
        self.prediction.decision.as_label()
    }

    pub fn is_correct(&self) -> bool {
        self.predicted_label() == Some(self.true_label)
    }
}
