//! Request/response layer shared by the CLI, the HTTP service and the C ABI,
//! so every front end produces the same bytes for the same input.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::evaluator::{evaluate, PerformanceReport, PropulsionSystem, Violation};
use crate::model::requirements::DEFAULT_THRUST_RATIO;
use crate::model::RequirementsInput;
use crate::optimizer::{optimize, DesignResult, OptimizerConfig};
use crate::stats::StatModels;

fn default_thrust_ratio() -> f64 {
    DEFAULT_THRUST_RATIO
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct EvaluateRequest {
    pub system: PropulsionSystem,
    pub hover_thrust_n: f64,
    #[serde(default = "default_thrust_ratio")]
    pub thrust_ratio: f64,
}

/// Catalog, fitted models and optimizer settings loaded once and shared
/// read-only by every request.
#[derive(Debug, Clone)]
pub struct Engine {
    pub catalog: Catalog,
    pub models: StatModels,
    pub config: OptimizerConfig,
}

impl Engine {
    /// Uses `models` when given, otherwise fits them from the catalog.
    pub fn new(catalog: Catalog, models: Option<StatModels>) -> Result<Self> {
        let models = match models {
            Some(m) => m,
            None => StatModels::fit(&catalog)?,
        };
        Ok(Self {
            catalog,
            models,
            config: OptimizerConfig::default(),
        })
    }

    pub fn bundled() -> Result<Self> {
        Self::new(Catalog::bundled()?, None)
    }

    pub fn optimize(&self, input: &RequirementsInput) -> Result<DesignResult> {
        let req = input.resolve()?;
        optimize(&req, &self.catalog, &self.models, &self.config)
    }

    pub fn evaluate(&self, request: &EvaluateRequest) -> Result<PerformanceReport> {
        if !(request.thrust_ratio > 0.0 && request.thrust_ratio < 1.0) {
            return Err(Error::InvalidRequirements(format!(
                "thrust_ratio {} must lie in (0, 1)",
                request.thrust_ratio
            )));
        }
        if !(request.hover_thrust_n > 0.0) {
            return Err(Error::InvalidRequirements("hover_thrust_n must be positive".into()));
        }
        request
            .system
            .validate()
            .map_err(|e| Error::InvalidRequirements(e.to_string()))?;
        evaluate(
            &request.system,
            request.hover_thrust_n,
            request.hover_thrust_n / request.thrust_ratio,
            self.models.k_c,
            Some(&self.models),
        )
    }

    pub fn optimize_json(&self, body: &str) -> std::result::Result<String, Failure> {
        let input: RequirementsInput = serde_json::from_str(body).map_err(Failure::bad_request)?;
        self.optimize(&input).map(|r| to_json(&r)).map_err(Failure::from)
    }

    pub fn evaluate_json(&self, body: &str) -> std::result::Result<String, Failure> {
        let request: EvaluateRequest = serde_json::from_str(body).map_err(Failure::bad_request)?;
        self.evaluate(&request).map(|r| to_json(&r)).map_err(Failure::from)
    }
}

/// Canonical JSON rendering: pretty-printed with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("result types serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// Malformed or out-of-range input.
    InvalidInput,
    /// Valid input that no design or state satisfies.
    Infeasible,
    Internal,
}

/// Structured error for front ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Failure {
    pub kind: FailureKind,
    pub error: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

impl Failure {
    fn bad_request(e: impl std::fmt::Display) -> Self {
        Self {
            kind: FailureKind::InvalidInput,
            error: e.to_string(),
            step: None,
            violations: Vec::new(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let step = match &e {
            Error::Step { step, .. } => Some(*step),
            _ => None,
        };
        let kind = if e.is_infeasible() {
            FailureKind::Infeasible
        } else {
            match root(&e) {
                Error::InvalidRequirements(_)
                | Error::Domain(_)
                | Error::Json(_)
                | Error::Io(_)
                | Error::Catalog { .. }
                | Error::SchemaVersion { .. }
                | Error::InvalidModels(_)
                | Error::Fit(_) => FailureKind::InvalidInput,
                _ => FailureKind::Internal,
            }
        };
        Self {
            kind,
            error: e.to_string(),
            step,
            violations: e.violations().to_vec(),
        }
    }
}

fn root(e: &Error) -> &Error {
    match e {
        Error::Step { source, .. } => root(source),
        other => other,
    }
}
