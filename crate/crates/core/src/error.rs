use std::path::PathBuf;

use crate::evaluator::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("throttle infeasible: required throttle {throttle:.4} exceeds full throttle")]
    ThrottleInfeasible { throttle: f64 },

    #[error("brownout: ESC input voltage {esc_voltage_v:.3} V is not positive")]
    Brownout { esc_voltage_v: f64 },

    #[error("infeasible motor: {0}")]
    InfeasibleMotor(String),

    #[error("model inconsistency: {0}")]
    ModelInconsistent(String),

    #[error("no convergence after {iterations} iterations (last change {last_delta:.3e})")]
    NoConvergence { iterations: usize, last_delta: f64 },

    #[error("endurance is unbounded: battery current is zero")]
    InfiniteEndurance,

    #[error("fit error: {0}")]
    Fit(String),

    #[error("thrust {thrust_n:.3} N is beyond the last voltage tier ({max_thrust_n:.3} N)")]
    OutOfCatalogRange { thrust_n: f64, max_thrust_n: f64 },

    #[error("no {class} satisfies {constraint}")]
    SelectionInfeasible { class: &'static str, constraint: String },

    #[error("invalid requirements: {0}")]
    InvalidRequirements(String),

    #[error("catalog error in {path}: {message}")]
    Catalog { path: PathBuf, message: String },

    #[error("schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("invalid model file: {0}")]
    InvalidModels(String),

    #[error("design infeasible: {}", format_violations(.0))]
    DesignInfeasible(Vec<Violation>),

    #[error("step {step} ({name}) failed: {source}")]
    Step {
        step: u8,
        name: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("search space of {combinations} combinations exceeds the cap of {cap}")]
    SearchTooLarge { combinations: u64, cap: u64 },

    #[error("no feasible combination found among {evaluated} candidates")]
    NoFeasibleCombination { evaluated: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_violations(violations: &[Violation]) -> String {
    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn at_step(self, step: u8, name: &'static str) -> Self {
        Error::Step {
            step,
            name,
            source: Box::new(self),
        }
    }

    /// True when the error means the requirements cannot be met with the
    /// given catalogs, as opposed to bad input or an internal failure.
    pub fn is_infeasible(&self) -> bool {
        match self {
            Error::Step { source, .. } => source.is_infeasible(),
            Error::ThrottleInfeasible { .. }
            | Error::Brownout { .. }
            | Error::InfeasibleMotor(_)
            | Error::OutOfCatalogRange { .. }
            | Error::SelectionInfeasible { .. }
            | Error::DesignInfeasible(_)
            | Error::NoFeasibleCombination { .. } => true,
            _ => false,
        }
    }

    /// Violations attached to the error, if any.
    pub fn violations(&self) -> &[Violation] {
        match self {
            Error::Step { source, .. } => source.violations(),
            Error::DesignInfeasible(v) => v,
            _ => &[],
        }
    }
}
