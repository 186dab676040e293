//! Multicopter propulsion sizing.
//!
//! From hover thrust, rotor count, thrust margin, altitude and endurance the
//! crate computes the optimal continuous parameters of propeller, motor, ESC
//! and battery, picks concrete products from catalogs, and evaluates the
//! resulting system. An exhaustive search over the same catalogs serves as a
//! reference.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod api;
pub mod baseline;
pub mod catalog;
pub mod error;
pub mod evaluator;
pub mod model;
pub mod optimizer;
pub mod schema;
pub mod service;
pub mod stats;
pub mod units;

pub use api::{Engine, EvaluateRequest};
pub use catalog::Catalog;
pub use error::{Error, Result};
pub use evaluator::{PerformanceReport, PropulsionSystem};
pub use model::{DesignRequirements, RequirementsInput};
pub use optimizer::{optimize, DesignResult, OptimizerConfig};
pub use stats::StatModels;
