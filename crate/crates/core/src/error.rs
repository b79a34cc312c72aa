use thiserror::Error;

use crate::planner::{Plan, PlanEvaluation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input fell outside the domain of a model function.
    #[error("{quantity} out of domain: {value}")]
    Domain { quantity: &'static str, value: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("1-D search could not bracket a minimum in [{lo}, {hi}]")]
    BracketExhausted { lo: f64, hi: f64 },

    /// Sender and receiver coincide, so no bearing is defined.
    #[error("sender coincides with receiver at ({x}, {y})")]
    DegenerateGeometry { x: f64, y: f64 },

    #[error("transmit power {power_w} W outside (0, {max_w}] W")]
    ConstraintViolation { power_w: f64, max_w: f64 },

    #[error("link rate {rate_bps} bit/s cannot carry data")]
    InfeasibleLink { rate_bps: f64 },

    /// No grid cell meets the delay budget. Carries the least-violating plan.
    #[error(
        "no plan meets the {delay_constraint_s} s delay budget; best effort takes {} s",
        best_effort.1.t_total_s
    )]
    InfeasibleScenario {
        delay_constraint_s: f64,
        best_effort: Box<(Plan, PlanEvaluation)>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("trace record {index}: {message}")]
    Trace { index: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}
