//! Report assembly, sweep harness and result cache behind the `lindim`
//! binary.

pub mod cache;
pub mod report;
pub mod sweep;

pub use cache::{Cache, CacheKey, CacheRecord};
pub use report::{analyze, render_analysis, Analysis};
pub use sweep::{
    preset, run_sweep, Checks, Family, PointCount, SweepSpec, SweepSummary, Violation,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lindim(#[from] lindim::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
