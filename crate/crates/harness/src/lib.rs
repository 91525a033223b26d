//! Case registry, reference solutions, metrics and drivers for the
//! `solverlab` command-line tool.

pub mod cases;
pub mod config;
pub mod error;
pub mod io;
pub mod metrics;
pub mod models;
pub mod reference;
pub mod run;

pub use cases::{find_case, registry, CaseSpec, ModelKind};
pub use error::{HarnessError, Result};
pub use metrics::Order;
pub use models::{CaseModel, FieldData};
pub use reference::FineNtConfig;
pub use run::{order_study, run_case, ReferencePolicy, RunOptions, RunResult};
