use thiserror::Error;

/// Failures raised by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("time step {dt} violates the CFL bound {limit}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("mesh speed {v_mesh} is slower than the fastest wave {v_waves}")]
    MeshTooSlow { v_mesh: f64, v_waves: f64 },

    #[error("all wave speeds vanish; no CFL time step exists")]
    StaticField,

    #[error("non-admissible state in cell {cell}: rho = {rho}, e = {e}")]
    Positivity { cell: usize, rho: f64, e: f64 },

    #[error("Riemann data generate vacuum: {detail}")]
    Vacuum { detail: String },

    #[error("Riemann solver did not converge: {detail}")]
    NoConvergence { detail: String },

    #[error("grid offset {offset} is not smaller than the cell size {dx}")]
    OffsetTooLarge { offset: f64, dx: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("states do not satisfy the Rankine-Hugoniot conditions (residual {residual:e})")]
    NotAShock { residual: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = SolverError> = std::result::Result<T, E>;
