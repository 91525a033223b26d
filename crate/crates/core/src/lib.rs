//! Finite-volume laboratory for 1D conservation laws built around an in-cell
//! discontinuous reconstruction of shocks on an alternating moving mesh.
//!
//! Numerics are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod comparison;
pub mod error;
pub mod gas;
pub mod grid;
pub mod iso;
pub mod model;
pub mod real;
pub mod recon;
pub mod riemann;
pub mod scalar;
pub mod solver;

pub use comparison::{MeshMode, SchemeId};
pub use error::{Result, SolverError};
pub use gas::IdealGas;
pub use grid::{BoundaryCondition, GridSpec, MeshMotion, Profile, Side, SimClock};
pub use iso::Isothermal;
pub use model::{Decision, Field, Model, RecOptions, Selection, Variant, Wave};
pub use real::Real;
pub use recon::Fallback;
pub use scalar::{Burgers, BurgersModel, ConvexFlux, ScalarLaw};
pub use solver::{RunConfig, Simulation, StepReport};

pub type Grid = GridSpec<f64>;
pub type ScalarField = Field<f64, 1>;
pub type IsoField = Field<f64, 2>;
pub type GasField = Field<f64, 3>;
pub type BurgersSim = Simulation<f64, BurgersModel, 1>;
pub type IsoSim = Simulation<f64, Isothermal<f64>, 2>;
pub type GasSim = Simulation<f64, IdealGas<f64>, 3>;
