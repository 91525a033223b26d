//! Named test cases.

use std::f64::consts::PI;

use solverlab_core::BoundaryCondition;

use crate::error::{HarnessError, Result};

/// Bumped whenever a case's data change, so cached references are not
/// silently reused across incompatible registries.
pub const REGISTRY_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Burgers,
    Isothermal,
    Gas,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Burgers => "burgers",
            ModelKind::Isothermal => "isothermal",
            ModelKind::Gas => "gas",
        }
    }
}

/// Initial data in primitive variables: `[u]`, `[rho, u]` or `[rho, u, p]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    /// Two constant states separated at `x0`.
    Riemann { x0: f64, left: Vec<f64>, right: Vec<f64> },
    /// Constant states between increasing breaks.
    Pieces { breaks: Vec<f64>, states: Vec<Vec<f64>> },
    /// Burgers ramp from 3 down to 1 over `[-3, -1]`.
    Compression,
    /// Mach 3 shock at `x = -4` running into a density sine.
    ShockSine,
    /// One smooth period of a sine on the domain (periodic diagnostics).
    SmoothSine { amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    /// Exact averages of a travelling Rankine-Hugoniot discontinuity.
    ExactShock,
    ExactCompression,
    /// Exact averages of the Riemann solution.
    ExactRiemann,
    /// Exact averages of a uniform flow reflecting on the right wall.
    ExactReflection,
    /// Nessyahu-Tadmor on a fine grid, averaged onto the run grid.
    FineNt,
    None,
}

impl ReferenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReferenceKind::ExactShock => "exact-shock",
            ReferenceKind::ExactCompression => "exact-compression",
            ReferenceKind::ExactRiemann => "exact-riemann",
            ReferenceKind::ExactReflection => "exact-reflection",
            ReferenceKind::FineNt => "fine-nt",
            ReferenceKind::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub name: &'static str,
    /// Cases sharing initial data (and fine references) share a family.
    pub family: &'static str,
    pub description: &'static str,
    pub model: ModelKind,
    pub initial: Initial,
    pub x_min: f64,
    pub x_max: f64,
    pub t_end: f64,
    pub bc: BoundaryCondition,
    pub cells: usize,
    pub cfl: f64,
    pub gamma: f64,
    pub c_sound: f64,
    pub reference: ReferenceKind,
    /// Let the mesh stand still while all waves move right.
    pub stationary: bool,
    /// False for diagnostic cases and illustrative stand-in data.
    pub benchmark: bool,
}

impl CaseSpec {
    fn base(name: &'static str, model: ModelKind, initial: Initial) -> Self {
        Self {
            name,
            family: name,
            description: "",
            model,
            initial,
            x_min: 0.0,
            x_max: 1.0,
            t_end: 1.0,
            bc: BoundaryCondition::transmissive(),
            cells: 100,
            cfl: 0.4,
            gamma: 1.4,
            c_sound: 1.0,
            reference: ReferenceKind::None,
            stationary: false,
            benchmark: true,
        }
    }
}

/// Slowly moving isothermal 1-shock: speed 0.1, density 1 to 20, c = 0.5,
/// states from the Rankine-Hugoniot mass flux.
pub fn iso_slow_shock() -> ([f64; 2], [f64; 2], f64) {
    let (c, rl, rr, sigma) = (0.5f64, 1.0f64, 20.0f64, 0.1);
    let ul = sigma + c * (rr / rl).sqrt();
    let ur = sigma + c * (rl / rr).sqrt();
    ([rl, ul], [rr, ur], sigma)
}

pub fn registry() -> Vec<CaseSpec> {
    let (iso_l, iso_r, _) = iso_slow_shock();
    vec![
        CaseSpec {
            description: "Burgers 3 | 1 shock starting on an interface",
            t_end: 0.3,
            bc: BoundaryCondition::far_field(),
            reference: ReferenceKind::ExactShock,
            stationary: true,
            ..CaseSpec::base("burgers-pure-shock", ModelKind::Burgers, Initial::Riemann {
                x0: 0.2,
                left: vec![3.0],
                right: vec![1.0],
            })
        },
        CaseSpec {
            description: "Burgers isentropic compression steepening into a shock at t = 1",
            x_min: -4.0,
            x_max: 2.0,
            t_end: 2.0,
            bc: BoundaryCondition::far_field(),
            reference: ReferenceKind::ExactCompression,
            stationary: true,
            ..CaseSpec::base("compression", ModelKind::Burgers, Initial::Compression)
        },
        CaseSpec {
            description: "isothermal 1-shock moving at speed 0.1, density 1 | 20",
            t_end: 0.4,
            bc: BoundaryCondition::far_field(),
            cells: 200,
            cfl: 0.45,
            c_sound: 0.5,
            reference: ReferenceKind::ExactShock,
            ..CaseSpec::base("iso-sms-pure", ModelKind::Isothermal, Initial::Riemann {
                x0: 0.3,
                left: iso_l.to_vec(),
                right: iso_r.to_vec(),
            })
        },
        CaseSpec {
            description: "isothermal slow 1-shock followed by a 2-shock (modified momenta)",
            t_end: 0.5,
            cells: 200,
            cfl: 0.45,
            c_sound: 0.5,
            reference: ReferenceKind::ExactRiemann,
            ..CaseSpec::base("iso-sms-riemann", ModelKind::Isothermal, Initial::Riemann {
                x0: 0.3,
                left: vec![1.0, 2.6361],
                right: vec![20.0, 1.2361 / 20.0],
            })
        },
        CaseSpec {
            description: "isothermal 1-shock and 2-rarefaction (illustrative data)",
            t_end: 0.25,
            cfl: 0.1,
            reference: ReferenceKind::ExactRiemann,
            benchmark: false,
            ..CaseSpec::base("iso-shock-rarefaction", ModelKind::Isothermal, Initial::Riemann {
                x0: 0.5,
                left: vec![1.0, 0.5],
                right: vec![2.0, 0.5],
            })
        },
        CaseSpec {
            description: "ideal-gas Riemann problem with three right-moving discontinuities",
            t_end: 0.035,
            cells: 400,
            reference: ReferenceKind::FineNt,
            ..CaseSpec::base("gas-toro", ModelKind::Gas, Initial::Riemann {
                x0: 0.4,
                left: vec![5.99924, 19.5975, 460.894],
                right: vec![5.99242, -6.19633, 46.0950],
            })
        },
        CaseSpec {
            description: "interacting blast waves between two walls, early time",
            family: "blast",
            t_end: 0.026,
            bc: BoundaryCondition::walls(),
            cells: 400,
            cfl: 0.45,
            reference: ReferenceKind::FineNt,
            ..CaseSpec::base("blast", ModelKind::Gas, blast_initial())
        },
        CaseSpec {
            description: "interacting blast waves between two walls, after the collision",
            family: "blast",
            t_end: 0.038,
            bc: BoundaryCondition::walls(),
            cells: 400,
            cfl: 0.45,
            reference: ReferenceKind::FineNt,
            ..CaseSpec::base("blast-late", ModelKind::Gas, blast_initial())
        },
        CaseSpec {
            description: "Mach 3 shock interacting with an entropy sine wave",
            x_min: -5.0,
            x_max: 5.0,
            t_end: 1.8,
            cells: 400,
            cfl: 0.45,
            reference: ReferenceKind::FineNt,
            ..CaseSpec::base("shock-sine", ModelKind::Gas, Initial::ShockSine)
        },
        CaseSpec {
            description: "Riemann problem with a slowly moving 3-shock",
            t_end: 0.3,
            cells: 800,
            cfl: 0.3,
            reference: ReferenceKind::ExactRiemann,
            ..CaseSpec::base("gas-sms", ModelKind::Gas, Initial::Riemann {
                x0: 0.5,
                left: vec![3.86, -0.81, 10.33],
                right: vec![1.05, -3.44, 1.05],
            })
        },
        CaseSpec {
            description: "symmetric collision producing two outgoing shocks (wall heating)",
            t_end: 0.1,
            cells: 200,
            gamma: 5.0 / 3.0,
            reference: ReferenceKind::ExactRiemann,
            ..CaseSpec::base("wall-symmetric", ModelKind::Gas, Initial::Riemann {
                x0: 0.5,
                left: vec![1.0, 4.0, 1.0],
                right: vec![1.0, -4.0, 1.0],
            })
        },
        CaseSpec {
            description: "cold gas reflecting on a solid wall on the right (wall heating)",
            t_end: 1.6,
            bc: BoundaryCondition::Sides { left: solverlab_core::Side::FarField, right: solverlab_core::Side::Wall },
            cells: 1000,
            cfl: 0.45,
            gamma: 5.0 / 3.0,
            reference: ReferenceKind::ExactReflection,
            ..CaseSpec::base("wall-reflect", ModelKind::Gas, Initial::Pieces {
                breaks: vec![],
                states: vec![vec![1.0, 1.0, 0.001]],
            })
        },
        CaseSpec {
            description: "smooth periodic Burgers wave before breaking (diagnostic)",
            t_end: 0.2,
            bc: BoundaryCondition::Periodic,
            benchmark: false,
            ..CaseSpec::base("smooth-burgers", ModelKind::Burgers, Initial::SmoothSine { amplitude: 0.3 })
        },
        CaseSpec {
            description: "smooth periodic isothermal density wave (diagnostic)",
            t_end: 0.2,
            bc: BoundaryCondition::Periodic,
            benchmark: false,
            ..CaseSpec::base("smooth-iso", ModelKind::Isothermal, Initial::SmoothSine { amplitude: 0.2 })
        },
        CaseSpec {
            description: "smooth periodic ideal-gas density wave (diagnostic)",
            t_end: 0.2,
            bc: BoundaryCondition::Periodic,
            benchmark: false,
            ..CaseSpec::base("smooth-gas", ModelKind::Gas, Initial::SmoothSine { amplitude: 0.2 })
        },
    ]
}

fn blast_initial() -> Initial {
    Initial::Pieces {
        breaks: vec![0.1, 0.9],
        states: vec![vec![1.0, 0.0, 1000.0], vec![1.0, 0.0, 0.01], vec![1.0, 0.0, 100.0]],
    }
}

pub fn find_case(name: &str) -> Result<CaseSpec> {
    registry().into_iter().find(|c| c.name == name).ok_or_else(|| HarnessError::UnknownCase(name.to_string()))
}

/// Primitive state of the smooth periodic cases at `x`.
pub fn smooth_sine(model: ModelKind, amplitude: f64, x_min: f64, x_max: f64, x: f64) -> Vec<f64> {
    let s = (2.0 * PI * (x - x_min) / (x_max - x_min)).sin();
    match model {
        ModelKind::Burgers => vec![1.0 + amplitude * s],
        ModelKind::Isothermal => vec![1.0 + amplitude * s, 0.5],
        ModelKind::Gas => vec![1.0 + amplitude * s, 0.5, 1.0],
    }
}

/// Primitive state of the shock / entropy-wave case at `x`.
pub fn shock_sine(x: f64) -> Vec<f64> {
    if x < -4.0 {
        vec![3.897143, 2.629369, 10.33333]
    } else {
        vec![1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0]
    }
}
