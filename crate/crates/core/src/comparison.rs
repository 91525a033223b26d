//! Baseline schemes: staggered Lax-Friedrichs and Nessyahu-Tadmor on the
//! moving mesh, and fixed-grid Rusanov, Godunov and MUSCL.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SolverError};
use crate::grid::{fill_ghosts, BoundaryCondition, GridSpec};
use crate::model::{Model, Variant};
use crate::real::Real;
use crate::recon::{moving_step, Fallback, MeshStep, MovingScheme};

pub use crate::recon::minmod;

/// Every scheme the solver can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    Lxf,
    Rusanov,
    Godunov,
    Nt,
    Muscl,
    Rec,
    RecFull,
    RecNt,
    RecFullNt,
}

/// How the mesh moves for a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshMode {
    /// Fixed grid.
    Fixed,
    /// Alternating mesh speed `+-safety * v_waves`.
    Free,
    /// Alternating half-cell displacement per step.
    Staggered,
}

impl SchemeId {
    pub const ALL: [SchemeId; 9] = [
        SchemeId::Lxf,
        SchemeId::Rusanov,
        SchemeId::Godunov,
        SchemeId::Nt,
        SchemeId::Muscl,
        SchemeId::Rec,
        SchemeId::RecFull,
        SchemeId::RecNt,
        SchemeId::RecFullNt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Lxf => "lxf",
            SchemeId::Rusanov => "rusanov",
            SchemeId::Godunov => "godunov",
            SchemeId::Nt => "nt",
            SchemeId::Muscl => "muscl",
            SchemeId::Rec => "rec",
            SchemeId::RecFull => "rec-full",
            SchemeId::RecNt => "rec+nt",
            SchemeId::RecFullNt => "rec-full+nt",
        }
    }

    pub fn is_rec(self) -> bool {
        matches!(self, SchemeId::Rec | SchemeId::RecFull | SchemeId::RecNt | SchemeId::RecFullNt)
    }

    pub fn variant(self) -> Variant {
        match self {
            SchemeId::RecFull | SchemeId::RecFullNt => Variant::Full,
            _ => Variant::Half,
        }
    }

    pub fn mesh_mode(self) -> MeshMode {
        match self {
            SchemeId::Rusanov | SchemeId::Godunov | SchemeId::Muscl => MeshMode::Fixed,
            SchemeId::Lxf | SchemeId::Rec | SchemeId::RecFull => MeshMode::Free,
            SchemeId::Nt | SchemeId::RecNt | SchemeId::RecFullNt => MeshMode::Staggered,
        }
    }

    /// Same scheme with the given fallback flux (reconstruction schemes only).
    pub fn with_coupling(self, fallback: Fallback) -> Self {
        match (self.variant(), self.is_rec(), fallback) {
            (_, false, _) => self,
            (Variant::Half, true, Fallback::Lxf) => SchemeId::Rec,
            (Variant::Half, true, Fallback::Nt) => SchemeId::RecNt,
            (Variant::Full, true, Fallback::Lxf) => SchemeId::RecFull,
            (Variant::Full, true, Fallback::Nt) => SchemeId::RecFullNt,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| SolverError::InvalidInput(format!("unknown scheme '{s}'")))
    }
}

/// Local Lax-Friedrichs flux.
pub fn rusanov_flux<T: Real, M: Model<T, N>, const N: usize>(model: &M, left: &[T; N], right: &[T; N]) -> [T; N] {
    let a = model.max_wave_speed(left).max(model.max_wave_speed(right));
    let (fl, fr) = (model.flux(left), model.flux(right));
    std::array::from_fn(|k| T::half() * (fl[k] + fr[k]) - T::half() * a * (right[k] - left[k]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedScheme {
    Rusanov,
    Godunov,
    Muscl,
}

fn fixed_update<T: Real, M: Model<T, N>, const N: usize>(
    model: &M,
    cells: &[[T; N]],
    dt: T,
    dx: T,
    fluxes: &[[T; N]],
) -> Result<Vec<[T; N]>> {
    let r = dt / dx;
    let out: Vec<[T; N]> = cells
        .iter()
        .enumerate()
        .map(|(j, u)| std::array::from_fn(|k| u[k] - r * (fluxes[j + 1][k] - fluxes[j][k])))
        .collect();
    for (j, u) in out.iter().enumerate() {
        model.check(j, u)?;
    }
    Ok(out)
}

/// One step of a fixed-grid baseline.
pub fn fixed_step<T: Real, M: Model<T, N>, const N: usize>(
    model: &M,
    cells: &[[T; N]],
    dt: T,
    dx: T,
    bc: BoundaryCondition,
    far: Option<&([T; N], [T; N])>,
    scheme: FixedScheme,
) -> Result<Vec<[T; N]>> {
    let n = cells.len();
    let ext = fill_ghosts(cells, bc, 2, |u| model.mirror(u), far);
    let fluxes: Vec<[T; N]> = match scheme {
        FixedScheme::Godunov => {
            (0..=n).map(|k| model.godunov_flux(&ext[k + 1], &ext[k + 2])).collect::<Result<_>>()?
        }
        FixedScheme::Rusanov => (0..=n).map(|k| rusanov_flux(model, &ext[k + 1], &ext[k + 2])).collect(),
        FixedScheme::Muscl => {
            // MinMod slopes on primitive variables, half-step predictor, then
            // Rusanov fluxes between the evolved edge states.
            let prim: Vec<[T; N]> = ext.iter().map(|u| model.to_primitive(u)).collect();
            let half = T::half() * dt / dx;
            let edges: Vec<([T; N], [T; N])> = (1..ext.len() - 1)
                .map(|i| {
                    let slope: [T; N] = std::array::from_fn(|k| {
                        minmod(prim[i][k] - prim[i - 1][k], prim[i + 1][k] - prim[i][k])
                    });
                    let wl: [T; N] = std::array::from_fn(|k| prim[i][k] - T::half() * slope[k]);
                    let wr: [T; N] = std::array::from_fn(|k| prim[i][k] + T::half() * slope[k]);
                    let (ul, ur) = (model.from_primitive(&wl), model.from_primitive(&wr));
                    let (fl, fr) = (model.flux(&ul), model.flux(&ur));
                    let shift: [T; N] = std::array::from_fn(|k| half * (fl[k] - fr[k]));
                    (
                        std::array::from_fn(|k| ul[k] + shift[k]),
                        std::array::from_fn(|k| ur[k] + shift[k]),
                    )
                })
                .collect();
            // edges[m] belongs to padded cell m + 1.
            (0..=n).map(|k| rusanov_flux(model, &edges[k].1, &edges[k + 1].0)).collect()
        }
    };
    fixed_update(model, cells, dt, dx, &fluxes)
}

pub fn godunov_step<T: Real, M: Model<T, N>, const N: usize>(
    model: &M,
    cells: &[[T; N]],
    dt: T,
    dx: T,
    bc: BoundaryCondition,
) -> Result<Vec<[T; N]>> {
    fixed_step(model, cells, dt, dx, bc, None, FixedScheme::Godunov)
}

pub fn muscl_step<T: Real, M: Model<T, N>, const N: usize>(
    model: &M,
    cells: &[[T; N]],
    dt: T,
    dx: T,
    bc: BoundaryCondition,
) -> Result<Vec<[T; N]>> {
    fixed_step(model, cells, dt, dx, bc, None, FixedScheme::Muscl)
}

/// One Nessyahu-Tadmor step on the staggered grid.
///
/// Even `parity` moves the cells half a cell to the right (onto the
/// staggered grid), odd `parity` moves them back. A pair of steps therefore
/// returns to the reference grid.
pub fn nt_step<T: Real, M: Model<T, N>, const N: usize>(
    model: &M,
    cells: &[[T; N]],
    grid: &GridSpec<T>,
    dt: T,
    bc: BoundaryCondition,
    parity: usize,
) -> Result<Vec<[T; N]>> {
    staggered_step(model, cells, grid, dt, bc, parity, Fallback::Nt)
}

/// Staggered Lax-Friedrichs step (same conventions as [`nt_step`]).
pub fn lxf_step<T: Real, M: Model<T, N>, const N: usize>(
    model: &M,
    cells: &[[T; N]],
    grid: &GridSpec<T>,
    dt: T,
    bc: BoundaryCondition,
    parity: usize,
) -> Result<Vec<[T; N]>> {
    staggered_step(model, cells, grid, dt, bc, parity, Fallback::Lxf)
}

fn staggered_step<T: Real, M: Model<T, N>, const N: usize>(
    model: &M,
    cells: &[[T; N]],
    grid: &GridSpec<T>,
    dt: T,
    bc: BoundaryCondition,
    parity: usize,
    fallback: Fallback,
) -> Result<Vec<[T; N]>> {
    let s = T::half() * grid.dx;
    let (offset, v_mesh) = if parity % 2 == 0 { (T::zero(), s / dt) } else { (s, -s / dt) };
    let scheme = MovingScheme { rec: None, fallback };
    Ok(moving_step(model, cells, grid, bc, None, MeshStep { offset, v_mesh, dt }, &scheme)?.0)
}
