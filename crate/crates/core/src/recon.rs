//! Moving-mesh finite-volume step shared by the reconstruction scheme and the
//! staggered baselines (Lax-Friedrichs, Nessyahu-Tadmor).
//!
//! Every free interface translates at the mesh speed `v`. With `v <= 0` the
//! flux through interface `k` is produced by the cell on its left (whose
//! reconstructed shock crosses its right edge); with `v > 0` it comes from the
//! cell on its right. Interfaces on reflecting walls never move and use the
//! exact Riemann flux against the mirrored state.

use crate::error::{Result, SolverError};
use crate::grid::{fill_ghosts, BoundaryCondition, GridSpec};
use crate::model::{Decision, Model, RecOptions};
use crate::real::Real;

/// Number of ghost cells on each side.
pub const GHOSTS: usize = 2;

/// Edge of its own cell that a reconstructed discontinuity leaves through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    Right,
    Left,
}

impl Crossing {
    pub fn for_mesh_speed<T: Real>(v_mesh: T) -> Self {
        if v_mesh <= T::zero() {
            Crossing::Right
        } else {
            Crossing::Left
        }
    }
}

#[inline]
fn moving_flux<T: Real, const N: usize>(f: [T; N], u: &[T; N], v: T) -> [T; N] {
    std::array::from_fn(|k| f[k] - v * u[k])
}

/// Time-averaged flux, in the mesh frame, through the edge of a cell that its
/// reconstruction crosses during `dt`.
///
/// Each component switches from the near state to the far state at its own
/// crossing time, capped at `dt`. A distance outside `[0, h]` (momentum in
/// the half variant) gives a negative crossing time and the two fluxes are
/// extrapolated; this is what lets a cell shed momentum its reconstruction
/// does not carry. A missing distance keeps the near state for the whole
/// step.
pub fn crossing_flux<T: Real, const N: usize>(
    flux: impl Fn(&[T; N]) -> [T; N],
    dec: &Decision<T, N>,
    v_mesh: T,
    dt: T,
    h: T,
) -> [T; N] {
    if !dec.accepted {
        return moving_flux(flux(&dec.left), &dec.left, v_mesh);
    }
    let side = Crossing::for_mesh_speed(v_mesh);
    let (near, far) = match side {
        Crossing::Right => (&dec.right, &dec.left),
        Crossing::Left => (&dec.left, &dec.right),
    };
    let g_near = moving_flux(flux(near), near, v_mesh);
    let g_far = moving_flux(flux(far), far, v_mesh);
    std::array::from_fn(|k| {
        let t_cross = dec.dist[k].and_then(|d| {
            let (gap, rate) = match side {
                Crossing::Right => (h - d, dec.sigma - v_mesh),
                Crossing::Left => (d, v_mesh - dec.sigma),
            };
            (rate > T::zero()).then(|| gap / rate)
        });
        match t_cross {
            Some(tc) if tc < dt => (tc * g_near[k] + (dt - tc) * g_far[k]) / dt,
            _ => g_near[k],
        }
    })
}

/// Flux used where no reconstruction is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// Single-state upwind-in-mesh-frame flux (staggered Lax-Friedrichs).
    Lxf,
    /// Nessyahu-Tadmor predictor with MinMod slopes.
    Nt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingScheme<T> {
    pub rec: Option<RecOptions<T>>,
    pub fallback: Fallback,
}

/// Geometry of one moving-mesh step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshStep<T> {
    /// Interface offset at the start of the step.
    pub offset: T,
    pub v_mesh: T,
    pub dt: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepStats {
    /// Number of interfaces whose flux came from an accepted reconstruction.
    pub accepted: usize,
}

/// MinMod limiter.
#[inline]
pub fn minmod<T: Real>(a: T, b: T) -> T {
    if a > T::zero() && b > T::zero() {
        a.min(b)
    } else if a < T::zero() && b < T::zero() {
        a.max(b)
    } else {
        T::zero()
    }
}

/// Lengths of the padded cells for a given interface offset.
fn padded_lengths<T: Real>(n: usize, dx: T, offset: T, bc: BoundaryCondition) -> Vec<T> {
    let mut core = vec![dx; n];
    if bc.left_wall() {
        core[0] = core[0] + offset;
    }
    if bc.right_wall() {
        core[n - 1] = core[n - 1] - offset;
    }
    let mut out = Vec::with_capacity(n + 2 * GHOSTS);
    for g in (0..GHOSTS).rev() {
        out.push(if bc.left_wall() { core[g.min(n - 1)] } else { dx });
    }
    out.extend_from_slice(&core);
    for g in 0..GHOSTS {
        out.push(if bc.right_wall() { core[n - 1 - g.min(n - 1)] } else { dx });
    }
    out
}

/// Advances `cells` by one step of the moving mesh.
///
/// `cells` live on the mesh displaced by `mesh.offset`; the result lives on
/// the mesh displaced by `mesh.offset + mesh.v_mesh * mesh.dt`.
#[allow(clippy::too_many_arguments)]
pub fn moving_step<T: Real, M: Model<T, N>, const N: usize>(
    model: &M,
    cells: &[[T; N]],
    grid: &GridSpec<T>,
    bc: BoundaryCondition,
    far: Option<&([T; N], [T; N])>,
    mesh: MeshStep<T>,
    scheme: &MovingScheme<T>,
) -> Result<(Vec<[T; N]>, StepStats)> {
    let n = cells.len();
    if n != grid.n_cells {
        return Err(SolverError::LengthMismatch { left: n, right: grid.n_cells });
    }
    let MeshStep { offset, v_mesh: v, dt } = mesh;
    if !(dt > T::zero()) {
        return Err(SolverError::InvalidInput(format!("time step {dt}")));
    }
    let dx = grid.dx;
    let shift = v * dt;

    let ext = fill_ghosts(cells, bc, GHOSTS, |u| model.mirror(u), far);
    let h_ext = padded_lengths(n, dx, offset, bc);

    let mut v_waves = T::zero();
    let mut min_speed = T::infinity();
    for u in &ext {
        let (lo, hi) = model.wave_speeds(u);
        v_waves = v_waves.max(lo.abs()).max(hi.abs());
        min_speed = min_speed.min(lo);
    }
    let slack = T::one() + T::lit(1e-10);
    if (v.abs() + v_waves) * dt > dx * slack {
        return Err(SolverError::CflViolation {
            dt: dt.as_f64(),
            limit: (dx / (v.abs() + v_waves)).as_f64(),
        });
    }
    let too_slow = if v == T::zero() { min_speed < T::zero() } else { v.abs() * slack < v_waves };
    if too_slow {
        return Err(SolverError::MeshTooSlow { v_mesh: v.as_f64(), v_waves: v_waves.as_f64() });
    }

    // NT slopes of the conserved variables and of the flux, per unit length.
    let nt = scheme.fallback == Fallback::Nt;
    let (slope_u, slope_f) = if nt {
        let fl: Vec<[T; N]> = ext.iter().map(|u| model.flux(u)).collect();
        let mut su = vec![[T::zero(); N]; ext.len()];
        let mut sf = vec![[T::zero(); N]; ext.len()];
        for i in 1..ext.len() - 1 {
            let dl = T::half() * (h_ext[i - 1] + h_ext[i]);
            let dr = T::half() * (h_ext[i] + h_ext[i + 1]);
            for k in 0..N {
                su[i][k] = minmod((ext[i][k] - ext[i - 1][k]) / dl, (ext[i + 1][k] - ext[i][k]) / dr);
                sf[i][k] = minmod((fl[i][k] - fl[i - 1][k]) / dl, (fl[i + 1][k] - fl[i][k]) / dr);
            }
        }
        (su, sf)
    } else {
        (Vec::new(), Vec::new())
    };

    let side = Crossing::for_mesh_speed(v);
    let mut stats = StepStats::default();
    let mut g = vec![[T::zero(); N]; n + 1];
    for (k, gk) in g.iter_mut().enumerate() {
        if k == 0 && bc.left_wall() {
            *gk = model.godunov_flux(&model.mirror(&cells[0]), &cells[0])?;
            continue;
        }
        if k == n && bc.right_wall() {
            *gk = model.godunov_flux(&cells[n - 1], &model.mirror(&cells[n - 1]))?;
            continue;
        }
        // Padded index of the source cell.
        let i = match side {
            Crossing::Right => k + GHOSTS - 1,
            Crossing::Left => k + GHOSTS,
        };
        let h = h_ext[i];
        if let Some(opts) = &scheme.rec {
            let dec = model.reconstruct(&ext[i - 1], &ext[i], &ext[i + 1], h, opts)?;
            if dec.accepted {
                stats.accepted += 1;
                *gk = crossing_flux(|u| model.flux(u), &dec, v, dt, h);
                continue;
            }
        }
        let u = &ext[i];
        *gk = if nt {
            // Point reached by the interface at the end of the step, in the
            // source cell's local coordinate.
            let (edge, x_p) = match side {
                Crossing::Right => (h, h + shift),
                Crossing::Left => (T::zero(), shift),
            };
            let c = T::half() * h;
            let pred: [T; N] = std::array::from_fn(|m| {
                u[m] + slope_u[i][m] * (x_p - c) - T::half() * dt * slope_f[i][m]
            });
            let fp = model.flux(&pred);
            let mid = T::half() * (x_p + edge) - c;
            // Content of the source cell swept between the interface and x_p.
            std::array::from_fn(|m| {
                let swept = (edge - x_p) * (u[m] + slope_u[i][m] * mid);
                fp[m] + swept / dt
            })
        } else {
            moving_flux(model.flux(u), u, v)
        };
    }
    if bc == BoundaryCondition::Periodic {
        g[n] = g[0];
    }

    let h_new = padded_lengths(n, dx, offset + shift, bc);
    let ratio = dt / dx;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let u = &cells[j];
        let (gl, gr) = (&g[j], &g[j + 1]);
        let wall_cell = (j == 0 && bc.left_wall()) || (j == n - 1 && bc.right_wall());
        let next: [T; N] = if wall_cell {
            let (ho, hn) = (h_ext[j + GHOSTS], h_new[j + GHOSTS]);
            std::array::from_fn(|m| (ho * u[m] - dt * (gr[m] - gl[m])) / hn)
        } else {
            std::array::from_fn(|m| u[m] - ratio * (gr[m] - gl[m]))
        };
        out.push(next);
    }
    for (j, u) in out.iter().enumerate() {
        model.check(j, u)?;
    }
    Ok((out, stats))
}
