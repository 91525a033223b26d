//! Time marching: mesh-speed and time-step selection, landing on the final
//! time, and bookkeeping of the moving mesh.

use crate::comparison::{fixed_step, FixedScheme, MeshMode, SchemeId};
use crate::error::{Result, SolverError};
use crate::grid::{remap_to_reference, shifted_edges, BoundaryCondition, GridSpec, MeshMotion, SimClock};
use crate::model::{Model, RecOptions, Selection};
use crate::real::Real;
use crate::recon::{moving_step, Fallback, MeshStep, MovingScheme};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig<T> {
    pub scheme: SchemeId,
    pub cfl: T,
    /// Mesh speed factor over the fastest wave (free mesh mode).
    pub safety: T,
    pub selection: Selection,
    /// Use `v_mesh = 0` while every wave speed is non-negative.
    pub stationary: bool,
    /// Strength threshold of the gas wave selection; defaults to `cfl`.
    pub c_cfl: Option<T>,
    /// Debug switch: reject every reconstruction.
    pub disable_reconstruction: bool,
}

impl<T: Real> RunConfig<T> {
    pub fn new(scheme: SchemeId, cfl: T) -> Self {
        Self {
            scheme,
            cfl,
            safety: T::one(),
            selection: Selection::OneShot,
            stationary: false,
            c_cfl: None,
            disable_reconstruction: false,
        }
    }

    fn moving_scheme(&self) -> MovingScheme<T> {
        let fallback = match self.scheme {
            SchemeId::Nt | SchemeId::RecNt | SchemeId::RecFullNt => Fallback::Nt,
            _ => Fallback::Lxf,
        };
        let rec = self.scheme.is_rec().then(|| RecOptions {
            variant: self.scheme.variant(),
            selection: self.selection,
            c_cfl: self.c_cfl.unwrap_or(self.cfl),
            enabled: !self.disable_reconstruction,
        });
        MovingScheme { rec, fallback }
    }
}

/// What happened during one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport<T> {
    pub dt: T,
    pub v_mesh: T,
    pub v_waves: T,
    pub accepted: usize,
}

/// A running simulation of one model with one scheme.
#[derive(Debug, Clone)]
pub struct Simulation<T, M, const N: usize> {
    model: M,
    grid: GridSpec<T>,
    bc: BoundaryCondition,
    far: Option<([T; N], [T; N])>,
    cells: Vec<[T; N]>,
    motion: MeshMotion<T>,
    clock: SimClock<T>,
    cfg: RunConfig<T>,
    /// Displacement of the first step of an unfinished mesh pair.
    pending: Option<T>,
}

impl<T: Real, M: Model<T, N>, const N: usize> Simulation<T, M, N> {
    pub fn new(model: M, grid: GridSpec<T>, bc: BoundaryCondition, cells: Vec<[T; N]>, cfg: RunConfig<T>) -> Result<Self> {
        if cells.len() != grid.n_cells {
            return Err(SolverError::LengthMismatch { left: cells.len(), right: grid.n_cells });
        }
        if !(cfg.cfl > T::zero() && cfg.cfl < T::one()) {
            return Err(SolverError::InvalidInput(format!("CFL number {} outside (0, 1)", cfg.cfl)));
        }
        if cfg.safety < T::one() {
            return Err(SolverError::InvalidInput(format!("mesh safety factor {} below 1", cfg.safety)));
        }
        if cfg.scheme.mesh_mode() == MeshMode::Staggered && cfg.cfl > T::half() {
            return Err(SolverError::CflViolation { dt: cfg.cfl.as_f64(), limit: 0.5 });
        }
        for (j, u) in cells.iter().enumerate() {
            model.check(j, u)?;
        }
        let far = Some((cells[0], cells[cells.len() - 1]));
        Ok(Self {
            model,
            grid,
            bc,
            far,
            cells,
            motion: MeshMotion::default(),
            clock: SimClock::default(),
            cfg,
            pending: None,
        })
    }

    /// Overrides the frozen ghost states used by far-field boundaries
    /// (default: the initial edge cells).
    pub fn with_far_field(mut self, left: [T; N], right: [T; N]) -> Self {
        self.far = Some((left, right));
        self
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn config(&self) -> &RunConfig<T> {
        &self.cfg
    }

    pub fn time(&self) -> T {
        self.clock.t
    }

    pub fn steps(&self) -> usize {
        self.clock.step_index
    }

    pub fn motion(&self) -> &MeshMotion<T> {
        &self.motion
    }

    /// Cell averages on the current (possibly shifted) mesh.
    pub fn cells(&self) -> &[[T; N]] {
        &self.cells
    }

    /// Edges of the current mesh.
    pub fn edges(&self) -> Vec<T> {
        shifted_edges(&self.grid, self.motion.net_offset, self.bc)
    }

    /// Cell averages on the reference grid (remapped when the mesh is
    /// displaced).
    pub fn reference_cells(&self) -> Result<Vec<[T; N]>> {
        remap_to_reference(&self.cells, &self.grid, self.motion.net_offset, self.bc)
    }

    /// Whether the mesh currently coincides with the reference grid.
    pub fn on_reference_grid(&self) -> bool {
        self.motion.net_offset == T::zero()
    }

    fn v_waves(&self) -> (T, T) {
        let mut vw = T::zero();
        let mut lo = T::infinity();
        let mut scan = |u: &[T; N]| {
            let (a, b) = self.model.wave_speeds(u);
            vw = vw.max(a.abs()).max(b.abs());
            lo = lo.min(a);
        };
        self.cells.iter().for_each(&mut scan);
        if let Some((l, r)) = &self.far {
            if matches!(self.bc, BoundaryCondition::Sides { .. }) {
                scan(l);
                scan(r);
            }
        }
        (vw, lo)
    }

    /// Mesh speed and time step of the next step. `remaining` is the gap to
    /// the final time (infinite when stepping without one).
    fn plan(&self, remaining: T) -> Result<(T, T, bool)> {
        let (vw, lo) = self.v_waves();
        let dx = self.grid.dx;
        let cfl = self.cfg.cfl;
        let mode = self.cfg.scheme.mesh_mode();
        if vw == T::zero() {
            if remaining.is_finite() {
                return Ok((T::zero(), remaining, true));
            }
            return Err(SolverError::StaticField);
        }
        // A relative slack so that a pair split as remaining/2 + remaining/2
        // lands despite roundoff.
        let land = |dt: T| {
            if remaining <= dt * (T::one() + T::lit(1e-9)) {
                (remaining, true)
            } else {
                (dt, false)
            }
        };
        if mode == MeshMode::Fixed {
            let (dt, l) = land(cfl * dx / vw);
            return Ok((T::zero(), dt, l));
        }
        if self.pending.is_none() && self.cfg.stationary && lo >= T::zero() && mode == MeshMode::Free {
            let (dt, l) = land(cfl * dx / vw);
            return Ok((T::zero(), dt, l));
        }
        Ok(match (mode, self.pending) {
            (MeshMode::Staggered, None) => {
                let dt = cfl * dx / vw;
                let dt = if remaining <= T::two() * dt { T::half() * remaining } else { dt };
                (T::half() * dx / dt, dt, false)
            }
            (MeshMode::Staggered, Some(s1)) => {
                let (dt, l) = land(cfl * dx / vw);
                (-s1 / dt, dt, l)
            }
            (_, None) => {
                let v = self.cfg.safety * vw;
                let dt = cfl * dx / (v + vw);
                let dt = if remaining <= T::two() * dt { T::half() * remaining } else { dt };
                (v, dt, false)
            }
            (_, Some(s1)) => {
                let room = cfl * dx - s1.abs();
                if !(room > T::zero()) {
                    return Err(SolverError::CflViolation { dt: s1.abs().as_f64(), limit: (cfl * dx).as_f64() });
                }
                let dt_max = (s1.abs() / (self.cfg.safety * vw)).min(room / vw);
                // No slack here: a longer step would slow the mesh below the waves.
                let (dt, l) = if remaining <= dt_max { (remaining, true) } else { (dt_max, false) };
                (-s1 / dt, dt, l)
            }
        })
    }

    /// Advances one step, never going past `t_end` when given.
    pub fn step(&mut self, t_end: Option<T>) -> Result<StepReport<T>> {
        let remaining = t_end.map_or(T::infinity(), |t| t - self.clock.t);
        if !(remaining > T::zero()) {
            return Err(SolverError::InvalidInput("final time already reached".into()));
        }
        let (v_mesh, dt, lands) = self.plan(remaining)?;
        let (vw, _) = self.v_waves();
        let mut accepted = 0;
        self.cells = match self.cfg.scheme {
            SchemeId::Godunov | SchemeId::Rusanov | SchemeId::Muscl => {
                let kind = match self.cfg.scheme {
                    SchemeId::Godunov => FixedScheme::Godunov,
                    SchemeId::Rusanov => FixedScheme::Rusanov,
                    _ => FixedScheme::Muscl,
                };
                fixed_step(&self.model, &self.cells, dt, self.grid.dx, self.bc, self.far.as_ref(), kind)?
            }
            _ => {
                let mesh = MeshStep { offset: self.motion.net_offset, v_mesh, dt };
                let scheme = self.cfg.moving_scheme();
                let (out, stats) = moving_step(&self.model, &self.cells, &self.grid, self.bc, self.far.as_ref(), mesh, &scheme)?;
                accepted = stats.accepted;
                out
            }
        };
        if v_mesh != T::zero() {
            self.pending = match self.pending {
                None => Some(v_mesh * dt),
                Some(_) => None,
            };
        }
        self.motion.advance(v_mesh, dt);
        if self.pending.is_none() {
            // A completed pair returns exactly to the reference grid.
            self.motion.net_offset = T::zero();
        }
        self.clock.tick(dt);
        if let Some(t) = t_end {
            // Gaps below the clock's resolution would never close.
            let unresolved = t - self.clock.t <= T::lit(16.0) * T::epsilon() * t.abs();
            if lands || (self.pending.is_none() && unresolved) {
                self.clock.t = t;
            }
        }
        Ok(StepReport { dt, v_mesh, v_waves: vw, accepted })
    }

    /// Marches to `t_end`, calling `observe` after every step.
    pub fn run_until(&mut self, t_end: T, mut observe: impl FnMut(&Self, &StepReport<T>)) -> Result<()> {
        while self.clock.t < t_end {
            let report = self.step(Some(t_end))?;
            observe(self, &report);
        }
        Ok(())
    }

    /// Takes exactly `n` steps without a final-time constraint.
    pub fn run_steps(&mut self, n: usize, mut observe: impl FnMut(&Self, &StepReport<T>)) -> Result<()> {
        for _ in 0..n {
            let report = self.step(None)?;
            observe(self, &report);
        }
        Ok(())
    }
}
