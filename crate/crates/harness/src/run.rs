//! Running registry cases and order studies.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use solverlab_core::grid::{init_cell_averages, lengths_from_edges, Piece, Profile};
use solverlab_core::{
    BurgersModel, Fallback, GridSpec, IdealGas, Isothermal, RunConfig, SchemeId, Selection, Simulation, SolverError,
};

use crate::cases::{shock_sine, smooth_sine, CaseSpec, Initial, ModelKind, ReferenceKind};
use crate::error::{HarnessError, Result};
use crate::metrics::{convergence_order, l1_fields, overshoot_metric, Order};
use crate::models::{CaseModel, FieldData};
use crate::reference::{exact_reference, expected_momenta, fine_nt_field, restrict, FineNtConfig};

/// Per-run overrides of a case's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub cells: Option<usize>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    /// Take exactly this many steps instead of running to the final time.
    pub steps: Option<usize>,
    pub gamma: Option<f64>,
    pub c_sound: Option<f64>,
    pub safety: Option<f64>,
    pub selection: Option<Selection>,
    pub coupling: Option<Fallback>,
    pub stationary: Option<bool>,
    pub c_cfl: Option<f64>,
    pub disable_reconstruction: bool,
}

/// Which reference solutions a run compares against.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum ReferencePolicy {
    Skip,
    /// Analytic references only; fine-grid cases get no error report.
    #[default]
    Exact,
    /// Analytic references, and fine-grid ones computed (or read back) with
    /// the given settings.
    All(FineNtConfig),
}

/// Resolved physical and numerical parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub grid: GridSpec<f64>,
    pub gamma: f64,
    pub c_sound: f64,
    pub t_end: f64,
    pub scheme: SchemeId,
    pub config: RunConfig<f64>,
}

pub fn resolve(spec: &CaseSpec, scheme: SchemeId, opts: &RunOptions) -> Result<Resolved> {
    let model = spec.model.as_str();
    if opts.gamma.is_some() && spec.model != ModelKind::Gas {
        return Err(HarnessError::ModelMismatch { option: "gamma", model });
    }
    if opts.c_sound.is_some() && spec.model != ModelKind::Isothermal {
        return Err(HarnessError::ModelMismatch { option: "c-sound", model });
    }
    let scheme = opts.coupling.map_or(scheme, |f| scheme.with_coupling(f));
    let grid = GridSpec::new(spec.x_min, spec.x_max, opts.cells.unwrap_or(spec.cells))?;
    let mut config = RunConfig::new(scheme, opts.cfl.unwrap_or(spec.cfl));
    config.safety = opts.safety.unwrap_or(config.safety);
    config.selection = opts.selection.unwrap_or(config.selection);
    config.stationary = opts.stationary.unwrap_or(spec.stationary);
    config.c_cfl = opts.c_cfl;
    config.disable_reconstruction = opts.disable_reconstruction;
    Ok(Resolved {
        grid,
        gamma: opts.gamma.unwrap_or(spec.gamma),
        c_sound: opts.c_sound.unwrap_or(spec.c_sound),
        t_end: opts.t_end.unwrap_or(spec.t_end),
        scheme,
        config,
    })
}

fn initial_profile<M: CaseModel<N>, const N: usize>(spec: &CaseSpec, model: M) -> Result<Profile<f64, N>> {
    let mismatch = |what| HarnessError::ModelMismatch { option: what, model: spec.model.as_str() };
    Ok(match &spec.initial {
        Initial::Riemann { x0, left, right } => {
            Profile::piecewise_constant(vec![*x0], vec![model.conserved(left), model.conserved(right)])?
        }
        Initial::Pieces { breaks, states } => {
            Profile::piecewise_constant(breaks.clone(), states.iter().map(|w| model.conserved(w)).collect())?
        }
        Initial::Compression => {
            if M::KIND != ModelKind::Burgers {
                return Err(mismatch("compression data"));
            }
            Profile::new(vec![-3.0, -1.0], vec![
                Piece::Constant(model.conserved(&[3.0])),
                Piece::function(move |x: f64| model.conserved(&[-x])),
                Piece::Constant(model.conserved(&[1.0])),
            ])?
        }
        Initial::ShockSine => {
            if M::KIND != ModelKind::Gas {
                return Err(mismatch("shock-sine data"));
            }
            Profile::new(vec![-4.0], vec![
                Piece::Constant(model.conserved(&shock_sine(-5.0))),
                Piece::function(move |x: f64| model.conserved(&shock_sine(x))),
            ])?
        }
        &Initial::SmoothSine { amplitude } => {
            let (kind, lo, hi) = (M::KIND, spec.x_min, spec.x_max);
            Profile::smooth(move |x: f64| model.conserved(&smooth_sine(kind, amplitude, lo, hi, x)))
        }
    })
}

/// Ghost states of far-field boundaries: the undisturbed initial states.
fn far_field<M: CaseModel<N>, const N: usize>(spec: &CaseSpec, model: &M) -> Option<([f64; N], [f64; N])> {
    match &spec.initial {
        Initial::Riemann { left, right, .. } => Some((model.conserved(left), model.conserved(right))),
        Initial::Pieces { states, .. } => Some((model.conserved(&states[0]), model.conserved(&states[states.len() - 1]))),
        Initial::Compression => Some((model.conserved(&[3.0]), model.conserved(&[1.0]))),
        Initial::ShockSine | Initial::SmoothSine { .. } => None,
    }
}

/// Initial cell averages of a case on the resolved grid.
pub fn initial_cells<M: CaseModel<N>, const N: usize>(spec: &CaseSpec, opts: &RunOptions) -> Result<Vec<[f64; N]>> {
    let r = resolve(spec, SchemeId::Godunov, opts)?;
    let model = M::build(r.gamma, r.c_sound);
    Ok(init_cell_averages(&initial_profile(spec, model)?, &r.grid.edges()))
}

/// Simulation of a case starting from the given cells.
pub fn simulation_from<M: CaseModel<N>, const N: usize>(
    spec: &CaseSpec,
    scheme: SchemeId,
    opts: &RunOptions,
    cells: Vec<[f64; N]>,
) -> Result<Simulation<f64, M, N>> {
    let r = resolve(spec, scheme, opts)?;
    let model = M::build(r.gamma, r.c_sound);
    let far = far_field(spec, &model);
    let sim = Simulation::new(model, r.grid, spec.bc, cells, r.config)?;
    Ok(match far {
        Some((l, rt)) => sim.with_far_field(l, rt),
        None => sim,
    })
}

/// Simulation of a case at its initial time.
pub fn build_simulation<M: CaseModel<N>, const N: usize>(
    spec: &CaseSpec,
    scheme: SchemeId,
    opts: &RunOptions,
) -> Result<Simulation<f64, M, N>> {
    simulation_from(spec, scheme, opts, initial_cells::<M, N>(spec, opts)?)
}

/// Diagnostics recorded after every step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub v_mesh: f64,
    pub accepted: usize,
    /// Integral of every conserved component over the current mesh.
    pub totals: Vec<f64>,
    pub min_density: f64,
    /// Infinite for models without internal energy.
    pub min_internal_energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// L1 error of every conserved component.
    pub l1: Vec<f64>,
    /// Momentum overshoot against the exact plateaus (Riemann cases).
    pub overshoot: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Abort {
    pub step: usize,
    pub error: SolverError,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub case: String,
    pub scheme: SchemeId,
    pub grid: GridSpec<f64>,
    pub cfl: f64,
    pub gamma: f64,
    pub c_sound: f64,
    /// Time actually reached.
    pub time: f64,
    pub steps: usize,
    /// Cell centres of the reference grid.
    pub x: Vec<f64>,
    /// Final averages on the reference grid (last good state on abort).
    pub field: FieldData,
    pub history: Vec<StepRecord>,
    pub wall_time: Duration,
    pub error: Option<ErrorReport>,
    pub abort: Option<Abort>,
}

impl RunResult {
    pub fn succeeded(&self) -> bool {
        self.abort.is_none()
    }
}

fn record<M: CaseModel<N>, const N: usize>(sim: &Simulation<f64, M, N>, dt: f64, v_mesh: f64, accepted: usize) -> StepRecord {
    let lengths = lengths_from_edges(&sim.edges());
    let mut totals = vec![0.0; N];
    let (mut min_density, mut min_internal_energy) = (f64::INFINITY, f64::INFINITY);
    for (u, h) in sim.cells().iter().zip(&lengths) {
        for k in 0..N {
            totals[k] += u[k] * h;
        }
        min_density = min_density.min(M::density(u));
        min_internal_energy = min_internal_energy.min(sim.model().internal_energy(u));
    }
    StepRecord {
        step: sim.steps(),
        t: sim.time(),
        dt,
        v_mesh,
        accepted,
        totals,
        min_density,
        min_internal_energy,
    }
}

/// Reference field of a case at time `t` on the resolved grid.
pub fn reference_field<M: CaseModel<N>, const N: usize>(
    spec: &CaseSpec,
    opts: &RunOptions,
    t: f64,
    policy: &ReferencePolicy,
) -> Result<Option<FieldData>> {
    let r = resolve(spec, SchemeId::Godunov, opts)?;
    match (spec.reference, policy) {
        (_, ReferencePolicy::Skip) => Ok(None),
        (ReferenceKind::FineNt, ReferencePolicy::All(cfg)) => {
            let fine = fine_nt_field::<M, N>(spec, opts, t, cfg)?;
            let fine_grid = GridSpec::new(spec.x_min, spec.x_max, cfg.cells)?;
            Ok(Some(M::wrap(restrict(&fine, &fine_grid, &r.grid))))
        }
        _ => exact_reference(spec, &r.grid, t, r.gamma, r.c_sound),
    }
}

fn run_model<M: CaseModel<N>, const N: usize>(
    spec: &CaseSpec,
    scheme: SchemeId,
    opts: &RunOptions,
    policy: &ReferencePolicy,
) -> Result<RunResult> {
    let r = resolve(spec, scheme, opts)?;
    let mut sim = build_simulation::<M, N>(spec, scheme, opts)?;
    let start = Instant::now();
    let mut history = Vec::new();
    let mut abort = None;
    loop {
        let done = match opts.steps {
            Some(n) => sim.steps() >= n,
            None => sim.time() >= r.t_end,
        };
        if done {
            break;
        }
        match sim.step(opts.steps.is_none().then_some(r.t_end)) {
            Ok(rep) => history.push(record(&sim, rep.dt, rep.v_mesh, rep.accepted)),
            Err(e @ SolverError::Positivity { .. }) => {
                abort = Some(Abort { step: sim.steps() + 1, error: e });
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let wall_time = start.elapsed();
    let field = sim.reference_cells()?;
    let error = match abort {
        Some(_) => None,
        None => match reference_field::<M, N>(spec, opts, sim.time(), policy)? {
            Some(reference) => {
                let got = M::wrap(field.clone());
                let l1 = l1_fields(&got, &reference, r.grid.dx)?;
                let overshoot = expected_momenta(spec, r.gamma, r.c_sound)?
                    .map(|exp| overshoot_metric(&got.component(1), &exp));
                Some(ErrorReport { l1, overshoot })
            }
            None => None,
        },
    };
    Ok(RunResult {
        case: spec.name.to_string(),
        scheme: r.scheme,
        grid: r.grid,
        cfl: r.config.cfl,
        gamma: r.gamma,
        c_sound: r.c_sound,
        time: sim.time(),
        steps: sim.steps(),
        x: r.grid.centers(),
        field: M::wrap(field),
        history,
        wall_time,
        error,
        abort,
    })
}

/// Runs a case with one scheme.
pub fn run_case(spec: &CaseSpec, scheme: SchemeId, opts: &RunOptions, policy: &ReferencePolicy) -> Result<RunResult> {
    match spec.model {
        ModelKind::Burgers => run_model::<BurgersModel, 1>(spec, scheme, opts, policy),
        ModelKind::Isothermal => run_model::<Isothermal<f64>, 2>(spec, scheme, opts, policy),
        ModelKind::Gas => run_model::<IdealGas<f64>, 3>(spec, scheme, opts, policy),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderRow {
    pub cells: usize,
    pub dx: f64,
    pub l1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderStudy {
    pub rows: Vec<OrderRow>,
    /// Fitted order of the density (or scalar) error.
    pub order: Order,
}

/// Errors at several resolutions and the fitted convergence order. The
/// resolutions run in parallel.
pub fn order_study(
    spec: &CaseSpec,
    scheme: SchemeId,
    cells: &[usize],
    opts: &RunOptions,
    policy: &ReferencePolicy,
) -> Result<OrderStudy> {
    if matches!(policy, ReferencePolicy::Skip) || spec.reference == ReferenceKind::None {
        return Err(HarnessError::NoReference(spec.name.to_string()));
    }
    if spec.reference == ReferenceKind::FineNt {
        let ReferencePolicy::All(cfg) = policy else {
            return Err(HarnessError::NoReference(spec.name.to_string()));
        };
        // Fill the cache once instead of racing on it from every resolution.
        let t = opts.t_end.unwrap_or(spec.t_end);
        match spec.model {
            ModelKind::Burgers => drop(fine_nt_field::<BurgersModel, 1>(spec, opts, t, cfg)?),
            ModelKind::Isothermal => drop(fine_nt_field::<Isothermal<f64>, 2>(spec, opts, t, cfg)?),
            ModelKind::Gas => drop(fine_nt_field::<IdealGas<f64>, 3>(spec, opts, t, cfg)?),
        }
    }
    let rows = cells
        .par_iter()
        .map(|&n| {
            let opts = RunOptions { cells: Some(n), ..opts.clone() };
            let res = run_case(spec, scheme, &opts, policy)?;
            if let Some(a) = res.abort {
                return Err(HarnessError::Aborted { step: a.step, source: a.error });
            }
            let err = res.error.ok_or_else(|| HarnessError::NoReference(spec.name.to_string()))?;
            Ok(OrderRow { cells: n, dx: res.grid.dx, l1: err.l1 })
        })
        .collect::<Result<Vec<_>>>()?;
    let order = convergence_order(cells, &rows.iter().map(|r| r.l1[0]).collect::<Vec<_>>())?;
    Ok(OrderStudy { rows, order })
}
