//! Exact and fine-grid reference solutions, as cell averages on a run grid.

use std::fs;
use std::path::{Path, PathBuf};

use solverlab_core::grid::{gauss_legendre5, remap_between};
use solverlab_core::riemann::{
    gas_star, iso_shock_speed, iso_star, rh_residual, sample_gas, sample_iso, GasState, IsoState,
};
use solverlab_core::scalar::exact_compression;
use solverlab_core::{GridSpec, IdealGas, Isothermal, Model, SchemeId};

use crate::cases::{CaseSpec, Initial, ModelKind, ReferenceKind, REGISTRY_VERSION};
use crate::error::{HarnessError, Result};
use crate::models::{CaseModel, FieldData};
use crate::run::{build_simulation, simulation_from, RunOptions};

/// Largest Rankine-Hugoniot residual accepted for an exact shock reference.
pub const RH_TOLERANCE: f64 = 1e-10;

/// Exact cell averages of the discontinuity `left | right` started at `x0`
/// and travelling at `sigma`, after time `t`.
pub fn exact_pure_shock_average<M: Model<f64, N>, const N: usize>(
    model: &M,
    left: &[f64; N],
    right: &[f64; N],
    sigma: f64,
    x0: f64,
    t: f64,
    edges: &[f64],
) -> Result<Vec<[f64; N]>> {
    let res = rh_residual(model, left, right, sigma);
    if res.iter().any(|r| !(*r <= RH_TOLERANCE)) {
        return Err(HarnessError::BadReference(format!("not a Rankine-Hugoniot pair: residual {res:?}")));
    }
    let xs = x0 + sigma * t;
    Ok(edges
        .windows(2)
        .map(|w| {
            if xs <= w[0] {
                *right
            } else if xs >= w[1] {
                *left
            } else {
                let theta = (xs - w[0]) / (w[1] - w[0]);
                std::array::from_fn(|k| theta * left[k] + (1.0 - theta) * right[k])
            }
        })
        .collect())
}

/// Exact averages of the isentropic compression; the profile is piecewise
/// linear, so splitting at its kinks makes the quadrature exact.
pub fn exact_compression_average(edges: &[f64], t: f64) -> Vec<[f64; 1]> {
    let kinks: Vec<f64> = if t < 1.0 { vec![-3.0 + 3.0 * t, -1.0 + t] } else { vec![2.0 * (t - 1.0)] };
    edges
        .windows(2)
        .map(|w| [piecewise_average(|x| [exact_compression(t, x)], &kinks, w[0], w[1], 1)[0]])
        .collect()
}

/// Average of `f` over `[a, b]`, splitting at the `breaks` inside and using
/// `panels` Gauss-Legendre panels per piece.
fn piecewise_average<const N: usize>(f: impl Fn(f64) -> [f64; N], breaks: &[f64], a: f64, b: f64, panels: usize) -> [f64; N] {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    let mut acc = [0.0; N];
    for w in cuts.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for i in 0..panels {
            let lo = w[0] + i as f64 * h;
            let part = gauss_legendre5(&f, lo, lo + h);
            for k in 0..N {
                acc[k] += part[k];
            }
        }
    }
    acc.map(|s| s / (b - a))
}

/// Panels per smooth piece; only rarefaction fans are not constant.
const FAN_PANELS: usize = 8;

fn self_similar_average<const N: usize>(
    sample: impl Fn(f64) -> [f64; N],
    speeds: &[f64],
    x0: f64,
    t: f64,
    edges: &[f64],
) -> Vec<[f64; N]> {
    if t <= 0.0 {
        let (l, r) = (sample(f64::NEG_INFINITY), sample(f64::INFINITY));
        return edges
            .windows(2)
            .map(|w| {
                let theta = ((x0 - w[0]) / (w[1] - w[0])).clamp(0.0, 1.0);
                std::array::from_fn(|k| theta * l[k] + (1.0 - theta) * r[k])
            })
            .collect();
    }
    let breaks: Vec<f64> = speeds.iter().map(|s| x0 + s * t).collect();
    edges
        .windows(2)
        .map(|w| piecewise_average(|x| sample((x - x0) / t), &breaks, w[0], w[1], FAN_PANELS))
        .collect()
}

/// Exact averages of an isothermal Riemann problem.
pub fn iso_riemann_average(left: [f64; 2], right: [f64; 2], c: f64, x0: f64, t: f64, edges: &[f64]) -> Result<Vec<[f64; 2]>> {
    let (l, r) = (IsoState::from_conserved(&left), IsoState::from_conserved(&right));
    let st = iso_star(l, r, c)?;
    let mut speeds = Vec::new();
    if st.rho_star > l.rho {
        speeds.push(iso_shock_speed(1, l, st.rho_star, c)?);
    } else {
        speeds.extend([l.u - c, st.u_star - c]);
    }
    if st.rho_star > r.rho {
        speeds.push(iso_shock_speed(2, r, st.rho_star, c)?);
    } else {
        speeds.extend([st.u_star + c, r.u + c]);
    }
    Ok(self_similar_average(|xi| sample_iso(l, r, &st, c, xi).conserved(), &speeds, x0, t, edges))
}

/// Exact averages of an ideal-gas Riemann problem.
pub fn gas_riemann_average(left: [f64; 3], right: [f64; 3], gamma: f64, x0: f64, t: f64, edges: &[f64]) -> Result<Vec<[f64; 3]>> {
    let (l, r) = (GasState::from_conserved(&left, gamma), GasState::from_conserved(&right, gamma));
    let st = gas_star(l, r, gamma)?;
    let g1 = (gamma - 1.0) / (2.0 * gamma);
    let g2 = (gamma + 1.0) / (2.0 * gamma);
    let (cl, cr) = (l.sound_speed(gamma), r.sound_speed(gamma));
    let mut speeds = Vec::new();
    if st.p_star > l.p {
        speeds.push(l.u - cl * (g2 * st.p_star / l.p + g1).sqrt());
    } else {
        speeds.extend([l.u - cl, st.u_star - cl * (st.p_star / l.p).powf(g1)]);
    }
    speeds.push(st.u_star);
    if st.p_star > r.p {
        speeds.push(r.u + cr * (g2 * st.p_star / r.p + g1).sqrt());
    } else {
        speeds.extend([st.u_star + cr * (st.p_star / r.p).powf(g1), r.u + cr]);
    }
    Ok(self_similar_average(|xi| sample_gas(l, r, &st, gamma, xi).conserved(gamma), &speeds, x0, t, edges))
}

/// Momentum values the exact solution of a Riemann-type case takes on its
/// constant regions, or `None` for other cases.
pub fn expected_momenta(spec: &CaseSpec, gamma: f64, c: f64) -> Result<Option<Vec<f64>>> {
    let Initial::Riemann { left, right, .. } = &spec.initial else {
        return Ok(None);
    };
    Ok(match spec.model {
        ModelKind::Burgers => None,
        ModelKind::Isothermal => {
            let (l, r) = (IsoState::new(left[0], left[1]), IsoState::new(right[0], right[1]));
            let st = iso_star(l, r, c)?;
            Some(vec![l.rho * l.u, st.rho_star * st.u_star, r.rho * r.u])
        }
        ModelKind::Gas => {
            let (l, r) = (GasState::new(left[0], left[1], left[2]), GasState::new(right[0], right[1], right[2]));
            let st = gas_star(l, r, gamma)?;
            Some(vec![l.rho * l.u, st.rho_star_l * st.u_star, st.rho_star_r * st.u_star, r.rho * r.u])
        }
    })
}

/// Settings of the fine-grid Nessyahu-Tadmor reference.
#[derive(Debug, Clone, PartialEq)]
pub struct FineNtConfig {
    pub cells: usize,
    pub cfl: f64,
    pub cache_dir: PathBuf,
}

impl Default for FineNtConfig {
    fn default() -> Self {
        let cache_dir = std::env::var_os("SOLVERLAB_CACHE")
            .map(PathBuf::from)
            .unwrap_or_else(|| std::env::temp_dir().join("solverlab-cache"));
        Self { cells: 30_000, cfl: 0.48, cache_dir }
    }
}

/// Exact reference for the analytic reference kinds (`Ok(None)` for
/// fine-grid and missing references).
pub fn exact_reference(spec: &CaseSpec, grid: &GridSpec<f64>, t: f64, gamma: f64, c: f64) -> Result<Option<FieldData>> {
    let edges = grid.edges();
    let riemann = || match &spec.initial {
        Initial::Riemann { x0, left, right } => Ok((*x0, left.clone(), right.clone())),
        _ => Err(HarnessError::BadReference(format!("case '{}' is not a Riemann problem", spec.name))),
    };
    Ok(Some(match (spec.reference, spec.model) {
        (ReferenceKind::ExactShock, kind) => {
            let (x0, l, r) = riemann()?;
            match kind {
                ModelKind::Burgers => FieldData::Scalar(shock_reference(&solverlab_core::BurgersModel::default(), &l, &r, x0, t, &edges)?),
                ModelKind::Isothermal => FieldData::Iso(shock_reference(&Isothermal::new(c), &l, &r, x0, t, &edges)?),
                ModelKind::Gas => FieldData::Gas(shock_reference(&IdealGas::new(gamma), &l, &r, x0, t, &edges)?),
            }
        }
        (ReferenceKind::ExactCompression, ModelKind::Burgers) => FieldData::Scalar(exact_compression_average(&edges, t)),
        (ReferenceKind::ExactRiemann, ModelKind::Isothermal) => {
            let (x0, l, r) = riemann()?;
            let m = Isothermal::new(c);
            FieldData::Iso(iso_riemann_average(m.conserved(&l), m.conserved(&r), c, x0, t, &edges)?)
        }
        (ReferenceKind::ExactRiemann, ModelKind::Gas) => {
            let (x0, l, r) = riemann()?;
            let m = IdealGas::new(gamma);
            FieldData::Gas(gas_riemann_average(m.conserved(&l), m.conserved(&r), gamma, x0, t, &edges)?)
        }
        (ReferenceKind::ExactReflection, ModelKind::Gas) => {
            let Initial::Pieces { states, .. } = &spec.initial else {
                return Err(HarnessError::BadReference("reflection needs a uniform initial state".into()));
            };
            let m = IdealGas::new(gamma);
            let w = m.conserved(&states[0]);
            FieldData::Gas(gas_riemann_average(w, m.mirror(&w), gamma, spec.x_max, t, &edges)?)
        }
        (ReferenceKind::FineNt | ReferenceKind::None, _) => return Ok(None),
        (kind, model) => {
            return Err(HarnessError::BadReference(format!(
                "{} reference is not defined for {} cases",
                kind.as_str(),
                model.as_str()
            )))
        }
    }))
}

fn shock_reference<M: CaseModel<N>, const N: usize>(
    model: &M,
    left: &[f64],
    right: &[f64],
    x0: f64,
    t: f64,
    edges: &[f64],
) -> Result<Vec<[f64; N]>> {
    let (l, r) = (model.conserved(left), model.conserved(right));
    let (fl, fr) = (model.flux(&l), model.flux(&r));
    let sigma = (fr[0] - fl[0]) / (r[0] - l[0]);
    exact_pure_shock_average(model, &l, &r, sigma, x0, t, edges)
}

fn cache_prefix(spec: &CaseSpec, cfg: &FineNtConfig) -> String {
    format!("{}-v{}-n{}-cfl{}-t", spec.family, REGISTRY_VERSION, cfg.cells, cfg.cfl)
}

fn cache_path(spec: &CaseSpec, cfg: &FineNtConfig, t: f64) -> PathBuf {
    cfg.cache_dir.join(format!("{}{t}.csv", cache_prefix(spec, cfg)))
}

fn read_cache<const N: usize>(path: &Path, cells: usize) -> Option<Vec<[f64; N]>> {
    let mut reader = csv::Reader::from_path(path).ok()?;
    let mut out = Vec::with_capacity(cells);
    for record in reader.records() {
        let record = record.ok()?;
        if record.len() != N {
            return None;
        }
        let mut row = [0.0; N];
        for (k, field) in record.iter().enumerate() {
            row[k] = field.parse().ok()?;
        }
        out.push(row);
    }
    (out.len() == cells).then_some(out)
}

fn write_cache<const N: usize>(path: &Path, cells: &[[f64; N]]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    // Write-then-rename so an interrupted run never leaves a torn cache.
    let tmp = path.with_extension("csv.partial");
    let mut writer = csv::Writer::from_path(&tmp)?;
    writer.write_record((0..N).map(|k| format!("u{k}")))?;
    for row in cells {
        writer.write_record(row.iter().map(|v| v.to_string()))?;
    }
    writer.flush()?;
    drop(writer);
    fs::rename(tmp, path)?;
    Ok(())
}

/// Latest cached fine field of the same family at a time not after `t`.
fn latest_cached<const N: usize>(spec: &CaseSpec, cfg: &FineNtConfig, t: f64) -> Option<(f64, Vec<[f64; N]>)> {
    let prefix = cache_prefix(spec, cfg);
    let mut best: Option<(f64, PathBuf)> = None;
    for entry in fs::read_dir(&cfg.cache_dir).ok()?.flatten() {
        let name = entry.file_name().to_string_lossy().into_owned();
        let Some(ts) = name.strip_prefix(&prefix).and_then(|s| s.strip_suffix(".csv")) else {
            continue;
        };
        let Ok(tc) = ts.parse::<f64>() else { continue };
        if tc <= t && best.as_ref().is_none_or(|(b, _)| tc > *b) {
            best = Some((tc, entry.path()));
        }
    }
    let (tc, path) = best?;
    read_cache(&path, cfg.cells).map(|f| (tc, f))
}

/// Fine Nessyahu-Tadmor solution at `t`, from the cache when possible.
/// Cached fields of the same family at earlier times are continued rather
/// than recomputed; unreadable cache files are ignored and overwritten.
pub fn fine_nt_field<M: CaseModel<N>, const N: usize>(
    spec: &CaseSpec,
    opts: &RunOptions,
    t: f64,
    cfg: &FineNtConfig,
) -> Result<Vec<[f64; N]>> {
    let path = cache_path(spec, cfg, t);
    if let Some(field) = read_cache(&path, cfg.cells) {
        return Ok(field);
    }
    let fine_opts = RunOptions { cells: Some(cfg.cells), cfl: Some(cfg.cfl), coupling: None, ..opts.clone() };
    let (t0, mut sim) = match latest_cached::<N>(spec, cfg, t) {
        Some((tc, cells)) => (tc, simulation_from::<M, N>(spec, SchemeId::Nt, &fine_opts, cells)?),
        None => (0.0, build_simulation::<M, N>(spec, SchemeId::Nt, &fine_opts)?),
    };
    if t > t0 {
        sim.run_until(t - t0, |_, _| {})?;
    }
    let field = sim.reference_cells()?;
    write_cache(&path, &field)?;
    Ok(field)
}

/// Conservative average of a fine field onto `coarse`.
pub fn restrict<const N: usize>(fine: &[[f64; N]], fine_grid: &GridSpec<f64>, coarse: &GridSpec<f64>) -> Vec<[f64; N]> {
    let ratio = fine.len() / coarse.n_cells;
    if ratio * coarse.n_cells == fine.len() && fine_grid.x_min == coarse.x_min && fine_grid.x_max == coarse.x_max {
        return fine
            .chunks(ratio)
            .map(|block| {
                let mut acc = [0.0; N];
                for u in block {
                    for k in 0..N {
                        acc[k] += u[k];
                    }
                }
                acc.map(|s| s / ratio as f64)
            })
            .collect();
    }
    remap_between(fine, &fine_grid.edges(), &coarse.edges(), fine[0], fine[fine.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use solverlab_core::BurgersModel;

    #[test]
    fn pure_shock_geometry() {
        let m = BurgersModel::default();
        let edges: Vec<f64> = (0..=10).map(|k| k as f64 * 0.1).collect();
        let at0 = exact_pure_shock_average(&m, &[3.0], &[1.0], 2.0, edges[3], 0.0, &edges).unwrap();
        assert!(at0[..3].iter().all(|u| u[0] == 3.0) && at0[3..].iter().all(|u| u[0] == 1.0));
        // Shock at 0.3 + 2 * 0.035 = 0.37: cell [0.3, 0.4] holds 70 % of the left state.
        let f = exact_pure_shock_average(&m, &[3.0], &[1.0], 2.0, 0.3, 0.035, &edges).unwrap();
        assert!((f[3][0] - (0.7 * 3.0 + 0.3 * 1.0)).abs() < 1e-13);
        assert!(exact_pure_shock_average(&m, &[3.0], &[1.0], 1.5, 0.3, 0.1, &edges).is_err());
    }

    #[test]
    fn pure_shock_matches_fine_quadrature() {
        let m = BurgersModel::default();
        let edges: Vec<f64> = (0..=20).map(|k| k as f64 * 0.05).collect();
        let f = exact_pure_shock_average(&m, &[3.0], &[1.0], 2.0, 0.1, 0.35, &edges).unwrap();
        for (w, u) in edges.windows(2).zip(&f) {
            let n = 100_000;
            let h = (w[1] - w[0]) / n as f64;
            let q: f64 = (0..n).map(|i| if w[0] + (i as f64 + 0.5) * h < 0.8 { 3.0 } else { 1.0 }).sum::<f64>() / n as f64;
            assert!((u[0] - q).abs() < 1e-4);
        }
    }

    #[test]
    fn compression_reference_is_exact_on_linear_pieces() {
        let edges: Vec<f64> = (0..=60).map(|k| -4.0 + k as f64 * 0.1).collect();
        let f = exact_compression_average(&edges, 0.0);
        let mass: f64 = f.iter().map(|u| u[0] * 0.1).sum();
        // 3 on [-4,-3], linear ramp on [-3,-1] (mean 2), 1 on [-1,2].
        assert!((mass - (3.0 + 4.0 + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn riemann_average_of_a_pure_contact() {
        let gamma = 1.4;
        let m = IdealGas::new(gamma);
        let (l, r) = (m.conserved(&[2.0, 0.5, 1.0]), m.conserved(&[1.0, 0.5, 1.0]));
        let edges: Vec<f64> = (0..=10).map(|k| k as f64 * 0.1).collect();
        let f = gas_riemann_average(l, r, gamma, 0.5, 0.25, &edges).unwrap();
        // Contact at 0.625.
        assert!((f[6][0] - (0.25 * 2.0 + 0.75)).abs() < 1e-10);
        assert!((f[2][0] - 2.0).abs() < 1e-10 && (f[8][0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn restriction_examples() {
        let fine_grid = GridSpec::new(0.0, 1.0, 30).unwrap();
        let coarse = GridSpec::new(0.0, 1.0, 10).unwrap();
        assert!(restrict(&vec![[2.5]; 30], &fine_grid, &coarse).iter().all(|u| (u[0] - 2.5).abs() < 1e-15));
        let fine: Vec<[f64; 1]> = (0..30).map(|j| [j as f64]).collect();
        let c = restrict(&fine, &fine_grid, &coarse);
        assert_eq!(c[0][0], 1.0);
        assert_eq!(c[9][0], 28.0);
    }
}
