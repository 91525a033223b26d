use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use solverlab_core::{Fallback, SchemeId, Selection};
use solverlab_harness::config::read_config;
use solverlab_harness::io::{write_order_file, write_run_file};
use solverlab_harness::{find_case, order_study, registry, run_case, FineNtConfig, HarnessError, ReferencePolicy, RunOptions};

#[derive(Parser)]
#[command(name = "solverlab", version, about = "1D finite-volume lab for in-cell shock reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered test cases.
    ListCases,
    /// Run one case with one scheme and write the final field as CSV.
    Run(RunArgs),
    /// Run a case at several resolutions and write the L1 errors as CSV.
    Order(OrderArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectionArg {
    OneShot,
    TwoShot,
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    Lxf,
    Nt,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    tend: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    c_sound: Option<f64>,
    #[arg(long)]
    safety: Option<f64>,
    #[arg(long, value_enum)]
    selection: Option<SelectionArg>,
    #[arg(long, value_enum)]
    coupling: Option<CouplingArg>,
    /// Cells of the fine Nessyahu-Tadmor reference (enables fine-grid errors).
    #[arg(long)]
    reference_cells: Option<usize>,
    /// File of `key = value` lines; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    cells: Option<usize>,
}

#[derive(Args)]
struct OrderArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated resolutions, e.g. 100,200,400.
    #[arg(long, value_delimiter = ',')]
    cells: Vec<usize>,
}

/// Errors of the command line, split by exit status.
enum Failure {
    Usage(String),
    Positivity(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::UnknownCase(_) | HarnessError::ModelMismatch { .. } | HarnessError::Config { .. } => {
                Failure::Usage(e.to_string())
            }
            HarnessError::Aborted { .. } => Failure::Positivity(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, Failure> {
    value.parse().map_err(|_| Failure::Usage(format!("config line {line}: bad value '{value}' for '{key}'")))
}

/// Fills options missing on the command line from the config file.
fn merge_config(common: &mut Common, cells: &mut Vec<usize>) -> Result<(), Failure> {
    let Some(path) = common.config.clone() else {
        return Ok(());
    };
    for e in read_config(&path)? {
        let (k, v, l) = (e.key.as_str(), e.value.as_str(), e.line);
        match k {
            "case" => common.case = common.case.take().or(Some(v.to_string())),
            "scheme" => common.scheme = common.scheme.take().or(Some(v.to_string())),
            "cfl" => common.cfl = common.cfl.or(Some(parse(k, v, l)?)),
            "tend" | "t-end" => common.tend = common.tend.or(Some(parse(k, v, l)?)),
            "gamma" => common.gamma = common.gamma.or(Some(parse(k, v, l)?)),
            "c-sound" => common.c_sound = common.c_sound.or(Some(parse(k, v, l)?)),
            "safety" => common.safety = common.safety.or(Some(parse(k, v, l)?)),
            "reference-cells" => common.reference_cells = common.reference_cells.or(Some(parse(k, v, l)?)),
            "selection" => {
                let s = SelectionArg::from_str(v, false).map_err(|_| Failure::Usage(format!("config line {l}: bad selection '{v}'")))?;
                common.selection = common.selection.or(Some(s));
            }
            "coupling" => {
                let c = CouplingArg::from_str(v, false).map_err(|_| Failure::Usage(format!("config line {l}: bad coupling '{v}'")))?;
                common.coupling = common.coupling.or(Some(c));
            }
            "out" => common.out = common.out.take().or(Some(PathBuf::from(v))),
            "cells" => {
                if cells.is_empty() {
                    *cells = v.split(',').map(|s| parse(k, s.trim(), l)).collect::<Result<_, _>>()?;
                }
            }
            _ => return Err(Failure::Usage(format!("config line {l}: unknown key '{k}'"))),
        }
    }
    Ok(())
}

struct Prepared {
    spec: solverlab_harness::CaseSpec,
    scheme: SchemeId,
    opts: RunOptions,
    policy: ReferencePolicy,
    out: PathBuf,
}

fn prepare(common: &Common, cells: Option<usize>) -> Result<Prepared, Failure> {
    let missing = |what: &str| Failure::Usage(format!("missing --{what}"));
    let spec = find_case(common.case.as_deref().ok_or_else(|| missing("case"))?)?;
    let scheme_name = common.scheme.as_deref().ok_or_else(|| missing("scheme"))?;
    let scheme = SchemeId::from_str(scheme_name).map_err(|e| Failure::Usage(e.to_string()))?;
    let out = common.out.clone().ok_or_else(|| missing("out"))?;
    let opts = RunOptions {
        cells,
        cfl: common.cfl,
        t_end: common.tend,
        gamma: common.gamma,
        c_sound: common.c_sound,
        safety: common.safety,
        selection: common.selection.map(|s| match s {
            SelectionArg::OneShot => Selection::OneShot,
            SelectionArg::TwoShot => Selection::TwoShot,
        }),
        coupling: common.coupling.map(|c| match c {
            CouplingArg::Lxf => Fallback::Lxf,
            CouplingArg::Nt => Fallback::Nt,
        }),
        ..Default::default()
    };
    let policy = match common.reference_cells {
        Some(n) => ReferencePolicy::All(FineNtConfig { cells: n, cache_dir: cache_dir_for(&out), ..Default::default() }),
        None => ReferencePolicy::Exact,
    };
    Ok(Prepared { spec, scheme, opts, policy, out })
}

/// Fine references are cached next to the outputs.
fn cache_dir_for(out: &Path) -> PathBuf {
    out.parent().unwrap_or(Path::new(".")).join(".solverlab-cache")
}

fn list_cases() {
    // A closed pipe (`| head`) is not an error worth reporting.
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{:<24} {:<11} {:>6} {:>6} {:>8}  description", "name", "model", "cells", "cfl", "t_end");
    for c in registry() {
        let line = format!("{:<24} {:<11} {:>6} {:>6} {:>8}  {}", c.name, c.model.as_str(), c.cells, c.cfl, c.t_end, c.description);
        if writeln!(out, "{line}").is_err() {
            return;
        }
    }
}

fn run(mut args: RunArgs) -> Result<(), Failure> {
    let mut config_cells = Vec::new();
    merge_config(&mut args.common, &mut config_cells)?;
    let cells = args.cells.or(config_cells.first().copied());
    let p = prepare(&args.common, cells)?;
    let res = run_case(&p.spec, p.scheme, &p.opts, &p.policy)?;
    write_run_file(&p.out, &res)?;
    println!(
        "{} {} cells={} steps={} t={} wall={:.3}s",
        res.case,
        res.scheme,
        res.grid.n_cells,
        res.steps,
        res.time,
        res.wall_time.as_secs_f64()
    );
    if let Some(err) = &res.error {
        let l1: Vec<String> = err.l1.iter().map(|e| format!("{e:.6e}")).collect();
        println!("l1 = [{}]", l1.join(", "));
        if let Some(o) = err.overshoot {
            println!("overshoot = {o:.6e}");
        }
    }
    match res.abort {
        Some(a) => Err(HarnessError::Aborted { step: a.step, source: a.error }.into()),
        None => Ok(()),
    }
}

fn order(mut args: OrderArgs) -> Result<(), Failure> {
    merge_config(&mut args.common, &mut args.cells)?;
    if args.cells.is_empty() {
        return Err(Failure::Usage("missing --cells".into()));
    }
    let p = prepare(&args.common, None)?;
    let study = order_study(&p.spec, p.scheme, &args.cells, &p.opts, &p.policy)?;
    write_order_file(&p.out, &study)?;
    for row in &study.rows {
        println!("{:>7} cells  l1 = {:.6e}", row.cells, row.l1[0]);
    }
    println!("order = {}", study.order);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::ListCases => {
            list_cases();
            Ok(())
        }
        Command::Run(args) => run(args),
        Command::Order(args) => order(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Positivity(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
