use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn solverlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solverlab")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lists_every_case() {
    let out = solverlab(&["list-cases"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in solverlab_harness::registry().iter().map(|c| c.name) {
        assert!(text.contains(name), "{name} missing from listing");
    }
}

#[test]
fn run_writes_a_gas_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sms.csv");
    let out = solverlab(&["run", "--case", "gas-sms", "--scheme", "rec", "--cells", "50", "--out", path_str(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,rho,momentum,energy,velocity,pressure,internal_energy");
    assert_eq!(lines.count(), 50);
    assert!(String::from_utf8(out.stdout).unwrap().contains("l1 = ["));
}

#[test]
fn order_writes_slope_on_last_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("order.csv");
    let out = solverlab(&[
        "order", "--case", "iso-sms-riemann", "--scheme", "rec", "--cells", "50,100,200", "--out", path_str(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["cells", "dx", "l1_rho", "l1_momentum", "l1_energy", "slope"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][0], "50");
    assert!(rows[1][5].is_empty());
    let slope: f64 = rows[3][5].parse().unwrap();
    assert!(slope > 1.0, "slope {slope}");
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    let out = solverlab(&["run", "--case", "no-such-case", "--scheme", "rec", "--out", path_str(&csv)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-case"));

    let out = solverlab(&["run", "--case", "burgers-pure-shock", "--scheme", "rec", "--gamma", "1.4", "--out", path_str(&csv)]);
    assert_eq!(code(&out), 1);
    let out = solverlab(&["run", "--case", "blast", "--scheme", "upwind", "--out", path_str(&csv)]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&solverlab(&["run", "--bogus-flag"])), 1);
    assert!(!csv.exists());
}

#[test]
fn help_exits_cleanly() {
    let out = solverlab(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("list-cases"));
}

#[test]
fn positivity_abort_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("wall.csv");
    let out = solverlab(&["run", "--case", "wall-reflect", "--scheme", "nt", "--out", path_str(&csv)]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    // The state reached before the abort is still written.
    assert!(csv.exists());
}

#[test]
fn config_file_fills_in_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let csv = dir.path().join("b.csv");
    fs::write(&cfg, format!("# scalar run\ncase = burgers-pure-shock\nscheme = godunov\ncells = 40\nout = {}\n", path_str(&csv))).unwrap();
    let out = solverlab(&["run", "--config", path_str(&cfg), "--cells", "30"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,u");
    assert_eq!(text.lines().count(), 31);

    fs::write(&cfg, "case = blast\nwidth = 3\n").unwrap();
    assert_eq!(code(&solverlab(&["run", "--config", path_str(&cfg)])), 1);
}
