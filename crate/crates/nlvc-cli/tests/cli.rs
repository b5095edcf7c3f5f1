//! End-to-end tests of the binary: exit codes, CSV shape, file outputs and
//! run-to-run determinism.

use std::fs;
use std::process::{Command, Output};

fn nlvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlvc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn consistency_emits_the_full_table_deterministically() {
    let first = nlvc(&["consistency"]);
    assert!(first.status.success());
    let text = stdout(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "case,strategy,h,eps,eE,rateE,e0,rate0");
    assert_eq!(lines.len(), 1 + 16, "4 sweeps x 4 horizons");
    assert!(lines[1].starts_with("consistency_linear,neumann,2^-6,2^-2,"));
    assert!(lines[9].starts_with("consistency_cubic,neumann,"));

    // byte-identical repeat, also under a different thread count
    let again = nlvc(&["consistency"]);
    assert_eq!(first.stdout, again.stdout);
    let threaded = nlvc(&["consistency", "--threads", "3"]);
    assert!(threaded.status.success());
    assert_eq!(first.stdout, threaded.stdout);
}

#[test]
fn convergence_quadratic_row_shape() {
    let out = nlvc(&["convergence", "--mode", "quadratic", "--strategy", "dirichlet"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "local_limit");
    assert_eq!(first[1], "dirichlet");
    assert_eq!(first[2], "2^-4");
    assert_eq!(first[3], "2^-2");
    assert_eq!(first[5], "-", "first row has no rate");
    // fourth row pairs the finest grid with the smallest horizon
    let last: Vec<&str> = lines[4].split(',').collect();
    assert_eq!(last[2], "2^-10");
    assert_eq!(last[3], "2^-5");
    assert_ne!(last[5], "-");
}

#[test]
fn linear_mode_is_limited_to_the_neumann_strategy() {
    let out = nlvc(&["convergence", "--mode", "linear", "--strategy", "dirichlet"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("config error"), "{err}");
}

#[test]
fn compare_writes_curves_and_passes_its_assertions() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlvc(&["compare", "--case", "A", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3, "header plus one row per strategy");

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("compare-a.json")).unwrap())
            .unwrap();
    let curves = json["curves"].as_array().unwrap();
    assert!(curves.len() > 10);
    assert!(json["layer_gap_neumann"].as_f64().unwrap() > 9e-4);
    assert_eq!(json["layer_gap_dirichlet"].as_f64().unwrap(), 0.0);
    assert_eq!(json["metadata"]["quad_points"], 4);
    assert!(fs::metadata(dir.path().join("compare-a.csv")).is_ok());

    // lowercase alias accepted
    let out = nlvc(&["compare", "--case", "b"]);
    assert!(out.status.success());
}

#[test]
fn solve_runs_a_custom_sweep_with_rates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        r#"
[domain]
a = 0.0
b = 1.0

[kernel]
family = "constant-integrable"
epsilon_list = ["2^-2", "2^-3", "2^-4"]

[grid]
mode = "quadratic"

[problem]
source = [0.0, 0.0, 0.0, -20.0]
g_l = [2.0, 0.0, 0.0, 0.0, 5.0]
v_n = [0.0, 2.0, 0.0, 0.0, 0.0, 1.0]
strategy = "neumann"

[quad]
points = 4

[output]
formats = ["json"]
"#,
    )
    .unwrap();
    let out = nlvc(&["solve", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("custom,neumann,2^-4,2^-2,"));
    // rates fill from the second row on
    let row2: Vec<&str> = lines[2].split(',').collect();
    assert_ne!(row2[5], "-");
    // energy errors track the published quadratic-coupling magnitudes
    let e1: f64 = lines[1].split(',').nth(4).unwrap().parse().unwrap();
    assert!((e1 - 1.02e-1).abs() < 0.05 * 1.02e-1, "{e1}");

    // the debug dump produces triplet files for every cell
    let dump = dir.path().join("dump");
    let out2 = nlvc(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--dump-system",
        dump.to_str().unwrap(),
    ]);
    assert!(out2.status.success());
    let matrix_text = fs::read_to_string(dump.join("system-neumann-0-matrix.txt")).unwrap();
    let first: Vec<&str> = matrix_text.lines().next().unwrap().split(' ').collect();
    assert_eq!(first.len(), 3);
    let (i, j): (usize, usize) = (first[0].parse().unwrap(), first[1].parse().unwrap());
    assert!(j >= i, "upper-triangle rows");
    assert!(fs::metadata(dump.join("system-neumann-2-rhs.txt")).is_ok());

    // only JSON was requested
    assert!(fs::metadata(dir.path().join("solve.json")).is_ok());
    assert!(fs::metadata(dir.path().join("solve.csv")).is_err());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("solve.json")).unwrap()).unwrap();
    assert_eq!(json["results"][0]["records"].as_array().unwrap().len(), 3);
}

#[test]
fn solve_rejects_bad_configs_with_exit_2() {
    let out = nlvc(&["solve", "--config", "definitely-missing.toml"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        r#"
[domain]
a = 0.0
b = 1.0
typo_key = 3

[kernel]
family = "constant-integrable"
epsilon = "2^-2"

[grid]
mode = "fixed-h"
h = "2^-4"

[problem]
source = [0.0]
g_l = [1.0]
v_n = [0.0, 1.0]
strategy = "neumann"
"#,
    )
    .unwrap();
    let out = nlvc(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("config error"), "{err}");

    // misaligned grid surfaces as a config error with a hint
    let cfg2 = dir.path().join("misaligned.toml");
    fs::write(
        &cfg2,
        r#"
[domain]
a = 0.0
b = 1.0

[kernel]
family = "constant-integrable"
epsilon = "2^-2"

[grid]
mode = "fixed-h"
h = 0.3

[problem]
source = [0.0]
g_l = [1.0]
v_n = [0.0, 1.0]
strategy = "neumann"
"#,
    )
    .unwrap();
    let out = nlvc(&["solve", "--config", cfg2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("misaligned"), "{err}");
}

#[test]
fn check_passes_on_the_default_kernel() {
    let out = nlvc(&["check"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("check kernel moments vs quadrature: PASS"));
    assert!(text.contains("check nonlocal Gauss theorem: PASS"));
    assert!(text.contains("check: all properties hold"));
}

#[test]
fn unknown_subcommands_exit_2() {
    let out = nlvc(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
