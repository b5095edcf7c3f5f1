//! Command-line front end: pre-registered consistency/convergence/comparison
//! experiments plus custom runs from a config file.
//!
//! The CSV for every run goes to stdout; `--out DIR` additionally writes
//! `<name>.csv` and `<name>.json` (full precision plus solver metadata).
//! Exit codes: 0 success, 1 assertion or property failure, 2 config error.

mod check;
mod config;
mod output;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nlvc_core::domain::{build_domain, build_mesh};
use nlvc_core::error::Error as CoreError;
use nlvc_core::harness::{self, ComparisonCase, GridMode};
use nlvc_core::metrics::{self, ConvergenceRecord};
use nlvc_core::strategies::{self, ConversionProblem};
use nlvc_core::{Field, Kernel, Strategy};

use config::SolvePlan;
use output::JsonDocument;

#[derive(Parser)]
#[command(
    name = "nlvc",
    version,
    about = "1D nonlocal diffusion with volume constraints: converts surface flux data into layer data and reproduces the consistency and local-limit convergence studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for independent sweep cells (fallback: NLVC_THREADS,
    /// then 1). Output is identical for any thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory that receives <name>.csv and <name>.json next to the
    /// stdout CSV.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Linear and cubic consistency sweeps, both strategies, fixed grid.
    Consistency,
    /// Local-limit convergence sweep for one grid rule and strategy.
    Convergence {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
    },
    /// Both strategies on one benchmark, with solution curves near the flux
    /// layer.
    Compare {
        #[arg(long, value_enum)]
        case: CaseArg,
    },
    /// One custom run described by a TOML config file.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Debug: dump each assembled matrix/load pair as plain-text
        /// triplets into this directory.
        #[arg(long, value_name = "DIR")]
        dump_system: Option<PathBuf>,
    },
    /// Property suite: operator identities, kernel moments, matrix
    /// structure.
    Check,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(name = "fixed-h")]
    FixedH,
    Quadratic,
    Linear,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<ModeArg> for GridMode {
    fn from(m: ModeArg) -> GridMode {
        match m {
            ModeArg::FixedH => GridMode::FixedH,
            ModeArg::Quadratic => GridMode::Quadratic,
            ModeArg::Linear => GridMode::Linear,
        }
    }
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Neumann => Strategy::Neumann,
            StrategyArg::Dirichlet => Strategy::Dirichlet,
        }
    }
}

enum Failure {
    /// Bad configuration or request; exit 2.
    Config(String),
    /// A solver-side assertion did not hold; exit 1.
    Assertion(String),
}

impl From<config::ConfigError> for Failure {
    fn from(e: config::ConfigError) -> Failure {
        Failure::Config(e.0)
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        match e {
            CoreError::InvalidGeometry { .. }
            | CoreError::MisalignedHorizon { .. }
            | CoreError::MisalignedDomain { .. }
            | CoreError::InvalidQuadrature { .. }
            | CoreError::UnsupportedCombination => Failure::Config(format!(
                "{e}\nhint: grids must satisfy eps/h and (b-a)/h integral; the linear grid rule is registered for the Neumann strategy only"
            )),
            other => Failure::Assertion(format!("{other}")),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Assertion(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = resolve_threads(cli.threads);
    let result = match cli.command {
        Command::Consistency => cmd_consistency(threads, cli.out.as_deref()),
        Command::Convergence { mode, strategy } => {
            cmd_convergence(mode.into(), strategy.into(), threads, cli.out.as_deref())
        }
        Command::Compare { case } => cmd_compare(case, threads, cli.out.as_deref()),
        Command::Solve { config, dump_system } => {
            cmd_solve(&config, threads, cli.out.as_deref(), dump_system.as_deref())
        }
        Command::Check => cmd_check(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("NLVC_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}

fn cmd_consistency(threads: usize, out: Option<&std::path::Path>) -> Result<(), Failure> {
    let cases = harness::consistency_suite();
    let sets = runner::run_cases(&cases, threads)?;
    let csv = output::result_sets_csv(&sets);
    print!("{csv}");
    if let Some(dir) = out {
        let doc = JsonDocument {
            command: "consistency".to_string(),
            metadata: output::metadata(4, threads),
            results: sets.iter().map(output::sweep_json).collect(),
            curves: None,
            layer_gap_neumann: None,
            layer_gap_dirichlet: None,
        };
        output::write_files(dir, "consistency", &csv, &doc, &both_formats())?;
    }
    Ok(())
}

fn cmd_convergence(
    mode: GridMode,
    strategy: Strategy,
    threads: usize,
    out: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let case = harness::convergence_case(mode, strategy)?;
    let sets = runner::run_cases(std::slice::from_ref(&case), threads)?;
    let csv = output::result_sets_csv(&sets);
    print!("{csv}");
    if let Some(dir) = out {
        let stem = format!(
            "convergence-{}-{}",
            mode_name(mode),
            strategy.name()
        );
        let doc = JsonDocument {
            command: format!("convergence --mode {} --strategy {}", mode_name(mode), strategy.name()),
            metadata: output::metadata(4, threads),
            results: sets.iter().map(output::sweep_json).collect(),
            curves: None,
            layer_gap_neumann: None,
            layer_gap_dirichlet: None,
        };
        output::write_files(dir, &stem, &csv, &doc, &both_formats())?;
    }
    Ok(())
}

fn mode_name(mode: GridMode) -> &'static str {
    match mode {
        GridMode::FixedH => "fixed-h",
        GridMode::Quadratic => "quadratic",
        GridMode::Linear => "linear",
    }
}

fn cmd_compare(case: CaseArg, threads: usize, out: Option<&std::path::Path>) -> Result<(), Failure> {
    let which = match case {
        CaseArg::A => ComparisonCase::A,
        CaseArg::B => ComparisonCase::B,
    };
    let cmp = harness::run_comparison(which)?;
    let csv = output::comparison_csv(&cmp);
    print!("{csv}");
    if let Some(dir) = out {
        let stem = format!("compare-{}", match case {
            CaseArg::A => "a",
            CaseArg::B => "b",
        });
        let doc = JsonDocument {
            command: format!("compare --case {}", stem.trim_start_matches("compare-")),
            metadata: output::metadata(4, threads),
            results: Vec::new(),
            curves: Some(output::curves_json(&cmp.curves)),
            layer_gap_neumann: Some(cmp.neumann_layer_gap),
            layer_gap_dirichlet: Some(cmp.dirichlet_layer_mismatch),
        };
        output::write_files(dir, &stem, &csv, &doc, &both_formats())?;
    }
    // the qualitative claims behind the comparison
    if cmp.dirichlet_layer_mismatch != 0.0 {
        return Err(Failure::Assertion(format!(
            "Dirichlet-route solution must pin the surrogate on the layer exactly (mismatch {:.3e})",
            cmp.dirichlet_layer_mismatch
        )));
    }
    if cmp.neumann_layer_gap <= 10.0 * harness::CONSISTENCY_FLOOR {
        return Err(Failure::Assertion(format!(
            "Neumann-route layer gap {:.3e} is not clearly above the discretization floor",
            cmp.neumann_layer_gap
        )));
    }
    Ok(())
}

fn cmd_solve(
    path: &std::path::Path,
    threads: usize,
    out: Option<&std::path::Path>,
    dump_system: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let plan = config::load(path)?;
    let _ = threads; // cells of a custom run execute in sweep order

    let mut sweeps: Vec<(Strategy, Vec<ConvergenceRecord>)> = Vec::new();
    for &strategy in &plan.strategies {
        let mut records = Vec::with_capacity(plan.epsilons.len());
        for &eps in &plan.epsilons {
            records.push(solve_cell(&plan, strategy, eps)?);
        }
        let halving = plan
            .epsilons
            .windows(2)
            .all(|w| (w[0] / w[1] - 2.0).abs() <= 1e-9);
        if halving && plan.epsilons.len() > 1 {
            records = metrics::rates(records)?;
        }
        sweeps.push((strategy, records));
    }

    let mut csv = String::from(output::CSV_HEADER);
    csv.push('\n');
    for (strategy, records) in &sweeps {
        for rec in records {
            csv.push_str(&output::csv_row("custom", *strategy, rec));
            csv.push('\n');
        }
    }
    print!("{csv}");

    let out_dir: Option<PathBuf> = out
        .map(|p| p.to_path_buf())
        .or_else(|| plan.out_path.as_ref().map(PathBuf::from));
    if let Some(dir) = out_dir {
        let doc = JsonDocument {
            command: "solve".to_string(),
            metadata: output::metadata(plan.quad.points, threads),
            results: sweeps
                .iter()
                .map(|(strategy, records)| output::JsonSweep {
                    case: "custom".to_string(),
                    strategy: strategy.name().to_string(),
                    grid_rule: mode_name(plan.mode).to_string(),
                    records: records.iter().map(output::JsonRecord::from).collect(),
                })
                .collect(),
            curves: None,
            layer_gap_neumann: None,
            layer_gap_dirichlet: None,
        };
        output::write_files(&dir, "solve", &csv, &doc, &plan.formats)?;
    }
    if let Some(dir) = dump_system {
        dump_assembled_systems(&plan, dir)?;
    }
    Ok(())
}

/// Reassembles every cell of the plan and writes the raw system for
/// cross-checking; assembly is deterministic, so the dumped entries are the
/// ones the run factorized.
fn dump_assembled_systems(plan: &SolvePlan, dir: &std::path::Path) -> Result<(), Failure> {
    use nlvc_core::fem::{self, NodalField};
    use nlvc_core::strategies::LayerForce;
    for &strategy in &plan.strategies {
        for (k, &eps) in plan.epsilons.iter().enumerate() {
            let domain = build_domain(plan.a, plan.b, eps)?;
            let mesh = build_mesh(&domain, plan.grid_spacing(eps))?;
            let kernel = Kernel::constant(eps);
            let problem = ConversionProblem::new(
                domain,
                kernel,
                mesh.clone(),
                Field::Poly(plan.source.clone()),
                plan.flux_of_eps.eval(eps),
                Field::Poly(plan.volume_data.clone()),
                plan.quad,
            );
            let matrix = fem::assemble_stiffness(&mesh, &kernel, &plan.quad)?;
            let rhs = match strategy {
                Strategy::Neumann => {
                    let u_l = problem.surrogate()?;
                    let projected = NodalField::interpolate(&mesh, &u_l);
                    let force = LayerForce::new(&projected, &kernel, &domain);
                    fem::assemble_load(&mesh, &problem.source, Some(&force), &plan.quad)
                }
                Strategy::Dirichlet => {
                    fem::assemble_load(&mesh, &problem.source, None, &plan.quad)
                }
            };
            let stem = format!("system-{}-{k}", strategy.name());
            output::write_system(dir, &stem, &matrix, &rhs)?;
        }
    }
    Ok(())
}

fn solve_cell(plan: &SolvePlan, strategy: Strategy, eps: f64) -> Result<ConvergenceRecord, Failure> {
    let domain = build_domain(plan.a, plan.b, eps)?;
    let h = plan.grid_spacing(eps);
    let mesh = build_mesh(&domain, h)?;
    let problem = ConversionProblem::new(
        domain,
        Kernel::constant(eps),
        mesh,
        Field::Poly(plan.source.clone()),
        plan.flux_of_eps.eval(eps),
        Field::Poly(plan.volume_data.clone()),
        plan.quad,
    );
    let result = strategies::run(strategy, &problem)?;
    let pair = metrics::errors(
        &result.solution,
        &result.local_solution,
        &problem.kernel,
        &problem.quad,
    );
    Ok(ConvergenceRecord {
        h,
        epsilon: eps,
        e_energy: pair.energy,
        rate_energy: None,
        e_l2: pair.l2,
        rate_l2: None,
    })
}

fn cmd_check() -> Result<(), Failure> {
    if check::run() {
        Ok(())
    } else {
        Err(Failure::Assertion(
            "property suite reported failures".to_string(),
        ))
    }
}

fn both_formats() -> Vec<String> {
    vec!["csv".to_string(), "json".to_string()]
}
