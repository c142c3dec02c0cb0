//! `popdyn` — scenario-driven command line for discrete-time population
//! dynamics: trajectory simulation, equilibrium stability reports,
//! basin-of-attraction scans, and optimal-harvesting sweeps.
//!
//! Every subcommand loads one TOML scenario file, runs it, writes CSV
//! artifacts plus a JSON run manifest into the output directory, and prints
//! a one-line summary. Output CSVs are byte-identical across repeated runs
//! of the same scenario file; the manifest additionally records the runtime,
//! which naturally varies.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use popdyn::basin::{basin_scan, step_poly, BasinReport};
use popdyn::control::{objective, solve_fbs, AdjointMode};
use popdyn::maps::{
    simulate_general, simulate_pair, simulate_single, step_general, step_pair, step_single,
    PairState, Trajectory,
};
use popdyn::stability::{equilibria_pair, equilibria_single, EquilibriumReport};

use config::{Kind, ModelSpec, ScenarioFile, Table1Side};
use output::{exact, full, sig5, write_file, Csv, Manifest, Overrides, Versions};

/// Errors surfaced to the user; the process exits with status 1 on any of
/// them (clap usage errors exit with status 2 as usual).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Domain(#[from] popdyn::Error),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }
}

#[derive(Parser)]
#[command(
    name = "popdyn",
    version,
    about = "Deterministic scenario runner for discrete-time population dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a trajectory and write it as CSV
    Simulate(RunArgs),
    /// Report equilibria with closed-form and eigenvalue classifications
    Equilibria(RunArgs),
    /// Grid-scan a box and test convergence to a target fixed point
    Basin(RunArgs),
    /// Solve an optimal-harvesting problem by forward-backward sweep
    Optimize(RunArgs),
    /// Tabulate constant-harvest objectives against the sweep optimum
    Table1(RunArgs),
    /// Parse and validate a scenario file without running it
    Validate(RunArgs),
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::Simulate(a)
            | Command::Equilibria(a)
            | Command::Basin(a)
            | Command::Optimize(a)
            | Command::Table1(a)
            | Command::Validate(a) => a,
        }
    }

    /// The scenario kind this subcommand executes (None for `validate`,
    /// which accepts any kind).
    fn expected_kind(&self) -> Option<Kind> {
        match self {
            Command::Simulate(_) => Some(Kind::Simulate),
            Command::Equilibria(_) => Some(Kind::Equilibria),
            Command::Basin(_) => Some(Kind::Basin),
            Command::Optimize(_) => Some(Kind::Optimize),
            Command::Table1(_) => Some(Kind::Table1),
            Command::Validate(_) => None,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory, created if missing (unused by `validate`)
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Recorded in the run manifest; reserved for randomized sweeps
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Override the scenario's adjoint recursion variant (optimize/table1)
    #[arg(long, value_enum, value_name = "MODE")]
    adjoint_mode: Option<AdjointModeArg>,
}

/// `--adjoint-mode` values.
#[derive(Debug, Clone, Copy, ValueEnum)]
enum AdjointModeArg {
    Consistent,
    PaperLiteral,
}

impl From<AdjointModeArg> for AdjointMode {
    fn from(m: AdjointModeArg) -> Self {
        match m {
            AdjointModeArg::Consistent => AdjointMode::Consistent,
            AdjointModeArg::PaperLiteral => AdjointMode::PaperLiteral,
        }
    }
}

/// Everything a runner needs: the parsed scenario plus invocation context.
struct Ctx<'a> {
    scenario: &'a ScenarioFile,
    config_path: &'a Path,
    out_dir: &'a Path,
    seed: Option<u64>,
    adjoint_override: Option<AdjointMode>,
    started: Instant,
}

impl Ctx<'_> {
    fn name(&self) -> &str {
        &self.scenario.name
    }

    /// Assembles and writes the manifest; returns the list of files written
    /// (manifest last) for the summary line.
    fn finish(
        &self,
        outputs: Vec<String>,
        results: serde_json::Value,
    ) -> Result<PathBuf, CliError> {
        let manifest = Manifest {
            scenario: self.name(),
            kind: self.scenario.kind.to_string(),
            config_path: self.config_path.display().to_string(),
            versions: Versions::current(),
            overrides: Overrides {
                seed: self.seed,
                adjoint_mode: self.adjoint_override.map(|m| {
                    match m {
                        AdjointMode::Consistent => "consistent",
                        AdjointMode::PaperLiteral => "paper-literal",
                    }
                    .to_string()
                }),
            },
            settings: serde_json::to_value(self.scenario)
                .expect("scenario serialization cannot fail"),
            outputs,
            results,
            runtime_seconds: self.started.elapsed().as_secs_f64(),
        };
        manifest.write(self.out_dir)
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let args = cli.command.args();
    let scenario = config::load_scenario(&args.config)?;
    if let Some(expected) = cli.command.expected_kind() {
        if scenario.kind != expected {
            return Err(CliError::invalid(format!(
                "{}: scenario `{}` has kind `{}`; run it with the `{}` subcommand",
                args.config.display(),
                scenario.name,
                scenario.kind,
                scenario.kind
            )));
        }
    }
    let ctx = Ctx {
        scenario: &scenario,
        config_path: &args.config,
        out_dir: &args.out,
        seed: args.seed,
        adjoint_override: args.adjoint_mode.map(Into::into),
        started: Instant::now(),
    };
    match scenario.kind {
        _ if matches!(cli.command, Command::Validate(_)) => run_validate(&ctx),
        Kind::Simulate => run_simulate(&ctx),
        Kind::Equilibria => run_equilibria(&ctx),
        Kind::Basin => run_basin(&ctx),
        Kind::Optimize => run_optimize(&ctx),
        Kind::Table1 => run_table1(&ctx),
    }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

/// Rows of a 1-D or 2-D trajectory at full precision.
fn trajectory_csv_1d(tr: &Trajectory<f64>) -> String {
    let mut csv = Csv::new("t,x");
    for (i, x) in tr.states.iter().enumerate() {
        csv.row(&[(tr.t0 + i).to_string(), full(*x)]);
    }
    csv.into_text()
}

fn trajectory_csv_2d(tr: &Trajectory<PairState>) -> String {
    let mut csv = Csv::new("t,x,y");
    for (i, s) in tr.states.iter().enumerate() {
        csv.row(&[(tr.t0 + i).to_string(), full(s.x), full(s.y)]);
    }
    csv.into_text()
}

fn run_simulate(ctx: &Ctx) -> Result<(), CliError> {
    let model = ctx.scenario.require_model()?;
    let spec = ctx.scenario.simulate.as_ref().expect("validated");
    let (csv_text, clamped, final_state) = match model {
        ModelSpec::Single(m) => {
            let tr = simulate_single(&m.build()?, spec.x0, spec.horizon)?;
            let last = tr.last();
            (trajectory_csv_1d(&tr), tr.clamped, json!({ "x": last }))
        }
        ModelSpec::Poly(m) => {
            let p = m.build()?;
            let mut states = Vec::with_capacity(spec.horizon + 1);
            let mut x = spec.x0;
            states.push(x);
            for _ in 0..spec.horizon {
                x = step_poly(&p, x)?;
                states.push(x);
            }
            let tr = Trajectory {
                t0: 0,
                states,
                clamped: false,
            };
            let last = tr.last();
            (trajectory_csv_1d(&tr), false, json!({ "x": last }))
        }
        ModelSpec::Pair(m) => {
            let s0 = PairState::new(spec.x0, spec.y0.expect("validated"));
            let tr = simulate_pair(&m.build()?, s0, spec.horizon)?;
            let last = tr.last();
            (
                trajectory_csv_2d(&tr),
                tr.clamped,
                json!({ "x": last.x, "y": last.y }),
            )
        }
        ModelSpec::General(m) => {
            let s0 = PairState::new(spec.x0, spec.y0.expect("validated"));
            let tr = simulate_general(&m.build()?, s0, spec.horizon)?;
            let last = tr.last();
            (
                trajectory_csv_2d(&tr),
                tr.clamped,
                json!({ "x": last.x, "y": last.y }),
            )
        }
    };
    if clamped {
        eprintln!(
            "warning: {}: a step produced a negative density that was clamped to zero",
            ctx.name()
        );
    }
    let file = format!("{}-trajectory.csv", ctx.name());
    let path = write_file(ctx.out_dir, &file, &csv_text)?;
    ctx.finish(
        vec![file],
        json!({ "clamped": clamped, "final_state": final_state }),
    )?;
    println!(
        "[{}] simulate {}: {} steps → {} (clamped: {clamped})",
        ctx.name(),
        model.label(),
        spec.horizon,
        path.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// equilibria
// ---------------------------------------------------------------------------

/// One CSV row per equilibrium report. Empty fields mean "not applicable":
/// `y`/`lambda2_*` for 1-D models, coordinates and classes for points that
/// do not exist at these parameters.
fn equilibria_csv(reports: &[EquilibriumReport], two_dim: bool) -> String {
    let mut csv = Csv::new(
        "kind,exists,x,y,class_theorem,class_eigen,agreement,\
         lambda1_re,lambda1_im,lambda2_re,lambda2_im",
    );
    for r in reports {
        let coord = |v: f64| if r.exists { full(v) } else { String::new() };
        let class = |c: &Option<popdyn::stability::StabilityClass>| {
            c.as_ref().map(|c| c.tag.to_string()).unwrap_or_default()
        };
        let eig = |i: usize, im: bool| {
            r.eigenvalues
                .get(i)
                .map(|l| full(if im { l.im } else { l.re }))
                .unwrap_or_default()
        };
        csv.row(&[
            r.kind.to_string(),
            r.exists.to_string(),
            coord(r.x),
            if two_dim {
                coord(r.y.unwrap_or(f64::NAN))
            } else {
                String::new()
            },
            class(&r.class_theorem),
            class(&r.class_eigen),
            r.agreement.map(|a| a.to_string()).unwrap_or_default(),
            eig(0, false),
            eig(0, true),
            eig(1, false),
            eig(1, true),
        ]);
    }
    csv.into_text()
}

fn run_equilibria(ctx: &Ctx) -> Result<(), CliError> {
    let model = ctx.scenario.require_model()?;
    let (reports, two_dim) = match model {
        ModelSpec::Single(m) => (equilibria_single(&m.build()?), false),
        ModelSpec::Pair(m) => (equilibria_pair(&m.build()?), true),
        other => {
            return Err(CliError::invalid(format!(
                "equilibria supports single and pair models, got `{}`",
                other.label()
            )))
        }
    };
    let n_exist = reports.iter().filter(|r| r.exists).count();
    let disagreements = reports
        .iter()
        .filter(|r| r.agreement == Some(false))
        .count();
    let file = format!("{}-equilibria.csv", ctx.name());
    let path = write_file(ctx.out_dir, &file, &equilibria_csv(&reports, two_dim))?;
    let results: Vec<_> = reports
        .iter()
        .map(|r| {
            json!({
                "kind": r.kind.to_string(),
                "exists": r.exists,
                "condition": r.condition,
                "class_theorem": r.class_theorem.as_ref().map(|c| c.detail.clone()),
                "class_eigen": r.class_eigen.as_ref().map(|c| c.detail.clone()),
                "agreement": r.agreement,
            })
        })
        .collect();
    ctx.finish(vec![file], json!({ "reports": results }))?;
    println!(
        "[{}] equilibria {}: {} candidates, {n_exist} exist, {disagreements} disagreements → {}",
        ctx.name(),
        model.label(),
        reports.len(),
        path.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// basin
// ---------------------------------------------------------------------------

/// Scan outcome reduced to CSV + manifest pieces (dimension-independent).
fn basin_csv<const N: usize>(report: &BasinReport<N>) -> String {
    let mut csv = Csv::new(if N == 1 {
        "x0,code,iters"
    } else {
        "x0,y0,code,iters"
    });
    for s in &report.samples {
        let mut fields: Vec<String> = s.start.iter().map(|v| full(*v)).collect();
        fields.push(s.outcome.code().to_string());
        fields.push(s.iters.to_string());
        csv.row(&fields);
    }
    csv.into_text()
}

fn basin_results<const N: usize>(report: &BasinReport<N>) -> (String, serde_json::Value) {
    use popdyn::basin::Verdict;
    let (verdict, witness) = match report.verdict {
        Verdict::Consistent => ("consistent", None),
        Verdict::Refuted { witness } => ("refuted", Some(witness.to_vec())),
        Verdict::Inconclusive => ("inconclusive", None),
    };
    let value = json!({
        "verdict": verdict,
        "witness": witness,
        "target": report.target.to_vec(),
        "n_converged": report.n_converged,
        "n_other": report.n_other,
        "n_escaped": report.n_escaped,
        "planted_index": report.planted_index,
    });
    (verdict.to_string(), value)
}

fn run_basin(ctx: &Ctx) -> Result<(), CliError> {
    let model = ctx.scenario.require_model()?;
    let spec = ctx.scenario.basin.as_ref().expect("validated");
    let (csv_text, verdict, results) = match model {
        ModelSpec::Single(m) => {
            let p = m.build()?;
            let (cfg, target) = spec.build::<1>()?;
            let report = basin_scan(
                move |s: [f64; 1]| step_single(&p, s[0]).map(|v| [v]),
                target,
                &cfg,
            )?;
            let (verdict, results) = basin_results(&report);
            (basin_csv(&report), verdict, results)
        }
        ModelSpec::Poly(m) => {
            let p = m.build()?;
            let (cfg, target) = spec.build::<1>()?;
            let report = basin_scan(
                move |s: [f64; 1]| step_poly(&p, s[0]).map(|v| [v]),
                target,
                &cfg,
            )?;
            let (verdict, results) = basin_results(&report);
            (basin_csv(&report), verdict, results)
        }
        ModelSpec::Pair(m) => {
            let p = m.build()?;
            let (cfg, target) = spec.build::<2>()?;
            let report = basin_scan(
                move |s: [f64; 2]| step_pair(&p, PairState::new(s[0], s[1])).map(|n| [n.x, n.y]),
                target,
                &cfg,
            )?;
            let (verdict, results) = basin_results(&report);
            (basin_csv(&report), verdict, results)
        }
        ModelSpec::General(m) => {
            let p = m.build()?;
            let (cfg, target) = spec.build::<2>()?;
            let report = basin_scan(
                move |s: [f64; 2]| step_general(&p, PairState::new(s[0], s[1])).map(|n| [n.x, n.y]),
                target,
                &cfg,
            )?;
            let (verdict, results) = basin_results(&report);
            (basin_csv(&report), verdict, results)
        }
    };
    let file = format!("{}-basin.csv", ctx.name());
    let path = write_file(ctx.out_dir, &file, &csv_text)?;
    ctx.finish(vec![file], results)?;
    println!(
        "[{}] basin {}: verdict {verdict} → {}",
        ctx.name(),
        model.label(),
        path.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

fn control_csv(sol: &popdyn::control::ControlSolution) -> String {
    let pair = sol.y.is_some();
    let mut csv = Csv::new(if pair {
        "t,h,x,y,lambda1,lambda2"
    } else {
        "t,h,x,lambda1"
    });
    let t_end = sol.x.len() - 1;
    for t in 0..=t_end {
        // no harvest decision exists at the final time point
        let h = if t < t_end {
            full(sol.controls[t])
        } else {
            String::new()
        };
        let mut fields = vec![t.to_string(), h, full(sol.x[t])];
        if let Some(y) = &sol.y {
            fields.push(full(y[t]));
        }
        fields.push(full(sol.lambda1[t]));
        if let Some(l2) = &sol.lambda2 {
            fields.push(full(l2[t]));
        }
        csv.row(&fields);
    }
    csv.into_text()
}

fn run_optimize(ctx: &Ctx) -> Result<(), CliError> {
    let model = ctx.scenario.require_model()?;
    let spec = ctx.scenario.optimize.as_ref().expect("validated");
    let prob = spec.build(model, ctx.adjoint_override)?;
    let sol = solve_fbs(&prob, &spec.sweep.build())?;
    if !sol.converged {
        eprintln!(
            "warning: {}: sweep did not converge within {} iterations",
            ctx.name(),
            sol.iterations
        );
    }
    let file = format!("{}-control.csv", ctx.name());
    let path = write_file(ctx.out_dir, &file, &control_csv(&sol))?;
    ctx.finish(
        vec![file],
        json!({
            "objective": sol.objective,
            "iterations": sol.iterations,
            "converged": sol.converged,
        }),
    )?;
    println!(
        "[{}] optimize {}: J = {} after {} iterations (converged: {}) → {}",
        ctx.name(),
        model.label(),
        sig5(sol.objective),
        sol.iterations,
        sol.converged,
        path.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// table1
// ---------------------------------------------------------------------------

/// Constant-`h` rows plus the sweep-optimum row for one model side.
fn table1_side(
    ctx: &Ctx,
    label: &str,
    side: &Table1Side,
    csv: &mut Csv,
) -> Result<serde_json::Value, CliError> {
    let (prob, sweep) = side.build(ctx.adjoint_override)?;
    let constants: Vec<f64> = side
        .h_list
        .iter()
        .map(|&h| objective(&prob, &vec![h; side.horizon]))
        .collect::<Result<_, _>>()?;
    let sol = solve_fbs(&prob, &sweep)?;
    if !sol.converged {
        eprintln!(
            "warning: {}: {label} sweep did not converge within {} iterations",
            ctx.name(),
            sol.iterations
        );
    }
    for (&h, &j) in side.h_list.iter().zip(&constants) {
        csv.row(&[
            label.to_string(),
            exact(h),
            sig5(j),
            (sol.objective >= j).to_string(),
        ]);
    }
    csv.row(&[
        label.to_string(),
        "optimal".to_string(),
        sig5(sol.objective),
        "true".to_string(),
    ]);
    Ok(json!({
        "h_list": side.h_list,
        "constant_objectives": constants,
        "optimal_objective": sol.objective,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "dominates_all": constants.iter().all(|&j| sol.objective >= j),
    }))
}

fn run_table1(ctx: &Ctx) -> Result<(), CliError> {
    let spec = ctx.scenario.table1.as_ref().expect("validated");
    let mut csv = Csv::new("model,h,J,dominated");
    let single = table1_side(ctx, "single", &spec.single, &mut csv)?;
    let pair = table1_side(ctx, "pair", &spec.pair, &mut csv)?;
    let file = format!("{}-table1.csv", ctx.name());
    let path = write_file(ctx.out_dir, &file, &csv.into_text())?;
    let summary = format!(
        "single J_opt = {}, pair J_opt = {}",
        sig5(single["optimal_objective"].as_f64().unwrap_or(f64::NAN)),
        sig5(pair["optimal_objective"].as_f64().unwrap_or(f64::NAN)),
    );
    ctx.finish(vec![file], json!({ "single": single, "pair": pair }))?;
    println!("[{}] table1: {summary} → {}", ctx.name(), path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

/// Dry-builds every domain object the scenario would use, so invariant
/// violations surface without running anything or writing any file.
fn run_validate(ctx: &Ctx) -> Result<(), CliError> {
    let scenario = ctx.scenario;
    match scenario.kind {
        Kind::Simulate | Kind::Equilibria => match scenario.require_model()? {
            ModelSpec::Single(m) => {
                m.build()?;
            }
            ModelSpec::Pair(m) => {
                m.build()?;
            }
            ModelSpec::General(m) => {
                m.build()?;
            }
            ModelSpec::Poly(m) => {
                m.build()?;
            }
        },
        Kind::Basin => {
            let spec = scenario.basin.as_ref().expect("validated");
            match scenario.require_model()? {
                ModelSpec::Single(m) => {
                    m.build()?;
                    spec.build::<1>()?.0.validate()?;
                }
                ModelSpec::Poly(m) => {
                    m.build()?;
                    spec.build::<1>()?.0.validate()?;
                }
                ModelSpec::Pair(m) => {
                    m.build()?;
                    spec.build::<2>()?.0.validate()?;
                }
                ModelSpec::General(m) => {
                    m.build()?;
                    spec.build::<2>()?.0.validate()?;
                }
            }
        }
        Kind::Optimize => {
            let spec = scenario.optimize.as_ref().expect("validated");
            spec.build(scenario.require_model()?, ctx.adjoint_override)?;
            spec.sweep.build().validate()?;
        }
        Kind::Table1 => {
            let spec = scenario.table1.as_ref().expect("validated");
            for side in [&spec.single, &spec.pair] {
                let (_, sweep) = side.build(ctx.adjoint_override)?;
                sweep.validate()?;
            }
        }
    }
    println!("[{}] valid ({})", ctx.name(), scenario.kind);
    Ok(())
}
