// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! `zfspin`: run, sweep and compile zero-field pulse programs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zfspin::compiler::{compile_with, CompileOptions, CompiledGate, GateSpec};
use zfspin::linalg::DistanceMode;
use zfspin::program::{
    execute, params_from_json, params_from_preset, parse, parse_angle, parse_gate, parse_grid, record_csv,
    record_json, sweep, table_csv, table_json, AngleExpr, Bindings, Mode, Program, RunConfig, Statement,
    SweepObservable,
};
use zfspin::pulse::Step;
use zfspin::rwa::{convergence_study, IntegratorConfig, DEFAULT_STEPS_PER_PERIOD};
use zfspin::spin::{Axis, PhysicalParams};
use zfspin::verify::run_suite;
use zfspin::Error;

#[derive(Parser)]
#[command(name = "zfspin", version, about = "Zero-field spin-1 pulse simulator and gate compiler")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a pulse program.
    Run {
        file: PathBuf,
        #[command(flatten)]
        exec: ExecArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate an observable over a (theta, delta) grid.
    Sweep {
        #[arg(long)]
        template: PathBuf,
        /// `start:stop:count`
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        /// `start:stop:count`
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        /// `sz`, `pop:<T0|A|B|S>` or `moment:<x|y|z>`
        #[arg(long, default_value = "sz")]
        observable: String,
        #[command(flatten)]
        exec: ExecArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a gate into pulses and print the equivalence report.
    Compile {
        /// `NOT`, `S(delta)`, `RZ(theta,delta,A|B)` or `PREP(theta,delta)`
        gate: String,
        /// Compile NOT exactly up to one global phase on the whole triplet.
        #[arg(long)]
        exact_phase: bool,
    },
    /// Run the built-in invariant checks.
    Verify {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Full-dynamics versus closed-form error table.
    Convergence {
        #[arg(long, value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3])]
        ratios: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_STEPS_PER_PERIOD)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExecArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Closed)]
    mode: ModeArg,
    /// Ion preset name (full mode).
    #[arg(long, conflicts_with = "params")]
    preset: Option<String>,
    /// Parameters as inline JSON or a path to a JSON file (full mode).
    #[arg(long)]
    params: Option<String>,
    /// Integrator resolution, steps per carrier period.
    #[arg(long, default_value_t = DEFAULT_STEPS_PER_PERIOD)]
    steps: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Closed,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io(e.to_string())),
    }
}

fn physical_params(a: &ExecArgs) -> Result<Option<PhysicalParams>, Error> {
    if let Some(name) = &a.preset {
        return params_from_preset(name, None).map(Some);
    }
    match &a.params {
        Some(s) if s.trim_start().starts_with('{') => params_from_json(s).map(Some),
        Some(path) => params_from_json(&read(Path::new(path))?).map(Some),
        None => Ok(None),
    }
}

fn run_config(a: &ExecArgs) -> Result<RunConfig, Error> {
    let params = physical_params(a)?;
    let mut cfg = match a.mode {
        ModeArg::Closed => RunConfig::closed(),
        ModeArg::Full => RunConfig { mode: Mode::Full, ..RunConfig::closed() },
    };
    cfg.params = params;
    cfg.integrator = IntegratorConfig::with_steps(a.steps);
    Ok(cfg)
}

fn load_program(path: &Path) -> Result<Program, Error> {
    Ok(parse(&read(path)?)?)
}

/// `PREP(theta,delta)` is accepted here in addition to the program gates.
fn parse_gate_spec(text: &str) -> Result<GateSpec, Error> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix("PREP(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').collect();
        let [theta, delta] = parts.as_slice() else {
            return Err(Error::InvalidParams(format!("`{t}`: PREP takes two angles")));
        };
        let b = Bindings::default();
        return Ok(GateSpec::Prepare {
            theta: parse_angle(theta.trim())?.eval(&b)?,
            delta: parse_angle(delta.trim())?.eval(&b)?,
        });
    }
    parse_gate(t)?.resolve(&Bindings::default())
}

fn gate_listing(g: &CompiledGate) -> String {
    let steps: Vec<Statement> = g
        .sequence
        .steps
        .iter()
        .map(|s| match s {
            Step::Pulse(p) => Statement::Pulse {
                axis: p.axis,
                theta: AngleExpr::from_value(p.theta),
                phase: Some(AngleExpr::from_value(p.delta)),
            },
            Step::IdealZ(z) => Statement::IdealZ(AngleExpr::from_value(z.theta)),
        })
        .collect();
    let r = &g.report;
    let mut out = format!("# gate {}\n", g.spec);
    out.push_str(&Program { statements: steps }.to_string());
    out.push_str(&format!("# block {}\n", r.target_block));
    let mode = match r.mode {
        DistanceMode::Exact => "exact",
        DistanceMode::UpToGlobalPhase => "up-to-global-phase",
    };
    out.push_str(&format!("# mode {mode}\n"));
    out.push_str(&format!("# distance {:e}\n", r.distance()));
    out.push_str(&format!("# exact_distance {:e}\n", r.exact_distance));
    out.push_str(&format!("# phase_distance {:e}\n", r.phase_distance));
    out.push_str(&format!("# phase_exact {}\n", r.phase_exact));
    out.push_str(&format!("# leakage {:e}\n", r.leakage));
    for (label, phase) in &g.spectator_phases {
        out.push_str(&format!("# spectator {label} phase ({},{})\n", phase.re, phase.im));
    }
    out
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run { file, exec, format, out } => {
            let program = load_program(&file)?;
            let record = execute(&program, &run_config(&exec)?)?;
            let text = match format {
                OutFormat::Json => record_json(&record),
                OutFormat::Csv => record_csv(&record),
            };
            write_out(out.as_deref(), &text)?;
        }
        Command::Sweep { template, theta, delta, observable, exec, format, out } => {
            let program = load_program(&template)?;
            let obs = SweepObservable::parse(&observable)?;
            let table = sweep(&program, &parse_grid(&theta)?, &parse_grid(&delta)?, obs, &run_config(&exec)?)?;
            let text = match format {
                OutFormat::Json => table_json(&table),
                OutFormat::Csv => table_csv(&table),
            };
            write_out(out.as_deref(), &text)?;
        }
        Command::Compile { gate, exact_phase } => {
            let g = compile_with(&parse_gate_spec(&gate)?, CompileOptions { exact_phase })?;
            write_out(None, &gate_listing(&g))?;
        }
        Command::Verify { tol } => {
            let checks = run_suite(tol);
            let mut text = String::new();
            for c in &checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status} {}: {:e} (bound {:e})\n", c.name, c.value, c.bound));
            }
            write_out(None, &text)?;
            if !checks.iter().all(|c| c.passed()) {
                return Ok(ExitCode::from(4));
            }
        }
        Command::Convergence { ratios, steps, format, out } => {
            let thetas = [std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 1.0];
            let deltas = [0.0, 1.0, 2.5];
            let rows = convergence_study(&[Axis::X, Axis::Y], &thetas, &deltas, &ratios, &IntegratorConfig::with_steps(steps))?;
            let text = match format {
                OutFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&rows).map_err(|e| Error::Io(e.to_string()))?;
                    s.push('\n');
                    s
                }
                OutFormat::Csv => {
                    let mut s = String::from("ratio,axis,theta,delta,error\n");
                    for r in &rows {
                        s.push_str(&format!("{:e},{},{:.6},{:.6},{:e}\n", r.ratio, r.axis, r.theta, r.delta, r.error));
                    }
                    s
                }
            };
            write_out(out.as_deref(), &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
