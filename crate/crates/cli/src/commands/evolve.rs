use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use semwave::propagator::{bright_soliton, evolve};
use semwave::{make_gaussian, Boundary, EvolutionConfig, Method, PotentialSpec, SpatialGrid, WaveFunction};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::common::{
    all_pass, read_state, write_state, Check, ConstantArgs, Format, GridArgs, PotentialArgs, PotentialKind,
};
use crate::failure::Failure;
use crate::output::OutDir;
use crate::Global;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Gaussian packet, Crank–Nicolson on `[−10, 10]`.
    Packet,
    /// `sech` bright soliton of the focusing NLSE on `[−20, 20]`, n = 1024.
    Soliton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    CrankNicolson,
    SplitStep,
}

/// Real-time evolution with observables and optional snapshots.
#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, value_enum, default_value_t = Preset::Packet)]
    preset: Preset,
    /// Fixed potential; ignored when --gamma is given.
    #[arg(long, value_enum, default_value_t = PotentialKind::Free)]
    potential: PotentialKind,
    /// Cubic NLSE coupling γ (negative focuses).
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Initial state file (JSON or CSV); its grid replaces the grid flags.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    center: f64,
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    momentum: f64,
    /// Soliton inverse width η.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 10)]
    record_every: usize,
    /// Write every recorded state under snapshots/.
    #[arg(long)]
    snapshots: bool,
    /// JSON array of parameter overrides; each entry runs in its own run-NNN/ directory.
    #[arg(long)]
    sweep: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    shape: PotentialArgs,
    #[command(flatten)]
    constants: ConstantArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Initial {
    Gaussian { center: f64, width: f64, momentum: f64 },
    Soliton { eta: f64 },
    File { path: PathBuf },
}

/// Fully resolved run description; also the shape sweep entries patch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveParams {
    pub preset: Preset,
    pub potential: PotentialSpec,
    pub grid: SpatialGrid,
    pub initial: Initial,
    pub evolution: EvolutionConfig,
    pub snapshots: bool,
}

#[derive(Serialize)]
struct EvolveSummary {
    final_time: f64,
    records: usize,
    initial_norm_sq: f64,
    /// `max |‖ψ‖² − 1|`; only meaningful for normalized starts.
    max_norm_defect: f64,
    max_charge_drift: f64,
    checks: Vec<Check>,
}

fn resolve(args: &EvolveArgs) -> Result<EvolveParams, Failure> {
    let constants = args.constants.constants()?;
    let potential = match (args.gamma, args.preset) {
        (Some(g), _) => PotentialSpec::cubic(g)?,
        (None, Preset::Soliton) => PotentialSpec::cubic(-1.0)?,
        (None, Preset::Packet) => args.shape.build(args.potential, constants.mass)?,
    };
    let (initial, grid) = match (&args.state, args.preset) {
        (Some(path), _) => (Initial::File { path: path.clone() }, *read_state(path)?.grid()),
        (None, Preset::Soliton) => {
            (Initial::Soliton { eta: args.eta }, args.grid.resolve(1024, -20.0, 20.0, Boundary::Periodic)?)
        }
        (None, Preset::Packet) => (
            Initial::Gaussian { center: args.center, width: args.width, momentum: args.momentum },
            args.grid.resolve(512, -10.0, 10.0, Boundary::Periodic)?,
        ),
    };
    let method = match args.method {
        Some(MethodArg::CrankNicolson) => Method::CrankNicolson,
        Some(MethodArg::SplitStep) => Method::SplitStepSpectral,
        None if potential.is_state_dependent() => Method::SplitStepSpectral,
        None => Method::CrankNicolson,
    };
    let evolution = EvolutionConfig::new(args.dt, args.steps, method)
        .with_record_every(args.record_every)
        .with_constants(constants);
    Ok(EvolveParams { preset: args.preset, potential, grid, initial, evolution, snapshots: args.snapshots })
}

fn initial_state(p: &EvolveParams) -> Result<WaveFunction, Failure> {
    match &p.initial {
        Initial::Gaussian { center, width, momentum } => Ok(make_gaussian(p.grid, *center, *width, *momentum)?),
        Initial::Soliton { eta } => match p.potential {
            PotentialSpec::CubicNonlinear { gamma } => {
                Ok(bright_soliton(p.grid, *eta, gamma, p.evolution.constants(), 0.0)?)
            }
            _ => Err(Failure::usage("the soliton initial state needs the cubic potential (--gamma < 0)")),
        },
        Initial::File { path } => {
            let psi = read_state(path)?;
            if *psi.grid() != p.grid {
                return Err(Failure::usage("state file grid differs from the requested grid"));
            }
            Ok(psi)
        }
    }
}

/// Runs one resolved configuration into `out`; returns the check failures, if any.
fn execute(p: &EvolveParams, mut out: OutDir, format: Format, seed: u64) -> Result<(), Failure> {
    p.potential.validated()?;
    let psi0 = initial_state(p)?;
    let traj = evolve(&psi0, &p.potential, &p.evolution)?;

    out.write("observables.csv", &traj.observables_csv())?;
    write_state(&mut out, "final_state", traj.last(), format)?;
    if p.snapshots {
        for (i, psi) in traj.states.iter().enumerate() {
            write_state(&mut out, &format!("snapshots/state_{i:05}"), psi, format)?;
        }
    }

    let final_time = *traj.times.last().expect("trajectory has records");
    let mut checks = vec![Check::below("max_charge_drift", traj.max_charge_drift(), 1e-8)];
    if let (Initial::Soliton { eta }, PotentialSpec::CubicNonlinear { gamma }) = (&p.initial, p.potential) {
        let exact = bright_soliton(p.grid, *eta, gamma, p.evolution.constants(), final_time)?;
        let err: f64 = traj
            .last()
            .amplitudes()
            .iter()
            .zip(exact.amplitudes())
            .map(|(a, b)| (a.norm() - b.norm()).powi(2))
            .sum::<f64>()
            * p.grid.dx();
        checks.push(Check::below("soliton_modulus_l2_error", err.sqrt(), 1e-3));
    }
    let summary = EvolveSummary {
        final_time,
        records: traj.len(),
        initial_norm_sq: psi0.norm_sq(),
        max_norm_defect: traj.max_norm_defect(),
        max_charge_drift: traj.max_charge_drift(),
        checks,
    };
    out.write_json("summary.json", &summary)?;
    out.finish("evolve", seed, format.ext(), p)?;
    all_pass(&summary.checks)
}

fn merge(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                merge(b.entry(k.clone()).or_insert(Value::Null), v);
            }
        }
        (b, p) => *b = p.clone(),
    }
}

fn sweep(base: &EvolveParams, path: &PathBuf, global: &Global) -> Result<(), Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read sweep file {}: {e}", path.display())))?;
    let entries: Vec<Value> = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("sweep file {} must be a JSON array of objects: {e}", path.display())))?;
    let base_value = serde_json::to_value(base).expect("params serialize");
    let runs = entries
        .iter()
        .enumerate()
        .map(|(i, patch)| {
            if !patch.is_object() {
                return Err(Failure::usage(format!("sweep entry {i} is not an object")));
            }
            let mut v = base_value.clone();
            merge(&mut v, patch);
            serde_json::from_value::<EvolveParams>(v).map_err(|e| Failure::usage(format!("sweep entry {i}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let root = OutDir::create(&global.out)?;
    let results: Vec<Result<(), Failure>> = runs
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let dir = OutDir::create(&root.root().join(format!("run-{i:03}")))?;
            execute(p, dir, global.format, global.seed).map_err(|f| f.context(&format!("run-{i:03}")))
        })
        .collect();

    #[derive(Serialize)]
    struct SweepParams<'a> {
        base: &'a EvolveParams,
        runs: Vec<Value>,
        status: Vec<String>,
    }
    let status = results.iter().map(|r| r.as_ref().map_or_else(|f| f.kind.to_string(), |_| "ok".into())).collect();
    root.finish("evolve-sweep", global.seed, global.format.ext(), &SweepParams { base, runs: entries, status })?;
    // report the most serious failure
    let mut worst: Option<Failure> = None;
    for f in results.into_iter().filter_map(Result::err) {
        if worst.as_ref().is_none_or(|w| f.code > w.code) {
            worst = Some(f);
        }
    }
    worst.map_or(Ok(()), Err)
}

pub fn run(args: &EvolveArgs, global: &Global) -> Result<(), Failure> {
    let params = resolve(args)?;
    match &args.sweep {
        Some(path) => sweep(&params, path, global),
        None => execute(&params, OutDir::create(&global.out)?, global.format, global.seed),
    }
}
