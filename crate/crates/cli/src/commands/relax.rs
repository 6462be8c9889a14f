use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use semwave::propagator::{imaginary_time_ground_state, GroundState};
use semwave::{make_gaussian, Boundary, EvolutionConfig, Method, PotentialSpec, SpatialGrid, WaveFunction};
use serde::Serialize;

use crate::commands::evolve::MethodArg;
use crate::common::{read_state, write_state, ConstantArgs, GridArgs, PotentialArgs, PotentialKind};
use crate::failure::Failure;
use crate::output::OutDir;
use crate::Global;

/// Imaginary-time relaxation towards the lowest-energy state reachable from the start.
#[derive(Debug, Args)]
pub struct RelaxArgs {
    #[arg(long, value_enum, default_value_t = PotentialKind::DoubleWell)]
    potential: PotentialKind,
    /// Initial state file; replaces the Gaussian start and the grid flags.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    center: f64,
    #[arg(long, default_value_t = 0.5)]
    width: f64,
    /// Also relax the packet started at −center.
    #[arg(long)]
    mirror: bool,
    #[arg(long, value_enum, default_value_t = MethodArg::SplitStep)]
    method: MethodArg,
    #[arg(long, default_value_t = 5e-3)]
    dt: f64,
    /// Step budget.
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    /// Stop once one step changes the energy by less than this.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    shape: PotentialArgs,
    #[command(flatten)]
    constants: ConstantArgs,
}

#[derive(Serialize)]
struct RelaxParams {
    potential: PotentialSpec,
    grid: SpatialGrid,
    start: Start,
    mirror: bool,
    evolution: EvolutionConfig,
    tol: f64,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Start {
    Gaussian { center: f64, width: f64 },
    File { path: PathBuf },
}

#[derive(Serialize)]
struct Settled {
    energy: f64,
    position_expectation: f64,
    steps: usize,
}

impl From<&GroundState> for Settled {
    fn from(g: &GroundState) -> Self {
        Settled { energy: g.energy, position_expectation: g.state.position_expectation(), steps: g.steps }
    }
}

#[derive(Serialize)]
struct RelaxSummary {
    settled: Settled,
    mirror: Option<Settled>,
    mirror_energy_gap: Option<f64>,
}

fn history_csv(g: &GroundState) -> String {
    let mut s = String::from("step,energy\n");
    for (i, e) in g.energy_history.iter().enumerate() {
        let _ = writeln!(s, "{i},{e}");
    }
    s
}

fn mirrored(psi: &WaveFunction) -> Result<WaveFunction, Failure> {
    let grid = *psi.grid();
    let amps = (0..grid.n_points()).map(|i| psi.amplitudes()[grid.mirror_index(i)]).collect();
    Ok(WaveFunction::new(grid, amps)?)
}

pub fn run(args: &RelaxArgs, global: &Global) -> Result<(), Failure> {
    let constants = args.constants.constants()?;
    let potential = args.shape.build(args.potential, constants.mass)?;
    let (psi0, start) = match &args.state {
        Some(path) => (read_state(path)?, Start::File { path: path.clone() }),
        None => {
            let grid = args.grid.resolve(256, -6.0, 6.0, Boundary::Periodic)?;
            let psi = make_gaussian(grid, args.center, args.width, 0.0)?;
            (psi, Start::Gaussian { center: args.center, width: args.width })
        }
    };
    let grid = *psi0.grid();
    let method = match args.method {
        MethodArg::CrankNicolson => Method::CrankNicolson,
        MethodArg::SplitStep => Method::SplitStepSpectral,
    };
    let evolution = EvolutionConfig::new(args.dt, args.steps, method).with_constants(constants);
    let params = RelaxParams { potential, grid, start, mirror: args.mirror, evolution, tol: args.tol };

    let settled = imaginary_time_ground_state(&potential, &grid, &psi0, &evolution, args.tol)?;
    let mirror = if args.mirror {
        Some(imaginary_time_ground_state(&potential, &grid, &mirrored(&psi0)?, &evolution, args.tol)?)
    } else {
        None
    };

    let mut out = OutDir::create(&global.out)?;
    out.write("energy_history.csv", &history_csv(&settled))?;
    write_state(&mut out, "ground_state", &settled.state, global.format)?;
    if let Some(m) = &mirror {
        out.write("mirror_energy_history.csv", &history_csv(m))?;
        write_state(&mut out, "mirror_ground_state", &m.state, global.format)?;
    }
    let summary = RelaxSummary {
        settled: (&settled).into(),
        mirror_energy_gap: mirror.as_ref().map(|m| (m.energy - settled.energy).abs()),
        mirror: mirror.as_ref().map(Settled::from),
    };
    out.write_json("summary.json", &summary)?;
    out.finish("relax", global.seed, global.format.ext(), &params)
}
