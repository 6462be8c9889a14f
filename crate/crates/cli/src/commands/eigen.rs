use std::fmt::Write as _;

use clap::Args;
use semwave::potentials::{local_minima, potential_profile};
use semwave::propagator::eigenstates;
use semwave::{Boundary, Constants, PotentialSpec, SpatialGrid};
use serde::Serialize;

use crate::common::{node_count, write_state, ConstantArgs, GridArgs, PotentialArgs, PotentialKind};
use crate::failure::Failure;
use crate::output::OutDir;
use crate::Global;

/// Lowest stationary states of a fixed potential.
#[derive(Debug, Args)]
pub struct EigenArgs {
    #[arg(long, value_enum, default_value_t = PotentialKind::Harmonic)]
    potential: PotentialKind,
    /// Number of states.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    shape: PotentialArgs,
    #[command(flatten)]
    constants: ConstantArgs,
}

#[derive(Serialize)]
struct EigenParams {
    potential: PotentialSpec,
    grid: SpatialGrid,
    k: usize,
    constants: Constants,
}

#[derive(Serialize)]
struct EigenSummary {
    energies: Vec<f64>,
    nodes: Vec<usize>,
    potential_minima: Vec<f64>,
}

pub fn run(args: &EigenArgs, global: &Global) -> Result<(), Failure> {
    let constants = args.constants.constants()?;
    let potential = args.shape.build(args.potential, constants.mass)?;
    let grid = args.grid.resolve(512, -10.0, 10.0, Boundary::Reflecting)?;
    let params = EigenParams { potential, grid, k: args.k as usize, constants };
    let sol = eigenstates(&potential, &grid, params.k, constants)?;

    let mut out = OutDir::create(&global.out)?;
    let mut energies = String::from("index,energy,nodes\n");
    let mut nodes = Vec::new();
    for (i, (e, psi)) in sol.energies.iter().zip(&sol.states).enumerate() {
        let n = node_count(psi);
        nodes.push(n);
        let _ = writeln!(energies, "{i},{e},{n}");
        write_state(&mut out, &format!("state_{i}"), psi, global.format)?;
    }
    out.write("energies.csv", &energies)?;

    let profile = potential_profile(&potential, &grid, None)?;
    let mut csv = String::from("x,v\n");
    for (x, v) in grid.points().iter().zip(&profile) {
        let _ = writeln!(csv, "{x},{v}");
    }
    out.write("potential.csv", &csv)?;
    let potential_minima = local_minima(&profile).into_iter().map(|i| grid.x(i)).collect();
    out.write_json("summary.json", &EigenSummary { energies: sol.energies.clone(), nodes, potential_minima })?;
    out.finish("eigen", global.seed, global.format.ext(), &params)
}
