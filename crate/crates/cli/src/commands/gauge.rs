use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use semwave::gauge::{gauge_check, MatterTerms};
use semwave::{GaugeCheckReport, GaugeField, GaugeTransform};
use serde::Serialize;

use crate::common::{read_state, ConstantArgs};
use crate::failure::Failure;
use crate::output::OutDir;
use crate::Global;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaKind {
    /// θ = 0.
    Zero,
    /// θ = amp·sin(2πx/L).
    Sin,
    /// Seeded random smooth phases, one per sample.
    Random,
}

/// Checks local phase invariance of a state in a background gauge field.
#[derive(Debug, Args)]
pub struct GaugeArgs {
    /// State file (JSON or CSV).
    #[arg(long)]
    state: PathBuf,
    /// Coupling q.
    #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
    charge: f64,
    /// Background A₀ = a0·cos(2πx/L).
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    a0: f64,
    /// Background A₁ = a1·sin(4πx/L).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    a1: f64,
    #[arg(long, value_enum, default_value_t = ThetaKind::Random)]
    theta: ThetaKind,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    theta_amp: f64,
    /// Fourier modes of each random phase.
    #[arg(long, default_value_t = 3)]
    theta_modes: usize,
    /// Random phases drawn, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Time slice for the field-strength comparison.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[command(flatten)]
    constants: ConstantArgs,
}

#[derive(Serialize)]
struct GaugeParams<'a> {
    state: &'a PathBuf,
    charge: f64,
    a0: f64,
    a1: f64,
    theta: ThetaKind,
    theta_amp: f64,
    theta_modes: usize,
    samples: u64,
    dt: f64,
}

#[derive(Serialize)]
struct GaugeReportFile {
    all_pass: bool,
    reports: Vec<GaugeCheckReport>,
}

pub fn run(args: &GaugeArgs, global: &Global) -> Result<(), Failure> {
    let constants = args.constants.constants()?;
    if args.dt.is_nan() || args.dt <= 0.0 {
        return Err(Failure::usage(format!("--dt must be positive, got {}", args.dt)));
    }
    let psi = read_state(&args.state)?;
    let grid = *psi.grid();
    let l = grid.length();
    let field = GaugeField::from_fns(
        grid,
        args.charge,
        |x| args.a0 * (2.0 * PI * x / l).cos(),
        |x| args.a1 * (4.0 * PI * x / l).sin(),
    )?;

    let transforms: Vec<(String, GaugeTransform)> = match args.theta {
        ThetaKind::Zero => vec![("zero".into(), GaugeTransform::identity(&grid))],
        ThetaKind::Sin => vec![(
            format!("{}*sin(2*pi*x/L)", args.theta_amp),
            GaugeTransform::from_fn(&grid, |x| args.theta_amp * (2.0 * PI * x / l).sin())?,
        )],
        ThetaKind::Random => (0..args.samples)
            .map(|i| {
                let seed = global.seed.wrapping_add(i);
                let mut g = GaugeTransform::random_smooth(&grid, seed, args.theta_modes);
                g.theta.iter_mut().for_each(|t| *t *= args.theta_amp);
                (format!("random_smooth(seed={seed}, modes={})", args.theta_modes), g)
            })
            .collect(),
    };

    let reports = transforms
        .iter()
        .map(|(desc, g)| gauge_check(&psi, &field, g, desc, &MatterTerms::none(), constants, args.dt))
        .collect::<Result<Vec<_>, _>>()?;
    let all_pass = reports.iter().all(GaugeCheckReport::passes);

    let mut out = OutDir::create(&global.out)?;
    out.write_json("gauge_report.json", &GaugeReportFile { all_pass, reports })?;
    let params = GaugeParams {
        state: &args.state,
        charge: args.charge,
        a0: args.a0,
        a1: args.a1,
        theta: args.theta,
        theta_amp: args.theta_amp,
        theta_modes: args.theta_modes,
        samples: args.samples,
        dt: args.dt,
    };
    out.finish("gauge-check", global.seed, global.format.ext(), &params)?;
    if all_pass {
        Ok(())
    } else {
        Err(Failure::check("gauge residuals exceed the invariance tolerances; see gauge_report.json"))
    }
}
