use std::fs;
use std::path::Path;

use clap::{Args, ValueEnum};
use semwave::{io, Boundary, Constants, PotentialSpec, SpatialGrid, WaveFunction};
use serde::{Deserialize, Serialize};

use crate::failure::Failure;
use crate::output::OutDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    Reflecting,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::Reflecting => Boundary::Reflecting,
        }
    }
}

/// Grid flags; unset values fall back to the command's defaults.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Number of grid points.
    #[arg(long = "n")]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
}

impl GridArgs {
    pub fn resolve(&self, n: usize, x_min: f64, x_max: f64, boundary: Boundary) -> Result<SpatialGrid, Failure> {
        let boundary = self.boundary.map_or(boundary, Boundary::from);
        Ok(SpatialGrid::new(self.n.unwrap_or(n), self.x_min.unwrap_or(x_min), self.x_max.unwrap_or(x_max), boundary)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Free,
    Harmonic,
    DoubleWell,
    MexicanHat,
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    /// Harmonic frequency ω.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Double-well height `a` in `a(x² − b²)²`.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Double-well minima at `±b`.
    #[arg(long, default_value_t = 2.0)]
    pub b: f64,
    /// Mexican-hat `μ²` in `−μ²|ψ|² + λ|ψ|⁴`.
    #[arg(long, default_value_t = 1.0)]
    pub mu2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}

impl PotentialArgs {
    pub fn build(&self, kind: PotentialKind, mass: f64) -> Result<PotentialSpec, Failure> {
        Ok(match kind {
            PotentialKind::Free => PotentialSpec::Free,
            PotentialKind::Harmonic => PotentialSpec::harmonic(mass, self.omega)?,
            PotentialKind::DoubleWell => PotentialSpec::double_well(self.a, self.b)?,
            PotentialKind::MexicanHat => PotentialSpec::mexican_hat(self.mu2, self.lambda)?,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConstantArgs {
    /// Semantic granularity ħ.
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Semantic inertia m (also the harmonic oscillator mass).
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
}

impl ConstantArgs {
    pub fn constants(&self) -> Result<Constants, Failure> {
        Ok(Constants::new(self.hbar, self.mass)?)
    }
}

pub fn read_state(path: &Path) -> Result<WaveFunction, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read state file {}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|e| e == "csv") { io::from_csv(&text) } else { io::from_json(&text) };
    parsed.map_err(|e| Failure::from(e).context(&format!("malformed state file {}", path.display())))
}

pub fn write_state(out: &mut OutDir, stem: &str, psi: &WaveFunction, format: Format) -> Result<(), Failure> {
    let text = match format {
        Format::Json => {
            let mut s = io::to_json(psi);
            s.push('\n');
            s
        }
        Format::Csv => io::to_csv(psi),
    };
    out.write(&format!("{stem}.{}", format.ext()), &text)
}

/// Sign changes of the real part, ignoring entries below `1e−6` of the peak.
pub fn node_count(psi: &WaveFunction) -> usize {
    let re: Vec<f64> = psi.amplitudes().iter().map(|z| z.re).collect();
    let peak = re.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let significant: Vec<f64> = re.into_iter().filter(|v| v.abs() > 1e-6 * peak).collect();
    significant.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value < bound`.
    pub fn below(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.to_string(), value, bound, pass: value < bound }
    }
}

pub fn all_pass(checks: &[Check]) -> Result<(), Failure> {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} = {:e} (bound {:e})", c.name, c.value, c.bound))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::check(failed.join("; ")))
    }
}
