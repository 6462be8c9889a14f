use num_complex::Complex64;

use super::{spectral_for, Constants, Stepper};
use crate::calculus::Spectral;
use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::state::{SpatialGrid, WaveFunction};

#[derive(Debug, Clone)]
enum PotentialStep {
    /// Precomputed `exp(−iV(x)Δt/ħ)`.
    Fixed(Vec<Complex64>),
    /// Density-dependent term, re-evaluated from `|ψ|²` every step.
    Density { spec: PotentialSpec, xs: Vec<f64>, factor: f64 },
}

/// Strang split-step Fourier propagator:
/// half kinetic step, full potential step, half kinetic step.
///
/// The potential step multiplies by a pure phase, so it leaves `|ψ|` (and
/// with it any density-dependent potential) unchanged and is exact.
#[derive(Clone)]
pub struct SplitStep {
    spectral: Spectral,
    half_kinetic: Vec<Complex64>,
    potential: PotentialStep,
}

impl SplitStep {
    pub fn linear(grid: &SpatialGrid, potential: &[f64], constants: Constants, dt: f64) -> Result<Self> {
        if potential.len() != grid.n_points() {
            return Err(Error::invalid("potential profile length differs from grid"));
        }
        let spectral = spectral_for(grid)?;
        let phases = potential.iter().map(|v| Complex64::from_polar(1.0, -v * dt / constants.hbar)).collect();
        Ok(Self::assemble(spectral, constants, dt, PotentialStep::Fixed(phases)))
    }

    pub fn nonlinear(grid: &SpatialGrid, spec: PotentialSpec, constants: Constants, dt: f64) -> Result<Self> {
        let spectral = spectral_for(grid)?;
        let step = PotentialStep::Density { spec, xs: grid.points(), factor: -dt / constants.hbar };
        Ok(Self::assemble(spectral, constants, dt, step))
    }

    fn assemble(spectral: Spectral, constants: Constants, dt: f64, potential: PotentialStep) -> Self {
        let w = constants.hbar / (2.0 * constants.mass);
        let half_kinetic =
            spectral.wavenumbers().iter().map(|k| Complex64::from_polar(1.0, -w * k * k * dt / 2.0)).collect();
        SplitStep { spectral, half_kinetic, potential }
    }
}

impl Stepper for SplitStep {
    fn step(&mut self, psi: &mut [Complex64]) {
        self.spectral.apply_table(psi, &self.half_kinetic);
        match &self.potential {
            PotentialStep::Fixed(phases) => {
                for (z, p) in psi.iter_mut().zip(phases) {
                    *z *= p;
                }
            }
            PotentialStep::Density { spec, xs, factor } => {
                for (z, &x) in psi.iter_mut().zip(xs) {
                    let w = spec.hamiltonian_term(x, z.norm_sqr());
                    *z *= Complex64::from_polar(1.0, factor * w);
                }
            }
        }
        self.spectral.apply_table(psi, &self.half_kinetic);
    }
}

/// Bright soliton of the focusing NLSE (`γ < 0`):
/// `ψ(x, t) = A·sech(η x)·exp(iħη²t/2m)` with `A = ηħ/√(m|γ|)`.
///
/// For `ħ = m = 1`, `γ = −1` this is `η sech(ηx) e^{iη²t/2}`.
pub fn bright_soliton(grid: SpatialGrid, eta: f64, gamma: f64, constants: Constants, t: f64) -> Result<WaveFunction> {
    if !(gamma < 0.0) {
        return Err(Error::invalid("bright solitons need a focusing nonlinearity (γ < 0)"));
    }
    if !(eta > 0.0) {
        return Err(Error::invalid("soliton inverse width must be positive"));
    }
    let amplitude = eta * constants.hbar / (constants.mass * gamma.abs()).sqrt();
    let phase = constants.hbar * eta * eta * t / (2.0 * constants.mass);
    WaveFunction::from_fn(grid, |x| Complex64::from_polar(amplitude / (eta * x).cosh(), phase))
}
