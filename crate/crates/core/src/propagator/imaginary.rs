use num_complex::Complex64;

use super::crank_nicolson::{fd_hamiltonian, Tridiagonal};
use super::{energy, spectral_for, EvolutionConfig, Method};
use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::state::{normalize, Boundary, SpatialGrid, WaveFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub state: WaveFunction,
    /// Number of relaxation steps taken.
    pub steps: usize,
    /// Energy after each step, starting with the initial state.
    pub energy_history: Vec<f64>,
}

/// Relaxes `ψ₀` along `∂τψ = −H[ψ]ψ/ħ`, renormalizing after every step,
/// until the energy changes by less than `tol` in one step.
///
/// `cfg.dt` is the imaginary-time step and `cfg.n_steps` the step budget.
/// With [`Method::SplitStepSpectral`] (periodic grids) the step is the
/// Strang product `e^{−KΔτ/2}e^{−WΔτ}e^{−KΔτ/2}`; with
/// [`Method::CrankNicolson`] it is the fully implicit finite-difference step
/// `(1 + ΔτH/ħ)ψⁿ⁺¹ = ψⁿ`, which damps every excited component
/// monotonically. Density-dependent potentials are frozen at `ψⁿ` within a step.
pub fn imaginary_time_ground_state(
    spec: &PotentialSpec,
    grid: &SpatialGrid,
    psi0: &WaveFunction,
    cfg: &EvolutionConfig,
    tol: f64,
) -> Result<GroundState> {
    cfg.validate()?;
    spec.validated()?;
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    grid.ensure_same(psi0.grid())?;
    let constants = cfg.constants();
    let mut psi = normalize(psi0)?;
    let mut e_prev = energy(&psi, spec, constants);
    let mut history = vec![e_prev];
    let mut relax = Relaxer::new(grid, spec, cfg)?;

    for step in 1..=cfg.n_steps {
        let mut amps = psi.into_amplitudes();
        relax.step(&mut amps)?;
        psi = normalize(&WaveFunction::new(*grid, amps)?)?;
        let e = energy(&psi, spec, constants);
        history.push(e);
        if (e - e_prev).abs() < tol {
            return Ok(GroundState { energy: e, state: psi, steps: step, energy_history: history });
        }
        e_prev = e;
    }
    Err(Error::ConvergenceFailure { steps: cfg.n_steps, last_energy: e_prev })
}

enum Relaxer {
    Split {
        spectral: crate::calculus::Spectral,
        half_kinetic: Vec<Complex64>,
        spec: PotentialSpec,
        xs: Vec<f64>,
        factor: f64,
    },
    Implicit {
        spec: PotentialSpec,
        grid: SpatialGrid,
        scale: f64,
        hbar: f64,
        mass: f64,
        fixed: Option<Tridiagonal>,
    },
}

impl Relaxer {
    fn new(grid: &SpatialGrid, spec: &PotentialSpec, cfg: &EvolutionConfig) -> Result<Self> {
        let c = cfg.constants();
        match cfg.method {
            Method::SplitStepSpectral => {
                let spectral = spectral_for(grid)?;
                let w = c.hbar / (2.0 * c.mass);
                let half_kinetic = spectral
                    .wavenumbers()
                    .iter()
                    .map(|k| Complex64::new((-w * k * k * cfg.dt / 2.0).exp(), 0.0))
                    .collect();
                Ok(Relaxer::Split { spectral, half_kinetic, spec: *spec, xs: grid.points(), factor: -cfg.dt / c.hbar })
            }
            Method::CrankNicolson => {
                let mut r = Relaxer::Implicit {
                    spec: *spec,
                    grid: *grid,
                    scale: cfg.dt / c.hbar,
                    hbar: c.hbar,
                    mass: c.mass,
                    fixed: None,
                };
                if !spec.is_state_dependent() {
                    let system = r.implicit_system(None)?;
                    if let Relaxer::Implicit { fixed, .. } = &mut r {
                        *fixed = Some(system);
                    }
                }
                Ok(r)
            }
        }
    }

    fn implicit_system(&self, psi: Option<&[Complex64]>) -> Result<Tridiagonal> {
        let Relaxer::Implicit { spec, grid, scale, hbar, mass, .. } = self else {
            unreachable!("implicit system requested for split relaxer")
        };
        let w: Vec<f64> = match psi {
            Some(psi) => psi.iter().enumerate().map(|(i, z)| spec.hamiltonian_term(grid.x(i), z.norm_sqr())).collect(),
            None => grid.points().iter().map(|&x| spec.hamiltonian_term(x, 0.0)).collect(),
        };
        let (diag, off) = fd_hamiltonian(grid, &w, super::Constants { hbar: *hbar, mass: *mass });
        let lhs: Vec<Complex64> = diag.iter().map(|d| Complex64::new(1.0 + scale * d, 0.0)).collect();
        Tridiagonal::new(&lhs, Complex64::new(scale * off, 0.0), grid.boundary() == Boundary::Periodic)
    }

    fn step(&mut self, psi: &mut [Complex64]) -> Result<()> {
        match self {
            Relaxer::Split { spectral, half_kinetic, spec, xs, factor } => {
                spectral.apply_table(psi, half_kinetic);
                for (z, &x) in psi.iter_mut().zip(xs.iter()) {
                    *z *= (*factor * spec.hamiltonian_term(x, z.norm_sqr())).exp();
                }
                spectral.apply_table(psi, half_kinetic);
            }
            Relaxer::Implicit { fixed: Some(system), .. } => system.solve(psi),
            Relaxer::Implicit { fixed: None, .. } => {
                let system = self.implicit_system(Some(psi))?;
                system.solve(psi);
            }
        }
        Ok(())
    }
}
