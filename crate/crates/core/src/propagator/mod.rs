//! Time evolution under the linear Schrödinger-like equation and the cubic
//! NLSE, plus stationary states (dense eigensolver and imaginary-time
//! relaxation).
//!
//! Two independent discretizations are provided and used as oracles for each
//! other: Crank–Nicolson with a three-point Laplacian, and Strang split-step
//! with Fourier differentiation (periodic grids only).

mod crank_nicolson;
mod eigen;
mod imaginary;
mod split_step;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use crank_nicolson::{CrankNicolson, Tridiagonal};
pub use eigen::{eigenstates, EigenSolution};
pub use imaginary::{imaginary_time_ground_state, GroundState};
pub use split_step::{bright_soliton, SplitStep};

use crate::calculus::{self, Spectral};
use crate::error::{Error, Result};
use crate::potentials::{potential_profile, PotentialSpec};
use crate::state::{Boundary, SpatialGrid, WaveFunction};

/// `ħ` (semantic granularity) and `m` (semantic inertia).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { hbar: 1.0, mass: 1.0 }
    }
}

impl Constants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite() && mass > 0.0 && mass.is_finite()) {
            return Err(Error::invalid(format!("need ħ > 0 and m > 0, got ħ={hbar}, m={mass}")));
        }
        Ok(Constants { hbar, mass })
    }

    /// `ħ²/2m`.
    pub fn kinetic_coefficient(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    CrankNicolson,
    SplitStepSpectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub hbar: f64,
    pub mass: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub method: Method,
    pub record_every: usize,
}

impl EvolutionConfig {
    pub fn new(dt: f64, n_steps: usize, method: Method) -> Self {
        EvolutionConfig { hbar: 1.0, mass: 1.0, dt, n_steps, method, record_every: 1 }
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn with_constants(mut self, c: Constants) -> Self {
        self.hbar = c.hbar;
        self.mass = c.mass;
        self
    }

    pub fn constants(&self) -> Constants {
        Constants { hbar: self.hbar, mass: self.mass }
    }

    pub fn validate(&self) -> Result<()> {
        Constants::new(self.hbar, self.mass)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.n_steps == 0 {
            return Err(Error::invalid("n_steps must be at least 1"));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// `sqrt(Σ|ψ|²dx)`.
    pub norm: f64,
    /// Energy with the kinetic form of the integrator that produced the state.
    pub energy: f64,
    pub position_expectation: f64,
    /// `Σ J⁰ dx` with the gauge field switched off.
    pub noether_charge: f64,
}

impl Observables {
    pub fn measure(psi: &WaveFunction, spec: &PotentialSpec, constants: Constants) -> Self {
        Self::measure_with(psi, spec, constants, KineticForm::default_for(psi.grid()))
    }

    pub fn measure_with(psi: &WaveFunction, spec: &PotentialSpec, constants: Constants, form: KineticForm) -> Self {
        let charge = psi.norm_sq();
        Observables {
            norm: charge.sqrt(),
            energy: energy_with(psi, spec, constants, form),
            position_expectation: psi.position_expectation(),
            noether_charge: charge,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<WaveFunction>,
    pub observables: Vec<Observables>,
}

impl Trajectory {
    /// Assembles a trajectory from externally produced states.
    pub fn from_states(
        times: Vec<f64>,
        states: Vec<WaveFunction>,
        spec: &PotentialSpec,
        constants: Constants,
    ) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::invalid("one time per state required"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("times must be strictly increasing"));
        }
        if let Some(first) = states.first() {
            for s in &states[1..] {
                first.grid().ensure_same(s.grid())?;
            }
        }
        let observables = states.iter().map(|s| Observables::measure(s, spec, constants)).collect();
        Ok(Trajectory { times, states, observables })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &WaveFunction {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Largest `|Q(t) − Q(0)|` along the trajectory.
    pub fn max_charge_drift(&self) -> f64 {
        let q0 = self.observables[0].noether_charge;
        self.observables.iter().map(|o| (o.noether_charge - q0).abs()).fold(0.0, f64::max)
    }

    /// Largest `|‖ψ‖² − 1|` along the trajectory.
    pub fn max_norm_defect(&self) -> f64 {
        self.observables.iter().map(|o| (o.norm * o.norm - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Observables as CSV with columns `t,norm,energy,x_expect,charge`.
    pub fn observables_csv(&self) -> String {
        let mut out = String::from("t,norm,energy,x_expect,charge\n");
        for (t, o) in self.times.iter().zip(&self.observables) {
            out.push_str(&format!("{},{},{},{},{}\n", t, o.norm, o.energy, o.position_expectation, o.noether_charge));
        }
        out
    }
}

/// Discretization of the kinetic term `(ħ²/2m)Σ|∂ₓψ|²dx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KineticForm {
    /// Fourier derivative; periodic grids only.
    Spectral,
    /// Forward differences, wrapping on periodic grids and including the
    /// wall pairs on reflecting grids. Equals `⟨ψ|H|ψ⟩` for the three-point
    /// Hamiltonian, so Crank–Nicolson conserves it to rounding.
    ThreePoint,
}

impl KineticForm {
    /// Spectral on periodic grids, three-point on reflecting ones.
    pub fn default_for(grid: &SpatialGrid) -> Self {
        match grid.boundary() {
            Boundary::Periodic => KineticForm::Spectral,
            Boundary::Reflecting => KineticForm::ThreePoint,
        }
    }

    /// The form whose energy the given integrator conserves.
    pub fn for_method(method: Method, grid: &SpatialGrid) -> Self {
        match method {
            Method::CrankNicolson => KineticForm::ThreePoint,
            Method::SplitStepSpectral => Self::default_for(grid),
        }
    }
}

/// `E[ψ] = (ħ²/2m)Σ|∂ₓψ|²dx + Σ U(x, |ψ|²)dx`, where `U` is the potential
/// energy density (`½γ|ψ|⁴` for the cubic term).
///
/// The kinetic term is spectral on periodic grids and three-point on
/// reflecting grids; see [`energy_with`].
pub fn energy(psi: &WaveFunction, spec: &PotentialSpec, constants: Constants) -> f64 {
    energy_with(psi, spec, constants, KineticForm::default_for(psi.grid()))
}

pub fn energy_with(psi: &WaveFunction, spec: &PotentialSpec, constants: Constants, form: KineticForm) -> f64 {
    let grid = psi.grid();
    let dx = grid.dx();
    let amps = psi.amplitudes();
    let form = if grid.boundary() == Boundary::Reflecting { KineticForm::ThreePoint } else { form };
    let gradient_sq: f64 = match form {
        KineticForm::Spectral => calculus::derivative(grid, amps).iter().map(|z| z.norm_sqr()).sum(),
        KineticForm::ThreePoint => {
            let n = amps.len();
            let zero = Complex64::new(0.0, 0.0);
            match grid.boundary() {
                Boundary::Periodic => (0..n).map(|i| ((amps[(i + 1) % n] - amps[i]) / dx).norm_sqr()).sum(),
                Boundary::Reflecting => (0..=n)
                    .map(|i| {
                        let right = if i < n { amps[i] } else { zero };
                        let left = if i > 0 { amps[i - 1] } else { zero };
                        ((right - left) / dx).norm_sqr()
                    })
                    .sum(),
            }
        }
    };
    let potential: f64 = amps.iter().enumerate().map(|(i, z)| spec.energy_density(grid.x(i), z.norm_sqr())).sum();
    constants.kinetic_coefficient() * gradient_sq * dx + potential * dx
}

/// A single time step of some propagator.
pub trait Stepper {
    fn step(&mut self, psi: &mut [Complex64]);
}

fn run<S: Stepper>(
    stepper: &mut S,
    psi0: &WaveFunction,
    spec: &PotentialSpec,
    cfg: &EvolutionConfig,
) -> Result<Trajectory> {
    let constants = cfg.constants();
    let grid = *psi0.grid();
    let form = KineticForm::for_method(cfg.method, &grid);
    let mut times = vec![0.0];
    let mut states = vec![psi0.clone()];
    let mut observables = vec![Observables::measure_with(psi0, spec, constants, form)];
    let mut amps = psi0.amplitudes().to_vec();
    for step in 1..=cfg.n_steps {
        stepper.step(&mut amps);
        if step % cfg.record_every == 0 || step == cfg.n_steps {
            let psi = WaveFunction::new(grid, amps.clone())
                .map_err(|_| Error::invalid(format!("evolution produced non-finite values at step {step}")))?;
            times.push(step as f64 * cfg.dt);
            observables.push(Observables::measure_with(&psi, spec, constants, form));
            states.push(psi);
        }
    }
    Ok(Trajectory { times, states, observables })
}

fn check_initial(psi0: &WaveFunction) -> Result<()> {
    if !(psi0.norm_sq() > 0.0) {
        return Err(Error::DegenerateState("initial state has zero norm".into()));
    }
    Ok(())
}

/// Integrates `iħ∂ₜψ = −(ħ²/2m)∂ₓₓψ + V(x)ψ` for a position-dependent potential.
pub fn evolve_linear(psi0: &WaveFunction, spec: &PotentialSpec, cfg: &EvolutionConfig) -> Result<Trajectory> {
    cfg.validate()?;
    spec.validated()?;
    check_initial(psi0)?;
    if spec.is_state_dependent() {
        return Err(Error::WrongMethod(
            "state-dependent potential; use evolve_nlse or imaginary-time relaxation".into(),
        ));
    }
    let grid = psi0.grid();
    let profile = potential_profile(spec, grid, None)?;
    match cfg.method {
        Method::CrankNicolson => {
            let mut stepper = CrankNicolson::new(grid, &profile, cfg.constants(), cfg.dt)?;
            run(&mut stepper, psi0, spec, cfg)
        }
        Method::SplitStepSpectral => {
            let mut stepper = SplitStep::linear(grid, &profile, cfg.constants(), cfg.dt)?;
            run(&mut stepper, psi0, spec, cfg)
        }
    }
}

/// Integrates `iħ∂ₜψ = −(ħ²/2m)∂ₓₓψ + γ|ψ|²ψ` by Strang splitting.
///
/// The input need not be normalized: the NLSE is not scale invariant, so the
/// amplitude of the initial state is part of the problem.
pub fn evolve_nlse(psi0: &WaveFunction, gamma: f64, cfg: &EvolutionConfig) -> Result<Trajectory> {
    cfg.validate()?;
    check_initial(psi0)?;
    let spec = PotentialSpec::cubic(gamma)?;
    if psi0.grid().boundary() != Boundary::Periodic {
        return Err(Error::UnsupportedCombination("the NLSE split-step solver needs a periodic grid".into()));
    }
    if cfg.method != Method::SplitStepSpectral {
        return Err(Error::UnsupportedCombination("the NLSE is integrated by split-step only".into()));
    }
    let mut stepper = SplitStep::nonlinear(psi0.grid(), spec, cfg.constants(), cfg.dt)?;
    run(&mut stepper, psi0, &spec, cfg)
}

/// Dispatches to [`evolve_linear`] or, for the cubic term, [`evolve_nlse`].
pub fn evolve(psi0: &WaveFunction, spec: &PotentialSpec, cfg: &EvolutionConfig) -> Result<Trajectory> {
    match *spec {
        PotentialSpec::CubicNonlinear { gamma } => evolve_nlse(psi0, gamma, cfg),
        PotentialSpec::MexicanHat { .. } => {
            cfg.validate()?;
            check_initial(psi0)?;
            if psi0.grid().boundary() != Boundary::Periodic || cfg.method != Method::SplitStepSpectral {
                return Err(Error::UnsupportedCombination(
                    "density-dependent potentials need split-step on a periodic grid".into(),
                ));
            }
            let mut stepper = SplitStep::nonlinear(psi0.grid(), *spec, cfg.constants(), cfg.dt)?;
            run(&mut stepper, psi0, spec, cfg)
        }
        _ => evolve_linear(psi0, spec, cfg),
    }
}

/// `H[ψ]ψ` evaluated with the spectral (periodic) or three-point (reflecting) Laplacian.
pub fn apply_hamiltonian(psi: &WaveFunction, spec: &PotentialSpec, constants: Constants) -> Vec<Complex64> {
    let grid = psi.grid();
    let lap = calculus::laplacian(grid, psi.amplitudes());
    let c = constants.kinetic_coefficient();
    psi.amplitudes()
        .iter()
        .zip(lap)
        .enumerate()
        .map(|(i, (z, l))| -c * l + spec.hamiltonian_term(grid.x(i), z.norm_sqr()) * z)
        .collect()
}

pub(crate) fn spectral_for(grid: &SpatialGrid) -> Result<Spectral> {
    if grid.boundary() != Boundary::Periodic {
        return Err(Error::UnsupportedCombination("spectral methods need a periodic grid".into()));
    }
    Ok(Spectral::new(grid))
}
