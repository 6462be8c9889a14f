//! U(1) gauge layer over a prescribed background field.
//!
//! Conventions: `ψ → e^{iθ}ψ`, `A_μ → A_μ + (1/q)∂_μθ`, `D_μ = ∂_μ − iqA_μ`.
//! In 1+1 dimensions the only field-strength component is
//! `F₀₁ = ∂ₜA₁ − ∂ₓA₀`, and with a Lorentzian metric (either signature)
//! `F_{μν}F^{μν} = −2F₀₁²`, so `−(1/4q²)F_{μν}F^{μν} = +(1/2q²)F₀₁²`.
//! Reports label this convention `"mostly-minus"`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{self, gradient_real};
use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::propagator::{Constants, EvolutionConfig, Trajectory};
use crate::state::{SpatialGrid, WaveFunction};

pub const METRIC_CONVENTION: &str = "mostly-minus";

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeField {
    grid: SpatialGrid,
    /// Scalar potential `A₀` per node.
    pub a0: Vec<f64>,
    /// Spatial component `A₁` per node.
    pub a1: Vec<f64>,
    charge: f64,
}

fn check_series(grid: &SpatialGrid, values: &[f64], name: &str) -> Result<()> {
    if values.len() != grid.n_points() {
        return Err(Error::invalid(format!("{name} has {} entries for {} grid points", values.len(), grid.n_points())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("{name} contains non-finite values")));
    }
    Ok(())
}

impl GaugeField {
    pub fn new(grid: SpatialGrid, a0: Vec<f64>, a1: Vec<f64>, charge: f64) -> Result<Self> {
        check_series(&grid, &a0, "A0")?;
        check_series(&grid, &a1, "A1")?;
        if charge == 0.0 || !charge.is_finite() {
            return Err(Error::invalid(format!("semantic charge q must be finite and non-zero, got {charge}")));
        }
        Ok(GaugeField { grid, a0, a1, charge })
    }

    pub fn zero(grid: SpatialGrid, charge: f64) -> Result<Self> {
        let n = grid.n_points();
        Self::new(grid, vec![0.0; n], vec![0.0; n], charge)
    }

    pub fn from_fns(grid: SpatialGrid, charge: f64, a0: impl Fn(f64) -> f64, a1: impl Fn(f64) -> f64) -> Result<Self> {
        let xs = grid.points();
        Self::new(grid, xs.iter().map(|&x| a0(x)).collect(), xs.iter().map(|&x| a1(x)).collect(), charge)
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }
}

/// Local phase `θ(x)` and its time derivative at the current slice.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransform {
    pub theta: Vec<f64>,
    pub theta_dot: Vec<f64>,
}

impl GaugeTransform {
    pub fn new(grid: &SpatialGrid, theta: Vec<f64>, theta_dot: Vec<f64>) -> Result<Self> {
        check_series(grid, &theta, "theta")?;
        check_series(grid, &theta_dot, "theta_dot")?;
        Ok(GaugeTransform { theta, theta_dot })
    }

    /// Time-independent transform.
    pub fn fixed(grid: &SpatialGrid, theta: Vec<f64>) -> Result<Self> {
        let n = grid.n_points();
        Self::new(grid, theta, vec![0.0; n])
    }

    pub fn from_fn(grid: &SpatialGrid, theta: impl Fn(f64) -> f64) -> Result<Self> {
        Self::fixed(grid, grid.points().into_iter().map(theta).collect())
    }

    pub fn identity(grid: &SpatialGrid) -> Self {
        let n = grid.n_points();
        GaugeTransform { theta: vec![0.0; n], theta_dot: vec![0.0; n] }
    }

    /// Seeded random smooth static phase: a constant plus `modes` Fourier
    /// modes of the box, all coefficients uniform in `[−1, 1]`.
    pub fn random_smooth(grid: &SpatialGrid, seed: u64, modes: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let offset: f64 = rng.random_range(-1.0..1.0);
        let coeffs: Vec<(f64, f64)> =
            (0..modes).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let l = grid.length();
        let x0 = grid.x_min();
        let theta = grid
            .points()
            .iter()
            .map(|&x| {
                let u = 2.0 * PI * (x - x0) / l;
                offset
                    + coeffs
                        .iter()
                        .enumerate()
                        .map(|(m, (a, b))| {
                            let w = (m + 1) as f64 * u;
                            a * w.cos() + b * w.sin()
                        })
                        .sum::<f64>()
            })
            .collect();
        GaugeTransform { theta, theta_dot: vec![0.0; grid.n_points()] }
    }

    /// `θ₁ + θ₂` (and likewise for `∂ₜθ`).
    pub fn compose(&self, other: &GaugeTransform) -> GaugeTransform {
        GaugeTransform {
            theta: self.theta.iter().zip(&other.theta).map(|(a, b)| a + b).collect(),
            theta_dot: self.theta_dot.iter().zip(&other.theta_dot).map(|(a, b)| a + b).collect(),
        }
    }

    /// The same transform advanced by `dt`, assuming `θ` is linear in time.
    pub fn advanced(&self, dt: f64) -> GaugeTransform {
        GaugeTransform {
            theta: self.theta.iter().zip(&self.theta_dot).map(|(t, d)| t + d * dt).collect(),
            theta_dot: self.theta_dot.clone(),
        }
    }

    /// Transforms a time derivative: `∂ₜ(e^{iθ}ψ) = e^{iθ}(∂ₜψ + iθ̇ψ)`.
    pub fn transform_time_derivative(&self, psi: &WaveFunction, dpsi_dt: &[Complex64]) -> Result<Vec<Complex64>> {
        if dpsi_dt.len() != psi.len() || self.theta.len() != psi.len() {
            return Err(Error::invalid("time derivative length differs from state"));
        }
        Ok(psi
            .amplitudes()
            .iter()
            .zip(dpsi_dt)
            .enumerate()
            .map(|(i, (z, dz))| {
                Complex64::from_polar(1.0, self.theta[i]) * (dz + Complex64::new(0.0, self.theta_dot[i]) * z)
            })
            .collect())
    }
}

/// `ψ′ = e^{iθ}ψ`, `A₁′ = A₁ + ∂ₓθ/q`, `A₀′ = A₀ + θ̇/q`.
pub fn apply_gauge_transform(
    psi: &WaveFunction,
    field: &GaugeField,
    g: &GaugeTransform,
) -> Result<(WaveFunction, GaugeField)> {
    psi.grid().ensure_same(&field.grid)?;
    if g.theta.len() != psi.len() || g.theta_dot.len() != psi.len() {
        return Err(Error::IncompatibleGrids("gauge transform sampled on a different grid".into()));
    }
    let rotated = psi.amplitudes().iter().zip(&g.theta).map(|(z, &t)| Complex64::from_polar(1.0, t) * z).collect();
    let psi_t = WaveFunction::new(field.grid, rotated)?;
    let q = field.charge;
    let grad = gradient_real(&field.grid, &g.theta);
    let a1 = field.a1.iter().zip(&grad).map(|(a, d)| a + d / q).collect();
    let a0 = field.a0.iter().zip(&g.theta_dot).map(|(a, d)| a + d / q).collect();
    Ok((psi_t, GaugeField { grid: field.grid, a0, a1, charge: q }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Time,
    Space,
}

/// `Dₓψ = ∂ₓψ − iqA₁ψ` or `D₀ψ = ∂ₜψ − iqA₀ψ`; the time direction needs the
/// caller's `∂ₜψ`.
pub fn covariant_derivative(
    psi: &WaveFunction,
    field: &GaugeField,
    direction: Direction,
    dpsi_dt: Option<&[Complex64]>,
) -> Result<Vec<Complex64>> {
    psi.grid().ensure_same(&field.grid)?;
    let q = field.charge;
    let (partial, a) = match direction {
        Direction::Space => (calculus::derivative(psi.grid(), psi.amplitudes()), &field.a1),
        Direction::Time => {
            let d = dpsi_dt.ok_or_else(|| Error::invalid("the time direction needs ∂ₜψ"))?;
            if d.len() != psi.len() {
                return Err(Error::invalid("∂ₜψ length differs from state"));
            }
            (d.to_vec(), &field.a0)
        }
    };
    Ok(partial
        .into_iter()
        .zip(psi.amplitudes())
        .zip(a)
        .map(|((d, z), &a)| d - Complex64::new(0.0, q * a) * z)
        .collect())
}

/// `F₀₁ = (A₁_after − A₁_before)/dt − ∂ₓ((A₀_after + A₀_before)/2)`.
pub fn field_strength(before: &GaugeField, after: &GaugeField, dt: f64) -> Result<Vec<f64>> {
    before.grid.ensure_same(&after.grid)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    let a0_mid: Vec<f64> = before.a0.iter().zip(&after.a0).map(|(a, b)| 0.5 * (a + b)).collect();
    let grad = gradient_real(&before.grid, &a0_mid);
    Ok(before.a1.iter().zip(&after.a1).zip(grad).map(|((b, a), g)| (a - b) / dt - g).collect())
}

/// Self-interaction term `𝓛_N` of the matter Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Nonlinearity {
    None,
    /// `−(γ/2)|ψ|⁴`.
    Cubic {
        gamma: f64,
    },
    /// `μ²|ψ|² − λ|ψ|⁴`.
    MexicanHat {
        mu2: f64,
        lambda: f64,
    },
}

impl Nonlinearity {
    pub fn density(&self, rho: f64) -> f64 {
        match *self {
            Nonlinearity::None => 0.0,
            Nonlinearity::Cubic { gamma } => -0.5 * gamma * rho * rho,
            Nonlinearity::MexicanHat { mu2, lambda } => mu2 * rho - lambda * rho * rho,
        }
    }
}

/// Non-gauge matter terms: the self-interaction and an optional external
/// landscape entering as `−V|ψ|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatterTerms {
    pub nonlinearity: Nonlinearity,
    pub potential: Option<Vec<f64>>,
}

impl MatterTerms {
    pub fn none() -> Self {
        MatterTerms { nonlinearity: Nonlinearity::None, potential: None }
    }

    pub fn with_potential(potential: Vec<f64>) -> Self {
        MatterTerms { nonlinearity: Nonlinearity::None, potential: Some(potential) }
    }
}

/// Pointwise gauge-invariant Lagrangian density
/// `𝓛 = (1/2q²)F₀₁² + (iħ/2)(ψ*D₀ψ − ψ(D₀ψ)*) − (ħ²/2m)|Dₓψ|² + 𝓛_N − V|ψ|²`.
pub fn lagrangian_density(
    psi: &WaveFunction,
    dpsi_dt: &[Complex64],
    field: &GaugeField,
    f01: &[f64],
    terms: &MatterTerms,
    constants: Constants,
) -> Result<Vec<f64>> {
    let n = psi.len();
    if dpsi_dt.len() != n || f01.len() != n {
        return Err(Error::invalid("ψ, ∂ₜψ and F₀₁ must have one entry per grid point"));
    }
    if let Some(v) = &terms.potential {
        if v.len() != n {
            return Err(Error::invalid("external potential length differs from grid"));
        }
    }
    let q2 = field.charge * field.charge;
    let d0 = covariant_derivative(psi, field, Direction::Time, Some(dpsi_dt))?;
    let dx = covariant_derivative(psi, field, Direction::Space, None)?;
    let c = constants.kinetic_coefficient();
    Ok((0..n)
        .map(|i| {
            let z = psi.amplitudes()[i];
            let rho = z.norm_sqr();
            // (iħ/2)(ψ*D₀ψ − c.c.) = −ħ·Im(ψ*D₀ψ)
            let temporal = -constants.hbar * (z.conj() * d0[i]).im;
            let external = terms.potential.as_ref().map_or(0.0, |v| v[i] * rho);
            f01[i] * f01[i] / (2.0 * q2) + temporal - c * dx[i].norm_sqr() + terms.nonlinearity.density(rho) - external
        })
        .collect())
}

/// Maximum of `|iħ∂ₜψ − H[ψ]ψ|` over interior records and all nodes, with
/// centered time differences (`A ≡ 0`). The trajectory must be recorded
/// every step.
pub fn euler_lagrange_residual(trajectory: &Trajectory, spec: &PotentialSpec, cfg: &EvolutionConfig) -> Result<f64> {
    if trajectory.len() < 3 {
        return Err(Error::invalid(format!("need at least 3 records, got {}", trajectory.len())));
    }
    if cfg.record_every != 1 {
        return Err(Error::invalid("residual needs a trajectory recorded every step"));
    }
    let constants = cfg.constants();
    let mut worst = 0.0f64;
    for n in 1..trajectory.len() - 1 {
        let span = trajectory.times[n + 1] - trajectory.times[n - 1];
        let prev = trajectory.states[n - 1].amplitudes();
        let next = trajectory.states[n + 1].amplitudes();
        let h_psi = crate::propagator::apply_hamiltonian(&trajectory.states[n], spec, constants);
        for i in 0..h_psi.len() {
            let dt_psi = (next[i] - prev[i]) / span;
            let r = Complex64::new(0.0, constants.hbar) * dt_psi - h_psi[i];
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

/// Noether density `J⁰ = |ψ|²`, current `J¹ = (ħ/m)Im(ψ*Dₓψ)` and charge `Q = ΣJ⁰dx`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoetherRecord {
    pub charge: f64,
    pub j0: Vec<f64>,
    pub j1: Vec<f64>,
}

pub fn noether(psi: &WaveFunction, field: &GaugeField, constants: Constants) -> Result<NoetherRecord> {
    let d = covariant_derivative(psi, field, Direction::Space, None)?;
    let j0 = psi.density();
    let j1 =
        psi.amplitudes().iter().zip(&d).map(|(z, dz)| constants.hbar / constants.mass * (z.conj() * dz).im).collect();
    let charge = j0.iter().sum::<f64>() * psi.grid().dx();
    Ok(NoetherRecord { charge, j0, j1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityCheck {
    /// `Σ(∂ₜJ⁰ + ∂ₓJ¹)dx`.
    pub integrated: f64,
    /// `max|∂ₜJ⁰ + ∂ₓJ¹|`, dominated by discretization error.
    pub max_pointwise: f64,
}

/// Continuity residual between two consecutive slices, with `∂ₜJ⁰` a forward
/// difference and `J¹` averaged over the two slices.
pub fn continuity_residual(
    before: &WaveFunction,
    after: &WaveFunction,
    field: &GaugeField,
    constants: Constants,
    dt: f64,
) -> Result<ContinuityCheck> {
    before.grid().ensure_same(after.grid())?;
    let r0 = noether(before, field, constants)?;
    let r1 = noether(after, field, constants)?;
    let j1_mid: Vec<f64> = r0.j1.iter().zip(&r1.j1).map(|(a, b)| 0.5 * (a + b)).collect();
    let div = gradient_real(before.grid(), &j1_mid);
    let residual: Vec<f64> = (0..before.len()).map(|i| (r1.j0[i] - r0.j0[i]) / dt + div[i]).collect();
    Ok(ContinuityCheck {
        integrated: residual.iter().sum::<f64>() * before.grid().dx(),
        max_pointwise: residual.iter().fold(0.0, |m, r| m.max(r.abs())),
    })
}

/// Continuity residual for every consecutive pair of records in a trajectory.
pub fn trajectory_continuity(
    trajectory: &Trajectory,
    field: &GaugeField,
    constants: Constants,
) -> Result<Vec<ContinuityCheck>> {
    (1..trajectory.len())
        .map(|n| {
            let dt = trajectory.times[n] - trajectory.times[n - 1];
            continuity_residual(&trajectory.states[n - 1], &trajectory.states[n], field, constants, dt)
        })
        .collect()
}

/// Outcome of running the full covariance suite on one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeCheckReport {
    pub theta_description: String,
    /// `max |(|ψ′|² − |ψ|²)|`.
    pub max_abs_density_diff: f64,
    /// `max |D′ψ′ − e^{iθ}Dψ|` over both directions.
    pub max_covariance_residual: f64,
    pub max_field_strength_diff: f64,
    pub max_lagrangian_diff: f64,
    pub charge_before: f64,
    pub charge_after: f64,
    pub convention: String,
}

impl GaugeCheckReport {
    /// True when every residual is within the invariance tolerances
    /// (density 1e−14, covariance/F/𝓛 1e−8, charge 1e−12).
    pub fn passes(&self) -> bool {
        self.max_abs_density_diff <= 1e-14
            && self.max_covariance_residual <= 1e-8
            && self.max_field_strength_diff <= 1e-8
            && self.max_lagrangian_diff <= 1e-8
            && (self.charge_after - self.charge_before).abs() <= 1e-12
    }
}

/// Compares `(ψ, A)` with its transform under `g`.
///
/// The field is treated as static across a slice of width `dt`, `∂ₜψ` is
/// taken from free Schrödinger evolution, and the transformed field strength
/// uses `θ` advanced by `θ̇·dt` for the second slice.
pub fn gauge_check(
    psi: &WaveFunction,
    field: &GaugeField,
    g: &GaugeTransform,
    theta_description: &str,
    terms: &MatterTerms,
    constants: Constants,
    dt: f64,
) -> Result<GaugeCheckReport> {
    let (psi_t, field_t) = apply_gauge_transform(psi, field, g)?;
    let (_, field_t_next) = apply_gauge_transform(psi, field, &g.advanced(dt))?;

    let max_abs_density_diff = psi
        .amplitudes()
        .iter()
        .zip(psi_t.amplitudes())
        .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
        .fold(0.0, f64::max);

    let lap = calculus::laplacian(psi.grid(), psi.amplitudes());
    let c = constants.kinetic_coefficient();
    // iħ∂ₜψ = −(ħ²/2m)∂ₓₓψ
    let dpsi_dt: Vec<Complex64> = lap.iter().map(|l| Complex64::new(0.0, c / constants.hbar) * l).collect();
    let dpsi_dt_t = g.transform_time_derivative(psi, &dpsi_dt)?;

    let mut max_cov = 0.0f64;
    for (dir, d, d_t) in
        [(Direction::Space, None, None), (Direction::Time, Some(dpsi_dt.as_slice()), Some(dpsi_dt_t.as_slice()))]
    {
        let before = covariant_derivative(psi, field, dir, d)?;
        let after = covariant_derivative(&psi_t, &field_t, dir, d_t)?;
        for (i, (b, a)) in before.iter().zip(&after).enumerate() {
            max_cov = max_cov.max((a - Complex64::from_polar(1.0, g.theta[i]) * b).norm());
        }
    }

    let f = field_strength(field, field, dt)?;
    let f_t = field_strength(&field_t, &field_t_next, dt)?;
    let max_field_strength_diff = f.iter().zip(&f_t).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let l = lagrangian_density(psi, &dpsi_dt, field, &f, terms, constants)?;
    let l_t = lagrangian_density(&psi_t, &dpsi_dt_t, &field_t, &f_t, terms, constants)?;
    let max_lagrangian_diff = l.iter().zip(&l_t).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    Ok(GaugeCheckReport {
        theta_description: theta_description.to_string(),
        max_abs_density_diff,
        max_covariance_residual: max_cov,
        max_field_strength_diff,
        max_lagrangian_diff,
        charge_before: noether(psi, field, constants)?.charge,
        charge_after: noether(&psi_t, &field_t, constants)?.charge,
        convention: METRIC_CONVENTION.to_string(),
    })
}
