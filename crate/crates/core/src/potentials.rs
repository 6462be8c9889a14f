//! Potential landscapes: fixed profiles `V(x)` and density-dependent
//! self-interactions `V(|ψ|²)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{SpatialGrid, WaveFunction};

/// Closed family of potentials. Serialized as a tagged union, e.g.
/// `{"type":"double_well","a":1.0,"b":2.0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialSpec {
    Free,
    /// `½ m ω² x²`.
    Harmonic {
        mass: f64,
        omega: f64,
    },
    /// `a (x² − b²)²`, minima at `±b`.
    DoubleWell {
        a: f64,
        b: f64,
    },
    /// `γ |ψ|²`; `γ < 0` focuses, `γ > 0` defocuses.
    CubicNonlinear {
        gamma: f64,
    },
    /// `−μ² |ψ|² + λ |ψ|⁴`.
    MexicanHat {
        mu2: f64,
        lambda: f64,
    },
}

impl PotentialSpec {
    pub fn harmonic(mass: f64, omega: f64) -> Result<Self> {
        PotentialSpec::Harmonic { mass, omega }.validated()
    }

    pub fn double_well(a: f64, b: f64) -> Result<Self> {
        PotentialSpec::DoubleWell { a, b }.validated()
    }

    pub fn cubic(gamma: f64) -> Result<Self> {
        PotentialSpec::CubicNonlinear { gamma }.validated()
    }

    pub fn mexican_hat(mu2: f64, lambda: f64) -> Result<Self> {
        PotentialSpec::MexicanHat { mu2, lambda }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be finite")))
            }
        };
        match self {
            PotentialSpec::Free => {}
            PotentialSpec::Harmonic { mass, omega } => {
                finite(mass, "mass")?;
                finite(omega, "omega")?;
                if mass <= 0.0 || omega <= 0.0 {
                    return Err(Error::invalid("harmonic potential needs m > 0 and ω > 0"));
                }
            }
            PotentialSpec::DoubleWell { a, b } => {
                finite(a, "a")?;
                finite(b, "b")?;
                if a <= 0.0 || b <= 0.0 {
                    return Err(Error::invalid("double well needs a > 0 and b > 0"));
                }
            }
            PotentialSpec::CubicNonlinear { gamma } => finite(gamma, "gamma")?,
            PotentialSpec::MexicanHat { mu2, lambda } => {
                finite(mu2, "mu2")?;
                finite(lambda, "lambda")?;
                if lambda <= 0.0 {
                    return Err(Error::invalid("mexican hat needs λ > 0 to be bounded below"));
                }
            }
        }
        Ok(self)
    }

    /// True for the variants that depend on `|ψ|²` rather than on `x`.
    pub fn is_state_dependent(&self) -> bool {
        matches!(self, PotentialSpec::CubicNonlinear { .. } | PotentialSpec::MexicanHat { .. })
    }

    /// Spring constant `k = m ω²` of the harmonic well.
    pub fn spring_constant(&self) -> Option<f64> {
        match *self {
            PotentialSpec::Harmonic { mass, omega } => Some(mass * omega * omega),
            _ => None,
        }
    }

    /// `V` at position `x` and local density `psi_abs2 = |ψ(x)|²`.
    ///
    /// Position-dependent variants ignore the density; density-dependent
    /// variants ignore `x`. For the Mexican hat this is the density
    /// `−μ²ρ + λρ²` itself, so it is stationary at `ρ = μ²/(2λ)`.
    pub fn evaluate(&self, x: f64, psi_abs2: f64) -> Result<f64> {
        if !(psi_abs2 >= 0.0) {
            return Err(Error::invalid(format!("|ψ|² must be non-negative, got {psi_abs2}")));
        }
        Ok(match *self {
            PotentialSpec::Free => 0.0,
            PotentialSpec::Harmonic { mass, omega } => 0.5 * mass * omega * omega * x * x,
            PotentialSpec::DoubleWell { a, b } => {
                let s = x * x - b * b;
                a * s * s
            }
            PotentialSpec::CubicNonlinear { gamma } => gamma * psi_abs2,
            PotentialSpec::MexicanHat { mu2, lambda } => -mu2 * psi_abs2 + lambda * psi_abs2 * psi_abs2,
        })
    }

    /// Multiplier `W` in the Hamiltonian action `H[ψ]ψ = −(ħ²/2m)ψ'' + Wψ`.
    ///
    /// This is the functional derivative of [`PotentialSpec::energy_density`]
    /// with respect to `ψ*`: `V(x)` for fixed landscapes, `γρ` for the cubic
    /// term, `−μ² + 2λρ` for the Mexican hat.
    pub fn hamiltonian_term(&self, x: f64, rho: f64) -> f64 {
        match *self {
            PotentialSpec::CubicNonlinear { gamma } => gamma * rho,
            PotentialSpec::MexicanHat { mu2, lambda } => -mu2 + 2.0 * lambda * rho,
            _ => self.evaluate(x, rho.max(0.0)).unwrap_or(0.0),
        }
    }

    /// Potential-energy density entering `E[ψ]`: `V(x)ρ`, `½γρ²`, or `−μ²ρ + λρ²`.
    pub fn energy_density(&self, x: f64, rho: f64) -> f64 {
        match *self {
            PotentialSpec::CubicNonlinear { gamma } => 0.5 * gamma * rho * rho,
            PotentialSpec::MexicanHat { mu2, lambda } => -mu2 * rho + lambda * rho * rho,
            _ => self.evaluate(x, rho.max(0.0)).unwrap_or(0.0) * rho,
        }
    }
}

/// Evaluates the potential at every grid node. Density-dependent variants
/// need `psi`.
pub fn potential_profile(spec: &PotentialSpec, grid: &SpatialGrid, psi: Option<&WaveFunction>) -> Result<Vec<f64>> {
    if spec.is_state_dependent() {
        let psi = psi.ok_or_else(|| Error::invalid("a state-dependent potential needs ψ"))?;
        grid.ensure_same(psi.grid())?;
        grid.points().iter().zip(psi.amplitudes()).map(|(&x, z)| spec.evaluate(x, z.norm_sqr())).collect()
    } else {
        grid.points().iter().map(|&x| spec.evaluate(x, 0.0)).collect()
    }
}

/// Indices of strict interior local minima of a sampled profile.
pub fn local_minima(profile: &[f64]) -> Vec<usize> {
    (1..profile.len().saturating_sub(1))
        .filter(|&i| profile[i] < profile[i - 1] && profile[i] < profile[i + 1])
        .collect()
}
