use num_complex::Complex64;

use super::{Constants, Stepper};
use crate::error::{Error, Result};
use crate::state::{Boundary, SpatialGrid};

/// Pre-factored complex tridiagonal system with a constant off-diagonal,
/// optionally with periodic corner entries (solved by Sherman–Morrison).
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    off: Complex64,
    // Thomas factors of the (possibly corner-modified) matrix.
    upper: Vec<Complex64>,
    pivots: Vec<Complex64>,
    cyclic: Option<CyclicCorrection>,
}

#[derive(Debug, Clone)]
struct CyclicCorrection {
    gamma: Complex64,
    corner: Complex64,
    z: Vec<Complex64>,
    denom: Complex64,
}

impl Tridiagonal {
    pub fn new(diag: &[Complex64], off: Complex64, periodic: bool) -> Result<Self> {
        let n = diag.len();
        if n < 3 {
            return Err(Error::invalid("tridiagonal system needs at least 3 rows"));
        }
        if !periodic {
            let (upper, pivots) = factor(diag, off)?;
            return Ok(Tridiagonal { off, upper, pivots, cyclic: None });
        }
        // A = A' + u vᵀ with u = (γ, 0, …, 0, off), v = (1, 0, …, 0, off/γ).
        let gamma = -diag[0];
        let mut modified = diag.to_vec();
        modified[0] -= gamma;
        modified[n - 1] -= off * off / gamma;
        let (upper, pivots) = factor(&modified, off)?;
        let mut system = Tridiagonal { off, upper, pivots, cyclic: None };
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        u[0] = gamma;
        u[n - 1] = off;
        system.solve_banded(&mut u);
        let denom = Complex64::new(1.0, 0.0) + u[0] + off * u[n - 1] / gamma;
        if denom.norm() < 1e-300 {
            return Err(Error::invalid("singular cyclic tridiagonal system"));
        }
        system.cyclic = Some(CyclicCorrection { gamma, corner: off, z: u, denom });
        Ok(system)
    }

    fn solve_banded(&self, rhs: &mut [Complex64]) {
        let n = rhs.len();
        rhs[0] /= self.pivots[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.off * rhs[i - 1]) / self.pivots[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.upper[i] * rhs[i + 1];
        }
    }

    /// Solves in place.
    pub fn solve(&self, rhs: &mut [Complex64]) {
        self.solve_banded(rhs);
        if let Some(c) = &self.cyclic {
            let n = rhs.len();
            let fact = (rhs[0] + c.corner * rhs[n - 1] / c.gamma) / c.denom;
            for (x, z) in rhs.iter_mut().zip(&c.z) {
                *x -= fact * z;
            }
        }
    }
}

fn factor(diag: &[Complex64], off: Complex64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let n = diag.len();
    let mut upper = vec![Complex64::new(0.0, 0.0); n];
    let mut pivots = vec![Complex64::new(0.0, 0.0); n];
    pivots[0] = diag[0];
    for i in 0..n {
        if i > 0 {
            pivots[i] = diag[i] - off * upper[i - 1];
        }
        if pivots[i].norm() < 1e-300 {
            return Err(Error::invalid("zero pivot in tridiagonal solve"));
        }
        upper[i] = off / pivots[i];
    }
    Ok((upper, pivots))
}

/// Three-point Hamiltonian `H = −(ħ²/2m)D₂ + diag(V)` as (diagonal, off-diagonal).
pub(crate) fn fd_hamiltonian(grid: &SpatialGrid, potential: &[f64], constants: Constants) -> (Vec<f64>, f64) {
    let c = constants.kinetic_coefficient() / (grid.dx() * grid.dx());
    (potential.iter().map(|v| 2.0 * c + v).collect(), -c)
}

pub(crate) fn apply_fd(diag: &[f64], off: f64, periodic: bool, psi: &[Complex64], out: &mut [Complex64]) {
    let n = psi.len();
    let zero = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let left = if i > 0 {
            psi[i - 1]
        } else if periodic {
            psi[n - 1]
        } else {
            zero
        };
        let right = if i + 1 < n {
            psi[i + 1]
        } else if periodic {
            psi[0]
        } else {
            zero
        };
        out[i] = diag[i] * psi[i] + off * (left + right);
    }
}

/// Crank–Nicolson step `(1 + iΔtH/2ħ)ψⁿ⁺¹ = (1 − iΔtH/2ħ)ψⁿ`.
///
/// `H` is Hermitian, so the Cayley propagator is exactly unitary in the
/// discrete inner product. A negative `dt` runs the scheme backwards.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    diag: Vec<f64>,
    off: f64,
    periodic: bool,
    alpha: Complex64,
    system: Tridiagonal,
    scratch: Vec<Complex64>,
}

impl CrankNicolson {
    pub fn new(grid: &SpatialGrid, potential: &[f64], constants: Constants, dt: f64) -> Result<Self> {
        if potential.len() != grid.n_points() {
            return Err(Error::invalid("potential profile length differs from grid"));
        }
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::invalid("dt must be finite and non-zero"));
        }
        let (diag, off) = fd_hamiltonian(grid, potential, constants);
        let periodic = grid.boundary() == Boundary::Periodic;
        let alpha = Complex64::new(0.0, dt / (2.0 * constants.hbar));
        let lhs: Vec<Complex64> = diag.iter().map(|&d| 1.0 + alpha * d).collect();
        let system = Tridiagonal::new(&lhs, alpha * off, periodic)?;
        Ok(CrankNicolson {
            diag,
            off,
            periodic,
            alpha,
            system,
            scratch: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        })
    }
}

impl Stepper for CrankNicolson {
    fn step(&mut self, psi: &mut [Complex64]) {
        apply_fd(&self.diag, self.off, self.periodic, psi, &mut self.scratch);
        for (p, h) in psi.iter_mut().zip(&self.scratch) {
            *p -= self.alpha * h;
        }
        self.system.solve(psi);
    }
}
