//! Spatial derivatives on a [`SpatialGrid`].
//!
//! Periodic grids use Fourier (spectral) differentiation; reflecting grids use
//! second-order central differences with zero ghost nodes outside the walls.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::state::{Boundary, SpatialGrid};

/// Angular wavenumbers in FFT order: `2π/L · (0, 1, …, n/2−1, −n/2, …, −1)`.
pub fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let base = 2.0 * PI / length;
    (0..n)
        .map(|j| {
            let m = if j < n.div_ceil(2) { j as isize } else { j as isize - n as isize };
            base * m as f64
        })
        .collect()
}

/// Cached forward/inverse FFT pair for one grid size.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    k: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub fn new(grid: &SpatialGrid) -> Self {
        let n = grid.n_points();
        let mut planner = FftPlanner::new();
        Spectral {
            n,
            k: wavenumbers(n, grid.length()),
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Normalized inverse transform.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= s);
    }

    /// Multiplies the spectrum of `buf` by `multiplier(k)` in place.
    pub fn apply(&self, buf: &mut [Complex64], multiplier: impl Fn(f64) -> Complex64) {
        self.forward(buf);
        for (z, &k) in buf.iter_mut().zip(&self.k) {
            *z *= multiplier(k);
        }
        self.inverse(buf);
    }

    /// Like [`Spectral::apply`] with a precomputed multiplier table.
    pub fn apply_table(&self, buf: &mut [Complex64], table: &[Complex64]) {
        self.forward(buf);
        for (z, m) in buf.iter_mut().zip(table) {
            *z *= m;
        }
        self.inverse(buf);
    }

    pub fn derivative(&self, values: &[Complex64]) -> Vec<Complex64> {
        let nyquist = self.n.is_multiple_of(2);
        let mut buf = values.to_vec();
        self.forward(&mut buf);
        for (j, (z, &k)) in buf.iter_mut().zip(&self.k).enumerate() {
            // the unpaired Nyquist mode has no well-defined odd derivative
            if nyquist && j == self.n / 2 {
                *z = Complex64::new(0.0, 0.0);
            } else {
                *z *= Complex64::new(0.0, k);
            }
        }
        self.inverse(&mut buf);
        buf
    }

    pub fn second_derivative(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.apply(&mut buf, |k| Complex64::new(-k * k, 0.0));
        buf
    }
}

fn ghost(values: &[Complex64], i: isize) -> Complex64 {
    if i < 0 || i as usize >= values.len() {
        Complex64::new(0.0, 0.0)
    } else {
        values[i as usize]
    }
}

/// First derivative of a wavefunction-like field.
pub fn derivative(grid: &SpatialGrid, values: &[Complex64]) -> Vec<Complex64> {
    match grid.boundary() {
        Boundary::Periodic => Spectral::new(grid).derivative(values),
        Boundary::Reflecting => {
            let h = 2.0 * grid.dx();
            (0..values.len() as isize).map(|i| (ghost(values, i + 1) - ghost(values, i - 1)) / h).collect()
        }
    }
}

/// Second derivative: spectral on periodic grids, three-point stencil with
/// hard walls on reflecting grids.
pub fn laplacian(grid: &SpatialGrid, values: &[Complex64]) -> Vec<Complex64> {
    match grid.boundary() {
        Boundary::Periodic => Spectral::new(grid).second_derivative(values),
        Boundary::Reflecting => fd_laplacian(grid, values),
    }
}

/// Three-point Laplacian honoring the grid boundary (wraps on periodic grids).
pub fn fd_laplacian(grid: &SpatialGrid, values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len() as isize;
    let h2 = grid.dx() * grid.dx();
    let at = |i: isize| match grid.boundary() {
        Boundary::Periodic => values[i.rem_euclid(n) as usize],
        Boundary::Reflecting => ghost(values, i),
    };
    (0..n).map(|i| (at(i + 1) - 2.0 * at(i) + at(i - 1)) / h2).collect()
}

/// Gradient of a real field (gauge potentials, phases).
///
/// Reflecting grids use one-sided differences at the two end nodes, so any
/// linear profile is differentiated exactly.
pub fn gradient_real(grid: &SpatialGrid, values: &[f64]) -> Vec<f64> {
    match grid.boundary() {
        Boundary::Periodic => {
            let complex: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            Spectral::new(grid).derivative(&complex).into_iter().map(|z| z.re).collect()
        }
        Boundary::Reflecting => {
            let n = values.len();
            let dx = grid.dx();
            (0..n)
                .map(|i| match i {
                    0 => (values[1] - values[0]) / dx,
                    i if i == n - 1 => (values[n - 1] - values[n - 2]) / dx,
                    i => (values[i + 1] - values[i - 1]) / (2.0 * dx),
                })
                .collect()
        }
    }
}
