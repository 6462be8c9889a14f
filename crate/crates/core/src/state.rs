//! Complex semantic wavefunctions sampled on a one-dimensional grid.
//!
//! A [`WaveFunction`] holds amplitudes `ψᵢ = aᵢ + i bᵢ` at the nodes of a
//! [`SpatialGrid`]. All quadratures use the rectangle rule `Σ f(xᵢ)·dx`, which
//! is exact for trigonometric polynomials on periodic grids. The probability
//! convention is `Σ|ψᵢ|²·dx = 1`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_GRID_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// `x_max` is identified with `x_min`; derivatives are spectral.
    Periodic,
    /// Hard walls: the wavefunction vanishes one node outside each end.
    Reflecting,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Periodic => f.write_str("periodic"),
            Boundary::Reflecting => f.write_str("reflecting"),
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "reflecting" => Ok(Boundary::Reflecting),
            other => Err(Error::Parse(format!("unknown boundary `{other}`"))),
        }
    }
}

/// Uniform grid over `[x_min, x_max)` with `n` nodes at `x_min + i·dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct SpatialGrid {
    n_points: usize,
    x_min: f64,
    x_max: f64,
    boundary: Boundary,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    n: usize,
    x_min: f64,
    x_max: f64,
    boundary: Boundary,
}

impl TryFrom<GridRepr> for SpatialGrid {
    type Error = Error;

    fn try_from(r: GridRepr) -> Result<Self> {
        SpatialGrid::new(r.n, r.x_min, r.x_max, r.boundary)
    }
}

impl From<SpatialGrid> for GridRepr {
    fn from(g: SpatialGrid) -> Self {
        GridRepr { n: g.n_points, x_min: g.x_min, x_max: g.x_max, boundary: g.boundary }
    }
}

impl SpatialGrid {
    pub fn new(n_points: usize, x_min: f64, x_max: f64, boundary: Boundary) -> Result<Self> {
        if n_points < MIN_GRID_POINTS {
            return Err(Error::invalid(format!("grid needs at least {MIN_GRID_POINTS} points, got {n_points}")));
        }
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(Error::invalid(format!("grid bounds [{x_min}, {x_max}] are not an interval")));
        }
        Ok(SpatialGrid { n_points, x_min, x_max, boundary })
    }

    pub fn periodic(n_points: usize, x_min: f64, x_max: f64) -> Result<Self> {
        Self::new(n_points, x_min, x_max, Boundary::Periodic)
    }

    pub fn reflecting(n_points: usize, x_min: f64, x_max: f64) -> Result<Self> {
        Self::new(n_points, x_min, x_max, Boundary::Reflecting)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n_points as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Index of the node closest to `x` (no wrapping).
    pub fn nearest_index(&self, x: f64) -> usize {
        let i = ((x - self.x_min) / self.dx()).round();
        i.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Index of the node mirrored through `x = (x_min + x_max)/2`.
    ///
    /// On a periodic grid this is `(n − i) mod n`; a reflecting grid has no
    /// exact mirror for node 0, so it maps to itself.
    pub fn mirror_index(&self, i: usize) -> usize {
        match self.boundary {
            Boundary::Periodic => (self.n_points - i) % self.n_points,
            Boundary::Reflecting => {
                if i == 0 {
                    0
                } else {
                    self.n_points - i
                }
            }
        }
    }

    pub(crate) fn ensure_same(&self, other: &SpatialGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::IncompatibleGrids(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for SpatialGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} x_min={} x_max={} boundary={}", self.n_points, self.x_min, self.x_max, self.boundary)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: SpatialGrid,
    amplitudes: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(grid: SpatialGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::invalid(format!(
                "{} amplitudes for a grid of {} points",
                amplitudes.len(),
                grid.n_points()
            )));
        }
        if let Some(i) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid(format!("amplitude {i} is not finite")));
        }
        Ok(WaveFunction { grid, amplitudes })
    }

    pub fn zeros(grid: SpatialGrid) -> Self {
        WaveFunction { grid, amplitudes: vec![Complex64::new(0.0, 0.0); grid.n_points()] }
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect())
    }

    /// Builds a state from real and imaginary parts (`a + i b`).
    pub fn from_parts(grid: SpatialGrid, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::invalid("real and imaginary parts differ in length"));
        }
        Self::new(grid, re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Pointwise `|ψᵢ|²`.
    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn position_expectation(&self) -> f64 {
        let dx = self.grid.dx();
        let weighted: f64 = self.amplitudes.iter().enumerate().map(|(i, z)| self.grid.x(i) * z.norm_sqr()).sum();
        weighted * dx / self.norm_sq()
    }

    pub fn scaled(&self, c: Complex64) -> WaveFunction {
        WaveFunction { grid: self.grid, amplitudes: self.amplitudes.iter().map(|z| z * c).collect() }
    }

    /// Multiplies by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> WaveFunction {
        self.scaled(Complex64::from_polar(1.0, theta))
    }

    pub fn conj(&self) -> WaveFunction {
        WaveFunction { grid: self.grid, amplitudes: self.amplitudes.iter().map(|z| z.conj()).collect() }
    }

    /// Largest pointwise `|ψᵢ − φᵢ|`.
    pub fn max_abs_diff(&self, other: &WaveFunction) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// `sqrt(Σ|ψᵢ − φᵢ|²·dx)`.
    pub fn l2_distance(&self, other: &WaveFunction) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        let s: f64 = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.grid.dx()).sqrt())
    }
}

/// A Gaussian packet `exp(−(x−c)²/(4w²))·exp(i p x)` normalized to unit probability (ħ = 1).
pub fn make_gaussian(grid: SpatialGrid, center: f64, width: f64, momentum: f64) -> Result<WaveFunction> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::invalid(format!("gaussian width must be positive, got {width}")));
    }
    if !(center >= grid.x_min() && center <= grid.x_max()) {
        return Err(Error::invalid(format!("gaussian center {center} outside [{}, {}]", grid.x_min(), grid.x_max())));
    }
    if !momentum.is_finite() {
        return Err(Error::invalid("gaussian momentum must be finite"));
    }
    let psi = WaveFunction::from_fn(grid, |x| {
        let d = x - center;
        Complex64::from_polar((-d * d / (4.0 * width * width)).exp(), momentum * x)
    })?;
    normalize(&psi)
}

pub fn normalize(psi: &WaveFunction) -> Result<WaveFunction> {
    let n2 = psi.norm_sq();
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::DegenerateState("cannot normalize a zero-norm state".into()));
    }
    Ok(psi.scaled(Complex64::new(1.0 / n2.sqrt(), 0.0)))
}

/// `⟨ψ|φ⟩ = Σ ψᵢ*·φᵢ·dx`.
pub fn inner_product(psi: &WaveFunction, phi: &WaveFunction) -> Result<Complex64> {
    psi.grid.ensure_same(&phi.grid)?;
    let s: Complex64 = psi.amplitudes.iter().zip(&phi.amplitudes).map(|(a, b)| a.conj() * b).sum();
    Ok(s * psi.grid.dx())
}

/// Pointwise modulus `(a² + b²)^{1/2}`: the projection back to the real embedding space.
pub fn embedding_projection(psi: &WaveFunction) -> Vec<f64> {
    psi.amplitudes.iter().map(|z| z.norm()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    /// Index into a caller-supplied basis.
    Basis(usize),
    State(WaveFunction),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuperpositionSpec {
    pub components: Vec<(Component, Complex64)>,
}

impl SuperpositionSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_state(mut self, psi: WaveFunction, c: Complex64) -> Self {
        self.components.push((Component::State(psi), c));
        self
    }

    pub fn with_basis(mut self, index: usize, c: Complex64) -> Self {
        self.components.push((Component::Basis(index), c));
        self
    }
}

/// `Σ cᵢ·ψᵢ` without normalization. Basis indices resolve against `basis`.
pub fn superpose_unnormalized(spec: &SuperpositionSpec, basis: &[WaveFunction]) -> Result<WaveFunction> {
    if spec.components.is_empty() {
        return Err(Error::invalid("superposition needs at least one component"));
    }
    let mut acc: Option<WaveFunction> = None;
    for (component, c) in &spec.components {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::invalid("superposition coefficient is not finite"));
        }
        let psi = match component {
            Component::State(psi) => psi,
            Component::Basis(i) => basis
                .get(*i)
                .ok_or_else(|| Error::invalid(format!("basis index {i} out of range ({})", basis.len())))?,
        };
        match acc.as_mut() {
            None => acc = Some(psi.scaled(*c)),
            Some(sum) => {
                sum.grid.ensure_same(&psi.grid)?;
                for (s, z) in sum.amplitudes.iter_mut().zip(&psi.amplitudes) {
                    *s += c * z;
                }
            }
        }
    }
    Ok(acc.expect("non-empty superposition"))
}

pub fn superpose_in(spec: &SuperpositionSpec, basis: &[WaveFunction]) -> Result<WaveFunction> {
    let psi = superpose_unnormalized(spec, basis)?;
    normalize(&psi).map_err(|_| Error::DegenerateState("superposition interferes to zero".into()))
}

pub fn superpose(spec: &SuperpositionSpec) -> Result<WaveFunction> {
    superpose_in(spec, &[])
}
