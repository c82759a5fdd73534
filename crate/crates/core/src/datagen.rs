//! Sampled vector fields: planar models on grids and Euler trajectories of
//! the Lorenz system.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DatagenError {
    #[error("unknown model or preset `{0}`")]
    UnknownModel(String),
    #[error("trajectory length must be at least 1")]
    EmptyTrajectory,
    #[error("time step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("grid step must be positive and finite, got {0}")]
    BadGrid(f64),
}

/// Points with one vector each.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FieldSample {
    pub points: Vec<Vec<f64>>,
    pub vectors: Vec<Vec<f64>>,
}

impl FieldSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    fn from_fn(points: Vec<Vec<f64>>, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let vectors = points.iter().map(|p| f(p)).collect();
        Self { points, vectors }
    }
}

/// Coefficients of `x' = (a − b·y)·x`, `y' = (c·x − d)·y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LotkaVolterra {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Default for LotkaVolterra {
    fn default() -> Self {
        Self {
            a: 0.4,
            b: 0.01,
            c: 0.005,
            d: 0.3,
        }
    }
}

/// A planar vector field model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PlanarModel {
    /// Repelling equilibrium at the origin, attracting orbit of radius 1,
    /// repelling orbit of radius 2.
    Intro,
    LotkaVolterra(LotkaVolterra),
    /// `x' = −x`, `y' = −y`.
    Sink,
}

impl PlanarModel {
    pub fn eval(&self, p: &[f64]) -> Vec<f64> {
        let (x, y) = (p[0], p[1]);
        match *self {
            PlanarModel::Intro => {
                let r2 = x * x + y * y;
                let g = (r2 - 4.0) * (r2 - 1.0);
                vec![-y + x * g, x + y * g]
            }
            PlanarModel::LotkaVolterra(m) => vec![(m.a - m.b * y) * x, (m.c * x - m.d) * y],
            PlanarModel::Sink => vec![-x, -y],
        }
    }
}

impl FromStr for PlanarModel {
    type Err = DatagenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "intro" => Ok(PlanarModel::Intro),
            "lotka_volterra" | "lotka-volterra" => Ok(PlanarModel::LotkaVolterra(LotkaVolterra::default())),
            "sink" => Ok(PlanarModel::Sink),
            other => Err(DatagenError::UnknownModel(other.to_string())),
        }
    }
}

/// A rectangular grid `start + step·(i, j)`, `0 ≤ i < counts[0]`,
/// `0 ≤ j < counts[1]`, enumerated with `i` fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub start: [f64; 2],
    pub step: f64,
    pub counts: [usize; 2],
}

impl GridSpec {
    /// 16×16 cell centres of pitch 0.44 around the origin.
    pub fn intro() -> Self {
        Self {
            start: [0.22 - 8.0 * 0.44, 0.22 - 8.0 * 0.44],
            step: 0.44,
            counts: [16, 16],
        }
    }

    /// `{(10i, 10j) : 0 ≤ i, j ≤ 8}`.
    pub fn lotka_volterra() -> Self {
        Self {
            start: [0.0, 0.0],
            step: 10.0,
            counts: [9, 9],
        }
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.counts[0] * self.counts[1]);
        for j in 0..self.counts[1] {
            for i in 0..self.counts[0] {
                out.push(vec![
                    self.start[0] + self.step * i as f64,
                    self.start[1] + self.step * j as f64,
                ]);
            }
        }
        out
    }
}

pub fn gen_grid_field(model: PlanarModel, grid: &GridSpec) -> Result<FieldSample, DatagenError> {
    if !(grid.step.is_finite() && grid.step > 0.0) {
        return Err(DatagenError::BadGrid(grid.step));
    }
    Ok(FieldSample::from_fn(grid.points(), |p| model.eval(p)))
}

/// Right-hand side of the Lorenz system with σ = 10, ρ = 28, β = 8/3.
pub fn lorenz(p: &[f64]) -> Vec<f64> {
    let (x, y, z) = (p[0], p[1], p[2]);
    vec![10.0 * (y - x), 28.0 * x - x * z - y, x * y - 8.0 / 3.0 * z]
}

pub const LORENZ_X0: [f64; 3] = [0.0, 1.0, 1.05];

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub sample: FieldSample,
    /// The iteration left the finite range and was cut short.
    pub truncated: bool,
}

/// `n` forward-Euler points `x_{i+1} = x_i + dt·f(x_i)`, each paired with
/// `f(x_i)`. Stops early, with a warning, once a value stops being finite.
pub fn gen_lorenz_trajectory(x0: [f64; 3], dt: f64, n: usize) -> Result<Trajectory, DatagenError> {
    if n == 0 {
        return Err(DatagenError::EmptyTrajectory);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(DatagenError::BadStep(dt));
    }
    let mut sample = FieldSample::default();
    let mut x = x0.to_vec();
    let mut truncated = false;
    for i in 0..n {
        let v = lorenz(&x);
        if !x.iter().chain(&v).all(|c| c.is_finite()) {
            log::warn!("Lorenz trajectory is no longer finite at step {i}; keeping {i} points");
            truncated = true;
            break;
        }
        let next = x.iter().zip(&v).map(|(a, b)| a + dt * b).collect();
        sample.points.push(std::mem::replace(&mut x, next));
        sample.vectors.push(v);
    }
    Ok(Trajectory { sample, truncated })
}

/// Named datasets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Three points and a triangle.
    Toy,
    /// The toy with the first vector tilted to `(0.05, 1)`.
    GradientToy,
    Intro,
    LotkaVolterra,
    /// Six points around a sink at the origin.
    Sink,
    /// 1000 Euler points with `dt = 0.2`.
    Lorenz,
    /// 300 Euler points with a stable step.
    LorenzDesk,
}

/// Step of the desk-scale Lorenz preset.
pub const LORENZ_DESK_DT: f64 = 0.02;

/// Voxel pitch that resolves the desk-scale Lorenz attractor.
pub const LORENZ_DESK_SIDE: f64 = 2.0;

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Toy,
        Preset::GradientToy,
        Preset::Intro,
        Preset::LotkaVolterra,
        Preset::Sink,
        Preset::Lorenz,
        Preset::LorenzDesk,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Toy => "toy",
            Preset::GradientToy => "gradient_toy",
            Preset::Intro => "intro",
            Preset::LotkaVolterra => "lotka_volterra",
            Preset::Sink => "sink",
            Preset::Lorenz => "lorenz",
            Preset::LorenzDesk => "lorenz_desk",
        }
    }

    pub fn sample(&self) -> FieldSample {
        match self {
            Preset::Toy | Preset::GradientToy => {
                let first = if *self == Preset::Toy {
                    vec![0.0, 1.0]
                } else {
                    vec![0.05, 1.0]
                };
                FieldSample {
                    points: vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 0.0]],
                    vectors: vec![first, vec![1.0, 0.0], vec![-1.0, -1.0]],
                }
            }
            Preset::Intro => gen_grid_field(PlanarModel::Intro, &GridSpec::intro()).expect("valid grid"),
            Preset::LotkaVolterra => gen_grid_field(
                PlanarModel::LotkaVolterra(LotkaVolterra::default()),
                &GridSpec::lotka_volterra(),
            )
            .expect("valid grid"),
            Preset::Sink => FieldSample::from_fn(
                vec![
                    vec![-1.0, -1.0],
                    vec![1.0, -1.0],
                    vec![0.0, 2.0],
                    vec![1.0, 1.0],
                    vec![-1.0, 1.0],
                    vec![0.0, -2.0],
                ],
                |p| PlanarModel::Sink.eval(p),
            ),
            Preset::Lorenz => {
                gen_lorenz_trajectory(LORENZ_X0, 0.2, 1000)
                    .expect("valid parameters")
                    .sample
            }
            Preset::LorenzDesk => {
                gen_lorenz_trajectory(LORENZ_X0, LORENZ_DESK_DT, 300)
                    .expect("valid parameters")
                    .sample
            }
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Preset {
    type Err = DatagenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.replace('-', "_");
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| DatagenError::UnknownModel(s.to_string()))
    }
}
