//! End-to-end driver: complex, vectors, costs, solve, analysis.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::builders::{
    cubical_grid, delaunay_2d, dowker_complex, dowker_from_matrix, voxel_cover, BuildError, DowkerRelation,
};
use crate::complex::{barycentric_subdivision, CellComplex, ComplexError};
use crate::cost::{build_cost_model, CostError, CostModel};
use crate::datagen::FieldSample;
use crate::dynamics::{analyze, CycleReport, FlowGraph};
use crate::gradient::{alpha_sweep, default_alpha_grid, solve_gradient_constrained, GradientError};
use crate::solver::{
    build_problem, objective_decomposition, solve_exact, verify_matching, Decomposition, Matching, Violation,
};
use crate::vectors::{assign_dowker_average, assign_vertex_average, VectorAssignment, VectorError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    /// Planar Delaunay triangulation of the points.
    #[default]
    Delaunay2d,
    /// Cubes on the lattice formed by the points.
    Cubical,
    /// Cubes of pitch `side` covering scattered points; vectors are
    /// averaged over the points of the voxels around each cell.
    Voxel,
    /// Dowker complex on landmarks.
    Dowker,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientMode {
    #[default]
    Off,
    /// Largest α on the default grid whose optimum is gradient.
    Sweep,
    /// Forbid cycles through constraints at the given α.
    Constraints,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub complex: ComplexKind,
    pub alpha: f64,
    /// Rounds of barycentric subdivision.
    pub subdivide: u32,
    pub gradient: GradientMode,
    /// Lattice pitch for `cubical` and `voxel`.
    pub side: Option<f64>,
    /// Ball radius of the Dowker relation.
    pub radius: Option<f64>,
    /// Search limit for the cycle-constrained solve.
    pub node_limit: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            complex: ComplexKind::Delaunay2d,
            alpha: 0.75,
            subdivide: 0,
            gradient: GradientMode::Off,
            side: None,
            radius: None,
            node_limit: 20_000_000,
        }
    }
}

/// Landmarks and, optionally, an explicit relation (rows are landmarks).
#[derive(Clone, Debug, Default)]
pub struct DowkerInput {
    pub landmarks: Vec<Vec<f64>>,
    pub relation: Option<Vec<Vec<bool>>>,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Vectors(#[from] VectorError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Gradient(#[from] GradientError),
    #[error("solver output violates the definition: {0:?}")]
    Verification(Vec<Violation>),
}

impl PipelineConfig {
    pub fn validate(&self, sample: &FieldSample) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        if !(0.0..=2.0).contains(&self.alpha) {
            return bad(format!("alpha must lie in [0, 2], got {}", self.alpha));
        }
        if sample.is_empty() {
            return bad("no sample points".into());
        }
        let d = sample.dim();
        match self.complex {
            ComplexKind::Delaunay2d if d != 2 => {
                return bad(format!("delaunay2d needs planar data, got dimension {d}"))
            }
            ComplexKind::Cubical | ComplexKind::Voxel if !(2..=3).contains(&d) => {
                return bad(format!("cubical complexes need dimension 2 or 3, got {d}"))
            }
            ComplexKind::Cubical | ComplexKind::Voxel if self.side.is_none() => return bad("--side is required".into()),
            ComplexKind::Cubical | ComplexKind::Voxel if self.subdivide > 0 => {
                return bad("barycentric subdivision needs a simplicial complex".into())
            }
            _ => {}
        }
        Ok(())
    }
}

/// The cell complex and its vectors, after any subdivision.
pub fn build_complex(
    config: &PipelineConfig,
    sample: &FieldSample,
    dowker: Option<&DowkerInput>,
) -> Result<(CellComplex, VectorAssignment), PipelineError> {
    config.validate(sample)?;
    let (mut complex, mut vectors) = match config.complex {
        ComplexKind::Delaunay2d => {
            let k = delaunay_2d(&sample.points)?;
            let v = assign_vertex_average(&k, &sample.vectors)?;
            (k, v)
        }
        ComplexKind::Cubical => {
            let k = cubical_grid(&sample.points, config.side.unwrap_or_default())?;
            let v = assign_vertex_average(&k, &sample.vectors)?;
            (k, v)
        }
        ComplexKind::Voxel => {
            let cover = voxel_cover(&sample.points, config.side.unwrap_or_default())?;
            let v = assign_dowker_average(&cover.complex, &cover.witnesses, &sample.vectors)?;
            (cover.complex, v)
        }
        ComplexKind::Dowker => {
            let input = dowker.ok_or_else(|| PipelineError::Config("dowker complexes need landmarks".into()))?;
            let d = match (&input.relation, config.radius) {
                (Some(matrix), _) => dowker_from_matrix(&input.landmarks, matrix, sample.len())?,
                (None, Some(radius)) => dowker_complex(&DowkerRelation {
                    data: sample.points.clone(),
                    landmarks: input.landmarks.clone(),
                    radius,
                })?,
                (None, None) => {
                    return Err(PipelineError::Config(
                        "dowker complexes need --radius or a relation".into(),
                    ))
                }
            };
            let v = assign_dowker_average(&d.complex, &d.witnesses, &sample.vectors)?;
            (d.complex, v)
        }
    };
    for _ in 0..config.subdivide {
        (complex, vectors) = barycentric_subdivision(&complex, &vectors)?;
    }
    Ok((complex, vectors))
}

/// Everything one run produces.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub complex: CellComplex,
    pub vectors: VectorAssignment,
    pub model: CostModel,
    /// Number of program variables.
    pub num_variables: usize,
    pub matching: Matching,
    /// α of the returned matching (differs from the configured one after a sweep).
    pub alpha: f64,
    pub decomposition: Decomposition,
    pub flow: FlowGraph,
    pub report: CycleReport,
    /// Cycle constraints generated in constraint mode.
    pub constraints: usize,
}

pub fn run_pipeline(
    config: &PipelineConfig,
    sample: &FieldSample,
    dowker: Option<&DowkerInput>,
) -> Result<Analysis, PipelineError> {
    let (complex, vectors) = build_complex(config, sample, dowker)?;
    analyze_complex(config, complex, vectors)
}

/// Solves and analyses a prepared complex.
pub fn analyze_complex(
    config: &PipelineConfig,
    complex: CellComplex,
    vectors: VectorAssignment,
) -> Result<Analysis, PipelineError> {
    log::info!("complex with {} cells {:?}", complex.len(), complex.counts_by_dim());
    let (matching, alpha, constraints) = match config.gradient {
        GradientMode::Off => {
            let model = build_cost_model(&complex, &vectors, config.alpha)?;
            (solve_exact(&build_problem(&model)), config.alpha, 0)
        }
        GradientMode::Sweep => {
            let grid: Vec<f64> = default_alpha_grid()
                .into_iter()
                .filter(|&a| a <= config.alpha)
                .collect();
            let r = alpha_sweep(&complex, &vectors, &grid)?;
            log::info!("sweep chose alpha {} after {} solves", r.alpha, r.tried);
            (r.matching, r.alpha, 0)
        }
        GradientMode::Constraints => {
            let model = build_cost_model(&complex, &vectors, config.alpha)?;
            let r = solve_gradient_constrained(&build_problem(&model), &complex, config.node_limit)?;
            log::info!("{} cycle constraints over {} rounds", r.constraints.len(), r.rounds);
            (r.matching, config.alpha, r.constraints.len())
        }
    };
    verify_matching(&complex, &matching).map_err(PipelineError::Verification)?;
    let model = build_cost_model(&complex, &vectors, alpha)?;
    let num_variables = model.pairs().len() + complex.len();
    let decomposition = objective_decomposition(&matching, &model);
    let (flow, report) = analyze(&complex, &matching).map_err(PipelineError::Verification)?;
    Ok(Analysis {
        complex,
        vectors,
        model,
        num_variables,
        matching,
        alpha,
        decomposition,
        flow,
        report,
        constraints,
    })
}
