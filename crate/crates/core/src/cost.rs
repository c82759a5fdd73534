//! Costs of pairing a cell with a coface or leaving it critical.

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{AdmissiblePair, CellComplex, CellId};
use crate::vectors::{norm, VectorAssignment, ZERO_TOLERANCE};

/// Pair cost used when the lower cell carries the zero vector.
pub const ZERO_VECTOR_COST: f64 = 2.0;

#[derive(Debug, Error, PartialEq)]
pub enum CostError {
    #[error("alpha must lie in [0, 2], got {0}")]
    AlphaOutOfRange(f64),
    #[error("cosine distance is undefined for a zero vector")]
    ZeroVector,
    #[error("vector assignment covers {found} cells, complex has {expected}")]
    VectorCount { expected: usize, found: usize },
}

/// `1 − u·v / (‖u‖‖v‖)`, clamped to `[0, 2]`.
pub fn cosine_distance(u: &[f64], v: &[f64]) -> Result<f64, CostError> {
    let (nu, nv) = (norm(u), norm(v));
    if nu < ZERO_TOLERANCE || nv < ZERO_TOLERANCE {
        return Err(CostError::ZeroVector);
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok((1.0 - dot / (nu * nv)).clamp(0.0, 2.0))
}

/// `b(upper) − b(lower)`.
pub fn displacement(complex: &CellComplex, pair: AdmissiblePair) -> Vec<f64> {
    let lo = complex.barycenter(pair.lower);
    let up = complex.barycenter(pair.upper);
    up.iter().zip(&lo).map(|(u, l)| u - l).collect()
}

/// `arccos(1 − α)`: pairings whose direction deviates from the cell vector
/// by more than this angle lose against leaving both cells critical.
pub fn critical_angle(alpha: f64) -> f64 {
    (1.0 - alpha).clamp(-1.0, 1.0).acos()
}

#[derive(Clone, Debug)]
pub struct CostModel {
    alpha: f64,
    num_cells: usize,
    pairs: Vec<AdmissiblePair>,
    costs: Vec<f64>,
}

pub fn build_cost_model(complex: &CellComplex, vectors: &VectorAssignment, alpha: f64) -> Result<CostModel, CostError> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(CostError::AlphaOutOfRange(alpha));
    }
    if vectors.len() != complex.len() {
        return Err(CostError::VectorCount {
            expected: complex.len(),
            found: vectors.len(),
        });
    }
    let pairs = complex.admissible_pairs();
    let costs = pairs
        .par_iter()
        .map(|&p| {
            if vectors.is_zero(p.lower) {
                ZERO_VECTOR_COST
            } else {
                cosine_distance(vectors.get(p.lower), &displacement(complex, p)).unwrap_or(ZERO_VECTOR_COST)
            }
        })
        .collect();
    Ok(CostModel {
        alpha,
        num_cells: complex.len(),
        pairs,
        costs,
    })
}

impl CostModel {
    /// A model from explicit pair costs; `pairs` must be sorted and unique.
    pub fn from_parts(num_cells: usize, alpha: f64, pairs: Vec<AdmissiblePair>, costs: Vec<f64>) -> Self {
        assert_eq!(pairs.len(), costs.len());
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        Self {
            alpha,
            num_cells,
            pairs,
            costs,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn pairs(&self) -> &[AdmissiblePair] {
        &self.pairs
    }

    pub fn pair_costs(&self) -> &[f64] {
        &self.costs
    }

    /// Cost of a non-admissible entry in the full matrix formulation.
    pub fn penalty(&self) -> f64 {
        (2.0 * self.alpha + 1.0).max(3.0)
    }

    pub fn pair_cost(&self, lower: CellId, upper: CellId) -> Option<f64> {
        self.pairs
            .binary_search(&AdmissiblePair { lower, upper })
            .ok()
            .map(|i| self.costs[i])
    }

    /// Entry `c_ij` of the full `N × N` cost matrix.
    pub fn entry(&self, i: CellId, j: CellId) -> f64 {
        if i == j {
            self.alpha
        } else {
            self.pair_cost(i, j).unwrap_or_else(|| self.penalty())
        }
    }

    /// The full cost matrix. Quadratic in size; meant for small complexes.
    pub fn full_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.num_cells)
            .map(|i| (0..self.num_cells).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Same pairs at a different α.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self, CostError> {
        if !(0.0..=2.0).contains(&alpha) {
            return Err(CostError::AlphaOutOfRange(alpha));
        }
        Ok(Self { alpha, ..self.clone() })
    }
}
