//! Cell complexes from point data.

mod cubical;
mod delaunay;
mod dowker;
pub mod predicates;

pub use cubical::{cubical_grid, voxel_cover, VoxelCover};
pub use delaunay::{delaunay_2d, delaunay_triangles};
pub use dowker::{dowker_complex, dowker_from_matrix, DowkerComplex, DowkerRelation};

use thiserror::Error;

use crate::complex::ComplexError;

#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("need at least {needed} points, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("point {index} has dimension {found}, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("unsupported ambient dimension {0}")]
    UnsupportedDimension(usize),
    #[error("points off the lattice: {0:?}")]
    OffLattice(Vec<usize>),
    #[error("cube side must be positive and finite, got {0}")]
    InvalidSide(f64),
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("relation matrix is {rows}x{cols}, expected {landmarks} rows of {points}")]
    RelationShape {
        rows: usize,
        cols: usize,
        landmarks: usize,
        points: usize,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Common coordinate checks: equal dimension and finiteness.
fn check_points(points: &[Vec<f64>]) -> Result<usize, BuildError> {
    let dim = points.first().map_or(0, Vec::len);
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(BuildError::Dimension {
                index: i,
                expected: dim,
                found: p.len(),
            });
        }
        if !p.iter().all(|x| x.is_finite()) {
            return Err(BuildError::NonFinite(i));
        }
    }
    Ok(dim)
}
