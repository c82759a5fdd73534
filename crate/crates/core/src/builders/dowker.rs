//! Dowker complexes on a landmark set.

use std::collections::BTreeSet;

use super::{check_points, BuildError};
use crate::complex::CellComplex;

/// Metric-ball relation: landmark `y` relates to data point `x` iff
/// `‖y − x‖₂ < radius`.
#[derive(Clone, Debug)]
pub struct DowkerRelation {
    pub data: Vec<Vec<f64>>,
    pub landmarks: Vec<Vec<f64>>,
    pub radius: f64,
}

#[derive(Clone, Debug)]
pub struct DowkerComplex {
    /// Complex on the landmarks; landmark `j` is vertex `j`.
    pub complex: CellComplex,
    /// `witnesses[σ]` = data points related to every vertex of σ (sorted).
    pub witnesses: Vec<Vec<usize>>,
}

impl DowkerRelation {
    /// `related[j][i]` is true iff landmark `j` relates to data point `i`.
    pub fn matrix(&self) -> Result<Vec<Vec<bool>>, BuildError> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(BuildError::InvalidRadius(self.radius));
        }
        let dim = check_points(&self.data)?;
        let ldim = check_points(&self.landmarks)?;
        if !self.data.is_empty() && !self.landmarks.is_empty() && ldim != dim {
            return Err(BuildError::Dimension {
                index: 0,
                expected: dim,
                found: ldim,
            });
        }
        let r2 = self.radius * self.radius;
        Ok(self
            .landmarks
            .iter()
            .map(|y| {
                self.data
                    .iter()
                    .map(|x| y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() < r2)
                    .collect()
            })
            .collect())
    }
}

pub fn dowker_complex(rel: &DowkerRelation) -> Result<DowkerComplex, BuildError> {
    let related = rel.matrix()?;
    dowker_from_matrix(&rel.landmarks, &related, rel.data.len())
}

/// Dowker complex of an explicit relation; rows are landmarks, columns data
/// points. An empty relation gives an empty complex.
pub fn dowker_from_matrix(
    landmarks: &[Vec<f64>],
    related: &[Vec<bool>],
    num_points: usize,
) -> Result<DowkerComplex, BuildError> {
    check_points(landmarks)?;
    if related.len() != landmarks.len() || related.iter().any(|r| r.len() != num_points) {
        return Err(BuildError::RelationShape {
            rows: related.len(),
            cols: related
                .iter()
                .map(Vec::len)
                .find(|&c| c != num_points)
                .unwrap_or(num_points),
            landmarks: landmarks.len(),
            points: num_points,
        });
    }

    // one maximal candidate per data point: the landmarks it relates to
    let tops: BTreeSet<Vec<usize>> = (0..num_points)
        .map(|x| (0..landmarks.len()).filter(|&y| related[y][x]).collect::<Vec<_>>())
        .filter(|sigma| !sigma.is_empty())
        .collect();
    let complex = CellComplex::simplicial(landmarks.to_vec(), tops)?;

    let witnesses = complex
        .cells()
        .iter()
        .map(|c| {
            (0..num_points)
                .filter(|&x| c.vertices.iter().all(|&y| related[y][x]))
                .collect()
        })
        .collect();
    Ok(DowkerComplex { complex, witnesses })
}
