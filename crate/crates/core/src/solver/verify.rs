//! Checking, repairing and decomposing matchings.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::Matching;
use crate::complex::{AdmissiblePair, CellComplex, CellId};
use crate::cost::CostModel;

/// Ways a set of arrows can fail to be a combinatorial dynamical system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// An arrow mentions a cell outside the complex.
    UnknownCell { cell: CellId },
    /// A cell has two images (not a partial map).
    TwoOut { cell: CellId, images: Vec<CellId> },
    /// A cell is the image of two cells (not injective).
    TwoIn { cell: CellId, sources: Vec<CellId> },
    /// A cell is both a source and an image without being fixed.
    InAndOut { cell: CellId },
    /// A cell is neither a source nor an image.
    Uncovered { cell: CellId },
    /// An arrow `lower → upper` whose ends are not a face/coface pair of
    /// consecutive dimensions.
    NonAdmissible { lower: CellId, upper: CellId },
}

/// Checks raw arrows `(source, image)`, fixed points written as `(σ, σ)`.
/// Returns every violation found, in a deterministic order.
pub fn verify_arrows(complex: &CellComplex, arrows: &[(CellId, CellId)]) -> Result<(), Vec<Violation>> {
    let n = complex.len();
    let mut out: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    let mut inn: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    let mut violations = Vec::new();
    for &(s, t) in arrows {
        for c in [s, t] {
            if c >= n {
                violations.push(Violation::UnknownCell { cell: c });
            }
        }
        if s >= n || t >= n {
            continue;
        }
        out.entry(s).or_default().push(t);
        inn.entry(t).or_default().push(s);
        if s != t && !complex.is_admissible(s, t) {
            violations.push(Violation::NonAdmissible { lower: s, upper: t });
        }
    }
    for (&cell, images) in &mut out {
        images.sort_unstable();
        images.dedup();
        if images.len() > 1 {
            violations.push(Violation::TwoOut {
                cell,
                images: images.clone(),
            });
        }
    }
    for (&cell, sources) in &mut inn {
        sources.sort_unstable();
        sources.dedup();
        if sources.len() > 1 {
            violations.push(Violation::TwoIn {
                cell,
                sources: sources.clone(),
            });
        }
    }
    for cell in 0..n {
        let is_source = out.contains_key(&cell);
        let is_image = inn.contains_key(&cell);
        let fixed = out.get(&cell).is_some_and(|im| im.contains(&cell));
        if !is_source && !is_image {
            violations.push(Violation::Uncovered { cell });
        } else if is_source && is_image && !fixed {
            violations.push(Violation::InAndOut { cell });
        }
    }
    violations.sort();
    violations.dedup();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

pub fn verify_matching(complex: &CellComplex, matching: &Matching) -> Result<(), Vec<Violation>> {
    verify_arrows(complex, &matching.arrows())
}

#[derive(Debug, Error, PartialEq)]
pub enum RepairError {
    #[error("entry ({0}, {1}) is outside the {2}-cell complex")]
    OutOfRange(CellId, CellId, usize),
    #[error("cell {cell} appears in {count} selected entries, expected exactly 1")]
    Coverage { cell: CellId, count: usize },
}

/// Replaces every selected non-admissible entry `(i, j)` of a full assignment
/// by the diagonals `(i, i)` and `(j, j)`.
///
/// `selected` lists the entries equal to 1; each cell must occur in exactly
/// one of them. The objective of the result is computed from the model.
pub fn repair(
    complex: &CellComplex,
    model: &CostModel,
    selected: &[(CellId, CellId)],
) -> Result<Matching, RepairError> {
    let n = complex.len();
    let mut count = vec![0usize; n];
    for &(i, j) in selected {
        if i >= n || j >= n {
            return Err(RepairError::OutOfRange(i, j, n));
        }
        count[i] += 1;
        if i != j {
            count[j] += 1;
        }
    }
    if let Some((cell, &c)) = count.iter().enumerate().find(|&(_, &c)| c != 1) {
        return Err(RepairError::Coverage { cell, count: c });
    }

    let mut pairs = Vec::new();
    let mut critical = Vec::new();
    for &(i, j) in selected {
        if i != j && complex.is_admissible(i, j) {
            pairs.push(AdmissiblePair { lower: i, upper: j });
        } else {
            critical.push(i);
            if i != j {
                critical.push(j);
            }
        }
    }
    pairs.sort_unstable();
    critical.sort_unstable();
    let objective =
        pairs.iter().map(|p| model.entry(p.lower, p.upper)).sum::<f64>() + critical.len() as f64 * model.alpha();
    Ok(Matching {
        pairs,
        critical,
        objective,
        units: 0,
        selected: Vec::new(),
    })
}

/// The objective split as `|ℐ| − cosine_sum + |𝒦|·α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    /// Number of matched pairs.
    pub matched: usize,
    /// Sum over matched pairs of `1 − c` (the cosine similarities).
    pub cosine_sum: f64,
    /// Number of critical cells.
    pub critical: usize,
    pub alpha: f64,
}

impl Decomposition {
    pub fn total(&self) -> f64 {
        self.matched as f64 - self.cosine_sum + self.critical as f64 * self.alpha
    }
}

pub fn objective_decomposition(matching: &Matching, model: &CostModel) -> Decomposition {
    let cosine_sum = matching.pairs.iter().map(|p| 1.0 - model.entry(p.lower, p.upper)).sum();
    Decomposition {
        matched: matching.pairs.len(),
        cosine_sum,
        critical: matching.critical.len(),
        alpha: model.alpha(),
    }
}
