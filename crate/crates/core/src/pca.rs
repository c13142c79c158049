//! Spectral features for the angle-encoded baseline classifier.
//!
//! Each graph is summarized by the top-`k` singular values of its weighted
//! adjacency (or Laplacian) matrix. The features are permutation-invariant and
//! fixed-length, and are mapped to rotation angles in `[0, π]` by a scale
//! fitted on the training split.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{symmetric_singular_values, SymmetricMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    #[default]
    Adjacency,
    Laplacian,
}

pub fn graph_matrix(g: &Graph, kind: MatrixKind) -> Result<SymmetricMatrix> {
    let mut rows = g.adjacency_matrix();
    if kind == MatrixKind::Laplacian {
        let deg = g.weighted_degrees();
        for (i, row) in rows.iter_mut().enumerate() {
            for x in row.iter_mut() {
                *x = -*x;
            }
            row[i] = deg[i];
        }
    }
    SymmetricMatrix::from_rows(&rows)
}

/// Top-`k` singular values, descending, zero-padded when the graph is smaller than `k`.
pub fn spectral_features(g: &Graph, k: usize, kind: MatrixKind) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::domain("need at least one spectral feature"));
    }
    let mut s = symmetric_singular_values(&graph_matrix(g, kind)?);
    s.resize(k, 0.0);
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaFeatures {
    pub values: Vec<f64>,
}

/// Maps raw singular values to angles: `v · π / max`, clamped to `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler {
    /// Largest singular value seen in the fitting set.
    pub max_value: f64,
}

impl FeatureScaler {
    pub fn fit<'a>(features: impl IntoIterator<Item = &'a [f64]>) -> Self {
        let max_value = features
            .into_iter()
            .flat_map(|f| f.iter().copied())
            .fold(0.0, f64::max);
        Self { max_value }
    }

    pub fn apply(&self, raw: &[f64]) -> PcaFeatures {
        let factor = if self.max_value > 0.0 {
            PI / self.max_value
        } else {
            0.0
        };
        PcaFeatures {
            values: raw.iter().map(|v| (v * factor).clamp(0.0, PI)).collect(),
        }
    }
}

pub fn pca_features(
    g: &Graph,
    k: usize,
    kind: MatrixKind,
    scaler: &FeatureScaler,
) -> Result<PcaFeatures> {
    Ok(scaler.apply(&spectral_features(g, k, kind)?))
}
