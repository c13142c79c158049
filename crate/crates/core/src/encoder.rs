//! Graph to Pauli-Z Hamiltonian encoding.
//!
//! Vertex `i` becomes the Z-string whose mask is the binary expansion of `i`,
//! edge `(i, j)` becomes the product of its endpoint strings (mask `i ^ j`)
//! weighted by the edge weight, and every vertex contributes a field term
//! weighted by its weighted degree. One shared divisor normalizes all
//! coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pauli::{
    multiply_zstrings, EncodingStats, GraphHamiltonian, HamiltonianTerm, PauliZString,
    MERGE_EPSILON,
};

/// Slack allowed on the unit-interval check to absorb floating-point rounding.
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMode {
    /// Divide by `max|J| + max|h|`.
    Paper,
    /// Divide by `Σ|J| + Σ|h|`.
    Strict,
    /// Rescale the merged operator so its largest |eigenvalue| is 1.
    #[default]
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EncodingConfig {
    pub n_qubits: usize,
    pub norm_mode: NormMode,
    pub include_vertex_terms: bool,
}

impl EncodingConfig {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            norm_mode: NormMode::default(),
            include_vertex_terms: true,
        }
    }

    pub fn with_norm_mode(mut self, mode: NormMode) -> Self {
        self.norm_mode = mode;
        self
    }
}

/// Smallest `N` with `n_vertices ≤ 2^N − 1`, so that no vertex maps to the identity.
pub fn required_qubits(n_vertices: usize) -> usize {
    (usize::BITS - n_vertices.leading_zeros()).max(1) as usize
}

pub fn encode_vertex(i: usize, n_qubits: usize) -> Result<PauliZString> {
    if i == 0 || n_qubits >= usize::BITS as usize || i >> n_qubits != 0 {
        return Err(Error::domain(format!(
            "vertex id {i} not encodable on {n_qubits} qubits (need 1 ≤ id < 2^{n_qubits})"
        )));
    }
    PauliZString::from_mask(i as u64, n_qubits)
}

pub fn encode_edge(i: usize, j: usize, n_qubits: usize) -> Result<PauliZString> {
    if i == j {
        return Err(Error::domain(format!("self-loop on vertex {i}")));
    }
    multiply_zstrings(encode_vertex(i, n_qubits)?, encode_vertex(j, n_qubits)?)
}

pub fn encode_graph(g: &Graph, cfg: &EncodingConfig) -> Result<GraphHamiltonian> {
    let n = cfg.n_qubits;
    let needed = required_qubits(g.n_vertices());
    if needed > n {
        return Err(Error::domain(format!(
            "graph with {} vertices needs {needed} qubits, configured {n}",
            g.n_vertices()
        )));
    }

    let mut raw = Vec::with_capacity(g.n_edges() + g.n_vertices());
    let mut max_edge: f64 = 0.0;
    let mut sum_edge = 0.0;
    for &(u, v, w) in g.edges() {
        raw.push(HamiltonianTerm::new(w, encode_edge(u, v, n)?));
        max_edge = max_edge.max(w.abs());
        sum_edge += w.abs();
    }
    let mut max_vertex: f64 = 0.0;
    let mut sum_vertex = 0.0;
    if cfg.include_vertex_terms {
        for (k, d) in g.weighted_degrees().into_iter().enumerate() {
            raw.push(HamiltonianTerm::new(d, encode_vertex(k + 1, n)?));
            max_vertex = max_vertex.max(d.abs());
            sum_vertex += d.abs();
        }
    }

    let paper_scale = max_edge + max_vertex;
    if paper_scale == 0.0 {
        return Err(Error::Degenerate(format!(
            "graph with {} vertices and no edges has no nonzero terms",
            g.n_vertices()
        )));
    }

    let unscaled = GraphHamiltonian::new(n, &raw)?;
    let scale = match cfg.norm_mode {
        NormMode::Paper => paper_scale,
        NormMode::Strict => sum_edge + sum_vertex,
        NormMode::Exact => {
            let (lo, hi) = unscaled.spectral_bounds()?;
            let spread = lo.abs().max(hi.abs());
            if spread <= MERGE_EPSILON * paper_scale {
                return Err(Error::Degenerate(
                    "all encoded terms cancel; the Hamiltonian is zero".into(),
                ));
            }
            spread
        }
    };
    if unscaled.terms().is_empty() {
        return Err(Error::Degenerate("all encoded terms cancel".into()));
    }

    let mut distinct = std::collections::HashSet::with_capacity(raw.len());
    let collisions = raw
        .iter()
        .filter(|t| !distinct.insert(t.string.mask()))
        .count();
    let stats = EncodingStats {
        raw_terms: raw.len(),
        collisions,
        vanished: distinct.len() - unscaled.terms().len(),
        max_edge_coeff: max_edge / scale,
        max_vertex_coeff: max_vertex / scale,
        scale,
    };
    Ok(unscaled.scaled(scale)?.with_stats(stats))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `max|J| + max|h|` over the normalized coefficients. Reported only; it
    /// is not a valid eigenvalue bound once several terms overlap.
    pub delta_j_plus_delta_h: f64,
    pub within_unit: bool,
}

pub fn verify_bound(h: &GraphHamiltonian) -> Result<BoundReport> {
    let (lambda_min, lambda_max) = h.spectral_bounds()?;
    let delta = match h.stats() {
        Some(s) => s.max_edge_coeff + s.max_vertex_coeff,
        None => h
            .terms()
            .iter()
            .map(|t| t.coefficient.abs())
            .fold(0.0, f64::max),
    };
    Ok(BoundReport {
        lambda_min,
        lambda_max,
        delta_j_plus_delta_h: delta,
        within_unit: lambda_min >= -1.0 - UNIT_TOLERANCE && lambda_max <= 1.0 + UNIT_TOLERANCE,
    })
}
