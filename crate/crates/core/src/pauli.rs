//! Tensor products of Pauli-Z and identity factors, stored as bitmasks.
//!
//! Qubit `k` corresponds to bit `k` of both the mask and the computational
//! basis index, so `I⊗I⊗I⊗Z` (rightmost factor on qubit 0) is mask `0b0001`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_QUBIT_CAP;

/// Largest register a mask can describe.
pub const MAX_MASK_QUBITS: usize = 63;

/// Coefficients smaller than this in magnitude are dropped when merging.
pub const MERGE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliZString {
    mask: u64,
    n_qubits: usize,
}

impl PauliZString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_mask(0, n_qubits)
    }

    pub fn from_mask(mask: u64, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_MASK_QUBITS {
            return Err(Error::domain(format!(
                "qubit count {n_qubits} outside 1..={MAX_MASK_QUBITS}"
            )));
        }
        if mask >> n_qubits != 0 {
            return Err(Error::domain(format!(
                "mask {mask:#b} does not fit in {n_qubits} qubits"
            )));
        }
        Ok(Self { mask, n_qubits })
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn is_identity(&self) -> bool {
        self.mask == 0
    }

    /// Number of qubits carrying a Z factor.
    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Eigenvalue on `|basis_index⟩`: `(-1)^popcount(mask & basis_index)`.
    pub fn diagonal_entry(&self, basis_index: u64) -> Result<i8> {
        if basis_index >> self.n_qubits != 0 {
            return Err(Error::domain(format!(
                "basis index {basis_index} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(parity_sign(self.mask & basis_index))
    }

    /// Tensor-product label, most significant qubit first (`Z⊗I⊗Z` for mask `101`).
    pub fn label(&self) -> String {
        (0..self.n_qubits)
            .rev()
            .map(|k| if self.mask >> k & 1 == 1 { "Z" } else { "I" })
            .collect::<Vec<_>>()
            .join("⊗")
    }

    /// Mask as a fixed-width binary string, most significant qubit first.
    pub fn bits(&self) -> String {
        format!("{:0width$b}", self.mask, width = self.n_qubits)
    }
}

impl fmt::Display for PauliZString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[inline]
fn parity_sign(bits: u64) -> i8 {
    if bits.count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

pub fn make_zstring(qubit_indices: &[usize], n_qubits: usize) -> Result<PauliZString> {
    let mut mask = 0u64;
    for &q in qubit_indices {
        if q >= n_qubits {
            return Err(Error::domain(format!(
                "qubit index {q} out of range for {n_qubits} qubits"
            )));
        }
        mask |= 1 << q;
    }
    PauliZString::from_mask(mask, n_qubits)
}

/// Product of two Z-strings. `Z² = I` makes this a XOR of the masks.
pub fn multiply_zstrings(a: PauliZString, b: PauliZString) -> Result<PauliZString> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::domain(format!(
            "cannot multiply strings on {} and {} qubits",
            a.n_qubits, b.n_qubits
        )));
    }
    Ok(PauliZString {
        mask: a.mask ^ b.mask,
        n_qubits: a.n_qubits,
    })
}

pub fn diagonal_entry(zs: PauliZString, basis_index: u64) -> Result<i8> {
    zs.diagonal_entry(basis_index)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianTerm {
    pub coefficient: f64,
    pub string: PauliZString,
}

impl HamiltonianTerm {
    pub fn new(coefficient: f64, string: PauliZString) -> Self {
        Self {
            coefficient,
            string,
        }
    }
}

/// Sums coefficients of equal masks, drops near-zero results and sorts by mask.
///
/// Summation for each mask follows input order, so the output is a pure
/// function of the input sequence.
pub fn merge_terms(terms: &[HamiltonianTerm]) -> Vec<HamiltonianTerm> {
    let mut acc: std::collections::BTreeMap<u64, (f64, PauliZString)> = Default::default();
    for t in terms {
        acc.entry(t.string.mask)
            .and_modify(|(c, _)| *c += t.coefficient)
            .or_insert((t.coefficient, t.string));
    }
    acc.into_values()
        .filter(|(c, _)| c.abs() >= MERGE_EPSILON)
        .map(|(c, s)| HamiltonianTerm::new(c, s))
        .collect()
}

/// Bookkeeping from graph encoding, kept alongside the Hamiltonian for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EncodingStats {
    /// Terms emitted before merging (edges plus vertices).
    pub raw_terms: usize,
    /// Raw terms whose mask was already occupied by an earlier term.
    pub collisions: usize,
    /// Distinct masks whose merged coefficient vanished.
    pub vanished: usize,
    /// Largest normalized edge coefficient before merging.
    pub max_edge_coeff: f64,
    /// Largest normalized vertex coefficient before merging.
    pub max_vertex_coeff: f64,
    /// Total divisor applied to the raw weights.
    pub scale: f64,
}

/// Weighted sum of Z-strings on a fixed register, kept in merged form.
#[derive(Debug, Clone)]
pub struct GraphHamiltonian {
    n_qubits: usize,
    terms: Vec<HamiltonianTerm>,
    stats: Option<EncodingStats>,
    diagonal: OnceLock<Vec<f64>>,
}

impl GraphHamiltonian {
    /// Validates and merges `terms`.
    pub fn new(n_qubits: usize, terms: &[HamiltonianTerm]) -> Result<Self> {
        PauliZString::identity(n_qubits)?;
        for t in terms {
            if t.string.n_qubits != n_qubits {
                return Err(Error::domain(format!(
                    "term on {} qubits in a {n_qubits}-qubit Hamiltonian",
                    t.string.n_qubits
                )));
            }
            if !t.coefficient.is_finite() {
                return Err(Error::domain("non-finite Hamiltonian coefficient"));
            }
        }
        Ok(Self {
            n_qubits,
            terms: merge_terms(terms),
            stats: None,
            diagonal: OnceLock::new(),
        })
    }

    pub(crate) fn with_stats(mut self, stats: EncodingStats) -> Self {
        self.stats = Some(stats);
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn stats(&self) -> Option<&EncodingStats> {
        self.stats.as_ref()
    }

    pub fn abs_coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Returns a copy with every coefficient divided by `divisor`.
    pub fn scaled(&self, divisor: f64) -> Result<Self> {
        if !(divisor.is_finite() && divisor > 0.0) {
            return Err(Error::domain(format!("invalid scale divisor {divisor}")));
        }
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|t| HamiltonianTerm::new(t.coefficient / divisor, t.string))
            .collect();
        let mut out = Self::new(self.n_qubits, &terms)?;
        out.stats = self.stats;
        // Dividing the cached diagonal keeps the extreme entry exactly at
        // `λ / divisor` instead of re-summing the scaled coefficients.
        if let Some(d) = self.diagonal.get() {
            let _ = out.diagonal.set(d.iter().map(|x| x / divisor).collect());
        }
        Ok(out)
    }

    /// Dense diagonal in the computational basis, computed once and cached.
    pub fn build_diagonal(&self) -> Result<&[f64]> {
        self.build_diagonal_capped(DEFAULT_QUBIT_CAP)
    }

    pub fn build_diagonal_capped(&self, cap: usize) -> Result<&[f64]> {
        if let Some(d) = self.diagonal.get() {
            return Ok(d);
        }
        if self.n_qubits > cap {
            return Err(Error::Resource {
                what: "Hamiltonian diagonal",
                requested: self.n_qubits,
                cap,
            });
        }
        let mut coeffs = vec![0.0; 1usize << self.n_qubits];
        for t in &self.terms {
            coeffs[t.string.mask as usize] += t.coefficient;
        }
        walsh_hadamard_in_place(&mut coeffs);
        Ok(self.diagonal.get_or_init(|| coeffs))
    }

    /// Exact `(λmin, λmax)`; the operator is diagonal so these are the extreme entries.
    pub fn spectral_bounds(&self) -> Result<(f64, f64)> {
        let diag = self.build_diagonal()?;
        Ok(diag
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            }))
    }

    pub fn to_json(&self) -> HamiltonianJson {
        HamiltonianJson {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    coeff: t.coefficient,
                    mask: t.string.mask,
                })
                .collect(),
        }
    }

    pub fn from_json(json: &HamiltonianJson) -> Result<Self> {
        let terms = json
            .terms
            .iter()
            .map(|t| {
                Ok(HamiltonianTerm::new(
                    t.coeff,
                    PauliZString::from_mask(t.mask, json.n_qubits)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.n_qubits, &terms)
    }
}

impl PartialEq for GraphHamiltonian {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.terms == other.terms
    }
}

/// Wire form: `{"n_qubits": N, "terms": [{"coeff": c, "mask": m}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianJson {
    pub n_qubits: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: f64,
    pub mask: u64,
}

/// Unnormalized fast Walsh-Hadamard transform.
///
/// Maps a mask-indexed coefficient vector `c` to `d[x] = Σ_m c[m]·(-1)^popcount(m & x)`,
/// the diagonal of `Σ_m c[m]·Z^m`, in `O(n·2^n)`.
pub fn walsh_hadamard_in_place(values: &mut [f64]) {
    let len = values.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(half * 2) {
            for i in block..block + half {
                let a = values[i];
                let b = values[i + half];
                values[i] = a + b;
                values[i + half] = a - b;
            }
        }
        half *= 2;
    }
}
