//! Dense statevector simulator with the handful of gates the classifiers need.
//!
//! Basis index bit `k` is the state of qubit `k`. Gate kernels mutate the
//! amplitudes in place; clone the state for independent evaluations.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_QUBIT_CAP;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, 0)
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::domain(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes; the caller is responsible for normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() || amplitudes.len() < 2 {
            return Err(Error::domain(format!(
                "{} amplitudes is not a qubit register",
                amplitudes.len()
            )));
        }
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        check_register(n_qubits)?;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::domain(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Applies a real 2×2 matrix `[[m00, m01], [m10, m11]]` to `qubit`.
    fn apply_real_1q(&mut self, qubit: usize, m: [f64; 4]) {
        let stride = 1usize << qubit;
        let len = self.amplitudes.len();
        for block in (0..len).step_by(stride << 1) {
            for i in block..block + stride {
                let a = self.amplitudes[i];
                let b = self.amplitudes[i + stride];
                self.amplitudes[i] = a * m[0] + b * m[1];
                self.amplitudes[i + stride] = a * m[2] + b * m[3];
            }
        }
    }

    /// `RY(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    pub fn apply_ry(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        let (s, c) = (angle / 2.0).sin_cos();
        self.apply_real_1q(qubit, [c, -s, s, c]);
        Ok(())
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        self.apply_real_1q(qubit, [r, r, r, -r]);
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::domain(format!(
                "CNOT control and target are both qubit {control}"
            )));
        }
        let (cbit, tbit) = (1usize << control, 1usize << target);
        for i in 0..self.amplitudes.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amplitudes.swap(i, i | tbit);
            }
        }
        Ok(())
    }

    /// Applies `layers` rounds of RY on every qubit followed by the entangler.
    pub fn apply_ansatz(&mut self, params: &AnsatzParams, entangler: Entangler) -> Result<()> {
        if params.n_qubits != self.n_qubits {
            return Err(Error::domain(format!(
                "ansatz built for {} qubits applied to {} qubits",
                params.n_qubits, self.n_qubits
            )));
        }
        for layer in 0..params.layers {
            for (q, &angle) in params.layer(layer).iter().enumerate() {
                self.apply_ry(q, angle)?;
            }
            for (c, t) in entangler.pairs(self.n_qubits) {
                self.apply_cnot(c, t)?;
            }
        }
        Ok(())
    }

    /// `Σ_x |ψ_x|² · diag[x]`.
    pub fn expectation_diagonal(&self, diag: &[f64]) -> Result<f64> {
        if diag.len() != self.amplitudes.len() {
            return Err(Error::domain(format!(
                "diagonal of length {} for a state of length {}",
                diag.len(),
                self.amplitudes.len()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(diag)
            .map(|(a, d)| a.norm_sqr() * d)
            .sum())
    }
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::domain("register needs at least one qubit"));
    }
    if n_qubits > DEFAULT_QUBIT_CAP {
        return Err(Error::Resource {
            what: "statevector",
            requested: n_qubits,
            cap: DEFAULT_QUBIT_CAP,
        });
    }
    Ok(())
}

/// `H^⊗n |0…0⟩`: every amplitude equals `2^(−n/2)`.
pub fn init_plus_state(n_qubits: usize) -> Result<StateVector> {
    check_register(n_qubits)?;
    let dim = 1usize << n_qubits;
    let amp = (dim as f64).sqrt().recip();
    Ok(StateVector {
        n_qubits,
        amplitudes: vec![Complex64::new(amp, 0.0); dim],
    })
}

/// `⨂_q RY(features[q]) |0⟩`.
pub fn angle_encode(features: &[f64], n_qubits: usize) -> Result<StateVector> {
    if features.len() != n_qubits {
        return Err(Error::domain(format!(
            "{} features for {n_qubits} qubits",
            features.len()
        )));
    }
    if features.iter().any(|f| !f.is_finite()) {
        return Err(Error::domain("non-finite feature"));
    }
    let mut state = StateVector::zero_state(n_qubits)?;
    for (q, &f) in features.iter().enumerate() {
        state.apply_ry(q, f)?;
    }
    Ok(state)
}

pub fn expectation_diagonal(state: &StateVector, diag: &[f64]) -> Result<f64> {
    state.expectation_diagonal(diag)
}

/// CNOT pattern applied after each rotation layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    /// `CNOT(q → q+1 mod n)` for `q = 0..n`.
    #[default]
    Ring,
    /// `CNOT(q → q+1)` for `q = 0..n−1`.
    Chain,
}

impl Entangler {
    pub fn pairs(self, n_qubits: usize) -> Vec<(usize, usize)> {
        match (self, n_qubits) {
            (_, 0 | 1) => Vec::new(),
            // With two qubits the ring closes back onto the same pair.
            (Entangler::Ring, n) => (0..n).map(|q| (q, (q + 1) % n)).collect(),
            (Entangler::Chain, n) => (0..n - 1).map(|q| (q, q + 1)).collect(),
        }
    }
}

/// Rotation angles, `layers × n_qubits`, row-major by layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    layers: usize,
    n_qubits: usize,
    angles: Vec<f64>,
}

impl AnsatzParams {
    pub fn zeros(layers: usize, n_qubits: usize) -> Self {
        Self {
            layers,
            n_qubits,
            angles: vec![0.0; layers * n_qubits],
        }
    }

    pub fn from_angles(layers: usize, n_qubits: usize, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != layers * n_qubits {
            return Err(Error::domain(format!(
                "{} angles for a {layers}×{n_qubits} ansatz",
                angles.len()
            )));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::domain("non-finite ansatz angle"));
        }
        Ok(Self {
            layers,
            n_qubits,
            angles,
        })
    }

    /// Uniform draw on `(−π, π]`.
    pub fn random(layers: usize, n_qubits: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let angles = (0..layers * n_qubits)
            .map(|_| PI - rng.gen_range(0.0..2.0 * PI))
            .collect();
        Self {
            layers,
            n_qubits,
            angles,
        }
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn angles_mut(&mut self) -> &mut [f64] {
        &mut self.angles
    }

    pub fn layer(&self, layer: usize) -> &[f64] {
        &self.angles[layer * self.n_qubits..(layer + 1) * self.n_qubits]
    }

    pub fn get(&self, layer: usize, qubit: usize) -> f64 {
        self.angles[layer * self.n_qubits + qubit]
    }

    /// Copy with flat parameter `index` moved by `delta`.
    pub fn shifted(&self, index: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.angles[index] += delta;
        out
    }
}
