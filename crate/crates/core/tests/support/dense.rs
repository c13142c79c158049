//! Dense-matrix reference implementations. Everything here builds full
//! `2^N × 2^N` operators from Kronecker products, so it shares no code
//! with the bitmask kernels under test.

#![allow(dead_code)]

use egvqc::pauli::GraphHamiltonian;

pub type Mat = Vec<Vec<f64>>;

pub fn identity(dim: usize) -> Mat {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k] != 0.0 {
                for j in 0..m {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

pub fn matvec(a: &Mat, v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn pauli_i() -> Mat {
    identity(2)
}

fn pauli_z() -> Mat {
    vec![vec![1.0, 0.0], vec![0.0, -1.0]]
}

/// `⊗_{q=N−1..0}` of `single` on `qubit` and identity elsewhere; qubit 0 is the
/// rightmost factor, i.e. the least significant index bit.
pub fn embed(single: &Mat, qubit: usize, n_qubits: usize) -> Mat {
    let id = pauli_i();
    let mut out = vec![vec![1.0]];
    for q in (0..n_qubits).rev() {
        out = kron(&out, if q == qubit { single } else { &id });
    }
    out
}

pub fn z_string(mask: u64, n_qubits: usize) -> Mat {
    let mut out = vec![vec![1.0]];
    for q in (0..n_qubits).rev() {
        let f = if mask >> q & 1 == 1 {
            pauli_z()
        } else {
            pauli_i()
        };
        out = kron(&out, &f);
    }
    out
}

pub fn hamiltonian_matrix(h: &GraphHamiltonian) -> Mat {
    let dim = 1usize << h.n_qubits();
    let mut out = vec![vec![0.0; dim]; dim];
    for t in h.terms() {
        let z = z_string(t.string.mask(), h.n_qubits());
        for i in 0..dim {
            for j in 0..dim {
                out[i][j] += t.coefficient * z[i][j];
            }
        }
    }
    out
}

pub fn diagonal(m: &Mat) -> Vec<f64> {
    (0..m.len()).map(|i| m[i][i]).collect()
}

pub fn ry(theta: f64) -> Mat {
    let (s, c) = (theta / 2.0).sin_cos();
    vec![vec![c, -s], vec![s, c]]
}

pub fn hadamard() -> Mat {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![r, r], vec![r, -r]]
}

/// CNOT as `|0⟩⟨0|_c ⊗ I + |1⟩⟨1|_c ⊗ X_t`, built from projectors.
pub fn cnot(control: usize, target: usize, n_qubits: usize) -> Mat {
    let p0 = vec![vec![1.0, 0.0], vec![0.0, 0.0]];
    let p1 = vec![vec![0.0, 0.0], vec![0.0, 1.0]];
    let x = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    let mut a = vec![vec![1.0]];
    let mut b = vec![vec![1.0]];
    for q in (0..n_qubits).rev() {
        let (fa, fb) = if q == control {
            (p0.clone(), p1.clone())
        } else if q == target {
            (pauli_i(), x.clone())
        } else {
            (pauli_i(), pauli_i())
        };
        a = kron(&a, &fa);
        b = kron(&b, &fb);
    }
    a.iter()
        .zip(&b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// Unitary of `layers` rounds of RY on every qubit then the CNOT `pairs`.
pub fn ansatz_unitary(
    angles: &[f64],
    layers: usize,
    n_qubits: usize,
    pairs: &[(usize, usize)],
) -> Mat {
    let mut u = identity(1 << n_qubits);
    for l in 0..layers {
        for q in 0..n_qubits {
            u = matmul(&embed(&ry(angles[l * n_qubits + q]), q, n_qubits), &u);
        }
        for &(c, t) in pairs {
            u = matmul(&cnot(c, t, n_qubits), &u);
        }
    }
    u
}

/// `H^{⊗N}|0…0⟩` by explicit matrix products.
pub fn plus_state(n_qubits: usize) -> Vec<f64> {
    let mut psi = vec![0.0; 1 << n_qubits];
    psi[0] = 1.0;
    for q in 0..n_qubits {
        psi = matvec(&embed(&hadamard(), q, n_qubits), &psi);
    }
    psi
}

pub fn expectation(h: &Mat, psi: &[f64]) -> f64 {
    psi.iter().zip(matvec(h, psi)).map(|(a, b)| a * b).sum()
}
