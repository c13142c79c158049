//! Dense symmetric eigenvalues by cyclic Jacobi rotations.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::domain(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Eigenvalues of a symmetric matrix, in descending order.
///
/// Each sweep visits every off-diagonal pair once at `O(n)` cost per
/// rotation, so a sweep is `O(n³)`; convergence is quadratic once the
/// off-diagonal mass is small.
pub fn symmetric_eigenvalues(m: &SymmetricMatrix) -> Vec<f64> {
    let n = m.n;
    let mut a = m.data.clone();
    let idx = |i: usize, j: usize| i * n + j;
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n < 2 || scale == 0.0 {
        let mut d: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
        d.sort_by(|x, y| y.total_cmp(x));
        return d;
    }
    let target = (f64::EPSILON * scale).powi(2);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[idx(i, j)].powi(2))
            .sum();
        if off <= target {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[idx(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[idx(p, p)];
                let aqq = a[idx(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = (t * t + 1.0).sqrt().recip();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[idx(p, p)] = app - t * apq;
                a[idx(q, q)] = aqq + t * apq;
                a[idx(p, q)] = 0.0;
                a[idx(q, p)] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let g = a[idx(r, p)];
                    let h = a[idx(r, q)];
                    let rp = g - s * (h + g * tau);
                    let rq = h + s * (g - h * tau);
                    a[idx(r, p)] = rp;
                    a[idx(p, r)] = rp;
                    a[idx(r, q)] = rq;
                    a[idx(q, r)] = rq;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    d.sort_by(|x, y| y.total_cmp(x));
    d
}

/// Singular values of a symmetric matrix (absolute eigenvalues), descending.
pub fn symmetric_singular_values(m: &SymmetricMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = symmetric_eigenvalues(m).into_iter().map(f64::abs).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn mat(rows: &[&[f64]]) -> SymmetricMatrix {
        SymmetricMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> SymmetricMatrix {
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let v = rng.gen_range(-2.0..2.0);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        SymmetricMatrix::from_rows(&rows).unwrap()
    }

    /// Roots of the characteristic polynomial of a symmetric matrix, n ≤ 3, descending.
    fn char_poly_roots(m: &SymmetricMatrix) -> Vec<f64> {
        let mut roots = match m.dim() {
            1 => vec![m.at(0, 0)],
            2 => {
                let (a, b, d) = (m.at(0, 0), m.at(0, 1), m.at(1, 1));
                let mean = (a + d) / 2.0;
                let r = (((a - d) / 2.0).powi(2) + b * b).sqrt();
                vec![mean + r, mean - r]
            }
            3 => {
                // Trigonometric solution of the depressed cubic for real-symmetric input.
                let a = |i, j| m.at(i, j);
                let p1 = a(0, 1).powi(2) + a(0, 2).powi(2) + a(1, 2).powi(2);
                let q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
                let p2 = (a(0, 0) - q).powi(2)
                    + (a(1, 1) - q).powi(2)
                    + (a(2, 2) - q).powi(2)
                    + 2.0 * p1;
                let p = (p2 / 6.0).sqrt();
                let b = |i: usize, j: usize| (a(i, j) - if i == j { q } else { 0.0 }) / p;
                let det_b = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
                    - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
                    + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
                let phi = (det_b / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
                let e1 = q + 2.0 * p * phi.cos();
                let e3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
                vec![e1, 3.0 * q - e1 - e3, e3]
            }
            _ => unreachable!(),
        };
        roots.sort_by(|x, y| y.total_cmp(x));
        roots
    }

    /// Largest |eigenvalue| by power iteration on A².
    fn power_estimate(m: &SymmetricMatrix) -> f64 {
        let n = m.dim();
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 * 0.1).collect();
        let mut lambda = 0.0;
        for _ in 0..5000 {
            let w: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| m.at(i, j) * v[j]).sum())
                .collect();
            let w2: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| m.at(i, j) * w[j]).sum())
                .collect();
            let norm = w2.iter().map(|x| x * x).sum::<f64>().sqrt();
            lambda = norm.sqrt() / v.iter().map(|x| x * x).sum::<f64>().sqrt().sqrt();
            v = w2.iter().map(|x| x / norm).collect();
        }
        lambda
    }

    #[test]
    fn single_edge_adjacency() {
        let s = symmetric_singular_values(&mat(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_adjacency() {
        let k3 = mat(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0], &[1.0, 1.0, 0.0]]);
        let e = symmetric_eigenvalues(&k3);
        for (got, want) in e.iter().zip([2.0, -1.0, -1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let s = symmetric_singular_values(&k3);
        for (got, want) in s.iter().zip([2.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_and_diagonal_matrices() {
        assert_eq!(
            symmetric_eigenvalues(&mat(&[&[0.0, 0.0], &[0.0, 0.0]])),
            vec![0.0, 0.0]
        );
        assert_eq!(
            symmetric_eigenvalues(&mat(&[&[-3.0, 0.0], &[0.0, 5.0]])),
            vec![5.0, -3.0]
        );
    }

    #[test]
    fn asymmetric_input_rejected() {
        assert!(SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(SymmetricMatrix::from_rows(&[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn small_matrices_match_characteristic_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=3 {
            for _ in 0..50 {
                let m = random_symmetric(n, &mut rng);
                let got = symmetric_eigenvalues(&m);
                let want = char_poly_roots(&m);
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).abs() < 1e-9, "n={n} got {got:?} want {want:?}");
                }
            }
        }
    }

    #[test]
    fn larger_matrices_match_power_estimate_and_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 4..=6 {
            for _ in 0..20 {
                let m = random_symmetric(n, &mut rng);
                let e = symmetric_eigenvalues(&m);
                let trace: f64 = (0..n).map(|i| m.at(i, i)).sum();
                let frob: f64 = m.data.iter().map(|x| x * x).sum();
                assert!((e.iter().sum::<f64>() - trace).abs() < 1e-9);
                assert!((e.iter().map(|x| x * x).sum::<f64>() - frob).abs() < 1e-9);
                let s = symmetric_singular_values(&m);
                assert!((s[0] - power_estimate(&m)).abs() < 1e-6 * s[0].max(1.0));
            }
        }
    }
}
