//! Dense Hermitian eigensolver (cyclic Jacobi) for the small matrices this
//! crate needs: density-matrix PSD checks, the full-space partial-transpose
//! oracle, finite-difference Hessians and the convex-roof eigendecomposition.
//!
//! Each rotation first rephases the pivot column so the pivot entry becomes
//! real, then applies the classical real Jacobi rotation; both steps are
//! unitary similarities. Convergence is declared when the off-diagonal
//! Frobenius norm drops below 1e-12, with a hard cap of 100 sweeps.

use num_complex::Complex64;

/// Off-diagonal Frobenius-norm convergence threshold.
pub const OFFDIAG_TOL: f64 = 1e-12;
/// Maximum number of cyclic sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix (row-major, `n*n` entries), ascending.
///
/// The input is symmetrized as `(H + H†)/2` before iterating, so inputs that
/// are Hermitian only up to round-off are handled.
pub fn hermitian_eigenvalues(entries: &[Complex64], n: usize) -> Vec<f64> {
    hermitian_eigen_impl(entries, n, false).0
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
///
/// Column `k` of the returned matrix (row-major, `n*n`) is the eigenvector
/// for eigenvalue `k`.
pub fn hermitian_eigen(entries: &[Complex64], n: usize) -> (Vec<f64>, Vec<Complex64>) {
    let (vals, vecs) = hermitian_eigen_impl(entries, n, true);
    (vals, vecs.expect("vectors requested"))
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(entries: &[f64], n: usize) -> Vec<f64> {
    let complex: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    hermitian_eigenvalues(&complex, n)
}

fn hermitian_eigen_impl(
    entries: &[Complex64],
    n: usize,
    want_vectors: bool,
) -> (Vec<f64>, Option<Vec<Complex64>>) {
    assert_eq!(entries.len(), n * n, "matrix must be n*n");
    if n == 0 {
        return (Vec::new(), Some(Vec::new()).filter(|_| want_vectors));
    }

    // Work on the Hermitian part; force the diagonal real.
    let mut h = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] = 0.5 * (entries[i * n + j] + entries[j * n + i].conj());
        }
        h[i * n + i] = Complex64::new(h[i * n + i].re, 0.0);
    }

    let mut v = if want_vectors {
        let mut id = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            id[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Some(id)
    } else {
        None
    };

    for _sweep in 0..MAX_SWEEPS {
        if offdiag_frobenius(&h, n) < OFFDIAG_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut h, v.as_deref_mut(), n, p, q);
            }
        }
    }

    // Diagonal is real by construction; sort ascending, carrying columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        h[a * n + a]
            .re
            .partial_cmp(&h[b * n + b].re)
            .expect("eigenvalues are finite")
    });
    let vals: Vec<f64> = order.iter().map(|&k| h[k * n + k].re).collect();
    let vecs = v.map(|v| {
        let mut sorted = vec![Complex64::new(0.0, 0.0); n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                sorted[row * n + new_col] = v[row * n + old_col];
            }
        }
        sorted
    });
    (vals, vecs)
}

fn offdiag_frobenius(h: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += h[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilate h[p][q] by a unitary similarity: a diagonal phase that makes the
/// pivot real, followed by a real Jacobi rotation in the (p,q) plane.
fn rotate(h: &mut [Complex64], mut v: Option<&mut [Complex64]>, n: usize, p: usize, q: usize) {
    let pivot = h[p * n + q];
    let m = pivot.norm();
    if m < 1e-300 {
        return;
    }

    // Phase step: row q times e^{i a}, column q times e^{-i a}, where
    // a = arg(h_pq), after which h[p][q] = |pivot| is real.
    let phase = pivot / m; // e^{i a}
    let phase_conj = phase.conj();
    for k in 0..n {
        h[q * n + k] *= phase;
        h[k * n + q] *= phase_conj;
    }
    // The diagonal picked up phase * conj(phase) = 1; clean round-off.
    h[q * n + q] = Complex64::new(h[q * n + q].re, 0.0);
    if let Some(v) = v.as_deref_mut() {
        for k in 0..n {
            v[k * n + q] *= phase_conj;
        }
    }

    // Real Jacobi rotation on the now-real 2x2 pivot block.
    let app = h[p * n + p].re;
    let aqq = h[q * n + q].re;
    let tau = (aqq - app) / (2.0 * m);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let hkp = h[k * n + p];
        let hkq = h[k * n + q];
        h[k * n + p] = c * hkp - s * hkq;
        h[k * n + q] = s * hkp + c * hkq;
        h[p * n + k] = h[k * n + p].conj();
        h[q * n + k] = h[k * n + q].conj();
    }
    h[p * n + p] = Complex64::new(app - t * m, 0.0);
    h[q * n + q] = Complex64::new(aqq + t * m, 0.0);
    h[p * n + q] = Complex64::new(0.0, 0.0);
    h[q * n + p] = Complex64::new(0.0, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[k * n + p];
            let vkq = v[k * n + q];
            v[k * n + p] = c * vkp - s * vkq;
            v[k * n + q] = s * vkp + c * vkq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        let mut h = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let z = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                if i == j {
                    h[i * n + i] = Complex64::new(z.re, 0.0);
                } else {
                    h[i * n + j] = z;
                    h[j * n + i] = z.conj();
                }
            }
        }
        h
    }

    #[test]
    fn diagonal_matrix_is_fixed_point() {
        let h = vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ];
        assert_eq!(hermitian_eigenvalues(&h, 2), vec![-1.0, 3.0]);
    }

    #[test]
    fn two_by_two_off_diagonal_block() {
        // [[0, m], [m, 0]] has eigenvalues -m, +m.
        let m = 0.4;
        let h = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(m, 0.0),
            Complex64::new(m, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let vals = hermitian_eigenvalues(&h, 2);
        assert!((vals[0] + m).abs() < 1e-14);
        assert!((vals[1] - m).abs() < 1e-14);
    }

    #[test]
    fn complex_off_diagonal_block_has_modulus_eigenvalues() {
        // [[0, z], [conj(z), 0]] has eigenvalues +-|z|.
        let z = Complex64::new(0.3, -0.4);
        let h = vec![
            Complex64::new(0.0, 0.0),
            z,
            z.conj(),
            Complex64::new(0.0, 0.0),
        ];
        let vals = hermitian_eigenvalues(&h, 2);
        assert!((vals[0] + 0.5).abs() < 1e-13);
        assert!((vals[1] - 0.5).abs() < 1e-13);
    }

    #[test]
    fn residuals_and_invariants_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[2usize, 3, 5, 8, 13] {
            let h = random_hermitian(n, &mut rng);
            let (vals, vecs) = hermitian_eigen(&h, n);

            // Trace and Frobenius norm are preserved.
            let trace: f64 = (0..n).map(|i| h[i * n + i].re).sum();
            assert!((vals.iter().sum::<f64>() - trace).abs() < 1e-10);
            let frob: f64 = h.iter().map(|z| z.norm_sqr()).sum();
            let frob_vals: f64 = vals.iter().map(|l| l * l).sum();
            assert!((frob - frob_vals).abs() < 1e-9);

            // ||H v - lambda v|| small for every pair.
            for k in 0..n {
                let mut worst = 0.0f64;
                for i in 0..n {
                    let mut hv = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        hv += h[i * n + j] * vecs[j * n + k];
                    }
                    worst = worst.max((hv - vals[k] * vecs[i * n + k]).norm());
                }
                assert!(worst < 1e-10, "residual {worst} at n={n}, k={k}");
            }

            // Eigenvectors orthonormal.
            for a in 0..n {
                for b in 0..n {
                    let mut dot = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        dot += vecs[i * n + a].conj() * vecs[i * n + b];
                    }
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((dot.norm() - expect).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn real_symmetric_wrapper_agrees() {
        let a = vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let vals = symmetric_eigenvalues(&a, 3);
        // Analytic eigenvalues of this tridiagonal: 2, (5 +- sqrt(9))/2 -> 1, 4.
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
        assert!((vals[2] - 4.0).abs() < 1e-12);
    }
}
