//! Core state types for the pair basis: pure states, mixed-state density
//! matrices, and recovery of Schmidt data from density-matrix entries.
//!
//! In the pair basis |i,i⟩ a pure state is a coefficient vector c, its density
//! matrix has entries ρᵢⱼ = cᵢ c̄ⱼ, and the Schmidt weights are μᵢ² = |cᵢ|².
//! The couplings Γᵢ² = μᵢ²(1−μᵢ²) = Σ_{j≠i}|ρᵢⱼ|² invert back to the weights
//! through μᵢ² = ½(1 − εᵢ√(1−4Γᵢ²)), with εᵢ = +1 except ε₁ = −1 when the
//! leading weight exceeds ½.

use num_complex::Complex64;
use crate::error::{Error, Result};
use crate::linalg;

/// Hermiticity tolerance |ρᵢⱼ − ρ̄ⱼᵢ|.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Trace deviation tolerance.
pub const TRACE_TOL: f64 = 1e-10;
/// Diagonal entries may be negative only down to this floor.
pub const DIAGONAL_FLOOR: f64 = -1e-12;
/// Minimum eigenvalue floor for the PSD check.
pub const PSD_FLOOR: f64 = -1e-9;
/// Coefficient vectors with norm below this are rejected as zero.
pub const ZERO_NORM_FLOOR: f64 = 1e-14;
/// Discriminants 1−4Γ² or 1−4|x|² may round below zero by at most this much
/// before the input is considered corrupted.
pub const DISCRIMINANT_FLOOR: f64 = -1e-12;

/// Clamp a discriminant of the form 1−4Γ² to [0, ∞).
///
/// Boundary states hit exact zero up to round-off; anything below the floor
/// signals corrupted input and is rejected rather than silently repaired.
pub fn clamp_discriminant(value: f64) -> Result<f64> {
    if value < DISCRIMINANT_FLOOR {
        Err(Error::domain(format!(
            "discriminant {value:.3e} below the round-off floor {DISCRIMINANT_FLOOR:.1e}"
        )))
    } else {
        Ok(value.max(0.0))
    }
}

/// A normalized pure state in the pair basis: c of length d, Σ|cᵢ|² = 1.
///
/// Immutable after construction; the constructor normalizes but keeps the
/// input phases verbatim.
#[derive(Clone, Debug, PartialEq)]
pub struct PurePairState {
    dim: usize,
    coeffs: Vec<Complex64>,
}

impl PurePairState {
    /// Build a state from raw coefficients, normalizing to unit norm.
    pub fn new(dim: usize, coeffs: &[Complex64]) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim, min: 2 });
        }
        if coeffs.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: coeffs.len(),
            });
        }
        let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let norm = norm_sq.sqrt();
        if norm < ZERO_NORM_FLOOR {
            return Err(Error::ZeroVector { norm });
        }
        let coeffs = coeffs.iter().map(|c| c / norm).collect();
        Ok(Self { dim, coeffs })
    }

    /// Convenience constructor for real coefficient vectors.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(c.len(), &c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Schmidt weights μᵢ² = |cᵢ|², in the original index order.
    pub fn weights(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// A mixed pair state: Hermitian, PSD, unit-trace d×d matrix in the |i,i⟩
/// basis. Stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl PairDensityMatrix {
    /// Validate and wrap raw entries.
    ///
    /// Inputs failing the PSD check by more than [`PSD_FLOOR`] are rejected,
    /// not projected: silently repairing them would invalidate every bound
    /// comparison downstream.
    pub fn new(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim, min: 2 });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for i in 0..dim {
            for j in i..dim {
                let dev = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                if dev > HERMITICITY_TOL {
                    return Err(Error::Hermiticity {
                        row: i,
                        col: j,
                        deviation: dev,
                    });
                }
            }
            let diag = entries[i * dim + i];
            if diag.re < DIAGONAL_FLOOR || diag.im.abs() > HERMITICITY_TOL {
                return Err(Error::Diagonal {
                    index: i,
                    value: diag.re,
                });
            }
        }
        let trace: f64 = (0..dim).map(|i| entries[i * dim + i].re).sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace {
                deviation: trace - 1.0,
            });
        }
        let eigs = linalg::hermitian_eigenvalues(entries, dim);
        let min_eig = eigs[0];
        if min_eig < PSD_FLOOR {
            return Err(Error::Psd {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self {
            dim,
            entries: entries.to_vec(),
        })
    }

    /// Wrap entries that are valid by construction (projectors of normalized
    /// states, permutations of validated matrices, convex mixtures of those).
    pub(crate) fn from_validated(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    /// ρᵢⱼ = cᵢ c̄ⱼ for a pure state; valid by construction.
    pub fn from_pure(psi: &PurePairState) -> Self {
        let d = psi.dim;
        let c = &psi.coeffs;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = c[i] * c[j].conj();
            }
        }
        Self::from_validated(d, entries)
    }

    /// Convex mixture Σ pₖ |ψₖ⟩⟨ψₖ| of pure pair states.
    ///
    /// Weights must form a probability vector and all states must share the
    /// dimension. The result is validated like any other input.
    pub fn mix(weights: &[f64], states: &[PurePairState]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                got: states.len(),
            });
        }
        let d = states[0].dim;
        let wsum: f64 = weights.iter().sum();
        if (wsum - 1.0).abs() > TRACE_TOL || weights.iter().any(|&w| w < 0.0) {
            return Err(Error::domain(format!(
                "mixture weights must be a probability vector (sum {wsum})"
            )));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for (w, psi) in weights.iter().zip(states) {
            if psi.dim != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: psi.dim,
                });
            }
            for i in 0..d {
                for j in 0..d {
                    entries[i * d + j] += w * psi.coeffs[i] * psi.coeffs[j].conj();
                }
            }
        }
        Self::new(d, &entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// Γᵢ² for row i: Σ_{j≠i} |ρᵢⱼ|².
    pub fn row_gamma_sq(&self, i: usize) -> f64 {
        (0..self.dim)
            .filter(|&j| j != i)
            .map(|j| self.entry(i, j).norm_sqr())
            .sum()
    }

    /// Apply a permutation as a similarity: out[i][j] = ρ[perm[i]][perm[j]].
    pub fn permuted(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.dim);
        let d = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = self.entry(perm[i], perm[j]);
            }
        }
        Self::from_validated(d, entries)
    }
}

/// Schmidt data of a pure state in the Γ-relabeled order.
///
/// `permutation[k]` is the original index stored at position k; couplings are
/// non-increasing. The order is weight-descending (ties by original index),
/// which is a Γ-descending order — Γᵢ²−Γⱼ² = (μᵢ²−μⱼ²)(1−μᵢ²−μⱼ²) — and,
/// unlike sorting on the rounded Γ values themselves, deterministically puts
/// the single weight above ½ (when present) at position 0 so the sign rule
/// applies literally.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtProfile {
    pub weights: Vec<f64>,
    pub couplings: Vec<f64>,
    pub signs: Vec<i8>,
    pub permutation: Vec<usize>,
}

/// Extract Schmidt weights, couplings and inversion signs from a pure state.
pub fn schmidt_from_pure(psi: &PurePairState) -> SchmidtProfile {
    let w = psi.weights();
    let gamma_sq: Vec<f64> = w.iter().map(|&wi| wi * (1.0 - wi)).collect();
    let mut order: Vec<usize> = (0..psi.dim).collect();
    order.sort_by(|&a, &b| w[b].partial_cmp(&w[a]).unwrap().then(a.cmp(&b)));
    let weights: Vec<f64> = order.iter().map(|&k| w[k]).collect();
    let couplings: Vec<f64> = order.iter().map(|&k| gamma_sq[k].sqrt()).collect();
    let signs: Vec<i8> = (0..psi.dim)
        .map(|pos| if pos == 0 && weights[0] > 0.5 { -1 } else { 1 })
        .collect();
    SchmidtProfile {
        weights,
        couplings,
        signs,
        permutation: order,
    }
}

/// Invert one coupling back to a weight: μ² = ½(1 − ε√(1−4Γ²)).
///
/// The ε = +1 branch is evaluated as 2Γ²/(1+√(1−4Γ²)), which keeps full
/// relative precision for small couplings.
pub fn weight_from_coupling(gamma: f64, sign: i8) -> Result<f64> {
    let disc = clamp_discriminant(1.0 - 4.0 * gamma * gamma)?;
    let q = disc.sqrt();
    Ok(if sign < 0 {
        0.5 * (1.0 + q)
    } else {
        2.0 * gamma * gamma / (1.0 + q)
    })
}

/// Relabel a density matrix so the row couplings Γᵢ are non-increasing.
///
/// Ties are broken by original index (stable). Returns the permuted matrix
/// and the permutation (new position → original index).
pub fn relabel_by_gamma(rho: &PairDensityMatrix) -> (PairDensityMatrix, Vec<usize>) {
    let d = rho.dim();
    let gamma_sq: Vec<f64> = (0..d).map(|i| rho.row_gamma_sq(i)).collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| gamma_sq[b].partial_cmp(&gamma_sq[a]).unwrap().then(a.cmp(&b)));
    (rho.permuted(&order), order)
}
