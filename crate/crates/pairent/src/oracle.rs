//! Brute-force convex-roof EOF for small dimensions.
//!
//! Every length-K decomposition of ρ arises from a K×R isometry applied to
//! the weighted eigenvectors of ρ (R = rank), so the roof minimum is a search
//! over isometries. The search keeps the weighted member matrix V (rows are
//! √pₖ ψₖ) and applies coordinate-wise Givens rotations to its rows — each
//! rotation is a unitary mixing of decomposition members, so ρ = V†V is
//! preserved exactly. Steps shrink ×½ whenever a full pass fails to improve,
//! stopping below 1e-7; random restarts guard against local minima. The
//! result converges to the EOF from above, which is all the certification
//! use-case needs.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::bounds::best_bound;
use crate::ensembles::{derive_sample_seed, EnsembleSample};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pairstate::{PairDensityMatrix, PurePairState};
use crate::{shannon_entropy, LogBase};

/// Desk-scale cap on the roof search.
pub const ROOF_MAX_DIM: usize = 4;
/// Eigenvalues above this count toward the numerical rank.
pub const RANK_TOL: f64 = 1e-10;
/// Initial Givens step.
pub const INITIAL_STEP: f64 = std::f64::consts::PI / 8.0;
/// The coordinate search stops once the step shrinks below this.
pub const MIN_STEP: f64 = 1e-7;
/// A pass must improve by at least this factor times step² to keep its step.
pub const SUFFICIENT_DECREASE: f64 = 0.01;
/// Convergence rule: this many consecutive restarts improving by less than
/// [`RESTART_IMPROVEMENT_TOL`] declare the search converged.
pub const CONVERGED_RESTARTS: usize = 5;
pub const RESTART_IMPROVEMENT_TOL: f64 = 1e-8;

/// Search configuration.
#[derive(Clone, Copy, Debug)]
pub struct RoofSettings {
    /// Decomposition length; `None` means rank + 2.
    pub members: Option<usize>,
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
    pub base: LogBase,
}

impl Default for RoofSettings {
    fn default() -> Self {
        Self {
            members: None,
            restarts: 12,
            iters: 200,
            seed: 1,
            base: LogBase::Two,
        }
    }
}

/// Outcome of the roof search.
#[derive(Clone, Debug)]
pub struct RoofResult {
    pub eof_estimate: f64,
    pub best_decomposition: EnsembleSample,
    pub restarts_used: usize,
    pub converged: bool,
}

/// Weighted member matrix: K rows of √pₖ ψₖ in C^d.
struct MemberMatrix {
    k: usize,
    d: usize,
    rows: Vec<Complex64>,
}

impl MemberMatrix {
    fn row(&self, i: usize) -> &[Complex64] {
        &self.rows[i * self.d..(i + 1) * self.d]
    }

    /// Average entropy Σ pₖ S(ψₖ) in nats.
    fn avg_entropy_nats(&self) -> f64 {
        let mut total = 0.0;
        for k in 0..self.k {
            total += row_entropy_nats(self.row(k));
        }
        total
    }
}

fn row_entropy_nats(row: &[Complex64]) -> f64 {
    let p: f64 = row.iter().map(|z| z.norm_sqr()).sum();
    if p < 1e-15 {
        return 0.0;
    }
    let mut s = 0.0;
    for z in row {
        s -= crate::xlogx(z.norm_sqr() / p);
    }
    p * s
}

/// Response of one candidate rotation: entropy contribution of the two
/// affected rows only.
fn pair_entropy_nats(m: &MemberMatrix, i: usize, j: usize) -> f64 {
    row_entropy_nats(m.row(i)) + row_entropy_nats(m.row(j))
}

fn apply_rotation(m: &mut MemberMatrix, i: usize, j: usize, c: f64, s: f64, phase: Complex64) {
    let d = m.d;
    for col in 0..d {
        let a = m.rows[i * d + col];
        let b = m.rows[j * d + col];
        m.rows[i * d + col] = c * a + s * phase * b;
        m.rows[j * d + col] = -s * phase.conj() * a + c * b;
    }
}

/// Brute-force convex roof of Eq.-(4) type: minimize the average entropy over
/// decompositions of ρ with `k` members.
pub fn eof_convex_roof(
    rho: &PairDensityMatrix,
    settings: &RoofSettings,
) -> Result<RoofResult> {
    let d = rho.dim();
    if d > ROOF_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: d,
            max: ROOF_MAX_DIM,
        });
    }
    let (eigs, vecs) = linalg::hermitian_eigen(rho.entries(), d);
    let kept: Vec<usize> = (0..d).filter(|&m| eigs[m] > RANK_TOL).collect();
    let rank = kept.len();
    let k = settings.members.unwrap_or(rank + 2);
    if k < rank {
        return Err(Error::Rank { members: k, rank });
    }

    // Base decomposition: rows are sqrt(lambda_m) v_m, padded to K rows.
    let mut base_rows = vec![Complex64::new(0.0, 0.0); k * d];
    for (row, &m) in kept.iter().enumerate() {
        let w = eigs[m].sqrt();
        for i in 0..d {
            base_rows[row * d + i] = w * vecs[i * d + m];
        }
    }

    let mut best_nats = f64::INFINITY;
    let mut best_rows: Vec<Complex64> = base_rows.clone();
    let mut stale = 0usize;
    let mut restarts_used = 0usize;
    let mut converged = false;

    for restart in 0..settings.restarts {
        restarts_used = restart + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_sample_seed(settings.seed, restart as u64));
        let mut m = MemberMatrix {
            k,
            d,
            rows: base_rows.clone(),
        };
        // Random warm start: a few random rotations scramble the identity
        // isometry while keeping rho = V†V exact.
        for _ in 0..2 * k {
            let i = (rng.next_u64() % k as u64) as usize;
            let mut j = (rng.next_u64() % k as u64) as usize;
            if i == j {
                j = (j + 1) % k;
            }
            let (lo, hi) = (i.min(j), i.max(j));
            let theta: f64 = StandardNormal.sample(&mut rng);
            let (s, c) = theta.sin_cos();
            let im: f64 = StandardNormal.sample(&mut rng);
            let phase = Complex64::from_polar(1.0, im);
            apply_rotation(&mut m, lo, hi, c, s, phase);
        }

        let mut step = INITIAL_STEP;
        let mut iters = 0usize;
        while step > MIN_STEP && iters < settings.iters {
            let mut gain = 0.0f64;
            let (sin_t, cos_t) = step.sin_cos();
            for i in 0..k {
                for j in (i + 1)..k {
                    for phase in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                        for sgn in [1.0f64, -1.0] {
                            // Only the two touched rows change, so the accept
                            // test needs just their entropy contribution.
                            let before = pair_entropy_nats(&m, i, j);
                            apply_rotation(&mut m, i, j, cos_t, sgn * sin_t, phase);
                            let after = pair_entropy_nats(&m, i, j);
                            if after < before - 1e-15 {
                                gain += before - after;
                            } else {
                                // Undo: the inverse rotation.
                                apply_rotation(&mut m, i, j, cos_t, -sgn * sin_t, phase);
                            }
                        }
                    }
                }
            }
            // Sufficient decrease: a pass that gains less than O(step^2) is
            // grazing the optimum, so the step shrinks; this keeps the pass
            // budget from leaking away on last-digit improvements.
            if gain < SUFFICIENT_DECREASE * step * step {
                step *= 0.5;
            }
            iters += 1;
        }
        let current = m.avg_entropy_nats();
        debug_assert!(reconstruction_error(&m, rho) < 1e-10, "decomposition drifted off rho");

        let improvement = best_nats - current;
        if current < best_nats {
            best_nats = current;
            best_rows = m.rows;
        }
        if improvement < RESTART_IMPROVEMENT_TOL {
            stale += 1;
            if stale >= CONVERGED_RESTARTS {
                converged = true;
                break;
            }
        } else {
            stale = 0;
        }
    }

    let best = MemberMatrix {
        k,
        d,
        rows: best_rows,
    };
    debug_assert!(reconstruction_error(&best, rho) < 1e-10);
    let decomposition = to_sample(&best, rho, settings.base);
    Ok(RoofResult {
        eof_estimate: best_nats * settings.base.scale(),
        best_decomposition: decomposition,
        restarts_used,
        converged,
    })
}

/// Entrywise |Σₖ Vₖᵢ V̄ₖⱼ − ρᵢⱼ| maximum.
fn reconstruction_error(m: &MemberMatrix, rho: &PairDensityMatrix) -> f64 {
    let d = m.d;
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..m.k {
                sum += m.rows[k * d + i] * m.rows[k * d + j].conj();
            }
            worst = worst.max((sum - rho.entry(i, j)).norm());
        }
    }
    worst
}

fn to_sample(m: &MemberMatrix, rho: &PairDensityMatrix, base: LogBase) -> EnsembleSample {
    let mut weights = Vec::new();
    let mut states = Vec::new();
    for k in 0..m.k {
        let row = m.row(k);
        let p: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        if p < 1e-14 {
            continue;
        }
        let inv = 1.0 / p.sqrt();
        let coeffs: Vec<Complex64> = row.iter().map(|z| z * inv).collect();
        weights.push(p);
        states.push(PurePairState::new(m.d, &coeffs).expect("normalized row"));
    }
    // Weights sum to Tr(rho) = 1 up to round-off; renormalize the residue of
    // any dropped near-zero rows.
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let avg_entropy = weights
        .iter()
        .zip(&states)
        .map(|(w, psi)| w * shannon_entropy(&psi.weights(), base))
        .sum();
    EnsembleSample {
        dim: m.d,
        weights,
        states,
        rho: rho.clone(),
        avg_entropy,
    }
}

/// Cross-module certification report.
#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub eof_estimate: f64,
    pub f: f64,
    pub g: f64,
    pub s: f64,
    pub gap_f: f64,
    pub gap_g: f64,
    pub gap_s: f64,
    pub log_base: LogBase,
}

/// Certification slack: the roof estimate (an upper bound on the EOF) must
/// dominate every lower bound up to this much search noise.
pub const CERTIFY_SLACK: f64 = 1e-6;

/// Run the roof search and check it dominates max{F, G, s}.
pub fn certify_bounds(rho: &PairDensityMatrix, settings: &RoofSettings) -> Result<CertifyReport> {
    let roof = eof_convex_roof(rho, settings)?;
    let bounds = best_bound(rho, settings.base)?;
    let eof = roof.eof_estimate;
    if eof < bounds.best - CERTIFY_SLACK {
        return Err(Error::Certification(format!(
            "roof estimate {eof} fell below best lower bound {}",
            bounds.best
        )));
    }
    Ok(CertifyReport {
        eof_estimate: eof,
        f: bounds.f,
        g: bounds.g,
        s: bounds.s,
        gap_f: eof - bounds.f,
        gap_g: eof - bounds.g,
        gap_s: eof - bounds.s,
        log_base: settings.base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::binary_entropy;
    use crate::measures::entropy_pure;

    const BITS: LogBase = LogBase::Two;

    fn diag2(p: f64, off: f64) -> PairDensityMatrix {
        PairDensityMatrix::new(
            2,
            &[
                Complex64::new(p, 0.0),
                Complex64::new(off, 0.0),
                Complex64::new(off, 0.0),
                Complex64::new(1.0 - p, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn diagonal_state_has_zero_roof() {
        let rho = diag2(0.6, 0.0);
        let out = eof_convex_roof(&rho, &RoofSettings::default()).unwrap();
        assert!(out.eof_estimate < 1e-9, "{}", out.eof_estimate);
    }

    #[test]
    fn pure_state_roof_is_its_entropy() {
        let psi = PurePairState::from_real(&[0.8f64.sqrt(), 0.2f64.sqrt()]).unwrap();
        let rho = PairDensityMatrix::from_pure(&psi);
        let out = eof_convex_roof(&rho, &RoofSettings::default()).unwrap();
        let s = entropy_pure(&psi, BITS);
        assert!((out.eof_estimate - s).abs() < 1e-6, "{} vs {s}", out.eof_estimate);
    }

    #[test]
    fn wootters_case_d2() {
        // diag(1/2, 1/2) with rho_12 = 0.3: EOF = H2(0.9).
        let rho = diag2(0.5, 0.3);
        let out = eof_convex_roof(&rho, &RoofSettings::default()).unwrap();
        let expect = binary_entropy(0.9, BITS).unwrap();
        assert!(
            (out.eof_estimate - expect).abs() < 1e-4,
            "{} vs {expect}",
            out.eof_estimate
        );
        // Roof approaches from above.
        assert!(out.eof_estimate >= expect - 1e-9);
        // The reported decomposition reproduces the estimate.
        assert!((out.best_decomposition.avg_entropy - out.eof_estimate).abs() < 1e-12);
    }

    #[test]
    fn rank_error_and_dimension_cap() {
        let rho = diag2(0.5, 0.3);
        let mut s = RoofSettings::default();
        s.members = Some(1);
        assert!(matches!(
            eof_convex_roof(&rho, &s),
            Err(Error::Rank { .. })
        ));

        let big = PairDensityMatrix::from_pure(
            &PurePairState::from_real(&[1.0, 1.0, 1.0, 1.0, 1.0]).unwrap(),
        );
        assert!(matches!(
            eof_convex_roof(&big, &RoofSettings::default()),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn certify_small_states() {
        let rho = diag2(0.5, 0.25);
        let rep = certify_bounds(&rho, &RoofSettings::default()).unwrap();
        assert!(rep.gap_f >= -CERTIFY_SLACK);
        assert!(rep.gap_g >= -CERTIFY_SLACK);
        assert!(rep.gap_s >= -CERTIFY_SLACK);
        // d=2: F is exact, so its gap is the search error only.
        assert!(rep.gap_f.abs() < 1e-4, "gap_f = {}", rep.gap_f);
    }

    #[test]
    fn diagonal_certify_has_zero_gaps() {
        let rho = diag2(0.7, 0.0);
        let rep = certify_bounds(&rho, &RoofSettings::default()).unwrap();
        assert!(rep.eof_estimate.abs() < 1e-9);
        assert!(rep.gap_f.abs() < 1e-9);
    }
}
