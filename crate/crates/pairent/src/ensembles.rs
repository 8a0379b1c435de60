//! Random pure-state decompositions and the stochastic bound experiments.
//!
//! Weights and squared coefficients are both drawn from the flat Dirichlet
//! distribution on the probability simplex (normalized unit exponentials);
//! coefficients are the non-negative square roots. Per-sample RNG streams are
//! derived from the experiment seed with a splitmix-style hash, so results do
//! not depend on scheduling or thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{bound_f, bound_g, bound_s};
use crate::measures::negativity;
use crate::pairstate::{PairDensityMatrix, PurePairState};
use crate::{shannon_entropy, LogBase};

/// Bisector-violation tolerance: a bound beats the average entropy only if it
/// exceeds it by more than this.
pub const VIOLATION_TOL: f64 = 1e-9;

/// How many decomposition members each sample uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KPolicy {
    /// K drawn uniformly from {d, ..., 2d} per sample (default).
    DimTo2Dim,
    /// Fixed K for every sample.
    Fixed(usize),
}

impl Default for KPolicy {
    fn default() -> Self {
        KPolicy::DimTo2Dim
    }
}

/// One random decomposition: weights, members, their mixture and its average
/// entropy.
#[derive(Clone, Debug)]
pub struct EnsembleSample {
    pub dim: usize,
    pub weights: Vec<f64>,
    pub states: Vec<PurePairState>,
    pub rho: PairDensityMatrix,
    pub avg_entropy: f64,
}

impl EnsembleSample {
    pub fn members(&self) -> usize {
        self.weights.len()
    }
}

/// splitmix64 finalizer; the per-sample stream is seeded with
/// `splitmix64(seed ^ splitmix64(index))`.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the RNG seed for one sample of an experiment.
pub fn derive_sample_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

fn simplex_point(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // Unit exponentials normalized to the simplex = flat Dirichlet.
    let mut draws: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = draws.iter().sum();
    for d in &mut draws {
        *d /= total;
    }
    draws
}

fn sample_with_rng(d: usize, k: usize, rng: &mut ChaCha8Rng, base: LogBase) -> EnsembleSample {
    let weights = simplex_point(k, rng);
    let states: Vec<PurePairState> = (0..k)
        .map(|_| {
            let sq = simplex_point(d, rng);
            let coeffs: Vec<f64> = sq.iter().map(|&w| w.sqrt()).collect();
            PurePairState::from_real(&coeffs).expect("simplex point is normalized")
        })
        .collect();
    let rho = PairDensityMatrix::mix(&weights, &states).expect("mixture is valid by construction");
    let avg_entropy = weights
        .iter()
        .zip(&states)
        .map(|(w, psi)| w * shannon_entropy(&psi.weights(), base))
        .sum();
    EnsembleSample {
        dim: d,
        weights,
        states,
        rho,
        avg_entropy,
    }
}

/// Draw one decomposition with `k` members, deterministically from `seed`.
pub fn sample_ensemble(d: usize, k: usize, seed: u64, base: LogBase) -> EnsembleSample {
    assert!(d >= 2, "dimension must be at least 2");
    assert!(k >= 1, "at least one member required");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with_rng(d, k, &mut rng, base)
}

/// Scatter data of one sample.
#[derive(Clone, Debug, Serialize)]
pub struct ScatterRecord {
    pub dim: usize,
    pub seed: u64,
    pub members: usize,
    pub negativity: f64,
    pub avg_entropy: f64,
    pub f: f64,
    pub g: f64,
    pub s: f64,
    pub best: f64,
}

impl ScatterRecord {
    pub const CSV_HEADER: &'static str = "dim,seed,K,N,avg_entropy,F,G,s,best";

    /// One CSV row, decimal point, 17 significant digits.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.dim,
            self.seed,
            self.members,
            self.negativity,
            self.avg_entropy,
            self.f,
            self.g,
            self.s,
            self.best
        )
    }
}

fn scatter_one(d: usize, policy: KPolicy, seed: u64, index: u64, base: LogBase) -> ScatterRecord {
    let sample_seed = derive_sample_seed(seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
    let k = match policy {
        KPolicy::DimTo2Dim => rng.random_range(d..=2 * d),
        KPolicy::Fixed(k) => k,
    };
    let sample = sample_with_rng(d, k, &mut rng, base);
    let f = bound_f(&sample.rho, base).expect("valid by construction");
    let g = bound_g(&sample.rho, base).expect("valid by construction");
    let n = negativity(&sample.rho);
    let s = bound_s(n, d, base).expect("negativity of a valid state is in range");
    ScatterRecord {
        dim: d,
        seed: sample_seed,
        members: k,
        negativity: n,
        avg_entropy: sample.avg_entropy,
        f,
        g,
        s,
        best: f.max(g).max(s),
    }
}

fn scatter_records(
    d: usize,
    num_samples: usize,
    policy: KPolicy,
    seed: u64,
    base: LogBase,
) -> Vec<ScatterRecord> {
    let run = |i: usize| scatter_one(d, policy, seed, i as u64, base);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..num_samples).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..num_samples).map(run).collect()
    }
}

/// Result of the bisector experiment: every record plus the count of samples
/// whose G (stochastic claim) or F (theorem, a bug if nonzero) exceeded the
/// decomposition's average entropy.
#[derive(Clone, Debug, Serialize)]
pub struct BisectorOutcome {
    pub dim: usize,
    pub seed: u64,
    pub records: Vec<ScatterRecord>,
    pub g_violations: usize,
    pub f_violations: usize,
}

/// Sample `num_samples` random decompositions and count bound violations
/// against the average entropy.
pub fn run_bisector_experiment(
    d: usize,
    num_samples: usize,
    policy: KPolicy,
    seed: u64,
    base: LogBase,
) -> BisectorOutcome {
    let records = scatter_records(d, num_samples, policy, seed, base);
    let g_violations = records
        .iter()
        .filter(|r| r.g > r.avg_entropy + VIOLATION_TOL)
        .count();
    let f_violations = records
        .iter()
        .filter(|r| r.f > r.avg_entropy + VIOLATION_TOL)
        .count();
    debug_assert_eq!(f_violations, 0, "theorem violated: F above average entropy");
    BisectorOutcome {
        dim: d,
        seed,
        records,
        g_violations,
        f_violations,
    }
}

/// Result of the bound-comparison experiment: records sorted by negativity,
/// the s(N) reference curve, attainment fractions for the maximum, and the
/// head-to-head G vs F majority.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonOutcome {
    pub dim: usize,
    pub seed: u64,
    pub records: Vec<ScatterRecord>,
    /// (N, s(N)) on a uniform negativity grid, for reference plotting.
    pub s_curve: Vec<(f64, f64)>,
    pub f_attains_best: f64,
    pub g_attains_best: f64,
    pub s_attains_best: f64,
    /// Fraction of samples with G strictly above F.
    pub g_exceeds_f: f64,
    pub g_violations: usize,
    pub f_violations: usize,
}

/// Points on the s(N) reference curve.
pub const S_CURVE_POINTS: usize = 200;

/// Sample decompositions, evaluate all three bounds per state and report the
/// comparison statistics, with records ordered by negativity.
pub fn run_comparison_experiment(d: usize, num_samples: usize, seed: u64, base: LogBase) -> ComparisonOutcome {
    let records = scatter_records(d, num_samples, KPolicy::DimTo2Dim, seed, base);
    comparison_from_records(d, seed, records, base)
}

/// Assemble the comparison statistics over already-sampled records.
pub fn comparison_from_records(
    d: usize,
    seed: u64,
    mut records: Vec<ScatterRecord>,
    base: LogBase,
) -> ComparisonOutcome {
    let g_violations = records
        .iter()
        .filter(|r| r.g > r.avg_entropy + VIOLATION_TOL)
        .count();
    let f_violations = records
        .iter()
        .filter(|r| r.f > r.avg_entropy + VIOLATION_TOL)
        .count();
    let total = records.len().max(1) as f64;
    let tie = 1e-12;
    let f_attains = records.iter().filter(|r| r.f >= r.best - tie).count() as f64 / total;
    let g_attains = records.iter().filter(|r| r.g >= r.best - tie).count() as f64 / total;
    let s_attains = records.iter().filter(|r| r.s >= r.best - tie).count() as f64 / total;
    let g_over_f = records.iter().filter(|r| r.g > r.f).count() as f64 / total;
    records.sort_by(|a, b| a.negativity.partial_cmp(&b.negativity).unwrap());

    let n_max = (d as f64 - 1.0) / 2.0;
    let s_curve: Vec<(f64, f64)> = (0..S_CURVE_POINTS)
        .map(|i| {
            let n = n_max * i as f64 / (S_CURVE_POINTS - 1) as f64;
            let s = bound_s(n, d, base).expect("grid point in range");
            (n, s)
        })
        .collect();

    ComparisonOutcome {
        dim: d,
        seed,
        records,
        s_curve,
        f_attains_best: f_attains,
        g_attains_best: g_attains,
        s_attains_best: s_attains,
        g_exceeds_f: g_over_f,
        g_violations,
        f_violations,
    }
}
