//! Lower bounds on the entanglement of formation for pair states.
//!
//! Three bounds are provided:
//!
//! - `F`: built from the first row of the Γ-relabeled density matrix through
//!   α₁² = ½(1+√(1−4|x|²)), αᵢ² = |xᵢ|²/α₁²; convex, hence a rigorous bound.
//! - `G`: same construction row by row, α₁² from the + branch and the other
//!   rows from the − branch; d(d−1)/2 variables, stochastically validated.
//! - `s(N)`: the convex envelope of pure-state entropy at fixed negativity,
//!   piecewise in N with the γ(N) mixing weight and a linear tail.
//!
//! The best estimate for a state is max{F, G, s}.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::negativity;
use crate::pairstate::{relabel_by_gamma, PairDensityMatrix, PurePairState};
use crate::{xlogx, LogBase};

/// |x|² may exceed ¼ by at most this much before input is deemed corrupted.
pub const NORM_SQ_SLACK: f64 = 1e-12;

/// The off-diagonal first row of a Γ-relabeled density matrix.
///
/// For any valid pair density matrix |x|² ≤ ¼ (Cauchy–Schwarz against the
/// diagonal), so a larger norm signals corrupted input.
#[derive(Clone, Debug)]
pub struct FirstRowVector {
    dim: usize,
    components: Vec<Complex64>,
    norm_sq: f64,
}

impl FirstRowVector {
    fn build(dim: usize, components: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = components.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq > 0.25 + NORM_SQ_SLACK {
            return Err(Error::domain(format!(
                "first-row norm^2 {norm_sq} exceeds 1/4; input is not a valid pair density matrix"
            )));
        }
        Ok(Self {
            dim,
            components,
            norm_sq: norm_sq.min(0.25),
        })
    }

    /// Extract from a density matrix (relabels by Γ internally).
    pub fn from_density(rho: &PairDensityMatrix) -> Result<Self> {
        let (sorted, _) = relabel_by_gamma(rho);
        let d = sorted.dim();
        let components: Vec<Complex64> = (1..d).map(|j| sorted.entry(0, j)).collect();
        Self::build(d, components)
    }

    /// Extract from a pure state without materializing its density matrix:
    /// row i of ρ_ψ is cᵢ c̄ⱼ, and the Γ-largest row is the one with the
    /// largest |cᵢ|²(1−|cᵢ|²).
    pub fn from_pure(psi: &PurePairState) -> Result<Self> {
        let w = psi.weights();
        let gamma_sq: Vec<f64> = w.iter().map(|&wi| wi * (1.0 - wi)).collect();
        let mut order: Vec<usize> = (0..psi.dim()).collect();
        order.sort_by(|&a, &b| gamma_sq[b].partial_cmp(&gamma_sq[a]).unwrap().then(a.cmp(&b)));
        let c = psi.coeffs();
        let lead = order[0];
        let components: Vec<Complex64> = order[1..]
            .iter()
            .map(|&j| c[lead] * c[j].conj())
            .collect();
        Self::build(psi.dim(), components)
    }

    /// Build from real moduli (used by the convexity checks, where x ranges
    /// over the abstract domain {xᵢ ≥ 0, |x|² ≤ ¼}).
    pub fn from_moduli(moduli: &[f64]) -> Result<Self> {
        if moduli.iter().any(|&m| m < 0.0) {
            return Err(Error::domain("moduli must be non-negative"));
        }
        let components = moduli.iter().map(|&m| Complex64::new(m, 0.0)).collect();
        Self::build(moduli.len() + 1, components)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }
}

/// The α² spectrum entering F or G. In F-mode it is a probability vector;
/// in G-mode the entries are independent and need not sum to one.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaSpectrum {
    pub alphas_sq: Vec<f64>,
}

impl AlphaSpectrum {
    /// F-mode: α₁² = ½(1+√(1−4|x|²)), αᵢ² = |xᵢ|²/α₁².
    pub fn f_mode(x: &FirstRowVector) -> Self {
        let q = (1.0 - 4.0 * x.norm_sq).max(0.0).sqrt();
        let a1 = 0.5 * (1.0 + q);
        let mut alphas_sq = Vec::with_capacity(x.dim);
        alphas_sq.push(a1);
        for c in &x.components {
            alphas_sq.push(c.norm_sqr() / a1);
        }
        Self { alphas_sq }
    }

    /// G-mode: the + branch for the leading row, the − branch for the rest,
    /// evaluated as 2|xᵢ|²/(1+√(1−4|xᵢ|²)) to keep precision for small rows.
    pub fn g_mode(row_norms_sq: &[f64]) -> Result<Self> {
        let mut alphas_sq = Vec::with_capacity(row_norms_sq.len());
        for (i, &raw) in row_norms_sq.iter().enumerate() {
            if raw > 0.25 + NORM_SQ_SLACK {
                return Err(Error::domain(format!(
                    "row norm^2 {raw} exceeds 1/4; input is not a valid pair density matrix"
                )));
            }
            let n2 = raw.min(0.25);
            let q = (1.0 - 4.0 * n2).max(0.0).sqrt();
            alphas_sq.push(if i == 0 {
                0.5 * (1.0 + q)
            } else {
                2.0 * n2 / (1.0 + q)
            });
        }
        Ok(Self { alphas_sq })
    }

    /// −Σ αᵢ² log αᵢ² in the requested base.
    pub fn entropy(&self, base: LogBase) -> f64 {
        -self.alphas_sq.iter().map(|&a| xlogx(a)).sum::<f64>() * base.scale()
    }
}

/// The Theorem's bound: E_f(ρ) ≥ F(x) with x the relabeled first row.
pub fn bound_f(rho: &PairDensityMatrix, base: LogBase) -> Result<f64> {
    let x = FirstRowVector::from_density(rho)?;
    Ok(bound_f_from_x(&x, base))
}

/// F evaluated directly on a first-row vector.
pub fn bound_f_from_x(x: &FirstRowVector, base: LogBase) -> f64 {
    AlphaSpectrum::f_mode(x).entropy(base)
}

/// The all-rows bound G, evaluated in the Γ-relabeled basis. Its value is
/// relabeling-invariant (a symmetric function of the row data); the
/// relabeled evaluation just fixes a deterministic order.
pub fn bound_g(rho: &PairDensityMatrix, base: LogBase) -> Result<f64> {
    let (sorted, _) = relabel_by_gamma(rho);
    let d = sorted.dim();
    let row_norms_sq: Vec<f64> = (0..d).map(|i| sorted.row_gamma_sq(i)).collect();
    Ok(AlphaSpectrum::g_mode(&row_norms_sq)?.entropy(base))
}

/// γ(N) = (1/d²)[√(2N+1) + √((d−1)(d−2N−1))]².
pub fn gamma_of_n(n: f64, d: usize) -> Result<f64> {
    check_negativity_range(n, d)?;
    let n = n.clamp(0.0, (d as f64 - 1.0) / 2.0);
    let d_f = d as f64;
    let first = (2.0 * n + 1.0).sqrt();
    let second = ((d_f - 1.0) * (d_f - 2.0 * n - 1.0)).max(0.0).sqrt();
    Ok((first + second).powi(2) / (d_f * d_f))
}

fn check_negativity_range(n: f64, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d, min: 2 });
    }
    let max = (d as f64 - 1.0) / 2.0;
    if !(-1e-9..=max + 1e-9).contains(&n) {
        return Err(Error::domain(format!(
            "negativity {n} outside [0, {max}] for d={d}"
        )));
    }
    Ok(())
}

/// Binary entropy H₂(p) = −p log p − (1−p) log(1−p).
pub fn binary_entropy(p: f64, base: LogBase) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::domain(format!("binary entropy argument {p} outside [0,1]")));
    }
    let p = p.clamp(0.0, 1.0);
    Ok(-(xlogx(p) + xlogx(1.0 - p)) * base.scale())
}

/// The literature bound s(N): H₂(γ) + (1−γ)log(d−1) up to the breakpoint
/// N* = 3/2 − 2/d, then linear in N up to log d at maximal negativity.
///
/// For d=2 the breakpoint coincides with the maximum, so only the first
/// branch applies (the second branch's d−2 denominator vanishes).
pub fn bound_s(n: f64, d: usize, base: LogBase) -> Result<f64> {
    check_negativity_range(n, d)?;
    let n = n.clamp(0.0, (d as f64 - 1.0) / 2.0);
    let d_f = d as f64;
    let n_star = 1.5 - 2.0 / d_f;
    if d == 2 || n <= n_star {
        let g = gamma_of_n(n, d)?;
        Ok(binary_entropy(g, base)? + (1.0 - g) * base.log(d_f - 1.0))
    } else {
        Ok((2.0 * n + 1.0 - d_f) / (d_f - 2.0) * base.log(d_f - 1.0) + base.log(d_f))
    }
}

/// All three bounds of one state plus their maximum.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub f: f64,
    pub g: f64,
    pub s: f64,
    pub best: f64,
    pub negativity: f64,
    pub log_base: LogBase,
}

/// Evaluate F, G and s(N(ρ)) and select the best bound.
pub fn best_bound(rho: &PairDensityMatrix, base: LogBase) -> Result<BoundReport> {
    let f = bound_f(rho, base)?;
    let g = bound_g(rho, base)?;
    let n = negativity(rho);
    let s = bound_s(n, rho.dim(), base)?;
    Ok(BoundReport {
        f,
        g,
        s,
        best: f.max(g).max(s),
        negativity: n,
        log_base: base,
    })
}

/// Pure-state entropy of the F construction applied to the virtual density
/// matrix of ψ; used where materializing ρ would be wasteful (large d).
pub fn bound_f_pure(psi: &PurePairState, base: LogBase) -> Result<f64> {
    let x = FirstRowVector::from_pure(psi)?;
    Ok(bound_f_from_x(&x, base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::entropy_pure;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pure(coeffs: &[f64]) -> PurePairState {
        PurePairState::from_real(coeffs).unwrap()
    }

    fn diag3() -> PairDensityMatrix {
        let mut e = vec![Complex64::new(0.0, 0.0); 9];
        e[0] = Complex64::new(0.5, 0.0);
        e[4] = Complex64::new(0.3, 0.0);
        e[8] = Complex64::new(0.2, 0.0);
        PairDensityMatrix::new(3, &e).unwrap()
    }

    #[test]
    fn f_examples() {
        assert_eq!(bound_f(&diag3(), LogBase::Two).unwrap(), 0.0);

        // d=2 pure c=(sqrt .8, sqrt .2): F equals the exact entropy.
        let rho = PairDensityMatrix::from_pure(&pure(&[0.8f64.sqrt(), 0.2f64.sqrt()]));
        let f = bound_f(&rho, LogBase::Two).unwrap();
        assert!((f - 0.7219280948873623).abs() < 1e-12);

        // d=3 maximally entangled: alpha^2 = (2/3, 1/6, 1/6).
        let rho = PairDensityMatrix::from_pure(&pure(&[1.0, 1.0, 1.0]));
        let f = bound_f(&rho, LogBase::Two).unwrap();
        assert!((f - 1.2516291673878228).abs() < 1e-12);
        assert!(f < 3f64.log2());
    }

    #[test]
    fn g_examples() {
        assert_eq!(bound_g(&diag3(), LogBase::Two).unwrap(), 0.0);

        // d=3 maximally entangled: alpha^2 = (2/3, 1/3, 1/3).
        let rho = PairDensityMatrix::from_pure(&pure(&[1.0, 1.0, 1.0]));
        let g = bound_g(&rho, LogBase::Two).unwrap();
        assert!((g - 1.4466166676282082).abs() < 1e-12);

        // d=2: both rows carry the same data, so G = F.
        let rho = PairDensityMatrix::from_pure(&pure(&[0.8f64.sqrt(), 0.2f64.sqrt()]));
        let g = bound_g(&rho, LogBase::Two).unwrap();
        let f = bound_f(&rho, LogBase::Two).unwrap();
        assert!((g - f).abs() < 1e-12);
        assert!((g - 0.7219280948873623).abs() < 1e-12);
    }

    #[test]
    fn gamma_examples() {
        assert!((gamma_of_n(0.0, 5).unwrap() - 1.0).abs() < 1e-12);
        assert!((gamma_of_n(5.0 / 6.0, 3).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((gamma_of_n(0.5, 2).unwrap() - 0.5).abs() < 1e-12);
        assert!(gamma_of_n(2.0, 3).is_err());
        assert!(gamma_of_n(-0.1, 3).is_err());
    }

    #[test]
    fn s_examples() {
        assert_eq!(bound_s(0.0, 4, LogBase::Two).unwrap(), 0.0);
        // d=3, N=1: second branch gives log2(3).
        let s = bound_s(1.0, 3, LogBase::Two).unwrap();
        assert!((s - 3f64.log2()).abs() < 1e-12);
        // Breakpoint d=3: both branches agree at ~1.2516292 bits.
        let n_star = 1.5 - 2.0 / 3.0;
        let s = bound_s(n_star, 3, LogBase::Two).unwrap();
        assert!((s - 1.2516291673878228).abs() < 1e-9);
        // Endpoint: s((d-1)/2) = log d.
        for d in [3usize, 5, 17] {
            let s = bound_s((d as f64 - 1.0) / 2.0, d, LogBase::Two).unwrap();
            assert!((s - (d as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0, LogBase::Two).unwrap(), 0.0);
        assert!((binary_entropy(0.5, LogBase::Two).unwrap() - 1.0).abs() < 1e-12);
        assert!((binary_entropy(0.9, LogBase::Two).unwrap() - 0.4689955935892812).abs() < 1e-12);
        assert!(binary_entropy(1.1, LogBase::Two).is_err());
    }

    #[test]
    fn best_bound_examples() {
        let rep = best_bound(&diag3(), LogBase::Two).unwrap();
        assert_eq!((rep.f, rep.g, rep.s, rep.best), (0.0, 0.0, 0.0, 0.0));

        // d=3 maximally entangled: s = log2(3) beats F and G.
        let rho = PairDensityMatrix::from_pure(&pure(&[1.0, 1.0, 1.0]));
        let rep = best_bound(&rho, LogBase::Two).unwrap();
        assert!((rep.best - 3f64.log2()).abs() < 1e-12);
        assert!((rep.best - rep.s).abs() < 1e-15);
        assert!(rep.f < rep.s && rep.g < rep.s);
        assert!((rep.negativity - 1.0).abs() < 1e-12);

        // d=2: F attains the best value (s ties with F identically there).
        let rho = PairDensityMatrix::new(
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        let rep = best_bound(&rho, LogBase::Two).unwrap();
        let wootters = binary_entropy(0.5 * (1.0 + (1.0 - 0.36f64).sqrt()), LogBase::Two).unwrap();
        assert!((rep.f - wootters).abs() < 1e-12);
        assert!((rep.best - rep.f).abs() < 1e-15);
    }

    #[test]
    fn d2_s_equals_f_for_all_first_rows() {
        // For d=2 the s bound coincides with F along the whole sweep.
        for k in 0..=100 {
            let x = 0.5 * k as f64 / 100.0;
            let fr = FirstRowVector::from_moduli(&[x]).unwrap();
            let f = bound_f_from_x(&fr, LogBase::Two);
            let s = bound_s(x, 2, LogBase::Two).unwrap();
            assert!((f - s).abs() < 1e-12, "x={x}: F={f} s={s}");
        }
    }

    #[test]
    fn f_alphas_normalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 2..=10 {
            for _ in 0..100 {
                let c: Vec<Complex64> = (0..d)
                    .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .collect();
                let psi = PurePairState::new(d, &c).unwrap();
                let x = FirstRowVector::from_pure(&psi).unwrap();
                let total: f64 = AlphaSpectrum::f_mode(&x).alphas_sq.iter().sum();
                assert!((total - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn f_and_g_bounded_by_pure_entropy() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for d in 2..=10 {
            for _ in 0..200 {
                let w: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
                let total: f64 = w.iter().sum();
                let c: Vec<f64> = w.iter().map(|&x| (x / total).sqrt()).collect();
                let psi = PurePairState::from_real(&c).unwrap();
                let s = entropy_pure(&psi, LogBase::Two);
                let rho = PairDensityMatrix::from_pure(&psi);
                let f = bound_f(&rho, LogBase::Two).unwrap();
                let g = bound_g(&rho, LogBase::Two).unwrap();
                assert!(f <= s + 1e-9, "F={f} > S={s} at d={d}");
                assert!(g <= s + 1e-9, "G={g} > S={s} at d={d}");
            }
        }
    }

    #[test]
    fn g_is_relabeling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let w: Vec<f64> = (0..4).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let total: f64 = w.iter().sum();
            let c: Vec<f64> = w.iter().map(|&x| (x / total).sqrt()).collect();
            let rho = PairDensityMatrix::from_pure(&PurePairState::from_real(&c).unwrap());
            let g0 = bound_g(&rho, LogBase::Two).unwrap();
            // Apply an arbitrary permutation before evaluating.
            let perm = vec![2, 0, 3, 1];
            let g1 = bound_g(&rho.permuted(&perm), LogBase::Two).unwrap();
            assert!((g0 - g1).abs() < 1e-12);
        }
    }

    #[test]
    fn f_insensitive_to_gamma_ties() {
        // mu^2 = (0.5, 0.25, 0.25): rows 1 and 2 tie in Gamma; swapping them
        // must not change F.
        let psi = pure(&[0.5f64.sqrt(), 0.25f64.sqrt(), 0.25f64.sqrt()]);
        let rho = PairDensityMatrix::from_pure(&psi);
        let f0 = bound_f(&rho, LogBase::Two).unwrap();
        let f1 = bound_f(&rho.permuted(&[0, 2, 1]), LogBase::Two).unwrap();
        assert!((f0 - f1).abs() < 1e-14);
    }

    #[test]
    fn first_row_rejects_oversized_norm() {
        assert!(FirstRowVector::from_moduli(&[0.4, 0.4]).is_err());
        assert!(FirstRowVector::from_moduli(&[0.5]).is_ok());
    }
}
