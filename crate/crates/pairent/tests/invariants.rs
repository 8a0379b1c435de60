//! Cross-module properties: Schmidt recovery against density-matrix data,
//! convexity of F under random mixing, the F = ΣFₖ split, and structural
//! properties of the spectra.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pairent::bounds::{bound_f_from_x, AlphaSpectrum, FirstRowVector};
use pairent::convexity::f_from_split;
use pairent::measures::entropy_pure;
use pairent::pairstate::{
    relabel_by_gamma, schmidt_from_pure, weight_from_coupling, PairDensityMatrix, PurePairState,
};
use pairent::{LogBase, shannon_entropy};

const BITS: LogBase = LogBase::Two;

fn random_real_pure(d: usize, rng: &mut ChaCha8Rng) -> PurePairState {
    let w: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    let coeffs: Vec<f64> = w.iter().map(|&x| (x / total).sqrt()).collect();
    PurePairState::from_real(&coeffs).unwrap()
}

fn random_complex_pure(d: usize, rng: &mut ChaCha8Rng) -> PurePairState {
    let c: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    PurePairState::new(d, &c).unwrap()
}

#[test]
fn first_row_recovers_weights_from_density_entries() {
    // mu_j^2 = |rho_1j|^2 / mu_1^2 with mu_1^2 taken from the coupling
    // inversion, for every state with a nonzero leading weight.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for d in 2..=8 {
        for _ in 0..200 {
            let psi = random_complex_pure(d, &mut rng);
            let rho = PairDensityMatrix::from_pure(&psi);
            let w = psi.weights();
            let gamma1_sq: f64 = rho.row_gamma_sq(0);
            if w[0] < 1e-3 {
                continue;
            }
            let sign = if w[0] > 0.5 { -1 } else { 1 };
            let mu1_sq = weight_from_coupling(gamma1_sq.sqrt(), sign).unwrap();
            assert!((mu1_sq - w[0]).abs() < 1e-9);
            for j in 1..d {
                let recovered = rho.entry(0, j).norm_sqr() / mu1_sq;
                assert!(
                    (recovered - w[j]).abs() < 1e-9,
                    "d={d} j={j}: {recovered} vs {}",
                    w[j]
                );
            }
        }
    }
}

#[test]
fn schmidt_weights_sum_to_one_dense_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in 2..=10 {
        for _ in 0..1000 {
            let psi = random_complex_pure(d, &mut rng);
            let p = schmidt_from_pure(&psi);
            let total: f64 = p.weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-10);
            // Couplings non-increasing and consistent with the weights.
            for pair in p.couplings.windows(2) {
                assert!(pair[0] >= pair[1] - 1e-12);
            }
            for (w, g) in p.weights.iter().zip(&p.couplings) {
                assert!((g * g - w * (1.0 - w)).abs() < 1e-10);
            }
            // Round trip through the sign rule.
            for k in 0..d {
                let back = weight_from_coupling(p.couplings[k], p.signs[k]).unwrap();
                assert!((back - p.weights[k]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn f_of_mixture_below_mixture_of_f() {
    // Convexity of F over first-row vectors: F(t x + (1-t) y) <= t F(x) +
    // (1-t) F(y) for random interior pairs in every tested dimension.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 2..=6 {
        for _ in 0..10_000 / 4 {
            let m = d - 1;
            let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
                loop {
                    let v: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * 0.5).collect();
                    if v.iter().map(|x| x * x).sum::<f64>() <= 0.25 {
                        return v;
                    }
                }
            };
            let x = draw(&mut rng);
            let y = draw(&mut rng);
            let t: f64 = rng.random();
            let mix: Vec<f64> = x
                .iter()
                .zip(&y)
                .map(|(a, b)| t * a + (1.0 - t) * b)
                .collect();
            let fx = bound_f_from_x(&FirstRowVector::from_moduli(&x).unwrap(), BITS);
            let fy = bound_f_from_x(&FirstRowVector::from_moduli(&y).unwrap(), BITS);
            let fm = bound_f_from_x(&FirstRowVector::from_moduli(&mix).unwrap(), BITS);
            assert!(
                fm <= t * fx + (1.0 - t) * fy + 1e-9,
                "convexity violated at d={d}: {fm} vs {}",
                t * fx + (1.0 - t) * fy
            );
        }
    }
}

#[test]
fn f_monotone_in_each_component() {
    // Finite-difference slope in every coordinate direction is non-negative.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = 1e-6;
    for d in 2..=6 {
        let m = d - 1;
        for _ in 0..500 {
            let v: Vec<f64> = loop {
                let v: Vec<f64> = (0..m).map(|_| 1e-3 + rng.random::<f64>() * 0.45).collect();
                if v.iter().map(|x| x * x).sum::<f64>() < 0.24 {
                    break v;
                }
            };
            let f0 = bound_f_from_x(&FirstRowVector::from_moduli(&v).unwrap(), BITS);
            for i in 0..m {
                let mut up = v.clone();
                up[i] += h;
                let f1 = bound_f_from_x(&FirstRowVector::from_moduli(&up).unwrap(), BITS);
                assert!(f1 >= f0 - 1e-8, "F decreased in component {i} at d={d}");
            }
        }
    }
}

#[test]
fn split_identity_on_random_interior_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in 2..=6 {
        let m = d - 1;
        for _ in 0..200 {
            let v: Vec<f64> = loop {
                let v: Vec<f64> = (0..m).map(|_| 0.01 + rng.random::<f64>() * 0.4).collect();
                let n2: f64 = v.iter().map(|x| x * x).sum();
                if n2 < 0.24 && n2 > 1e-4 {
                    break v;
                }
            };
            let whole = bound_f_from_x(&FirstRowVector::from_moduli(&v).unwrap(), BITS);
            let split = f_from_split(&v, BITS).unwrap();
            assert!((whole - split).abs() < 1e-9, "{whole} vs {split}");
        }
    }
}

proptest! {
    #[test]
    fn relabeling_preserves_spectrum_and_moduli(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 2 + (seed as usize % 5);
        let psi = random_complex_pure(d, &mut rng);
        let rho = PairDensityMatrix::from_pure(&psi);
        let (sorted, perm) = relabel_by_gamma(&rho);

        // Permutation is a bijection on 0..d.
        let mut seen = vec![false; d];
        for &p in &perm {
            prop_assert!(!seen[p]);
            seen[p] = true;
        }
        // Idempotent.
        let (_, perm2) = relabel_by_gamma(&sorted);
        prop_assert_eq!(perm2, (0..d).collect::<Vec<_>>());
        // Entry moduli multiset exactly preserved.
        let mut before: Vec<u64> = rho.entries().iter().map(|z| z.norm().to_bits()).collect();
        let mut after: Vec<u64> = sorted.entries().iter().map(|z| z.norm().to_bits()).collect();
        before.sort_unstable();
        after.sort_unstable();
        prop_assert_eq!(before, after);
        // Eigenvalues preserved to solver accuracy.
        let e1 = pairent::linalg::hermitian_eigenvalues(rho.entries(), d);
        let e2 = pairent::linalg::hermitian_eigenvalues(sorted.entries(), d);
        for (a, b) in e1.iter().zip(&e2) {
            prop_assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn f_mode_alphas_form_a_distribution(seed in 0u64..300) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 2 + (seed as usize % 7);
        let psi = random_real_pure(d, &mut rng);
        let x = FirstRowVector::from_pure(&psi).unwrap();
        let spectrum = AlphaSpectrum::f_mode(&x);
        let total: f64 = spectrum.alphas_sq.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for &a in &spectrum.alphas_sq {
            prop_assert!(a >= 0.0);
        }
        // Entropy of the alpha distribution never exceeds the state entropy.
        let f = spectrum.entropy(BITS);
        let s = entropy_pure(&psi, BITS);
        prop_assert!(f <= s + 1e-9);
    }

    #[test]
    fn pure_density_round_trip(seed in 0u64..300) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 2 + (seed as usize % 6);
        let psi = random_complex_pure(d, &mut rng);
        let rho = PairDensityMatrix::from_pure(&psi);
        // Diagonal holds the weights; entropy from the diagonal matches.
        let diag: Vec<f64> = (0..d).map(|i| rho.entry(i, i).re).collect();
        let s1 = shannon_entropy(&diag, BITS);
        let s2 = entropy_pure(&psi, BITS);
        prop_assert!((s1 - s2).abs() < 1e-10);
    }
}
