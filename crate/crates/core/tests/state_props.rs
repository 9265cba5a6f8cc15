mod common;

use common::c;
use gaussfock::symplectic::{is_symplectic, symplectic_spectrum};
use gaussfock::{Complex64, GaussianState, RealBlockOperator, TailModel};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

fn tail_strategy() -> impl Strategy<Value = TailModel> {
    prop_oneof![
        Just(TailModel::Identity),
        Just(TailModel::geometric(0.7, 0.5).unwrap()),
        Just(TailModel::power(1.0, 2.0).unwrap()),
    ]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn characteristic_function_basics(seed in any::<u64>(), n in 1usize..=4, tail in tail_strategy()) {
        let mut r = common::rng(seed);
        let s = common::random_valid_state(&mut r, n).with_tail(tail);
        prop_assert!((s.characteristic_function(&[]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        for _ in 0..10 {
            let z = common::random_point(&mut r, n + 2, 2.0);
            let v = s.characteristic_function(&z).unwrap();
            let neg: Vec<Complex64> = z.iter().map(|x| -x).collect();
            prop_assert!(v.norm() <= 1.0 + 1e-15);
            prop_assert!((s.characteristic_function(&neg).unwrap() - v.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn cond1_agrees_with_symplectic_spectrum(seed in any::<u64>(), n in 1usize..=4, scale in 0.3f64..2.0) {
        let mut r = common::rng(seed);
        let cov = common::random_valid_covariance(&mut r, n, 3.0, 0.5);
        let cov = RealBlockOperator::new(cov.matrix() * scale).unwrap();
        let report = GaussianState::centered(cov.clone()).unwrap().validate().unwrap();
        let min_d = symplectic_spectrum(&cov).unwrap().into_iter().fold(f64::INFINITY, f64::min);
        prop_assume!((min_d - 1.0).abs() > 1e-6);
        prop_assert_eq!(report.cond1_psd, min_d >= 1.0 - 1e-8);
    }

    #[test]
    fn conjugations_preserve_validity(seed in any::<u64>(), n in 1usize..=4, scale in 0.3f64..2.0) {
        let mut r = common::rng(seed);
        let cov = common::random_valid_covariance(&mut r, n, 3.0, 0.5);
        let s = GaussianState::new(
            common::random_mean(&mut r, n, 1.0),
            RealBlockOperator::new(cov.matrix() * scale).unwrap(),
            TailModel::Identity,
        ).unwrap();
        let before = s.validate().unwrap();
        let min_d = before.min_symplectic_eigenvalue;
        prop_assume!((min_d - 1.0).abs() > 1e-6);
        let l = common::random_symplectic(&mut r, n, 0.5);
        let moved = s.shale_conjugate(&l).unwrap();
        prop_assert_eq!(moved.validate().unwrap().verdict, before.verdict);
        let shifted = s.displace(&common::random_mean(&mut r, n, 1.0)).unwrap();
        prop_assert_eq!(shifted.validate().unwrap().verdict, before.verdict);
    }

    #[test]
    fn marginal_undoes_tensor(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut r = common::rng(seed);
        let a = common::random_valid_state(&mut r, n);
        let b = common::random_valid_state(&mut r, m);
        let joined = a.tensor(&b).unwrap();
        let first: Vec<usize> = (0..n).collect();
        let second: Vec<usize> = (n..n + m).collect();
        prop_assert_eq!(joined.marginal(&first).unwrap(), a);
        prop_assert_eq!(joined.marginal(&second).unwrap(), b);
    }

    #[test]
    fn beam_splitter_output_is_valid(seed in any::<u64>(), n in 1usize..=4, theta in -3.2f64..3.2) {
        let mut r = common::rng(seed);
        let a = GaussianState::centered(common::random_valid_covariance(&mut r, n, 3.0, 0.8)).unwrap();
        let b = GaussianState::centered(common::random_valid_covariance(&mut r, n, 3.0, 0.8)).unwrap();
        let mixed = a.beam_splitter_mix(&b, theta).unwrap();
        prop_assert!(mixed.validate().unwrap().verdict);
    }

    #[test]
    fn extreme_pair_reconstructs(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = common::rng(seed);
        let s = common::random_valid_state(&mut r, n);
        let pair = s.extreme_decompose().unwrap();
        let scale = s.covariance().matrix().abs().max().max(1.0);
        prop_assert!(pair.midpoint().max_abs_diff(s.covariance()) <= 1e-9 * scale);
        prop_assert!(is_symplectic(&pair.first, 1e-9 * scale));
        prop_assert!(is_symplectic(&pair.second, 1e-9 * scale));
    }

    #[test]
    fn extreme_pair_of_pure_state_is_trivial(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = common::rng(seed);
        let s = common::random_pure_state(&mut r, n);
        prop_assert!(s.is_pure(1e-8).unwrap());
        let pair = s.extreme_decompose().unwrap();
        let scale = s.covariance().matrix().abs().max().max(1.0);
        prop_assert!(pair.first_covariance().max_abs_diff(s.covariance()) <= 1e-9 * scale);
        prop_assert!(pair.second_covariance().max_abs_diff(s.covariance()) <= 1e-9 * scale);
    }

    #[test]
    fn purification_is_pure_with_the_right_marginal(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = common::rng(seed);
        let s = GaussianState::centered(common::random_valid_covariance(&mut r, n, 5.0, 0.6)).unwrap();
        let p = s.purify().unwrap();
        prop_assert_eq!(p.modes(), 2 * n);
        prop_assert!(p.is_pure(1e-8).unwrap());
        let first: Vec<usize> = (0..n).collect();
        let marginal = p.marginal(&first).unwrap();
        let scale = s.covariance().matrix().abs().max().max(1.0);
        prop_assert!(marginal.covariance().max_abs_diff(s.covariance()) <= 1e-9 * scale);
    }

    #[test]
    fn spectrum_is_a_sorted_subprobability(seed in any::<u64>(), n in 1usize..=3, k in 1usize..40) {
        let mut r = common::rng(seed);
        let s = common::random_valid_state(&mut r, n);
        let spec = s.spectrum(k).unwrap();
        prop_assert!(spec.iter().all(|e| e.value > 0.0 && e.value <= 1.0));
        prop_assert!(spec.windows(2).all(|p| p[0].value >= p[1].value));
        prop_assert!(spec.iter().map(|e| e.value).sum::<f64>() <= 1.0 + 1e-10);
    }

    #[test]
    fn kernel_is_positive_for_valid_states(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = common::rng(seed);
        let s = common::random_valid_state(&mut r, n);
        let points: Vec<Vec<Complex64>> = (0..12).map(|_| common::random_point(&mut r, n, 1.5)).collect();
        let (min, ok) = s.kernel_psd_check(&points, 1e-9).unwrap();
        prop_assert!(ok, "min eigenvalue {min}");
    }

    #[test]
    fn displacement_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = common::rng(seed);
        let s = common::random_valid_state(&mut r, n);
        let alpha = common::random_mean(&mut r, n, 1.0);
        let neg: Vec<Complex64> = alpha.iter().map(|a| -a).collect();
        let back = s.displace(&alpha).unwrap().displace(&neg).unwrap();
        for (x, y) in back.mean().iter().zip(s.mean()) {
            prop_assert!((x - y).norm() <= 1e-15 * 4.0);
        }
    }

    #[test]
    fn symmetry_then_inverse_restores_state(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = common::rng(seed);
        let s = common::random_valid_state(&mut r, n);
        let l = common::random_symplectic(&mut r, n, 0.4);
        let alpha = common::random_mean(&mut r, n, 0.5);
        let moved = s.apply_gaussian_symmetry(&alpha, &l).unwrap();
        // (W(α)Γ(L))⁻¹ = Γ(L⁻¹)W(−α) = W(−L⁻¹α)Γ(L⁻¹) up to phase
        let linv = gaussfock::symplectic::symplectic_inverse(&l);
        let n2 = alpha.len();
        let v = gaussfock::DVector::from_fn(2 * n2, |i, _| if i < n2 { alpha[i].re } else { alpha[i - n2].im });
        let w = linv.matrix() * v;
        let beta: Vec<Complex64> = (0..n2).map(|i| c(-w[i], -w[n2 + i])).collect();
        let back = moved.apply_gaussian_symmetry(&beta, &linv).unwrap();
        prop_assert!(back.covariance().max_abs_diff(s.covariance()) <= 1e-9 * s.covariance().matrix().abs().max());
        for (x, y) in back.mean().iter().zip(s.mean()) {
            prop_assert!((x - y).norm() <= 1e-9);
        }
    }
}

#[test]
fn coherent_state_is_vacuum_displaced() {
    let f = [c(0.3, -0.4), c(1.0, 0.2)];
    let coherent = GaussianState::coherent_state(&f).unwrap();
    let displaced = GaussianState::vacuum(2).displace(&f).unwrap();
    assert_eq!(coherent, displaced);
}
