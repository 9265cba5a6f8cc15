#![allow(dead_code)]

use gaussfock::{Complex64, DMatrix, GaussianState, RealBlockOperator, TailModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `AAᵀ + εI` with uniform entries in `[-1, 1]`.
pub fn random_spd(rng: &mut impl Rng, modes: usize) -> RealBlockOperator {
    let k = 2 * modes;
    let a = DMatrix::from_fn(k, k, |_, _| rng.random_range(-1.0..1.0));
    let s = &a * a.transpose() + DMatrix::identity(k, k) * 0.1;
    RealBlockOperator::new(s).unwrap()
}

/// Random symmetric block, positive definite or not.
pub fn random_symmetric(rng: &mut impl Rng, modes: usize) -> RealBlockOperator {
    let k = 2 * modes;
    let a = DMatrix::from_fn(k, k, |_, _| rng.random_range(-1.0..1.0));
    RealBlockOperator::new((&a + a.transpose()) * 0.5).unwrap()
}

pub fn random_unitary(rng: &mut impl Rng, modes: usize) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(modes, modes, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    m.qr().q()
}

/// `U₁ · diag(a, a⁻¹) · U₂` with `ln aⱼ` uniform in `[-r, r]`.
pub fn random_symplectic(rng: &mut impl Rng, modes: usize, max_squeeze: f64) -> RealBlockOperator {
    let u1 = RealBlockOperator::from_complex(&random_unitary(rng, modes)).unwrap();
    let u2 = RealBlockOperator::from_complex(&random_unitary(rng, modes)).unwrap();
    let a: Vec<f64> = (0..modes)
        .map(|_| rng.random_range(-max_squeeze..=max_squeeze).exp())
        .collect();
    let t = RealBlockOperator::stretch(&a).unwrap();
    u1.compose(&t).unwrap().compose(&u2).unwrap()
}

pub fn random_mean(rng: &mut impl Rng, modes: usize, scale: f64) -> Vec<Complex64> {
    (0..modes)
        .map(|_| c(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
        .collect()
}

/// `Lᵀ diag(d, d) L` with `dⱼ ∈ [1, d_max]`; some modes are pure.
pub fn random_valid_covariance(rng: &mut impl Rng, modes: usize, d_max: f64, max_squeeze: f64) -> RealBlockOperator {
    let d: Vec<f64> = (0..modes)
        .map(|_| if rng.random_bool(0.3) { 1.0 } else { rng.random_range(1.0..d_max) })
        .collect();
    let l = random_symplectic(rng, modes, max_squeeze);
    RealBlockOperator::thermal_form(&d).congruence(&l).unwrap()
}

pub fn random_valid_state(rng: &mut impl Rng, modes: usize) -> GaussianState {
    let cov = random_valid_covariance(rng, modes, 4.0, 0.8);
    let mean = random_mean(rng, modes, 1.0);
    GaussianState::new(mean, cov, TailModel::Identity).unwrap()
}

pub fn random_pure_state(rng: &mut impl Rng, modes: usize) -> GaussianState {
    let l = random_symplectic(rng, modes, 0.8);
    let cov = RealBlockOperator::identity(modes).congruence(&l).unwrap();
    GaussianState::new(random_mean(rng, modes, 1.0), cov, TailModel::Identity).unwrap()
}

/// Random point with `|z| ≤ radius`.
pub fn random_point(rng: &mut impl Rng, modes: usize, radius: f64) -> Vec<Complex64> {
    gaussfock::oracle::random_points(rng, modes, 1, radius).pop().unwrap()
}
