//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::Instant;

use common::{c, rng};
use gaussfock::oracle::{
    self, exponential_vector, gaussian_density, oracle_char_fn, oracle_spectrum, projected_vector_norm,
    verify_gaussian, verify_weyl, weyl_matrix, FockBasis,
};
use gaussfock::symplectic::{is_symplectic, symplectic_spectrum, uncertainty_psd_check, williamson};
use gaussfock::{Complex64, GaussianState, RealBlockOperator, TailModel};
use rand::Rng;
use serde::Deserialize;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn williamson_reconstruction() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1001);
    let (mut worst_symp, mut worst_rec) = (0.0f64, 0.0f64);
    for case in 0..200 {
        let n = 1 + case % 8;
        let s = common::random_spd(&mut r, n);
        let w = match williamson(&s) {
            Ok(w) => w,
            Err(e) => return outcome(false, format!("case {case} (n={n}) failed: {e}")),
        };
        let norm = s.matrix().abs().max();
        worst_symp = worst_symp.max(w.symplectic_residual);
        worst_rec = worst_rec.max(w.reconstruct().max_abs_diff(&s) / norm);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_symp <= 1e-9 && worst_rec <= 1e-8 && secs <= 30.0,
        format!("200 blocks n=1..8: max |LᵀJL−J| {worst_symp:.1e}, max relative reconstruction {worst_rec:.1e}, {secs:.2}s"),
    )
}

fn admissibility_equivalence() -> Outcome {
    let mut r = rng(1002);
    let (mut valid, mut invalid, mut disagreements) = (0, 0, 0);
    for case in 0..200 {
        let n = 1 + case % 5;
        let s = match case % 4 {
            // random symmetric, usually indefinite
            0 => common::random_symmetric(&mut r, n),
            // random SPD, sometimes below the uncertainty bound
            1 => common::random_spd(&mut r, n),
            // admissible covariance rescaled across the boundary
            _ => {
                let cov = common::random_valid_covariance(&mut r, n, 3.0, 0.6);
                let scale = r.random_range(0.4..1.6);
                RealBlockOperator::new(cov.matrix() * scale).unwrap()
            }
        };
        let (psd, _) = uncertainty_psd_check(&s, 1e-8).unwrap();
        let by_spectrum = symplectic_spectrum(&s)
            .map(|d| d.into_iter().fold(f64::INFINITY, f64::min) >= 1.0 - 1e-8)
            .unwrap_or(false);
        if psd != by_spectrum {
            disagreements += 1;
        }
        if psd {
            valid += 1;
        } else {
            invalid += 1;
        }
    }
    outcome(
        disagreements == 0 && valid > 0 && invalid > 0,
        format!("200 blocks ({valid} admissible, {invalid} not): {disagreements} disagreements"),
    )
}

fn tail_truth_table() -> Outcome {
    let expected = [(0.4, false, false), (0.9, true, false), (1.0, true, false), (1.1, true, true), (2.0, true, true)];
    let mut rows = Vec::new();
    let mut pass = true;
    for (p, cond2, cond3) in expected {
        let c = TailModel::power(1.0, p).unwrap().classify();
        pass &= c.cond2_hilbert_schmidt == cond2 && c.cond3_trace_class == cond3;
        rows.push(format!("p={p}:({},{})", tf(c.cond2_hilbert_schmidt), tf(c.cond3_trace_class)));
    }
    for t in [TailModel::Identity, TailModel::geometric(1.0, 0.5).unwrap()] {
        let c = t.classify();
        pass &= c.cond2_hilbert_schmidt && c.cond3_trace_class;
        rows.push(format!("{t}:({},{})", tf(c.cond2_hilbert_schmidt), tf(c.cond3_trace_class)));
    }
    outcome(pass, rows.join(" "))
}

fn tf(b: bool) -> &'static str {
    if b {
        "T"
    } else {
        "F"
    }
}

fn circle_property() -> Outcome {
    let mut r = rng(1004);
    let (mut rec, mut symp, mut pure_gap) = (0.0f64, 0.0f64, 0.0f64);
    let mut pass = true;
    for case in 0..100 {
        let n = 1 + case % 6;
        let pure = case % 2 == 1;
        let s = if pure {
            common::random_pure_state(&mut r, n)
        } else {
            common::random_valid_state(&mut r, n)
        };
        let pair = match s.extreme_decompose() {
            Ok(p) => p,
            Err(e) => return outcome(false, format!("case {case} failed: {e}")),
        };
        rec = rec.max(pair.midpoint().max_abs_diff(s.covariance()));
        for f in [&pair.first, &pair.second] {
            symp = symp.max(gaussfock::symplectic::symplectic_residual(f));
            pass &= is_symplectic(f, 1e-9);
        }
        if pure {
            pure_gap = pure_gap
                .max(pair.first_covariance().max_abs_diff(s.covariance()))
                .max(pair.second_covariance().max_abs_diff(s.covariance()));
        }
    }
    pass &= rec <= 1e-9 && pure_gap <= 1e-9;
    outcome(
        pass,
        format!("100 states n≤6: reconstruction {rec:.1e}, factor symplectic residual {symp:.1e}, pure NᵀN/MᵀM gap {pure_gap:.1e}"),
    )
}

fn oracle_characteristic_functions() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1005);
    let samples = oracle::random_points(&mut r, 1, 20, 1.0);

    let basis = FockBasis::uniform(1, 60).unwrap();
    let thermal = GaussianState::thermal(&[3.0]).unwrap();
    let rho = gaussian_density(&thermal, &basis).unwrap().rho;
    let thermal_gap = samples
        .iter()
        .map(|z| (oracle_char_fn(&rho, &basis, z).unwrap() - c((-1.5 * z[0].norm_sqr()).exp(), 0.0)).norm())
        .fold(0.0, f64::max);

    let squeezed = GaussianState::vacuum(1)
        .shale_conjugate(&RealBlockOperator::stretch(&[0.5f64.exp()]).unwrap())
        .unwrap()
        .displace(&[Complex64::from_polar(0.3, 0.7)])
        .unwrap();
    let squeezed_report = verify_gaussian(&squeezed, &basis, &samples, 1e-5).unwrap();

    let a = GaussianState::centered(common::random_valid_covariance(&mut r, 2, 1.8, 0.3)).unwrap();
    let b = GaussianState::centered(common::random_valid_covariance(&mut r, 2, 1.8, 0.3)).unwrap();
    let mixed = a.beam_splitter_mix(&b, 0.6).unwrap();
    let two = FockBasis::uniform(2, 25).unwrap();
    let two_samples = oracle::random_points(&mut r, 2, 20, 1.0);
    let mixed_report = verify_gaussian(&mixed, &two, &two_samples, 1e-4).unwrap();

    let secs = start.elapsed().as_secs_f64();
    outcome(
        thermal_gap <= 1e-6 && squeezed_report.pass && mixed_report.pass && secs <= 60.0,
        format!(
            "thermal d=3 {thermal_gap:.1e}, displaced squeezed {:.1e}, two-mode mixed {:.1e}, {secs:.2}s",
            squeezed_report.max_deviation, mixed_report.max_deviation
        ),
    )
}

fn weyl_relation() -> Outcome {
    let mut r = rng(1006);
    let basis = FockBasis::uniform(1, 40).unwrap();
    let pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..20)
        .map(|_| (common::random_point(&mut r, 1, 1.0), common::random_point(&mut r, 1, 1.0)))
        .collect();
    let report = verify_weyl(&basis, &pairs, 1e-6).unwrap();
    outcome(
        report.pass,
        format!(
            "20 pairs at cutoff 40: projected residual {:.1e} (Σk ≤ N/2), unitarity {:.1e}; on kⱼ ≤ N−10 the residual is {:.1e}",
            report.max_relation_residual, report.max_unitarity_residual, report.max_edge_margin_residual
        ),
    )
}

fn thermal_spectrum() -> Outcome {
    let state = GaussianState::thermal(&[3.0]).unwrap();
    let analytic = state.spectrum(12).unwrap();
    let ladder_gap = analytic
        .iter()
        .enumerate()
        .map(|(k, e)| (e.value - 0.5f64.powi(k as i32 + 1)).abs())
        .fold(0.0, f64::max);
    let basis = FockBasis::uniform(1, 60).unwrap();
    let rho = gaussian_density(&state, &basis).unwrap().rho;
    let oracle_gap = oracle_spectrum(&rho, 12)
        .iter()
        .zip(&analytic)
        .map(|(o, a)| (o - a.value).abs())
        .fold(0.0, f64::max);

    let spec = GaussianState::thermal(&[3.0, 3.0]).unwrap().spectrum(15).unwrap();
    let mut multiplicities: Vec<usize> = Vec::new();
    let mut last = f64::NAN;
    for e in &spec {
        if e.value == last {
            *multiplicities.last_mut().unwrap() += 1;
        } else {
            multiplicities.push(1);
            last = e.value;
        }
    }
    let pass = ladder_gap <= 1e-15 && oracle_gap <= 1e-8 && multiplicities == vec![1, 2, 3, 4, 5];
    outcome(
        pass,
        format!("ladder gap {ladder_gap:.1e}, oracle top-12 gap {oracle_gap:.1e}, degenerate multiplicities {multiplicities:?}"),
    )
}

fn purification() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    for d in [1.5, 3.0, 10.0] {
        let s = GaussianState::thermal(&[d]).unwrap();
        let p = s.purify().unwrap();
        let max_dev = symplectic_spectrum(p.covariance())
            .unwrap()
            .iter()
            .map(|x| (x - 1.0).abs())
            .fold(0.0, f64::max);
        let gap = p.marginal(&[0]).unwrap().covariance().max_abs_diff(s.covariance());
        pass &= p.is_pure(1e-8).unwrap() && gap <= 1e-9;
        rows.push(format!("d={d}: |d'−1| {max_dev:.1e}, marginal {gap:.1e}"));
    }
    outcome(pass, rows.join("; "))
}

#[derive(Deserialize)]
struct KernelFixture {
    state: GaussianState,
    points: Vec<Vec<[f64; 2]>>,
}

fn kernel_positivity() -> Outcome {
    let mut r = rng(1009);
    let mut worst = f64::INFINITY;
    for case in 0..20 {
        let n = 1 + case % 3;
        let s = common::random_valid_state(&mut r, n);
        for _ in 0..50 {
            let points: Vec<Vec<Complex64>> = (0..20).map(|_| common::random_point(&mut r, n, 2.0)).collect();
            let (min, _) = s.kernel_psd_check(&points, 1e-9).unwrap();
            worst = worst.min(min);
        }
    }
    let raw = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/kernel_violation.json"))
        .expect("fixture");
    let fixture: KernelFixture = serde_json::from_str(&raw).expect("fixture schema");
    let points: Vec<Vec<Complex64>> =
        fixture.points.iter().map(|p| p.iter().map(|&[re, im]| c(re, im)).collect()).collect();
    let (violation, _) = fixture.state.kernel_psd_check(&points, 1e-9).unwrap();
    outcome(
        worst >= -1e-9 && violation < -1e-3,
        format!("1000 point sets over 20 valid states: min eigenvalue {worst:.1e}; S₀=½I fixture {violation:.3}"),
    )
}

fn exponential_vectors() -> Outcome {
    let mut r = rng(1010);
    let basis = FockBasis::uniform(1, 40).unwrap();
    let (mut inner_gap, mut action_gap) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let f = common::random_point(&mut r, 1, 1.0);
        let g = common::random_point(&mut r, 1, 1.0);
        let ef = exponential_vector(&basis, &f).unwrap();
        let eg = exponential_vector(&basis, &g).unwrap();
        let fg = f[0].conj() * g[0];
        inner_gap = inner_gap.max((ef.dotc(&eg) - fg.exp()).norm());
        let lhs = weyl_matrix(&basis, &f).unwrap() * &eg;
        let rhs = exponential_vector(&basis, &[f[0] + g[0]]).unwrap() * (-0.5 * f[0].norm_sqr() - fg).exp();
        action_gap = action_gap.max(projected_vector_norm(&(lhs - rhs), &basis));
    }
    outcome(
        inner_gap <= 1e-8 && action_gap <= 1e-8,
        format!("20 pairs at cutoff 40: inner product {inner_gap:.1e}, Weyl action {action_gap:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Williamson reconstruction", williamson_reconstruction),
        ("Admissibility equivalence", admissibility_equivalence),
        ("Tail classification truth table", tail_truth_table),
        ("Circle property", circle_property),
        ("Oracle characteristic-function match", oracle_characteristic_functions),
        ("Weyl relation on truncated space", weyl_relation),
        ("Thermal spectrum", thermal_spectrum),
        ("Purification", purification),
        ("Kernel positivity", kernel_positivity),
        ("Exponential-vector identities", exponential_vectors),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!("{} {:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {}/10 passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
