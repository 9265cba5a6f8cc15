//! Brute-force truncated Fock-space matrices.
//!
//! Every mode is cut off at occupation `Nⱼ − 1` and operators are dense complex
//! matrices over the occupation basis `|k⟩`, mode 0 most significant (the
//! ordering of [`DMatrix::kronecker`]). Nothing here uses the phase-space
//! formulas of [`crate::state`]; the two layers are compared in tests.
//!
//! Truncation distorts matrix elements near the cutoff, and products of
//! truncated matrices lose every intermediate state above it. Residuals are
//! therefore measured on the low-occupation subspace `Σⱼ kⱼ ≤ min Nⱼ / 2`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::GaussianState;
use crate::symplectic::{self, RealBlockOperator};
use crate::tails::thermal_parameter;

pub const DEFAULT_MEM_CAP: usize = 4096;

pub type DenseOperator = DMatrix<Complex64>;

/// Per-mode cutoffs of a truncated multi-mode Fock space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    cutoffs: Vec<usize>,
}

impl FockBasis {
    pub fn new(cutoffs: Vec<usize>) -> Result<Self> {
        Self::with_cap(cutoffs, DEFAULT_MEM_CAP)
    }

    pub fn with_cap(cutoffs: Vec<usize>, cap: usize) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::InvalidDimension("a Fock basis needs at least one mode".into()));
        }
        if let Some(&c) = cutoffs.iter().find(|&&c| c < 2) {
            return Err(Error::InvalidDimension(format!("cutoff {c} is below 2")));
        }
        let dimension = cutoffs
            .iter()
            .try_fold(1usize, |acc, &c| acc.checked_mul(c))
            .unwrap_or(usize::MAX);
        if dimension > cap {
            return Err(Error::Capacity { dimension, cap });
        }
        Ok(Self { cutoffs })
    }

    pub fn uniform(modes: usize, cutoff: usize) -> Result<Self> {
        Self::new(vec![cutoff; modes])
    }

    pub fn modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn dim(&self) -> usize {
        self.cutoffs.iter().product()
    }

    pub fn occupation(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes()];
        for (slot, &c) in occ.iter_mut().zip(&self.cutoffs).rev() {
            *slot = index % c;
            index /= c;
        }
        occ
    }

    pub fn index(&self, occupation: &[usize]) -> Option<usize> {
        if occupation.len() != self.modes() {
            return None;
        }
        let mut index = 0;
        for (&k, &c) in occupation.iter().zip(&self.cutoffs) {
            if k >= c {
                return None;
            }
            index = index * c + k;
        }
        Some(index)
    }

    /// Basis indices with total occupation `Σⱼ kⱼ ≤ min Nⱼ / 2`.
    pub fn low_occupation_indices(&self) -> Vec<usize> {
        let limit = self.cutoffs.iter().min().copied().unwrap_or(0) / 2;
        self.indices_with_total_at_most(limit)
    }

    /// Basis indices with every `kⱼ ≤ Nⱼ − margin` (at least the vacuum).
    pub fn edge_margin_indices(&self, margin: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                self.occupation(i)
                    .iter()
                    .zip(&self.cutoffs)
                    .all(|(&k, &c)| k + margin <= c || k == 0)
            })
            .collect()
    }

    pub fn indices_with_total_at_most(&self, limit: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.occupation(i).iter().sum::<usize>() <= limit)
            .collect()
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Annihilation and creation operators, `a|k⟩ = √k |k−1⟩`.
pub fn ladder(cutoff: usize) -> Result<(DenseOperator, DenseOperator)> {
    if cutoff < 2 {
        return Err(Error::InvalidDimension(format!("cutoff {cutoff} is below 2")));
    }
    let a = DMatrix::from_fn(cutoff, cutoff, |i, j| {
        if j == i + 1 {
            c((j as f64).sqrt())
        } else {
            Complex64::default()
        }
    });
    let adag = a.adjoint();
    Ok((a, adag))
}

/// Position `q = (a + a†)/√2` and momentum `p = −i(a − a†)/√2`.
pub fn quadratures(cutoff: usize) -> Result<(DenseOperator, DenseOperator)> {
    let (a, adag) = ladder(cutoff)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&a + &adag) * c(r);
    let p = (&a - &adag) * Complex64::new(0.0, -r);
    Ok((q, p))
}

/// Complex product through three real products (Gauss), which run on the
/// blocked real kernel instead of the generic complex one.
pub fn matmul(a: &DenseOperator, b: &DenseOperator) -> DenseOperator {
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let t1 = &ar * &br;
    let t2 = &ai * &bi;
    let t3 = (&ar + &ai) * (&br + &bi);
    DMatrix::from_fn(a.nrows(), b.ncols(), |i, j| {
        Complex64::new(t1[(i, j)] - t2[(i, j)], t3[(i, j)] - t1[(i, j)] - t2[(i, j)])
    })
}

/// `exp(−iG)` for Hermitian `G`, through its eigendecomposition.
fn unitary_from_generator(generator: DenseOperator) -> DenseOperator {
    let h = (&generator + generator.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(h);
    let mut scaled = eig.eigenvectors.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex64::from_polar(1.0, -eig.eigenvalues[k]);
    }
    matmul(&scaled, &eig.eigenvectors.adjoint())
}

/// One-mode Weyl operator `W(z) = exp(−i√2(x p − y q))`, `z = x + iy`.
pub fn weyl_single(cutoff: usize, z: Complex64) -> Result<DenseOperator> {
    let (q, p) = quadratures(cutoff)?;
    let s = std::f64::consts::SQRT_2;
    Ok(unitary_from_generator(p * c(s * z.re) - q * c(s * z.im)))
}

/// Multi-mode Weyl operator; the one-mode generators commute, so the
/// exponential factors into a Kronecker product.
pub fn weyl_matrix(basis: &FockBasis, z: &[Complex64]) -> Result<DenseOperator> {
    if z.len() > basis.modes() {
        return Err(Error::InvalidInput(format!(
            "{} coordinates for a {}-mode basis",
            z.len(),
            basis.modes()
        )));
    }
    kron_all(basis.cutoffs().iter().enumerate().map(|(m, &n)| {
        weyl_single(n, z.get(m).copied().unwrap_or_default())
    }))
}

fn kron_all(factors: impl Iterator<Item = Result<DenseOperator>>) -> Result<DenseOperator> {
    let mut out: Option<DenseOperator> = None;
    for f in factors {
        let f = f?;
        out = Some(match out {
            None => f,
            Some(acc) => acc.kronecker(&f),
        });
    }
    out.ok_or_else(|| Error::InvalidDimension("no modes".into()))
}

/// Lifts a one-mode operator to `mode` of `basis`.
pub fn embed(op: &DenseOperator, mode: usize, basis: &FockBasis) -> Result<DenseOperator> {
    if mode >= basis.modes() || op.nrows() != basis.cutoffs()[mode] {
        return Err(Error::InvalidDimension(format!(
            "cannot place a {}-level operator on mode {mode}",
            op.nrows()
        )));
    }
    kron_all(basis.cutoffs().iter().enumerate().map(|(m, &n)| {
        Ok(if m == mode {
            op.clone()
        } else {
            DMatrix::identity(n, n)
        })
    }))
}

fn sqrt_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).sqrt()).product()
}

/// Truncated exponential vector `Σ_k fᵏ/√(k!) |k⟩`.
pub fn exponential_vector(basis: &FockBasis, f: &[Complex64]) -> Result<DVector<Complex64>> {
    if f.len() > basis.modes() {
        return Err(Error::InvalidInput(format!(
            "{} coordinates for a {}-mode basis",
            f.len(),
            basis.modes()
        )));
    }
    Ok(DVector::from_fn(basis.dim(), |i, _| {
        basis
            .occupation(i)
            .iter()
            .enumerate()
            .map(|(m, &k)| f.get(m).copied().unwrap_or_default().powu(k as u32) / sqrt_factorial(k))
            .product()
    }))
}

/// `⊗ⱼ (1 − e^{−sⱼ}) e^{−sⱼ a†ⱼaⱼ}`; `sⱼ = +∞` gives the vacuum projector on that mode.
pub fn thermal_density(basis: &FockBasis, s: &[f64]) -> Result<DenseOperator> {
    if s.len() != basis.modes() {
        return Err(Error::InvalidInput(format!(
            "{} thermal parameters for a {}-mode basis",
            s.len(),
            basis.modes()
        )));
    }
    if let Some(bad) = s.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::InvalidParameter(format!("thermal parameter {bad} must be positive")));
    }
    let diag = DVector::from_fn(basis.dim(), |i, _| {
        let w: f64 = basis
            .occupation(i)
            .iter()
            .zip(s)
            .map(|(&k, &sj)| {
                if sj.is_infinite() {
                    if k == 0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    -(-sj).exp_m1() * (-sj * k as f64).exp()
                }
            })
            .product();
        c(w)
    });
    Ok(DMatrix::from_diagonal(&diag))
}

/// `1 − Re tr ρ`.
pub fn trace_deficit(rho: &DenseOperator) -> f64 {
    1.0 - rho.trace().re
}

/// `Γ_s(λ)` for a diagonal contraction: `|k⟩ ↦ Πλⱼ^{kⱼ} |k⟩`.
pub fn second_quantize_diag(basis: &FockBasis, lambda: &[Complex64]) -> Result<DenseOperator> {
    if lambda.len() != basis.modes() {
        return Err(Error::InvalidInput(format!(
            "{} factors for a {}-mode basis",
            lambda.len(),
            basis.modes()
        )));
    }
    if let Some(bad) = lambda.iter().find(|l| l.norm() > 1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!("|λ| = {} exceeds 1", bad.norm())));
    }
    let diag = DVector::from_fn(basis.dim(), |i, _| {
        basis
            .occupation(i)
            .iter()
            .zip(lambda)
            .map(|(&k, l)| l.powu(k as u32))
            .product()
    });
    Ok(DMatrix::from_diagonal(&diag))
}

/// Second quantization `Γ_s(U)` of a unitary mode transformation.
///
/// Expands `Γ_s(U)|k⟩ = Πₘ (Σⱼ Uⱼₘ a†ⱼ)^{kₘ}/√(kₘ!) |0⟩` exactly; components
/// above the cutoffs are dropped.
pub fn second_quantize_unitary(basis: &FockBasis, u: &DMatrix<Complex64>) -> Result<DenseOperator> {
    let n = basis.modes();
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::InvalidDimension(format!(
            "{}x{} unitary for a {n}-mode basis",
            u.nrows(),
            u.ncols()
        )));
    }
    let dim = basis.dim();
    let mut out = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let occ = basis.occupation(col);
        let mut poly: HashMap<Vec<u16>, Complex64> = HashMap::from([(vec![0u16; n], c(1.0))]);
        for (m, &k) in occ.iter().enumerate() {
            for _ in 0..k {
                let mut next: HashMap<Vec<u16>, Complex64> = HashMap::with_capacity(poly.len() * n);
                for (mono, coef) in &poly {
                    for j in 0..n {
                        let mut raised = mono.clone();
                        raised[j] += 1;
                        *next.entry(raised).or_default() += coef * u[(j, m)];
                    }
                }
                poly = next;
            }
            let norm = sqrt_factorial(k);
            for coef in poly.values_mut() {
                *coef /= norm;
            }
        }
        for (mono, coef) in poly {
            let mono: Vec<usize> = mono.iter().map(|&x| x as usize).collect();
            if let Some(row) = basis.index(&mono) {
                let weight: f64 = mono.iter().map(|&k| sqrt_factorial(k)).product();
                out[(row, col)] = coef * weight;
            }
        }
    }
    Ok(out)
}

/// One-mode squeezer `exp((r/2)(a†² − a²))`, the Shale unitary of
/// `u + iv ↦ eʳu + i e^{−r}v`.
pub fn squeeze_matrix(cutoff: usize, r: f64) -> Result<DenseOperator> {
    let (a, adag) = ladder(cutoff)?;
    let generator = (&adag * &adag - &a * &a) * Complex64::new(0.0, 0.5 * r);
    Ok(unitary_from_generator(generator))
}

/// Matrix realization of `Γ_s(L)` for a symplectic `L` on the basis modes,
/// as `Γ_s(U) · ⊗ⱼ squeeze(ln aⱼ) · Γ_s(V)` from `L = U diag(a, a⁻¹) V`.
pub fn shale_unitary(basis: &FockBasis, l: &RealBlockOperator) -> Result<DenseOperator> {
    if l.modes() != basis.modes() {
        return Err(Error::InvalidDimension(format!(
            "{}-mode map on a {}-mode basis",
            l.modes(),
            basis.modes()
        )));
    }
    let factors = symplectic::decompose_symplectic(l)?;
    let left = second_quantize_unitary(basis, &factors.left.to_complex())?;
    let right = second_quantize_unitary(basis, &factors.right.to_complex())?;
    let squeeze = kron_all(
        basis
            .cutoffs()
            .iter()
            .zip(&factors.stretch)
            .map(|(&n, a)| squeeze_matrix(n, a.ln())),
    )?;
    Ok(matmul(&matmul(&left, &squeeze), &right))
}

/// `tr(ρ W(z))`.
pub fn oracle_char_fn(rho: &DenseOperator, basis: &FockBasis, z: &[Complex64]) -> Result<Complex64> {
    check_square(rho, basis)?;
    let w = weyl_matrix(basis, z)?;
    Ok(rho.transpose().component_mul(&w).sum())
}

fn check_square(op: &DenseOperator, basis: &FockBasis) -> Result<()> {
    if op.nrows() != basis.dim() || op.ncols() != basis.dim() {
        return Err(Error::InvalidDimension(format!(
            "{}x{} operator on a {}-dimensional basis",
            op.nrows(),
            op.ncols(),
            basis.dim()
        )));
    }
    Ok(())
}

/// Truncated density matrix of a Gaussian state built from its structure:
/// `ρ = W(iw/2) Γ_s(L)* [⊗ thermal(sⱼ)] Γ_s(L) W(iw/2)*`.
#[derive(Debug, Clone)]
pub struct OracleDensity {
    pub rho: DenseOperator,
    pub trace_deficit: f64,
}

pub fn gaussian_density(state: &GaussianState, basis: &FockBasis) -> Result<OracleDensity> {
    if state.modes() != basis.modes() {
        return Err(Error::InvalidDimension(format!(
            "{}-mode state on a {}-mode basis",
            state.modes(),
            basis.modes()
        )));
    }
    if !state.tail().is_identity() {
        return Err(Error::UnsupportedComposition("the oracle covers finite states only".into()));
    }
    let report = state.validate()?;
    if !report.verdict {
        return Err(Error::Validation("oracle needs an admissible state".into()));
    }
    let w = symplectic::williamson(state.covariance())?;
    let s: Vec<f64> = w.spectrum.iter().map(|&d| thermal_parameter(d)).collect();
    let core = thermal_density(basis, &s)?;
    let gamma = shale_unitary(basis, &w.symplectic)?;
    let mut left = gamma.adjoint();
    for (k, mut col) in left.column_iter_mut().enumerate() {
        col *= core[(k, k)];
    }
    let mut rho = matmul(&left, &gamma);
    if state.mean().iter().any(|m| m.norm() > 0.0) {
        let shift: Vec<Complex64> = state.mean().iter().map(|m| Complex64::new(0.0, 0.5) * m).collect();
        let d = weyl_matrix(basis, &shift)?;
        rho = matmul(&matmul(&d, &rho), &d.adjoint());
    }
    let trace_deficit = trace_deficit(&rho);
    Ok(OracleDensity { rho, trace_deficit })
}

/// Partial trace onto the listed modes (kept in ascending order).
pub fn partial_trace(rho: &DenseOperator, basis: &FockBasis, keep: &[usize]) -> Result<(DenseOperator, FockBasis)> {
    check_square(rho, basis)?;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.iter().any(|&m| m >= basis.modes()) {
        return Err(Error::InvalidInput(format!("cannot keep modes {keep:?}")));
    }
    let reduced = FockBasis::with_cap(keep.iter().map(|&m| basis.cutoffs()[m]).collect(), usize::MAX)?;
    let mut out = DMatrix::zeros(reduced.dim(), reduced.dim());
    let split = |i: usize| -> (usize, Vec<usize>) {
        let occ = basis.occupation(i);
        let kept: Vec<usize> = keep.iter().map(|&m| occ[m]).collect();
        let rest: Vec<usize> = (0..basis.modes()).filter(|m| !keep.contains(m)).map(|m| occ[m]).collect();
        (reduced.index(&kept).expect("in range"), rest)
    };
    let parts: Vec<(usize, Vec<usize>)> = (0..basis.dim()).map(split).collect();
    for i in 0..basis.dim() {
        for j in 0..basis.dim() {
            if parts[i].1 == parts[j].1 {
                out[(parts[i].0, parts[j].0)] += rho[(i, j)];
            }
        }
    }
    Ok((out, reduced))
}

/// Comparison of oracle and phase-space characteristic functions.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub trace_deficit: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn verify_gaussian(
    state: &GaussianState,
    basis: &FockBasis,
    samples: &[Vec<Complex64>],
    tol: f64,
) -> Result<OracleReport> {
    let density = gaussian_density(state, basis)?;
    let mut max_deviation: f64 = 0.0;
    for z in samples {
        let oracle = oracle_char_fn(&density.rho, basis, z)?;
        let formula = state.characteristic_function(z)?;
        max_deviation = max_deviation.max((oracle - formula).norm());
    }
    Ok(OracleReport {
        samples: samples.len(),
        max_deviation,
        trace_deficit: density.trace_deficit,
        tolerance: tol,
        pass: max_deviation <= tol,
    })
}

/// Largest `top_k` eigenvalues of a Hermitian matrix, descending.
pub fn oracle_spectrum(rho: &DenseOperator, top_k: usize) -> Vec<f64> {
    let h = (rho + rho.adjoint()) * c(0.5);
    let mut values: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values.truncate(top_k);
    values
}

/// Frobenius norm of `op` restricted to the low-occupation subspace.
pub fn projected_norm(op: &DenseOperator, basis: &FockBasis) -> f64 {
    restricted_norm(op, &basis.low_occupation_indices())
}

/// Frobenius norm of the principal submatrix on `idx`.
pub fn restricted_norm(op: &DenseOperator, idx: &[usize]) -> f64 {
    idx.iter()
        .flat_map(|&i| idx.iter().map(move |&j| op[(i, j)].norm_sqr()))
        .sum::<f64>()
        .sqrt()
}

/// Euclidean norm of `v` restricted to the low-occupation subspace.
pub fn projected_vector_norm(v: &DVector<Complex64>, basis: &FockBasis) -> f64 {
    basis
        .low_occupation_indices()
        .iter()
        .map(|&i| v[i].norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Projected residual of `W(f)W(g) = e^{−i Im⟨f,g⟩} W(f+g)`.
pub fn weyl_relation_residual(basis: &FockBasis, f: &[Complex64], g: &[Complex64]) -> Result<f64> {
    Ok(projected_norm(&weyl_relation_difference(basis, f, g)?, basis))
}

/// `W(f)W(g) − e^{−i Im⟨f,g⟩} W(f+g)` on the truncated space.
pub fn weyl_relation_difference(basis: &FockBasis, f: &[Complex64], g: &[Complex64]) -> Result<DenseOperator> {
    let phase: f64 = f.iter().zip(g).map(|(a, b)| (a.conj() * b).im).sum();
    let sum: Vec<Complex64> = (0..f.len().max(g.len()))
        .map(|i| f.get(i).copied().unwrap_or_default() + g.get(i).copied().unwrap_or_default())
        .collect();
    let lhs = matmul(&weyl_matrix(basis, f)?, &weyl_matrix(basis, g)?);
    let rhs = weyl_matrix(basis, &sum)? * Complex64::from_polar(1.0, -phase);
    Ok(lhs - rhs)
}

/// Projected residual of `U*U = I`.
pub fn unitarity_residual(u: &DenseOperator, basis: &FockBasis) -> f64 {
    let dim = u.nrows();
    projected_norm(&(matmul(&u.adjoint(), u) - DMatrix::identity(dim, dim)), basis)
}

/// Outcome of a batch of Weyl-relation checks.
#[derive(Debug, Clone, Serialize)]
pub struct WeylReport {
    pub pairs: usize,
    pub max_relation_residual: f64,
    pub max_unitarity_residual: f64,
    /// Relation residual on `kⱼ ≤ Nⱼ − 10`, for information only.
    pub max_edge_margin_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn verify_weyl(basis: &FockBasis, pairs: &[(Vec<Complex64>, Vec<Complex64>)], tol: f64) -> Result<WeylReport> {
    let mut relation: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    let mut edge: f64 = 0.0;
    let edge_idx = basis.edge_margin_indices(10);
    for (f, g) in pairs {
        let diff = weyl_relation_difference(basis, f, g)?;
        relation = relation.max(projected_norm(&diff, basis));
        edge = edge.max(restricted_norm(&diff, &edge_idx));
        unitarity = unitarity.max(unitarity_residual(&weyl_matrix(basis, f)?, basis));
    }
    Ok(WeylReport {
        pairs: pairs.len(),
        max_relation_residual: relation,
        max_unitarity_residual: unitarity,
        max_edge_margin_residual: edge,
        tolerance: tol,
        pass: relation <= tol && unitarity <= tol,
    })
}

/// `count` random points in `modes` complex coordinates with norm uniform
/// in `[0, radius]`.
pub fn random_points<R: Rng + ?Sized>(rng: &mut R, modes: usize, count: usize, radius: f64) -> Vec<Vec<Complex64>> {
    (0..count)
        .map(|_| {
            let raw: Vec<Complex64> = (0..modes)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let target = radius * rng.random::<f64>();
            if norm == 0.0 {
                raw
            } else {
                raw.into_iter().map(|z| z * (target / norm)).collect()
            }
        })
        .collect()
}
