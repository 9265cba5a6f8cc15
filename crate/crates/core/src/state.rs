//! Gaussian states `ρ_g(w, S)` with a finite covariance block and a parametric tail.
//!
//! The characteristic function is
//! `ρ̂(z) = exp(−i Re⟨w, z⟩ − ½ Re⟨z, S z⟩)`, where on block modes the quadratic
//! form is `(x, y)ᵀ S₀ (x, y)` and tail mode `j` contributes `dⱼ|zⱼ|²`.

mod spectrum;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{self, involution_matrix, is_symplectic, symmetrize, RealBlockOperator};
use crate::tails::TailModel;

pub use spectrum::SpectrumEntry;

/// Tolerance on `min d ≥ 1 − tol` and `min eig(S₀ − iJ₀) ≥ −tol`.
pub const ADMISSIBILITY_TOL: f64 = 1e-8;

/// Symplectic eigenvalues this close to 1 are treated as exactly 1 where a
/// square root of `d² − 1` is taken.
const PURE_SNAP: f64 = 1e-9;

/// Means below this magnitude count as zero.
const ZERO_MEAN_TOL: f64 = 1e-12;

/// A quantum Gaussian state on countably many modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateFile", into = "StateFile")]
pub struct GaussianState {
    mean: Vec<Complex64>,
    cov: RealBlockOperator,
    tail: TailModel,
}

/// On-disk schema: `{"modes", "mean_re", "mean_im", "S0", "tail"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct StateFile {
    modes: usize,
    mean_re: Vec<f64>,
    mean_im: Vec<f64>,
    #[serde(rename = "S0")]
    s0: Vec<Vec<f64>>,
    #[serde(default)]
    tail: TailModel,
}

impl TryFrom<StateFile> for GaussianState {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        if file.mean_re.len() != file.modes || file.mean_im.len() != file.modes {
            return Err(Error::InvalidInput(format!(
                "mean vectors must have {} entries (got {} and {})",
                file.modes,
                file.mean_re.len(),
                file.mean_im.len()
            )));
        }
        let cov = if file.modes == 0 && file.s0.is_empty() {
            RealBlockOperator::identity(0)
        } else {
            RealBlockOperator::from_rows(&file.s0)?
        };
        if cov.modes() != file.modes {
            return Err(Error::InvalidInput(format!(
                "S0 is {}x{} but modes = {}",
                cov.dim(),
                cov.dim(),
                file.modes
            )));
        }
        let mean = file
            .mean_re
            .iter()
            .zip(&file.mean_im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        GaussianState::new(mean, cov, file.tail)
    }
}

impl From<GaussianState> for StateFile {
    fn from(state: GaussianState) -> Self {
        StateFile {
            modes: state.modes(),
            mean_re: state.mean.iter().map(|c| c.re).collect(),
            mean_im: state.mean.iter().map(|c| c.im).collect(),
            s0: state.cov.to_rows(),
            tail: state.tail,
        }
    }
}

/// Outcome of the three-condition admissibility test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `S₀ − iJ₀ ⪰ 0` on the block (tail modes satisfy it automatically).
    pub cond1_psd: bool,
    /// Minimum eigenvalue of `S₀ − iJ₀`.
    pub min_psd_eigenvalue: f64,
    /// `S − I` Hilbert-Schmidt; decided by the tail.
    pub cond2_hs: bool,
    /// `(√S J √S)ᵀ(√S J √S) − I` trace class; decided by the tail.
    pub cond3_trace: bool,
    /// Trace norm of the finite-block part of that operator, for information.
    pub block_trace_norm: f64,
    pub min_symplectic_eigenvalue: f64,
    pub verdict: bool,
}

/// Two pure-state covariances `NᵀN`, `MᵀM` whose midpoint is `S₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremePair {
    /// `N = diag(P₁, P₁⁻¹)^{1/2} L` with `P₁ = P + √(P² − I)`.
    pub first: RealBlockOperator,
    /// `M = diag(P₂, P₂⁻¹)^{1/2} L` with `P₂ = P − √(P² − I)`.
    pub second: RealBlockOperator,
}

impl ExtremePair {
    /// `½(NᵀN + MᵀM)`.
    pub fn midpoint(&self) -> RealBlockOperator {
        let n = self.first.matrix();
        let m = self.second.matrix();
        let mid = 0.5 * (n.transpose() * n + m.transpose() * m);
        RealBlockOperator::new(symmetrize(&mid)).expect("finite product")
    }

    pub fn first_covariance(&self) -> RealBlockOperator {
        RealBlockOperator::identity(self.first.modes())
            .congruence(&self.first)
            .expect("same mode count")
    }

    pub fn second_covariance(&self) -> RealBlockOperator {
        RealBlockOperator::identity(self.second.modes())
            .congruence(&self.second)
            .expect("same mode count")
    }
}

impl GaussianState {
    /// Checks sizes and that `S₀` is symmetric positive definite.
    pub fn new(mean: Vec<Complex64>, cov: RealBlockOperator, tail: TailModel) -> Result<Self> {
        if mean.len() != cov.modes() {
            return Err(Error::InvalidInput(format!(
                "mean has {} entries for a {}-mode block",
                mean.len(),
                cov.modes()
            )));
        }
        if mean.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("mean has non-finite entries".into()));
        }
        if cov.modes() > 0 {
            // errors on asymmetric or non-positive-definite blocks
            symplectic::principal_sqrt(&cov)?;
        }
        Ok(Self { mean, cov, tail })
    }

    /// Mean-zero state with the given block and identity tail.
    pub fn centered(cov: RealBlockOperator) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); cov.modes()], cov, TailModel::Identity)
    }

    /// `ρ_g(0, I)` on `n` block modes.
    pub fn vacuum(modes: usize) -> Self {
        Self {
            mean: vec![Complex64::new(0.0, 0.0); modes],
            cov: RealBlockOperator::identity(modes),
            tail: TailModel::Identity,
        }
    }

    /// Coherent state `ρ_g(−2if, I)`.
    pub fn coherent_state(f: &[Complex64]) -> Result<Self> {
        let mean = f.iter().map(|&x| Complex64::new(0.0, -2.0) * x).collect();
        Self::new(mean, RealBlockOperator::identity(f.len()), TailModel::Identity)
    }

    /// Product of one-mode thermal states, covariance `diag(d, d)`.
    pub fn thermal(spectrum: &[f64]) -> Result<Self> {
        Self::centered(RealBlockOperator::thermal_form(spectrum))
    }

    pub fn with_tail(mut self, tail: TailModel) -> Self {
        self.tail = tail;
        self
    }

    pub fn modes(&self) -> usize {
        self.cov.modes()
    }

    pub fn mean(&self) -> &[Complex64] {
        &self.mean
    }

    pub fn covariance(&self) -> &RealBlockOperator {
        &self.cov
    }

    pub fn tail(&self) -> &TailModel {
        &self.tail
    }

    /// `(Re w, Im w)` as one real `2n`-vector.
    fn mean_real(&self) -> DVector<f64> {
        let n = self.modes();
        DVector::from_fn(2 * n, |i, _| {
            if i < n {
                self.mean[i].re
            } else {
                self.mean[i - n].im
            }
        })
    }

    fn has_zero_mean(&self) -> bool {
        self.mean.iter().all(|c| c.norm() <= ZERO_MEAN_TOL)
    }

    /// `exp(−i Re⟨w, z⟩ − ½ Re⟨z, S z⟩)`; entries of `z` past the block are tail modes.
    pub fn characteristic_function(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("argument has non-finite entries".into()));
        }
        let n = self.modes();
        let coord = |i: usize| -> Complex64 { z.get(i).copied().unwrap_or_default() };
        let linear: f64 = (0..n).map(|i| (self.mean[i].conj() * coord(i)).re).sum();
        let v = DVector::from_fn(2 * n, |i, _| if i < n { coord(i).re } else { coord(i - n).im });
        let mut quadratic = v.dot(&(self.cov.matrix() * &v));
        for (k, c) in z.iter().enumerate().skip(n) {
            if c.norm_sqr() > 0.0 {
                quadratic += self.tail.d(k - n + 1)? * c.norm_sqr();
            }
        }
        Ok(Complex64::new(-0.5 * quadratic, -linear).exp())
    }

    /// Tests the three admissibility conditions.
    pub fn validate(&self) -> Result<ValidationReport> {
        let class = self.tail.classify();
        let (cond1_block, min_psd, min_d, trace_norm) = if self.modes() == 0 {
            (true, 0.0, 1.0, 0.0)
        } else {
            let (ok, min_psd) = symplectic::uncertainty_psd_check(&self.cov, ADMISSIBILITY_TOL)?;
            let spectrum = symplectic::symplectic_spectrum(&self.cov)?;
            let min_d = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
            (ok, min_psd, min_d, block_trace_norm(&self.cov)?)
        };
        let cond1_psd = cond1_block && class.cond1_uncertainty;
        let verdict = cond1_psd && class.cond2_hilbert_schmidt && class.cond3_trace_class;
        Ok(ValidationReport {
            cond1_psd,
            min_psd_eigenvalue: min_psd,
            cond2_hs: class.cond2_hilbert_schmidt,
            cond3_trace: class.cond3_trace_class,
            block_trace_norm: trace_norm,
            min_symplectic_eigenvalue: min_d,
            verdict,
        })
    }

    fn require_valid(&self) -> Result<ValidationReport> {
        let report = self.validate()?;
        if !report.verdict {
            return Err(Error::Validation(format!(
                "cond1={} cond2={} cond3={} (min symplectic eigenvalue {:e})",
                report.cond1_psd, report.cond2_hs, report.cond3_trace, report.min_symplectic_eigenvalue
            )));
        }
        Ok(report)
    }

    /// Conjugation by the Weyl operator `W(α)`: `w ↦ w − 2iα`.
    pub fn displace(&self, alpha: &[Complex64]) -> Result<Self> {
        let n = self.modes();
        if alpha.iter().skip(n).any(|c| c.norm() != 0.0) {
            return Err(Error::UnsupportedDisplacement(
                "displacement touches tail modes, which are mean-zero".into(),
            ));
        }
        let mut out = self.clone();
        for (w, a) in out.mean.iter_mut().zip(alpha) {
            *w -= Complex64::new(0.0, 2.0) * a;
        }
        Ok(out)
    }

    /// `Γ_s(L)* ρ Γ_s(L) = ρ_g(Lᵀw, LᵀSL)`, with `L` acting on the block modes.
    pub fn shale_conjugate(&self, l: &RealBlockOperator) -> Result<Self> {
        if l.modes() != self.modes() {
            return Err(Error::InvalidDimension(format!(
                "{}-mode map applied to a {}-mode block",
                l.modes(),
                self.modes()
            )));
        }
        let scale = l.matrix().norm().max(1.0);
        if !is_symplectic(l, 1e-9 * scale * scale) {
            return Err(Error::InvalidInput(format!(
                "map is not symplectic (residual {:e})",
                symplectic::symplectic_residual(l)
            )));
        }
        let n = self.modes();
        let moved = l.matrix().transpose() * self.mean_real();
        let mean = (0..n).map(|i| Complex64::new(moved[i], moved[n + i])).collect();
        let cov = self.cov.congruence(l)?;
        Ok(Self {
            mean,
            cov,
            tail: self.tail,
        })
    }

    /// `ρ₁ ⊗ ρ₂ = ρ_g(w₁ ⊕ w₂, S₁ ⊕ S₂)`.
    ///
    /// A nontrivial tail is carried over only when it stays at the end of the
    /// combined mode list.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let tail = match (self.tail.is_identity(), other.tail.is_identity()) {
            (true, _) => other.tail,
            (false, true) if other.modes() == 0 => self.tail,
            (false, true) => {
                return Err(Error::UnsupportedComposition(
                    "first factor has an infinite tail; the second factor's modes cannot follow it".into(),
                ))
            }
            (false, false) => {
                return Err(Error::UnsupportedComposition("both factors carry nontrivial tails".into()))
            }
        };
        let mut mean = self.mean.clone();
        mean.extend_from_slice(&other.mean);
        Ok(Self {
            mean,
            cov: self.cov.direct_sum(&other.cov),
            tail,
        })
    }

    /// Reduced state on the listed block modes, in the listed order.
    ///
    /// Tail modes are not traced out.
    pub fn marginal(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidInput("empty mode selection".into()));
        }
        let mut seen = vec![false; self.modes()];
        for &m in modes {
            if m >= self.modes() {
                return Err(Error::InvalidInput(format!(
                    "mode {m} is not a block mode of a {}-mode state",
                    self.modes()
                )));
            }
            if std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidInput(format!("mode {m} selected twice")));
            }
        }
        Ok(Self {
            mean: modes.iter().map(|&m| self.mean[m]).collect(),
            cov: self.cov.select_modes(modes)?,
            tail: self.tail,
        })
    }

    /// Output of a beam splitter with angle `θ` on two mean-zero states:
    /// `ρ_g(0, cos²θ S₁ + sin²θ S₂)`.
    pub fn beam_splitter_mix(&self, other: &Self, theta: f64) -> Result<Self> {
        if self.modes() != other.modes() {
            return Err(Error::InvalidDimension(format!(
                "cannot mix {}-mode and {}-mode states",
                self.modes(),
                other.modes()
            )));
        }
        if !self.has_zero_mean() || !other.has_zero_mean() {
            return Err(Error::InvalidInput("beam-splitter mixing needs mean-zero states".into()));
        }
        if !self.tail.is_identity() || !other.tail.is_identity() {
            return Err(Error::UnsupportedComposition("beam-splitter mixing needs identity tails".into()));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidInput("angle must be finite".into()));
        }
        self.require_valid()?;
        other.require_valid()?;
        let (s, c) = theta.sin_cos();
        let cov = c * c * self.cov.matrix() + s * s * other.cov.matrix();
        Self::centered(RealBlockOperator::new(symmetrize(&cov))?)
    }

    /// All block symplectic eigenvalues within `tol` of 1 and an identity tail.
    pub fn is_pure(&self, tol: f64) -> Result<bool> {
        self.require_valid()?;
        if !self.tail.is_identity() {
            return Ok(false);
        }
        if self.modes() == 0 {
            return Ok(true);
        }
        let d = symplectic::symplectic_spectrum(&self.cov)?;
        Ok(d.iter().all(|x| (x - 1.0).abs() <= tol))
    }

    /// Writes `S₀` as the midpoint of two pure-state covariances.
    pub fn extreme_decompose(&self) -> Result<ExtremePair> {
        self.require_valid()?;
        if !self.tail.is_identity() {
            return Err(Error::UnsupportedComposition("extreme decomposition needs an identity tail".into()));
        }
        let w = symplectic::williamson(&self.cov)?;
        let n = self.modes();
        let upper: Vec<f64> = w
            .spectrum
            .iter()
            .map(|&d| {
                // √(d² − 1) would amplify rounding noise on pure modes
                let d = if d - 1.0 <= PURE_SNAP { 1.0 } else { d };
                d + (d * d - 1.0).sqrt()
            })
            .collect();
        // P₂ = P₁⁻¹ since (d + √(d²−1))(d − √(d²−1)) = 1
        let lower: Vec<f64> = upper.iter().map(|p| p.recip()).collect();
        let factor = |p: &[f64]| -> Result<RealBlockOperator> {
            let scale = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
                if i != j {
                    0.0
                } else if i < n {
                    p[i].sqrt()
                } else {
                    p[i - n].sqrt().recip()
                }
            });
            RealBlockOperator::new(scale * w.symplectic.matrix())
        };
        Ok(ExtremePair {
            first: factor(&upper)?,
            second: factor(&lower)?,
        })
    }

    /// A pure `2n`-mode state whose marginal on the first `n` modes is `self`.
    ///
    /// Williamson-reduce `S₀ = Lᵀ diag(d, d) L`, pair mode `j` with mode `n + j`
    /// in a two-mode squeezed vacuum whose reduced covariance is `dⱼ I`, then
    /// conjugate by `L ⊕ I`.
    pub fn purify(&self) -> Result<Self> {
        self.require_valid()?;
        if !self.has_zero_mean() {
            return Err(Error::InvalidInput("purify needs a mean-zero state; displace first".into()));
        }
        if !self.tail.is_identity() {
            return Err(Error::UnsupportedComposition("purify needs an identity tail".into()));
        }
        let n = self.modes();
        if n == 0 {
            return Ok(Self::vacuum(0));
        }
        let w = symplectic::williamson(&self.cov)?;
        let mut tmsv = DMatrix::zeros(4 * n, 4 * n);
        for (j, &d) in w.spectrum.iter().enumerate() {
            let d = if d - 1.0 <= PURE_SNAP { 1.0 } else { d };
            let c = (d * d - 1.0).sqrt();
            let (a, b) = (j, n + j);
            for (offset, sign) in [(0, 1.0), (2 * n, -1.0)] {
                tmsv[(offset + a, offset + a)] = d;
                tmsv[(offset + b, offset + b)] = d;
                tmsv[(offset + a, offset + b)] = sign * c;
                tmsv[(offset + b, offset + a)] = sign * c;
            }
        }
        let lift = w.symplectic.direct_sum(&RealBlockOperator::identity(n));
        let cov = RealBlockOperator::new(tmsv)?.congruence(&lift)?;
        Self::centered(cov)
    }

    /// Minimum eigenvalue of the kernel matrix
    /// `K(zⱼ, zₖ) = e^{i Im⟨zⱼ, zₖ⟩} ρ̂(zₖ − zⱼ)` and whether it is `≥ −tol`.
    pub fn kernel_psd_check(&self, points: &[Vec<Complex64>], tol: f64) -> Result<(f64, bool)> {
        if points.is_empty() {
            return Err(Error::InvalidInput("kernel check needs at least one point".into()));
        }
        let m = points.len();
        let width = points.iter().map(Vec::len).max().unwrap_or(0);
        let padded: Vec<Vec<Complex64>> = points
            .iter()
            .map(|p| {
                let mut v = p.clone();
                v.resize(width, Complex64::default());
                v
            })
            .collect();
        let mut kernel = DMatrix::zeros(m, m);
        for j in 0..m {
            for k in j..m {
                let form: f64 = padded[j]
                    .iter()
                    .zip(&padded[k])
                    .map(|(a, b)| (a.conj() * b).im)
                    .sum();
                let diff: Vec<Complex64> = padded[k].iter().zip(&padded[j]).map(|(b, a)| b - a).collect();
                let value = Complex64::from_polar(1.0, form) * self.characteristic_function(&diff)?;
                kernel[(j, k)] = value;
                kernel[(k, j)] = value.conj();
            }
        }
        let min = SymmetricEigen::new(kernel).eigenvalues.min();
        Ok((min, min >= -tol))
    }

    /// Conjugation `ρ ↦ U ρ U*` by `U = W(α) Γ_s(L)` (global phase dropped).
    pub fn apply_gaussian_symmetry(&self, alpha: &[Complex64], l: &RealBlockOperator) -> Result<Self> {
        self.shale_conjugate(&symplectic::symplectic_inverse(l))?
            .displace(alpha)
    }

    /// Mean momentum `l = Re w / √2` and mean position `m = −Im w / √2`.
    pub fn mean_momentum_position(&self) -> (Vec<f64>, Vec<f64>) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        (
            self.mean.iter().map(|w| w.re * r).collect(),
            self.mean.iter().map(|w| -w.im * r).collect(),
        )
    }

    /// Inverse of [`mean_momentum_position`](Self::mean_momentum_position): `w = √2(l − im)`.
    pub fn mean_from_momentum_position(l: &[f64], m: &[f64]) -> Vec<Complex64> {
        let s = std::f64::consts::SQRT_2;
        l.iter().zip(m).map(|(&l, &m)| Complex64::new(s * l, -s * m)).collect()
    }
}

/// Trace norm of `(√S J √S)ᵀ(√S J √S) − I` on the block.
fn block_trace_norm(cov: &RealBlockOperator) -> Result<f64> {
    let root = symplectic::principal_sqrt(cov)?;
    let b = root.matrix() * involution_matrix(cov.modes()) * root.matrix();
    let d = cov.dim();
    let m = symmetrize(&(b.transpose() * &b - DMatrix::identity(d, d)));
    Ok(SymmetricEigen::new(m).eigenvalues.iter().map(|x| x.abs()).sum())
}
