//! Real-block linear algebra in the momentum-position convention.
//!
//! A real-linear operator `S` on `ℂⁿ` acts on `z = x + iy` as the real
//! `2n × 2n` matrix `S₀ = [[S₁₁, S₁₂], [S₂₁, S₂₂]]` applied to `(x, y)`. With this
//! convention multiplication by `−i` is `J₀ = [[0, I], [−I, 0]]` and the
//! symplectic form is `Im⟨z, w⟩ = zᵀ J₀ w`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real `2n × 2n` matrix over the momentum-position coordinates of `n` modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct RealBlockOperator {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl RealBlockOperator {
    /// Wraps a square matrix of even dimension with finite entries.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidInput(format!(
                "block operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() % 2 != 0 {
            return Err(Error::InvalidDimension(format!(
                "block operator dimension {} is odd",
                matrix.nrows()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("block operator has non-finite entries".into()));
        }
        Ok(Self {
            modes: matrix.nrows() / 2,
            matrix,
        })
    }

    /// Builds an operator from row-major rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::InvalidInput(format!(
                "expected {dim} columns per row, found a row with {}",
                bad.len()
            )));
        }
        Self::new(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            modes,
            matrix: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    pub fn scaled_identity(modes: usize, scale: f64) -> Self {
        Self {
            modes,
            matrix: DMatrix::identity(2 * modes, 2 * modes) * scale,
        }
    }

    /// Diagonal operator; `diagonal` lists all `2n` entries (positions first).
    pub fn from_diagonal(diagonal: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diagonal)))
    }

    /// `diag(d, d)`: the same diagonal on both quadrature blocks.
    pub fn thermal_form(spectrum: &[f64]) -> Self {
        let n = spectrum.len();
        let matrix = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i == j {
                spectrum[i % n]
            } else {
                0.0
            }
        });
        Self { modes: n, matrix }
    }

    /// `diag(a, a⁻¹)`: the one-mode stretches `u + iv ↦ aⱼu + i aⱼ⁻¹v`.
    pub fn stretch(factors: &[f64]) -> Result<Self> {
        if factors.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidParameter("stretch factors must be positive".into()));
        }
        let n = factors.len();
        let mut diag = Vec::with_capacity(2 * n);
        diag.extend(factors.iter().copied());
        diag.extend(factors.iter().map(|a| 1.0 / a));
        Self::from_diagonal(&diag)
    }

    /// Real block form `[[Re U, −Im U], [Im U, Re U]]` of a complex-linear map.
    pub fn from_complex(u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != u.ncols() {
            return Err(Error::InvalidInput("complex operator must be square".into()));
        }
        let n = u.nrows();
        Self::new(DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let c = u[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => c.re,
                (true, false) => -c.im,
                (false, true) => c.im,
            }
        }))
    }

    /// Complex matrix of a complex-linear block `[[A, B], [−B, A]]`, i.e. `A − iB`.
    ///
    /// Only meaningful when the operator commutes with `J₀`; the blocks are
    /// averaged so small violations are projected away.
    pub fn to_complex(&self) -> DMatrix<Complex64> {
        let n = self.modes;
        let m = &self.matrix;
        DMatrix::from_fn(n, n, |i, j| {
            let a = 0.5 * (m[(i, j)] + m[(n + i, n + j)]);
            let b = 0.5 * (m[(i, n + j)] - m[(n + i, j)]);
            Complex64::new(a, -b)
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        2 * self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.matrix
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self {
            modes: self.modes,
            matrix: self.matrix.transpose(),
        }
    }

    /// Product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.modes != other.modes {
            return Err(Error::InvalidDimension(format!(
                "cannot compose {}-mode and {}-mode operators",
                self.modes, other.modes
            )));
        }
        Self::new(&self.matrix * &other.matrix)
    }

    /// Congruence `Lᵀ · self · L`.
    pub fn congruence(&self, l: &Self) -> Result<Self> {
        if self.modes != l.modes {
            return Err(Error::InvalidDimension(format!(
                "cannot conjugate a {}-mode operator by a {}-mode map",
                self.modes, l.modes
            )));
        }
        let m = l.matrix.transpose() * &self.matrix * &l.matrix;
        Self::new(symmetrize(&m))
    }

    /// Largest absolute entry of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.matrix.shape() != other.matrix.shape() {
            return f64::INFINITY;
        }
        max_abs(&(&self.matrix - &other.matrix))
    }

    /// Principal submatrix on the selected modes, keeping both quadratures.
    pub fn select_modes(&self, modes: &[usize]) -> Result<Self> {
        let n = self.modes;
        if let Some(&bad) = modes.iter().find(|&&m| m >= n) {
            return Err(Error::InvalidInput(format!(
                "mode {bad} out of range for a {n}-mode block"
            )));
        }
        let k = modes.len();
        let index = |i: usize| if i < k { modes[i] } else { n + modes[i - k] };
        Self::new(DMatrix::from_fn(2 * k, 2 * k, |i, j| {
            self.matrix[(index(i), index(j))]
        }))
    }

    /// Block direct sum over the union of modes, `self`'s modes first.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n1, n2) = (self.modes, other.modes);
        let n = n1 + n2;
        // position in the combined layout of row/column `i` of either factor
        let place = |i: usize, own: usize, offset: usize| {
            if i < own {
                offset + i
            } else {
                n + offset + (i - own)
            }
        };
        let mut matrix = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..2 * n1 {
            for j in 0..2 * n1 {
                matrix[(place(i, n1, 0), place(j, n1, 0))] = self.matrix[(i, j)];
            }
        }
        for i in 0..2 * n2 {
            for j in 0..2 * n2 {
                matrix[(place(i, n2, n1), place(j, n2, n1))] = other.matrix[(i, j)];
            }
        }
        Self { modes: n, matrix }
    }
}

impl TryFrom<Vec<Vec<f64>>> for RealBlockOperator {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<RealBlockOperator> for Vec<Vec<f64>> {
    fn from(op: RealBlockOperator) -> Self {
        op.to_rows()
    }
}

/// Numerical tolerances for the symplectic routines.
///
/// `symmetric` and `positive_definite` are relative to the spectral norm of the
/// input; `pairing` is relative to `‖S‖` and decides which eigenvalues of
/// `iB₀` belong to one degenerate cluster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub symmetric: f64,
    pub positive_definite: f64,
    pub reconstruction: f64,
    pub pairing: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetric: 1e-10,
            positive_definite: 1e-10,
            reconstruction: 1e-9,
            pairing: 1e-8,
        }
    }
}

/// Williamson normal form `S₀ = Lᵀ diag(d, d) L` with `L` symplectic.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonDecomposition {
    /// The symplectic factor `L₀`.
    pub symplectic: RealBlockOperator,
    /// Symplectic eigenvalues `d₁ ≥ d₂ ≥ … ≥ dₙ`.
    pub spectrum: Vec<f64>,
    /// `‖LᵀJ₀L − J₀‖_max`.
    pub symplectic_residual: f64,
    /// `‖Lᵀ diag(d, d) L − S₀‖_max`.
    pub reconstruction_residual: f64,
}

impl WilliamsonDecomposition {
    /// `diag(d, d)`.
    pub fn normal_form(&self) -> RealBlockOperator {
        RealBlockOperator::thermal_form(&self.spectrum)
    }

    /// `Lᵀ diag(d, d) L`.
    pub fn reconstruct(&self) -> RealBlockOperator {
        self.normal_form()
            .congruence(&self.symplectic)
            .expect("factor and normal form share a mode count")
    }
}

/// Factorization `L = U · diag(a, a⁻¹) · V` of a symplectic map.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticFactors {
    /// Orthogonal-symplectic (complex unitary) left factor.
    pub left: RealBlockOperator,
    /// Stretch factors `aⱼ ≥ 1`, descending.
    pub stretch: Vec<f64>,
    /// Orthogonal-symplectic (complex unitary) right factor.
    pub right: RealBlockOperator,
}

impl SymplecticFactors {
    pub fn recompose(&self) -> RealBlockOperator {
        let t = RealBlockOperator::stretch(&self.stretch).expect("stretch factors are positive");
        self.left
            .compose(&t)
            .and_then(|lt| lt.compose(&self.right))
            .expect("factors share a mode count")
    }
}

/// `J₀ = [[0, I], [−I, 0]]`, the real form of multiplication by `−i`.
pub fn standard_involution(modes: usize) -> Result<RealBlockOperator> {
    if modes == 0 {
        return Err(Error::InvalidDimension("mode count must be at least 1".into()));
    }
    Ok(RealBlockOperator {
        modes,
        matrix: involution_matrix(modes),
    })
}

pub(crate) fn involution_matrix(modes: usize) -> DMatrix<f64> {
    let n = modes;
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            1.0
        } else if i == j + n {
            -1.0
        } else {
            0.0
        }
    })
}

/// `‖LᵀJ₀L − J₀‖_max`.
pub fn symplectic_residual(l: &RealBlockOperator) -> f64 {
    let j = involution_matrix(l.modes);
    max_abs(&(l.matrix.transpose() * &j * &l.matrix - j))
}

pub fn is_symplectic(l: &RealBlockOperator, tol: f64) -> bool {
    symplectic_residual(l) <= tol
}

/// `‖AᵀA − I‖_max`.
pub fn orthogonality_residual(a: &RealBlockOperator) -> f64 {
    let d = a.dim();
    max_abs(&(a.matrix.transpose() * &a.matrix - DMatrix::identity(d, d)))
}

/// Minimum eigenvalue of the Hermitian matrix `S₀ − iJ₀` and whether it is
/// nonnegative up to `tol`.
pub fn uncertainty_psd_check(s: &RealBlockOperator, tol: f64) -> Result<(bool, f64)> {
    check_symmetric(s, Tolerances::default().symmetric)?;
    let sym = symmetrize(&s.matrix);
    let j = involution_matrix(s.modes);
    let h = DMatrix::from_fn(s.dim(), s.dim(), |r, c| {
        Complex64::new(sym[(r, c)], -j[(r, c)])
    });
    let min = if s.dim() == 0 {
        0.0
    } else {
        SymmetricEigen::new(h).eigenvalues.min()
    };
    Ok((min >= -tol, min))
}

/// Symmetric positive-definite square root.
pub fn principal_sqrt(s: &RealBlockOperator) -> Result<RealBlockOperator> {
    principal_sqrt_with(s, &Tolerances::default())
}

pub fn principal_sqrt_with(s: &RealBlockOperator, tol: &Tolerances) -> Result<RealBlockOperator> {
    let (values, vectors) = positive_eigen(s, tol)?;
    RealBlockOperator::new(spectral_function(&values, &vectors, f64::sqrt))
}

/// Williamson normal form with default tolerances.
pub fn williamson(s: &RealBlockOperator) -> Result<WilliamsonDecomposition> {
    williamson_with(s, &Tolerances::default())
}

/// Williamson normal form through the skew matrix `B₀ = S₀^{1/2} J₀ S₀^{1/2}`.
///
/// The eigenvalues of the Hermitian matrix `iB₀` are `±dⱼ`. For an eigenvector
/// `a + ib` of `+dⱼ` the real vectors `√2 b`, `√2 a` are the `j`-th and
/// `(n+j)`-th columns of an orthogonal `Γ₀` with
/// `Γ₀ᵀ B₀ Γ₀ = [[0, P], [−P, 0]]`, and `L₀ = diag(P^{-1/2}, P^{-1/2}) Γ₀ᵀ S₀^{1/2}`.
pub fn williamson_with(s: &RealBlockOperator, tol: &Tolerances) -> Result<WilliamsonDecomposition> {
    let n = s.modes;
    let (values, vectors) = positive_eigen(s, tol)?;
    let scale = values.max();
    let root = spectral_function(&values, &vectors, f64::sqrt);
    let b = &root * involution_matrix(n) * &root;
    let b = 0.5 * (&b - b.transpose());
    let ib = b.map(|x| Complex64::new(0.0, x));
    let eig = SymmetricEigen::new(ib.clone());

    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&p, &q| eig.eigenvalues[q].total_cmp(&eig.eigenvalues[p]));
    let positive: Vec<usize> = order[..n].to_vec();
    let pairing_tol = tol.pairing * scale;
    for k in 0..n {
        let plus = eig.eigenvalues[order[k]];
        let minus = eig.eigenvalues[order[2 * n - 1 - k]];
        if plus <= 0.0 || (plus + minus).abs() > pairing_tol {
            return Err(Error::NumericalDegeneracy(format!(
                "eigenvalues {plus:e} and {minus:e} of iB₀ do not pair as ±d"
            )));
        }
    }

    // Group the positive eigenvalues into clusters and pick a canonical
    // orthonormal basis inside each one.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &positive {
        match clusters.last_mut() {
            Some(c)
                if (eig.eigenvalues[*c.last().unwrap()] - eig.eigenvalues[idx]).abs()
                    <= pairing_tol =>
            {
                c.push(idx)
            }
            _ => clusters.push(vec![idx]),
        }
    }

    let mut pairs: Vec<(f64, DVector<Complex64>)> = Vec::with_capacity(n);
    for cluster in &clusters {
        let basis: Vec<DVector<Complex64>> = cluster
            .iter()
            .map(|&c| eig.eigenvectors.column(c).into_owned())
            .collect();
        let d = cluster.iter().map(|&c| eig.eigenvalues[c]).sum::<f64>() / cluster.len() as f64;
        for u in canonical_cluster_basis(&basis, 2 * n) {
            pairs.push((d, u));
        }
    }

    let sqrt2 = std::f64::consts::SQRT_2;
    let mut gamma = DMatrix::zeros(2 * n, 2 * n);
    for (j, (_, u)) in pairs.iter().enumerate() {
        for r in 0..2 * n {
            gamma[(r, j)] = sqrt2 * u[r].im;
            gamma[(r, n + j)] = sqrt2 * u[r].re;
        }
    }
    let spectrum: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let inv_sqrt_p = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i == j {
            1.0 / spectrum[i % n].sqrt()
        } else {
            0.0
        }
    });
    let l = RealBlockOperator::new(inv_sqrt_p * gamma.transpose() * root)?;

    let symplectic_residual = symplectic_residual(&l);
    let rebuilt = RealBlockOperator::thermal_form(&spectrum).congruence(&l)?;
    let reconstruction_residual = rebuilt.max_abs_diff(s);

    let condition = scale / values.min();
    let guard = tol.reconstruction * condition.max(1.0);
    if symplectic_residual > guard || reconstruction_residual > guard * scale.max(1.0) {
        return Err(Error::NumericalDegeneracy(format!(
            "Williamson residuals too large (symplectic {symplectic_residual:e}, reconstruction {reconstruction_residual:e})"
        )));
    }

    Ok(WilliamsonDecomposition {
        symplectic: l,
        spectrum,
        symplectic_residual,
        reconstruction_residual,
    })
}

/// Greedy Gram-Schmidt of projected unit vectors `P eₖ` onto the span of
/// `basis`, always taking the largest remaining residual (lowest `k` on ties).
/// The pivot component of each output is made `+i·|·|`.
fn canonical_cluster_basis(basis: &[DVector<Complex64>], dim: usize) -> Vec<DVector<Complex64>> {
    let project = |k: usize| -> DVector<Complex64> {
        let mut v = DVector::zeros(dim);
        for u in basis {
            v += u * u[k].conj();
        }
        v
    };
    let candidates: Vec<DVector<Complex64>> = (0..dim).map(project).collect();
    let mut chosen: Vec<DVector<Complex64>> = Vec::with_capacity(basis.len());
    while chosen.len() < basis.len() {
        let mut best: Option<(usize, DVector<Complex64>, f64)> = None;
        for (k, c) in candidates.iter().enumerate() {
            let mut r = c.clone();
            for q in &chosen {
                let overlap = q.dotc(&r);
                r -= q * overlap;
            }
            let norm = r.norm();
            let better = match &best {
                None => true,
                Some((_, _, b)) => norm > b * (1.0 + 1e-9),
            };
            if better {
                best = Some((k, r, norm));
            }
        }
        let (k, r, norm) = best.expect("cluster basis is nonempty");
        let mut u = r / Complex64::new(norm, 0.0);
        let phase = u[k] / Complex64::new(u[k].norm(), 0.0);
        u *= Complex64::i() / phase;
        chosen.push(u);
    }
    chosen
}

/// Symplectic eigenvalues as moduli of the eigenvalues of `iJ₀S₀`, paired
/// and sorted descending.
///
/// This uses a general (non-symmetric) eigen-solve of `J₀S₀` and shares no
/// code path with [`williamson`].
pub fn symplectic_spectrum(s: &RealBlockOperator) -> Result<Vec<f64>> {
    symplectic_spectrum_with(s, &Tolerances::default())
}

pub fn symplectic_spectrum_with(s: &RealBlockOperator, tol: &Tolerances) -> Result<Vec<f64>> {
    let n = s.modes;
    let (values, _) = positive_eigen(s, tol)?;
    let scale = values.max();
    let js = involution_matrix(n) * symmetrize(&s.matrix);
    let mut moduli: Vec<f64> = js.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    let mut spectrum = Vec::with_capacity(n);
    for pair in moduli.chunks(2) {
        if (pair[0] - pair[1]).abs() > tol.pairing * scale {
            return Err(Error::NumericalDegeneracy(format!(
                "eigenvalue moduli {:e} and {:e} of J₀S₀ do not pair",
                pair[0], pair[1]
            )));
        }
        spectrum.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(spectrum)
}

/// Factorization `L = U · diag(a, a⁻¹) · V` with `U`, `V` orthogonal-symplectic.
///
/// Polar decomposition `L = Q R` with `R = (LᵀL)^{1/2}`, then `R` is
/// diagonalized by an orthogonal-symplectic `O` whose first `n` rows are an
/// isotropic set of eigenvectors `vⱼ` of `R` with eigenvalues `aⱼ ≥ 1` and
/// whose last `n` rows are `J₀ᵀvⱼ`.
pub fn decompose_symplectic(l: &RealBlockOperator) -> Result<SymplecticFactors> {
    let n = l.modes;
    let scale = l.matrix.norm().max(1.0);
    if !is_symplectic(l, 1e-9 * scale * scale) {
        return Err(Error::InvalidInput(format!(
            "operator is not symplectic (residual {:e})",
            symplectic_residual(l)
        )));
    }
    let gram = RealBlockOperator::new(symmetrize(&(l.matrix.transpose() * &l.matrix)))?;
    let (values, vectors) = positive_eigen(&gram, &Tolerances::default())?;
    let root_inv = spectral_function(&values, &vectors, |x| 1.0 / x.sqrt());
    let q = &l.matrix * root_inv;

    let j = involution_matrix(n);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&p, &r| values[r].total_cmp(&values[p]));
    let cluster_tol = 1e-8 * values.max();

    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut span: Vec<DVector<f64>> = Vec::with_capacity(2 * n);
    let mut start = 0;
    while start < order.len() && chosen.len() < n {
        let mut end = start + 1;
        while end < order.len() && (values[order[end - 1]] - values[order[end]]).abs() <= cluster_tol {
            end += 1;
        }
        let mut pool: Vec<DVector<f64>> = order[start..end]
            .iter()
            .map(|&c| vectors.column(c).into_owned())
            .collect();
        while chosen.len() < n && !pool.is_empty() {
            let (best, residual) = pool
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let mut r = v.clone();
                    for s in &span {
                        r -= s * s.dot(&r);
                    }
                    (k, r)
                })
                .fold(None::<(usize, DVector<f64>)>, |acc, (k, r)| match acc {
                    Some((_, ref b)) if b.norm() >= r.norm() * (1.0 - 1e-12) => acc,
                    _ => Some((k, r)),
                })
                .expect("pool is nonempty");
            if residual.norm_squared() <= 0.5 {
                break;
            }
            pool.swap_remove(best);
            let mut v = residual.normalize();
            // sign: largest component positive
            let pivot = v.iamax();
            if v[pivot] < 0.0 {
                v = -v;
            }
            let jv = &j * &v;
            span.push(v.clone());
            span.push(jv);
            chosen.push(v);
        }
        start = end;
    }
    if chosen.len() != n {
        return Err(Error::NumericalDegeneracy(
            "could not find an isotropic eigenbasis for the polar factor".into(),
        ));
    }

    let stretch: Vec<f64> = chosen
        .iter()
        .map(|v| v.dot(&(gram.matrix() * v)).sqrt())
        .collect();
    let jt = j.transpose();
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for (k, v) in chosen.iter().enumerate() {
        let w = &jt * v;
        for c in 0..2 * n {
            o[(k, c)] = v[c];
            o[(n + k, c)] = w[c];
        }
    }
    let left = RealBlockOperator::new(q * o.transpose())?;
    let right = RealBlockOperator::new(o)?;
    Ok(SymplecticFactors {
        left,
        stretch,
        right,
    })
}

/// Frobenius norm of `LᵀL − I`.
pub fn shale_defect(l: &RealBlockOperator) -> f64 {
    let d = l.dim();
    (l.matrix.transpose() * &l.matrix - DMatrix::identity(d, d)).norm()
}

/// Inverse of a symplectic map, `L⁻¹ = −J₀ Lᵀ J₀`.
pub fn symplectic_inverse(l: &RealBlockOperator) -> RealBlockOperator {
    let j = involution_matrix(l.modes);
    RealBlockOperator {
        modes: l.modes,
        matrix: -(&j * l.matrix.transpose() * &j),
    }
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    0.5 * (m + m.transpose())
}

/// Errors unless `S` is symmetric to `tol` relative to its spectral norm.
pub(crate) fn check_symmetric(s: &RealBlockOperator, tol: f64) -> Result<()> {
    let asym = max_abs(&(&s.matrix - s.matrix.transpose()));
    if asym == 0.0 {
        return Ok(());
    }
    let norm = if s.dim() == 0 {
        0.0
    } else {
        SymmetricEigen::new(symmetrize(&s.matrix))
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
    };
    if asym > tol * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidInput(format!(
            "matrix is not symmetric (max asymmetry {asym:e})"
        )));
    }
    Ok(())
}

/// Eigen-decomposition of a symmetric positive-definite operator.
fn positive_eigen(s: &RealBlockOperator, tol: &Tolerances) -> Result<(DVector<f64>, DMatrix<f64>)> {
    check_symmetric(s, tol.symmetric)?;
    if s.dim() == 0 {
        return Err(Error::InvalidDimension("empty block".into()));
    }
    let eig = SymmetricEigen::new(symmetrize(&s.matrix));
    let max = eig.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let min = eig.eigenvalues.min();
    if !(min > tol.positive_definite * max) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// `V f(Λ) Vᵀ`, symmetrized.
fn spectral_function(values: &DVector<f64>, vectors: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let mut scaled = vectors.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= f(values[k]);
    }
    symmetrize(&(scaled * vectors.transpose()))
}
