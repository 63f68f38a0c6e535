//! Dense real linear algebra for the game analyzers.
//!
//! Everything here operates on small row-major matrices (the relevant scale
//! is n <= 64). The symmetric eigensolver is cyclic Jacobi; characteristic
//! polynomials come from the Faddeev-LeVerrier recurrence.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::scheme::HgdaScheme;
use crate::tolerance::Tolerances;

/// Largest companion dimension `k * 2n` accepted by [`block_companion`].
pub const MAX_COMPANION_DIM: usize = 4096;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { rows: n_rows, cols: n_cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `selfᵀ * v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn determinant(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))
                .unwrap_or(col);
            if a[(pivot, col)] == 0.0 {
                return Ok(0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for i in col + 1..n {
                let f = a[(i, col)] / p;
                if f != 0.0 {
                    for j in col..n {
                        a[(i, j)] -= f * a[(col, j)];
                    }
                }
            }
        }
        Ok(det)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Payoff matrix `A` of the bilinear game `f(x, y) = xᵀ A y`.
///
/// Always square with finite entries. The spectral norm and determinant are
/// computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GameMatrix {
    entries: Matrix,
    spectral_norm: f64,
    determinant: f64,
}

impl GameMatrix {
    pub fn new(entries: Matrix) -> Result<Self> {
        if !entries.is_square() || entries.rows() == 0 {
            return Err(Error::InvalidInput(format!(
                "game matrix must be square and non-empty, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        if !entries.is_finite() {
            return Err(Error::InvalidInput("game matrix has non-finite entries".into()));
        }
        let spectral_norm = spectral_norm(&entries)?;
        let determinant = entries.determinant()?;
        Ok(Self { entries, spectral_norm, determinant })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// `c * I_n`.
    pub fn scaled_identity(n: usize, c: f64) -> Result<Self> {
        Self::new(Matrix::identity(n).scaled(c))
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    /// γ = ‖A‖₂.
    pub fn spectral_norm(&self) -> f64 {
        self.spectral_norm
    }

    pub fn determinant(&self) -> f64 {
        self.determinant
    }

    /// `σ_max / σ_min`; infinite for singular matrices.
    pub fn condition_number(&self) -> Result<f64> {
        let gram = self.entries.matmul(&self.entries.transpose())?;
        let eig = symmetric_eigenvalues(&gram)?;
        let lo = eig[0].max(0.0).sqrt();
        let hi = eig[eig.len() - 1].max(0.0).sqrt();
        Ok(if lo == 0.0 { f64::INFINITY } else { hi / lo })
    }

    /// Rejects matrices the reduction does not cover.
    pub fn ensure_nonsingular(&self, tol: &Tolerances) -> Result<()> {
        if self.determinant.abs() <= tol.singular_det {
            return Err(Error::Unsupported("singular matrix".into()));
        }
        Ok(())
    }
}

/// Eigenvalues of `η² A Aᵀ` together with `γ = ‖A‖₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub spectral_norm: f64,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

/// Largest singular value of `a`.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    let gram = a.transpose().matmul(a)?;
    let eig = symmetric_eigenvalues(&gram)?;
    Ok(eig[eig.len() - 1].max(0.0).sqrt())
}

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations. The input is symmetrized by averaging before the sweep.
pub fn symmetric_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::InvalidInput("symmetric eigensolve needs a square matrix".into()));
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.rows();
    let scale = m.max_abs().max(1.0);
    let mut a = m.clone();
    for i in 0..n {
        for j in i + 1..n {
            let (u, l) = (m[(i, j)], m[(j, i)]);
            if (u - l).abs() > Tolerances::DEFAULT.symmetry * scale {
                return Err(Error::InvalidInput(format!(
                    "matrix is not symmetric: |m[{i},{j}] - m[{j},{i}]| = {:e}",
                    (u - l).abs()
                )));
            }
            let avg = 0.5 * (u + l);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let diag: f64 = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum();
        if off <= f64::EPSILON * f64::EPSILON * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Eigenvalues Λ of `η² A Aᵀ` and the spectral norm of `A`.
pub fn game_spectrum(game: &GameMatrix, eta: f64) -> Result<Spectrum> {
    let a = game.entries();
    let gram = a.matmul(&a.transpose())?.scaled(eta * eta);
    let eigenvalues = symmetric_eigenvalues(&gram)?;
    Ok(Spectrum { eigenvalues, spectral_norm: game.spectral_norm() })
}

/// Monic characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier.
pub fn characteristic_polynomial(m: &Matrix) -> Result<Polynomial> {
    if !m.is_square() {
        return Err(Error::InvalidInput("characteristic polynomial of a non-square matrix".into()));
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.rows();
    // coeffs[i] multiplies x^i.
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut aux = Matrix::zeros(n, n);
    for k in 1..=n {
        // aux <- M * aux_prev + c_{n-k+1} I
        let mut next = m.matmul(&aux)?;
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        let prod = m.matmul(&next)?;
        coeffs[n - k] = -prod.trace() / k as f64;
        aux = next;
    }
    Ok(Polynomial::new(coeffs))
}

/// First-order companion of the joint recursion
/// `w_{t+k} = Σ_i (p_i I + η q_i J) w_{t+k-i}` with `J = [[0, -A], [Aᵀ, 0]]`.
///
/// The state is `(w_{t+k-1}, …, w_t)`; the result is `k·2n` square. Its
/// eigenvalues are the roots of `det([[S(z) I, G(z) η A], [-G(z) η Aᵀ, S(z) I]])`.
pub fn block_companion(scheme: &HgdaScheme, game: &GameMatrix) -> Result<Matrix> {
    let k = scheme.horizon();
    let n = game.dim();
    let block = 2 * n;
    let dim = k
        .checked_mul(block)
        .filter(|&d| d <= MAX_COMPANION_DIM)
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "companion dimension k*2n = {k}*{block} exceeds {MAX_COMPANION_DIM}"
            ))
        })?;
    let a = game.entries();
    let eta = scheme.eta();
    let mut c = Matrix::zeros(dim, dim);
    for (i, (&p, &q)) in scheme.p().iter().zip(scheme.q()).enumerate() {
        let col0 = i * block;
        let g = eta * q;
        for r in 0..block {
            c[(r, col0 + r)] = p;
        }
        for r in 0..n {
            for s in 0..n {
                // x rows: -η q A acting on y
                c[(r, col0 + n + s)] = -g * a[(r, s)];
                // y rows: +η q Aᵀ acting on x
                c[(n + r, col0 + s)] = g * a[(s, r)];
            }
        }
    }
    for r in block..dim {
        c[(r, r - block)] = 1.0;
    }
    Ok(c)
}
