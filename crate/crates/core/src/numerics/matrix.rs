use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::contract(format!(
                "{} entries supplied for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Real diagonal matrix, handy for synthetic beamspace inputs.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::contract(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self · selfᴴ`, always Hermitian positive semidefinite.
    pub fn gram_rows(&self) -> CMatrix {
        let n = self.rows;
        let mut g = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v: Complex64 = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(a, b)| a * b.conj())
                    .sum();
                g[(i, j)] = v;
                g[(j, i)] = v.conj();
            }
        }
        g
    }

    /// `selfᴴ · self`.
    pub fn gram_cols(&self) -> CMatrix {
        let n = self.cols;
        let mut g = CMatrix::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ai = row[i].conj();
                if ai.re == 0.0 && ai.im == 0.0 {
                    continue;
                }
                for j in 0..=i {
                    g[(i, j)] += ai * row[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g[(j, i)] = g[(i, j)].conj();
            }
        }
        g
    }

    /// Squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    /// Sub-matrix with the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<CMatrix> {
        if let Some(&r) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::contract(format!(
                "row index {r} out of range for {} rows",
                self.rows
            )));
        }
        if let Some(&c) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::contract(format!(
                "column index {c} out of range for {} columns",
                self.cols
            )));
        }
        Ok(CMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])]
        }))
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn ensure_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!("{what} has non-finite entries")))
        }
    }

    /// Largest entrywise distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    /// Panics on a shape mismatch; use [`CMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix shape mismatch")
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Cholesky factor `L` of a Hermitian positive definite matrix, `A = L·Lᴴ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<Complex64>,
}

impl Cholesky {
    pub fn new(a: &CMatrix) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::contract(format!(
                "Cholesky needs a square matrix, got {}x{}",
                a.rows, a.cols
            )));
        }
        let n = a.rows;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::domain(format!(
                    "matrix is not positive definite (pivot {j} = {d})"
                )));
            }
            let djj = d.sqrt();
            l[j * n + j] = Complex64::new(djj, 0.0);
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / djj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Natural log of the determinant.
    pub fn ln_det(&self) -> f64 {
        (0..self.n)
            .map(|i| self.l[i * self.n + i].re.ln())
            .sum::<f64>()
            * 2.0
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i].re;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i].conj() * y[k];
            }
            y[i] = s / self.l[i * n + i].re;
        }
        y
    }

    /// `bᴴ A⁻¹ b`, real and nonnegative for Hermitian positive definite `A`.
    pub fn quad_form_inv(&self, b: &[Complex64]) -> f64 {
        // With A = L Lᴴ, bᴴ A⁻¹ b = ‖L⁻¹ b‖².
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i].re;
        }
        y.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `log₂|I + scale·h·hᴴ|`.
///
/// Factors whichever of `I + s·hhᴴ` and `I + s·hᴴh` is smaller; both have the
/// same determinant.
pub fn logdet2_capacity(h: &CMatrix, scale: f64) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::domain(format!(
            "scale must be positive, got {scale}"
        )));
    }
    h.ensure_finite("channel")?;
    if h.rows == 0 || h.cols == 0 {
        return Ok(0.0);
    }
    let mut gram = if h.rows <= h.cols {
        h.gram_rows()
    } else {
        h.gram_cols()
    };
    let n = gram.rows;
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] *= scale;
        }
        gram[(i, i)] += 1.0;
    }
    let chol = Cholesky::new(&gram)?;
    Ok((chol.ln_det() / std::f64::consts::LN_2).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_matrix_has_zero_capacity() {
        for (r, c) in [(1, 1), (3, 2), (2, 5)] {
            assert_eq!(logdet2_capacity(&CMatrix::zeros(r, c), 0.3).unwrap(), 0.0);
        }
    }

    #[test]
    fn identity_capacity() {
        let v = logdet2_capacity(&CMatrix::identity(2), 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn non_finite_is_domain_error() {
        let mut h = CMatrix::identity(2);
        h[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(logdet2_capacity(&h, 1.0), Err(Error::Domain(_))));
        assert!(matches!(
            logdet2_capacity(&CMatrix::identity(2), 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cholesky_solve_round_trip() {
        let a = CMatrix::from_vec(
            2,
            2,
            vec![c(4.0, 0.0), c(1.0, 2.0), c(1.0, -2.0), c(6.0, 0.0)],
        )
        .unwrap();
        let chol = Cholesky::new(&a).unwrap();
        let b = [c(1.0, -1.0), c(0.5, 3.0)];
        let x = chol.solve(&b);
        for i in 0..2 {
            let ax: Complex64 = (0..2).map(|k| a[(i, k)] * x[k]).sum();
            assert!((ax - b[i]).norm() < 1e-12);
        }
        let q: f64 = b.iter().zip(&x).map(|(bi, xi)| (bi.conj() * xi).re).sum();
        assert!((q - chol.quad_form_inv(&b)).abs() < 1e-12);
        // det = 24 - |1+2i|² = 19
        assert!((chol.ln_det() - 19f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn select_rejects_out_of_range() {
        let m = CMatrix::identity(3);
        assert!(matches!(m.select(&[0, 3], &[0]), Err(Error::Contract(_))));
        let s = m.select(&[2], &[2]).unwrap();
        assert_eq!(s[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn gram_variants_agree_with_products() {
        let h = CMatrix::from_fn(3, 2, |i, j| c(i as f64 - j as f64, 0.5 * (i * j) as f64));
        let g1 = &h * &h.adjoint();
        let g2 = &h.adjoint() * &h;
        assert!(h.gram_rows().max_abs_diff(&g1) < 1e-14);
        assert!(h.gram_cols().max_abs_diff(&g2) < 1e-14);
    }
}
