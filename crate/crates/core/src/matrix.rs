//! Dense complex matrices: products, Kronecker products, partial trace,
//! expectation values and distances.
//!
//! Storage is row-major. Every operation is a pure function of its inputs.
//! There is no eigensolver; spectral data needed elsewhere is available in
//! closed form.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default cap on the row/column count produced by [`kron`].
pub const DEFAULT_DIM_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Convenience constructor from `(re, im)` pairs in `f64`.
    pub fn from_pairs(rows: usize, cols: usize, pairs: &[(f64, f64)]) -> Result<Self> {
        let data = pairs
            .iter()
            .map(|&(re, im)| Complex::new(T::lit(re), T::lit(im)))
            .collect();
        Self::from_vec(rows, cols, data)
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// The projector `|v><v|` onto a (not necessarily normalised) vector.
    pub fn outer(v: &[Complex<T>]) -> Self {
        let d = v.len();
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Accumulates `self += s * other` in place.
    pub fn add_scaled(&mut self, other: &Self, s: T) -> Result<()> {
        self.same_shape(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + b * s;
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        Ok(out)
    }

    /// Anticommutator `ab + ba`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.try_add(&other.matmul(self)?)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square()
            && self
                .try_sub(&self.adjoint())
                .map(|d| d.frobenius_norm() <= tol)
                .unwrap_or(false)
    }

    /// Positive-semidefiniteness up to `tol`, decided by a Cholesky
    /// factorisation of `self + tol * I`.
    pub fn is_positive_semidefinite(&self, tol: T) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let n = self.rows;
        let mut l = vec![Complex::<T>::zero(); n * n];
        for j in 0..n {
            let mut diag = self[(j, j)].re + tol;
            for k in 0..j {
                diag = diag - l[j * n + k].norm_sqr();
            }
            if diag <= T::zero() {
                return false;
            }
            let d = diag.sqrt();
            l[j * n + j] = Complex::new(d, T::zero());
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s = s - l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / d;
            }
        }
        true
    }

    /// `(I_a (x) k) self (I_a (x) k)^dagger` for a square `k` acting on the
    /// second tensor factor, computed block by block.
    pub fn conjugate_second_factor(&self, k: &Self, dim_a: usize) -> Result<Self> {
        let dim_b = second_factor_dim(self, dim_a)?;
        if !k.is_square() || k.rows != dim_b {
            return Err(Error::DimensionMismatch(format!(
                "operator {}x{} does not act on factor of dimension {dim_b}",
                k.rows, k.cols
            )));
        }
        let k_adj = k.adjoint();
        let mut out = Self::zeros(self.rows, self.cols);
        let mut block = Self::zeros(dim_b, dim_b);
        for a in 0..dim_a {
            for a2 in 0..dim_a {
                for i in 0..dim_b {
                    for j in 0..dim_b {
                        block[(i, j)] = self[(a * dim_b + i, a2 * dim_b + j)];
                    }
                }
                let res = k.matmul(&block)?.matmul(&k_adj)?;
                for i in 0..dim_b {
                    for j in 0..dim_b {
                        out[(a * dim_b + i, a2 * dim_b + j)] = res[(i, j)];
                    }
                }
            }
        }
        Ok(out)
    }
}

fn second_factor_dim<T: Scalar>(m: &Matrix<T>, dim_a: usize) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if dim_a == 0 || !m.rows.is_multiple_of(dim_a) {
        return Err(Error::NotDivisible {
            dim: m.rows,
            factor: dim_a,
        });
    }
    Ok(m.rows / dim_a)
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.cols + c]
    }
}

// The operator impls panic on shape mismatch; use the `try_*` forms when the
// shapes are not known to agree.
impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        self.try_add(rhs).expect("matrix shapes agree")
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        self.try_sub(rhs).expect("matrix shapes agree")
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.matmul(rhs).expect("matrix shapes agree")
    }
}

/// Kronecker product `a (x) b`, capped at [`DEFAULT_DIM_CAP`].
pub fn kron<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    kron_with_cap(a, b, DEFAULT_DIM_CAP)
}

pub fn kron_with_cap<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, cap: usize) -> Result<Matrix<T>> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows.max(cols) > cap {
        return Err(Error::SizeLimit {
            what: "Kronecker product dimension",
            value: rows.max(cols),
            limit: cap,
        });
    }
    let mut out = Matrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let s = a[(ar, ac)];
            if s.is_zero() {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = s * b[(br, bc)];
                }
            }
        }
    }
    Ok(out)
}

/// Traces out the first tensor factor of dimension `dim_a`.
pub fn partial_trace_first<T: Scalar>(m: &Matrix<T>, dim_a: usize) -> Result<Matrix<T>> {
    let dim_b = second_factor_dim(m, dim_a)?;
    let mut out = Matrix::zeros(dim_b, dim_b);
    for a in 0..dim_a {
        for i in 0..dim_b {
            for j in 0..dim_b {
                out[(i, j)] = out[(i, j)] + m[(a * dim_b + i, a * dim_b + j)];
            }
        }
    }
    Ok(out)
}

/// Real expectation value `tr(rho obs)`. An imaginary residue above the
/// scalar's consistency tolerance is reported as an error.
pub fn expectation<T: Scalar>(rho: &Matrix<T>, obs: &Matrix<T>) -> Result<T> {
    if !rho.is_square() || rho.rows != obs.rows || rho.cols != obs.cols {
        return Err(Error::DimensionMismatch(format!(
            "state {}x{} vs observable {}x{}",
            rho.rows, rho.cols, obs.rows, obs.cols
        )));
    }
    let d = rho.rows;
    let mut acc = Complex::<T>::zero();
    for j in 0..d {
        for k in 0..d {
            acc = acc + rho[(j, k)] * obs[(k, j)];
        }
    }
    if acc.im.abs() > T::consistency_tol() {
        return Err(Error::NumericalInconsistency {
            what: "expectation imaginary part",
            residue: acc.im.as_f64(),
        });
    }
    Ok(acc.re)
}

pub fn frobenius_distance<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    Ok(a.try_sub(b)?.frobenius_norm())
}
