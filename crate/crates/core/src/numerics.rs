//! Dense complex matrices and the density-matrix checks built on them.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::composite::DimVector;
use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Comparison tolerances. All checks are absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub reconstruction_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_eps: 1e-9,
            reconstruction_eps: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, reconstruction_eps: f64) -> Result<Self> {
        if abs_eps.is_nan() || abs_eps <= 0.0 || reconstruction_eps.is_nan() || reconstruction_eps <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be strictly positive (abs {abs_eps}, reconstruction {reconstruction_eps})"
            )));
        }
        Ok(Self {
            abs_eps,
            reconstruction_eps,
        })
    }
}

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be >= 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::BadEntryCount {
                dim,
                len: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Self { dim, entries }
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Rank-one projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |r, c| v[r] * v[c].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `self += factor * other`
    pub fn add_scaled(&mut self, factor: Complex64, other: &ComplexMatrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += factor * b;
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        check_same_dim(self, other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                for (o, b) in out[r * n..(r + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: n, entries: out })
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..m {
            acc = acc.matmul(self).expect("same dimension");
        }
        acc
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        check_same_dim(self, other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, eps: f64) -> bool {
        self.max_abs_diff(other).map(|d| d <= eps).unwrap_or(false)
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Worst Hermiticity defect `max |m[r,c] - conj(m[c,r])|` and where it occurs.
    pub fn hermitian_defect(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = (self[(r, c)] - self[(c, r)].conj()).norm();
                if d > worst.0 {
                    worst = (d, r, c);
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.hermitian_defect().0 <= eps
    }

    /// Eigenvalues of the Hermitian part `(m + m^†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let sym = DMatrix::from_fn(n, n, |r, c| 0.5 * (self[(r, c)] + self[(c, r)].conj()));
        let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn min_hermitian_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()[0]
    }
}

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            actual: b.dim,
        });
    }
    Ok(())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r * self.dim + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("dimension mismatch")
    }
}

/// Kronecker product. Row `(j1, j2)` of the result is `j1 * b.dim + j2`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let n = da * db;
    let mut entries = vec![ZERO; n * n];
    for j1 in 0..da {
        for k1 in 0..da {
            let x = a[(j1, k1)];
            if x == ZERO {
                continue;
            }
            for j2 in 0..db {
                let row = (j1 * db + j2) * n + k1 * db;
                for k2 in 0..db {
                    entries[row + k2] = x * b[(j2, k2)];
                }
            }
        }
    }
    ComplexMatrix { dim: n, entries }
}

/// Left-to-right Kronecker product of a non-empty list.
pub fn tensor_all<'a, I>(factors: I) -> ComplexMatrix
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    let mut iter = factors.into_iter();
    let first = iter.next().expect("at least one factor").clone();
    iter.fold(first, |acc, f| tensor(&acc, f))
}

/// `Tr(a^† b)`
pub fn trace_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    check_same_dim(a, b)?;
    Ok(a.entries.iter().zip(&b.entries).map(|(x, y)| x.conj() * y).sum())
}

/// A validated density matrix on a tensor product with local dimensions `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: DimVector,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Maximally mixed state `I/N`.
    pub fn maximally_mixed(dims: DimVector) -> Self {
        let n = dims.total();
        Self {
            matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
            dims,
        }
    }

    /// Wraps a matrix that is known to be a density by construction.
    pub(crate) fn trusted(matrix: ComplexMatrix, dims: DimVector) -> Self {
        debug_assert_eq!(matrix.dim, dims.total());
        Self { matrix, dims }
    }

    pub fn partial_transpose(&self, subsystem: usize) -> Result<ComplexMatrix> {
        partial_transpose(&self.matrix, &self.dims, subsystem)
    }
}

/// Validates `m` as a density on `dims`: Hermitian, unit trace, and positive
/// semidefinite, each within `tol.abs_eps`.
pub fn check_density(m: ComplexMatrix, dims: DimVector, tol: Tolerance) -> Result<DensityMatrix> {
    if dims.total() != m.dim {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            actual: m.dim,
        });
    }
    let (defect, row, col) = m.hermitian_defect();
    if defect > tol.abs_eps {
        return Err(Error::NotHermitian { row, col, defect });
    }
    let trace = m.trace();
    if (trace - ONE).norm() > tol.abs_eps {
        return Err(Error::BadTrace { trace: trace.re });
    }
    let min = m.min_hermitian_eigenvalue();
    if min < -tol.abs_eps {
        return Err(Error::NegativeEigenvalue { value: min });
    }
    Ok(DensityMatrix { matrix: m, dims })
}

/// Transposes the indices of subsystem `subsystem` (0-based):
/// entry `((j_1..j_b),(k_1..k_b))` of the result is `m` at the same pair with
/// `j_r` and `k_r` exchanged.
pub fn partial_transpose(m: &ComplexMatrix, dims: &DimVector, subsystem: usize) -> Result<ComplexMatrix> {
    if dims.total() != m.dim {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            actual: m.dim,
        });
    }
    if subsystem >= dims.len() {
        return Err(Error::SubsystemOutOfRange {
            subsystem,
            count: dims.len(),
        });
    }
    // Flat index = high * (d * low_size) + digit * low_size + low.
    let d = dims.as_slice()[subsystem];
    let low_size: usize = dims.as_slice()[subsystem + 1..].iter().product();
    Ok(ComplexMatrix::from_fn(m.dim, |r, c| {
        let dr = (r / low_size) % d;
        let dc = (c / low_size) % d;
        let r2 = r - dr * low_size + dc * low_size;
        let c2 = c - dc * low_size + dr * low_size;
        m[(r2, c2)]
    }))
}
