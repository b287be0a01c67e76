//! Computational <-> spin coefficient transforms.
//!
//! A matrix on `D` expands as `rho = (1/N) sum_{j,k} s_{j,k} S^[N]_{j,k}` with
//! `s_{j,k} = Tr(S_{j,k}^† rho)`. Writing `a_{r,k} = rho_{r, r⊕k}`, each column
//! `s_{·,k}` is the conjugate multidimensional Fourier transform of `a_{·,k}`,
//! applied one subsystem axis at a time.

use num_complex::Complex64;

use crate::composite::{composite_spin, CompositeSpinLabel, DimVector};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numerics::{trace_inner, ComplexMatrix, DensityMatrix, ZERO};
use crate::spin::{eta_table, RootOfUnity};

/// Dense table of spin coefficients, `table[j * N + k] = s_{j,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinCoefficients {
    dims: DimVector,
    table: Vec<Complex64>,
}

impl SpinCoefficients {
    pub fn new(dims: DimVector, table: Vec<Complex64>) -> Result<Self> {
        let n = dims.total();
        if table.len() != n * n {
            return Err(Error::BadEntryCount {
                dim: n,
                len: table.len(),
            });
        }
        Ok(Self { dims, table })
    }

    /// Only `s_{0,0} = 1`: the coefficients of `I/N`.
    pub fn identity(dims: DimVector) -> Self {
        let n = dims.total();
        let mut table = vec![ZERO; n * n];
        table[0] = Complex64::new(1.0, 0.0);
        Self { dims, table }
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn table(&self) -> &[Complex64] {
        &self.table
    }

    pub fn get_flat(&self, j: usize, k: usize) -> Complex64 {
        self.table[j * self.dims.total() + k]
    }

    pub fn set_flat(&mut self, j: usize, k: usize, value: Complex64) {
        let n = self.dims.total();
        self.table[j * n + k] = value;
    }

    pub fn get(&self, label: &CompositeSpinLabel) -> Complex64 {
        self.get_flat(self.dims.encode(&label.j), self.dims.encode(&label.k))
    }

    /// Iterates `(j, k, s_{j,k})` over flat labels in row-major order.
    pub fn iter_flat(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let n = self.dims.total();
        self.table.iter().enumerate().map(move |(i, &s)| (i / n, i % n, s))
    }

    /// Phase `prod_i eta_i^{j_i k_i}` relating `S_{j,k}^†` to `S_{-j,-k}`.
    pub fn dagger_phase(&self, j: usize, k: usize) -> RootOfUnity {
        let jd = self.dims.decode(j);
        let kd = self.dims.decode(k);
        self.dims
            .as_slice()
            .iter()
            .zip(jd.digits().iter().zip(kd.digits()))
            .fold(RootOfUnity::ONE, |acc, (&d, (&a, &b))| {
                acc * RootOfUnity::eta_pow(d, ((a * b) % d) as i64)
            })
    }

    /// Flat label of `(-j, -k)`.
    pub fn partner(&self, j: usize, k: usize) -> (usize, usize) {
        let neg = |x: usize| self.dims.encode(&self.dims.negate(&self.dims.decode(x)));
        (neg(j), neg(k))
    }

    /// Worst violation of `s_{-j,-k} = (prod eta_i^{j_i k_i}) conj(s_{j,k})`,
    /// which holds for every Hermitian matrix.
    pub fn conjugation_symmetry_defect(&self) -> f64 {
        let n = self.dims.total();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                let (pj, pk) = self.partner(j, k);
                let want = self.dagger_phase(j, k).value() * self.get_flat(j, k).conj();
                worst = worst.max((self.get_flat(pj, pk) - want).norm());
            }
        }
        worst
    }
}

/// In-place multidimensional DFT over the subsystem axes of `v` (length `N`).
/// `sign = -1` applies `sum_r eta^{-j r}`, `sign = +1` applies `sum_r eta^{j r}`.
fn fourier_axes(
    v: &mut [Complex64],
    dims: &DimVector,
    tables: &[Vec<Complex64>],
    sign: i64,
    scratch: &mut Vec<Complex64>,
) {
    let n = v.len();
    let mut stride = n;
    for (axis, &d) in dims.as_slice().iter().enumerate() {
        stride /= d;
        let w = &tables[axis];
        let block = d * stride;
        for base_hi in (0..n).step_by(block) {
            for low in 0..stride {
                let base = base_hi + low;
                scratch.clear();
                scratch.extend((0..d).map(|r| v[base + r * stride]));
                for j in 0..d {
                    let mut acc = ZERO;
                    for (r, x) in scratch.iter().enumerate() {
                        let e = (j * r) % d;
                        let e = if sign < 0 { (d - e) % d } else { e };
                        acc += w[e] * x;
                    }
                    v[base + j * stride] = acc;
                }
            }
        }
    }
}

fn tables(dims: &DimVector) -> Vec<Vec<Complex64>> {
    dims.as_slice().iter().map(|&d| eta_table(d)).collect()
}

/// Spin coefficients of a matrix on `dims`. Works for any square matrix,
/// Hermitian or not.
pub fn matrix_to_spin_with(m: &ComplexMatrix, dims: &DimVector, exec: Exec) -> Result<SpinCoefficients> {
    let n = dims.total();
    if m.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: m.dim(),
        });
    }
    let tables = tables(dims);
    let columns = exec.map_range(n, |k| {
        let mut a: Vec<Complex64> = (0..n).map(|r| m[(r, dims.add_flat(r, k))]).collect();
        fourier_axes(&mut a, dims, &tables, -1, &mut Vec::new());
        a
    });
    let mut table = vec![ZERO; n * n];
    for (k, col) in columns.into_iter().enumerate() {
        for (j, s) in col.into_iter().enumerate() {
            table[j * n + k] = s;
        }
    }
    Ok(SpinCoefficients {
        dims: dims.clone(),
        table,
    })
}

pub fn to_spin_with(rho: &DensityMatrix, exec: Exec) -> SpinCoefficients {
    matrix_to_spin_with(rho.matrix(), rho.dims(), exec).expect("density dims are consistent")
}

/// `s_{j,k} = Tr(S_{j,k}^† rho)` for every label.
pub fn to_spin(rho: &DensityMatrix) -> SpinCoefficients {
    to_spin_with(rho, Exec::default())
}

/// Reference route: one explicit trace inner product per label, `O(N^4)`.
pub fn to_spin_by_trace(m: &ComplexMatrix, dims: &DimVector) -> Result<SpinCoefficients> {
    let n = dims.total();
    let mut table = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let s = composite_spin(dims, &CompositeSpinLabel::from_flat(dims, j, k))?;
            table.push(trace_inner(&s, m)?);
        }
    }
    SpinCoefficients::new(dims.clone(), table)
}

pub fn from_spin_with(coeffs: &SpinCoefficients, exec: Exec) -> ComplexMatrix {
    let dims = &coeffs.dims;
    let n = dims.total();
    let tables = tables(dims);
    let scale = 1.0 / n as f64;
    let columns = exec.map_range(n, |k| {
        let mut v: Vec<Complex64> = (0..n).map(|j| coeffs.table[j * n + k]).collect();
        fourier_axes(&mut v, dims, &tables, 1, &mut Vec::new());
        v
    });
    let mut m = ComplexMatrix::zeros(n);
    for (k, col) in columns.into_iter().enumerate() {
        for (r, x) in col.into_iter().enumerate() {
            m[(r, dims.add_flat(r, k))] = x * scale;
        }
    }
    m
}

/// `(1/N) sum_{j,k} s_{j,k} S^[N]_{j,k}`
pub fn from_spin(coeffs: &SpinCoefficients) -> ComplexMatrix {
    from_spin_with(coeffs, Exec::default())
}

/// `sum_{(j,k) != (0,0)} |s_{j,k}|`
pub fn spin_l1_norm(coeffs: &SpinCoefficients) -> f64 {
    coeffs.table.iter().skip(1).map(|s| s.norm()).sum()
}

/// Both sides of `sum |s_{j,k}|^2 = N sum |rho_{j,k}|^2`.
pub fn l2_identity_check(rho: &DensityMatrix) -> (f64, f64) {
    let coeffs = to_spin(rho);
    let lhs = coeffs.table.iter().map(|s| s.norm_sqr()).sum();
    let rhs = rho.dim() as f64 * rho.matrix().frobenius_norm_sqr();
    (lhs, rhs)
}
