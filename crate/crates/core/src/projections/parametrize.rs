//! Trace-one projections with a prescribed diagonal, for `d = 2` and `d = 3`.
//!
//! A pure state `u_k = b_k e^{i phi_k}` has diagonal `b_k^2`. The remaining
//! spin coefficients `s_{k,1}` depend only on the phase differences
//! `theta_k = phi_k - phi_{k+1}` (indices mod `d`, so `sum theta_k = 0 mod 2 pi`)
//! and satisfy `s = M_d(theta) t`, where `t` is the `theta = 0` column.
//!
//! For `d = 3` with exactly one `b_k = 0` the diagonal admits a one-parameter
//! family of projections. Nothing special happens numerically there.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::composite::DimVector;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, DensityMatrix};
use crate::spin::fourier_matrix;
use crate::transform::{to_spin, SpinCoefficients};

/// Phase differences `theta_k`, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector(pub Vec<f64>);

impl PhaseVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise sum.
    pub fn add(&self, other: &PhaseVector) -> PhaseVector {
        PhaseVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Distance of `sum theta_k` from the nearest multiple of `2 pi`.
    pub fn closure_defect(&self) -> f64 {
        let s = self.0.iter().sum::<f64>().rem_euclid(TAU);
        s.min(TAU - s)
    }
}

fn phase_diag(theta: &[f64]) -> ComplexMatrix {
    let values: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    ComplexMatrix::diagonal(&values)
}

/// `M_2(theta) = (1/2) H diag(e^{i theta}, e^{-i theta}) H`, which equals
/// `cos(theta) I + i sin(theta) sigma_x`.
pub fn m2_map(theta: f64) -> ComplexMatrix {
    let h = fourier_matrix(2).expect("d = 2");
    let mid = phase_diag(&[theta, -theta]);
    (&(&h * &mid) * &h).scale_real(0.5)
}

/// `M_3(theta) = (1/3) conj(F) diag(e^{i theta_k}) F`.
pub fn m3_map(theta: &PhaseVector) -> Result<ComplexMatrix> {
    if theta.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: theta.len(),
        });
    }
    let f = fourier_matrix(3)?;
    let f_conj = ComplexMatrix::from_fn(3, |r, c| f[(r, c)].conj());
    Ok((&(&f_conj * &phase_diag(&theta.0)) * &f).scale_real(1.0 / 3.0))
}

/// Circulant weights `f(k, theta) = (1/3) sum_m e^{i theta_m} eta^{m k}`, so
/// that `M_3(theta) = sum_k f(k, theta) S_{0,k}`.
pub fn m3_coefficients(theta: &PhaseVector) -> Result<[Complex64; 3]> {
    if theta.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: theta.len(),
        });
    }
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = theta
            .0
            .iter()
            .enumerate()
            .map(|(m, &t)| Complex64::from_polar(1.0, t + TAU * (m * k) as f64 / 3.0))
            .sum::<Complex64>()
            / 3.0;
    }
    Ok(out)
}

/// `(s_{0,1}, s_{1,1}, ..., s_{d-1,1})` of a single-qudit table.
pub fn spin_column(coeffs: &SpinCoefficients) -> Vec<Complex64> {
    let d = coeffs.dims().total();
    (0..d).map(|j| coeffs.get_flat(j, 1)).collect()
}

/// Rank-one projection `|u><u|` with `u_k = b_k e^{i phi_k}`, `phi_0 = 0` and
/// `phi_{k+1} = phi_k - theta_k`, plus its spin coefficients.
pub fn projection_from_diagonal(
    d: usize,
    amplitudes: &[f64],
    theta: &PhaseVector,
) -> Result<(DensityMatrix, SpinCoefficients)> {
    if d != 2 && d != 3 {
        return Err(Error::InvalidParameter(format!(
            "diagonal parametrization is implemented for d = 2 and d = 3, got {d}"
        )));
    }
    if amplitudes.len() != d || theta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: if amplitudes.len() != d {
                amplitudes.len()
            } else {
                theta.len()
            },
        });
    }
    if amplitudes.iter().any(|&b| b.is_nan() || b < 0.0) {
        return Err(Error::InvalidParameter("amplitudes must be non-negative".into()));
    }
    let norm: f64 = amplitudes.iter().map(|b| b * b).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "amplitudes must satisfy sum b_k^2 = 1, got {norm}"
        )));
    }
    if theta.closure_defect() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "phase differences must sum to 0 mod 2π, got {}",
            theta.0.iter().sum::<f64>()
        )));
    }
    let mut phi = 0.0;
    let mut state = Vec::with_capacity(d);
    for (k, &b) in amplitudes.iter().enumerate() {
        state.push(Complex64::from_polar(b, phi));
        phi -= theta.0[k];
    }
    let dims = DimVector::new(vec![d])?;
    let rho = DensityMatrix::trusted(ComplexMatrix::outer(&state), dims);
    let coeffs = to_spin(&rho);
    Ok((rho, coeffs))
}
