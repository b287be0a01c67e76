//! Werner family `W(s) = (1-s)/d^n I + s |psi><psi|` with
//! `psi = d^{-1/2} sum_k |k...k>`.
//!
//! For prime `p` the spin table is `s_{0,0} = 1`, `s_{j,k~} = s` for `j` in
//! `Ind(p,n)` and every repeated index `k~`, zero elsewhere. `W(s)` is
//! separable exactly when `s <= 1/(1 + p^{n-1})`.

use num_complex::Complex64;

use crate::composite::{DimVector, MultiIndex};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, DensityMatrix};
use crate::projections::{cyclic_family_density, is_prime, projection_factor, ProjectionSpec};
use crate::separability::{SeparableDecomposition, Term};
use crate::spin::{RootOfUnity, SpinLabel};
use crate::transform::SpinCoefficients;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerSpec {
    d: usize,
    n: usize,
    s: f64,
}

impl WernerSpec {
    pub fn new(d: usize, n: usize, s: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if n < 2 {
            return Err(Error::TooFewSubsystems { min: 2, actual: n });
        }
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidParameter(format!("s must lie in [0, 1], got {s}")));
        }
        Ok(Self { d, n, s })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dims(&self) -> DimVector {
        DimVector::uniform(self.d, self.n).expect("validated")
    }
}

fn require_prime(p: usize) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Flat index of the repeated multi-index `(k, ..., k)`.
pub fn repeated_index(d: usize, n: usize, k: usize) -> usize {
    (0..n).fold(0, |acc, _| acc * d + k)
}

pub fn werner_density(spec: WernerSpec) -> DensityMatrix {
    let dims = spec.dims();
    let big_n = dims.total();
    let d = spec.d;
    let mut m = ComplexMatrix::identity(big_n).scale_real((1.0 - spec.s) / big_n as f64);
    let off = Complex64::new(spec.s / d as f64, 0.0);
    for a in 0..d {
        for b in 0..d {
            m[(repeated_index(d, spec.n, a), repeated_index(d, spec.n, b))] += off;
        }
    }
    DensityMatrix::trusted(m, dims)
}

/// `Ind(p, n)`: multi-indices over `n` digits in `Z_p` summing to 0 mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSetIndPN {
    pub p: usize,
    pub n: usize,
    pub members: Vec<MultiIndex>,
}

impl IndexSetIndPN {
    pub fn contains(&self, j: &MultiIndex) -> bool {
        self.members.binary_search(j).is_ok()
    }
}

/// Members in increasing flat order; `p^{n-1}` of them.
pub fn ind_set(p: usize, n: usize) -> Result<IndexSetIndPN> {
    require_prime(p)?;
    let dims = DimVector::uniform(p, n)?;
    let members = dims
        .indices()
        .filter(|j| j.digits().iter().sum::<usize>() % p == 0)
        .collect();
    Ok(IndexSetIndPN { p, n, members })
}

pub fn werner_spin_coeffs(spec: WernerSpec) -> Result<SpinCoefficients> {
    require_prime(spec.d)?;
    let dims = spec.dims();
    let mut coeffs = SpinCoefficients::identity(dims.clone());
    if spec.s == 0.0 {
        return Ok(coeffs);
    }
    let value = Complex64::new(spec.s, 0.0);
    for j in ind_set(spec.d, spec.n)?.members {
        let jf = dims.encode(&j);
        for k in 0..spec.d {
            let kf = repeated_index(spec.d, spec.n, k);
            if (jf, kf) != (0, 0) {
                coeffs.set_flat(jf, kf, value);
            }
        }
    }
    Ok(coeffs)
}

/// `s* = 1/(1 + p^{n-1})`
pub fn werner_threshold(p: usize, n: usize) -> Result<f64> {
    require_prime(p)?;
    if n < 2 {
        return Err(Error::TooFewSubsystems { min: 2, actual: n });
    }
    Ok(necessary_bound(p, n))
}

/// Largest `s` not ruled out by the diagonal/off-diagonal necessary
/// condition, `1/(1 + d^{n-1})`. Valid for any `d`; for prime `d` it is the
/// exact threshold.
pub fn necessary_bound(d: usize, n: usize) -> f64 {
    1.0 / (1.0 + (d as f64).powi(n as i32 - 1))
}

/// `p (1 - p^{-n}) / (1 + p^{-(n-1)})`, the spin L1 norm of `W(s*)`.
pub fn threshold_l1_norm(p: usize, n: usize) -> f64 {
    let p = p as f64;
    p * (1.0 - p.powi(-(n as i32))) / (1.0 + p.powi(-(n as i32 - 1)))
}

/// Explicit product-projection mixture for `W(s*)`.
///
/// `W(s*) = s* [ (1/p) sum_m E_{m~,m~} + sum_{j in Ind} C_j ]` where
/// `C_j = p^{-n} (I + sum_{k != 0} S_{kj,k~})` is the cyclic family with
/// labels `u_i = (j_i, 1)`. Each `E_{m,m}` is `P_{(1,0)}(-m)`.
pub fn werner_separable_decomposition(p: usize, n: usize) -> Result<SeparableDecomposition> {
    let s_star = werner_threshold(p, n)?;
    let dims = DimVector::uniform(p, n)?;
    let mut terms = Vec::new();

    for m in 0..p {
        let spec = ProjectionSpec::new(p, SpinLabel { j: 1, k: 0 }, -(m as i64))?;
        terms.push(Term {
            weight: s_star / p as f64,
            factors: vec![projection_factor(spec); n],
        });
    }

    for j in ind_set(p, n)?.members {
        let labels: Vec<SpinLabel> = j.digits().iter().map(|&ji| SpinLabel { j: ji, k: 1 }).collect();
        let offsets = compensating_offsets(p, &labels)?;
        let (_, family) = cyclic_family_density(p, &labels, &offsets)?;
        terms.extend(family.into_terms().into_iter().map(|t| Term {
            weight: t.weight * s_star,
            ..t
        }));
    }
    SeparableDecomposition::new(dims, terms)
}

/// Offsets `r` with `prod_i gamma_i eta^{r_i} = 1`, so that the cyclic family
/// generated by `⊗ gamma_i eta^{r_i} S_{u_i}` has powers exactly
/// `⊗ (S_{u_i})^m`. Only `p = 2` has non-trivial `gamma_i`.
fn compensating_offsets(p: usize, labels: &[SpinLabel]) -> Result<Vec<i64>> {
    let phase = labels
        .iter()
        .map(|&u| ProjectionSpec::new(p, u, 0).map(|s| s.gamma()))
        .collect::<Result<Vec<RootOfUnity>>>()?
        .into_iter()
        .fold(RootOfUnity::ONE, |a, b| a * b);
    let e = phase
        .eta_exponent(p)
        .ok_or_else(|| Error::InvalidParameter(format!("phase {phase} is not a power of eta_{p}")))?;
    let mut offsets = vec![0i64; labels.len()];
    offsets[0] = ((p as u64 - e) % p as u64) as i64;
    Ok(offsets)
}

/// Decomposition of `W(s)` for `s <= s*`, mixing the threshold decomposition
/// with `I/N`.
pub fn werner_decomposition(spec: WernerSpec) -> Result<SeparableDecomposition> {
    let s_star = werner_threshold(spec.d, spec.n)?;
    if spec.s > s_star * (1.0 + 1e-12) {
        return Err(Error::AboveThreshold {
            s: spec.s,
            threshold: s_star,
        });
    }
    let lambda = (spec.s / s_star).min(1.0);
    let base = werner_separable_decomposition(spec.d, spec.n)?;
    if lambda >= 1.0 {
        return Ok(base);
    }
    base.mix(lambda, SeparableDecomposition::maximally_mixed(spec.dims()))
}
