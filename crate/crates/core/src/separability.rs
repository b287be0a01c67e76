//! Separability certificates.
//!
//! Two necessary conditions can certify inseparability: the Cauchy-Schwarz
//! bound `sqrt(rho_jj rho_kk) >= |rho_uv|` and positivity of every partial
//! transpose. The sufficient condition `||rho||_{1,D} <= 1` certifies
//! separability and comes with an explicit mixture of product projections.
//!
//! Sufficient-certificate construction: every label `L != (0,0)` contributes
//! `|s_L| I + (1/2)(s_L S_L + h.c.)`. Each factor `S^(i)_{j_i,k_i}` is
//! `c_i G_i^{t_i}` for a projection generator `G_i`; expanding `G_i^{t_i}`
//! into its projections turns the contribution into
//! `|s_L| sum_l (1 + cos(theta_L - phi_l)) ⊗_i P_i(l_i)`, a non-negative
//! combination. A label and its conjugate partner contribute identically and
//! are processed once with doubled weight.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::composite::{DimVector, MultiIndex};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numerics::{check_density, tensor_all, ComplexMatrix, DensityMatrix, Tolerance};
use crate::projections::{generator_form, projection_factor, GeneratorForm, ProjectionSpec};
use crate::spin::{RootOfUnity, SpinLabel};
use crate::transform::{spin_l1_norm, to_spin_with, SpinCoefficients};

/// Where a decomposition factor came from.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorSource {
    /// A subgroup projection `P_u(r)`.
    Projection(ProjectionSpec),
    /// `I/d`.
    MaximallyMixed,
    /// Read from a file or supplied by the caller.
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub matrix: ComplexMatrix,
    pub source: FactorSource,
}

impl Factor {
    pub fn explicit(matrix: ComplexMatrix) -> Self {
        Self {
            matrix,
            source: FactorSource::Explicit,
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
            source: FactorSource::MaximallyMixed,
        }
    }
}

/// `weight * (factor_1 ⊗ ... ⊗ factor_b)`
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub weight: f64,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn product(&self) -> ComplexMatrix {
        tensor_all(self.factors.iter().map(|f| &f.matrix))
    }
}

/// A convex combination of product states.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableDecomposition {
    dims: DimVector,
    terms: Vec<Term>,
}

impl SeparableDecomposition {
    /// Checks only the shape: one factor per subsystem with matching dimension.
    pub fn new(dims: DimVector, terms: Vec<Term>) -> Result<Self> {
        for term in &terms {
            if term.factors.len() != dims.len() {
                return Err(Error::DimensionMismatch {
                    expected: dims.len(),
                    actual: term.factors.len(),
                });
            }
            for (f, &d) in term.factors.iter().zip(dims.as_slice()) {
                if f.matrix.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        actual: f.matrix.dim(),
                    });
                }
            }
        }
        Ok(Self { dims, terms })
    }

    /// The single term `⊗ I/d_i`.
    pub fn maximally_mixed(dims: DimVector) -> Self {
        let factors = dims.as_slice().iter().map(|&d| Factor::maximally_mixed(d)).collect();
        Self {
            dims,
            terms: vec![Term { weight: 1.0, factors }],
        }
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn terms_mut(&mut self) -> &mut [Term] {
        &mut self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// `sum_a w_a ⊗ factors_a`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dims.total());
        for term in &self.terms {
            out.add_scaled(Complex64::new(term.weight, 0.0), &term.product());
        }
        out
    }

    /// `lambda * self + (1 - lambda) * other`
    pub fn mix(self, lambda: f64, other: SeparableDecomposition) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.total(),
                actual: other.dims.total(),
            });
        }
        let mut terms: Vec<Term> = self
            .terms
            .into_iter()
            .map(|t| Term {
                weight: t.weight * lambda,
                ..t
            })
            .collect();
        terms.extend(other.terms.into_iter().map(|t| Term {
            weight: t.weight * (1.0 - lambda),
            ..t
        }));
        terms.retain(|t| t.weight > 0.0);
        Ok(Self { dims: self.dims, terms })
    }
}

/// First reason a decomposition fails verification.
#[derive(Debug, Clone, PartialEq)]
pub enum DecompositionFailure {
    NegativeWeight { term: usize, weight: f64 },
    WeightSum { sum: f64 },
    InvalidFactor { term: usize, factor: usize, error: Error },
    Reconstruction { max_error: f64 },
}

impl std::fmt::Display for DecompositionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NegativeWeight { term, weight } => write!(f, "term {term} has negative weight {weight:e}"),
            Self::WeightSum { sum } => write!(f, "weights sum to {sum}, expected 1"),
            Self::InvalidFactor { term, factor, error } => {
                write!(f, "term {term} factor {factor} is not a density: {error}")
            }
            Self::Reconstruction { max_error } => {
                write!(f, "reconstruction differs from target by {max_error:e}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub ok: bool,
    pub failure: Option<DecompositionFailure>,
    pub weight_sum: f64,
    pub max_reconstruction_error: f64,
}

/// Checks non-negative weights summing to 1 (`abs_eps`), every factor a
/// density at its local dimension (`abs_eps`), and the mixture reproducing
/// `target` entrywise within `reconstruction_eps`.
pub fn verify_decomposition(
    dec: &SeparableDecomposition,
    target: &ComplexMatrix,
    tol: Tolerance,
) -> Result<Verification> {
    if target.dim() != dec.dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dec.dims.total(),
            actual: target.dim(),
        });
    }
    let weight_sum = dec.weight_sum();
    let max_reconstruction_error = dec.reconstruct().max_abs_diff(target)?;
    let mut failure = None;
    if let Some((i, t)) = dec.terms.iter().enumerate().find(|(_, t)| t.weight < 0.0) {
        failure = Some(DecompositionFailure::NegativeWeight {
            term: i,
            weight: t.weight,
        });
    }
    if failure.is_none() && (weight_sum - 1.0).abs() > tol.abs_eps {
        failure = Some(DecompositionFailure::WeightSum { sum: weight_sum });
    }
    if failure.is_none() {
        'outer: for (i, term) in dec.terms.iter().enumerate() {
            for (k, (f, &d)) in term.factors.iter().zip(dec.dims.as_slice()).enumerate() {
                if matches!(f.source, FactorSource::MaximallyMixed) {
                    continue;
                }
                let local = DimVector::new(vec![d])?;
                if let Err(error) = check_density(f.matrix.clone(), local, tol) {
                    failure = Some(DecompositionFailure::InvalidFactor {
                        term: i,
                        factor: k,
                        error,
                    });
                    break 'outer;
                }
            }
        }
    }
    if failure.is_none() && max_reconstruction_error > tol.reconstruction_eps {
        failure = Some(DecompositionFailure::Reconstruction {
            max_error: max_reconstruction_error,
        });
    }
    Ok(Verification {
        ok: failure.is_none(),
        failure,
        weight_sum,
        max_reconstruction_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SeparableCertified,
    InseparableCertified,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::SeparableCertified => "separable-certified",
            Verdict::InseparableCertified => "inseparable-certified",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A violated instance of `sqrt(rho_jj rho_kk) >= |rho_uv|`.
#[derive(Debug, Clone, PartialEq)]
pub struct NecessaryViolation {
    pub j: MultiIndex,
    pub k: MultiIndex,
    pub u: MultiIndex,
    pub v: MultiIndex,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    None,
    Necessary(NecessaryViolation),
    NegativeEigenvalue { subsystem: usize, value: f64 },
    Decomposition(SeparableDecomposition),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub verdict: Verdict,
    pub witness: Witness,
    pub l1_norm: f64,
}

impl CertificateReport {
    pub fn decomposition(&self) -> Option<&SeparableDecomposition> {
        match &self.witness {
            Witness::Decomposition(d) => Some(d),
            _ => None,
        }
    }
}

fn require_multipartite(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().len() < 2 {
        return Err(Error::TooFewSubsystems {
            min: 2,
            actual: rho.dims().len(),
        });
    }
    Ok(())
}

pub fn necessary_check(rho: &DensityMatrix) -> Result<CertificateReport> {
    necessary_check_with(rho, Tolerance::default(), Exec::default())
}

/// Scans every pair `j, k` differing in all components and every
/// recombination `{u_r, v_r} = {j_r, k_r}`; reports the largest violation if
/// it exceeds `abs_eps`.
pub fn necessary_check_with(rho: &DensityMatrix, tol: Tolerance, exec: Exec) -> Result<CertificateReport> {
    require_multipartite(rho)?;
    let dims = rho.dims();
    let m = rho.matrix();
    let n = dims.total();
    let b = dims.len();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re.max(0.0)).collect();

    // (excess, j, k, mask) per row, merged in row order.
    let per_row = exec.map_range(n, |j| {
        let jd = dims.decode(j);
        let mut best: Option<(f64, usize, usize, usize)> = None;
        for k in j + 1..n {
            let kd = dims.decode(k);
            if jd.digits().iter().zip(kd.digits()).any(|(a, c)| a == c) {
                continue;
            }
            let lhs = (diag[j] * diag[k]).sqrt();
            for mask in 0..(1usize << b) {
                let (u, v) = recombine(dims, &jd, &kd, mask);
                let excess = m[(u, v)].norm() - lhs;
                if best.is_none_or(|(e, ..)| excess > e) {
                    best = Some((excess, j, k, mask));
                }
            }
        }
        best
    });
    let worst = per_row
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(f64, usize, usize, usize)>, x| match acc {
            Some(a) if a.0 >= x.0 => Some(a),
            _ => Some(x),
        });

    let l1_norm = spin_l1_norm(&to_spin_with(rho, exec));
    let (verdict, witness) = match worst {
        Some((excess, j, k, mask)) if excess > tol.abs_eps => {
            let jd = dims.decode(j);
            let kd = dims.decode(k);
            let (u, v) = recombine(dims, &jd, &kd, mask);
            let lhs = (diag[j] * diag[k]).sqrt();
            let violation = NecessaryViolation {
                j: jd,
                k: kd,
                u: dims.decode(u),
                v: dims.decode(v),
                lhs,
                rhs: m[(u, v)].norm(),
            };
            (Verdict::InseparableCertified, Witness::Necessary(violation))
        }
        _ => (Verdict::Inconclusive, Witness::None),
    };
    Ok(CertificateReport {
        verdict,
        witness,
        l1_norm,
    })
}

/// Flat `(u, v)` taking `u_r = j_r` where bit `r` of `mask` is clear.
fn recombine(dims: &DimVector, j: &MultiIndex, k: &MultiIndex, mask: usize) -> (usize, usize) {
    let (mut u, mut v) = (0, 0);
    for (r, (&d, (&a, &c))) in dims
        .as_slice()
        .iter()
        .zip(j.digits().iter().zip(k.digits()))
        .enumerate()
    {
        let (x, y) = if mask >> r & 1 == 0 { (a, c) } else { (c, a) };
        u = u * d + x;
        v = v * d + y;
    }
    (u, v)
}

pub fn peres_check(rho: &DensityMatrix, subsystem: usize) -> Result<CertificateReport> {
    peres_check_with(rho, subsystem, Tolerance::default())
}

/// Inseparable when the partial transpose on `subsystem` (0-based) has an
/// eigenvalue below `-abs_eps`.
pub fn peres_check_with(rho: &DensityMatrix, subsystem: usize, tol: Tolerance) -> Result<CertificateReport> {
    require_multipartite(rho)?;
    let pt = rho.partial_transpose(subsystem)?;
    let min = pt.min_hermitian_eigenvalue();
    let l1_norm = spin_l1_norm(&to_spin_with(rho, Exec::default()));
    let (verdict, witness) = if min < -tol.abs_eps {
        (
            Verdict::InseparableCertified,
            Witness::NegativeEigenvalue { subsystem, value: min },
        )
    } else {
        (Verdict::Inconclusive, Witness::None)
    };
    Ok(CertificateReport {
        verdict,
        witness,
        l1_norm,
    })
}

/// Acceptance slack on the norm bound.
pub const NORM_SLACK: f64 = 1e-12;

/// Terms lighter than this are dropped before renormalizing.
pub const WEIGHT_FLOOR: f64 = 1e-14;

pub fn sufficient_certificate(rho: &DensityMatrix) -> CertificateReport {
    sufficient_certificate_with(rho, Exec::default())
}

/// Per-subsystem lookup: generator form and projection factors for each
/// local label `j * d + k`.
struct LocalTables {
    forms: Vec<Vec<GeneratorForm>>,
    factors: Vec<Vec<Vec<Factor>>>,
}

impl LocalTables {
    fn new(dims: &DimVector) -> Self {
        let mut forms = Vec::new();
        let mut factors = Vec::new();
        for &d in dims.as_slice() {
            let mut f_row = Vec::with_capacity(d * d);
            let mut p_row = Vec::with_capacity(d * d);
            for j in 0..d {
                for k in 0..d {
                    let form = generator_form(d, SpinLabel { j, k }).expect("labels in range");
                    p_row.push(
                        (0..d as i64)
                            .map(|l| projection_factor(form.generator.with_r(l)))
                            .collect(),
                    );
                    f_row.push(form);
                }
            }
            forms.push(f_row);
            factors.push(p_row);
        }
        Self { forms, factors }
    }
}

/// Builds the product-projection terms for one representative label.
fn label_terms(coeffs: &SpinCoefficients, tables: &LocalTables, label: (usize, usize), multiplicity: f64) -> Vec<Term> {
    let dims = coeffs.dims();
    let n = dims.total();
    let s = coeffs.get_flat(label.0, label.1);
    let jd = dims.decode(label.0);
    let kd = dims.decode(label.1);
    let local: Vec<usize> = dims
        .as_slice()
        .iter()
        .zip(jd.digits().iter().zip(kd.digits()))
        .map(|(&d, (&j, &k))| j * d + k)
        .collect();
    let phase = local
        .iter()
        .enumerate()
        .fold(RootOfUnity::ONE, |acc, (i, &l)| acc * tables.forms[i][l].phase);
    let theta = (s * phase.value()).arg();
    let scale = multiplicity * s.norm() / n as f64;

    let mut terms = Vec::with_capacity(n);
    for l in 0..n {
        let ld = dims.decode(l);
        // phi_l = arg prod_i eta_i^{l_i t_i}
        let phi: f64 = ld
            .digits()
            .iter()
            .enumerate()
            .map(|(i, &li)| {
                let d = dims.as_slice()[i];
                let t = tables.forms[i][local[i]].power as usize;
                TAU * ((li * t) % d) as f64 / d as f64
            })
            .sum();
        let weight = scale * (1.0 + (theta - phi).cos());
        if weight < WEIGHT_FLOOR {
            continue;
        }
        let factors = ld
            .digits()
            .iter()
            .enumerate()
            .map(|(i, &li)| tables.factors[i][local[i]][li].clone())
            .collect();
        terms.push(Term { weight, factors });
    }
    terms
}

/// Certifies separability when `||rho||_{1,D} <= 1` (plus [`NORM_SLACK`]),
/// returning the explicit decomposition. Label groups are expanded in
/// parallel under `exec`; term order is fixed by the lexicographic label
/// order either way.
pub fn sufficient_certificate_with(rho: &DensityMatrix, exec: Exec) -> CertificateReport {
    let coeffs = to_spin_with(rho, exec);
    let l1_norm = spin_l1_norm(&coeffs);
    if l1_norm > 1.0 + NORM_SLACK {
        return CertificateReport {
            verdict: Verdict::Inconclusive,
            witness: Witness::None,
            l1_norm,
        };
    }
    let dims = coeffs.dims().clone();
    let n = dims.total();
    let tables = LocalTables::new(&dims);

    let mut representatives = Vec::new();
    for j in 0..n {
        for k in 0..n {
            if (j, k) == (0, 0) || coeffs.get_flat(j, k).norm() == 0.0 {
                continue;
            }
            let partner = coeffs.partner(j, k);
            if (j, k) == partner {
                representatives.push(((j, k), 1.0));
            } else if (j, k) < partner {
                representatives.push(((j, k), 2.0));
            }
        }
    }

    let groups = exec.map_slice(&representatives, |&(label, mult)| {
        label_terms(&coeffs, &tables, label, mult)
    });
    let mut terms: Vec<Term> = groups.into_iter().flatten().collect();
    let residual = 1.0 - l1_norm;
    if residual >= WEIGHT_FLOOR {
        terms.push(Term {
            weight: residual,
            factors: dims.as_slice().iter().map(|&d| Factor::maximally_mixed(d)).collect(),
        });
    }
    let total: f64 = terms.iter().map(|t| t.weight).sum();
    for t in &mut terms {
        t.weight /= total;
    }
    let decomposition = SeparableDecomposition { dims, terms };
    CertificateReport {
        verdict: Verdict::SeparableCertified,
        witness: Witness::Decomposition(decomposition),
        l1_norm,
    }
}
