//! Subgroup projections `P_u(r) = (1/d) sum_m (gamma eta^r S_u)^m`.
//!
//! `gamma` is 1, except for even `d` with `j k` odd where `gamma = alpha =
//! exp(pi i / d)`: there `(S_u)^d = -I` and the half-step phase restores
//! `(gamma S_u)^d = I`, which is what makes the average idempotent.

mod parametrize;

pub use parametrize::{m2_map, m3_coefficients, m3_map, projection_from_diagonal, spin_column, PhaseVector};

use crate::composite::DimVector;
use crate::error::{Error, Result};
use crate::numerics::{tensor_all, ComplexMatrix, DensityMatrix};
use crate::separability::{Factor, FactorSource, SeparableDecomposition, Term};
use crate::spin::{check_d, spin_power, RootOfUnity, SpinLabel};

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Trial division.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Whether `u` generates a subgroup projection family for dimension `d`,
/// i.e. whether `u` has order `d` in `Z_d x Z_d`: `gcd(j, k, d) = 1`. This
/// covers every `u != (0,0)` for prime `d`, `(0,1)`, `(1,0)`, and coprime
/// nonzero `j, k`, and also labels such as `(3,3)` for `d = 4`.
pub fn is_projection_label(d: usize, u: SpinLabel) -> bool {
    if u.is_identity() || u.j >= d || u.k >= d {
        return false;
    }
    gcd(gcd(u.j, u.k), d) == 1
}

fn needs_alpha(d: usize, u: SpinLabel) -> bool {
    d.is_multiple_of(2) && (u.j * u.k) % 2 == 1
}

/// Names the projection `P_u(r)` on a `d`-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjectionSpec {
    d: usize,
    u: SpinLabel,
    r: i64,
    alpha_applied: bool,
}

impl ProjectionSpec {
    pub fn new(d: usize, u: SpinLabel, r: i64) -> Result<Self> {
        check_d(d)?;
        if !is_projection_label(d, u) {
            return Err(Error::InvalidProjectionLabel { d, j: u.j, k: u.k });
        }
        Ok(Self {
            d,
            u,
            r,
            alpha_applied: needs_alpha(d, u),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn u(&self) -> SpinLabel {
        self.u
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn alpha_applied(&self) -> bool {
        self.alpha_applied
    }

    pub fn with_r(&self, r: i64) -> Self {
        Self { r, ..*self }
    }

    /// `gamma` (1 or `alpha`).
    pub fn gamma(&self) -> RootOfUnity {
        if self.alpha_applied {
            RootOfUnity::alpha(self.d)
        } else {
            RootOfUnity::ONE
        }
    }

    /// Scalar `gamma eta^r` multiplying `S_u` in the generator.
    pub fn generator_phase(&self) -> RootOfUnity {
        self.gamma() * RootOfUnity::eta_pow(self.d, self.r)
    }

    /// `(gamma eta^r S_u)^m` as a phase times a spin label.
    pub fn generator_power(&self, m: u64) -> (RootOfUnity, SpinLabel) {
        let (phase, label) = spin_power(self.d, self.u, m);
        (self.generator_phase().pow(m) * phase, label)
    }
}

/// `phase * S_label` built from exact roots of unity.
pub(crate) fn phased_spin(d: usize, phase: RootOfUnity, label: SpinLabel) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d);
    for x in 0..d {
        let entry = phase * RootOfUnity::eta_pow(d, ((label.j * x) % d) as i64);
        m[(x, (x + label.k) % d)] = entry.value();
    }
    m
}

/// `P_u(r) = (1/d) sum_{m=0}^{d-1} (gamma eta^r S_u)^m`.
pub fn subgroup_projection(spec: &ProjectionSpec) -> ComplexMatrix {
    let d = spec.d;
    let mut p = ComplexMatrix::zeros(d);
    let weight = num_complex::Complex64::new(1.0 / d as f64, 0.0);
    for m in 0..d as u64 {
        let (phase, label) = spec.generator_power(m);
        p.add_scaled(weight, &phased_spin(d, phase, label));
    }
    p
}

/// One term `phase * P_u(r)` of the inversion expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub phase: RootOfUnity,
    pub r: i64,
}

/// `(gamma eta^r S_u)^t = sum_{m=0}^{d-1} eta^{-m t} P_u(m + r)`.
pub fn expand_spin_power(spec: &ProjectionSpec, t: u64) -> Vec<ExpansionTerm> {
    let d = spec.d;
    (0..d as i64)
        .map(|m| ExpansionTerm {
            phase: RootOfUnity::eta_pow(d, -(m * (t % d as u64) as i64)),
            r: m + spec.r,
        })
        .collect()
}

/// Sums `phase * P_u(r)` over an expansion.
pub fn expansion_matrix(spec: &ProjectionSpec, terms: &[ExpansionTerm]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(spec.d);
    for term in terms {
        out.add_scaled(term.phase.value(), &subgroup_projection(&spec.with_r(term.r)));
    }
    out
}

/// One subgroup projection per subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductProjectionSpec {
    dims: DimVector,
    specs: Vec<ProjectionSpec>,
}

impl ProductProjectionSpec {
    pub fn new(dims: DimVector, specs: Vec<ProjectionSpec>) -> Result<Self> {
        if specs.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                actual: specs.len(),
            });
        }
        for (spec, &d) in specs.iter().zip(dims.as_slice()) {
            if spec.d != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: spec.d,
                });
            }
        }
        Ok(Self { dims, specs })
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn specs(&self) -> &[ProjectionSpec] {
        &self.specs
    }

    /// Same labels with offsets `r_i + l_i`.
    pub fn shifted(&self, offsets: &[i64]) -> Self {
        Self {
            dims: self.dims.clone(),
            specs: self
                .specs
                .iter()
                .zip(offsets)
                .map(|(s, &l)| s.with_r(s.r + l))
                .collect(),
        }
    }
}

/// `⊗_i P_{u_i}(r_i)`
pub fn product_projection(spec: &ProductProjectionSpec) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = spec.specs.iter().map(subgroup_projection).collect();
    tensor_all(&factors)
}

pub(crate) fn projection_factor(spec: ProjectionSpec) -> Factor {
    Factor {
        matrix: subgroup_projection(&spec),
        source: FactorSource::Projection(spec),
    }
}

/// `rho = (1/d^n) (I + sum_{m=1}^{d-1} ⊗_i (gamma_i eta^{r_i} S_{u_i})^m)`
/// with its product-projection decomposition: uniform weight `1/d^{n-1}` on
/// `⊗_i P_{u_i}(r_i + l_i)` for every offset vector with `sum l_i = 0 mod d`.
pub fn cyclic_family_density(d: usize, u: &[SpinLabel], r: &[i64]) -> Result<(DensityMatrix, SeparableDecomposition)> {
    let n = u.len();
    if n == 0 {
        return Err(Error::TooFewSubsystems { min: 1, actual: 0 });
    }
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: r.len(),
        });
    }
    let specs = u
        .iter()
        .zip(r)
        .map(|(&label, &offset)| ProjectionSpec::new(d, label, offset))
        .collect::<Result<Vec<_>>>()?;
    let dims = DimVector::uniform(d, n)?;
    let big_n = dims.total();

    let mut matrix = ComplexMatrix::zeros(big_n);
    for m in 0..d as u64 {
        let factors: Vec<ComplexMatrix> = specs
            .iter()
            .map(|s| {
                let (phase, label) = s.generator_power(m);
                phased_spin(d, phase, label)
            })
            .collect();
        matrix.add_scaled(num_complex::Complex64::new(1.0, 0.0), &tensor_all(&factors));
    }
    let matrix = matrix.scale_real(1.0 / big_n as f64);

    let offsets_dims = DimVector::uniform(d, n)?;
    let weight = (d as f64).powi(-(n as i32 - 1));
    let mut terms = Vec::new();
    for flat in 0..big_n {
        let l = offsets_dims.decode(flat);
        if l.digits().iter().sum::<usize>() % d != 0 {
            continue;
        }
        let factors = specs
            .iter()
            .zip(l.digits())
            .map(|(s, &li)| projection_factor(s.with_r(s.r + li as i64)))
            .collect();
        terms.push(Term { weight, factors });
    }
    let decomposition = SeparableDecomposition::new(dims.clone(), terms)?;
    Ok((DensityMatrix::trusted(matrix, dims), decomposition))
}

/// `S_{j,k} = c * G^t` with `G = gamma S_ubar` the generator of a valid
/// projection family (offset 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorForm {
    pub generator: ProjectionSpec,
    pub power: u64,
    pub phase: RootOfUnity,
}

/// Writes any single-qudit spin matrix as a phase times a power of a
/// projection generator. Labels outside the valid set (`gcd(j,k,d) > 1`) use
/// `S_{j,k} = eta^{-jbar kbar g(g-1)/2} (S_ubar)^g` with `g = gcd(j,k)`, `ubar = (j/g, k/g)`.
pub fn generator_form(d: usize, label: SpinLabel) -> Result<GeneratorForm> {
    label.check(d)?;
    if label.is_identity() {
        return Ok(GeneratorForm {
            generator: ProjectionSpec::new(d, SpinLabel { j: 1, k: 0 }, 0)?,
            power: 0,
            phase: RootOfUnity::ONE,
        });
    }
    if is_projection_label(d, label) {
        let generator = ProjectionSpec::new(d, label, 0)?;
        return Ok(GeneratorForm {
            generator,
            power: 1,
            phase: generator.gamma().conj(),
        });
    }
    let g = gcd(label.j, label.k);
    let reduced = SpinLabel {
        j: label.j / g,
        k: label.k / g,
    };
    let generator = ProjectionSpec::new(d, reduced, 0)?;
    let (power_phase, power_label) = spin_power(d, reduced, g as u64);
    debug_assert_eq!(power_label, label);
    Ok(GeneratorForm {
        generator,
        power: g as u64,
        phase: power_phase.conj() * generator.gamma().conj().pow(g as u64),
    })
}

impl GeneratorForm {
    pub fn matrix(&self) -> ComplexMatrix {
        let (phase, label) = self.generator.generator_power(self.power);
        phased_spin(self.generator.d, self.phase * phase, label)
    }
}
