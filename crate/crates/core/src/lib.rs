//! Finite-Fourier spin bases for qudit systems and separability certificates.
//!
//! The single-qudit basis is `S_{j,k} = sum_r eta^{jr} |r><r+k|` with
//! `eta = e^{2 pi i/d}`. Tensor products over `D = (d_1, ..., d_b)` form an
//! orthogonal basis of `N x N` matrices, `N = prod d_i`, and every density
//! expands as `rho = (1/N) sum_{j,k} s_{j,k} S^[N]_{j,k}`.
//!
//! - [`transform`] converts between matrix entries and spin coefficients.
//! - [`projections`] builds the rank-`1` subgroup projections generated by
//!   single spin matrices.
//! - [`separability`] certifies separability when
//!   `sum_{(j,k) != 0} |s_{j,k}| <= 1`, returning an explicit mixture of
//!   product projections, and certifies inseparability via two necessary
//!   conditions.
//! - [`werner`] covers the Werner family and its exact threshold for prime
//!   local dimension.
//!
//! ```
//! use spinsep::{sufficient_certificate, verify_decomposition, werner_density, Tolerance, Verdict, WernerSpec};
//!
//! let w = werner_density(WernerSpec::new(2, 2, 1.0 / 3.0).unwrap());
//! let report = sufficient_certificate(&w);
//! assert_eq!(report.verdict, Verdict::SeparableCertified);
//! let check = verify_decomposition(report.decomposition().unwrap(), w.matrix(), Tolerance::default()).unwrap();
//! assert!(check.ok);
//! ```

pub mod composite;
pub mod error;
pub mod exec;
pub mod numerics;
pub mod projections;
pub mod random;
pub mod separability;
pub mod spin;
pub mod transform;
pub mod werner;

pub use composite::{
    composite_spin, composite_spin_fourier, conjugate_by_permutation, permutation_matrix, permute_subsystems,
    CompositeSpinLabel, DimVector, MultiIndex, Permutation,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use numerics::{
    check_density, partial_transpose, tensor, tensor_all, trace_inner, ComplexMatrix, DensityMatrix, Tolerance,
};
pub use projections::{
    cyclic_family_density, generator_form, is_prime, is_projection_label, product_projection, subgroup_projection,
    ProductProjectionSpec, ProjectionSpec,
};
pub use separability::{
    necessary_check, necessary_check_with, peres_check, peres_check_with, sufficient_certificate,
    sufficient_certificate_with, verify_decomposition, CertificateReport, DecompositionFailure, Factor, FactorSource,
    SeparableDecomposition, Term, Verdict, Verification, Witness,
};
pub use spin::{spin_dagger, spin_matrix, spin_power, RootOfUnity, SpinLabel};
pub use transform::{from_spin, spin_l1_norm, to_spin, SpinCoefficients};
pub use werner::{
    ind_set, werner_decomposition, werner_density, werner_separable_decomposition, werner_spin_coeffs,
    werner_threshold, IndexSetIndPN, WernerSpec,
};
