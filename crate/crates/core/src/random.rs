//! Random test states.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::composite::DimVector;
use crate::numerics::{ComplexMatrix, DensityMatrix};
use crate::transform::{spin_l1_norm, to_spin};

/// `G G^† / Tr(G G^†)` with i.i.d. standard complex Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(dims: &DimVector, rng: &mut R) -> DensityMatrix {
    let n = dims.total();
    let g = ComplexMatrix::from_fn(n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    let mut m = gg.scale_real(1.0 / tr);
    // Exact Hermitian symmetry despite rounding in the product.
    for r in 0..n {
        m[(r, r)].im = 0.0;
        for c in r + 1..n {
            m[(c, r)] = m[(r, c)].conj();
        }
    }
    DensityMatrix::trusted(m, dims.clone())
}

/// `lambda rho + (1 - lambda) I/N`. Requires `0 <= lambda <= 1`.
pub fn mix_with_identity(rho: &DensityMatrix, lambda: f64) -> DensityMatrix {
    assert!((0.0..=1.0).contains(&lambda), "mixing weight {lambda} outside [0, 1]");
    let n = rho.dim();
    let mut m = rho.matrix().scale_real(lambda);
    m.add_scaled(
        Complex64::new((1.0 - lambda) / n as f64, 0.0),
        &ComplexMatrix::identity(n),
    );
    DensityMatrix::trusted(m, rho.dims().clone())
}

/// Mixes `rho` with `I/N` so that its spin L1 norm becomes `target`. The norm
/// scales linearly with the mixing weight. States already at or below
/// `target` are returned unchanged.
pub fn mix_to_l1_norm(rho: &DensityMatrix, target: f64) -> DensityMatrix {
    let norm = spin_l1_norm(&to_spin(rho));
    if norm <= target {
        return rho.clone();
    }
    mix_with_identity(rho, target / norm)
}
