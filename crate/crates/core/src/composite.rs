//! Mixed-radix index arithmetic on `D = (d_1, ..., d_b)` and the composite
//! spin basis `S^[N]_{j,k} = S_{j_1,k_1} ⊗ ... ⊗ S_{j_b,k_b}`.
//!
//! Flat indices are big-endian: `j = j_1 (d_2 ... d_b) + ... + j_b`, which is
//! the same convention [`crate::numerics::tensor`] uses for rows and columns.
//!
//! Permutations are image lists `sigma = [sigma(0), ..., sigma(b-1)]` (0-based).
//! Permuting `D = (2, 3)` by `sigma = [1, 0]` gives `D_sigma = (3, 2)`, and the
//! product `C1 ⊗ C2` on `D` corresponds to `C2 ⊗ C1` on `D_sigma`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{tensor_all, ComplexMatrix};
use crate::spin::{check_d, eta_table, spin_matrix};

/// Ordered local dimensions, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimVector {
    dims: Vec<usize>,
    total: usize,
}

impl DimVector {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDims("at least one subsystem is required".into()));
        }
        let mut total: usize = 1;
        for &d in &dims {
            check_d(d)?;
            total = total
                .checked_mul(d)
                .ok_or_else(|| Error::InvalidDims(format!("product of {dims:?} overflows")))?;
        }
        Ok(Self { dims, total })
    }

    /// `n` copies of `d`.
    pub fn uniform(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.dims
    }

    /// Number of subsystems `b`.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `N = d_1 * ... * d_b`
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn check(&self, m: &MultiIndex) -> Result<()> {
        if m.digits.len() != self.dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                actual: m.digits.len(),
            });
        }
        for (&digit, &d) in m.digits.iter().zip(&self.dims) {
            if digit >= d {
                return Err(Error::IndexOutOfRange { index: digit, dim: d });
            }
        }
        Ok(())
    }

    pub fn multi_index(&self, digits: Vec<usize>) -> Result<MultiIndex> {
        let m = MultiIndex { digits };
        self.check(&m)?;
        Ok(m)
    }

    pub fn zero(&self) -> MultiIndex {
        MultiIndex {
            digits: vec![0; self.dims.len()],
        }
    }

    pub fn encode(&self, m: &MultiIndex) -> usize {
        m.digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&digit, &d)| acc * d + digit)
    }

    pub fn decode(&self, mut flat: usize) -> MultiIndex {
        debug_assert!(flat < self.total);
        let mut digits = vec![0; self.dims.len()];
        for (slot, &d) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        MultiIndex { digits }
    }

    /// Componentwise `(j_a + k_a) mod d_a`.
    pub fn add(&self, j: &MultiIndex, k: &MultiIndex) -> Result<MultiIndex> {
        self.check(j)?;
        self.check(k)?;
        Ok(MultiIndex {
            digits: j
                .digits
                .iter()
                .zip(&k.digits)
                .zip(&self.dims)
                .map(|((a, b), d)| (a + b) % d)
                .collect(),
        })
    }

    /// Componentwise `-j mod d_a`.
    pub fn negate(&self, j: &MultiIndex) -> MultiIndex {
        MultiIndex {
            digits: j.digits.iter().zip(&self.dims).map(|(a, d)| (d - a) % d).collect(),
        }
    }

    /// Flat index of `decode(j) ⊕ decode(k)`.
    pub(crate) fn add_flat(&self, j: usize, k: usize) -> usize {
        let (mut j, mut k) = (j, k);
        let mut out = 0;
        let mut stride = 1;
        for &d in self.dims.iter().rev() {
            out += ((j % d + k % d) % d) * stride;
            stride *= d;
            j /= d;
            k /= d;
        }
        out
    }

    pub fn indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.total).map(|i| self.decode(i))
    }

    /// `(d_{sigma(0)}, ..., d_{sigma(b-1)})`
    pub fn permuted(&self, sigma: &Permutation) -> Result<DimVector> {
        self.check_permutation(sigma)?;
        DimVector::new(sigma.images.iter().map(|&i| self.dims[i]).collect())
    }

    fn check_permutation(&self, sigma: &Permutation) -> Result<()> {
        if sigma.len() != self.len() {
            return Err(Error::InvalidPermutation(sigma.images.clone()));
        }
        Ok(())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Digits `(j_1, ..., j_b)` of an index over some [`DimVector`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    digits: Vec<usize>,
}

impl MultiIndex {
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositeSpinLabel {
    pub j: MultiIndex,
    pub k: MultiIndex,
}

impl CompositeSpinLabel {
    pub fn new(dims: &DimVector, j: Vec<usize>, k: Vec<usize>) -> Result<Self> {
        Ok(Self {
            j: dims.multi_index(j)?,
            k: dims.multi_index(k)?,
        })
    }

    pub fn from_flat(dims: &DimVector, j: usize, k: usize) -> Self {
        Self {
            j: dims.decode(j),
            k: dims.decode(k),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.j.is_zero() && self.k.is_zero()
    }
}

impl fmt::Display for CompositeSpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.k)
    }
}

/// `⊗_i S_{j_i, k_i}`.
pub fn composite_spin(dims: &DimVector, label: &CompositeSpinLabel) -> Result<ComplexMatrix> {
    dims.check(&label.j)?;
    dims.check(&label.k)?;
    let factors = dims
        .as_slice()
        .iter()
        .zip(label.j.digits.iter().zip(&label.k.digits))
        .map(|(&d, (&j, &k))| spin_matrix(d, j, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(tensor_all(&factors))
}

/// `sum_r F^[N](j, r) A^[N]_{r,k}` with `F^[N] = ⊗ F^(i)` and
/// `A^[N]_{r,k} = E^[N]_{r, r⊕k}`. Agrees with [`composite_spin`].
pub fn composite_spin_fourier(dims: &DimVector, label: &CompositeSpinLabel) -> Result<ComplexMatrix> {
    dims.check(&label.j)?;
    dims.check(&label.k)?;
    let tables: Vec<Vec<Complex64>> = dims.as_slice().iter().map(|&d| eta_table(d)).collect();
    let n = dims.total();
    let k = dims.encode(&label.k);
    let mut m = ComplexMatrix::zeros(n);
    for r in 0..n {
        let rd = dims.decode(r);
        let f = rd
            .digits
            .iter()
            .zip(&label.j.digits)
            .zip(dims.as_slice().iter().zip(&tables))
            .fold(Complex64::new(1.0, 0.0), |acc, ((&ri, &ji), (&d, w))| {
                acc * w[(ji * ri) % d]
            });
        m[(r, dims.add_flat(r, k))] = f;
    }
    Ok(m)
}

/// Subsystem permutation as an image list, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(b: usize) -> Self {
        Self {
            images: (0..b).collect(),
        }
    }

    /// All permutations of `0..b` in lexicographic order.
    pub fn all(b: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation { images: prefix.clone() });
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; b], &mut out);
        out
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.images.iter().map(|&i| items[i].clone()).collect()
    }
}

/// `pi(j) = encode_{D_sigma}(j_sigma)` for every flat `j` on `D`.
fn slot_map(dims: &DimVector, sigma: &Permutation) -> Result<Vec<usize>> {
    let permuted = dims.permuted(sigma)?;
    Ok((0..dims.total())
        .map(|j| {
            let digits = dims.decode(j);
            permuted.encode(&MultiIndex {
                digits: sigma.apply(&digits.digits),
            })
        })
        .collect())
}

/// `Q_sigma(j, s) = delta(j_sigma, s)`, rows on `D`, columns on `D_sigma`.
pub fn permutation_matrix(dims: &DimVector, sigma: &Permutation) -> Result<ComplexMatrix> {
    let map = slot_map(dims, sigma)?;
    let n = dims.total();
    let mut q = ComplexMatrix::zeros(n);
    for (j, &s) in map.iter().enumerate() {
        q[(j, s)] = Complex64::new(1.0, 0.0);
    }
    Ok(q)
}

/// `Q_sigma m Q_sigma^{-1}`: takes a matrix on `D_sigma` back to `D`.
///
/// For `m = C^(sigma(1)) ⊗ ... ⊗ C^(sigma(b))` the result is `C^(1) ⊗ ... ⊗ C^(b)`.
pub fn conjugate_by_permutation(m: &ComplexMatrix, dims: &DimVector, sigma: &Permutation) -> Result<ComplexMatrix> {
    if m.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            actual: m.dim(),
        });
    }
    let map = slot_map(dims, sigma)?;
    Ok(ComplexMatrix::from_fn(m.dim(), |j, k| m[(map[j], map[k])]))
}

/// Reorders the subsystems of `m` (on `dims`) so that slot `a` holds the old
/// subsystem `sigma(a)`. Inverse of [`conjugate_by_permutation`].
pub fn permute_subsystems(
    m: &ComplexMatrix,
    dims: &DimVector,
    sigma: &Permutation,
) -> Result<(ComplexMatrix, DimVector)> {
    if m.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            actual: m.dim(),
        });
    }
    let map = slot_map(dims, sigma)?;
    let mut inverse = vec![0; map.len()];
    for (j, &s) in map.iter().enumerate() {
        inverse[s] = j;
    }
    let out = ComplexMatrix::from_fn(m.dim(), |s, t| m[(inverse[s], inverse[t])]);
    Ok((out, dims.permuted(sigma)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::tensor;

    fn dims(v: &[usize]) -> DimVector {
        DimVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn encode_examples() {
        let d23 = dims(&[2, 3]);
        assert_eq!(d23.encode(&d23.multi_index(vec![1, 2]).unwrap()), 5);
        assert_eq!(d23.encode(&d23.zero()), 0);
        let d222 = dims(&[2, 2, 2]);
        assert_eq!(d222.encode(&d222.multi_index(vec![1, 0, 1]).unwrap()), 5);
        assert!(d23.multi_index(vec![2, 0]).is_err());
        assert!(d23.multi_index(vec![0]).is_err());
    }

    #[test]
    fn dims_validation() {
        assert!(DimVector::new(vec![]).is_err());
        assert!(matches!(DimVector::new(vec![2, 1]), Err(Error::DimensionTooSmall(1))));
        assert_eq!(dims(&[4, 3]).total(), 12);
    }

    #[test]
    fn multi_add_examples() {
        let d23 = dims(&[2, 3]);
        let a = d23.multi_index(vec![1, 2]).unwrap();
        assert_eq!(d23.add(&a, &a).unwrap().digits(), &[0, 1]);
        assert_eq!(d23.add(&a, &d23.zero()).unwrap(), a);
        let d33 = dims(&[3, 3]);
        let x = d33.multi_index(vec![2, 2]).unwrap();
        let y = d33.multi_index(vec![1, 1]).unwrap();
        assert_eq!(d33.add(&x, &y).unwrap(), d33.zero());
        assert!(d23.add(&a, &x).is_err());
        assert!(d23.add(&a, &dims(&[2, 3, 2]).zero()).is_err());
        for j in 0..6 {
            for k in 0..6 {
                let sum = d23.add(&d23.decode(j), &d23.decode(k)).unwrap();
                assert_eq!(d23.add_flat(j, k), d23.encode(&sum));
            }
        }
    }

    #[test]
    fn composite_spin_examples() {
        let d22 = dims(&[2, 2]);
        let id = CompositeSpinLabel::new(&d22, vec![0, 0], vec![0, 0]).unwrap();
        assert_eq!(composite_spin(&d22, &id).unwrap(), ComplexMatrix::identity(4));
        let zz = CompositeSpinLabel::new(&d22, vec![1, 1], vec![0, 0]).unwrap();
        let z = spin_matrix(2, 1, 0).unwrap();
        assert_eq!(composite_spin(&d22, &zz).unwrap(), tensor(&z, &z));
        let d23 = dims(&[2, 3]);
        let l = CompositeSpinLabel::new(&d23, vec![1, 1], vec![1, 1]).unwrap();
        let expected = tensor(&spin_matrix(2, 1, 1).unwrap(), &spin_matrix(3, 1, 1).unwrap());
        assert_eq!(composite_spin(&d23, &l).unwrap(), expected);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert_eq!(Permutation::all(3).len(), 6);
        let d23 = dims(&[2, 3]);
        assert!(permutation_matrix(&d23, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn identity_permutation_matrix() {
        let d = dims(&[2, 3, 2]);
        let q = permutation_matrix(&d, &Permutation::identity(3)).unwrap();
        assert_eq!(q, ComplexMatrix::identity(12));
    }

    #[test]
    fn swap_on_qubits() {
        // Enumeration oracle: (j1, j2) -> (j2, j1).
        let d = dims(&[2, 2]);
        let q = permutation_matrix(&d, &Permutation::new(vec![1, 0]).unwrap()).unwrap();
        let mut expected = ComplexMatrix::zeros(4);
        for (from, to) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            expected[(from, to)] = Complex64::new(1.0, 0.0);
        }
        assert_eq!(q, expected);
    }

    #[test]
    fn swap_on_2x3() {
        let d = dims(&[2, 3]);
        let sigma = Permutation::new(vec![1, 0]).unwrap();
        let q = permutation_matrix(&d, &sigma).unwrap();
        for j1 in 0..2 {
            for j2 in 0..3 {
                let j = j1 * 3 + j2;
                let s = j2 * 2 + j1;
                for col in 0..6 {
                    let want = if col == s { 1.0 } else { 0.0 };
                    assert_eq!(q[(j, col)].re, want);
                }
            }
        }
        let qqt = &q * &q.transpose();
        assert_eq!(qqt, ComplexMatrix::identity(6));
    }

    #[test]
    fn conjugation_of_identity() {
        let d = dims(&[3, 2]);
        let sigma = Permutation::new(vec![1, 0]).unwrap();
        let i = ComplexMatrix::identity(6);
        assert_eq!(conjugate_by_permutation(&i, &d, &sigma).unwrap(), i);
    }

    #[test]
    fn conjugation_matches_matrix_form() {
        let d = dims(&[2, 3, 2]);
        let m = ComplexMatrix::from_fn(12, |r, c| Complex64::new(r as f64, c as f64 * 0.5));
        for sigma in Permutation::all(3) {
            let q = permutation_matrix(&d, &sigma).unwrap();
            let explicit = &(&q * &m) * &q.transpose();
            assert_eq!(conjugate_by_permutation(&m, &d, &sigma).unwrap(), explicit);
            let (back, pd) = permute_subsystems(&explicit, &d, &sigma).unwrap();
            assert_eq!(pd, d.permuted(&sigma).unwrap());
            assert_eq!(back, m);
        }
    }
}
