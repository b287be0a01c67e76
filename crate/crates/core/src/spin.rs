//! Single-qudit spin basis: Fourier matrix, computational and adjusted bases,
//! and the unitary spin matrices `S_{j,k} = sum_r eta^{j r} E_{r, r+k}`.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ONE};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `exp(2 pi i * exponent / order)`, kept in lowest terms.
///
/// Powers of `eta = exp(2 pi i / d)` have order dividing `d`; the half-step
/// phase `alpha = exp(pi i / d)` has order `2d`. Quarter turns evaluate to
/// exact `{1, i, -1, -i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exponent: 0 };

    pub fn new(order: u64, exponent: i64) -> Self {
        assert!(order >= 1, "order must be positive");
        let e = exponent.rem_euclid(order as i64) as u64;
        let g = gcd(order, e).max(1);
        let (order, exponent) = if e == 0 { (1, 0) } else { (order / g, e / g) };
        Self { order, exponent }
    }

    /// `eta^e` for `eta = exp(2 pi i / d)`.
    pub fn eta_pow(d: usize, e: i64) -> Self {
        Self::new(d as u64, e)
    }

    /// `alpha = exp(pi i / d)`.
    pub fn alpha(d: usize) -> Self {
        Self::new(2 * d as u64, 1)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn conj(self) -> Self {
        Self::new(self.order, -(self.exponent as i64))
    }

    pub fn pow(self, m: u64) -> Self {
        let e = (self.exponent as u128 * m as u128) % self.order as u128;
        Self::new(self.order, e as i64)
    }

    /// Angle in `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        TAU * self.exponent as f64 / self.order as f64
    }

    /// `exp(2 pi i e / n)`, reduced to the first octant before evaluating so
    /// that symmetric roots agree exactly and multiples of 30 and 45 degrees
    /// are correctly rounded.
    pub fn value(&self) -> Complex64 {
        let (e, n) = (self.exponent as u128, self.order as u128);
        let quadrant = (4 * e) / n;
        let rem = (4 * e) % n;
        // Angle within the quadrant is (pi/2) * rem / n.
        let (flip, rem) = if 2 * rem > n { (true, n - rem) } else { (false, rem) };
        let (c, s) = if rem == 0 {
            (1.0, 0.0)
        } else if 3 * rem == n {
            (3f64.sqrt() / 2.0, 0.5)
        } else if 2 * rem == n {
            (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
        } else {
            let (s, c) = (std::f64::consts::FRAC_PI_2 * rem as f64 / n as f64).sin_cos();
            (c, s)
        };
        let (c, s) = if flip { (s, c) } else { (c, s) };
        match quadrant {
            0 => Complex64::new(c, s),
            1 => Complex64::new(-s, c),
            2 => Complex64::new(-c, -s),
            _ => Complex64::new(s, -c),
        }
    }

    /// Whether this is a power of `exp(2 pi i / d)`.
    pub fn is_eta_power(&self, d: usize) -> bool {
        (d as u64).is_multiple_of(self.order)
    }

    /// The exponent `e` with `self = eta^e` for `eta = exp(2 pi i / d)`.
    pub fn eta_exponent(&self, d: usize) -> Option<u64> {
        self.is_eta_power(d).then(|| self.exponent * (d as u64 / self.order))
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let order = self.order / gcd(self.order, rhs.order) * rhs.order;
        let e = self.exponent * (order / self.order) + rhs.exponent * (order / rhs.order);
        RootOfUnity::new(order, (e % order) as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            write!(f, "1")
        } else {
            write!(f, "exp(2πi·{}/{})", self.exponent, self.order)
        }
    }
}

/// Table of `eta^e` for `e` in `0..d`.
pub(crate) fn eta_table(d: usize) -> Vec<Complex64> {
    (0..d).map(|e| RootOfUnity::eta_pow(d, e as i64).value()).collect()
}

/// Index pair `(j, k)` of a spin matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinLabel {
    pub j: usize,
    pub k: usize,
}

impl SpinLabel {
    pub const IDENTITY: SpinLabel = SpinLabel { j: 0, k: 0 };

    pub fn new(d: usize, j: usize, k: usize) -> Result<Self> {
        let label = Self { j, k };
        label.check(d)?;
        Ok(label)
    }

    pub fn check(&self, d: usize) -> Result<()> {
        check_d(d)?;
        for index in [self.j, self.k] {
            if index >= d {
                return Err(Error::IndexOutOfRange { index, dim: d });
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.j == 0 && self.k == 0
    }

    /// `(-j, -k) mod d`, the label of the adjoint up to phase.
    pub fn negate(&self, d: usize) -> Self {
        Self {
            j: (d - self.j) % d,
            k: (d - self.k) % d,
        }
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.k)
    }
}

pub(crate) fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::DimensionTooSmall(d))
    } else {
        Ok(())
    }
}

/// `F(j,k) = eta^{jk}`.
pub fn fourier_matrix(d: usize) -> Result<ComplexMatrix> {
    check_d(d)?;
    let w = eta_table(d);
    Ok(ComplexMatrix::from_fn(d, |j, k| w[(j * k) % d]))
}

/// `E_{j,k} = |j><k|`.
pub fn computational_basis(d: usize, j: usize, k: usize) -> Result<ComplexMatrix> {
    SpinLabel::new(d, j, k)?;
    let mut m = ComplexMatrix::zeros(d);
    m[(j, k)] = ONE;
    Ok(m)
}

/// `A_{j,k} = E_{j, j+k mod d}`.
pub fn adjusted_basis(d: usize, j: usize, k: usize) -> Result<ComplexMatrix> {
    SpinLabel::new(d, j, k)?;
    computational_basis(d, j, (j + k) % d)
}

/// `S_{j,k} = sum_r F(j,r) A_{r,k}`: entry `(r, r+k)` is `eta^{jr}`.
pub fn spin_matrix(d: usize, j: usize, k: usize) -> Result<ComplexMatrix> {
    SpinLabel::new(d, j, k)?;
    let w = eta_table(d);
    let mut m = ComplexMatrix::zeros(d);
    for r in 0..d {
        m[(r, (r + k) % d)] = w[(j * r) % d];
    }
    Ok(m)
}

/// `(S_{j,k})^m = eta^{jk m(m-1)/2} S_{mj, mk}`.
///
/// `m = 0` gives the identity label with unit phase.
pub fn spin_power(d: usize, label: SpinLabel, m: u64) -> (RootOfUnity, SpinLabel) {
    if m == 0 {
        return (RootOfUnity::ONE, SpinLabel::IDENTITY);
    }
    let d64 = d as u128;
    let jk = (label.j as u128 * label.k as u128) % d64;
    let tri = (m as u128 * (m as u128 - 1) / 2) % d64;
    let phase = RootOfUnity::eta_pow(d, ((jk * tri) % d64) as i64);
    let m = (m as u128 % d64) as usize;
    let result = SpinLabel {
        j: (m * label.j) % d,
        k: (m * label.k) % d,
    };
    (phase, result)
}

/// `(S_{j,k})^† = eta^{jk} S_{-j,-k}`.
pub fn spin_dagger(d: usize, label: SpinLabel) -> (RootOfUnity, SpinLabel) {
    let phase = RootOfUnity::eta_pow(d, ((label.j * label.k) % d) as i64);
    (phase, label.negate(d))
}
