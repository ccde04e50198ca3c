//! Truncated complex power series ("jets") at a basepoint.
//!
//! A [`Jet`] of order `N` stores `c_0..c_N`, the Taylor coefficients of a
//! function in powers of `(z - basepoint)`. Binary operations truncate at the
//! smaller of the two orders; nothing is ever padded with zeros to look more
//! precise than it is.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible modulus for a pivot coefficient (constant term of a
/// divisor, linear term of a map to be inverted).
pub const DIVIDE_FLOOR: f64 = 1e-12;

/// Allowed gap between an inner jet's value and the outer jet's basepoint in
/// [`Jet::compose`].
pub const RECENTER_TOL: f64 = 1e-9;

/// Truncation order used when a caller does not choose one.
pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJet")]
pub struct Jet {
    basepoint: Complex64,
    coeffs: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawJet {
    basepoint: Complex64,
    coeffs: Vec<Complex64>,
}

impl TryFrom<RawJet> for Jet {
    type Error = String;

    fn try_from(raw: RawJet) -> std::result::Result<Self, String> {
        if raw.coeffs.is_empty() {
            return Err("a jet needs at least one coefficient".into());
        }
        Ok(Jet {
            basepoint: raw.basepoint,
            coeffs: raw.coeffs,
        })
    }
}

impl Jet {
    /// Builds a jet from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(basepoint: Complex64, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { basepoint, coeffs }
    }

    /// Convenience constructor from real coefficients.
    pub fn from_real(basepoint: Complex64, coeffs: &[f64]) -> Self {
        Jet::new(
            basepoint,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn zero(basepoint: Complex64, order: usize) -> Self {
        Jet::new(basepoint, vec![Complex64::new(0.0, 0.0); order + 1])
    }

    pub fn constant(basepoint: Complex64, value: Complex64, order: usize) -> Self {
        let mut j = Jet::zero(basepoint, order);
        j.coeffs[0] = value;
        j
    }

    /// The jet of the coordinate function `z` itself at `basepoint`.
    pub fn identity(basepoint: Complex64, order: usize) -> Self {
        let mut j = Jet::constant(basepoint, basepoint, order);
        if order >= 1 {
            j.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    /// The jet of `z - basepoint`: the local coordinate centred at the basepoint.
    pub fn local_coordinate(basepoint: Complex64, order: usize) -> Self {
        let mut j = Jet::zero(basepoint, order);
        if order >= 1 {
            j.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn basepoint(&self) -> Complex64 {
        self.basepoint
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `(z - basepoint)^k`, zero above the order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Value at the basepoint.
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let n = order.min(self.order());
        Jet::new(self.basepoint, self.coeffs[..=n].to_vec())
    }

    /// Same coefficients, re-anchored at another basepoint.
    pub fn with_basepoint(&self, basepoint: Complex64) -> Jet {
        Jet::new(basepoint, self.coeffs.clone())
    }

    pub fn scale(&self, factor: Complex64) -> Jet {
        Jet::new(
            self.basepoint,
            self.coeffs.iter().map(|&c| c * factor).collect(),
        )
    }

    /// Adds a constant to the value at the basepoint.
    pub fn shift_value(&self, by: Complex64) -> Jet {
        let mut j = self.clone();
        j.coeffs[0] += by;
        j
    }

    pub fn neg(&self) -> Jet {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    fn check_same_basepoint(&self, other: &Jet) -> Result<()> {
        if self.basepoint != other.basepoint {
            return Err(Error::BasepointMismatch(format!(
                "{} vs {}",
                self.basepoint, other.basepoint
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_same_basepoint(other)?;
        let n = self.order().min(other.order());
        Ok(Jet::new(
            self.basepoint,
            (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
        ))
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.add(&other.neg())
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_same_basepoint(other)?;
        let n = self.order().min(other.order());
        Ok(Jet::new(
            self.basepoint,
            mul_coeffs(&self.coeffs, &other.coeffs, n),
        ))
    }

    /// `self^k` for a non-negative integer power.
    pub fn powi(&self, k: u32) -> Jet {
        let n = self.order();
        let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
        acc[0] = Complex64::new(1.0, 0.0);
        for _ in 0..k {
            acc = mul_coeffs(&acc, &self.coeffs, n);
        }
        Jet::new(self.basepoint, acc)
    }

    /// Quotient `self / divisor`; the divisor must have a unit constant term.
    pub fn div(&self, divisor: &Jet) -> Result<Jet> {
        self.check_same_basepoint(divisor)?;
        let n = self.order().min(divisor.order());
        let inv = recip_coeffs(&divisor.coeffs, n)?;
        Ok(Jet::new(self.basepoint, mul_coeffs(&self.coeffs, &inv, n)))
    }

    pub fn recip(&self) -> Result<Jet> {
        Ok(Jet::new(
            self.basepoint,
            recip_coeffs(&self.coeffs, self.order())?,
        ))
    }

    /// Term-by-term derivative; the order drops by one.
    pub fn derivative(&self) -> Result<Jet> {
        if self.order() == 0 {
            return Err(Error::OrderTooLow { got: 0, need: 1 });
        }
        Ok(Jet::new(self.basepoint, derivative_coeffs(&self.coeffs)))
    }

    /// Taylor expansion of `self ∘ inner`, centred at `inner`'s basepoint.
    ///
    /// `inner`'s value must sit on `self`'s basepoint up to [`RECENTER_TOL`].
    /// A residual offset below that tolerance is kept in the Horner
    /// evaluation rather than discarded.
    pub fn compose(&self, inner: &Jet) -> Result<Jet> {
        let gap = (inner.value() - self.basepoint).norm();
        if gap > RECENTER_TOL {
            return Err(Error::BasepointMismatch(format!(
                "inner value {} is {gap:e} away from outer basepoint {}",
                inner.value(),
                self.basepoint
            )));
        }
        let n = self.order().min(inner.order());
        let mut shifted = inner.coeffs[..=n].to_vec();
        shifted[0] -= self.basepoint;
        Ok(Jet::new(
            inner.basepoint,
            compose_coeffs(&self.coeffs[..=n], &shifted, n),
        ))
    }

    /// Compositional inverse, centred at `self.value()`.
    ///
    /// Uses Newton's iteration `b <- b - (a∘b - id) / (a'∘b)`, which doubles
    /// the number of correct coefficients per step.
    pub fn comp_inverse(&self) -> Result<Jet> {
        let n = self.order();
        if n == 0 {
            return Err(Error::OrderTooLow { got: 0, need: 1 });
        }
        let a1 = self.coeffs[1];
        if a1.norm() <= DIVIDE_FLOOR {
            return Err(Error::NotInvertible(format!(
                "linear coefficient {a1} below floor"
            )));
        }
        // Work with the centred series a(x0 + t) - y0 and b(y0 + s) - x0.
        let mut centred = self.coeffs.clone();
        centred[0] = Complex64::new(0.0, 0.0);
        let mut da = derivative_coeffs(&centred);
        da.push(Complex64::new(0.0, 0.0));

        let mut b = vec![Complex64::new(0.0, 0.0); n + 1];
        b[1] = a1.inv();
        let mut correct = 1usize;
        while correct < n {
            let ab = compose_coeffs(&centred, &b, n);
            let mut residual = ab;
            residual[1] -= Complex64::new(1.0, 0.0);
            let slope = compose_coeffs(&da, &b, n);
            let step = mul_coeffs(&residual, &recip_coeffs(&slope, n)?, n);
            for (bk, sk) in b.iter_mut().zip(&step) {
                *bk -= sk;
            }
            correct *= 2;
        }
        b[0] = self.basepoint;
        Ok(Jet::new(self.value(), b))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise gap over the common order (basepoints ignored).
    pub fn max_abs_diff(&self, other: &Jet) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Evaluates the truncated series at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let t = z - self.basepoint;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c)
    }
}

pub(crate) fn mul_coeffs(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (i, &ai) in a.iter().enumerate().take(n + 1) {
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub(crate) fn recip_coeffs(b: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    let b0 = b[0];
    if b0.norm() <= DIVIDE_FLOOR {
        return Err(Error::DivisionByNonUnit(b0.norm()));
    }
    let inv0 = b0.inv();
    let mut q = vec![Complex64::new(0.0, 0.0); n + 1];
    q[0] = inv0;
    for k in 1..=n {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(b.len() - 1) {
            s += b[j] * q[k - j];
        }
        q[k] = -s * inv0;
    }
    Ok(q)
}

pub(crate) fn derivative_coeffs(a: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Horner evaluation of `outer(inner)` in the truncated ring.
pub(crate) fn compose_coeffs(outer: &[Complex64], inner: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
    for &c in outer.iter().take(n + 1).rev() {
        acc = mul_coeffs(&acc, inner, n);
        acc[0] += c;
    }
    acc
}
