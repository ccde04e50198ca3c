//! Genus-0 and genus-1 realizations: Jacobi θ₁, Weierstrass ℘, the prime
//! form, the bidifferential `ω_B = ∂²ln E/∂x∂y`, the torus projective
//! connection and the generalized cross ratio.
//!
//! The torus is `C / (Z + τZ)` in its flat coordinate. The genus-1 prime form
//! is taken to be `θ₁(x - y | τ) / θ₁'(0 | τ)` without the half-characteristic
//! exponential factors; every quantity computed here (mixed log-derivatives,
//! cross-ratio coalescence) is blind to those factors.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bidifferential::BidiffGerm;
use crate::error::{Error, Result};
use crate::moebius::ExtendedComplex;

pub const DEFAULT_THETA_TERMS: usize = 32;
pub const DEFAULT_LATTICE_BOUND: usize = 40;

/// Points closer than this to a lattice point count as lattice points.
pub const LATTICE_TOL: f64 = 1e-8;

/// Finite-difference step for the coalescing limit, relative to the distance
/// between the two points (capped at 1).
pub const COALESCE_STEP: f64 = 1e-3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn default_theta_terms() -> usize {
    DEFAULT_THETA_TERMS
}

fn default_lattice_bound() -> usize {
    DEFAULT_LATTICE_BOUND
}

/// A point of the upper half-plane with truncation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModulus")]
pub struct TorusModulus {
    tau: Complex64,
    theta_terms: usize,
    lattice_bound: usize,
}

#[derive(Deserialize)]
struct RawModulus {
    tau: Complex64,
    #[serde(default = "default_theta_terms")]
    theta_terms: usize,
    #[serde(default = "default_lattice_bound")]
    lattice_bound: usize,
}

impl TryFrom<RawModulus> for TorusModulus {
    type Error = Error;

    fn try_from(r: RawModulus) -> Result<Self> {
        TorusModulus::with_bounds(r.tau, r.theta_terms, r.lattice_bound)
    }
}

impl TorusModulus {
    pub fn new(tau: Complex64) -> Result<Self> {
        TorusModulus::with_bounds(tau, DEFAULT_THETA_TERMS, DEFAULT_LATTICE_BOUND)
    }

    /// Rejects `Im τ ≤ 0` and theta truncations whose first omitted term can
    /// exceed `1e-15` on the reduced cell `|Im z| ≤ Im τ / 2`.
    pub fn with_bounds(tau: Complex64, theta_terms: usize, lattice_bound: usize) -> Result<Self> {
        if !tau.re.is_finite() || !tau.im.is_finite() || tau.im <= 0.0 {
            return Err(Error::InvalidModulus(format!(
                "Im(tau) must be positive, got {tau}"
            )));
        }
        // |q^{(n+1/2)^2} sin((2n+1)πz)| ≤ exp(-π Im τ (n+1/2)(n-1/2)) on the cell.
        let n = theta_terms as f64;
        let tail = -PI * tau.im * (n + 0.5) * (n - 0.5);
        if theta_terms == 0 || tail > (1e-15f64).ln() {
            return Err(Error::InvalidModulus(format!(
                "{theta_terms} theta terms are not enough for tau = {tau}"
            )));
        }
        if lattice_bound == 0 {
            return Err(Error::InvalidModulus(
                "lattice_bound must be positive".into(),
            ));
        }
        Ok(TorusModulus {
            tau,
            theta_terms,
            lattice_bound,
        })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn theta_terms(&self) -> usize {
        self.theta_terms
    }

    pub fn lattice_bound(&self) -> usize {
        self.lattice_bound
    }

    /// Writes `z = z' + m + nτ` with `z'` in the centred fundamental cell.
    fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let n = (z.im / self.tau.im).round();
        let shifted = z - self.tau * n;
        let m = shifted.re.round();
        (shifted - m, m as i64, n as i64)
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn lattice_distance(&self, z: Complex64) -> f64 {
        let (zr, _, _) = self.reduce(z);
        let mut best = f64::INFINITY;
        for n in -1..=1 {
            for m in -1..=1 {
                best = best.min((zr - self.tau * n as f64 - m as f64).norm());
            }
        }
        best
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn shortest_period(&self) -> f64 {
        let mut best = f64::INFINITY;
        for n in -4i32..=4 {
            for m in -8i32..=8 {
                if n == 0 && m == 0 {
                    continue;
                }
                best = best.min((self.tau * n as f64 + m as f64).norm());
            }
        }
        best
    }

    /// `θ₁` and its first three derivatives from the term-differentiated series.
    fn theta1_series(&self, z: Complex64) -> [Complex64; 4] {
        let mut out = [ZERO; 4];
        for n in 0..self.theta_terms {
            let half = n as f64 + 0.5;
            let weight = (I * PI * self.tau * half * half).exp();
            let signed = if n % 2 == 0 { weight } else { -weight };
            let a = (2 * n + 1) as f64 * PI;
            let (s, c) = ((z * a).sin(), (z * a).cos());
            out[0] += signed * s;
            out[1] += signed * c * a;
            out[2] -= signed * s * (a * a);
            out[3] -= signed * c * (a * a * a);
        }
        out.map(|v| v * 2.0)
    }

    /// Derivatives `θ₁^{(k)}(0)` for `k = 1, 3`.
    fn theta1_odd_derivs_at_zero(&self) -> (Complex64, Complex64) {
        let d = self.theta1_series(ZERO);
        (d[1], d[3])
    }
}

/// `θ₁(z | τ) = 2 Σ (-1)^n q^{(n+1/2)^2} sin((2n+1)πz)`, `q = e^{iπτ}`.
///
/// `z` is first reduced to the centred cell and the quasi-periodicity factor
/// `θ₁(z + m + nτ) = (-1)^{m+n} q^{-n^2} e^{-2πinz} θ₁(z)` reapplied.
pub fn theta1(z: Complex64, m: &TorusModulus) -> Complex64 {
    let (zr, mm, nn) = m.reduce(z);
    let n = nn as f64;
    let sign = if (mm + nn).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let factor = (-I * PI * m.tau * n * n - I * 2.0 * PI * n * zr).exp() * sign;
    factor * m.theta1_series(zr)[0]
}

/// `θ₁'(0 | τ)`.
pub fn theta1_prime_zero(m: &TorusModulus) -> Complex64 {
    m.theta1_odd_derivs_at_zero().0
}

/// `-(ln θ₁)''(t)`, which is doubly periodic.
fn neg_log_theta_second(t: Complex64, m: &TorusModulus) -> Complex64 {
    let (tr, _, _) = m.reduce(t);
    let d = m.theta1_series(tr);
    let ratio = d[1] / d[0];
    ratio * ratio - d[2] / d[0]
}

/// The constant `c(τ) = -θ₁'''(0) / (3 θ₁'(0))` with
/// `ω_B(x, y) = 1/(x - y)^2 + c(τ) + O((x - y)^2)`.
pub fn diagonal_constant(m: &TorusModulus) -> Complex64 {
    let (d1, d3) = m.theta1_odd_derivs_at_zero();
    -d3 / (d1 * 3.0)
}

/// Weierstrass `℘(z)` for the lattice `Z + τZ`, as a lattice sum taken row by
/// row: each row `Σ_m 1/(z - m - nτ)^2` is summed in closed form
/// `π² csc²(π(z - nτ))`, and rows `|n| ≤ lattice_bound` are kept.
pub fn weierstrass_p(z: Complex64, m: &TorusModulus) -> Result<Complex64> {
    if m.lattice_distance(z) <= LATTICE_TOL {
        return Err(Error::LatticePoint);
    }
    let (zr, _, _) = m.reduce(z);
    let pi2 = PI * PI;
    let mut sum = csc2(zr) * pi2 - pi2 / 3.0;
    for k in 1..=m.lattice_bound as i64 {
        for n in [k, -k] {
            let shift = m.tau * n as f64;
            sum += (csc2(zr - shift) - csc2(shift)) * pi2;
        }
    }
    Ok(sum)
}

/// `℘'(z)` from the same row sums.
pub fn weierstrass_p_prime(z: Complex64, m: &TorusModulus) -> Result<Complex64> {
    if m.lattice_distance(z) <= LATTICE_TOL {
        return Err(Error::LatticePoint);
    }
    let (zr, _, _) = m.reduce(z);
    let mut sum = ZERO;
    for n in -(m.lattice_bound as i64)..=m.lattice_bound as i64 {
        let w = zr - m.tau * n as f64;
        sum += cot(w) * csc2(w);
    }
    Ok(sum * (-2.0 * PI * PI * PI))
}

/// `℘(z)` through theta functions: `-(ln θ₁)''(z) - c(τ)`.
pub fn weierstrass_p_theta(z: Complex64, m: &TorusModulus) -> Result<Complex64> {
    if m.lattice_distance(z) <= LATTICE_TOL {
        return Err(Error::LatticePoint);
    }
    Ok(neg_log_theta_second(z, m) - diagonal_constant(m))
}

/// `(g₂, g₃) = (60 G₄, 140 G₆)` from the q-expansions of the normalized
/// Eisenstein series `E₄ = 1 + 240 Σ σ₃(n) q^n`, `E₆ = 1 - 504 Σ σ₅(n) q^n`,
/// `q = e^{2πiτ}`.
pub fn eisenstein_invariants(m: &TorusModulus) -> (Complex64, Complex64) {
    let q = (I * 2.0 * PI * m.tau).exp();
    let mut e4 = Complex64::new(1.0, 0.0);
    let mut e6 = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=400u64 {
        qn *= q;
        let (s3, s5) = divisor_sums(n);
        let t4 = qn * (240.0 * s3);
        let t6 = qn * (504.0 * s5);
        e4 += t4;
        e6 -= t6;
        if t6.norm() < 1e-18 * e6.norm().max(1.0) && t4.norm() < 1e-18 * e4.norm().max(1.0) {
            break;
        }
    }
    let pi4 = PI.powi(4);
    let g4 = e4 * (pi4 / 45.0);
    let g6 = e6 * (2.0 * PI.powi(6) / 945.0);
    (g4 * 60.0, g6 * 140.0)
}

fn divisor_sums(n: u64) -> (f64, f64) {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .fold((0.0, 0.0), |(s3, s5), d| {
            let d = d as f64;
            (s3 + d.powi(3), s5 + d.powi(5))
        })
}

/// `csc²(πw) = -4E / (1 - E)^2` with `E = e^{±2πiw}` chosen to decay.
fn csc2(w: Complex64) -> Complex64 {
    let e = decaying_exp(w);
    let one = Complex64::new(1.0, 0.0);
    -e * 4.0 / ((one - e) * (one - e))
}

/// `cot(πw)`, using `cot(πw) = ±i (E + 1)/(E - 1)`.
fn cot(w: Complex64) -> Complex64 {
    let e = decaying_exp(w);
    let one = Complex64::new(1.0, 0.0);
    let v = I * (e + one) / (e - one);
    if w.im >= 0.0 {
        v
    } else {
        -v
    }
}

fn decaying_exp(w: Complex64) -> Complex64 {
    if w.im >= 0.0 {
        (I * 2.0 * PI * w).exp()
    } else {
        (-I * 2.0 * PI * w).exp()
    }
}

/// Genus-1 prime form `E(x, y) = θ₁(x - y) / θ₁'(0)`.
pub fn prime_form_g1(x: Complex64, y: Complex64, m: &TorusModulus) -> Complex64 {
    theta1(x - y, m) / theta1_prime_zero(m)
}

/// `ω_B(x, y) = ∂²ln E / ∂x∂y = -(ln θ₁)''(x - y)`, from the analytic
/// derivatives of the theta series.
pub fn omega_b_g1(x: Complex64, y: Complex64, m: &TorusModulus) -> Result<Complex64> {
    if m.lattice_distance(x - y) <= LATTICE_TOL {
        return Err(Error::DiagonalPoint);
    }
    Ok(neg_log_theta_second(x - y, m))
}

/// Schwarzian-normalized projective connection of the flat torus coordinate
/// induced by `ω_B`: `6 c(τ) = -2 θ₁'''(0) / θ₁'(0)`.
pub fn torus_proj_connection(m: &TorusModulus) -> Complex64 {
    diagonal_constant(m) * 6.0
}

/// The germ of `ω_B` at `(u₀, u₀)`.
///
/// The regular part `R(t) = ω_B(u₀ + t, u₀) - 1/t²` is expanded by the
/// trapezoidal rule for Cauchy's integral on a circle well inside the
/// shortest period, so its coefficients are measured from values of `ω_B`
/// rather than copied from the closed form.
pub fn omega_b_germ(m: &TorusModulus, u0: Complex64, order: usize) -> Result<BidiffGerm> {
    const SAMPLES: usize = 96;
    let radius = 0.4 * m.shortest_period().min(1.0);
    let mut values = Vec::with_capacity(SAMPLES);
    for j in 0..SAMPLES {
        let t = Complex64::from_polar(radius, 2.0 * PI * j as f64 / SAMPLES as f64);
        values.push(omega_b_g1(u0 + t, u0, m)? - (t * t).inv());
    }
    let r: Vec<Complex64> = (0..=order)
        .map(|k| {
            let mut acc = ZERO;
            for (j, v) in values.iter().enumerate() {
                let angle = -2.0 * PI * (j * k) as f64 / SAMPLES as f64;
                acc += v * Complex64::from_polar(1.0, angle);
            }
            acc / (SAMPLES as f64 * radius.powi(k as i32))
        })
        .collect();
    Ok(BidiffGerm::from_difference_kernel(u0, &r))
}

/// The surface on which cross ratios and their coalescing limits are taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Surface {
    /// The Riemann sphere in its affine chart, with prime form `x - y`.
    Sphere,
    Torus(TorusModulus),
}

impl Surface {
    pub fn prime_form(&self, x: Complex64, y: Complex64) -> Complex64 {
        match self {
            Surface::Sphere => x - y,
            Surface::Torus(m) => prime_form_g1(x, y, m),
        }
    }

    /// Whether `x` and `y` coincide (modulo periods on the torus).
    fn coincide(&self, x: Complex64, y: Complex64, tol: f64) -> bool {
        match self {
            Surface::Sphere => (x - y).norm() <= tol,
            Surface::Torus(m) => m.lattice_distance(x - y) <= tol,
        }
    }

    /// `E(z₁,z₂) E(z₃,z₄) / (E(z₁,z₄) E(z₂,z₃))` at finite points.
    pub fn cross_ratio(&self, z: [Complex64; 4]) -> Result<Complex64> {
        if self.coincide(z[0], z[3], 0.0) || self.coincide(z[1], z[2], 0.0) {
            return Err(Error::PolePoint);
        }
        let den = self.prime_form(z[0], z[3]) * self.prime_form(z[1], z[2]);
        if den == ZERO {
            return Err(Error::PolePoint);
        }
        Ok(self.prime_form(z[0], z[1]) * self.prime_form(z[2], z[3]) / den)
    }

    /// `∂²/∂ε₁∂ε₂ ln 1_A(z₁, z₂, z₁ + ε₁, z₂ + ε₂)` at `ε = 0`, by central
    /// differences with one Richardson step.
    pub fn coalesce(&self, z1: Complex64, z2: Complex64) -> Result<Complex64> {
        if self.coincide(z1, z2, LATTICE_TOL) {
            return Err(Error::DiagonalPoint);
        }
        let separation = match self {
            Surface::Sphere => (z1 - z2).norm(),
            Surface::Torus(m) => m.lattice_distance(z1 - z2),
        };
        let step = COALESCE_STEP * separation.min(1.0);
        let base = self.cross_ratio([z1, z2, z1, z2])?;
        let log_ratio = |e1: f64, e2: f64| -> Result<Complex64> {
            let v = self.cross_ratio([z1, z2, z1 + e1, z2 + e2])?;
            Ok((v / base).ln())
        };
        let mixed = |h: f64| -> Result<Complex64> {
            Ok(
                (log_ratio(h, h)? - log_ratio(h, -h)? - log_ratio(-h, h)? + log_ratio(-h, -h)?)
                    / (4.0 * h * h),
            )
        };
        let coarse = mixed(step)?;
        let fine = mixed(step / 2.0)?;
        Ok((fine * 4.0 - coarse) / 3.0)
    }
}

/// Classical cross ratio `(z₁-z₂)(z₃-z₄) / ((z₁-z₄)(z₂-z₃))` on the sphere.
///
/// A point at infinity drops out of the two factors containing it (one in the
/// numerator, one in the denominator), which is the limiting value.
pub fn cross_ratio_g0(z: [ExtendedComplex; 4]) -> Result<Complex64> {
    let factor = |a: ExtendedComplex, b: ExtendedComplex| -> Option<Complex64> {
        match (a.finite(), b.finite()) {
            (Some(x), Some(y)) => Some(x - y),
            _ => None,
        }
    };
    let infinite = z.iter().filter(|p| p.is_infinite()).count();
    if infinite > 1 {
        // Two or more points at infinity force a coincidence.
        if (z[0].is_infinite() && z[3].is_infinite()) || (z[1].is_infinite() && z[2].is_infinite())
        {
            return Err(Error::PolePoint);
        }
        if (z[0].is_infinite() && z[1].is_infinite()) || (z[2].is_infinite() && z[3].is_infinite())
        {
            return Ok(ZERO);
        }
        return Err(Error::PolePoint);
    }
    let one = Complex64::new(1.0, 0.0);
    let num = factor(z[0], z[1]).unwrap_or(one) * factor(z[2], z[3]).unwrap_or(one);
    let den = factor(z[0], z[3]).unwrap_or(one) * factor(z[1], z[2]).unwrap_or(one);
    if den == ZERO {
        return Err(Error::PolePoint);
    }
    Ok(num / den)
}

/// Generalized cross ratio on the torus.
pub fn cross_ratio_g1(z: [Complex64; 4], m: &TorusModulus) -> Result<Complex64> {
    Surface::Torus(*m).cross_ratio(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn modulus() -> TorusModulus {
        TorusModulus::new(c(0.1, 1.2)).unwrap()
    }

    #[test]
    fn modulus_validation() {
        assert!(matches!(
            TorusModulus::new(c(0.0, -1.0)),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            TorusModulus::new(c(0.3, 0.0)),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            TorusModulus::with_bounds(c(0.0, 1.0), 2, 40),
            Err(Error::InvalidModulus(_))
        ));
        let m: TorusModulus = serde_json::from_str(r#"{"tau":[0.0,1.0]}"#).unwrap();
        assert_eq!(m.theta_terms(), DEFAULT_THETA_TERMS);
        assert_eq!(m.lattice_bound(), DEFAULT_LATTICE_BOUND);
    }

    #[test]
    fn theta_parity_and_periodicity() {
        let m = modulus();
        assert_eq!(theta1(ZERO, &m), ZERO);
        for z in [c(0.13, 0.2), c(-0.4, 0.5), c(0.77, -0.31)] {
            assert!((theta1(-z, &m) + theta1(z, &m)).norm() < 1e-13);
            assert!((theta1(z + 1.0, &m) + theta1(z, &m)).norm() < 1e-13);
        }
    }

    #[test]
    fn theta_quasi_periodicity_in_tau() {
        let m = modulus();
        let tau = m.tau();
        let q = (I * PI * tau).exp();
        for z in [c(0.1, 0.05), c(-0.3, 0.4)] {
            let lhs = theta1(z + tau, &m);
            let rhs = -(I * 2.0 * PI * z).exp().inv() / q * theta1(z, &m);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn prime_form_examples() {
        let m = modulus();
        let (x, y) = (c(0.2, 0.1), c(-0.15, 0.3));
        assert_eq!(prime_form_g1(x, x, &m), ZERO);
        assert!((prime_form_g1(x, y, &m) + prime_form_g1(y, x, &m)).norm() < 1e-14);
        let h = c(1e-4, 0.0);
        let ratio = prime_form_g1(x + h, x, &m) / h;
        assert!((ratio - 1.0).norm() < 1e-6);
    }

    #[test]
    fn weierstrass_laurent_and_periods() {
        let m = modulus();
        let z = c(1e-3, 0.0);
        // ℘(z) - 1/z² = (g₂/20) z² + O(z⁴)
        let rem = weierstrass_p(z, &m).unwrap() - (z * z).inv();
        assert!(rem.norm() < 1e-2 * z.norm().powi(2) * 1e4);
        let w = c(0.31, 0.17);
        let p = weierstrass_p(w, &m).unwrap();
        assert!((weierstrass_p(w + 1.0, &m).unwrap() - p).norm() < 1e-10);
        assert!((weierstrass_p(w + m.tau(), &m).unwrap() - p).norm() < 1e-10);
        assert!(matches!(
            weierstrass_p(m.tau() + 1.0, &m),
            Err(Error::LatticePoint)
        ));
    }

    #[test]
    fn weierstrass_routes_agree() {
        for tau in [c(0.0, 1.0), c(0.1, 1.2), c(-0.4, 0.8)] {
            let m = TorusModulus::new(tau).unwrap();
            for z in [c(0.21, 0.13), c(-0.37, 0.3), c(0.45, -0.2)] {
                let a = weierstrass_p(z, &m).unwrap();
                let b = weierstrass_p_theta(z, &m).unwrap();
                assert!((a - b).norm() < 1e-8, "{tau}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn omega_b_examples() {
        let m = modulus();
        let (x, y) = (c(0.2, 0.1), c(-0.15, 0.3));
        let xy = omega_b_g1(x, y, &m).unwrap();
        assert!((xy - omega_b_g1(y, x, &m).unwrap()).norm() < 1e-12);
        let p = weierstrass_p(x - y, &m).unwrap();
        assert!((xy - p - diagonal_constant(&m)).norm() < 1e-8);
        assert!(matches!(
            omega_b_g1(x, x + 1.0, &m),
            Err(Error::DiagonalPoint)
        ));
    }

    #[test]
    fn proj_connection_limit_for_large_im_tau() {
        let m = TorusModulus::new(c(0.0, 8.0)).unwrap();
        assert!((torus_proj_connection(&m) - 2.0 * PI * PI).norm() < 1e-12);
    }

    #[test]
    fn omega_germ_matches_closed_form_constant() {
        let m = modulus();
        let g = omega_b_germ(&m, c(0.3, 0.1), 6).unwrap();
        assert!((g.entry(0, 0) - diagonal_constant(&m)).norm() < 1e-10);
        assert!(g.symmetry_defect() < 1e-12);
    }

    #[test]
    fn cross_ratio_g0_examples() {
        let p = |x: f64| ExtendedComplex::from(c(x, 0.0));
        let v = cross_ratio_g0([p(0.0), p(1.0), p(2.0), p(3.0)]).unwrap();
        assert_eq!(v, c(1.0 / 3.0, 0.0));
        assert_eq!(
            cross_ratio_g0([p(1.0), p(1.0), p(2.0), p(3.0)]).unwrap(),
            ZERO
        );
        assert!(matches!(
            cross_ratio_g0([p(1.0), p(2.0), p(2.0), p(3.0)]),
            Err(Error::PolePoint)
        ));
        // (∞, 1, 2, 3): (3 - 2... ) limit is (z₃ - z₄)/(z₂ - z₃) = (2 - 3)/(1 - 2) = 1
        let inf = ExtendedComplex::INFINITY;
        assert_eq!(
            cross_ratio_g0([inf, p(1.0), p(2.0), p(3.0)]).unwrap(),
            c(1.0, 0.0)
        );
    }

    #[test]
    fn cross_ratio_g1_examples() {
        let m = modulus();
        let z = [c(0.1, 0.0), c(0.3, 0.2), c(-0.2, 0.1), c(0.05, -0.3)];
        assert_eq!(cross_ratio_g1([z[0], z[0], z[2], z[3]], &m).unwrap(), ZERO);
        let a = cross_ratio_g1(z, &m).unwrap();
        let b = cross_ratio_g1([z[2], z[3], z[0], z[1]], &m).unwrap();
        assert!((a - b).norm() < 1e-13 * a.norm());
        assert!(matches!(
            cross_ratio_g1([z[0], z[1], z[2], z[0]], &m),
            Err(Error::PolePoint)
        ));
    }

    #[test]
    fn coalesce_sphere() {
        let (z1, z2) = (c(0.3, 0.2), c(-0.5, 0.4));
        let v = Surface::Sphere.coalesce(z1, z2).unwrap();
        let d = z1 - z2;
        assert!(
            (v - (d * d).inv()).norm() < 1e-8,
            "{v} vs {}",
            (d * d).inv()
        );
        assert!(matches!(
            Surface::Sphere.coalesce(z1, z1),
            Err(Error::DiagonalPoint)
        ));
    }
}
