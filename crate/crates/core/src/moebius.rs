//! The Möbius group PSL(2, C), the isotropy subgroup of `0`, and their actions
//! on points of the Riemann sphere and on jets.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{Jet, DIVIDE_FLOOR};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point of the Riemann sphere.
///
/// Serialized as `[re, im]` when finite and as the string `"infinity"`
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity(InfinityTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfinityTag {
    Infinity,
}

impl ExtendedComplex {
    pub const INFINITY: ExtendedComplex = ExtendedComplex::Infinity(InfinityTag::Infinity);

    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity(_) => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedComplex::Infinity(_))
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        ExtendedComplex::Finite(z)
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedComplex::Finite(z) => write!(f, "{z}"),
            ExtendedComplex::Infinity(_) => write!(f, "∞"),
        }
    }
}

/// `z ↦ (az + b)/(cz + d)` with `ad - bc = 1`.
///
/// Construction rescales any invertible quadruple by the principal square root
/// of its determinant. The sign ambiguity left over is handled by
/// [`MoebiusMap::approx_eq`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMoebius")]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

#[derive(Deserialize)]
struct RawMoebius {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl TryFrom<RawMoebius> for MoebiusMap {
    type Error = Error;

    fn try_from(r: RawMoebius) -> Result<Self> {
        MoebiusMap::new(r.a, r.b, r.c, r.d)
    }
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() <= DIVIDE_FLOOR {
            return Err(Error::DegenerateMap(det.norm()));
        }
        let s = det.sqrt().inv();
        Ok(MoebiusMap {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        })
    }

    pub fn identity() -> Self {
        MoebiusMap {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    pub fn translation(by: Complex64) -> Self {
        MoebiusMap {
            a: ONE,
            b: by,
            c: ZERO,
            d: ONE,
        }
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (e, f, g, h) = (other.a, other.b, other.c, other.d);
        // The product of two unimodular matrices is unimodular; renormalizing
        // only absorbs rounding.
        MoebiusMap::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
            .expect("product of invertible maps is invertible")
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Equality in PSL(2, C): coefficientwise within `tol`, up to a global sign.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Coefficientwise distance modulo the global sign.
    pub fn distance(&self, other: &MoebiusMap) -> f64 {
        let mine = self.coefficients();
        let theirs = other.coefficients();
        let plus = mine
            .iter()
            .zip(&theirs)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        let minus = mine
            .iter()
            .zip(&theirs)
            .map(|(x, y)| (x + y).norm())
            .fold(0.0, f64::max);
        plus.min(minus)
    }

    /// Evaluates the map on the Riemann sphere.
    pub fn apply(&self, z: ExtendedComplex) -> ExtendedComplex {
        match z {
            ExtendedComplex::Finite(z) => {
                let den = self.c * z + self.d;
                if den == ZERO {
                    ExtendedComplex::INFINITY
                } else {
                    ExtendedComplex::Finite((self.a * z + self.b) / den)
                }
            }
            ExtendedComplex::Infinity(_) => {
                if self.c == ZERO {
                    ExtendedComplex::INFINITY
                } else {
                    ExtendedComplex::Finite(self.a / self.c)
                }
            }
        }
    }

    /// Taylor expansion of the map at a finite basepoint.
    pub fn to_jet(&self, basepoint: Complex64, order: usize) -> Result<Jet> {
        let den0 = self.c * basepoint + self.d;
        if den0.norm() <= DIVIDE_FLOOR {
            return Err(Error::PoleAtBasepoint);
        }
        let mut num = Jet::constant(basepoint, self.a * basepoint + self.b, order);
        let mut den = Jet::constant(basepoint, den0, order);
        if order >= 1 {
            num = num.add(&Jet::local_coordinate(basepoint, order).scale(self.a))?;
            den = den.add(&Jet::local_coordinate(basepoint, order).scale(self.c))?;
        }
        num.div(&den)
    }

    /// The unique Möbius map sharing the 2-jet of `jet`, together with the
    /// largest coefficient gap between its full-order expansion and `jet`.
    pub fn fit_jet(jet: &Jet) -> Result<(MoebiusMap, f64)> {
        if jet.order() < 2 {
            return Err(Error::OrderTooLow {
                got: jet.order(),
                need: 2,
            });
        }
        let (r0, r1, r2) = (jet.coeff(0), jet.coeff(1), jet.coeff(2));
        if r1.norm() <= DIVIDE_FLOOR {
            return Err(Error::NotInvertible(format!(
                "linear coefficient {r1} below floor"
            )));
        }
        // m(s0 + t) = r0 + r1 t / (1 - k t) with k = r2 / r1.
        let s0 = jet.basepoint();
        let k = r2 / r1;
        let map = MoebiusMap::new(r1 - r0 * k, r0 + r0 * k * s0 - r1 * s0, -k, ONE + k * s0)?;
        let residual = map.to_jet(s0, jet.order())?.max_abs_diff(jet);
        Ok((map, residual))
    }
}

impl Default for MoebiusMap {
    fn default() -> Self {
        MoebiusMap::identity()
    }
}

/// An element `y ↦ αy/(γy + δ)` of the isotropy group of `0`, with `αδ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotropyElement {
    pub alpha: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl IsotropyElement {
    pub fn identity() -> Self {
        IsotropyElement {
            alpha: ONE,
            gamma: ZERO,
            delta: ONE,
        }
    }

    /// Normalizes `(α, γ, δ)` so that `αδ = 1`.
    pub fn new(alpha: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        let m = MoebiusMap::new(alpha, ZERO, gamma, delta)?;
        Ok(IsotropyElement {
            alpha: m.a,
            gamma: m.c,
            delta: m.d,
        })
    }

    pub fn to_map(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.alpha,
            b: ZERO,
            c: self.gamma,
            d: self.delta,
        }
    }

    pub fn inverse(&self) -> IsotropyElement {
        IsotropyElement {
            alpha: self.delta,
            gamma: -self.gamma,
            delta: self.alpha,
        }
    }

    pub fn approx_eq(&self, other: &IsotropyElement, tol: f64) -> bool {
        self.to_map().approx_eq(&other.to_map(), tol)
    }

    /// The jet of the element at `0`.
    pub fn to_jet(&self, order: usize) -> Jet {
        // δ ≠ 0 because αδ = 1, so 0 is never the pole.
        self.to_map()
            .to_jet(ZERO, order)
            .expect("isotropy elements are regular at 0")
    }

    /// Post-composition `self ∘ f` for a jet `f` taking the value `0`.
    pub fn act(&self, f: &Jet) -> Result<Jet> {
        self.to_jet(f.order()).compose(f)
    }

    /// The unique element whose 2-jet at `0` is `b₁y + b₂y²`.
    ///
    /// Solves `α/δ = b₁`, `-αγ/δ² = b₂` with `αδ = 1`, taking
    /// `δ = b₁^{-1/2}` on the principal branch.
    pub fn fit(two_jet: &Jet) -> Result<IsotropyElement> {
        if two_jet.order() < 2 {
            return Err(Error::OrderTooLow {
                got: two_jet.order(),
                need: 2,
            });
        }
        if two_jet.basepoint() != ZERO || two_jet.value() != ZERO {
            return Err(Error::BasepointMismatch(
                "isotropy fit needs a jet at 0 vanishing at 0".into(),
            ));
        }
        let (b1, b2) = (two_jet.coeff(1), two_jet.coeff(2));
        if b1.norm() <= DIVIDE_FLOOR {
            return Err(Error::NotInvertible(format!(
                "linear coefficient {b1} below floor"
            )));
        }
        let delta = b1.sqrt().inv();
        let alpha = delta.inv();
        let gamma = -b2 * delta * delta * delta;
        Ok(IsotropyElement {
            alpha,
            gamma,
            delta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(re: f64) -> Complex64 {
        c(re, 0.0)
    }

    #[test]
    fn construction_normalizes() {
        let m = MoebiusMap::new(r(2.0), r(1.0), r(1.0), r(1.0)).unwrap();
        assert!((m.determinant() - ONE).norm() < 1e-15);
        assert!(matches!(
            MoebiusMap::new(r(1.0), r(2.0), r(2.0), r(4.0)),
            Err(Error::DegenerateMap(_))
        ));
    }

    #[test]
    fn compose_examples() {
        let m = MoebiusMap::new(c(1.0, 2.0), r(0.5), c(0.0, -1.0), r(3.0)).unwrap();
        assert!(m.compose(&MoebiusMap::identity()).approx_eq(&m, 1e-15));
        let up = MoebiusMap::translation(r(1.0));
        let down = MoebiusMap::translation(r(-1.0));
        assert!(up.compose(&down).approx_eq(&MoebiusMap::identity(), 0.0));
        // 1/z normalizes to (0, -i, -i, 0); its square is -I, i.e. the identity.
        let inv = MoebiusMap::new(ZERO, ONE, ONE, ZERO).unwrap();
        let sq = inv.compose(&inv);
        assert!(sq.approx_eq(&MoebiusMap::identity(), 1e-15));
        assert!(!sq.approx_eq(&inv, 0.5));
    }

    #[test]
    fn apply_examples() {
        let id = MoebiusMap::identity();
        assert_eq!(id.apply(r(5.0).into()), r(5.0).into());
        let inv = MoebiusMap::new(ZERO, ONE, ONE, ZERO).unwrap();
        assert_eq!(inv.apply(ExtendedComplex::INFINITY), ZERO.into());
        assert!(inv.apply(ZERO.into()).is_infinite());
        let m = MoebiusMap::new(r(2.0), r(1.0), r(1.0), r(1.0)).unwrap();
        let v = m.apply(ZERO.into()).finite().unwrap();
        assert!((v - ONE).norm() < 1e-15);
        assert_eq!(
            MoebiusMap::translation(ONE).apply(ExtendedComplex::INFINITY),
            ExtendedComplex::INFINITY
        );
    }

    #[test]
    fn to_jet_examples() {
        let j = MoebiusMap::identity().to_jet(ZERO, 3).unwrap();
        assert_eq!(j.coeffs(), &[ZERO, ONE, ZERO, ZERO]);
        let m = MoebiusMap::new(ONE, ZERO, ONE, ONE).unwrap();
        let j = m.to_jet(ZERO, 3).unwrap();
        for (got, want) in j.coeffs().iter().zip([0.0, 1.0, -1.0, 1.0]) {
            assert!((got - r(want)).norm() < 1e-15);
        }
        let t = MoebiusMap::translation(c(2.0, -1.0))
            .to_jet(ZERO, 3)
            .unwrap();
        assert_eq!(t.coeffs(), &[c(2.0, -1.0), ONE, ZERO, ZERO]);
        assert!(matches!(m.to_jet(r(-1.0), 3), Err(Error::PoleAtBasepoint)));
    }

    #[test]
    fn isotropy_fit_examples() {
        let two_jet = |b1: f64, b2: f64| Jet::from_real(ZERO, &[0.0, b1, b2]);
        let e = IsotropyElement::fit(&two_jet(1.0, 0.0)).unwrap();
        assert!(e.approx_eq(&IsotropyElement::identity(), 0.0));

        let e = IsotropyElement::fit(&two_jet(1.0, -1.0)).unwrap();
        let expect = MoebiusMap::new(ONE, ZERO, ONE, ONE).unwrap();
        assert!(e.to_map().approx_eq(&expect, 1e-15));
        let j = e.to_jet(3);
        assert!((j.coeff(1) - ONE).norm() < 1e-15 && (j.coeff(2) + ONE).norm() < 1e-15);

        let e = IsotropyElement::fit(&two_jet(4.0, 0.0)).unwrap();
        assert!((e.alpha - r(2.0)).norm() < 1e-15);
        assert!((e.delta - r(0.5)).norm() < 1e-15);
        assert_eq!(e.gamma.norm(), 0.0);

        assert!(matches!(
            IsotropyElement::fit(&two_jet(0.0, 1.0)),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn isotropy_fixes_zero() {
        let e = IsotropyElement::new(c(0.3, 1.0), c(-2.0, 0.5), c(1.0, 1.0)).unwrap();
        assert_eq!(e.to_map().apply(ZERO.into()), ZERO.into());
        assert_eq!(e.to_jet(4).value(), ZERO);
    }

    #[test]
    fn fit_jet_recovers_map() {
        let m = MoebiusMap::new(c(1.0, 0.5), c(-0.2, 0.0), c(0.3, -0.4), c(0.9, 0.1)).unwrap();
        let base = c(0.2, 0.1);
        let (fit, residual) = MoebiusMap::fit_jet(&m.to_jet(base, 8).unwrap()).unwrap();
        assert!(fit.approx_eq(&m, 1e-12), "{fit:?} vs {m:?}");
        assert!(residual < 1e-12);
    }

    #[test]
    fn json_shapes() {
        let m = MoebiusMap::identity();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"a":[1.0,0.0],"b":[0.0,0.0],"c":[0.0,0.0],"d":[1.0,0.0]}"#
        );
        let back: MoebiusMap =
            serde_json::from_str(r#"{"a":[2,0],"b":[0,0],"c":[0,0],"d":[2,0]}"#).unwrap();
        assert!(back.approx_eq(&m, 1e-15));
        let inf: ExtendedComplex = serde_json::from_str(r#""infinity""#).unwrap();
        assert!(inf.is_infinite());
        let fin: ExtendedComplex = serde_json::from_str("[1.5, -2]").unwrap();
        assert_eq!(fin, c(1.5, -2.0).into());
    }
}
