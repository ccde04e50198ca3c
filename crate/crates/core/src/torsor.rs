//! Invertible 3-jets modulo post-composition by the isotropy group of `0`,
//! with their action by quadratic differentials.
//!
//! The two Möbius parameters of the isotropy group kill the linear and
//! quadratic coefficients, so every class has the normal form `z + c z³` and
//! `c = (a₁a₃ - a₂²)/a₁² = S(f)/6` is a coordinate on the fiber.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bidifferential::{flat, pullback};
use crate::error::{Error, Result};
use crate::jets::{Jet, DIVIDE_FLOOR, RECENTER_TOL};
use crate::moebius::IsotropyElement;

/// Agreement required between the two routes of [`coordinate_change_defect`].
pub const ROUTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsorElement {
    pub representative: Jet,
    pub canonical_c: Complex64,
}

/// `(a₁a₃ - a₂²)/a₁²` for a jet with `a₁ ≠ 0`.
pub fn closed_form_invariant(f: &Jet) -> Result<Complex64> {
    let a1 = f.coeff(1);
    if a1.norm() <= DIVIDE_FLOOR {
        return Err(Error::NotInvertible(format!(
            "linear coefficient {a1} below floor"
        )));
    }
    Ok((a1 * f.coeff(3) - f.coeff(2) * f.coeff(2)) / (a1 * a1))
}

fn check_member(f: &Jet) -> Result<()> {
    if f.order() < 3 {
        return Err(Error::OrderTooLow {
            got: f.order(),
            need: 3,
        });
    }
    if f.value().norm() > RECENTER_TOL {
        return Err(Error::BasepointMismatch(format!(
            "representative must vanish at its basepoint, got {}",
            f.value()
        )));
    }
    if f.coeff(1).norm() <= DIVIDE_FLOOR {
        return Err(Error::NotInvertible(format!(
            "linear coefficient {} below floor",
            f.coeff(1)
        )));
    }
    Ok(())
}

/// The isotropy element `m` with `m⁻¹ ∘ f = z + c z³ + O(z⁴)`.
fn reducing_element(f: &Jet) -> Result<IsotropyElement> {
    let two_jet = Jet::new(
        Complex64::new(0.0, 0.0),
        vec![Complex64::new(0.0, 0.0), f.coeff(1), f.coeff(2)],
    );
    IsotropyElement::fit(&two_jet)
}

/// Reduces `f` to the normal form `z + 0·z² + c·z³` by the isotropy group.
pub fn canonical_form(f: &Jet) -> Result<TorsorElement> {
    check_member(f)?;
    let mut centred = f.clone();
    // Exact zero value so the isotropy jet composes at 0.
    let v = centred.value();
    centred = centred.shift_value(-v);
    let reduced = reducing_element(&centred)?.inverse().act(&centred)?;
    Ok(TorsorElement {
        representative: f.clone(),
        canonical_c: reduced.coeff(3),
    })
}

impl TorsorElement {
    /// The normal-form jet `z + c z³` at the representative's basepoint.
    pub fn normal_form(&self) -> Jet {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 4];
        coeffs[1] = Complex64::new(1.0, 0.0);
        coeffs[3] = self.canonical_c;
        Jet::new(self.representative.basepoint(), coeffs)
    }
}

/// Acts by `v ∈ K²` through `f ↦ f + λ f³` with `v = λ (df)²`, i.e.
/// `λ = v / a₁²`, then re-canonicalizes.
pub fn act_quadratic(t: &TorsorElement, v: Complex64) -> Result<TorsorElement> {
    let f = &t.representative;
    let a1 = f.coeff(1);
    let lambda = v / (a1 * a1);
    let moved = f.add(&f.powi(3).scale(lambda))?;
    canonical_form(&moved)
}

/// The projective-structure-side value `6 c`, equal to `S(f)` at the basepoint.
pub fn to_projective_structure_scalar(t: &TorsorElement) -> Complex64 {
    t.canonical_c * 6.0
}

/// Difference of the 3Δ sections induced by the charts `w` and `z`, in units
/// of `dx⊗dx` at the common basepoint.
///
/// Computed from the regular diagonal values of the two pullbacks of the flat
/// germ and, independently, from the closed form `(a₁a₃ - a₂²)/a₁²`. When `z`
/// is the identity chart this is the familiar coordinate-change formula.
pub fn coordinate_change_defect(w: &Jet, z_chart: &Jet) -> Result<Complex64> {
    if w.basepoint() != z_chart.basepoint() {
        return Err(Error::BasepointMismatch(format!(
            "charts at {} and {}",
            w.basepoint(),
            z_chart.basepoint()
        )));
    }
    for chart in [w, z_chart] {
        if chart.order() < 3 {
            return Err(Error::OrderTooLow {
                got: chart.order(),
                need: 3,
            });
        }
    }
    let section = |chart: &Jet| -> Result<Complex64> {
        let germ = pullback(&flat(chart.value(), 0), chart)?;
        Ok(germ.entry(0, 0))
    };
    let via_pullback = section(w)? - section(z_chart)?;
    let via_formula = closed_form_invariant(w)? - closed_form_invariant(z_chart)?;
    let scale = via_formula.norm().max(1.0);
    if (via_pullback - via_formula).norm() > ROUTE_TOL * scale {
        return Err(Error::InconsistentRoutes {
            first: via_pullback.to_string(),
            second: via_formula.to_string(),
        });
    }
    Ok(via_formula)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn at0(coeffs: &[f64]) -> Jet {
        Jet::from_real(r(0.0), coeffs)
    }

    #[test]
    fn canonical_form_examples() {
        let t = canonical_form(&at0(&[0.0, 1.0, 0.0, 5.0])).unwrap();
        assert!((t.canonical_c - r(5.0)).norm() < 1e-15);

        let f = at0(&[0.0, 1.0, 1.0, 1.0]);
        let t = canonical_form(&f).unwrap();
        assert!(t.canonical_c.norm() < 1e-15);
        assert_eq!(closed_form_invariant(&f).unwrap(), r(0.0));

        let t = canonical_form(&at0(&[0.0, 2.0, 0.0, 4.0])).unwrap();
        assert!((t.canonical_c - r(2.0)).norm() < 1e-15);
    }

    #[test]
    fn canonical_form_errors() {
        assert!(matches!(
            canonical_form(&at0(&[0.0, 0.0, 1.0, 1.0])),
            Err(Error::NotInvertible(_))
        ));
        assert!(matches!(
            canonical_form(&at0(&[0.0, 1.0, 1.0])),
            Err(Error::OrderTooLow { .. })
        ));
        assert!(matches!(
            canonical_form(&at0(&[1.0, 1.0, 0.0, 0.0])),
            Err(Error::BasepointMismatch(_))
        ));
    }

    #[test]
    fn act_examples() {
        let t = canonical_form(&at0(&[0.0, 1.0, 0.3, 0.2])).unwrap();
        let same = act_quadratic(&t, r(0.0)).unwrap();
        assert!((same.canonical_c - t.canonical_c).norm() < 1e-15);

        let z = canonical_form(&at0(&[0.0, 1.0, 0.0, 0.0])).unwrap();
        let moved = act_quadratic(&z, r(3.0)).unwrap();
        assert!(
            moved
                .representative
                .max_abs_diff(&at0(&[0.0, 1.0, 0.0, 3.0]))
                < 1e-15
        );
        assert!((moved.canonical_c - r(3.0)).norm() < 1e-15);

        // f = 2z, λ = 1 means v = λ a₁² = 4.
        let two_z = canonical_form(&at0(&[0.0, 2.0, 0.0, 0.0])).unwrap();
        let moved = act_quadratic(&two_z, r(4.0)).unwrap();
        assert!(
            moved
                .representative
                .max_abs_diff(&at0(&[0.0, 2.0, 0.0, 8.0]))
                < 1e-15
        );
        assert!((moved.canonical_c - r(4.0)).norm() < 1e-15);
    }

    #[test]
    fn scalar_examples() {
        let s =
            |coeffs: &[f64]| to_projective_structure_scalar(&canonical_form(&at0(coeffs)).unwrap());
        assert_eq!(s(&[0.0, 1.0, 0.0, 0.0]), r(0.0));
        assert!((s(&[0.0, 1.0, 0.0, 0.7]) - r(4.2)).norm() < 1e-14);
        assert!(s(&[0.0, 1.0, 1.0, 1.0]).norm() < 1e-14);
    }

    #[test]
    fn normal_form_jet() {
        let t = canonical_form(&at0(&[0.0, 2.0, 1.0, 4.0])).unwrap();
        let nf = t.normal_form();
        assert_eq!(nf.coeff(1), r(1.0));
        assert_eq!(nf.coeff(2), r(0.0));
        assert_eq!(nf.coeff(3), t.canonical_c);
    }

    #[test]
    fn coordinate_change_examples() {
        let id = Jet::identity(r(0.0), 3);
        assert!(
            coordinate_change_defect(&at0(&[0.0, 2.0, 0.0, 0.0]), &id)
                .unwrap()
                .norm()
                < 1e-15
        );
        let v = coordinate_change_defect(&at0(&[0.0, 1.0, 1.0, 0.0]), &id).unwrap();
        assert!((v - r(-1.0)).norm() < 1e-15);
        let v = coordinate_change_defect(&at0(&[0.0, 1.0, 0.0, 1.0]), &id).unwrap();
        assert!((v - r(1.0)).norm() < 1e-15);
    }
}
