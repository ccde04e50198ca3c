//! The Schwarzian derivative on jets and the power-series solver for
//! `S(w) = h`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{Jet, DIVIDE_FLOOR};
use crate::moebius::MoebiusMap;

/// Default tolerance for identities between jets of order up to 8.
pub const IDENTITY_TOL: f64 = 1e-8;

/// Local coefficient `h` of a quadratic differential `h dz⊗dz`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuadDiffGerm {
    pub h: Jet,
}

impl QuadDiffGerm {
    pub fn new(h: Jet) -> Self {
        QuadDiffGerm { h }
    }
}

/// `S(f) = (2f'f''' - 3f''^2) / (2f'^2)`, as a jet of order `f.order() - 3`.
pub fn schwarzian(f: &Jet) -> Result<Jet> {
    if f.order() < 3 {
        return Err(Error::OrderTooLow {
            got: f.order(),
            need: 3,
        });
    }
    let d1 = f.derivative()?;
    if d1.value().norm() <= DIVIDE_FLOOR {
        return Err(Error::CriticalPoint(d1.value().norm()));
    }
    let d2 = d1.derivative()?;
    let d3 = d2.derivative()?;
    let n = d3.order();
    let two = Complex64::new(2.0, 0.0);
    let num = d1
        .mul(&d3)?
        .scale(two)
        .sub(&d2.mul(&d2)?.scale(Complex64::new(3.0, 0.0)))?;
    let den = d1.mul(&d1)?.scale(two).truncate(n);
    num.div(&den)
}

/// `S(f∘g) - [(S(f)∘g)·g'^2 + S(g)]`, which vanishes identically.
pub fn cocycle_defect(f: &Jet, g: &Jet) -> Result<Jet> {
    let lhs = schwarzian(&f.compose(g)?)?;
    let dg = g.derivative()?;
    let rhs = schwarzian(f)?
        .compose(g)?
        .mul(&dg.mul(&dg)?)?
        .add(&schwarzian(g)?)?;
    lhs.sub(&rhs)
}

/// Solves `S(w) = h` with `w = z + a₂z² + a₃z³ + …` in the local coordinate
/// at `h`'s basepoint, using the gauge `a₂ = 0`.
pub fn solve(h: &QuadDiffGerm, order: usize) -> Result<Jet> {
    solve_with_gauge(h, order, Complex64::new(0.0, 0.0))
}

/// Like [`solve`], but with the free quadratic coefficient set to `a2`.
///
/// With `p_j = (j+1) a_{j+1}` the coefficients of `w'`, the `z^k` coefficient
/// of `2w'w''' - 3w''^2 - 2h w'^2 = 0` is linear in `p_{k+2}` with factor
/// `2(k+1)(k+2)` and otherwise involves only lower `p_j`.
pub fn solve_with_gauge(h: &QuadDiffGerm, order: usize, a2: Complex64) -> Result<Jet> {
    if order < 3 {
        return Err(Error::OrderTooLow {
            got: order,
            need: 3,
        });
    }
    let hj = &h.h;
    if hj.order() + 3 < order {
        return Err(Error::OrderTooLow {
            got: hj.order(),
            need: order - 3,
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    // p has entries p_0..p_{order-1}.
    let mut p = vec![zero; order];
    p[0] = Complex64::new(1.0, 0.0);
    p[1] = a2 * 2.0;
    for k in 0..=order - 3 {
        let mut rhs = zero;
        // 3 Σ_{i+j=k} (i+1)(j+1) p_{i+1} p_{j+1}
        for i in 0..=k {
            let j = k - i;
            rhs += p[i + 1] * p[j + 1] * (3.0 * ((i + 1) * (j + 1)) as f64);
        }
        // 2 Σ_{i+j+l=k} h_i p_j p_l
        for i in 0..=k {
            for j in 0..=k - i {
                let l = k - i - j;
                rhs += hj.coeff(i) * p[j] * p[l] * 2.0;
            }
        }
        // - 2 Σ_{i≥1, i+j=k} p_i (j+1)(j+2) p_{j+2}
        for i in 1..=k {
            let j = k - i;
            rhs -= p[i] * p[j + 2] * (2.0 * ((j + 1) * (j + 2)) as f64);
        }
        p[k + 2] = rhs / (2.0 * ((k + 1) * (k + 2)) as f64);
    }
    let mut coeffs = vec![zero; order + 1];
    for (j, &pj) in p.iter().enumerate() {
        coeffs[j + 1] = pj / (j + 1) as f64;
    }
    Ok(Jet::new(hj.basepoint(), coeffs))
}

/// Result of [`solution_ambiguity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityFit {
    pub map: MoebiusMap,
    pub residual: f64,
}

/// Recovers the Möbius map `ρ` with `w2 = ρ ∘ w1`, given two solutions of the
/// same Schwarzian equation.
pub fn solution_ambiguity(w1: &Jet, w2: &Jet, tol: f64) -> Result<AmbiguityFit> {
    let gap = schwarzian(w1)?.max_abs_diff(&schwarzian(w2)?);
    if gap > tol {
        return Err(Error::NotCoschwarzian(gap));
    }
    let rho_jet = w2.compose(&w1.comp_inverse()?)?;
    let (map, residual) = MoebiusMap::fit_jet(&rho_jet)?;
    if residual > tol {
        return Err(Error::FitFailed(residual));
    }
    Ok(AmbiguityFit { map, residual })
}
