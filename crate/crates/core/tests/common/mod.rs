#![allow(dead_code)]

use projconn::{Complex64, IsotropyElement, Jet, MoebiusMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform sample from the closed unit disc.
pub fn unit_disc(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        if z.norm() <= 1.0 {
            return z;
        }
    }
}

/// Sample with modulus in `[lo, hi]` and uniform argument.
pub fn annulus(rng: &mut impl Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(
        rng.gen_range(lo..=hi),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

/// Jet with unit-disc coefficients and linear coefficient of modulus in [0.5, 1].
pub fn invertible_jet(
    rng: &mut impl Rng,
    basepoint: Complex64,
    value: Complex64,
    order: usize,
) -> Jet {
    let mut coeffs: Vec<Complex64> = (0..=order).map(|_| unit_disc(rng)).collect();
    coeffs[0] = value;
    if order >= 1 {
        coeffs[1] = annulus(rng, 0.5, 1.0);
    }
    Jet::new(basepoint, coeffs)
}

/// Möbius map with unit-disc entries, rejecting nearly degenerate draws and
/// draws whose pole lies within distance 1 of `basepoint`.
pub fn moebius_regular_at(rng: &mut impl Rng, basepoint: Complex64) -> MoebiusMap {
    loop {
        let (a, b, cc, d) = (
            unit_disc(rng),
            unit_disc(rng),
            unit_disc(rng),
            unit_disc(rng),
        );
        let det = a * d - b * cc;
        if det.norm() < 0.1 {
            continue;
        }
        if (cc * basepoint + d).norm() < cc.norm() {
            continue;
        }
        return MoebiusMap::new(a, b, cc, d).unwrap();
    }
}

pub fn isotropy(rng: &mut impl Rng) -> IsotropyElement {
    let alpha = annulus(rng, 0.7, 1.4);
    IsotropyElement::new(alpha, unit_disc(rng), alpha.inv()).unwrap()
}
