//! Symmetric bidifferentials with a double pole on the diagonal.
//!
//! A [`BidiffGerm`] at the diagonal point `(u₀, u₀)` is
//!
//! ```text
//! B(z, w) = 1/(z - w)^2 + Σ W_jk (z - u₀)^j (w - u₀)^k
//! ```
//!
//! The regular part is truncated at total degree `N = order`: entries with
//! `j + k > N` are not part of the germ and are stored as zero. The pole term
//! is kept implicit, so `B·(z - w)^2 = 1 + (z - w)^2 W` and the 2Δ-level data
//! is canonical by construction; the 3Δ-level data is `W(u, u)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{compose_coeffs, mul_coeffs, Jet, DIVIDE_FLOOR, RECENTER_TOL};
use crate::schwarzian::QuadDiffGerm;

/// Default total-degree truncation of the regular part.
pub const DEFAULT_BIDIFF_ORDER: usize = 6;

/// Relative tolerance for `W_jk = W_kj`.
pub const SYMMETRY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGerm")]
pub struct BidiffGerm {
    basepoint: Complex64,
    #[serde(rename = "W")]
    w: Vec<Vec<Complex64>>,
}

#[derive(Deserialize)]
struct RawGerm {
    basepoint: Complex64,
    #[serde(rename = "W")]
    w: Vec<Vec<Complex64>>,
}

impl TryFrom<RawGerm> for BidiffGerm {
    type Error = String;

    fn try_from(raw: RawGerm) -> std::result::Result<Self, String> {
        let n = raw.w.len();
        if n == 0 || raw.w.iter().any(|row| row.len() != n) {
            return Err("W must be a non-empty square array".into());
        }
        Ok(BidiffGerm::new(raw.basepoint, raw.w))
    }
}

/// Projective-connection coefficient in the chart, Schwarzian-normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjConnGerm {
    pub p: Jet,
}

/// Outcome of [`canonical_2delta_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalReport {
    pub pass: bool,
    /// `max |W_jk - W_kj|`.
    pub symmetry_defect: f64,
    /// Largest deviation of `B·(z-w)^2` from `1 + 0·(z-w)` along the diagonal.
    pub normal_defect: f64,
    pub max_defect: f64,
}

impl BidiffGerm {
    /// Panics if `w` is not a non-empty square array.
    pub fn new(basepoint: Complex64, mut w: Vec<Vec<Complex64>>) -> Self {
        let n = w.len();
        assert!(
            n > 0 && w.iter().all(|row| row.len() == n),
            "W must be square"
        );
        for (j, row) in w.iter_mut().enumerate() {
            for (k, x) in row.iter_mut().enumerate() {
                if j + k >= n {
                    *x = ZERO;
                }
            }
        }
        BidiffGerm { basepoint, w }
    }

    pub fn from_fn(
        basepoint: Complex64,
        order: usize,
        mut entry: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let w = (0..=order)
            .map(|j| (0..=order).map(|k| entry(j, k)).collect())
            .collect();
        BidiffGerm::new(basepoint, w)
    }

    /// Germ whose regular part is `R(z - w)` for a series `R(t) = Σ r_m t^m`.
    pub fn from_difference_kernel(basepoint: Complex64, r: &[Complex64]) -> Self {
        let order = r.len() - 1;
        BidiffGerm::from_fn(basepoint, order, |j, k| {
            if j + k > order {
                return ZERO;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            r[j + k] * binomial(j + k, j) * sign
        })
    }

    pub fn basepoint(&self) -> Complex64 {
        self.basepoint
    }

    pub fn order(&self) -> usize {
        self.w.len() - 1
    }

    pub fn w(&self) -> &[Vec<Complex64>] {
        &self.w
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.w
            .get(j)
            .and_then(|row| row.get(k))
            .copied()
            .unwrap_or_default()
    }

    /// Returns a copy with one regular coefficient replaced.
    pub fn with_entry(&self, j: usize, k: usize, value: Complex64) -> Self {
        let mut g = self.clone();
        g.w[j][k] = value;
        BidiffGerm::new(g.basepoint, g.w)
    }

    /// Restriction of the regular part to the diagonal, `W(u, u)`.
    pub fn diagonal(&self) -> Jet {
        Jet::new(self.basepoint, Bivariate::from_rows(&self.w).diagonal())
    }

    pub fn max_abs(&self) -> f64 {
        self.w
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    pub fn symmetry_defect(&self) -> f64 {
        let n = self.w.len();
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in 0..j {
                worst = worst.max((self.w[j][k] - self.w[k][j]).norm());
            }
        }
        worst
    }

    /// Largest coefficient gap over the common total degree.
    pub fn max_abs_diff(&self, other: &BidiffGerm) -> f64 {
        let n = self.order().min(other.order());
        let mut worst = 0.0f64;
        for j in 0..=n {
            for k in 0..=n - j {
                worst = worst.max((self.w[j][k] - other.w[j][k]).norm());
            }
        }
        worst
    }
}

/// The germ `dz₁ dz₂ / (z₁ - z₂)^2` of the flat structure.
pub fn flat(basepoint: Complex64, order: usize) -> BidiffGerm {
    BidiffGerm::from_fn(basepoint, order, |_, _| ZERO)
}

/// `(f, f)^* B`, i.e. `B(f(z), f(w)) f'(z) f'(w)`, re-expanded as pole plus
/// regular part at `f`'s basepoint.
///
/// The pole is split off in closed form: writing `f(z) - f(w) = (z - w) g(z, w)`
/// with `g_ij = c_{i+j+1}`, the extra regular term is
/// `(f'(z)f'(w) - g^2) / ((z - w)^2 g^2)`. The result has order
/// `min(B.order, f.order - 3)`.
pub fn pullback(b: &BidiffGerm, f: &Jet) -> Result<BidiffGerm> {
    if f.order() < 3 {
        return Err(Error::OrderTooLow {
            got: f.order(),
            need: 3,
        });
    }
    let gap = (f.value() - b.basepoint).norm();
    if gap > RECENTER_TOL {
        return Err(Error::BasepointMismatch(format!(
            "f takes the value {} but the germ sits at {}",
            f.value(),
            b.basepoint
        )));
    }
    let c = f.coeffs();
    if c[1].norm() <= DIVIDE_FLOOR {
        return Err(Error::NotInvertible(format!(
            "linear coefficient {} below floor",
            c[1]
        )));
    }
    let n = b.order().min(f.order() - 3);
    let deg = n + 2;

    let df: Vec<Complex64> = (0..=deg).map(|i| c[i + 1] * (i + 1) as f64).collect();
    let mut g = Bivariate::zero(deg);
    for i in 0..=deg {
        for j in 0..=deg - i {
            g.c[i][j] = c[i + j + 1];
        }
    }
    let dfdf = Bivariate::outer(&df, &df, deg);
    let g2 = g.mul(&g);
    let numer = dfdf.sub(&g2);
    let pole = numer
        .div_by_difference()
        .div_by_difference()
        .mul(&g2.truncate(n).recip()?);

    // Regular part transported by f.
    let mut phi = c[..=n].to_vec();
    phi[0] -= b.basepoint;
    let df_n = &df[..=n];
    let mut powers = Vec::with_capacity(n + 1);
    let mut acc = vec![ZERO; n + 1];
    acc[0] = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        powers.push(acc.clone());
        acc = mul_coeffs(&acc, &phi, n);
    }
    let mut transported = Bivariate::zero(n);
    for (j, pj) in powers.iter().enumerate() {
        let row: Vec<Complex64> = (0..=n).map(|k| b.entry(j, k)).collect();
        if row.iter().all(|x| *x == ZERO) {
            continue;
        }
        let aj = compose_coeffs(&row, &phi, n);
        transported = transported.add(&Bivariate::outer(pj, &aj, n));
    }
    let transported = transported.mul(&Bivariate::outer(df_n, df_n, n));

    let total = transported.add(&pole);
    Ok(BidiffGerm::new(f.basepoint(), total.into_rows()))
}

/// Checks that `B` is σ-symmetric and that `B·(z-w)^2 = 1 + 0·(z-w) + O((z-w)^2)`
/// along the diagonal.
pub fn canonical_2delta_check(b: &BidiffGerm) -> CanonicalReport {
    let symmetry_defect = b.symmetry_defect();
    let n = b.order();
    // T = 1 + (s - t)^2 W, total degree n + 2.
    let mut diff_sq = Bivariate::zero(n + 2);
    diff_sq.c[2][0] = Complex64::new(1.0, 0.0);
    diff_sq.c[1][1] = Complex64::new(-2.0, 0.0);
    diff_sq.c[0][2] = Complex64::new(1.0, 0.0);
    let mut t = diff_sq.mul(&Bivariate::from_rows(&b.w).extend(n + 2));
    t.c[0][0] += Complex64::new(1.0, 0.0);

    // With s = u + v/2, t = u - v/2: the v^0 part must be 1 and the v^1 part 0.
    let mut normal_defect = 0.0f64;
    for (m, d) in t.diagonal().iter().enumerate() {
        let want = if m == 0 { 1.0 } else { 0.0 };
        normal_defect = normal_defect.max((d - want).norm());
    }
    for m in 0..=n + 1 {
        let mut first = ZERO;
        for i in 0..=m + 1 {
            let j = m + 1 - i;
            first += t.get(i, j) * ((i as f64 - j as f64) / 2.0);
        }
        normal_defect = normal_defect.max(first.norm());
    }
    let scale = b.max_abs().max(1.0);
    let pass = symmetry_defect <= SYMMETRY_TOL * scale && normal_defect <= SYMMETRY_TOL * scale;
    CanonicalReport {
        pass,
        symmetry_defect,
        normal_defect,
        max_defect: symmetry_defect.max(normal_defect),
    }
}

/// The projective connection `p(u) = 6 W(u, u)` carried by the 3Δ-level data.
pub fn proj_connection(b: &BidiffGerm) -> Result<ProjConnGerm> {
    let report = canonical_2delta_check(b);
    if !report.pass {
        return Err(Error::NotCanonical(report.max_defect));
    }
    Ok(ProjConnGerm {
        p: b.diagonal().scale(Complex64::new(6.0, 0.0)),
    })
}

/// Adds the quadratic differential `γ` at the 3Δ level, extended off the
/// diagonal as `h((z + w)/2) / 6`.
pub fn shift_trivialisation(b: &BidiffGerm, gamma: &QuadDiffGerm) -> Result<BidiffGerm> {
    let h = &gamma.h;
    if h.basepoint() != b.basepoint {
        return Err(Error::BasepointMismatch(format!(
            "quadratic differential at {} but germ at {}",
            h.basepoint(),
            b.basepoint
        )));
    }
    let n = b.order().min(h.order());
    Ok(BidiffGerm::from_fn(b.basepoint, n, |j, k| {
        if j + k > n {
            return ZERO;
        }
        let m = j + k;
        b.entry(j, k) + h.coeff(m) * binomial(m, j) / (6.0 * 2f64.powi(m as i32))
    }))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Two-variable series truncated at total degree `n`.
#[derive(Debug, Clone)]
struct Bivariate {
    n: usize,
    c: Vec<Vec<Complex64>>,
}

impl Bivariate {
    fn zero(n: usize) -> Self {
        Bivariate {
            n,
            c: vec![vec![ZERO; n + 1]; n + 1],
        }
    }

    fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len() - 1;
        let mut b = Bivariate::zero(n);
        for i in 0..=n {
            for j in 0..=n - i {
                b.c[i][j] = rows[i][j];
            }
        }
        b
    }

    fn into_rows(self) -> Vec<Vec<Complex64>> {
        self.c
    }

    fn get(&self, i: usize, j: usize) -> Complex64 {
        if i + j > self.n {
            ZERO
        } else {
            self.c[i][j]
        }
    }

    /// Same series viewed at a higher truncation (the new terms are exact zeros
    /// only when the caller knows the series is a polynomial of lower degree).
    fn extend(&self, n: usize) -> Self {
        let mut b = Bivariate::zero(n);
        for i in 0..=self.n.min(n) {
            for j in 0..=(self.n - i).min(n - i) {
                b.c[i][j] = self.c[i][j];
            }
        }
        b
    }

    fn truncate(&self, n: usize) -> Self {
        self.extend(n.min(self.n))
    }

    /// `a(s) b(t)`.
    fn outer(a: &[Complex64], b: &[Complex64], n: usize) -> Self {
        let mut out = Bivariate::zero(n);
        for i in 0..=n.min(a.len() - 1) {
            for j in 0..=(n - i).min(b.len() - 1) {
                out.c[i][j] = a[i] * b[j];
            }
        }
        out
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.n.min(other.n);
        let mut out = Bivariate::zero(n);
        for i in 0..=n {
            for j in 0..=n - i {
                out.c[i][j] = self.c[i][j] + other.c[i][j];
            }
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.n.min(other.n);
        let mut out = Bivariate::zero(n);
        for i in 0..=n {
            for j in 0..=n - i {
                out.c[i][j] = self.c[i][j] - other.c[i][j];
            }
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n.min(other.n);
        let mut out = Bivariate::zero(n);
        for i1 in 0..=n {
            for j1 in 0..=n - i1 {
                let x = self.c[i1][j1];
                if x == ZERO {
                    continue;
                }
                for i2 in 0..=n - i1 - j1 {
                    for j2 in 0..=n - i1 - j1 - i2 {
                        out.c[i1 + i2][j1 + j2] += x * other.c[i2][j2];
                    }
                }
            }
        }
        out
    }

    fn recip(&self) -> Result<Self> {
        let c0 = self.c[0][0];
        if c0.norm() <= DIVIDE_FLOOR {
            return Err(Error::DivisionByNonUnit(c0.norm()));
        }
        // 1/(c0 (1 + e)) = (1/c0) Σ (-e)^k, with e nilpotent of index n + 1.
        let inv0 = c0.inv();
        let mut minus_e = Bivariate::zero(self.n);
        for i in 0..=self.n {
            for j in 0..=self.n - i {
                minus_e.c[i][j] = -self.c[i][j] * inv0;
            }
        }
        minus_e.c[0][0] = ZERO;
        let mut sum = Bivariate::zero(self.n);
        sum.c[0][0] = Complex64::new(1.0, 0.0);
        let mut power = sum.clone();
        for _ in 0..self.n {
            power = power.mul(&minus_e);
            sum = sum.add(&power);
        }
        for row in sum.c.iter_mut() {
            for x in row.iter_mut() {
                *x *= inv0;
            }
        }
        Ok(sum)
    }

    /// Exact quotient by `(s - t)` of a series vanishing on the diagonal;
    /// the truncation degree drops by one.
    fn div_by_difference(&self) -> Self {
        assert!(self.n >= 1);
        let mut q = Bivariate::zero(self.n - 1);
        // P_ij = Q_{i-1,j} - Q_{i,j-1}, solved along each anti-diagonal.
        for d in 1..=self.n {
            let mut carry = ZERO;
            for i in (1..=d).rev() {
                let j = d - i;
                let v = self.c[i][j] + carry;
                q.c[i - 1][j] = v;
                carry = v;
            }
        }
        q
    }

    fn diagonal(&self) -> Vec<Complex64> {
        (0..=self.n)
            .map(|m| (0..=m).map(|i| self.c[i][m - i]).sum())
            .collect()
    }
}
