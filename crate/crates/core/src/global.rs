//! Global layer over ℚ with trivial central and inducing characters: the
//! completed zeta function, global eigenvalues, Laplacian eigenvalues, the
//! Maass–Selberg evaluator, heights and Sobolev weight sums.

use crate::arch::{mu_arch, ArchParams, Place};
use crate::error::{Error, Result};
use crate::exact::Q;
use crate::numerics::{gamma_factor, gauss_legendre, GammaFactorKind};
use crate::padic::{is_prime, mu_finite, valuation, FiniteParams};
use num_complex::Complex64 as C64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Dirichlet eta function for Re s > 0, by the Cohen–Villegas–Zagier
/// acceleration of the alternating series.
pub fn eta(s: C64) -> C64 {
    let terms = ((PI * s.im.abs() / 2.0 + 40.0) / (3.0 + 8f64.sqrt()).ln()).ceil().min(220.0) as usize;
    let n = terms as f64;
    let mut d = (3.0 + 8f64.sqrt()).powf(n);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..terms {
        let kf = k as f64;
        c = b - c;
        sum += c * (-s * (kf + 1.0).ln()).exp();
        b = (kf + n) * (kf - n) * b / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

fn zeta_right(s: C64) -> C64 {
    let den = 1.0 - (C64::new(2f64.ln(), 0.0) * (1.0 - s)).exp();
    if den.norm() < 1e-3 {
        // removable 0/0 at 1 + 2πik/log 2: mean value over a small circle
        let m = 24;
        let r = 0.02;
        return (0..m)
            .map(|j| zeta_right(s + C64::from_polar(r, 2.0 * PI * j as f64 / m as f64)))
            .sum::<C64>()
            / m as f64;
    }
    eta(s) / den
}

/// Riemann zeta for Re s > 0, s ≠ 1.
pub fn zeta(s: C64) -> Result<C64> {
    if s.re <= 0.0 {
        return Err(Error::Range("zeta series needs Re s > 0".into()));
    }
    if (s - 1.0).norm() < 1e-14 {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    Ok(zeta_right(s))
}

/// Γ_ℝ(z)ζ(z) from the series, without the functional equation; Re z > 0.
pub fn completed_zeta_direct(z: C64) -> Result<C64> {
    Ok(gamma_factor(GammaFactorKind::Real, z)? * zeta(z)?)
}

/// Λ(z) = Γ_ℝ(z)ζ(z), reflected through z ↦ 1 − z on the left half.
pub fn completed_zeta(z: C64) -> Result<C64> {
    if z.norm() < 1e-14 || (z - 1.0).norm() < 1e-14 {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re < 0.5 {
        completed_zeta_direct(1.0 - z)
    } else {
        completed_zeta_direct(z)
    }
}

/// Λ′(z) by the Cauchy integral on a small circle.
pub fn completed_zeta_derivative(z: C64) -> Result<C64> {
    let r = 0.05f64.min(0.5 * z.norm()).min(0.5 * (z - 1.0).norm());
    let m = 32;
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..m {
        let e = C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
        acc += completed_zeta(z + r * e)? / e;
    }
    Ok(acc / (m as f64 * r))
}

/// Λ′/Λ, reported on grids but not bounded against anything.
pub fn completed_zeta_log_derivative(z: C64) -> Result<C64> {
    Ok(completed_zeta_derivative(z)? / completed_zeta(z)?)
}

/// μ_F(s) = Λ(1−2s)/Λ(1+2s).
pub fn mu_field(s: C64) -> Result<C64> {
    if s.norm() < 1e-3 {
        // both poles of Λ meet at s = 0; μ_F is regular there
        return circle_mean(s, 0.01, mu_field_raw);
    }
    mu_field_raw(s)
}

fn mu_field_raw(s: C64) -> Result<C64> {
    Ok(completed_zeta(1.0 - 2.0 * s)? / completed_zeta(1.0 + 2.0 * s)?)
}

fn circle_mean<F: Fn(C64) -> Result<C64>>(s: C64, r: f64, f: F) -> Result<C64> {
    let m = 24;
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..m {
        acc += f(s + C64::from_polar(r, 2.0 * PI * j as f64 / m as f64))?;
    }
    Ok(acc / m as f64)
}

/// μ_F′/μ_F = −2Λ′/Λ(1−2s) − 2Λ′/Λ(1+2s).
pub fn mu_field_log_derivative(s: C64) -> Result<C64> {
    if s.norm() < 0.05 {
        let r = 0.1;
        let m = 32;
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..m {
            let e = C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
            acc += mu_field_raw(s + r * e)? / e;
        }
        return Ok(acc / (m as f64 * r) / mu_field(s)?);
    }
    Ok(-2.0 * completed_zeta_log_derivative(1.0 - 2.0 * s)? - 2.0 * completed_zeta_log_derivative(1.0 + 2.0 * s)?)
}

/// K-type at every place of ℚ: the real place and finitely many primes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GlobalKType {
    pub n_inf: i64,
    pub finite: BTreeMap<u64, u32>,
}

impl GlobalKType {
    pub fn new(n_inf: i64, finite: BTreeMap<u64, u32>) -> Result<Self> {
        if n_inf % 2 != 0 {
            return Err(Error::Parity(format!("real-place type {n_inf} must be even for trivial data")));
        }
        if let Some(p) = finite.keys().find(|p| !is_prime(**p)) {
            return Err(Error::Range(format!("{p} is not prime")));
        }
        Ok(GlobalKType { n_inf, finite })
    }
}

/// s = iy with μ(ω⁻¹ξ²) = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalSpectralPoint {
    pub y: f64,
}

impl GlobalSpectralPoint {
    pub fn s(&self) -> C64 {
        C64::new(0.0, self.y)
    }
}

/// μ_F times the real-place and finite-place eigenvalues.
pub fn mu_global_at(s: C64, ktype: &GlobalKType) -> Result<C64> {
    let mut mu = mu_field(s)?;
    let arch = ArchParams::new(Place::RealPlace, 0.0, 0, s)?;
    mu *= mu_arch(&arch, ktype.n_inf)?.value;
    for (&p, &n) in &ktype.finite {
        mu *= mu_finite(&FiniteParams::unramified(p, s, 0.0, 0)?, n)?;
    }
    Ok(mu)
}

pub fn mu_global(point: &GlobalSpectralPoint, ktype: &GlobalKType) -> Result<C64> {
    mu_global_at(point.s(), ktype)
}

/// Eigenvalue of −𝒞 − 2𝒞_K on the type-n subspace at s = iy.
pub fn laplace_eigenvalue(place: Place, y: f64, mu: f64, n: i64, n0: i64) -> f64 {
    let base = (1.0 + (2.0 * y + mu).powi(2)) / 4.0;
    match place {
        Place::ComplexPlace => base + (2.0 * n as f64 * (n as f64 + 2.0) - (n0 * n0) as f64) / 4.0,
        Place::RealPlace => base + (n * n) as f64 / 2.0,
    }
}

/// ‖Λᶜ E(s; f)‖² from the two-term formula; Re s ≠ 0.
#[allow(clippy::too_many_arguments)]
pub fn maass_selberg(s: C64, c: f64, normf: f64, norm_mf: f64, pairing: C64, mu_char: f64, is_selfdual: bool) -> Result<f64> {
    if s.re == 0.0 {
        return Err(Error::Invalid("use maass_selberg_onaxis on Re s = 0".into()));
    }
    if c <= 1.0 {
        return Err(Error::Range(format!("truncation parameter {c} must exceed 1")));
    }
    let sig = s.re;
    let mut v = (normf * normf * c.powf(2.0 * sig) - norm_mf * norm_mf * c.powf(-2.0 * sig)) / (2.0 * sig);
    if is_selfdual {
        let t = 2.0 * s.im + mu_char;
        if t == 0.0 {
            return Err(Error::DivisionByZero);
        }
        v += 2.0 * (pairing * C64::new(0.0, t * c.ln()).exp()).im / t;
    }
    Ok(v)
}

/// The Re s → 0 form for a unitary scalar model ℳe = μ(iy)e with ‖e‖ = 1:
/// 2 log c − μ′/μ + (1/y)·Im(c^{2iy}·conj μ), the last term only when selfdual.
/// At y = 0 the selfdual term is replaced by its limit, which needs μ(0) real.
pub fn maass_selberg_onaxis(y: f64, c: f64, mu_value: C64, mu_prime: C64, is_selfdual: bool) -> Result<f64> {
    if c <= 1.0 {
        return Err(Error::Range(format!("truncation parameter {c} must exceed 1")));
    }
    if (mu_value.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::Invalid("on-axis form needs |μ| = 1".into()));
    }
    let lc = c.ln();
    let mut v = 2.0 * lc - (mu_prime / mu_value).re;
    if is_selfdual {
        if y.abs() > 1e-9 {
            v += (C64::new(0.0, 2.0 * y * lc).exp() * mu_value.conj()).im / y;
        } else {
            if mu_value.im.abs() > 1e-8 {
                return Err(Error::DivisionByZero);
            }
            // d/dy Im(c^{2iy} conj μ(iy)) at y = 0
            v += 2.0 * lc * mu_value.re - mu_prime.re;
        }
    }
    Ok(v)
}

/// min(2 log c, 1/|y|) + min(M, 1/|y|): the bound on the selfdual term when
/// μ(0) = −1 and M ≥ max|μ′| on [0, iy].
pub fn selfdual_term_bound(y: f64, c: f64, max_mu_prime: f64) -> f64 {
    let inv = if y == 0.0 { f64::INFINITY } else { 1.0 / y.abs() };
    (2.0 * c.ln()).min(inv) + max_mu_prime.min(inv)
}

/// Richardson extrapolation of σ ↦ f(σ) to σ = 0 from σ, σ/10, σ/100.
pub fn richardson_to_zero<F: Fn(f64) -> Result<f64>>(f: F, sigma: f64) -> Result<f64> {
    let a = f(sigma)?;
    let b = f(sigma / 10.0)?;
    let c = f(sigma / 100.0)?;
    let r1 = (10.0 * b - a) / 9.0;
    let r2 = (10.0 * c - b) / 9.0;
    Ok((100.0 * r2 - r1) / 99.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LocalElement {
    Real(f64),
    Complex(C64),
    PAdic { p: u64, num: i128, den: i128 },
}

/// |a/b|_p.
fn padic_abs(p: u64, x: Q) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let v = valuation(p, *x.numer()) as i32 - valuation(p, *x.denom()) as i32;
    (p as f64).powi(-v)
}

/// Ht(w·n(x)) = |t₁/t₂|_v from an Iwasawa decomposition w·n(x) = b·κ.
pub fn height_wn(x: &LocalElement) -> Result<f64> {
    match *x {
        LocalElement::Real(r) => Ok(iwasawa_height(C64::new(r, 0.0), 1)),
        LocalElement::Complex(z) => Ok(iwasawa_height(z, 2)),
        LocalElement::PAdic { p, num, den } => {
            if den == 0 || !is_prime(p) {
                return Err(Error::Invalid("bad p-adic element".into()));
            }
            let x = Q::new(num, den);
            if padic_abs(p, x) <= 1.0 {
                // w·n(x) already lies in GL₂(ℤ_p)
                return Ok(1.0);
            }
            // [[0,−1],[1,x]] = [[1/x, −1],[0, x]]·[[1,0],[1/x,1]]
            let xi = x.recip();
            let one = Q::from_integer(1);
            let b = [[xi, -one], [Q::zero(), x]];
            let k = [[one, Q::zero()], [xi, one]];
            let rebuilt: [[Q; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| b[i][0] * k[0][j] + b[i][1] * k[1][j]));
            if rebuilt != [[Q::zero(), -Q::from_integer(1)], [Q::from_integer(1), x]] {
                return Err(Error::Invalid("Iwasawa factorization failed".into()));
            }
            Ok(padic_abs(p, xi) / padic_abs(p, x))
        }
    }
}

/// Gram–Schmidt on the rows of [[0,−1],[1,x]] against O(2) or U(2); the
/// local absolute value is |·|^deg.
fn iwasawa_height(x: C64, deg: i32) -> f64 {
    let g = [[C64::new(0.0, 0.0), C64::new(-1.0, 0.0)], [C64::new(1.0, 0.0), x]];
    let r = (g[1][0].norm_sqr() + g[1][1].norm_sqr()).sqrt();
    let bottom = [g[1][0] / r, g[1][1] / r];
    let top = [bottom[1].conj(), -bottom[0].conj()];
    // b = g·κ*, with κ rows (top, bottom)
    let dot = |row: [C64; 2], k: [C64; 2]| row[0] * k[0].conj() + row[1] * k[1].conj();
    let t1 = dot(g[0], top);
    let t2 = dot(g[1], bottom);
    (t1 / t2).norm().powi(deg)
}

/// 1/(1+x²) at ℝ, 1/(1+|x|²)² at ℂ, max(1,|x|_p)^{−2} at p.
pub fn height_wn_closed(x: &LocalElement) -> f64 {
    match *x {
        LocalElement::Real(r) => 1.0 / (1.0 + r * r),
        LocalElement::Complex(z) => (1.0 + z.norm_sqr()).powi(-2),
        LocalElement::PAdic { p, num, den } => padic_abs(p, Q::new(num, den)).max(1.0).powi(-2),
    }
}

pub fn height_bound_check(x: &LocalElement) -> Result<bool> {
    Ok(height_wn(x)? <= 1.0 + 1e-12)
}

/// Residue of Λ at z = 1 from (z−1)Λ(z), extrapolated to z = 1 by Neville's
/// scheme on both sides of the pole.
pub fn residue_at_one() -> Result<f64> {
    let hs: Vec<f64> = [0.2, 0.1, 0.05, 0.025].iter().flat_map(|h| [*h, -*h]).collect();
    let vals: Vec<f64> = hs.iter().map(|h| Ok((*h * completed_zeta(C64::new(1.0 + h, 0.0))?).re)).collect::<Result<_>>()?;
    Ok(neville_at_zero(&hs, &vals))
}

/// Residue at z = 0, computed the same way from zΛ(z).
pub fn residue_at_zero() -> Result<f64> {
    let hs: Vec<f64> = [0.2, 0.1, 0.05, 0.025].iter().flat_map(|h| [*h, -*h]).collect();
    let vals: Vec<f64> = hs.iter().map(|h| Ok((*h * completed_zeta(C64::new(*h, 0.0))?).re)).collect::<Result<_>>()?;
    Ok(neville_at_zero(&hs, &vals))
}

fn neville_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = x.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i]);
        }
    }
    p[0]
}

/// −Λ*(0)/(2Λ(2)) with Λ*(0) read as the residue of Λ at 0.
pub fn residue_constant() -> Result<f64> {
    let lambda2 = completed_zeta(C64::new(2.0, 0.0))?.re;
    Ok(-residue_at_zero()? / (2.0 * lambda2))
}

/// Σ_n ∫₀^{y_max} (1 + λ(iy; n))^{2−2A} dy over even types |n| ≤ n_max
/// (real place) or even 0 ≤ n ≤ n_max (complex place, n₀ = 0).
pub fn sobolev_weight_sum(a: u32, y_max: f64, n_max: u32, place: Place) -> Result<f64> {
    if a < 2 {
        return Err(Error::Range("A must be at least 2".into()));
    }
    let (nodes, weights) = gauss_legendre(16);
    let panels = y_max.ceil().max(1.0) as usize;
    let h = y_max / panels as f64;
    let ns: Vec<i64> = match place {
        Place::RealPlace => (-(n_max as i64)..=n_max as i64).filter(|n| n % 2 == 0).collect(),
        Place::ComplexPlace => (0..=n_max as i64).filter(|n| n % 2 == 0).collect(),
    };
    let expo = 2.0 - 2.0 * a as f64;
    let mut total = 0.0;
    for n in ns {
        let mut integral = 0.0;
        for k in 0..panels {
            let y0 = k as f64 * h;
            for (x, w) in nodes.iter().zip(&weights) {
                let y = y0 + h * (x + 1.0) / 2.0;
                integral += w * h / 2.0 * (1.0 + laplace_eigenvalue(place, y, 0.0, n, 0)).powf(expo);
            }
        }
        total += integral;
    }
    Ok(total)
}

/// The n-th term of the weight sum at fixed y.
pub fn sobolev_weight_term(a: u32, y: f64, n: i64, place: Place) -> f64 {
    (1.0 + laplace_eigenvalue(place, y, 0.0, n, 0)).powf(2.0 - 2.0 * a as f64)
}
