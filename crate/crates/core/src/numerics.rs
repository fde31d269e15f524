//! Gamma factors, the Bessel-K integral, and doubly exponential quadrature.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaFactorKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: u32,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: u32) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::Invalid("tolerances must be positive".into()));
        }
        Ok(QuadratureSpec { abs_tol, rel_tol, max_subdivisions })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-15, rel_tol: 1e-14, max_subdivisions: 12 }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// log Γ(z) for Re z ≥ 1/2 (principal branch is not guaranteed; only exp of it is used).
fn ln_gamma_right(z: C64) -> C64 {
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Complex Gamma function.
pub fn gamma(z: C64) -> Result<C64> {
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re < 0.5 {
        // reflection
        let s = (PI * z).sin();
        Ok(PI / (s * ln_gamma_right(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// Γ_ℝ(s) = π^{-s/2}Γ(s/2) and Γ_ℂ(s) = 2(2π)^{-s}Γ(s).
pub fn gamma_factor(kind: GammaFactorKind, s: C64) -> Result<C64> {
    match kind {
        GammaFactorKind::Real => Ok((-s / 2.0 * PI.ln()).exp() * gamma(s / 2.0)?),
        GammaFactorKind::Complex => Ok(2.0 * (-s * (2.0 * PI).ln()).exp() * gamma(s)?),
    }
}

/// ψ(z) = Γ'/Γ via recurrence and the asymptotic series.
pub fn digamma(z: C64) -> Result<C64> {
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re < 0.5 {
        return Ok(digamma(1.0 - z)? - PI / (PI * z).tan());
    }
    let mut z = z;
    let mut acc = C64::new(0.0, 0.0);
    while z.norm() < 20.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // Bernoulli terms B_{2k}/(2k)
    let b = [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0];
    let mut series = C64::new(0.0, 0.0);
    let mut p = inv2;
    for c in b {
        series += c * p;
        p *= inv2;
    }
    Ok(acc + z.ln() - 0.5 * inv - series)
}

/// ∫_ℝ g(u) du for g with at least exponential decay in both directions.
///
/// The substitution u = sinh(v) makes both tails doubly exponential and the
/// trapezoid rule in v is refined by halving until the tolerances are met.
pub fn quad_line<F: Fn(f64) -> C64>(g: F, u_max: f64, spec: &QuadratureSpec) -> Result<C64> {
    let v_max = u_max.asinh();
    let term = |v: f64| -> C64 { g(v.sinh()) * v.cosh() };
    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1;
    while k as f64 * h <= v_max {
        let v = k as f64 * h;
        sum += term(v) + term(-v);
        k += 1;
    }
    if !(sum.re.is_finite() && sum.im.is_finite()) {
        return Err(Error::ToleranceNotMet { estimate: f64::NAN, change: f64::NAN });
    }
    let mut est = sum * h;
    let mut change = f64::INFINITY;
    for _ in 0..spec.max_subdivisions {
        h /= 2.0;
        // new points are odd multiples of h
        let mut k = 1;
        while k as f64 * h <= v_max {
            let v = k as f64 * h;
            sum += term(v) + term(-v);
            k += 2;
        }
        let next = sum * h;
        if !(next.re.is_finite() && next.im.is_finite()) {
            return Err(Error::ToleranceNotMet { estimate: f64::NAN, change: f64::NAN });
        }
        change = (next - est).norm();
        est = next;
        if change <= spec.abs_tol.max(spec.rel_tol * est.norm()) {
            return Ok(est);
        }
    }
    Err(Error::ToleranceNotMet { estimate: est.norm(), change })
}

/// ∫₀^∞ f(r) dr after r = e^u.
pub fn quad_halfline<F: Fn(f64) -> C64>(f: F, spec: &QuadratureSpec) -> Result<C64> {
    quad_line(
        |u| {
            let r = u.exp();
            let v = f(r) * r;
            if v.norm() == 0.0 || r == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                v
            }
        },
        100.0,
        spec,
    )
}

/// 𝒦_ν(y) = ½∫₀^∞ e^{-y(t+1/t)} t^ν dt/t.
pub fn bessel_k(nu: C64, y: f64) -> Result<C64> {
    bessel_k_with(nu, y, &QuadratureSpec::default())
}

pub fn bessel_k_with(nu: C64, y: f64, spec: &QuadratureSpec) -> Result<C64> {
    if !(y > 0.0) {
        return Err(Error::Invalid("bessel_k needs y > 0".into()));
    }
    let v = quad_line(|u| (-2.0 * y * u.cosh() + nu * u).exp(), 700.0, spec)?;
    Ok(0.5 * v)
}

/// The second representation ∫₀^∞ e^{-y(t²+t⁻²)} t^{2ν} dt/t.
pub fn bessel_k_squared_form(nu: C64, y: f64, spec: &QuadratureSpec) -> Result<C64> {
    if !(y > 0.0) {
        return Err(Error::Invalid("bessel_k needs y > 0".into()));
    }
    quad_line(|u| (-2.0 * y * (2.0 * u).cosh() + 2.0 * nu * u).exp(), 350.0, spec)
}

/// K_{ℂ,a}(w) = 4𝒦_w(a) and K_{ℝ,a}(w) = 2𝒦_{w/2}(a).
pub fn kernel_ka(kind: GammaFactorKind, a: f64, w: C64) -> Result<C64> {
    if !(1.0..2.0).contains(&a) {
        return Err(Error::Range(format!("a = {a} not in [1,2)")));
    }
    match kind {
        GammaFactorKind::Complex => Ok(4.0 * bessel_k(w, a)?),
        GammaFactorKind::Real => Ok(2.0 * bessel_k(w / 2.0, a)?),
    }
}

/// Direct radial integral defining K_{·,a}(w): 4∫e^{-a(r²+r⁻²)}r^{2w}dr/r or 2∫e^{-a(r²+r⁻²)}r^{w}dr/r.
pub fn kernel_ka_direct(kind: GammaFactorKind, a: f64, w: C64, spec: &QuadratureSpec) -> Result<C64> {
    let (scale, pow) = match kind {
        GammaFactorKind::Complex => (4.0, 2.0 * w),
        GammaFactorKind::Real => (2.0, w),
    };
    let v = quad_line(|u| (-a * ((2.0 * u).exp() + (-2.0 * u).exp()) + pow * u).exp(), 350.0, spec)?;
    Ok(scale * v)
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (z * p - p0) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Binomial coefficient as f64; zero outside 0 ≤ k ≤ n.
pub fn binom(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}
