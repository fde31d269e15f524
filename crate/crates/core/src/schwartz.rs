//! Polynomial-times-Gaussian Schwartz classes on ℂ² and ℂ with their exact
//! twisted Fourier transforms and the compact-group actions.

use crate::exact::{Coeff, GaussQ, PiQ, Poly, Q};
use crate::harmonics::{SU2Point, Z1, Z1B, Z2, Z2B};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// poly · e^{-2π(|z₁|²+|z₂|²)}, with poly in (z₁, z₂, z̄₁, z̄₂).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian4 {
    pub poly: Poly<4, PiQ>,
}

/// poly · e^{-π|z|²}, with poly in (z, z̄).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian2 {
    pub poly: Poly<2, PiQ>,
}

fn piq(re: Q, im: Q, pi_pow: i32) -> PiQ {
    PiQ::monomial(GaussQ::new(re, im), pi_pow)
}

fn conj_var4(v: usize) -> usize {
    match v {
        Z1 => Z1B,
        Z2 => Z2B,
        Z1B => Z1,
        _ => Z2,
    }
}

/// ∂_v(q·G) = (∂_v q − 2π·conj(v)·q)·G for G the ℂ² Gaussian.
fn d_gauss4(q: &Poly<4, PiQ>, v: usize) -> Poly<4, PiQ> {
    q.deriv(v).sub(&q.mul_var(conj_var4(v)).scale(&piq(Q::from_integer(2), Q::from_integer(0), 1)))
}

/// Fourier image of (monomial in variable v) · Φ as an operator on Φ̂:
/// z₁ → ∂₂/(2πi), z₂ → ∂₁/(−2πi), z̄₁ → ∂̄₂/(2πi), z̄₂ → ∂̄₁/(−2πi).
fn hat_mult4(q: &Poly<4, PiQ>, v: usize) -> Poly<4, PiQ> {
    // 1/(2πi) = −i/(2π)
    let plus = piq(Q::from_integer(0), Q::new(-1, 2), -1);
    let minus = piq(Q::from_integer(0), Q::new(1, 2), -1);
    match v {
        Z1 => d_gauss4(q, Z2).scale(&plus),
        Z2 => d_gauss4(q, Z1).scale(&minus),
        Z1B => d_gauss4(q, Z2B).scale(&plus),
        _ => d_gauss4(q, Z1B).scale(&minus),
    }
}

/// Φ̂ of z^e·P₀ where P₀ = e^{-2π(|z₁|²+|z₂|²)} (the transform fixes P₀).
pub fn hat_monomial4(e: [u32; 4]) -> Poly<4, PiQ> {
    let mut q = Poly::constant(PiQ::from_int(1));
    for v in 0..4 {
        for _ in 0..e[v] {
            q = hat_mult4(&q, v);
        }
    }
    q
}

impl PolyGaussian4 {
    pub fn new(poly: Poly<4, PiQ>) -> Self {
        PolyGaussian4 { poly }
    }

    /// P_{n⃗} = e^{-2π(|z₁|²+|z₂|²)} z₁^{n₁} z₂^{n₂} z̄₁^{n̄₁} z̄₂^{n̄₂}.
    pub fn basis(e: [u32; 4]) -> Self {
        PolyGaussian4 { poly: Poly::monomial(e, PiQ::from_int(1)) }
    }

    pub fn eval(&self, z1: C64, z2: C64) -> C64 {
        let g = (-2.0 * PI * (z1.norm_sqr() + z2.norm_sqr())).exp();
        self.poly.eval(&[z1, z2, z1.conj(), z2.conj()]) * g
    }
}

/// Φ̂(z) = ∫_{ℂ²} Φ(u) e^{-2πi(z₁u₂ − z₂u₁ + z̄₁ū₂ − z̄₂ū₁)} du₁du₂, exactly.
pub fn fourier_hat_h(phi: &PolyGaussian4) -> PolyGaussian4 {
    let mut out = Poly::zero();
    for (e, c) in &phi.poly.terms {
        out = out.add(&hat_monomial4(*e).scale(c));
    }
    PolyGaussian4 { poly: out }
}

/// Same transform for numeric coefficients.
pub fn fourier_hat_h_numeric(phi: &Poly<4, C64>) -> Poly<4, C64> {
    let mut out = Poly::zero();
    for (e, c) in &phi.terms {
        out = out.add(&hat_monomial4(*e).to_numeric().scale(c));
    }
    out
}

/// Right translation (κ.Φ)(z) = Φ(z·κ) on the polynomial part.
pub fn k_act_h<T: Coeff>(kappa: &SU2Point, phi: &Poly<4, T>) -> Poly<4, C64> {
    let m = kappa.matrix();
    // (z·κ)₁ = z₁κ₁₁ + z₂κ₂₁, (z·κ)₂ = z₁κ₁₂ + z₂κ₂₂
    let lin = |a: C64, b: C64| -> [Poly<4, C64>; 2] {
        let mut p = Poly::zero();
        p.add_term([1, 0, 0, 0], a);
        p.add_term([0, 1, 0, 0], b);
        let mut q = Poly::zero();
        q.add_term([0, 0, 1, 0], a.conj());
        q.add_term([0, 0, 0, 1], b.conj());
        [p, q]
    };
    let [w1, w1b] = lin(m[0][0], m[1][0]);
    let [w2, w2b] = lin(m[0][1], m[1][1]);
    let subs = [w1, w2, w1b, w2b];
    let mut out = Poly::zero();
    for (e, c) in &phi.terms {
        let mut t = Poly::constant(c.to_c64());
        for v in 0..4 {
            if e[v] > 0 {
                t = t.mul(&subs[v].pow(e[v]));
            }
        }
        out = out.add(&t);
    }
    out
}

/// Value at a point of the unit sphere, where the Gaussian factor is e^{-2π}.
pub fn restrict_sphere(phi: &PolyGaussian4, kappa: &SU2Point) -> C64 {
    phi.poly.eval(&kappa.coords()) * (-2.0 * PI).exp()
}

/// The section P = (−1)^{(n−n₀)/2} z₁^{(n−n₀)/2} z̄₂^{(n+n₀)/2} P₀ attached to ẽ_{n,0}^{n₀}.
pub fn section_complex(n0: i64, n: i64) -> PolyGaussian4 {
    let b = ((n - n0) / 2) as u32;
    let a = ((n + n0) / 2) as u32;
    let sign = if b % 2 == 0 { 1 } else { -1 };
    PolyGaussian4 { poly: Poly::monomial([b, 0, 0, a], PiQ::from_int(sign)) }
}

/// Direct quadrature of the displayed kernel at one point (trapezoid in each real coordinate).
pub fn fourier_hat_h_quadrature(phi: &Poly<4, C64>, z1: C64, z2: C64) -> C64 {
    // 2Re(z₁u₂) − 2Re(z₂u₁) splits the kernel over u₁ and u₂; dz = 2dxdy on each factor
    let h = 0.1;
    let m = 50i32;
    let grid: Vec<f64> = (-m..=m).map(|k| k as f64 * h).collect();
    let mut total = C64::new(0.0, 0.0);
    for (e, c) in &phi.terms {
        let factor = |zc: C64, sign: f64, pa: u32, pb: u32| -> C64 {
            let mut s = C64::new(0.0, 0.0);
            for &x in &grid {
                for &y in &grid {
                    let u = C64::new(x, y);
                    let g = (-2.0 * PI * u.norm_sqr()).exp();
                    if g < 1e-300 {
                        continue;
                    }
                    let phase = -2.0 * PI * sign * 2.0 * (zc * u).re;
                    s += u.powu(pa) * u.conj().powu(pb) * g * C64::from_polar(1.0, phase);
                }
            }
            s * (2.0 * h * h)
        };
        // u₁ pairs with −z₂, u₂ pairs with z₁
        let f1 = factor(z2, -1.0, e[Z1], e[Z1B]);
        let f2 = factor(z1, 1.0, e[Z2], e[Z2B]);
        total += c * f1 * f2;
    }
    total
}

fn d_gauss2(q: &Poly<2, PiQ>, v: usize) -> Poly<2, PiQ> {
    q.deriv(v).sub(&q.mul_var(1 - v).scale(&piq(Q::from_integer(1), Q::from_integer(0), 1)))
}

/// Φ̂ of z^a z̄^b e^{-π|z|²}: z → −∂̄/π, z̄ → ∂/π.
pub fn hat_monomial2(e: [u32; 2]) -> Poly<2, PiQ> {
    let inv_pi = piq(Q::from_integer(1), Q::from_integer(0), -1);
    let mut q = Poly::constant(PiQ::from_int(1));
    for _ in 0..e[0] {
        q = d_gauss2(&q, 1).scale(&(-inv_pi.clone()));
    }
    for _ in 0..e[1] {
        q = d_gauss2(&q, 0).scale(&inv_pi);
    }
    q
}

impl PolyGaussian2 {
    /// P_n = e^{-π|z|²} z^{(|n|+n)/2} z̄^{(|n|−n)/2}.
    pub fn basis(n: i64) -> Self {
        let a = ((n.abs() + n) / 2) as u32;
        let b = ((n.abs() - n) / 2) as u32;
        PolyGaussian2 { poly: Poly::monomial([a, b], PiQ::from_int(1)) }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.poly.eval(&[z, z.conj()]) * (-PI * z.norm_sqr()).exp()
    }
}

/// Φ̂(z) = ∫_ℂ Φ(u) e^{-π(u z̄ − ū z)} du, exactly.
pub fn fourier_hat_c(phi: &PolyGaussian2) -> PolyGaussian2 {
    let mut out = Poly::zero();
    for (e, c) in &phi.poly.terms {
        out = out.add(&hat_monomial2(*e).scale(c));
    }
    PolyGaussian2 { poly: out }
}

/// The section P = (−i)ⁿ Pₙ attached to eₙ.
pub fn section_real(n: i64) -> PolyGaussian2 {
    let mut p = PolyGaussian2::basis(n);
    p.poly = p.poly.scale(&PiQ::monomial(GaussQ::i_pow(-n), 0));
    p
}

/// Rotation by α acting on the right: (κ.Φ)(z) = Φ(e^{iα}z).
pub fn k_act_c<T: Coeff>(alpha: f64, phi: &Poly<2, T>) -> Poly<2, C64> {
    let mut out = Poly::zero();
    for (e, c) in &phi.terms {
        let phase = C64::from_polar(1.0, alpha * (e[0] as f64 - e[1] as f64));
        out.add_term(*e, c.to_c64() * phase);
    }
    out
}

/// Direct quadrature of the real-place kernel at one point.
pub fn fourier_hat_c_quadrature(phi: &Poly<2, C64>, z: C64) -> C64 {
    let h = 0.1;
    let m = 70i32;
    let mut s = C64::new(0.0, 0.0);
    for i in -m..=m {
        for j in -m..=m {
            let u = C64::new(i as f64 * h, j as f64 * h);
            let g = (-PI * u.norm_sqr()).exp();
            if g < 1e-300 {
                continue;
            }
            let ker = (-PI * (u * z.conj() - u.conj() * z)).exp();
            s += phi.eval(&[u, u.conj()]) * g * ker;
        }
    }
    s * (h * h)
}
