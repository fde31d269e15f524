//! Archimedean Tate sections, intertwining eigenvalues at real and complex
//! places, and the quadrature oracle that recomputes them from scratch.

use crate::error::{Error, Result};
use crate::exact::{Coeff, GaussQ, Poly};
use crate::harmonics::{harmonic_su2, lie_act_su2, LieGen, SU2Point};
use crate::numerics::{gamma_factor, quad_line, GammaFactorKind, QuadratureSpec};
use crate::schwartz::{fourier_hat_c, fourier_hat_h, section_complex, section_real, PolyGaussian2, PolyGaussian4};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Place {
    RealPlace,
    ComplexPlace,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchParams {
    pub place: Place,
    pub mu: f64,
    pub n0: i64,
    pub s: C64,
}

impl ArchParams {
    pub fn new(place: Place, mu: f64, n0: i64, s: C64) -> Result<Self> {
        if place == Place::RealPlace && !(n0 == 0 || n0 == 1) {
            return Err(Error::Range(format!("real place needs n0 in {{0,1}}, got {n0}")));
        }
        Ok(ArchParams { place, mu, n0, s })
    }

    pub fn with_s(&self, s: C64) -> Self {
        ArchParams { s, ..*self }
    }

    fn kind(&self) -> GammaFactorKind {
        match self.place {
            Place::RealPlace => GammaFactorKind::Real,
            Place::ComplexPlace => GammaFactorKind::Complex,
        }
    }

    /// w = 2s + iμ.
    fn w(&self) -> C64 {
        2.0 * self.s + C64::new(0.0, self.mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Normalization {
    /// ℳ
    Unnormalized,
    /// ℛ
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchEigenvalue {
    pub value: C64,
    pub n: i64,
    pub params: ArchParams,
    pub normalized: Normalization,
}

/// Checks (n₀, n) admissibility at the given place.
pub fn check_ktype(place: Place, n0: i64, n: i64) -> Result<()> {
    match place {
        Place::ComplexPlace => {
            if n < n0.abs() {
                return Err(Error::Range(format!("need n ≥ |n0|, got n={n}, n0={n0}")));
            }
        }
        Place::RealPlace => {
            if !(n0 == 0 || n0 == 1) {
                return Err(Error::Range(format!("n0={n0} not in {{0,1}}")));
            }
        }
    }
    if (n - n0).rem_euclid(2) != 0 {
        return Err(Error::Parity(format!("n={n} and n0={n0} differ in parity")));
    }
    Ok(())
}

fn i_pow(k: i64) -> C64 {
    GaussQ::i_pow(k).to_c64()
}

/// f_Φ(s;κ) for Φ on ℂ², by termwise Gamma factors (valid for all s off the poles).
///
/// A monomial z^e contributes only when (e₁+e₂) − (ē₁+ē₂) = −n₀, with weight
/// Γ_ℂ(1+2s+iμ+deg/2) times its value at the second row of κ.
pub fn tate_section_complex(phi: &PolyGaussian4, params: &ArchParams, kappa: &SU2Point) -> Result<C64> {
    let (v1, v2) = kappa.second_row();
    let vals = [v1, v2, v1.conj(), v2.conj()];
    let mut acc = C64::new(0.0, 0.0);
    for (e, c) in &phi.poly.terms {
        let p = (e[0] + e[1]) as i64;
        let q = (e[2] + e[3]) as i64;
        if p - q != -params.n0 {
            continue;
        }
        let g = gamma_factor(GammaFactorKind::Complex, 1.0 + params.w() + (p + q) as f64 / 2.0)?;
        acc += c.to_c64() * Poly::<4, C64>::monomial(*e, C64::new(1.0, 0.0)).eval(&vals) * g;
    }
    Ok(acc)
}

/// Cutoff in u = log r so that the r → 0 tail e^{Re(expo)·u} is below 1e-17.
fn radial_reach(expo: C64) -> Result<f64> {
    if expo.re <= 0.0 {
        return Err(Error::Invalid("Tate integral diverges for this s".into()));
    }
    Ok((40.0 / expo.re).max(40.0))
}

/// Tate integral on ℂ^× by direct quadrature: (2/π)∫∫ Φ(re^{iα}v) e^{in₀α} r^{2+4s+2iμ} dr/r dα.
pub fn tate_section_complex_quad<T: Coeff>(
    poly: &Poly<4, T>,
    params: &ArchParams,
    kappa: &SU2Point,
    spec: &QuadratureSpec,
) -> Result<C64> {
    let poly = poly.to_numeric();
    let (v1, v2) = kappa.second_row();
    let expo = 2.0 + 2.0 * params.w();
    let reach = radial_reach(expo)?;
    let m = (2 * poly.degree() as usize + params.n0.unsigned_abs() as usize + 2).max(4);
    let mut total = C64::new(0.0, 0.0);
    for j in 0..m {
        let alpha = 2.0 * PI * j as f64 / m as f64;
        let ph = C64::from_polar(1.0, alpha);
        let radial = quad_line(
            |u| {
                let r = u.exp();
                let t = ph * r;
                let (a, b) = (t * v1, t * v2);
                let g = -2.0 * PI * r * r;
                if g < -745.0 {
                    return C64::new(0.0, 0.0);
                }
                poly.eval(&[a, b, a.conj(), b.conj()]) * (g + expo * u).exp()
            },
            reach,
            spec,
        )?;
        total += radial * C64::from_polar(1.0, params.n0 as f64 * alpha);
    }
    // (2/π)·(2π/m)·Σ
    Ok(total * (4.0 / m as f64))
}

/// f_Φ(s;κ) for Φ on ℂ = ℝ², κ the rotation by α, termwise.
pub fn tate_section_real(phi: &PolyGaussian2, params: &ArchParams, alpha: f64) -> Result<C64> {
    let v = second_row_real(alpha);
    let mut acc = C64::new(0.0, 0.0);
    for (e, c) in &phi.poly.terms {
        let d = (e[0] + e[1]) as i64;
        if (d - params.n0).rem_euclid(2) != 0 {
            continue;
        }
        let g = gamma_factor(GammaFactorKind::Real, 1.0 + params.w() + d as f64)?;
        acc += c.to_c64() * v.powu(e[0]) * v.conj().powu(e[1]) * g;
    }
    Ok(acc)
}

/// Second row (−sin α, cos α) of the rotation by α, as a complex number.
pub fn second_row_real(alpha: f64) -> C64 {
    C64::new(-alpha.sin(), alpha.cos())
}

/// Σ_± ∫₀^∞ Φ(±r v) (±1)^{n₀} r^{1+2s+iμ} dr/r by quadrature.
pub fn tate_section_real_quad<T: Coeff>(poly: &Poly<2, T>, params: &ArchParams, alpha: f64, spec: &QuadratureSpec) -> Result<C64> {
    let poly = poly.to_numeric();
    let v = second_row_real(alpha);
    let expo = 1.0 + params.w();
    let sign = if params.n0 % 2 == 0 { 1.0 } else { -1.0 };
    quad_line(
        |u| {
            let r = u.exp();
            let g = -PI * r * r;
            if g < -745.0 {
                return C64::new(0.0, 0.0);
            }
            let a = v * r;
            let plus = poly.eval(&[a, a.conj()]);
            let minus = poly.eval(&[-a, -a.conj()]);
            (plus + sign * minus) * (g + expo * u).exp()
        },
        radial_reach(expo)?,
        spec,
    )
}

/// L-factor ratio L(1+2s, ω⁻¹ξ²)/L(1−2s, ωξ⁻²) turning ℳ into ℛ.
pub fn l_ratio(params: &ArchParams) -> Result<C64> {
    let w = params.w();
    let shift = match params.place {
        Place::ComplexPlace => params.n0.abs() as f64 / 2.0,
        Place::RealPlace => params.n0 as f64,
    };
    Ok(gamma_factor(params.kind(), 1.0 + w + shift)? / gamma_factor(params.kind(), 1.0 - w + shift)?)
}

/// Closed-form eigenvalue of ℛ on the flat section of K-type n.
pub fn mu_arch(params: &ArchParams, n: i64) -> Result<ArchEigenvalue> {
    check_ktype(params.place, params.n0, n)?;
    let w = params.w();
    let value = match params.place {
        Place::ComplexPlace => {
            // the section transforms as P̂ = i^{n₀}·P', so the phase is i^{n₀}
            let m = gamma_factor(GammaFactorKind::Complex, 1.0 - w + n as f64 / 2.0)?
                / gamma_factor(GammaFactorKind::Complex, 1.0 + w + n as f64 / 2.0)?;
            l_ratio(params)? * m * i_pow(params.n0)
        }
        Place::RealPlace => {
            let a = n.abs();
            let sign = if ((a - n) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let m = gamma_factor(GammaFactorKind::Real, 1.0 - w + a as f64)?
                / gamma_factor(GammaFactorKind::Real, 1.0 + w + a as f64)?;
            l_ratio(params)? * m / sign
        }
    };
    Ok(ArchEigenvalue { value, n, params: *params, normalized: Normalization::Normalized })
}

/// Shifts a_k with μ = phase·∏ (a_k − w)/(a_k + w).
fn product_shifts(params: &ArchParams, n: i64) -> Vec<f64> {
    match params.place {
        Place::ComplexPlace => {
            let base = 1.0 + params.n0.abs() as f64 / 2.0;
            (0..(n - params.n0.abs()) / 2).map(|k| base + k as f64).collect()
        }
        Place::RealPlace => (0..(n.abs() - params.n0) / 2).map(|k| 1.0 + params.n0 as f64 + 2.0 * k as f64).collect(),
    }
}

fn product_phase(params: &ArchParams, n: i64) -> C64 {
    match params.place {
        Place::ComplexPlace => i_pow(params.n0),
        Place::RealPlace => {
            if ((n.abs() - n) / 2) % 2 == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(-1.0, 0.0)
            }
        }
    }
}

/// The finite-product form of the eigenvalue.
pub fn mu_arch_product(params: &ArchParams, n: i64) -> Result<C64> {
    check_ktype(params.place, params.n0, n)?;
    let w = params.w();
    let mut v = product_phase(params, n);
    for a in product_shifts(params, n) {
        v *= (a - w) / (a + w);
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchDerivative {
    /// dμ/ds from the logarithmic-derivative sum.
    pub exact: C64,
    /// Central difference of the closed form along s ↦ s + ih.
    pub finite_difference: C64,
    pub bound: f64,
}

impl ArchDerivative {
    pub fn bound_check(&self) -> bool {
        self.exact.norm() <= self.bound + 1e-12
    }
}

/// The displayed bound on |μ′(iy)|.
pub fn derivative_bound(place: Place, n0: i64, n: i64) -> f64 {
    match place {
        Place::ComplexPlace => {
            let a = n0.abs() as f64;
            if n == n0.abs() {
                0.0
            } else {
                4.0 * (2.0 / (a + 2.0) + (n as f64 / (a + 2.0)).ln())
            }
        }
        Place::RealPlace => {
            let a = n0 as f64;
            if n.abs() == n0 {
                0.0
            } else {
                2.0 * (2.0 / (a + 1.0) + ((n.abs() as f64 - 1.0) / (a + 1.0)).ln())
            }
        }
    }
}

pub fn mu_arch_derivative(params: &ArchParams, n: i64, h: f64) -> Result<ArchDerivative> {
    if !(1e-6..=1e-4).contains(&h) {
        return Err(Error::Invalid(format!("step {h} outside [1e-6, 1e-4]")));
    }
    let mu = mu_arch(params, n)?.value;
    let w = params.w();
    let logd: C64 = product_shifts(params, n).into_iter().map(|a| -2.0 / (a - w) - 2.0 / (a + w)).sum();
    let ih = C64::new(0.0, h);
    let up = mu_arch(&params.with_s(params.s + ih), n)?.value;
    let down = mu_arch(&params.with_s(params.s - ih), n)?.value;
    Ok(ArchDerivative {
        exact: mu * logd,
        finite_difference: (up - down) / (2.0 * ih),
        bound: derivative_bound(params.place, params.n0, n),
    })
}

/// Coefficient c with f(κ) = c·basis(κ), checked across sample points.
fn common_ratio(pairs: &[(C64, C64)], tol: f64) -> Result<C64> {
    let usable: Vec<C64> = pairs.iter().filter(|(_, b)| b.norm() > 1e-3).map(|(f, b)| f / b).collect();
    if usable.is_empty() {
        return Err(Error::Invalid("basis vanishes at every sample point".into()));
    }
    let first = usable[0];
    let spread = usable.iter().map(|r| (r - first).norm()).fold(0.0, f64::max);
    if spread > tol * first.norm().max(1.0) {
        return Err(Error::InconsistentRatio { spread });
    }
    Ok(usable.iter().sum::<C64>() / usable.len() as f64)
}

/// Recomputes the eigenvalue of ℛ from scratch: build the section for ẽ_{n,k}
/// (k ≤ 1 at the complex place), transform it exactly, integrate both Tate
/// sections by quadrature at the sample points, and normalize by L-factors.
pub fn mu_arch_oracle_k(params: &ArchParams, n: i64, k: i64, kappas: &[SU2Point]) -> Result<C64> {
    check_ktype(params.place, params.n0, n)?;
    if n > 8 {
        return Err(Error::Range("oracle limited to n ≤ 8".into()));
    }
    let spec = QuadratureSpec { abs_tol: 1e-15, rel_tol: 1e-12, max_subdivisions: 10 };
    let target = params.with_s(-params.s);
    let target = ArchParams { mu: -params.mu, n0: -params.n0, ..target };
    let m_value = match params.place {
        Place::ComplexPlace => {
            let mut p = section_complex(params.n0, n).poly;
            for _ in 0..k {
                p = lie_act_su2(LieGen::Xplus, &p);
            }
            let hat = fourier_hat_h(&PolyGaussian4::new(p.clone())).poly;
            let src_basis = harmonic_su2(params.n0, n, k)?.poly.to_numeric();
            let dst_basis = harmonic_su2(-params.n0, n, k)?.poly.to_numeric();
            let mut src = Vec::new();
            let mut dst = Vec::new();
            for kap in kappas {
                src.push((tate_section_complex_quad(&p, params, kap, &spec)?, src_basis.eval(&kap.coords())));
                dst.push((tate_section_complex_quad(&hat, &target, kap, &spec)?, dst_basis.eval(&kap.coords())));
            }
            common_ratio(&dst, 1e-9)? / common_ratio(&src, 1e-9)?
        }
        Place::RealPlace => {
            let target = ArchParams { n0: params.n0, ..target };
            let p = section_real(n);
            let hat = fourier_hat_c(&p).poly;
            let e = crate::harmonics::harmonic_so2(n);
            let mut src = Vec::new();
            let mut dst = Vec::new();
            for kap in kappas {
                // angle of the rotation carried by the first coordinate
                let alpha = kap.z1.arg();
                let b = e.eval_angle(alpha);
                src.push((tate_section_real_quad(&p.poly, params, alpha, &spec)?, b));
                dst.push((tate_section_real_quad(&hat, &target, alpha, &spec)?, b));
            }
            common_ratio(&dst, 1e-9)? / common_ratio(&src, 1e-9)?
        }
    };
    Ok(m_value * l_ratio(params)?)
}

pub fn mu_arch_oracle(params: &ArchParams, n: i64, kappas: &[SU2Point]) -> Result<C64> {
    mu_arch_oracle_k(params, n, 0, kappas)
}

/// The smooth-section kernel is nonvanishing at some a in the scan; returns the best (a, |K|).
pub fn kernel_nonvanishing_scan(kind: GammaFactorKind, w: C64) -> Result<(f64, f64)> {
    let mut best = (0.0, -1.0);
    for a in [1.0, 1.25, 1.5, 1.75] {
        let v = crate::numerics::kernel_ka(kind, a, w)?.norm();
        if v > best.1 {
            best = (a, v);
        }
    }
    Ok(best)
}
