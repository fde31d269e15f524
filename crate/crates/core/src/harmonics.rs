//! Spherical harmonics on SU₂(ℂ) and SO₂(ℝ), the Lie algebra acting by
//! differential operators, and Haar quadrature on both groups.

use crate::error::{Error, Result};
use crate::exact::{Coeff, GaussQ, Poly, Q};
use crate::numerics::{binom, gauss_legendre, QuadratureSpec};
use num_complex::Complex64 as C64;
use rand::Rng;
use std::f64::consts::PI;

/// Polynomial in (z₁, z₂, z̄₁, z̄₂), variables indexed 0..4 in that order.
pub type LaurentPoly4 = Poly<4, GaussQ>;

pub const Z1: usize = 0;
pub const Z2: usize = 1;
pub const Z1B: usize = 2;
pub const Z2B: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSU2 {
    pub n0: i64,
    pub n: i64,
    pub k: i64,
    pub poly: LaurentPoly4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSO2 {
    pub n: i64,
    /// Polynomial in (z, z̄).
    pub poly: Poly<2, GaussQ>,
}

/// A point of SU₂(ℂ), written as the first row (z₁, z₂) of [[z₁, z₂], [-z̄₂, z̄₁]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2Point {
    pub z1: C64,
    pub z2: C64,
}

impl SU2Point {
    pub fn new(z1: C64, z2: C64) -> Result<Self> {
        if (z1.norm_sqr() + z2.norm_sqr() - 1.0).abs() > 1e-14 {
            return Err(Error::Invalid("point is not on the unit sphere".into()));
        }
        Ok(SU2Point { z1, z2 })
    }

    pub fn identity() -> Self {
        SU2Point { z1: C64::new(1.0, 0.0), z2: C64::new(0.0, 0.0) }
    }

    /// w = [[0, -1], [1, 0]].
    pub fn w() -> Self {
        SU2Point { z1: C64::new(0.0, 0.0), z2: C64::new(-1.0, 0.0) }
    }

    /// diag(e^{iα}, e^{-iα}).
    pub fn diag(alpha: f64) -> Self {
        SU2Point { z1: C64::from_polar(1.0, alpha), z2: C64::new(0.0, 0.0) }
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        loop {
            let v: [f64; 4] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 0.1 && r <= 1.0 {
                return SU2Point { z1: C64::new(v[0] / r, v[1] / r), z2: C64::new(v[2] / r, v[3] / r) };
            }
        }
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        [[self.z1, self.z2], [-self.z2.conj(), self.z1.conj()]]
    }

    pub fn mul(&self, o: &SU2Point) -> SU2Point {
        let a = self.matrix();
        let b = o.matrix();
        SU2Point { z1: a[0][0] * b[0][0] + a[0][1] * b[1][0], z2: a[0][0] * b[0][1] + a[0][1] * b[1][1] }
    }

    pub fn inverse(&self) -> SU2Point {
        SU2Point { z1: self.z1.conj(), z2: -self.z2 }
    }

    /// Second row (-z̄₂, z̄₁).
    pub fn second_row(&self) -> (C64, C64) {
        (-self.z2.conj(), self.z1.conj())
    }

    /// Values of (z₁, z₂, z̄₁, z̄₂) for polynomial evaluation.
    pub fn coords(&self) -> [C64; 4] {
        [self.z1, self.z2, self.z1.conj(), self.z2.conj()]
    }
}

fn check_su2_indices(n0: i64, n: i64, k: i64) -> Result<()> {
    if n < n0.abs() {
        return Err(Error::Range(format!("need n ≥ |n0|, got n={n}, n0={n0}")));
    }
    if (n - n0).rem_euclid(2) != 0 {
        return Err(Error::Parity(format!("n={n} and n0={n0} differ in parity")));
    }
    if k < 0 || k > n {
        return Err(Error::Range(format!("k={k} not in [0,{n}]")));
    }
    Ok(())
}

/// ẽ_{n,k}^{n₀}, expanded literally from the binomial sum.
pub fn harmonic_su2(n0: i64, n: i64, k: i64) -> Result<HarmonicSU2> {
    check_su2_indices(n0, n, k)?;
    let a = (n + n0) / 2;
    let b = (n - n0) / 2;
    let mut poly = LaurentPoly4::zero();
    let norm = Q::new(1, binom(n, k) as i128);
    for j in 0..=k {
        let c = binom(a, j) * binom(b, k - j);
        if c == 0.0 {
            continue;
        }
        let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
        let coeff = GaussQ::real(norm * Q::from_integer(sign * c as i128));
        poly.add_term([(a - j) as u32, j as u32, (k - j) as u32, (b - (k - j)) as u32], coeff);
    }
    Ok(HarmonicSU2 { n0, n, k, poly })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LieGen {
    LH,
    RH,
    Xplus,
    Xminus,
}

/// The Lie algebra generators as differential operators on ℂ[z₁, z₂, z̄₁, z̄₂].
pub fn lie_act_su2<T: Coeff>(gen: LieGen, p: &Poly<4, T>) -> Poly<4, T> {
    let euler = |v: usize| p.deriv(v).mul_var(v);
    match gen {
        LieGen::LH => {
            let s = euler(Z1).sub(&euler(Z1B)).add(&euler(Z2)).sub(&euler(Z2B));
            s.scale(&T::from_int(-1).times_i())
        }
        LieGen::RH => {
            let s = euler(Z1).sub(&euler(Z1B)).sub(&euler(Z2)).add(&euler(Z2B));
            s.scale(&T::from_int(1).times_i())
        }
        LieGen::Xplus => p.deriv(Z1).mul_var(Z2).sub(&p.deriv(Z2B).mul_var(Z1B)),
        LieGen::Xminus => p.deriv(Z2).mul_var(Z1).sub(&p.deriv(Z1B).mul_var(Z2B)),
    }
}

/// ‖ẽ_{n,k}^{n₀}‖² = (n+1)⁻¹ C(n,k)⁻¹ C(n,(n-n₀)/2)⁻¹.
pub fn norm_su2_closed(n0: i64, n: i64, k: i64) -> Result<f64> {
    check_su2_indices(n0, n, k)?;
    Ok(1.0 / ((n + 1) as f64 * binom(n, k) * binom(n, (n - n0) / 2)))
}

/// e_{n,k}^{n₀} = ẽ_{n,k}^{n₀} / ‖ẽ_{n,k}^{n₀}‖ as a numeric polynomial.
pub fn normalized_su2(n0: i64, n: i64, k: i64) -> Result<Poly<4, C64>> {
    let h = harmonic_su2(n0, n, k)?;
    let s = norm_su2_closed(n0, n, k)?.sqrt();
    Ok(h.poly.to_numeric().scale(&C64::new(1.0 / s, 0.0)))
}

fn haar_su2_fixed<F: Fn(&SU2Point) -> C64>(f: &F, n_theta: usize, n_phi: usize) -> C64 {
    let (x, w) = gauss_legendre(n_theta);
    let mut total = C64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(&w) {
        let theta = PI / 4.0 * (xi + 1.0);
        let (st, ct) = theta.sin_cos();
        let mut inner = C64::new(0.0, 0.0);
        for a in 0..n_phi {
            let p1 = C64::from_polar(ct, 2.0 * PI * a as f64 / n_phi as f64);
            for b in 0..n_phi {
                let p2 = C64::from_polar(st, 2.0 * PI * b as f64 / n_phi as f64);
                inner += f(&SU2Point { z1: p1, z2: p2 });
            }
        }
        inner /= (n_phi * n_phi) as f64;
        total += inner * (st * ct * wi * PI / 4.0);
    }
    // dκ = (2π²)⁻¹ sinθ cosθ dθ dφ₁ dφ₂ and the φ-average carries 4π²
    total * 2.0
}

/// ∫ f dκ against the probability Haar measure, refining until stable.
pub fn haar_integrate_su2<F: Fn(&SU2Point) -> C64>(f: F, spec: &QuadratureSpec) -> Result<C64> {
    let mut nt = 6;
    let mut np = 8;
    let mut prev = haar_su2_fixed(&f, nt, np);
    let mut change = f64::INFINITY;
    for _ in 0..spec.max_subdivisions {
        nt *= 2;
        np *= 2;
        let next = haar_su2_fixed(&f, nt, np);
        change = (next - prev).norm();
        prev = next;
        if change <= spec.abs_tol.max(spec.rel_tol * prev.norm()) {
            return Ok(prev);
        }
    }
    Err(Error::ToleranceNotMet { estimate: prev.norm(), change })
}

/// Gram matrix ⟨fᵢ, fⱼ⟩ on SU₂ from one fixed product rule, exact up to
/// rounding for polynomials of total degree below `2 * n_phi`.
pub fn gram_su2(funcs: &[Poly<4, C64>], n_theta: usize, n_phi: usize) -> Vec<Vec<C64>> {
    let k = funcs.len();
    let mut g = vec![vec![C64::new(0.0, 0.0); k]; k];
    let (x, w) = gauss_legendre(n_theta);
    for (xi, wi) in x.iter().zip(&w) {
        let theta = PI / 4.0 * (xi + 1.0);
        let (st, ct) = theta.sin_cos();
        let weight = st * ct * wi * PI / 4.0 * 2.0 / (n_phi * n_phi) as f64;
        for a in 0..n_phi {
            let p1 = C64::from_polar(ct, 2.0 * PI * a as f64 / n_phi as f64);
            for b in 0..n_phi {
                let p2 = C64::from_polar(st, 2.0 * PI * b as f64 / n_phi as f64);
                let pt = SU2Point { z1: p1, z2: p2 }.coords();
                let vals: Vec<C64> = funcs.iter().map(|f| f.eval(&pt)).collect();
                for i in 0..k {
                    for j in 0..k {
                        g[i][j] += vals[i] * vals[j].conj() * weight;
                    }
                }
            }
        }
    }
    g
}

/// Quadrature spec suited to the Haar integrator (each step doubles both grids).
pub fn haar_spec() -> QuadratureSpec {
    QuadratureSpec { abs_tol: 1e-13, rel_tol: 1e-12, max_subdivisions: 4 }
}

/// e_n on SO₂: zⁿ for n ≥ 0 and z̄^{-n} otherwise.
pub fn harmonic_so2(n: i64) -> HarmonicSO2 {
    let exps = if n >= 0 { [n as u32, 0] } else { [0, (-n) as u32] };
    HarmonicSO2 { n, poly: Poly::monomial(exps, GaussQ::int(1)) }
}

impl HarmonicSO2 {
    pub fn eval_angle(&self, alpha: f64) -> C64 {
        let z = C64::from_polar(1.0, alpha);
        self.poly.eval(&[z, z.conj()])
    }
}

/// (2π)⁻¹∫ f(e^{iα}) dα by the trapezoid rule with `points` nodes.
pub fn circle_integrate<F: Fn(f64) -> C64>(f: F, points: usize) -> C64 {
    let s: C64 = (0..points).map(|j| f(2.0 * PI * j as f64 / points as f64)).sum();
    s / points as f64
}

/// ∫_{ℂ²} e^{-|z₁|²-|z₂|²} dz₁dz₂ in polar form 8π²∫r³e^{-r²}dr ∫dκ, with dz = 2dxdy.
pub fn gaussian_calibration(spec: &QuadratureSpec) -> Result<f64> {
    let radial = crate::numerics::quad_halfline(|r| C64::new((-r * r).exp() * r.powi(3), 0.0), spec)?;
    let mass = haar_integrate_su2(|_| C64::new(1.0, 0.0), &haar_spec())?;
    Ok(8.0 * PI * PI * radial.re * mass.re)
}
