//! Gaussian-span functions on the line, their exact Fourier transforms, and
//! grid diagnostics for mollification and decay.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Σ cₙ xⁿ e^{-a x²}.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian1D {
    pub coeffs: BTreeMap<u32, C64>,
    pub a: f64,
}

impl PolyGaussian1D {
    pub fn new(a: f64, coeffs: impl IntoIterator<Item = (u32, C64)>) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Invalid("width must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (n, c) in coeffs {
            *map.entry(n).or_insert(C64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| c.norm() != 0.0);
        Ok(PolyGaussian1D { coeffs: map, a })
    }

    pub fn eval(&self, x: f64) -> C64 {
        let mut p = C64::new(0.0, 0.0);
        for (&n, &c) in &self.coeffs {
            p += c * x.powi(n as i32);
        }
        p * (-self.a * x * x).exp()
    }

    /// f(-x).
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&n, &c)| (n, if n % 2 == 1 { -c } else { c }))
            .collect();
        PolyGaussian1D { coeffs, a: self.a }
    }

    /// Largest coefficient difference after matching widths; infinite if widths differ.
    pub fn coeff_distance(&self, other: &Self) -> f64 {
        if (self.a - other.a).abs() > 1e-14 * self.a {
            return f64::INFINITY;
        }
        let keys: std::collections::BTreeSet<u32> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        let zero = C64::new(0.0, 0.0);
        keys.into_iter()
            .map(|k| {
                (self.coeffs.get(&k).copied().unwrap_or(zero) - other.coeffs.get(&k).copied().unwrap_or(zero))
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Fourier transform with kernel e^{-2πixξ}, done symbolically.
///
/// FT[e^{-ax²}] = √(π/a) e^{-π²ξ²/a} and FT[x·f] = (i/2π) d/dξ FT[f].
pub fn ft_1d(f: &PolyGaussian1D) -> PolyGaussian1D {
    let b = PI * PI / f.a;
    let base = (PI / f.a).sqrt();
    let scale = C64::new(0.0, 1.0 / (2.0 * PI));
    let max_deg = f.coeffs.keys().copied().max().unwrap_or(0) as usize;
    let mut out = vec![C64::new(0.0, 0.0); max_deg + 1];
    // g holds the polynomial part of (i/2π d/dξ)^n applied to e^{-bξ²}
    let mut g = vec![C64::new(base, 0.0)];
    for n in 0..=max_deg {
        if let Some(&c) = f.coeffs.get(&(n as u32)) {
            for (k, &q) in g.iter().enumerate() {
                out[k] += c * q;
            }
        }
        let mut next = vec![C64::new(0.0, 0.0); g.len() + 1];
        for (k, &q) in g.iter().enumerate() {
            if k > 0 {
                next[k - 1] += scale * q * k as f64;
            }
            next[k + 1] += scale * q * (-2.0 * b);
        }
        g = next;
    }
    PolyGaussian1D::new(b, out.into_iter().enumerate().map(|(k, c)| (k as u32, c))).expect("positive width")
}

/// v_ε(x) = ε⁻¹ e^{-πx²/ε²}.
pub fn dirac_family(eps: f64) -> Result<PolyGaussian1D> {
    if !(eps > 0.0) {
        return Err(Error::Invalid("eps must be positive".into()));
    }
    PolyGaussian1D::new(PI / (eps * eps), [(0, C64::new(1.0 / eps, 0.0))])
}

/// Samples of a real function on the uniform grid x_i = x0 + i·h.
#[derive(Debug, Clone)]
pub struct Grid {
    pub x0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl Grid {
    /// Uniform grid on [-4, 4] with spacing at most `h_max`.
    pub fn sample<F: Fn(f64) -> f64>(f: F, h_max: f64) -> Grid {
        let cells = (8.0 / h_max).ceil() as usize;
        let h = 8.0 / cells as f64;
        let values = (0..=cells).map(|i| f(-4.0 + i as f64 * h)).collect();
        Grid { x0: -4.0, h, values }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        (self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * self.h).powf(1.0 / p)
    }
}

/// Discretized ‖f * v_ε − f‖_p.
pub fn mollify_deficit(f: &Grid, eps: f64, p: f64) -> Result<f64> {
    if f.h > eps / 4.0 + 1e-15 {
        return Err(Error::GridTooCoarse { spacing: f.h, limit: eps / 4.0 });
    }
    if !(p >= 1.0) {
        return Err(Error::Invalid("p must be at least 1".into()));
    }
    let n = f.values.len();
    // kernel mass beyond 8ε is below e^{-64π}
    let reach = ((8.0 * eps) / f.h).ceil() as usize;
    let kernel: Vec<f64> = (0..=reach)
        .map(|j| {
            let x = j as f64 * f.h;
            (-PI * x * x / (eps * eps)).exp() / eps
        })
        .collect();
    let mut acc = 0.0;
    for i in 0..n {
        let lo = i.saturating_sub(reach);
        let hi = (i + reach).min(n - 1);
        let mut conv = 0.0;
        for j in lo..=hi {
            conv += f.values[j] * kernel[i.abs_diff(j)];
        }
        conv *= f.h;
        acc += (conv - f.values[i]).abs().powf(p);
    }
    Ok((acc * f.h).powf(1.0 / p))
}

/// sup over ξ ∈ [-xi_max, xi_max] of |ξ|ⁿ|ĥ(ξ)|, with ĥ a Riemann sum on the grid.
pub fn decay_check(h: &Grid, n: u32, xi_max: f64, xi_points: usize) -> f64 {
    let mut best: f64 = 0.0;
    for k in 0..xi_points {
        let xi = -xi_max + 2.0 * xi_max * k as f64 / (xi_points.max(2) - 1) as f64;
        let mut s = C64::new(0.0, 0.0);
        for (i, &v) in h.values.iter().enumerate() {
            if v != 0.0 {
                s += v * C64::from_polar(1.0, -2.0 * PI * h.x(i) * xi);
            }
        }
        best = best.max(xi.abs().powi(n as i32) * s.norm() * h.h);
    }
    best
}
