//! Exact coefficient rings and sparse polynomials in commuting variables.

use num_complex::Complex64 as C64;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub type Q = Ratio<i128>;

pub trait Coeff:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplication by i.
    fn times_i(&self) -> Self;
    fn to_c64(&self) -> C64;
}

/// Gaussian rational a + bi.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        GaussQ { re, im }
    }
    pub fn real(re: Q) -> Self {
        GaussQ { re, im: Q::zero() }
    }
    pub fn int(n: i128) -> Self {
        GaussQ::real(Q::from_integer(n))
    }
    pub fn i() -> Self {
        GaussQ { re: Q::zero(), im: Q::one() }
    }
    /// i^k for any integer k.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussQ::int(1),
            1 => GaussQ::i(),
            2 => GaussQ::int(-1),
            _ => -GaussQ::i(),
        }
    }
    pub fn conj(&self) -> Self {
        GaussQ { re: self.re, im: -self.im }
    }
    pub fn recip(&self) -> Self {
        let d = self.re * self.re + self.im * self.im;
        GaussQ { re: self.re / d, im: -self.im / d }
    }
}

impl Add for GaussQ {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussQ { re: self.re + o.re, im: self.im + o.im }
    }
}
impl Sub for GaussQ {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussQ { re: self.re - o.re, im: self.im - o.im }
    }
}
impl Mul for GaussQ {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussQ { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}
impl Neg for GaussQ {
    type Output = Self;
    fn neg(self) -> Self {
        GaussQ { re: -self.re, im: -self.im }
    }
}

fn q_to_f64(q: &Q) -> f64 {
    q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap()
}

impl Coeff for GaussQ {
    fn zero() -> Self {
        GaussQ::int(0)
    }
    fn from_int(n: i64) -> Self {
        GaussQ::int(n as i128)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn times_i(&self) -> Self {
        GaussQ { re: -self.im, im: self.re }
    }
    fn to_c64(&self) -> C64 {
        C64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
}

/// Laurent polynomial in π with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PiQ(pub BTreeMap<i32, GaussQ>);

impl PiQ {
    pub fn monomial(c: GaussQ, pi_pow: i32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(pi_pow, c);
        }
        PiQ(m)
    }
    fn normalize(mut self) -> Self {
        self.0.retain(|_, c| !c.is_zero());
        self
    }
}

impl Add for PiQ {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (k, c) in o.0 {
            let e = self.0.entry(k).or_insert(GaussQ::int(0));
            *e = *e + c;
        }
        self.normalize()
    }
}
impl Neg for PiQ {
    type Output = Self;
    fn neg(self) -> Self {
        PiQ(self.0.into_iter().map(|(k, c)| (k, -c)).collect())
    }
}
impl Sub for PiQ {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}
impl Mul for PiQ {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = PiQ::default();
        for (k1, c1) in &self.0 {
            for (k2, c2) in &o.0 {
                out = out + PiQ::monomial(*c1 * *c2, k1 + k2);
            }
        }
        out
    }
}

impl Coeff for PiQ {
    fn zero() -> Self {
        PiQ::default()
    }
    fn from_int(n: i64) -> Self {
        PiQ::monomial(GaussQ::int(n as i128), 0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn times_i(&self) -> Self {
        PiQ(self.0.iter().map(|(k, c)| (*k, c.times_i())).collect())
    }
    fn to_c64(&self) -> C64 {
        self.0.iter().map(|(k, c)| c.to_c64() * PI.powi(*k)).sum()
    }
}

impl Coeff for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn times_i(&self) -> Self {
        C64::new(-self.im, self.re)
    }
    fn to_c64(&self) -> C64 {
        *self
    }
}

/// Sparse polynomial in N commuting variables.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<const N: usize, T: Coeff> {
    pub terms: BTreeMap<[u32; N], T>,
}

impl<const N: usize, T: Coeff> Default for Poly<N, T> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<const N: usize, T: Coeff> Poly<N, T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exps: [u32; N], c: T) -> Self {
        let mut p = Self::default();
        p.add_term(exps, c);
        p
    }

    pub fn constant(c: T) -> Self {
        Self::monomial([0; N], c)
    }

    pub fn add_term(&mut self, exps: [u32; N], c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exps) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(exps, s);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&T::from_int(-1)))
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::default();
        for (e, v) in &self.terms {
            out.add_term(*e, v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = *e1;
                for i in 0..N {
                    e[i] += e2[i];
                }
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(T::from_int(1));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiply by the variable with index `var`.
    pub fn mul_var(&self, var: usize) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            let mut e = *e;
            e[var] += 1;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Partial derivative in the variable with index `var`.
    pub fn deriv(&self, var: usize) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut f = *e;
                f[var] -= 1;
                out.add_term(f, c.clone() * T::from_int(e[var] as i64));
            }
        }
        out
    }

    pub fn eval(&self, vals: &[C64; N]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = c.to_c64();
            for i in 0..N {
                if e[i] > 0 {
                    m *= vals[i].powu(e[i]);
                }
            }
            acc += m;
        }
        acc
    }

    pub fn to_numeric(&self) -> Poly<N, C64> {
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            out.add_term(*e, c.to_c64());
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }
}

impl<const N: usize> Poly<N, C64> {
    /// Largest coefficient difference.
    pub fn max_diff(&self, o: &Self) -> f64 {
        self.sub(o).terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
