//! Local theory at a finite place of ℚ: characters of ℤ_p^×, Gauss sums,
//! the [χ,n] / [1,≥n] atom algebra with its Fourier transform, classical
//! vectors and the intertwining eigenvalues on them.
//!
//! The uniformizer is p. Additive Haar measure is self-dual, so vol(ℤ_p) =
//! C(ψ)^{-1/2}; the multiplicative measure gives ℤ_p^× the same volume.

use crate::error::{Error, Result};
use crate::exact::Q;
use num_complex::Complex64 as C64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

const MAX_TABLE: i128 = 1 << 22;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn ipow(p: u64, k: u32) -> i128 {
    (p as i128).pow(k)
}

fn pow_mod(mut b: i128, mut e: i128, m: i128) -> i128 {
    let mut r = 1 % m;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(p: u64, x: i128) -> u32 {
    let p = p as i128;
    let mut x = x;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Smallest primitive root modulo p², hence modulo every pᵐ (odd p).
pub fn primitive_root(p: u64) -> u64 {
    let pm1 = p - 1;
    let mut factors = vec![];
    let mut r = pm1;
    let mut d = 2;
    while d * d <= r {
        if r % d == 0 {
            factors.push(d);
            while r % d == 0 {
                r /= d;
            }
        }
        d += 1;
    }
    if r > 1 {
        factors.push(r);
    }
    let p2 = ipow(p, 2);
    (2..p)
        .find(|&g| {
            factors.iter().all(|f| pow_mod(g as i128, (pm1 / f) as i128, p as i128) != 1)
                && pow_mod(g as i128, pm1 as i128, p2) != 1
        })
        .unwrap_or(1)
}

type LogTable = Arc<Vec<u32>>;

/// Discrete logarithms on (ℤ/pᵐ)ˣ. For odd p the entry is log_g(u); for
/// p = 2 it packs u = (−1)^a 5^b as a | b<<1.
fn log_table(p: u64, m: u32) -> Result<LogTable> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), LogTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(p, m)) {
        return Ok(t.clone());
    }
    let modulus = ipow(p, m);
    if modulus > MAX_TABLE {
        return Err(Error::Range(format!("unit group mod {p}^{m} too large")));
    }
    let mut table = vec![u32::MAX; modulus as usize];
    if p == 2 {
        let nb = if m >= 3 { 1i128 << (m - 2) } else { 1 };
        for a in 0..2u32 {
            let mut u = if a == 0 { 1 } else { modulus - 1 } % modulus;
            for b in 0..nb {
                table[u as usize] = a | ((b as u32) << 1);
                u = u * 5 % modulus;
            }
        }
        if m <= 1 {
            table[(1 % modulus) as usize] = 0;
        }
    } else {
        let g = primitive_root(p) as i128;
        let order = modulus / p as i128 * (p as i128 - 1);
        let mut u = 1 % modulus;
        for k in 0..order {
            table[u as usize] = k as u32;
            u = u * g % modulus;
        }
    }
    let t = Arc::new(table);
    cache.lock().unwrap().insert((p, m), t.clone());
    Ok(t)
}

fn cis(angle: &Q) -> C64 {
    let t = *angle.numer() as f64 / *angle.denom() as f64;
    C64::from_polar(1.0, 2.0 * PI * t)
}

fn frac(q: Q) -> Q {
    q - q.floor()
}

/// Character of ℤ_p^× of exact conductor `m`.
///
/// For odd p, χ(g) = e(exponent/φ(pᵐ)) on the fixed generator g. For p = 2
/// the unit group is ±1 × 5^ℤ: χ(5) = e(exponent/2^{m−2}) and χ(−1) = −1
/// exactly when `sign` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultChar {
    pub p: u64,
    pub m: u32,
    pub exponent: i64,
    pub sign: bool,
}

impl MultChar {
    pub fn trivial(p: u64) -> Self {
        MultChar { p, m: 0, exponent: 0, sign: false }
    }

    /// Odd p only; see [`MultChar::new_dyadic`] for p = 2.
    pub fn new(p: u64, m: u32, exponent: i64) -> Result<Self> {
        if p == 2 {
            return Err(Error::Range("p = 2 needs MultChar::new_dyadic".into()));
        }
        if !is_prime(p) {
            return Err(Error::Range(format!("{p} is not prime")));
        }
        let c = Self::normalized(p, m, exponent as i128, false);
        if c.m != m {
            return Err(Error::Conductor);
        }
        Ok(c)
    }

    pub fn new_dyadic(m: u32, exponent: i64, sign: bool) -> Result<Self> {
        let c = Self::normalized(2, m.max(2), exponent as i128, sign);
        if c.m != m {
            return Err(Error::Conductor);
        }
        Ok(c)
    }

    /// Order of the cyclic part carrying `exponent` at level m.
    fn cyclic_order(p: u64, m: u32) -> i128 {
        match (p, m) {
            (_, 0) => 1,
            (2, m) if m <= 2 => 1,
            (2, m) => 1 << (m - 2),
            (p, m) => ipow(p, m - 1) * (p as i128 - 1),
        }
    }

    /// Canonical character from level-`m` data, with the true conductor.
    fn normalized(p: u64, m: u32, e: i128, sign: bool) -> Self {
        let order = Self::cyclic_order(p, m);
        let e = e.rem_euclid(order);
        if p == 2 {
            if e == 0 {
                let m = if sign { 2 } else { 0 };
                return MultChar { p, m, exponent: 0, sign };
            }
            let v = valuation(2, e);
            return MultChar { p, m: m - v, exponent: (e >> v) as i64, sign };
        }
        if e == 0 {
            return MultChar::trivial(p);
        }
        let v = valuation(p, e).min(m - 1);
        MultChar { p, m: m - v, exponent: (e / ipow(p, v)) as i64, sign: false }
    }

    fn lifted(&self, level: u32) -> i128 {
        if self.m == 0 || (self.p == 2 && self.m <= 2) {
            0
        } else {
            self.exponent as i128 * ipow(self.p, level - self.m)
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let level = self.m.max(o.m).max(if self.p == 2 { 2 } else { 1 });
        let e = self.lifted(level) + o.lifted(level);
        Self::normalized(self.p, level, e, self.sign ^ o.sign)
    }

    pub fn inverse(&self) -> Self {
        let level = self.m.max(if self.p == 2 { 2 } else { 1 });
        Self::normalized(self.p, level, -self.lifted(level), self.sign)
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 0
    }

    /// χ(u) = e(angle) with angle ∈ [0,1); u must be prime to p.
    pub fn angle(&self, u: i128) -> Result<Q> {
        if self.m == 0 {
            return Ok(Q::zero());
        }
        let modulus = ipow(self.p, self.m);
        let r = u.rem_euclid(modulus);
        if r % self.p as i128 == 0 {
            return Err(Error::Invalid(format!("{u} is not a unit at {}", self.p)));
        }
        let log = log_table(self.p, self.m)?[r as usize] as i128;
        let q = if self.p == 2 {
            let a = log & 1;
            let b = log >> 1;
            let mut q = if self.sign && a == 1 { Q::new(1, 2) } else { Q::zero() };
            if self.m >= 3 {
                q += Q::new(self.exponent as i128 * b, 1 << (self.m - 2));
            }
            q
        } else {
            Q::new(self.exponent as i128 * log, Self::cyclic_order(self.p, self.m))
        };
        Ok(frac(q))
    }

    pub fn value(&self, u: i128) -> Result<C64> {
        Ok(cis(&self.angle(u)?))
    }

    /// χ(−1) as ±1.
    pub fn at_minus_one(&self) -> f64 {
        if self.angle(-1).map(|a| a.is_zero()).unwrap_or(true) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn conductor_norm(&self) -> f64 {
        (self.p as f64).powi(self.m as i32)
    }

    /// Every character of exact conductor m.
    pub fn all_of_conductor(p: u64, m: u32) -> Vec<MultChar> {
        if m == 0 {
            return vec![MultChar::trivial(p)];
        }
        let signs: &[bool] = if p == 2 { &[false, true] } else { &[false] };
        let order = Self::cyclic_order(p, m);
        let level = if p == 2 { m.max(2) } else { m };
        let mut out = vec![];
        for &sg in signs {
            for e in 0..order {
                let c = Self::normalized(p, level, e, sg);
                if c.m == m {
                    out.push(c);
                }
            }
        }
        out
    }
}

/// Additive character ψ(x) = e({pᶜx}_p): trivial on p^{−c}ℤ_p and not on
/// p^{−c−1}ℤ_p, so C(ψ) = pᶜ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddChar {
    pub p: u64,
    pub c: u32,
}

impl AddChar {
    pub fn new(p: u64, c: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Range(format!("{p} is not prime")));
        }
        Ok(AddChar { p, c })
    }

    pub fn conductor_norm(&self) -> f64 {
        (self.p as f64).powi(self.c as i32)
    }

    /// vol(ℤ_p) = C(ψ)^{-1/2}.
    pub fn vol_o(&self) -> f64 {
        self.conductor_norm().powf(-0.5)
    }

    /// ψ(a·pᵏ).
    pub fn value(&self, a: i128, k: i32) -> C64 {
        let e = self.c as i32 + k;
        if e >= 0 {
            return C64::new(1.0, 0.0);
        }
        let den = ipow(self.p, (-e) as u32);
        cis(&Q::new(a.rem_euclid(den), den))
    }
}

fn q_pow(p: u64, k: i32) -> f64 {
    (p as f64).powi(k)
}

fn q_cpow(p: u64, k: f64, z: C64) -> C64 {
    (-(k * (p as f64).ln()) * z).exp()
}

/// ∫_{ℤ_p^×} χ(y) ψ(−pⁿy) dy as an exact finite sum over residue classes.
pub fn gauss_integral(chi: &MultChar, psi: &AddChar, n: i32) -> Result<C64> {
    let p = chi.p;
    let level = (chi.m as i32).max(-(psi.c as i32 + n)).max(1) as u32;
    let modulus = ipow(p, level);
    if modulus > MAX_TABLE {
        return Err(Error::Range("Gauss integral window too large".into()));
    }
    let mut acc = C64::new(0.0, 0.0);
    for y in 1..modulus {
        if y % p as i128 == 0 {
            continue;
        }
        acc += chi.value(y)? * psi.value(-y, n);
    }
    Ok(acc * psi.vol_o() / modulus as f64)
}

/// G(χ,ψ), the Gauss integral at n = −𝔠(ψ) − 𝔠(χ).
pub fn gauss_sum(chi: &MultChar, psi: &AddChar) -> Result<C64> {
    if chi.m == 0 {
        return Err(Error::Conductor);
    }
    gauss_integral(chi, psi, -(psi.c as i32) - chi.m as i32)
}

/// g(χ,ψ) = G(χ,ψ)·C(χ)^{1/2}C(ψ)^{1/2}, of modulus one.
pub fn g_normalized(chi: &MultChar, psi: &AddChar) -> Result<C64> {
    Ok(gauss_sum(chi, psi)? * (chi.conductor_norm() * psi.conductor_norm()).sqrt())
}

/// A point pᵛ·u of ℚ_p with u ∈ ℤ prime to p, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub val: Option<i32>,
    pub unit: i128,
}

impl Point {
    pub fn zero() -> Self {
        Point { val: None, unit: 0 }
    }

    pub fn from_int(p: u64, x: i128) -> Self {
        if x == 0 {
            return Point::zero();
        }
        let v = valuation(p, x);
        Point { val: Some(v as i32), unit: x / ipow(p, v) }
    }

    pub fn new(val: i32, unit: i128) -> Self {
        Point { val: Some(val), unit }
    }

    pub fn neg(&self) -> Self {
        Point { val: self.val, unit: -self.unit }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    /// [χ,n]: supported on pⁿℤ_p^×, pⁿy ↦ χ(y).
    Char { chi: MultChar, n: i32 },
    /// [1,≥n]: indicator of pⁿℤ_p.
    Tail { n: i32 },
}

impl Atom {
    pub fn eval(&self, x: &Point) -> Result<C64> {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Ok(match (self, x.val) {
            (Atom::Tail { .. }, None) => one,
            (Atom::Tail { n }, Some(v)) => {
                if v >= *n {
                    one
                } else {
                    zero
                }
            }
            (Atom::Char { .. }, None) => zero,
            (Atom::Char { chi, n }, Some(v)) => {
                if v == *n {
                    chi.value(x.unit)?
                } else {
                    zero
                }
            }
        })
    }

    /// Value at −x relative to the value at x.
    fn parity(&self) -> f64 {
        match self {
            Atom::Char { chi, .. } => chi.at_minus_one(),
            Atom::Tail { .. } => 1.0,
        }
    }

    /// ∫ A·conj(B) over ℚ_p.
    pub fn inner(&self, o: &Atom, psi: &AddChar) -> f64 {
        let p = psi.p;
        let shell = |n: i32| psi.vol_o() * q_pow(p, -n) * (1.0 - 1.0 / p as f64);
        match (self, o) {
            (Atom::Tail { n }, Atom::Tail { n: m }) => psi.vol_o() * q_pow(p, -(*n).max(*m)),
            (Atom::Char { chi, n }, Atom::Char { chi: c2, n: m }) => {
                if n == m && chi == c2 {
                    shell(*n)
                } else {
                    0.0
                }
            }
            (Atom::Char { chi, n }, Atom::Tail { n: m }) | (Atom::Tail { n: m }, Atom::Char { chi, n }) => {
                if chi.is_trivial() && n >= m {
                    shell(*n)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Finite combination of atoms in canonical (merged) form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimpleFunction {
    pub terms: BTreeMap<Atom, C64>,
}

impl SimpleFunction {
    pub fn atom(a: Atom) -> Self {
        let mut f = SimpleFunction::default();
        f.add_term(a, C64::new(1.0, 0.0));
        f
    }

    pub fn add_term(&mut self, a: Atom, c: C64) {
        let e = self.terms.entry(a).or_insert(C64::new(0.0, 0.0));
        *e += c;
        if *e == C64::new(0.0, 0.0) {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(*a, *c);
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        SimpleFunction { terms: self.terms.iter().map(|(a, c)| (*a, c * s)).collect() }
    }

    pub fn eval(&self, x: &Point) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (a, c) in &self.terms {
            acc += c * a.eval(x)?;
        }
        Ok(acc)
    }

    /// x ↦ f(−x).
    pub fn reflect(&self) -> Self {
        SimpleFunction { terms: self.terms.iter().map(|(a, c)| (*a, c * a.parity())).collect() }
    }
}

/// ℱf(x) = ∫ f(u)ψ(−ux)du, atom by atom.
pub fn fourier_atom(f: &SimpleFunction, psi: &AddChar) -> Result<SimpleFunction> {
    let p = psi.p;
    let cpsi = psi.c as i32;
    let mut out = SimpleFunction::default();
    for (a, c) in &f.terms {
        match a {
            Atom::Tail { n } => {
                out.add_term(Atom::Tail { n: -n - cpsi }, c * q_pow(p, -n) * psi.vol_o());
            }
            Atom::Char { chi, n } if chi.is_trivial() => {
                out.add_term(Atom::Tail { n: -n - cpsi }, c * q_pow(p, -n) * psi.vol_o());
                out.add_term(Atom::Tail { n: -n - 1 - cpsi }, -c * q_pow(p, -n - 1) * psi.vol_o());
            }
            Atom::Char { chi, n } => {
                let g = gauss_sum(chi, psi)?;
                out.add_term(Atom::Char { chi: chi.inverse(), n: -n - cpsi - chi.m as i32 }, c * q_pow(p, -n) * g);
            }
        }
    }
    Ok(out)
}

/// ℱ[atom](x) by direct summation of ψ(−ux) over residue classes of the
/// support, without using the closed form.
pub fn fourier_atom_pointwise(a: &Atom, psi: &AddChar, x: &Point) -> Result<C64> {
    let p = psi.p;
    let (chi, n, units_only) = match a {
        Atom::Char { chi, n } => (*chi, *n, true),
        Atom::Tail { n } => (MultChar::trivial(p), *n, false),
    };
    // u = pⁿy; ψ(−ux) depends on y modulo p^{−(c+n+v)}
    let depth = match x.val {
        None => 0,
        Some(v) => -(psi.c as i32 + n + v),
    };
    let level = (chi.m as i32).max(depth).max(1) as u32;
    if ipow(p, level) > 200_000 {
        // y ↦ y + p^{level−1}t leaves χ(y) alone and ψ(−ux) runs over all p-th roots of unity
        return Ok(C64::new(0.0, 0.0));
    }
    let modulus = ipow(p, level);
    let mut acc = C64::new(0.0, 0.0);
    for y in 0..modulus {
        if y % p as i128 == 0 && units_only {
            continue;
        }
        let chiv = if units_only { chi.value(y)? } else { C64::new(1.0, 0.0) };
        let psiv = match x.val {
            None => C64::new(1.0, 0.0),
            Some(v) => psi.value(-y * x.unit, n + v),
        };
        acc += chiv * psiv;
    }
    Ok(acc * psi.vol_o() * q_pow(p, -n) / modulus as f64)
}

/// Finite combination of tensor atoms A(x)B(y).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TensorSimpleFunction {
    pub terms: BTreeMap<(Atom, Atom), C64>,
}

impl TensorSimpleFunction {
    pub fn tensor(a: &SimpleFunction, b: &SimpleFunction) -> Self {
        let mut out = TensorSimpleFunction::default();
        for (x, c) in &a.terms {
            for (y, d) in &b.terms {
                out.add_term(*x, *y, c * d);
            }
        }
        out
    }

    pub fn add_term(&mut self, a: Atom, b: Atom, c: C64) {
        let e = self.terms.entry((a, b)).or_insert(C64::new(0.0, 0.0));
        *e += c;
        if *e == C64::new(0.0, 0.0) {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &o.terms {
            out.add_term(*a, *b, *c);
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        TensorSimpleFunction { terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &Point, y: &Point) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for ((a, b), c) in &self.terms {
            let va = a.eval(x)?;
            if va != C64::new(0.0, 0.0) {
                acc += c * va * b.eval(y)?;
            }
        }
        Ok(acc)
    }

    /// Φ̂(x,y) = ℱΦ(−y,x).
    pub fn fourier_hat(&self, psi: &AddChar) -> Result<Self> {
        let mut out = TensorSimpleFunction::default();
        for ((a, b), c) in &self.terms {
            let fa = fourier_atom(&SimpleFunction::atom(*a), psi)?.reflect();
            let fb = fourier_atom(&SimpleFunction::atom(*b), psi)?;
            out = out.add(&TensorSimpleFunction::tensor(&fb, &fa).scale(*c));
        }
        Ok(out)
    }

    /// ∫∫ Φ·conj(Ψ) over ℚ_p², from the exact atom integrals.
    pub fn inner(&self, o: &Self, psi: &AddChar) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for ((a, b), c) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                acc += c * c2.conj() * a.inner(a2, psi) * b.inner(b2, psi);
            }
        }
        acc
    }

    pub fn norm(&self, psi: &AddChar) -> f64 {
        self.inner(self, psi).re.max(0.0).sqrt()
    }

    fn max_depth(&self) -> i32 {
        self.terms
            .keys()
            .flat_map(|(a, b)| [a, b])
            .map(|a| match a {
                Atom::Char { n, .. } | Atom::Tail { n } => *n,
            })
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RamificationCase {
    /// 𝔠(ξ), 𝔠(ωξ⁻¹) > 0
    Both,
    /// 𝔠(ξ) > 0 = 𝔠(ωξ⁻¹)
    XiOnly,
    /// 𝔠(ξ) = 0 < 𝔠(ωξ⁻¹)
    OmegaXiInvOnly,
    Unramified,
}

impl RamificationCase {
    pub fn number(&self) -> u8 {
        match self {
            RamificationCase::Both => 1,
            RamificationCase::XiOnly => 2,
            RamificationCase::OmegaXiInvOnly => 3,
            RamificationCase::Unramified => 4,
        }
    }
}

/// Data of the induced representation at a finite place. `mu` is the
/// imaginary exponent of ω⁻¹ξ² at p, so ω⁻¹ξ²(p) = p^{−iμ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteParams {
    pub p: u64,
    pub s: C64,
    pub mu: f64,
    pub xi: MultChar,
    pub omega_xi_inv: MultChar,
    pub psi: AddChar,
}

impl FiniteParams {
    pub fn new(s: C64, mu: f64, xi: MultChar, omega_xi_inv: MultChar, psi: AddChar) -> Result<Self> {
        if xi.p != omega_xi_inv.p || xi.p != psi.p {
            return Err(Error::Invalid("characters live at different primes".into()));
        }
        Ok(FiniteParams { p: psi.p, s, mu, xi, omega_xi_inv, psi })
    }

    pub fn unramified(p: u64, s: C64, mu: f64, c_psi: u32) -> Result<Self> {
        FiniteParams::new(s, mu, MultChar::trivial(p), MultChar::trivial(p), AddChar::new(p, c_psi)?)
    }

    pub fn case(&self) -> RamificationCase {
        match (self.xi.m > 0, self.omega_xi_inv.m > 0) {
            (true, true) => RamificationCase::Both,
            (true, false) => RamificationCase::XiOnly,
            (false, true) => RamificationCase::OmegaXiInvOnly,
            (false, false) => RamificationCase::Unramified,
        }
    }

    /// c = 𝔠(ξ) + 𝔠(ωξ⁻¹).
    pub fn conductor(&self) -> u32 {
        self.xi.m + self.omega_xi_inv.m
    }

    /// z = 2s + iμ.
    pub fn z(&self) -> C64 {
        2.0 * self.s + C64::new(0.0, self.mu)
    }

    /// Unit part of ω⁻¹ξ².
    pub fn tate_char(&self) -> MultChar {
        self.xi.mul(&self.omega_xi_inv.inverse())
    }

    /// Parameters of the target space: (−s, ωξ⁻¹, ξ).
    pub fn swapped(&self) -> Self {
        FiniteParams { s: -self.s, mu: -self.mu, xi: self.omega_xi_inv, omega_xi_inv: self.xi, ..*self }
    }

    pub fn with_s(&self, s: C64) -> Self {
        FiniteParams { s, ..*self }
    }
}

/// Which normalizing constants to put on Φₙ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VectorConstants {
    /// Keeps a (1+q⁻¹)^{1/2} in cases (2) and (3) at n > c; those vectors
    /// then have norm² 1/(1+q⁻¹).
    Displayed,
    /// Every Φₙ a unit vector.
    Orthonormal,
}

/// Φₙ with unit norm.
pub fn classical_vector(params: &FiniteParams, n: u32) -> Result<TensorSimpleFunction> {
    classical_vector_with(params, n, VectorConstants::Orthonormal)
}

pub fn classical_vector_with(params: &FiniteParams, n: u32, constants: VectorConstants) -> Result<TensorSimpleFunction> {
    let c = params.conductor();
    if n < c {
        return Err(Error::Range(format!("level {n} below conductor {c}")));
    }
    let k = (n - c) as i32;
    let p = params.p;
    let q = p as f64;
    let sqrt_cpsi = params.psi.conductor_norm().sqrt();
    let xi_inv = params.xi.inverse();
    let beta = params.omega_xi_inv;
    let c2 = beta.m as i32;
    let one = |x: f64| C64::new(x, 0.0);
    let tens = |a: Atom, b: Atom, coef: f64| {
        let mut t = TensorSimpleFunction::default();
        t.add_term(a, b, one(coef));
        t
    };
    let extra = match constants {
        VectorConstants::Displayed => (1.0 + 1.0 / q).sqrt(),
        VectorConstants::Orthonormal => 1.0,
    };
    let unit = Atom::Char { chi: MultChar::trivial(p), n: 0 };
    Ok(match params.case() {
        RamificationCase::Both => {
            let coef = q.powf(k as f64 / 2.0) * sqrt_cpsi * beta.conductor_norm().sqrt() / (1.0 - 1.0 / q);
            tens(Atom::Char { chi: xi_inv, n: c2 + k }, Atom::Char { chi: beta, n: 0 }, coef)
        }
        RamificationCase::XiOnly => {
            if k == 0 {
                tens(Atom::Char { chi: xi_inv, n: 0 }, Atom::Tail { n: 0 }, sqrt_cpsi / (1.0 - 1.0 / q).sqrt())
            } else {
                let coef = q.powf(k as f64 / 2.0) * sqrt_cpsi / ((1.0 - 1.0 / q) * extra);
                tens(Atom::Char { chi: xi_inv, n: k }, unit, coef)
            }
        }
        RamificationCase::OmegaXiInvOnly => {
            let base = sqrt_cpsi * beta.conductor_norm().sqrt();
            let b = Atom::Char { chi: beta, n: 0 };
            if k == 0 {
                tens(Atom::Tail { n: c2 }, b, base / (1.0 - 1.0 / q).sqrt())
            } else {
                let coef = q.powf(k as f64 / 2.0) * base / ((1.0 - 1.0 / q) * extra);
                tens(Atom::Tail { n: c2 + k }, b, coef).add(&tens(Atom::Tail { n: c2 + k - 1 }, b, -coef / q))
            }
        }
        RamificationCase::Unramified => {
            let f12 = tens(Atom::Tail { n: 0 }, Atom::Tail { n: 0 }, 1.0).add(&tens(Atom::Tail { n: 1 }, Atom::Tail { n: 1 }, -1.0));
            let strip = |j: i32| tens(Atom::Tail { n: j }, unit, 1.0);
            match n {
                0 => f12.scale(one(sqrt_cpsi / (1.0 - q.powi(-2)).sqrt())),
                1 => {
                    let coef = sqrt_cpsi * (q * (1.0 + 1.0 / q) / (1.0 - 1.0 / q)).sqrt();
                    strip(1).add(&f12.scale(one(-1.0 / (q + 1.0)))).scale(one(coef))
                }
                _ => {
                    let coef = q.powf(n as f64 / 2.0) * sqrt_cpsi / (1.0 - 1.0 / q);
                    strip(n as i32).add(&strip(n as i32 - 1).scale(one(-1.0 / q))).scale(one(coef))
                }
            }
        }
    })
}

/// Units used to probe scalings and residues.
fn probe_units(p: u64, modulus: i128) -> Vec<i128> {
    let g = if p == 2 { 5 } else { primitive_root(p) as i128 };
    let mut us = vec![1, -1, g, 1 + p as i128, g * g + p as i128, 1 + p as i128 * p as i128, modulus - g];
    us.retain(|u| u.rem_euclid(p as i128) != 0);
    us.sort();
    us.dedup();
    us
}

/// The three covariance conditions cutting out the level-N subspace,
/// checked exactly on residue representatives modulo p^{N+2}.
pub fn level_membership(phi: &TensorSimpleFunction, params: &FiniteParams, level: u32) -> Result<bool> {
    let p = params.p;
    let r = level + 2;
    let modulus = ipow(p, r);
    let units = probe_units(p, modulus);
    let mut coords = vec![0i128];
    for v in 0..=r {
        for u in &units {
            coords.push(ipow(p, v) * u);
        }
    }
    let pt = |x: i128| Point::from_int(p, x);
    let close = |a: C64, b: C64| (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()));
    let shear = ipow(p, level);
    for &x in &coords {
        for &y in &coords {
            if x.rem_euclid(p as i128) == 0 && y.rem_euclid(p as i128) == 0 {
                continue;
            }
            let base = phi.eval(&pt(x), &pt(y))?;
            for u in &units {
                let lhs = phi.eval(&pt(u * x), &pt(y))?;
                if !close(lhs, params.xi.inverse().value(*u)? * base) {
                    return Ok(false);
                }
                let lhs = phi.eval(&pt(x), &pt(u * y))?;
                if !close(lhs, params.omega_xi_inv.value(*u)? * base) {
                    return Ok(false);
                }
                if !close(phi.eval(&pt(x), &pt(y + u * x))?, base) {
                    return Ok(false);
                }
                if !close(phi.eval(&pt(x + u * shear * y), &pt(y))?, base) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Pieces of ℱ₁² = ℤ_p² − pℤ_p² under the upper-triangular congruence
/// subgroup of level N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orbit {
    /// ℤ_p^× × ℤ_p
    UnitFirst,
    /// (p^k − p^{k+1}) × ℤ_p^×, 1 ≤ k < N
    Shell(u32),
    /// p^N × ℤ_p^×
    Deep(u32),
}

/// Exact measures of the orbit decomposition at level N ≥ 1.
pub fn orbit_measures(p: u64, c_psi: u32, level: u32) -> Vec<(Orbit, Q)> {
    let q = Q::from_integer(p as i128);
    let cinv = Q::new(1, ipow(p, c_psi));
    let unit = Q::one() - q.recip();
    let mut out = vec![(Orbit::UnitFirst, cinv * unit)];
    for k in 1..level {
        out.push((Orbit::Shell(k), cinv * q.recip().pow(k as i32) * unit * unit));
    }
    out.push((Orbit::Deep(level), cinv * q.recip().pow(level as i32) * unit));
    out
}

/// vol(ℱ₁²) = (1 − q⁻²)·C(ψ)⁻¹.
pub fn vol_f12(p: u64, c_psi: u32) -> Q {
    let q = Q::from_integer(p as i128);
    (Q::one() - q.recip().pow(2)) * Q::new(1, ipow(p, c_psi))
}

/// Gram matrix of functions on ℱ₁² whose pairwise products depend only on
/// (v(x), v(y)): sums the value at one point per valuation cell times the
/// exact cell measure.
pub fn gram_by_cells(phis: &[TensorSimpleFunction], psi: &AddChar) -> Result<Vec<Vec<C64>>> {
    let p = psi.p;
    let depth = phis.iter().map(|f| f.max_depth()).max().unwrap_or(0).max(0) + 1;
    let q = Q::from_integer(p as i128);
    let half = Q::one() - q.recip();
    let cinv = Q::new(1, ipow(p, psi.c));
    // (x, y, measure); valuation `depth` stands for the whole ball p^depth ℤ_p
    let mut cells: Vec<(Point, Point, Q)> = vec![];
    let vol = |v: i32| if v == depth { q.recip().pow(v) } else { q.recip().pow(v) * half };
    for j in 0..=depth {
        for k in 0..=depth {
            if j.min(k) != 0 {
                continue;
            }
            cells.push((Point::new(j, 1), Point::new(k, 1), cinv * vol(j) * vol(k)));
        }
    }
    let total: Q = cells.iter().map(|c| c.2).fold(Q::zero(), |a, b| a + b);
    if total != vol_f12(p, psi.c) {
        return Err(Error::Invalid("valuation cells do not tile the primitive vectors".into()));
    }
    let mut g = vec![vec![C64::new(0.0, 0.0); phis.len()]; phis.len()];
    for (x, y, m) in &cells {
        let mf = *m.numer() as f64 / *m.denom() as f64;
        let vals: Vec<C64> = phis.iter().map(|f| f.eval(x, y)).collect::<Result<_>>()?;
        for i in 0..phis.len() {
            for j in 0..phis.len() {
                g[i][j] += vals[i] * vals[j].conj() * mf;
            }
        }
    }
    Ok(g)
}

/// Element of GL₂(ℤ_p) with integer entries; only the bottom row enters the
/// sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMat {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl KMat {
    pub fn new(p: u64, a: i128, b: i128, c: i128, d: i128) -> Result<Self> {
        if (a * d - b * c).rem_euclid(p as i128) == 0 {
            return Err(Error::Invalid("determinant is not a unit".into()));
        }
        Ok(KMat { a, b, c, d })
    }

    /// 1, w, n(u), lower unipotents at several depths and diagonal cosets.
    pub fn samples(p: u64) -> Vec<KMat> {
        let g = if p == 2 { 5 } else { primitive_root(p) as i128 };
        let pi = p as i128;
        let raw = [
            (1, 0, 0, 1),
            (0, -1, 1, 0),
            (1, g, 0, 1),
            (1, 0, 1, 1),
            (1, 0, g, 1),
            (1, 0, pi, 1),
            (1, 0, g * pi, 1),
            (1, 0, pi * pi, 1),
            (1, 0, pi * pi * pi, g),
            (1, 0, pi.pow(4), 1),
            (g, 0, 0, 1),
            (0, 1, 1, pi),
            (0, 1, 1, g * pi * pi),
        ];
        raw.iter().filter_map(|&(a, b, c, d)| KMat::new(p, a, b, c, d).ok()).collect()
    }

    /// [`KMat::samples`] plus lower unipotents down to valuation `depth`, which
    /// sections of level above 4 need.
    pub fn samples_to_depth(p: u64, depth: u32) -> Vec<KMat> {
        let g = if p == 2 { 5 } else { primitive_root(p) as i128 };
        let mut out = Self::samples(p);
        for k in 5..=depth {
            let pk = (p as i128).pow(k);
            for (a, b, c, d) in [(1, 0, pk, 1), (1, 0, g * pk, 1), (0, 1, 1, g * pk)] {
                out.extend(KMat::new(p, a, b, c, d));
            }
        }
        out
    }
}

enum KRange {
    All,
    Exact(i32),
    AtLeast(i32),
}

/// ∫_{ℚ_p^×} Φ((0,t)κ) χ(t) |t|^{1+z} d^×t with χ unramified at p apart from
/// its unit part `chi`; the sum over valuations is summed in closed form.
pub fn tate_integral(phi: &TensorSimpleFunction, chi: &MultChar, z: C64, kappa: &KMat, psi: &AddChar) -> Result<C64> {
    let p = psi.p;
    let cpt = Point::from_int(p, kappa.c);
    let dpt = Point::from_int(p, kappa.d);
    let e = 1.0 + z;
    let ratio = q_cpow(p, 1.0, e);
    let vol_units = psi.vol_o();
    let mut acc = C64::new(0.0, 0.0);
    'terms: for ((a, b), coef) in &phi.terms {
        let mut range = KRange::All;
        let mut chars = *chi;
        let mut value = *coef;
        for (atom, pt) in [(a, cpt), (b, dpt)] {
            let (cons, ch, val) = match (atom, pt.val) {
                (Atom::Tail { .. }, None) => (KRange::All, None, C64::new(1.0, 0.0)),
                (Atom::Char { .. }, None) => continue 'terms,
                (Atom::Tail { n }, Some(v)) => (KRange::AtLeast(n - v), None, C64::new(1.0, 0.0)),
                (Atom::Char { chi: ac, n }, Some(v)) => (KRange::Exact(n - v), Some(*ac), ac.value(pt.unit)?),
            };
            value *= val;
            if let Some(ch) = ch {
                chars = chars.mul(&ch);
            }
            range = match (range, cons) {
                (KRange::All, r) | (r, KRange::All) => r,
                (KRange::Exact(x), KRange::Exact(y)) => {
                    if x != y {
                        continue 'terms;
                    }
                    KRange::Exact(x)
                }
                (KRange::Exact(x), KRange::AtLeast(y)) | (KRange::AtLeast(y), KRange::Exact(x)) => {
                    if x < y {
                        continue 'terms;
                    }
                    KRange::Exact(x)
                }
                (KRange::AtLeast(x), KRange::AtLeast(y)) => KRange::AtLeast(x.max(y)),
            };
        }
        if !chars.is_trivial() {
            continue;
        }
        let series = match range {
            KRange::All => return Err(Error::Invalid("zero row in κ".into())),
            KRange::Exact(k) => q_cpow(p, k as f64, e),
            KRange::AtLeast(k) => {
                let den = 1.0 - ratio;
                if den.norm() < 1e-14 {
                    return Err(Error::Pole { re: z.re, im: z.im });
                }
                q_cpow(p, k as f64, e) / den
            }
        };
        acc += value * vol_units * series;
    }
    Ok(acc)
}

/// L(1+2s, ω⁻¹ξ²)/L(1−2s, ωξ⁻²); one when ω⁻¹ξ² is ramified.
pub fn l_ratio_finite(params: &FiniteParams) -> Result<C64> {
    if !params.tate_char().is_trivial() {
        return Ok(C64::new(1.0, 0.0));
    }
    let z = params.z();
    let den = 1.0 - q_cpow(params.p, 1.0, 1.0 + z);
    if den.norm() < 1e-14 {
        return Err(Error::Pole { re: params.s.re, im: params.s.im });
    }
    Ok((1.0 - q_cpow(params.p, 1.0, 1.0 - z)) / den)
}

/// Eigenvalue of the normalized intertwiner on the level-n classical vector.
pub fn mu_finite(params: &FiniteParams, n: u32) -> Result<C64> {
    let c = params.conductor();
    if n < c {
        return Err(Error::Range(format!("level {n} below conductor {c}")));
    }
    let psi = &params.psi;
    let phase = match params.case() {
        RamificationCase::Both => g_normalized(&params.xi, psi)?.conj() * g_normalized(&params.omega_xi_inv, psi)?,
        RamificationCase::XiOnly => g_normalized(&params.xi, psi)?.conj(),
        RamificationCase::OmegaXiInvOnly => g_normalized(&params.omega_xi_inv, psi)?,
        RamificationCase::Unramified => C64::new(1.0, 0.0),
    };
    let l = if params.case() == RamificationCase::Unramified && n == 0 {
        C64::new(1.0, 0.0)
    } else {
        l_ratio_finite(params)?
    };
    let x = (params.p as f64).powi(n as i32) * psi.conductor_norm();
    Ok(phase * l * (-(x.ln()) * params.z()).exp())
}

/// The eigenvalue with phases g(ξ⁻¹,ψ) and conj(g(ω⁻¹ξ,ψ)) and with C(ξ) in
/// the case (3) base. Kept for comparison against the oracle.
pub fn mu_finite_printed(params: &FiniteParams, n: u32) -> Result<C64> {
    let c = params.conductor();
    if n < c {
        return Err(Error::Range(format!("level {n} below conductor {c}")));
    }
    let psi = &params.psi;
    let g_xi_inv = |_: ()| g_normalized(&params.xi.inverse(), psi);
    let g_bar = |_: ()| -> Result<C64> { Ok(g_normalized(&params.omega_xi_inv.inverse(), psi)?.conj()) };
    let k = (n - c) as i32;
    let q = params.p as f64;
    let base = q.powi(k) * psi.conductor_norm();
    let (phase, x) = match params.case() {
        RamificationCase::Both => (g_xi_inv(())? * g_bar(())?, base * params.xi.conductor_norm() * params.omega_xi_inv.conductor_norm()),
        RamificationCase::XiOnly => (g_xi_inv(())?, base * params.xi.conductor_norm()),
        RamificationCase::OmegaXiInvOnly => (g_bar(())?, base * params.xi.conductor_norm()),
        RamificationCase::Unramified => return mu_finite(params, n),
    };
    let l = l_ratio_finite(params)?;
    Ok(phase * l * (-(x.ln()) * params.z()).exp())
}

/// Ratio of Tate integrals of Φ̂ₙ and the target Φₙ at each κ; they must
/// agree, and the common value times the L-ratio is the eigenvalue.
pub fn mu_finite_oracle(params: &FiniteParams, n: u32, kappas: &[KMat]) -> Result<C64> {
    let src = classical_vector(params, n)?;
    let target_params = params.swapped();
    let target = classical_vector(&target_params, n)?;
    let hat = src.fourier_hat(&params.psi)?;
    let chi = target_params.tate_char();
    let z = target_params.z();
    let mut pairs = vec![];
    for k in kappas {
        let num = tate_integral(&hat, &chi, z, k, &params.psi)?;
        let den = tate_integral(&target, &chi, z, k, &params.psi)?;
        pairs.push((num, den));
    }
    let scale = pairs.iter().map(|(_, d)| d.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::Invalid("target section vanishes at every sample".into()));
    }
    let ratios: Vec<C64> = pairs.iter().filter(|(_, d)| d.norm() > 1e-9 * scale).map(|(a, b)| a / b).collect();
    let first = ratios[0];
    let spread = ratios.iter().map(|r| (r - first).norm()).fold(0.0, f64::max);
    if spread > 1e-10 * (1.0 + first.norm()) {
        return Err(Error::InconsistentRatio { spread });
    }
    Ok(first * l_ratio_finite(params)?)
}

/// μ′ with respect to s, from the closed form.
pub fn mu_finite_derivative(params: &FiniteParams, n: u32) -> Result<C64> {
    let mu = mu_finite(params, n)?;
    let lq = (params.p as f64).ln();
    let x = n as f64 * lq + params.psi.conductor_norm().ln();
    let mut logd = C64::new(-2.0 * x, 0.0);
    let has_l = params.tate_char().is_trivial() && !(params.case() == RamificationCase::Unramified && n == 0);
    if has_l {
        let z = params.z();
        let a = q_cpow(params.p, 1.0, 1.0 - z);
        let b = q_cpow(params.p, 1.0, 1.0 + z);
        logd -= 2.0 * lq * (a / (1.0 - a) + b / (1.0 - b));
    }
    Ok(mu * logd)
}

/// 2(n log q + log C(ψ) + 2 log q/(1−q⁻¹)·1[ω⁻¹ξ² unramified]).
pub fn derivative_bound_finite(params: &FiniteParams, n: u32) -> f64 {
    let q = params.p as f64;
    let extra = if params.tate_char().is_trivial() { 2.0 * q.ln() / (1.0 - 1.0 / q) } else { 0.0 };
    2.0 * (n as f64 * q.ln() + params.psi.conductor_norm().ln() + extra)
}

/// |μ′(iy)| against the bound; `params.s` must lie on the imaginary axis.
pub fn mu_finite_derivative_bound(params: &FiniteParams, n: u32) -> Result<bool> {
    if params.s.re != 0.0 {
        return Err(Error::Invalid("derivative bound is stated on Re s = 0".into()));
    }
    let d = mu_finite_derivative(params, n)?;
    Ok(d.norm() <= derivative_bound_finite(params, n) * (1.0 + 1e-12))
}

/// Dimension of the level-n K-type: qⁿ − q^{n−2}·1[n≥2] when n ≥ c, else 0.
pub fn dim_ktype_finite(params: &FiniteParams, n: u32) -> u64 {
    if n < params.conductor() {
        return 0;
    }
    let q = params.p;
    q.pow(n) - if n >= 2 { q.pow(n - 2) } else { 0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn quadratic(p: u64) -> MultChar {
        MultChar::new(p, 1, ((p - 1) / 2) as i64).unwrap()
    }

    #[test]
    fn characters_have_the_declared_conductor() {
        for p in [3u64, 5, 7] {
            for m in 0..=3 {
                for chi in MultChar::all_of_conductor(p, m) {
                    assert_eq!(chi.m, m);
                    if m >= 1 {
                        // nontrivial on 1 + p^{m−1}, trivial on 1 + p^m
                        let pm = ipow(p, m);
                        let pm1 = ipow(p, m - 1);
                        let nontriv = (0..p as i128).any(|t| {
                            let u = if m == 1 { t } else { 1 + pm1 * t };
                            u % p as i128 != 0 && !chi.angle(u).unwrap().is_zero()
                        });
                        assert!(nontriv, "{chi:?}");
                        assert!(chi.angle(1 + pm).unwrap().is_zero());
                    }
                }
            }
            assert_eq!(MultChar::all_of_conductor(p, 1).len() as u64, p - 2);
            assert_eq!(MultChar::all_of_conductor(p, 2).len() as u64, (p - 1) * (p - 1));
        }
        assert!(MultChar::new(5, 2, 5).is_err());
    }

    #[test]
    fn character_group_law() {
        let p = 7;
        let a = MultChar::new(p, 2, 5).unwrap();
        let b = MultChar::new(p, 1, 2).unwrap();
        let ab = a.mul(&b);
        for u in [2i128, 3, 10, 48, -1] {
            let lhs = ab.value(u).unwrap();
            let rhs = a.value(u).unwrap() * b.value(u).unwrap();
            assert!((lhs - rhs).norm() < 1e-13);
        }
        assert!(a.mul(&a.inverse()).is_trivial());
    }

    #[test]
    fn quadratic_gauss_sum_at_five() {
        let psi = AddChar::new(5, 0).unwrap();
        let chi = quadratic(5);
        let g = gauss_sum(&chi, &psi).unwrap();
        assert!((g.norm() - 5f64.powf(-0.5)).abs() < 1e-14);
        let gn = g_normalized(&chi, &psi).unwrap();
        assert!((gn - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn gauss_integral_support() {
        for p in [3u64, 5] {
            for cpsi in [0u32, 1] {
                let psi = AddChar::new(p, cpsi).unwrap();
                for m in 1..=2 {
                    for chi in MultChar::all_of_conductor(p, m) {
                        let n0 = -(cpsi as i32) - m as i32;
                        for n in n0 - 2..=n0 + 2 {
                            let v = gauss_integral(&chi, &psi, n).unwrap().norm();
                            if n == n0 {
                                assert!((v - (chi.conductor_norm() * psi.conductor_norm()).powf(-0.5)).abs() < 1e-13);
                            } else {
                                assert!(v < 1e-13, "{p} {m} {n}: {v}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dyadic_characters() {
        let chi = MultChar::new_dyadic(3, 1, true).unwrap();
        assert_eq!(chi.m, 3);
        assert_eq!(chi.at_minus_one(), -1.0);
        let psi = AddChar::new(2, 0).unwrap();
        assert!((g_normalized(&chi, &psi).unwrap().norm() - 1.0).abs() < 1e-13);
        assert_eq!(MultChar::all_of_conductor(2, 3).len(), 2);
        assert!(MultChar::new(2, 3, 1).is_err());
    }

    #[test]
    fn fourier_examples() {
        let psi = AddChar::new(5, 0).unwrap();
        let f = fourier_atom(&SimpleFunction::atom(Atom::Tail { n: 0 }), &psi).unwrap();
        assert_eq!(f, SimpleFunction::atom(Atom::Tail { n: 0 }));
        let chi = quadratic(5);
        let f = fourier_atom(&SimpleFunction::atom(Atom::Char { chi, n: 0 }), &psi).unwrap();
        let g = gauss_sum(&chi, &psi).unwrap();
        assert_eq!(f.terms.len(), 1);
        assert!((f.terms[&Atom::Char { chi, n: -1 }] - g).norm() < 1e-15);
    }

    #[test]
    fn fourier_matches_pointwise_sums() {
        for p in [3u64, 5] {
            let psi = AddChar::new(p, 1).unwrap();
            let mut atoms = vec![Atom::Tail { n: -1 }, Atom::Tail { n: 2 }, Atom::Char { chi: MultChar::trivial(p), n: 1 }];
            for m in 1..=2 {
                atoms.push(Atom::Char { chi: MultChar::all_of_conductor(p, m)[1 % (p as usize - 2)], n: -1 });
            }
            for a in atoms {
                let f = fourier_atom(&SimpleFunction::atom(a), &psi).unwrap();
                let mut pts = vec![Point::zero()];
                for v in -4..=4 {
                    pts.push(Point::new(v, 1));
                    pts.push(Point::new(v, -2));
                }
                for x in pts {
                    let closed = f.eval(&x).unwrap();
                    let brute = fourier_atom_pointwise(&a, &psi, &x).unwrap();
                    assert!((closed - brute).norm() < 1e-12, "{a:?} {x:?}: {closed} vs {brute}");
                }
            }
        }
    }

    #[test]
    fn double_transform_reflects() {
        let p = 7;
        let psi = AddChar::new(p, 1).unwrap();
        let mut f = SimpleFunction::default();
        f.add_term(Atom::Tail { n: 1 }, c(0.5, -1.0));
        f.add_term(Atom::Char { chi: MultChar::new(p, 1, 1).unwrap(), n: 0 }, c(2.0, 0.0));
        f.add_term(Atom::Char { chi: MultChar::new(p, 2, 3).unwrap(), n: -2 }, c(0.0, 1.0));
        let ff = fourier_atom(&fourier_atom(&f, &psi).unwrap(), &psi).unwrap();
        let r = f.reflect();
        for (a, v) in &r.terms {
            assert!((ff.terms[a] - v).norm() < 1e-13);
        }
        assert_eq!(ff.terms.len(), r.terms.len());
    }

    fn all_cases(p: u64, cpsi: u32) -> Vec<FiniteParams> {
        let psi = AddChar::new(p, cpsi).unwrap();
        let s = c(0.1, 0.3);
        let x1 = MultChar::new(p, 1, 1).unwrap();
        let x2 = MultChar::all_of_conductor(p, 2)[3];
        vec![
            FiniteParams::new(s, 0.2, x1, x2, psi).unwrap(),
            FiniteParams::new(s, 0.2, x2, MultChar::trivial(p), psi).unwrap(),
            FiniteParams::new(s, 0.2, MultChar::trivial(p), x1, psi).unwrap(),
            FiniteParams::new(s, 0.2, MultChar::trivial(p), MultChar::trivial(p), psi).unwrap(),
        ]
    }

    #[test]
    fn classical_vector_examples() {
        let fp = FiniteParams::unramified(3, c(0.0, 0.0), 0.0, 1).unwrap();
        let cpsi = 3f64.sqrt();
        let phi0 = classical_vector(&fp, 0).unwrap();
        let want = cpsi / (1.0 - 1.0 / 9.0f64).sqrt();
        assert!((phi0.eval(&Point::new(0, 1), &Point::new(3, 1)).unwrap().re - want).abs() < 1e-14);
        let phi2 = classical_vector(&fp, 2).unwrap();
        let k = 3.0 * cpsi / (1.0 - 1.0 / 3.0);
        assert!((phi2.eval(&Point::new(2, 1), &Point::new(0, 2)).unwrap().re - k * (1.0 - 1.0 / 3.0)).abs() < 1e-13);
        assert!((phi2.eval(&Point::new(1, 1), &Point::new(0, 2)).unwrap().re + k / 3.0).abs() < 1e-13);
        assert!(classical_vector(&all_cases(5, 0)[0], 2).is_err());
    }

    #[test]
    fn orthonormality_and_its_exceptions() {
        for p in [3u64, 5] {
            for fp in all_cases(p, 1) {
                let cc = fp.conductor();
                for consts in [VectorConstants::Displayed, VectorConstants::Orthonormal] {
                    let phis: Vec<_> = (cc..=cc + 3).map(|n| classical_vector_with(&fp, n, consts).unwrap()).collect();
                    let cells = gram_by_cells(&phis, &fp.psi).unwrap();
                    for i in 0..phis.len() {
                        for j in 0..phis.len() {
                            let closed = phis[i].inner(&phis[j], &fp.psi);
                            assert!((closed - cells[i][j]).norm() < 1e-12);
                            let displaced = consts == VectorConstants::Displayed
                                && i == j
                                && i > 0
                                && matches!(fp.case(), RamificationCase::XiOnly | RamificationCase::OmegaXiInvOnly);
                            let want = if i != j {
                                0.0
                            } else if displaced {
                                1.0 / (1.0 + 1.0 / p as f64)
                            } else {
                                1.0
                            };
                            assert!((cells[i][j] - c(want, 0.0)).norm() < 1e-12, "{:?} {i} {j} {}", fp.case(), cells[i][j]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orbits_tile_primitive_vectors() {
        for p in [3u64, 5, 7] {
            for level in 1..5 {
                let total = orbit_measures(p, 1, level).iter().fold(Q::zero(), |a, b| a + b.1);
                assert_eq!(total, vol_f12(p, 1));
            }
        }
    }

    #[test]
    fn level_membership_examples() {
        for fp in all_cases(3, 0) {
            let cc = fp.conductor();
            let phi = classical_vector(&fp, cc).unwrap();
            assert!(level_membership(&phi, &fp, cc).unwrap(), "{:?}", fp.case());
            let next = classical_vector(&fp, cc + 1).unwrap();
            assert!(level_membership(&next, &fp, cc + 1).unwrap());
            assert!(!level_membership(&next, &fp, cc).unwrap(), "{:?}", fp.case());
        }
        assert!(level_membership(&TensorSimpleFunction::default(), &all_cases(3, 0)[0], 1).unwrap());
    }

    #[test]
    fn eigenvalue_examples() {
        let fp = FiniteParams::unramified(5, c(0.37, -1.2), 0.0, 0).unwrap();
        assert!((mu_finite(&fp, 0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let y = 0.8;
        let fp = FiniteParams::unramified(5, c(0.0, y), 0.0, 0).unwrap();
        let q = 5f64;
        let want = (1.0 - q_cpow(5, 1.0, c(1.0, -2.0 * y))) / (1.0 - q_cpow(5, 1.0, c(1.0, 2.0 * y))) * q_cpow(5, 1.0, c(0.0, 2.0 * y));
        let got = mu_finite(&fp, 1).unwrap();
        assert!((got - want).norm() < 1e-14);
        assert!((got.norm() - 1.0).abs() < 1e-14 && q > 0.0);
        // case (2) at s = 0
        let psi = AddChar::new(5, 0).unwrap();
        let xi = MultChar::new(5, 1, 1).unwrap();
        let fp = FiniteParams::new(c(0.0, 0.0), 0.0, xi, MultChar::trivial(5), psi).unwrap();
        let mu = mu_finite(&fp, 1).unwrap();
        assert!((mu.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn oracle_matches_closed_form() {
        for p in [3u64, 5, 7] {
            for fp in all_cases(p, 1) {
                for s in [c(0.25, 0.0), c(0.2, 0.1), c(-0.13, 0.7)] {
                    let fp = fp.with_s(s);
                    let cc = fp.conductor();
                    for n in cc..=cc + 3 {
                        let closed = mu_finite(&fp, n).unwrap();
                        let oracle = mu_finite_oracle(&fp, n, &KMat::samples(p)).unwrap();
                        assert!((closed - oracle).norm() < 1e-10, "p={p} {:?} n={n}: {closed} vs {oracle}", fp.case());
                    }
                }
            }
        }
    }

    #[test]
    fn printed_phase_is_off_by_the_central_sign() {
        // ξ odd, ωξ⁻¹ even: ω(−1) = −1
        let p = 5;
        let psi = AddChar::new(p, 0).unwrap();
        let xi = MultChar::new(p, 1, 1).unwrap();
        assert_eq!(xi.at_minus_one(), -1.0);
        let fp = FiniteParams::new(c(0.2, 0.1), 0.0, xi, MultChar::trivial(p), psi).unwrap();
        let printed = mu_finite_printed(&fp, 1).unwrap();
        let oracle = mu_finite_oracle(&fp, 1, &KMat::samples(p)).unwrap();
        assert!((printed + oracle).norm() < 1e-10);
    }

    #[test]
    fn unitarity_and_derivative() {
        for p in [3u64, 5, 7] {
            for fp in all_cases(p, 1) {
                for y in [-2.0, 0.0, 0.7] {
                    let fp = fp.with_s(c(0.0, y));
                    let cc = fp.conductor();
                    for n in cc..=cc + 3 {
                        assert!((mu_finite(&fp, n).unwrap().norm() - 1.0).abs() < 1e-12);
                        assert!(mu_finite_derivative_bound(&fp, n).unwrap());
                        let h = 1e-5;
                        let fd = (mu_finite(&fp.with_s(c(h, y)), n).unwrap() - mu_finite(&fp.with_s(c(-h, y)), n).unwrap()) / (2.0 * h);
                        let d = mu_finite_derivative(&fp, n).unwrap();
                        assert!((fd - d).norm() < 1e-6 * (1.0 + d.norm()));
                    }
                }
            }
        }
        let fp = FiniteParams::unramified(5, c(0.0, 0.0), 0.0, 0).unwrap();
        let bound = derivative_bound_finite(&fp, 1);
        assert!((bound - 7.0 * 5f64.ln()).abs() < 1e-12);
        assert_eq!(mu_finite_derivative(&fp, 0).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn ktype_dimensions() {
        let fp = FiniteParams::unramified(5, c(0.0, 0.0), 0.0, 0).unwrap();
        assert_eq!(dim_ktype_finite(&fp, 0), 1);
        assert_eq!(dim_ktype_finite(&fp, 2), 24);
        let psi = AddChar::new(5, 0).unwrap();
        let ram = FiniteParams::new(c(0.0, 0.0), 0.0, MultChar::new(5, 2, 1).unwrap(), MultChar::new(5, 1, 1).unwrap(), psi).unwrap();
        assert_eq!(dim_ktype_finite(&ram, 2), 0);
    }
}
