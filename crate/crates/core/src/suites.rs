//! Seeded invariant suites, one per module family. Each returns a [`Report`]
//! whose cases pair a closed form with an independent oracle.

use crate::arch::{kernel_nonvanishing_scan, mu_arch, mu_arch_derivative, mu_arch_oracle, ArchParams, Place};
use crate::classical::{ft_1d, mollify_deficit, Grid, PolyGaussian1D};
use crate::error::{Error, Result};
use crate::global::{
    height_wn, height_wn_closed, maass_selberg, maass_selberg_onaxis, mu_field, mu_field_log_derivative, mu_global_at,
    residue_at_one, residue_constant, richardson_to_zero, sobolev_weight_sum, GlobalKType, LocalElement,
};
use crate::harmonics::{
    circle_integrate, gram_su2, haar_integrate_su2, haar_spec, harmonic_so2, harmonic_su2, lie_act_su2, norm_su2_closed,
    normalized_su2, LieGen, SU2Point,
};
use crate::numerics::{bessel_k, bessel_k_squared_form, kernel_ka, kernel_ka_direct, quad_line, GammaFactorKind, QuadratureSpec};
use crate::padic::{
    classical_vector, classical_vector_with, fourier_atom, fourier_atom_pointwise, g_normalized, gauss_integral, gram_by_cells,
    level_membership, mu_finite, mu_finite_derivative, mu_finite_oracle, derivative_bound_finite, AddChar, Atom, FiniteParams,
    KMat, MultChar, Point, SimpleFunction, VectorConstants,
};
use crate::report::Report;
use crate::exact::GaussQ;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Arch,
    Padic,
    Harmonics,
    Global,
    Classical,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Arch, Suite::Padic, Suite::Harmonics, Suite::Global, Suite::Classical];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Arch => "arch",
            Suite::Padic => "padic",
            Suite::Harmonics => "harmonics",
            Suite::Global => "global",
            Suite::Classical => "classical",
        }
    }

    pub fn default_tolerances(&self) -> BTreeMap<String, f64> {
        let t: &[(&str, f64)] = match self {
            Suite::Harmonics => &[("gram", 1e-6), ("norm", 1e-6), ("ladder", 0.0), ("haar_invariance", 1e-10), ("so2_gram", 1e-12)],
            Suite::Arch => &[
                ("unitarity", 1e-12),
                ("oracle", 1e-8),
                ("derivative_bound", 1e-12),
                ("finite_difference", 1e-5),
                ("bessel_forms", 1e-10),
                ("bessel_symmetry", 1e-10),
                ("kernel", 1e-9),
                ("kernel_nonvanishing", 0.0),
            ],
            Suite::Padic => &[
                ("gauss_modulus", 1e-12),
                ("gauss_inverse", 1e-12),
                ("gauss_support", 1e-13),
                ("fourier_pointwise", 1e-12),
                ("double_transform", 1e-13),
                ("unitarity", 1e-12),
                ("oracle", 1e-10),
                ("norm", 1e-12),
                ("level", 0.0),
                ("derivative_bound", 1e-12),
                ("finite_difference", 1e-5),
            ],
            Suite::Global => &[
                ("field_unitarity", 1e-8),
                ("residue_at_one", 1e-8),
                ("residue_constant", 1e-6),
                ("height_bound", 0.0),
                ("height_closed", 1e-12),
                ("maass_selberg", 1e-6),
                ("global_unitarity", 1e-10),
                ("sobolev_shrinking", 0.0),
                ("sobolev_tail", 1e-3),
            ],
            Suite::Classical => &[("plancherel", 1e-10), ("double_transform", 1e-11), ("mollify_decreasing", 0.0)],
        };
        t.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    pub fn run(&self, seed: u64, tolerances: &BTreeMap<String, f64>) -> Result<Report> {
        let mut tol = self.default_tolerances();
        for (k, v) in tolerances {
            if !tol.contains_key(k) {
                return Err(Error::Invalid(format!("suite {} has no check named {k}", self.name())));
            }
            if !(*v >= 0.0) {
                return Err(Error::Invalid(format!("tolerance for {k} must be nonnegative")));
            }
            tol.insert(k.clone(), *v);
        }
        let mut r = Report::new(self.name(), seed, tol);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            Suite::Harmonics => harmonics(&mut r, &mut rng),
            Suite::Arch => arch(&mut r, &mut rng),
            Suite::Padic => padic(&mut r, &mut rng),
            Suite::Global => global(&mut r, &mut rng),
            Suite::Classical => classical(&mut r, &mut rng),
        }
        Ok(r.finish())
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s}")))
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn su2_labels(max_n: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for n0 in (-n..=n).step_by(2) {
            for k in 0..=n {
                out.push((n0, n, k));
            }
        }
    }
    out
}

fn harmonics(r: &mut Report, rng: &mut ChaCha8Rng) {
    let labels = su2_labels(4);
    let normalized: Vec<_> = labels.iter().map(|&(a, b, k)| normalized_su2(a, b, k).expect("valid label")).collect();
    let g = gram_su2(&normalized, 24, 24);
    for (i, l) in labels.iter().enumerate() {
        let off = (0..labels.len()).filter(|&j| j != i).map(|j| g[i][j].norm()).fold(0.0, f64::max);
        r.compare("gram", format!("n0={} n={} k={} diagonal", l.0, l.1, l.2), g[i][i], c(1.0, 0.0));
        r.compare_real("gram", format!("n0={} n={} k={} max off-diagonal", l.0, l.1, l.2), off, 0.0);
    }
    let raw: Vec<_> = labels.iter().map(|&(a, b, k)| harmonic_su2(a, b, k).expect("valid label").poly.to_numeric()).collect();
    let g = gram_su2(&raw, 24, 24);
    for (i, &(n0, n, k)) in labels.iter().enumerate() {
        r.compare_real("norm", format!("n0={n0} n={n} k={k}"), norm_su2_closed(n0, n, k).expect("valid label"), g[i][i].re);
    }
    for (n0, n, k) in su2_labels(6) {
        let h = harmonic_su2(n0, n, k).expect("valid label");
        let up = lie_act_su2(LieGen::Xplus, &h.poly);
        let ok = if k < n {
            up == harmonic_su2(n0, n, k + 1).expect("valid label").poly.scale(&GaussQ::int((n - k) as i128))
        } else {
            up.is_zero()
        };
        r.holds("ladder", format!("n0={n0} n={n} k={k}"), ok);
    }
    for trial in 0..10 {
        let (n0, n, k) = labels[rng.gen_range(0..labels.len())];
        let k0 = SU2Point::random(rng);
        let e = normalized_su2(n0, n, k).expect("valid label");
        match haar_integrate_su2(|p| c(e.eval(&k0.mul(p).coords()).norm_sqr(), 0.0), &haar_spec()) {
            Ok(v) => r.compare("haar_invariance", format!("trial={trial} n0={n0} n={n} k={k}"), v, c(1.0, 0.0)),
            Err(_) => r.failed("haar_invariance", format!("trial={trial}")),
        }
    }
    for a in -3..=3i64 {
        for b in -3..=3i64 {
            let (ea, eb) = (harmonic_so2(a), harmonic_so2(b));
            let ip = circle_integrate(|t| ea.eval_angle(t) * eb.eval_angle(t).conj(), 16);
            r.compare("so2_gram", format!("a={a} b={b}"), ip, c(if a == b { 1.0 } else { 0.0 }, 0.0));
        }
    }
}

/// Admissible (place, n₀, n) with n ≤ 6 and |n₀| ≤ 2.
fn arch_types() -> Vec<(Place, i64, i64)> {
    let mut out = Vec::new();
    for n0 in -2..=2i64 {
        for n in (n0.abs()..=6).step_by(2) {
            out.push((Place::ComplexPlace, n0, n));
        }
    }
    for n0 in 0..=1i64 {
        for n in -6..=6i64 {
            if (n - n0) % 2 == 0 {
                out.push((Place::RealPlace, n0, n));
            }
        }
    }
    out
}

fn random_arch(rng: &mut ChaCha8Rng) -> (Place, i64, i64) {
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(0..=8i64);
        (Place::ComplexPlace, n - 2 * rng.gen_range(0..=n), n)
    } else {
        let n0 = rng.gen_range(0..=1i64);
        let n = (n0 + 2 * rng.gen_range(0..=4i64)) * if rng.gen_bool(0.5) { 1 } else { -1 };
        (Place::RealPlace, n0, n)
    }
}

fn arch(r: &mut Report, rng: &mut ChaCha8Rng) {
    for i in 0..200 {
        let (place, n0, n) = random_arch(rng);
        let p = ArchParams::new(place, rng.gen_range(-3.0..3.0), n0, c(0.0, rng.gen_range(-20.0..20.0))).expect("valid");
        let key = format!("#{i:03} {place:?} n0={n0} n={n} mu={:.6} y={:.6}", p.mu, p.s.im);
        match mu_arch(&p, n) {
            Ok(m) => r.compare_real("unitarity", key.clone(), m.value.norm(), 1.0),
            Err(_) => r.failed("unitarity", key.clone()),
        }
        if i < 100 {
            match mu_arch_derivative(&p, n, 1e-5) {
                Ok(d) => {
                    r.upper_bound("derivative_bound", key.clone(), d.exact.norm(), d.bound);
                    r.compare("finite_difference", key, d.exact, d.finite_difference);
                }
                Err(_) => r.failed("derivative_bound", key),
            }
        }
    }
    let kappas: Vec<SU2Point> = (0..4).map(|_| SU2Point::random(rng)).collect();
    let svals = [c(0.25, 0.0), c(0.1, 0.6), c(-0.2, 0.3), c(0.35, -1.1), c(0.05, 2.0)];
    for (place, n0, n) in arch_types() {
        for s in svals {
            let p = ArchParams::new(place, 0.3, n0, s).expect("valid");
            let key = format!("{place:?} n0={n0} n={n} s={s}");
            match (mu_arch(&p, n), mu_arch_oracle(&p, n, &kappas)) {
                (Ok(m), Ok(o)) => r.compare("oracle", key, m.value, o),
                _ => r.failed("oracle", key),
            }
        }
    }
    let spec = QuadratureSpec::default();
    for nu in [c(0.5, 0.0), c(0.0, 3.0), c(1.3, -0.7), c(2.0, 5.0)] {
        for y in [0.5, 1.0, 2.5] {
            let key = format!("nu={nu} y={y}");
            match (bessel_k(nu, y), bessel_k_squared_form(nu, y, &spec), bessel_k(-nu, y)) {
                (Ok(a), Ok(b), Ok(m)) => {
                    r.compare("bessel_forms", key.clone(), a, b);
                    r.compare("bessel_symmetry", key, a, m);
                }
                _ => r.failed("bessel_forms", key),
            }
        }
    }
    for kind in [GammaFactorKind::Complex, GammaFactorKind::Real] {
        for a in [1.0, 1.25, 1.5, 1.75] {
            for y in [0.0, 1.0, 4.0] {
                let w = c(1.0, 2.0 * y);
                let key = format!("{kind:?} a={a} w={w}");
                match (kernel_ka(kind, a, w), kernel_ka_direct(kind, a, w, &spec)) {
                    (Ok(x), Ok(d)) => r.compare("kernel", key, x, d),
                    _ => r.failed("kernel", key),
                }
            }
        }
        for y in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            // nonzero: the best value is resolved by the independent quadrature
            let w = c(1.0, 2.0 * y);
            let ok = kernel_nonvanishing_scan(kind, w)
                .and_then(|(a, v)| Ok((v, kernel_ka_direct(kind, a, w, &spec)?, kernel_ka(kind, a, w)?)))
                .map(|(v, d, k)| v > 0.0 && (d - k).norm() < 1e-3 * v)
                .unwrap_or(false);
            r.holds("kernel_nonvanishing", format!("{kind:?} y={y}"), ok);
        }
    }
}

/// One parameter set per ramification case at prime p.
pub fn finite_cases(p: u64, s: C64, mu: f64, c_psi: u32, pick: usize) -> Result<Vec<FiniteParams>> {
    let psi = AddChar::new(p, c_psi)?;
    let c1 = MultChar::all_of_conductor(p, 1);
    let c2 = MultChar::all_of_conductor(p, 2);
    let x1 = c1[pick % c1.len()];
    let x2 = c2[pick % c2.len()];
    let one = MultChar::trivial(p);
    Ok(vec![
        FiniteParams::new(s, mu, x1, x2, psi)?,
        FiniteParams::new(s, mu, x2, one, psi)?,
        FiniteParams::new(s, mu, one, x1, psi)?,
        FiniteParams::new(s, mu, one, one, psi)?,
    ])
}

fn padic(r: &mut Report, rng: &mut ChaCha8Rng) {
    for p in [3u64, 5, 7] {
        for c_psi in [0u32, 1] {
            let psi = AddChar::new(p, c_psi).expect("valid");
            for m in 1..=3u32 {
                if p.pow(m) > 343 {
                    continue;
                }
                for chi in MultChar::all_of_conductor(p, m) {
                    let key = format!("p={p} cpsi={c_psi} m={m} e={}", chi.exponent);
                    let (g, gi) = match (g_normalized(&chi, &psi), g_normalized(&chi.inverse(), &psi)) {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => {
                            r.failed("gauss_modulus", key);
                            continue;
                        }
                    };
                    r.compare_real("gauss_modulus", key.clone(), g.norm(), 1.0);
                    r.compare("gauss_inverse", key.clone(), gi, chi.at_minus_one() * g.conj());
                    let n0 = -(c_psi as i32) - m as i32;
                    for n in n0 - 2..=n0 + 2 {
                        if n == n0 {
                            continue;
                        }
                        match gauss_integral(&chi, &psi, n) {
                            Ok(v) => r.compare("gauss_support", format!("{key} n={n}"), v, c(0.0, 0.0)),
                            Err(_) => r.failed("gauss_support", format!("{key} n={n}")),
                        }
                    }
                }
            }
        }
    }

    for p in [3u64, 5] {
        let psi = AddChar::new(p, 1).expect("valid");
        let mut atoms = vec![Atom::Tail { n: -1 }, Atom::Tail { n: 2 }, Atom::Char { chi: MultChar::trivial(p), n: 1 }];
        for m in 1..=2 {
            let all = MultChar::all_of_conductor(p, m);
            atoms.push(Atom::Char { chi: all[rng.gen_range(0..all.len())], n: rng.gen_range(-2..=1) });
        }
        for a in atoms {
            let f = match fourier_atom(&SimpleFunction::atom(a), &psi) {
                Ok(f) => f,
                Err(_) => {
                    r.failed("fourier_pointwise", format!("p={p} {a:?}"));
                    continue;
                }
            };
            let mut pts = vec![Point::zero()];
            for v in -6..=6 {
                for _ in 0..2 {
                    let mut u = rng.gen_range(1..(p * p) as i128);
                    if u % p as i128 == 0 {
                        u += 1;
                    }
                    pts.push(Point::new(v, if rng.gen_bool(0.5) { u } else { -u }));
                }
            }
            for x in pts {
                let key = format!("p={p} {a:?} x={x:?}");
                match (f.eval(&x), fourier_atom_pointwise(&a, &psi, &x)) {
                    (Ok(cl), Ok(b)) => r.compare("fourier_pointwise", key, cl, b),
                    _ => r.failed("fourier_pointwise", key),
                }
            }
        }
    }

    for p in [5u64, 7] {
        let psi = AddChar::new(p, rng.gen_range(0..=1)).expect("valid");
        let mut f = SimpleFunction::default();
        f.add_term(Atom::Tail { n: rng.gen_range(-1..=2) }, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        for m in 1..=2 {
            let all = MultChar::all_of_conductor(p, m);
            f.add_term(Atom::Char { chi: all[rng.gen_range(0..all.len())], n: rng.gen_range(-2..=2) }, c(rng.gen_range(-1.0..1.0), 1.0));
        }
        let ff = fourier_atom(&f, &psi).and_then(|g| fourier_atom(&g, &psi));
        let refl = f.reflect();
        match ff {
            Ok(ff) => {
                for (a, v) in &refl.terms {
                    let got = ff.terms.get(a).copied().unwrap_or(c(0.0, 0.0));
                    r.compare("double_transform", format!("p={p} {a:?}"), got, *v);
                }
                r.compare_real("double_transform", format!("p={p} atom count"), ff.terms.len() as f64, refl.terms.len() as f64);
            }
            Err(_) => r.failed("double_transform", format!("p={p}")),
        }
    }

    let kappas = |p: u64| KMat::samples_to_depth(p, 8);
    for p in [3u64, 5, 7] {
        let ks = kappas(p);
        for (j, s) in [c(0.25, 0.0), c(0.2, 0.1), c(-0.13, 0.7)].into_iter().enumerate() {
            for fp in finite_cases(p, s, 0.2, 1, j + 1).expect("valid") {
                let cc = fp.conductor();
                for n in cc..=cc + 3 {
                    let key = format!("p={p} case={} s={s} n={n}", fp.case().number());
                    match (mu_finite(&fp, n), mu_finite_oracle(&fp, n, &ks)) {
                        (Ok(a), Ok(b)) => r.compare("oracle", key, a, b),
                        _ => r.failed("oracle", key),
                    }
                }
            }
        }
    }

    for i in 0..200 {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let y = rng.gen_range(-10.0..10.0);
        let cases = finite_cases(p, c(0.0, y), rng.gen_range(-2.0..2.0), rng.gen_range(0..=1), rng.gen_range(0..50)).expect("valid");
        let fp = &cases[i % 4];
        let n = fp.conductor() + rng.gen_range(0..=3);
        let key = format!("#{i:03} p={p} case={} y={y:.6} n={n}", fp.case().number());
        match mu_finite(fp, n) {
            Ok(m) => r.compare_real("unitarity", key.clone(), m.norm(), 1.0),
            Err(_) => r.failed("unitarity", key.clone()),
        }
        if i < 100 {
            let h = 1e-5;
            let fd = mu_finite(&fp.with_s(c(h, y)), n)
                .and_then(|up| mu_finite(&fp.with_s(c(-h, y)), n).map(|down| (up - down) / (2.0 * h)));
            match (mu_finite_derivative(fp, n), fd) {
                (Ok(d), Ok(fd)) => {
                    r.upper_bound("derivative_bound", key.clone(), d.norm(), derivative_bound_finite(fp, n));
                    r.compare("finite_difference", key, d, fd);
                }
                _ => r.failed("derivative_bound", key),
            }
        }
    }

    for p in [3u64, 5] {
        for fp in finite_cases(p, c(0.0, 0.0), 0.0, 1, 1).expect("valid") {
            let cc = fp.conductor();
            let phis: Vec<_> = (cc..=cc + 3).map(|n| classical_vector(&fp, n)).collect::<Result<_>>().expect("valid");
            let case = fp.case().number();
            match gram_by_cells(&phis, &fp.psi) {
                Ok(g) => {
                    for i in 0..phis.len() {
                        for j in 0..phis.len() {
                            let want = if i == j { 1.0 } else { 0.0 };
                            r.compare("norm", format!("p={p} case={case} <Phi{},Phi{}>", cc + i as u32, cc + j as u32), g[i][j], c(want, 0.0));
                        }
                    }
                }
                Err(_) => r.failed("norm", format!("p={p} case={case}")),
            }
            for (k, phi) in phis.iter().enumerate() {
                let n = cc + k as u32;
                let key = format!("p={p} case={case} n={n}");
                r.holds("level", format!("{key} at level n"), level_membership(phi, &fp, n).unwrap_or(false));
                if n > 0 {
                    r.holds("level", format!("{key} not at level n-1"), !level_membership(phi, &fp, n - 1).unwrap_or(true));
                }
            }
        }
    }
}

/// ‖Φₙ‖² for the displayed constants; diagnostic only.
pub fn displayed_vector_norms(p: u64) -> Result<Vec<(u8, u32, f64)>> {
    let mut out = Vec::new();
    for fp in finite_cases(p, c(0.0, 0.0), 0.0, 1, 1)? {
        let cc = fp.conductor();
        for n in cc..=cc + 3 {
            let phi = classical_vector_with(&fp, n, VectorConstants::Displayed)?;
            out.push((fp.case().number(), n, phi.inner(&phi, &fp.psi).re));
        }
    }
    Ok(out)
}

fn random_local(rng: &mut ChaCha8Rng, place: usize) -> LocalElement {
    match place {
        0 => LocalElement::Real(rng.gen_range(-50.0..50.0) * rng.gen::<f64>().powi(3)),
        1 => LocalElement::Complex(c(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)) * rng.gen::<f64>().powi(3)),
        _ => {
            let p = [3u64, 5, 7][rng.gen_range(0..3)];
            let mut num = rng.gen_range(-2000i128..2000);
            if num == 0 {
                num = 1;
            }
            let den = (p as i128).pow(rng.gen_range(0..5)) * rng.gen_range(1i128..20);
            LocalElement::PAdic { p, num, den }
        }
    }
}

fn global(r: &mut Report, rng: &mut ChaCha8Rng) {
    for i in 0..100 {
        let y = 0.1 + 19.9 * i as f64 / 99.0;
        let key = format!("y={y:.6}");
        match mu_field(c(0.0, y)) {
            Ok(m) => r.compare_real("field_unitarity", key, m.norm(), 1.0),
            Err(_) => r.failed("field_unitarity", key),
        }
    }
    for i in 0..20 {
        let mut fin = BTreeMap::new();
        for p in [2u64, 3, 5, 7, 11] {
            if rng.gen_bool(0.4) {
                fin.insert(p, rng.gen_range(0..4));
            }
        }
        let y = rng.gen_range(0.1..20.0);
        let kt = GlobalKType::new(2 * rng.gen_range(-3..=3), fin).expect("valid");
        let key = format!("#{i:02} y={y:.6} {kt:?}");
        match mu_global_at(c(0.0, y), &kt) {
            Ok(m) => r.compare_real("global_unitarity", key, m.norm(), 1.0),
            Err(_) => r.failed("global_unitarity", key),
        }
    }
    match residue_at_one() {
        Ok(v) => r.compare_real("residue_at_one", "Lambda at 1", v, 1.0),
        Err(_) => r.failed("residue_at_one", "Lambda at 1"),
    }
    match residue_constant() {
        Ok(v) => r.compare_real("residue_constant", "-Res0/(2 Lambda(2))", v, 3.0 / PI),
        Err(_) => r.failed("residue_constant", "-Res0/(2 Lambda(2))"),
    }
    for place in 0..3 {
        for i in 0..100 {
            let x = random_local(rng, place);
            let key = format!("#{i:03} {x:?}");
            match height_wn(&x) {
                Ok(h) => {
                    r.upper_bound("height_bound", key.clone(), h, 1.0);
                    r.compare_real("height_closed", key, h, height_wn_closed(&x));
                }
                Err(_) => r.failed("height_bound", key),
            }
        }
    }
    let kt = GlobalKType::default();
    for (i, y) in [0.3, 0.7, 1.9, 3.0, 6.5].into_iter().enumerate() {
        let cc = 1.5 + i as f64;
        let key = format!("y={y} c={cc}");
        let off = |sig: f64| {
            let s = c(sig, y);
            let m = mu_global_at(s, &kt)?;
            maass_selberg(s, cc, 1.0, m.norm(), m.conj(), 0.0, true)
        };
        let on = mu_field(c(0.0, y)).and_then(|m| {
            let d = m * mu_field_log_derivative(c(0.0, y))?;
            maass_selberg_onaxis(y, cc, m, d, true)
        });
        match (richardson_to_zero(off, 1e-2), on) {
            (Ok(a), Ok(b)) => r.compare_real("maass_selberg", key, a, b),
            _ => r.failed("maass_selberg", key),
        }
    }
    for place in [Place::RealPlace, Place::ComplexPlace] {
        for a in [3u32, 4] {
            let sums: Result<Vec<f64>> = [10u32, 20, 40, 80].iter().map(|&k| sobolev_weight_sum(a, k as f64, k, place)).collect();
            match sums {
                Ok(s) => {
                    let d: Vec<f64> = s.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
                    for k in 0..d.len() - 1 {
                        r.holds("sobolev_shrinking", format!("{place:?} A={a} step={k}"), d[k + 1] < d[k] || d[k + 1] == 0.0);
                    }
                    r.compare_real("sobolev_tail", format!("{place:?} A={a}"), d[d.len() - 1] / s[s.len() - 1], 0.0);
                }
                Err(_) => r.failed("sobolev_tail", format!("{place:?} A={a}")),
            }
        }
    }
}

fn classical(r: &mut Report, rng: &mut ChaCha8Rng) {
    let spec = QuadratureSpec::default();
    for i in 0..20 {
        let a = rng.gen_range(0.5..3.0);
        let deg = rng.gen_range(0..=4u32);
        let coeffs: Vec<(u32, C64)> = (0..=deg).map(|n| (n, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect();
        let f = PolyGaussian1D::new(a, coeffs).expect("positive width");
        let fh = ft_1d(&f);
        let key = format!("#{i:02} a={a:.6} deg={deg}");
        match (quad_line(|x| c(f.eval(x).norm_sqr(), 0.0), 60.0, &spec), quad_line(|x| c(fh.eval(x).norm_sqr(), 0.0), 60.0, &spec)) {
            (Ok(x), Ok(y)) => r.compare_real("plancherel", key.clone(), x.re, y.re),
            _ => r.failed("plancherel", key.clone()),
        }
        r.compare_real("double_transform", key, ft_1d(&fh).coeff_distance(&f.reflect()), 0.0);
    }
    let grid = Grid::sample(|x| if x.abs() <= 1.0 { 1.0 } else { 0.0 }, 0.0125);
    for p in [1.0, 2.0] {
        let eps = [0.4, 0.2, 0.1, 0.05];
        let d: Result<Vec<f64>> = eps.iter().map(|&e| mollify_deficit(&grid, e, p)).collect();
        match d {
            Ok(d) => {
                for k in 0..d.len() - 1 {
                    r.holds("mollify_decreasing", format!("p={p} eps={}->{}", eps[k], eps[k + 1]), d[k + 1] < d[k]);
                }
            }
            Err(_) => r.failed("mollify_decreasing", format!("p={p}")),
        }
    }
}
