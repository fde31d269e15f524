use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use intertwine::arch::{mu_arch, mu_arch_derivative, ArchParams, Place};
use intertwine::padic::{
    derivative_bound_finite, g_normalized, mu_finite, mu_finite_derivative, AddChar, FiniteParams, MultChar,
};
use intertwine::report::Report;
use intertwine::suites::{finite_cases, Suite};
use intertwine::Error;
use num_complex::Complex64 as C64;
use serde_json::{json, Value};

mod output;

#[derive(Parser)]
#[command(name = "intertwine", version, about = "Intertwining eigenvalues for GL(2) and their oracle checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run invariant suites; exit 0 iff every case passes.
    Verify(VerifyArgs),
    /// Tabulate μ(iy; n) with modulus and derivative columns.
    Mu(MuArgs),
    /// Tabulate normalized Gauss sums g(χ, ψ) for every χ of conductor 1..=m_max.
    Gauss(GaussArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Arch,
    Padic,
    Harmonics,
    Global,
    Classical,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    #[arg(long, env = "INTERTWINE_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the report(s) as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Override one tolerance, as suite.check=value.
    #[arg(long = "tol", value_name = "SUITE.CHECK=VALUE")]
    tol: Vec<String>,
    /// Print the effective tolerances as JSON and exit.
    #[arg(long)]
    tolerances: bool,
    /// Record wall time in the JSON report (makes it run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlaceArg {
    Real,
    Complex,
    Finite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct MuArgs {
    #[arg(long, value_enum)]
    place: PlaceArg,
    /// Parity (real) or central type (complex) of the inducing data.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    n0: i64,
    /// The real parameter μ(ω⁻¹ξ²).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu: f64,
    /// K-types: a comma list and/or inclusive ranges a..b.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    n: String,
    /// Spectral parameters y (s = iy): a comma list.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    y: String,
    #[arg(long)]
    p: Option<u64>,
    /// Ramification case 1..=4 with canned characters of conductor 1 and 2.
    #[arg(long)]
    case: Option<u8>,
    /// ξ as conductor:exponent; overrides --case.
    #[arg(long)]
    xi: Option<String>,
    /// ωξ⁻¹ as conductor:exponent; overrides --case.
    #[arg(long)]
    omega_xi_inv: Option<String>,
    #[arg(long, default_value_t = 0)]
    psi_c: u32,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(clap::Args)]
struct GaussArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m_max: u32,
    #[arg(long, default_value_t = 0)]
    psi_c: u32,
    #[arg(long)]
    allow_p2: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

/// Failures that should exit with 2 rather than 1.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Mu(a) => mu(a).map(|_| true),
        Command::Gauss(a) => gauss(a).map(|_| true),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // a closed downstream pipe (`| head`) is not a failure
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn selected(s: SuiteArg) -> Vec<Suite> {
    match s {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Arch => vec![Suite::Arch],
        SuiteArg::Padic => vec![Suite::Padic],
        SuiteArg::Harmonics => vec![Suite::Harmonics],
        SuiteArg::Global => vec![Suite::Global],
        SuiteArg::Classical => vec![Suite::Classical],
    }
}

fn parse_overrides(items: &[String]) -> anyhow::Result<BTreeMap<String, BTreeMap<String, f64>>> {
    let mut out: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for item in items {
        let (key, val) = item.split_once('=').ok_or_else(|| usage(format!("bad --tol {item}")))?;
        let (suite, check) = key.split_once('.').ok_or_else(|| usage(format!("bad --tol key {key}")))?;
        let suite: Suite = suite.parse().map_err(|e: Error| usage(e.to_string()))?;
        if !suite.default_tolerances().contains_key(check) {
            return Err(usage(format!("suite {suite} has no check {check}")));
        }
        let v: f64 = val.parse().map_err(|_| usage(format!("bad tolerance {val}")))?;
        if !(v >= 0.0) {
            return Err(usage(format!("tolerance {val} must be nonnegative")));
        }
        out.entry(suite.name().into()).or_default().insert(check.into(), v);
    }
    Ok(out)
}

fn verify(a: VerifyArgs) -> anyhow::Result<bool> {
    let overrides = parse_overrides(&a.tol)?;
    let suites = selected(a.suite);
    if a.tolerances {
        let mut all = serde_json::Map::new();
        for s in &suites {
            let mut t = s.default_tolerances();
            t.extend(overrides.get(s.name()).cloned().unwrap_or_default());
            all.insert(s.name().into(), serde_json::to_value(t)?);
        }
        println!("{}", output::to_json(&Value::Object(all))?);
        return Ok(true);
    }
    let mut reports: Vec<Report> = Vec::new();
    let mut ok = true;
    for s in suites {
        let start = Instant::now();
        let mut r = s.run(a.seed, overrides.get(s.name()).unwrap_or(&BTreeMap::new()))?;
        let secs = start.elapsed().as_secs_f64();
        if a.timing {
            r.wall_time = Some(secs);
        }
        let failed = r.failures().count();
        println!("{}: {} cases, {} failed", r.suite, r.cases.len(), failed);
        for f in r.failures().take(10) {
            println!("  FAIL {} [{}] diff={:e}", f.check, f.inputs, f.abs_diff);
        }
        eprintln!("{}: {:.2}s", r.suite, secs);
        ok &= r.passed;
        reports.push(r);
    }
    if let Some(path) = a.json {
        let v = if reports.len() == 1 { serde_json::to_value(&reports[0])? } else { serde_json::to_value(&reports)? };
        std::fs::write(&path, output::to_json(&v)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ok)
}

fn parse_ints(s: &str) -> anyhow::Result<Vec<i64>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: i64 = lo.parse().map_err(|_| usage(format!("bad range {part}")))?;
            let hi: i64 = hi.trim_start_matches('=').parse().map_err(|_| usage(format!("bad range {part}")))?;
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| usage(format!("bad integer {part}")))?);
        }
    }
    if out.is_empty() {
        return Err(usage("empty list"));
    }
    Ok(out)
}

fn parse_floats(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|_| usage(format!("bad number {p}"))))
        .collect()
}

fn parse_char(p: u64, s: &str) -> anyhow::Result<MultChar> {
    let (m, e) = s.split_once(':').ok_or_else(|| usage(format!("character {s} is not conductor:exponent")))?;
    let m: u32 = m.parse().map_err(|_| usage(format!("bad conductor {m}")))?;
    let e: i64 = e.parse().map_err(|_| usage(format!("bad exponent {e}")))?;
    if m == 0 {
        return Ok(MultChar::trivial(p));
    }
    MultChar::new(p, m, e).map_err(|err| usage(err.to_string()))
}

fn core_err(e: Error) -> anyhow::Error {
    // every core error here comes from an inadmissible parameter combination
    usage(e.to_string())
}

fn finite_params(a: &MuArgs, y: f64) -> anyhow::Result<FiniteParams> {
    let p = a.p.ok_or_else(|| usage("--place finite needs --p"))?;
    if p == 2 {
        return Err(usage("p = 2 is not supported by mu"));
    }
    let s = C64::new(0.0, y);
    let mut fp = match a.case {
        Some(k @ 1..=4) => finite_cases(p, s, a.mu, a.psi_c, 1).map_err(core_err)?[k as usize - 1],
        Some(k) => return Err(usage(format!("case {k} not in 1..=4"))),
        None => FiniteParams::unramified(p, s, a.mu, a.psi_c).map_err(core_err)?,
    };
    if let Some(x) = &a.xi {
        fp.xi = parse_char(p, x)?;
    }
    if let Some(x) = &a.omega_xi_inv {
        fp.omega_xi_inv = parse_char(p, x)?;
    }
    FiniteParams::new(s, a.mu, fp.xi, fp.omega_xi_inv, AddChar::new(p, a.psi_c).map_err(core_err)?).map_err(core_err)
}

fn mu(a: MuArgs) -> anyhow::Result<()> {
    let ns = parse_ints(&a.n)?;
    let ys = parse_floats(&a.y)?;
    let mut rows = Vec::new();
    for &n in &ns {
        for &y in &ys {
            let (value, deriv, bound, case) = match a.place {
                PlaceArg::Real | PlaceArg::Complex => {
                    let place = if a.place == PlaceArg::Real { Place::RealPlace } else { Place::ComplexPlace };
                    let p = ArchParams::new(place, a.mu, a.n0, C64::new(0.0, y)).map_err(core_err)?;
                    let v = mu_arch(&p, n).map_err(core_err)?.value;
                    let d = mu_arch_derivative(&p, n, 1e-5).map_err(core_err)?;
                    (v, d.exact, d.bound, None)
                }
                PlaceArg::Finite => {
                    let fp = finite_params(&a, y)?;
                    let n = u32::try_from(n).map_err(|_| usage(format!("finite type {n} must be nonnegative")))?;
                    let v = mu_finite(&fp, n).map_err(core_err)?;
                    let d = mu_finite_derivative(&fp, n).map_err(core_err)?;
                    (v, d, derivative_bound_finite(&fp, n), Some(fp.case().number()))
                }
            };
            rows.push(json!({
                "place": match a.place { PlaceArg::Real => "real", PlaceArg::Complex => "complex", PlaceArg::Finite => "finite" },
                "p": a.p,
                "case": case,
                "n0": a.n0,
                "mu": a.mu,
                "n": n,
                "y": y,
                "re": value.re,
                "im": value.im,
                "modulus": value.norm(),
                "deriv_re": deriv.re,
                "deriv_im": deriv.im,
                "deriv_abs": deriv.norm(),
                "deriv_bound": bound,
            }));
        }
    }
    let cols = ["place", "p", "case", "n0", "mu", "n", "y", "re", "im", "modulus", "deriv_re", "deriv_im", "deriv_abs", "deriv_bound"];
    emit(&rows, &cols, a.format)
}

fn gauss(a: GaussArgs) -> anyhow::Result<()> {
    if a.p == 2 && !a.allow_p2 {
        return Err(usage("p = 2 needs --allow-p2"));
    }
    if !intertwine::padic::is_prime(a.p) {
        return Err(usage(format!("{} is not prime", a.p)));
    }
    if a.m_max == 0 || a.p.checked_pow(a.m_max).map_or(true, |q| q > 1 << 20) {
        return Err(usage("need 1 ≤ m_max with p^m_max ≤ 2^20"));
    }
    let psi = AddChar::new(a.p, a.psi_c).map_err(core_err)?;
    let mut rows = Vec::new();
    for m in 1..=a.m_max {
        for chi in MultChar::all_of_conductor(a.p, m) {
            let g = g_normalized(&chi, &psi).map_err(|e| anyhow!(e))?;
            rows.push(json!({
                "p": a.p,
                "m": m,
                "exponent": chi.exponent,
                "odd": chi.at_minus_one() < 0.0,
                "psi_c": a.psi_c,
                "re": g.re,
                "im": g.im,
                "modulus": g.norm(),
            }));
        }
    }
    emit(&rows, &["p", "m", "exponent", "odd", "psi_c", "re", "im", "modulus"], a.format)
}

fn emit(rows: &[Value], cols: &[&str], format: Format) -> anyhow::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => writeln!(out, "{}", output::to_json(&Value::Array(rows.to_vec()))?)?,
        Format::Csv => {
            writeln!(out, "{}", cols.join(","))?;
            for r in rows {
                let line: Vec<String> = cols.iter().map(|c| output::csv_cell(&r[*c])).collect();
                writeln!(out, "{}", line.join(","))?;
            }
        }
    }
    Ok(())
}
