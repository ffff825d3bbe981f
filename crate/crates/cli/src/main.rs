//! `qcurve`: command-line front end for the recursion engine, the WKB checks
//! and the oracles.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qcurve::algebra::parse::parse_constant;
use qcurve::algebra::FieldElement;
use qcurve::certify::{run_criterion, CRITERIA};
use qcurve::curve::SpectralCurve;
use qcurve::error::{OracleError, RecursionError};
use qcurve::export;
use qcurve::oracles;
use qcurve::recursion::{x_expansion, Engine, Omega};
use qcurve::wave::{t_shift, wave_expansion, PrimitiveChoice};
use qcurve::wkb::{gw_wave, reconstruct_operator, verify_quantum_curve, Flavour, OperatorPolynomial};

const MAX_CHI: i64 = 8;
const MAX_DEPTH: u32 = 64;
const MAX_K: usize = 6;

#[derive(Parser)]
#[command(name = "qcurve", version, about = "Exact topological recursion and quantum curves")]
struct Cli {
    /// Curve file, or one of the built-in names `catalan`, `airy`, `gw`.
    #[arg(long, global = true, default_value = "catalan")]
    curve: String,
    /// Write a JSON sidecar with exact rational strings.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the tensor data of ω^g_n.
    Omega { g: usize, n: usize },
    /// Print the table M_{g,n}(μ) read off the x-expansion.
    Expand {
        g: usize,
        n: usize,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Print S_0..S_K.
    Wave {
        #[arg(long)]
        k: usize,
        /// Primitive vanishing at this point instead of the principal part.
        #[arg(long)]
        basepoint: Option<String>,
        /// Shift the wave by e^{tħ d/dx}.
        #[arg(long)]
        t: Option<String>,
    },
    /// Residual ledger of an operator on the recursion wave.
    WkbCheck {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        k: usize,
        /// Shift parameter for difference operators.
        #[arg(long, default_value = "1/2")]
        t: String,
    },
    /// Reconstruct an operator from the recursion wave.
    Quantize {
        #[arg(long)]
        k: usize,
        /// Degree bounds `dx,dy`.
        #[arg(long, value_parser = parse_bounds)]
        bounds: (u32, u32),
        #[arg(long)]
        difference: bool,
    },
    /// Run an oracle: catalan N | stirling N K | dessin V E | belyi G MU.. |
    /// hermite N | wave-closed E | bernoulli N | gw-psi0 K | gw-ratio D | toda M.
    Oracle { name: String, args: Vec<String> },
    /// Run the acceptance suite.
    Certify {
        /// Comma-separated criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Include wall-clock times (the report is then not reproducible byte for byte).
        #[arg(long)]
        timing: bool,
    },
}

fn parse_bounds(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected dx,dy")?;
    Ok((a.trim().parse().map_err(|_| "bad dx")?, b.trim().parse().map_err(|_| "bad dy")?))
}

enum Failure {
    Usage(String),
    Guard(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Guard(_) => 3,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn from_recursion(e: RecursionError) -> Failure {
    Failure::Usage(e.to_string())
}

fn from_oracle(e: OracleError) -> Failure {
    match e {
        OracleError::Guard(m) => Failure::Guard(m),
        other => Failure::Usage(other.to_string()),
    }
}

struct Report {
    text: String,
    json: Value,
    /// Set when a requested check failed; the report is still printed.
    failed: Option<String>,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, failed: None }
    }
}

fn load_curve(spec: &str) -> Result<SpectralCurve, Failure> {
    let path = PathBuf::from(spec);
    if path.exists() {
        let text = std::fs::read_to_string(&path).map_err(usage)?;
        return SpectralCurve::from_text(&text).map_err(usage);
    }
    match spec {
        "catalan" => Ok(SpectralCurve::catalan()),
        "airy" => Ok(SpectralCurve::airy()),
        "gw" => Ok(SpectralCurve::gw(FieldElement::one())),
        _ => Err(Failure::Usage(format!("no curve file `{spec}`"))),
    }
}

fn rational(s: &str) -> Result<FieldElement, Failure> {
    parse_constant(s, &Default::default()).map_err(|e| Failure::Usage(format!("`{s}`: {e}")))
}

fn check_gn(g: usize, n: usize) -> Result<(), Failure> {
    let chi = 2 * g as i64 - 2 + n as i64;
    if n == 0 || chi < -1 {
        return Err(Failure::Usage(format!("(g, n) = ({g}, {n}) needs n ≥ 1 and 2g − 2 + n ≥ −1")));
    }
    if chi > MAX_CHI {
        return Err(Failure::Guard(format!("2g − 2 + n ≤ {MAX_CHI} is required")));
    }
    Ok(())
}

fn check_k(k: usize) -> Result<(), Failure> {
    if k > MAX_K {
        return Err(Failure::Guard(format!("K ≤ {MAX_K} is required")));
    }
    Ok(())
}

fn omega(curve: SpectralCurve, g: usize, n: usize) -> Result<Report, Failure> {
    check_gn(g, n)?;
    let e = Engine::new(curve).map_err(from_recursion)?;
    let var = e.curve().param().to_string();
    Ok(match e.omega(g, n).map_err(from_recursion)? {
        Omega::Disk(f) => {
            let s = f.to_expr(&var);
            Report::ok(format!("omega[0,1] = ({s}) d{var}\n"), json!({ "g": 0, "n": 1, "density": s }))
        }
        Omega::Cylinder => Report::ok(
            format!("omega[0,2] = d{var}1 d{var}2/({var}1 - {var}2)^2\n"),
            json!({ "g": 0, "n": 2, "density": "1/(z1 - z2)^2" }),
        ),
        Omega::Stable(w) => Report::ok(w.to_string(), export::multidifferential(&w)),
    })
}

fn expand(curve: SpectralCurve, g: usize, n: usize, depth: u32) -> Result<Report, Failure> {
    check_gn(g, n)?;
    if depth > MAX_DEPTH {
        return Err(Failure::Guard(format!("depth ≤ {MAX_DEPTH} is required")));
    }
    let e = Engine::new(curve).map_err(from_recursion)?;
    let t = x_expansion(&e, g, n, depth).map_err(from_recursion)?;
    let mut text = format!("M[{g},{n}] through |mu| = {depth}\n");
    if let Some(disk) = &t.disk_series {
        let shown: Vec<String> = disk.iter().map(|c| c.to_exact_string()).collect();
        writeln!(text, "y = sum c_m x^(-m-1), c = {}", shown.join(", ")).unwrap();
    }
    for (mu, c) in &t.entries {
        let m: Vec<String> = mu.iter().map(|v| v.to_string()).collect();
        writeln!(text, "  ({}) : {}", m.join(","), c.to_exact_string()).unwrap();
    }
    Ok(Report::ok(text, export::expansion_table(&t)))
}

fn wave(curve: SpectralCurve, k: usize, basepoint: Option<String>, t: Option<String>) -> Result<Report, Failure> {
    check_k(k)?;
    let choice = match basepoint {
        Some(q) => PrimitiveChoice::Basepoint(rational(&q)?),
        None => PrimitiveChoice::Principal,
    };
    let e = Engine::new(curve).map_err(from_recursion)?;
    let var = e.curve().param().to_string();
    let mut w = wave_expansion(&e, k, choice).map_err(from_recursion)?;
    if let Some(t) = t {
        w = t_shift(&w, k).map_err(from_recursion)?.at(&rational(&t)?);
    }
    let mut text = String::new();
    for (i, s) in w.s.iter().enumerate() {
        writeln!(text, "S_{i} = {}", s.to_expr(&var)).unwrap();
    }
    Ok(Report::ok(text, export::wave(&w, &var)))
}

fn wkb_check(curve: SpectralCurve, op: PathBuf, k: usize, t: String) -> Result<Report, Failure> {
    check_k(k)?;
    let text = std::fs::read_to_string(&op).map_err(usage)?;
    let op = OperatorPolynomial::from_text(&text).map_err(usage)?;
    let e = Engine::new(curve).map_err(from_recursion)?;
    let var = e.curve().param().to_string();
    let wave = match op.flavour {
        Flavour::Differential => wave_expansion(&e, k, PrimitiveChoice::Principal).map_err(from_recursion)?,
        Flavour::Difference => gw_wave(&e, k, &rational(&t)?).map_err(usage)?,
    };
    let ledger = verify_quantum_curve(&op, &wave, k).map_err(usage)?;
    let mut out = String::from("expected: zero residual at every order (quantum curve theorem)\n");
    write!(out, "{}", ledger.to_string().replace("hbar^", "residual hbar^")).unwrap();
    let failed =
        ledger.first_nonzero().map(|i| format!("nonzero residual at hbar^{i}: {}", ledger.orders[i].to_expr(&var)));
    Ok(Report { text: out, json: export::ledger(&ledger, &var), failed })
}

fn quantize(curve: SpectralCurve, k: usize, bounds: (u32, u32), difference: bool) -> Result<Report, Failure> {
    check_k(k)?;
    let e = Engine::new(curve).map_err(from_recursion)?;
    let w = wave_expansion(&e, k, PrimitiveChoice::Principal).map_err(from_recursion)?;
    let flavour = if difference { Flavour::Difference } else { Flavour::Differential };
    let r = reconstruct_operator(&w, flavour, bounds, k, None).map_err(usage)?;
    let text = format!("{}solution-space dimensions by order: {:?}\n", r.operator.to_text(), r.kernel_dims);
    Ok(Report::ok(text, json!({ "operator": export::operator(&r.operator), "kernel_dims": r.kernel_dims })))
}

fn int_arg<T: std::str::FromStr>(args: &[String], i: usize) -> Result<T, Failure> {
    args.get(i)
        .ok_or_else(|| Failure::Usage(format!("missing argument {}", i + 1)))?
        .parse()
        .map_err(|_| Failure::Usage(format!("argument {} is not a nonnegative integer", i + 1)))
}

fn oracle(name: &str, args: &[String]) -> Result<Report, Failure> {
    let one = |text: String, v: Value| Ok(Report::ok(text, v));
    match name {
        "catalan" => {
            let c = oracles::catalan(int_arg(args, 0)?);
            one(format!("{c}\n"), export::field(&c))
        }
        "stirling" => {
            let s = oracles::stirling_first(int_arg(args, 0)?, int_arg(args, 1)?).map_err(from_oracle)?;
            one(format!("{s}\n"), Value::String(s.to_string()))
        }
        "dessin" => {
            let d = oracles::dessin_count(int_arg(args, 0)?, int_arg(args, 1)?).map_err(from_oracle)?;
            let text = format!(
                "f•({v},{e}) = {} (closed form {})\nf({v},{e}) = {} (transitive count {})\n",
                d.disconnected,
                d.closed_form,
                d.connected,
                d.connected_direct,
                v = d.v,
                e = d.e
            );
            let v = json!({
                "v": d.v, "e": d.e,
                "disconnected": export::field(&d.disconnected),
                "closed_form": export::field(&d.closed_form),
                "connected": export::field(&d.connected),
                "connected_direct": export::field(&d.connected_direct),
            });
            let mut r = Report::ok(text, v);
            if d.disconnected != d.closed_form || d.connected != d.connected_direct {
                r.failed = Some("brute force disagrees with the closed form".into());
            }
            Ok(r)
        }
        "belyi" => {
            let g: usize = int_arg(args, 0)?;
            let mu: Vec<u32> = (1..args.len()).map(|i| int_arg(args, i)).collect::<Result<_, _>>()?;
            let c = oracles::belyi_count(g, &mu).map_err(from_oracle)?;
            one(format!("M[{g}]{mu:?} = {c}\n"), export::field(&c))
        }
        "hermite" => {
            let n: u32 = int_arg(args, 0)?;
            let h = oracles::hermite(n);
            let mut text = format!("H_{n}(x) = {}\n", h.to_expr("x"));
            let mut v = json!({ "hermite": h.to_expr("x") });
            let mut failed = None;
            if n >= 1 {
                let c = oracles::hermite_wave_check(n, n).map_err(from_oracle)?;
                writeln!(text, "scaled     = {}\npsi(x,1/N) = {}", c.scaled.to_expr("x"), c.truncation.to_expr("x"))
                    .unwrap();
                writeln!(text, "equation residual = {}", c.equation_residual.to_expr("x")).unwrap();
                v["scaled"] = json!(c.scaled.to_expr("x"));
                v["passed"] = json!(c.passed());
                if !c.passed() {
                    failed = Some("Hermite check failed".into());
                }
            }
            Ok(Report { text, json: v, failed })
        }
        "wave-closed" => {
            let e: u32 = int_arg(args, 0)?;
            let rows = oracles::wave_x_expansion_closed(e);
            let mut text = String::new();
            for (i, r) in rows.iter().enumerate() {
                writeln!(text, "x^-{}: {r}", 2 * i).unwrap();
            }
            one(text, Value::Array(rows.iter().map(export::hbar_laurent).collect()))
        }
        "bernoulli" => {
            let b = oracles::bernoulli(int_arg(args, 0)?);
            one(format!("{b}\n"), export::field(&b))
        }
        "gw-psi0" => {
            let p = oracles::gw_psi0(int_arg(args, 0)?).map_err(from_oracle)?;
            let mut text = String::new();
            for (k, c) in p.coeffs.iter().enumerate().skip(1) {
                writeln!(text, "(hbar/x)^{k}: {}", c.to_expr("t")).unwrap();
            }
            writeln!(
                text,
                "recursion psi0(t-1) = (1-(t-1/2)hbar/x) psi0(t): {}",
                if p.recursion_holds() { "holds" } else { "fails" }
            )
            .unwrap();
            let v = json!({
                "coeffs": p.coeffs.iter().map(|c| c.to_expr("t")).collect::<Vec<_>>(),
                "recursion_holds": p.recursion_holds(),
            });
            let failed = (!p.recursion_holds()).then(|| "degree-zero recursion fails".to_string());
            Ok(Report { text, json: v, failed })
        }
        "gw-ratio" => {
            let d: usize = int_arg(args, 0)?;
            let a = oracles::gw_psi_ratio(d).map_err(from_oracle)?;
            let b = oracles::gw_psi_ratio_from_equation(d).map_err(from_oracle)?;
            let text = format!("r_{d}(w) = {}\nsolvers agree: {}\n", a.to_expr("w"), a == b);
            let mut r = Report::ok(text, json!({ "d": d, "r": a.to_expr("w"), "agree": a == b }));
            if a != b {
                r.failed = Some("residue system and difference equation disagree".into());
            }
            Ok(r)
        }
        "toda" => {
            let m: usize = int_arg(args, 0)?;
            let res = oracles::toda_residuals(m).map_err(from_oracle)?;
            let mut text = String::new();
            for (k, r) in res.iter().enumerate() {
                writeln!(text, "q^{k}: {}", r.to_expr("w")).unwrap();
            }
            let failed = res.iter().any(|r| !r.is_zero()).then(|| "Toda residual is nonzero".to_string());
            Ok(Report { text, json: Value::Array(res.iter().map(|r| json!(r.to_expr("w"))).collect()), failed })
        }
        other => Err(Failure::Usage(format!("unknown oracle `{other}`"))),
    }
}

fn certify(curve: SpectralCurve, only: Vec<usize>, timing: bool) -> Result<Report, Failure> {
    let ids: Vec<usize> = if only.is_empty() { (1..=CRITERIA).collect() } else { only };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > CRITERIA) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut failing = Vec::new();
    for id in ids {
        let r = run_criterion(id, &curve);
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        if timing {
            writeln!(text, "{r}").unwrap();
        } else {
            writeln!(text, "{verdict} C{:<2} {:<28} [{}] {}", r.id, r.name, r.provenance, r.detail).unwrap();
        }
        let mut v = r.to_json();
        if !timing {
            let o = v.as_object_mut().unwrap();
            o.remove("elapsed_ms");
        }
        rows.push(v);
        if !r.passed() {
            failing.push(id);
        }
    }
    let failed = (!failing.is_empty()).then(|| format!("failing criteria: {failing:?}"));
    Ok(Report { text, json: Value::Array(rows), failed })
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let curve = || load_curve(&cli.curve);
    match cli.command {
        Command::Omega { g, n } => omega(curve()?, g, n),
        Command::Expand { g, n, depth } => expand(curve()?, g, n, depth),
        Command::Wave { k, basepoint, t } => wave(curve()?, k, basepoint, t),
        Command::WkbCheck { op, k, t } => wkb_check(curve()?, op, k, t),
        Command::Quantize { k, bounds, difference } => quantize(curve()?, k, bounds, difference),
        Command::Oracle { name, args } => oracle(&name, &args),
        Command::Certify { only, timing } => certify(curve()?, only, timing),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sidecar = cli.json.clone();
    match run(cli) {
        Ok(report) => {
            print!("{}", report.text);
            if let Some(path) = sidecar {
                let body = serde_json::to_string_pretty(&report.json).expect("JSON values serialise");
                if let Err(e) = std::fs::write(&path, body + "\n") {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            match report.failed {
                Some(m) => {
                    eprintln!("check failed: {m}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(f) => {
            let (Failure::Usage(m) | Failure::Guard(m)) = &f;
            eprintln!("error: {m}");
            if matches!(f, Failure::Usage(_)) {
                eprintln!("usage: qcurve [--curve FILE] [--json FILE] <omega|expand|wave|wkb-check|quantize|oracle|certify> ...");
            }
            ExitCode::from(f.code())
        }
    }
}
