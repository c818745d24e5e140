//! Command-line front end: `nodes`, `integrate`, `bench` and `equilibrium`.
//!
//! Exit codes: 0 on success, 1 on numerical failure, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::equilibrium::solve_support;
use crate::error::Error;
use crate::generalized::freud_rule;
use crate::hermite_asy::{hermite_rule, hermite_rule_asy};
use crate::potential::{FreudPotential, PotentialShift};
use crate::recurrence::{golub_welsch, hermite_rule_rec, stieltjes_coeffs, RecurrenceCoeffs};
use crate::rule::{QuadratureRule, WeightTag};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fastgh", version, about = "Gauss-Hermite and Freud quadrature rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute nodes and weights.
    Nodes(NodesArgs),
    /// Apply a rule to a built-in integrand.
    Integrate(IntegrateArgs),
    /// Time rule construction.
    Bench(BenchArgs),
    /// Tabulate the equilibrium measure of a field.
    Equilibrium(EquilibriumArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Weight {
    Hermite,
    Freud,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Asy,
    Rec,
    Gw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
struct RuleArgs {
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Weight::Hermite)]
    weight: Weight,
    /// Field for `--weight freud`: `x^k` or coefficients, constant first.
    #[arg(long = "V", value_name = "V")]
    v: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Skip nodes whose weights underflow.
    #[arg(long)]
    subsample: bool,
}

#[derive(Debug, clap::Args)]
struct NodesArgs {
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, clap::Args)]
struct IntegrateArgs {
    #[command(flatten)]
    rule: RuleArgs,
    /// Integrand id; see `functions()`.
    #[arg(long)]
    f: String,
    /// Also report the error against a rule with this many nodes.
    #[arg(long)]
    reference: Option<usize>,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Comma-separated methods: asy, asy-sub, rec, gw, freud:<V>, stieltjes:<V>.
    #[arg(long, value_delimiter = ',', default_value = "asy")]
    methods: Vec<String>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
}

#[derive(Debug, clap::Args)]
struct EquilibriumArgs {
    #[arg(long = "V", value_name = "V")]
    v: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Number of grid points on the support.
    #[arg(long, default_value_t = 201)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

enum Failure {
    Usage(String),
    Numeric(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPotential(m) => Failure::Usage(m),
            e => Failure::Numeric(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Built-in integrands.
pub fn functions() -> &'static [(&'static str, fn(f64) -> f64)] {
    &[
        ("one", |_| 1.0),
        ("x2", |x| x * x),
        ("x4", |x| x.powi(4)),
        ("cos", f64::cos),
        ("runge", |x| 1.0 / (1.0 + 25.0 * x * x)),
        ("runge-cos", |x| (10.0 * x).cos().exp() / (1.0 + 25.0 * x * x)),
    ]
}

fn lookup(id: &str) -> Option<fn(f64) -> f64> {
    functions().iter().find(|(k, _)| *k == id).map(|(_, f)| *f)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Nodes(a) => cmd_nodes(&a, out),
        Command::Integrate(a) => cmd_integrate(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Equilibrium(a) => cmd_equilibrium(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_NUMERIC
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_NUMERIC
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Asy => "asy",
        Method::Rec => "rec",
        Method::Gw => "gw",
    }
}

/// Moves a rule for the normalized field back to the original variable.
fn unshift(mut rule: QuadratureRule, shift: PotentialShift, coeffs: Option<Vec<f64>>) -> QuadratureRule {
    if shift.x0 != 0.0 || shift.value != 0.0 {
        let f = (-shift.value).exp();
        for x in rule.nodes.iter_mut() {
            *x += shift.x0;
        }
        for w in rule.weights.iter_mut() {
            *w *= f;
        }
    }
    if let Some(c) = coeffs {
        rule.weight_tag = WeightTag::Freud { coeffs: c };
    }
    rule
}

fn parse_field(spec: &str) -> std::result::Result<(FreudPotential, PotentialShift, Option<Vec<f64>>), Failure> {
    let (v, shift) = FreudPotential::parse(spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let original = if shift.x0 != 0.0 || shift.value != 0.0 {
        let mut c: Vec<f64> = spec.split(',').filter_map(|t| t.trim().parse().ok()).collect();
        while c.len() > 1 && c.last() == Some(&0.0) {
            c.pop();
        }
        Some(c)
    } else {
        None
    };
    Ok((v, shift, original))
}

fn build_rule(a: &RuleArgs) -> std::result::Result<QuadratureRule, Failure> {
    if a.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    match a.weight {
        Weight::Hermite => {
            if a.v.is_some() {
                return Err(Failure::Usage("--V applies only to --weight freud".into()));
            }
            let mut r = match a.method {
                Method::Auto => hermite_rule(a.n, a.subsample)?,
                Method::Asy => {
                    if a.n < crate::hermite_asy::ASY_THRESHOLD {
                        return Err(Failure::Usage(format!(
                            "--method asy needs --n >= {}",
                            crate::hermite_asy::ASY_THRESHOLD
                        )));
                    }
                    hermite_rule_asy(a.n, a.subsample)?
                }
                Method::Rec => hermite_rule_rec(a.n)?,
                Method::Gw => golub_welsch(&RecurrenceCoeffs::hermite(a.n), a.n)?,
            };
            if a.subsample && matches!(a.method, Method::Rec | Method::Gw) {
                r.drop_negligible();
            }
            Ok(r)
        }
        Weight::Freud => {
            let spec = a
                .v
                .as_deref()
                .ok_or_else(|| Failure::Usage("--weight freud requires --V".into()))?;
            let (v, shift, original) = parse_field(spec)?;
            let r = match a.method {
                Method::Auto => freud_rule(&v, a.n, a.subsample)?,
                Method::Gw => {
                    let mut r = golub_welsch(&stieltjes_coeffs(&v, a.n)?, a.n)?;
                    if a.subsample {
                        r.drop_negligible();
                    }
                    r
                }
                m => {
                    return Err(Failure::Usage(format!(
                        "--method {} is only available for the Hermite weight",
                        method_name(m)
                    )))
                }
            };
            Ok(unshift(r, shift, original))
        }
    }
}

#[derive(Serialize)]
struct NodeRow {
    k: usize,
    node: f64,
    weight: f64,
}

#[derive(Serialize)]
struct NodesMeta {
    n: usize,
    weight_tag: String,
    method: &'static str,
    subsample: bool,
    trivial_skipped: usize,
    rows: usize,
    wall_time_s: f64,
}

#[derive(Serialize)]
struct Record<M: Serialize, R: Serialize> {
    metadata: M,
    rows: Vec<R>,
}

fn sink(path: &Option<std::path::PathBuf>, out: &mut dyn Write, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `k,node,weight` with a header and 17 significant digits; `k` counts from
/// one over the full rule.
pub fn rule_to_csv(rule: &QuadratureRule) -> String {
    let mut s = String::from("k,node,weight\n");
    for (i, (x, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        s.push_str(&format!("{},{:.16e},{:.16e}\n", rule.first_index + i + 1, x, w));
    }
    s
}

fn cmd_nodes(a: &NodesArgs, out: &mut dyn Write) -> Outcome {
    let t = Instant::now();
    let rule = build_rule(&a.rule)?;
    let wall = t.elapsed().as_secs_f64();
    let text = match a.format {
        Format::Csv => rule_to_csv(&rule),
        Format::Json => {
            let rows = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .enumerate()
                .map(|(i, (&node, &weight))| NodeRow {
                    k: rule.first_index + i + 1,
                    node,
                    weight,
                })
                .collect();
            let rec = Record {
                metadata: NodesMeta {
                    n: rule.n,
                    weight_tag: rule.weight_tag.to_string(),
                    method: method_name(a.rule.method),
                    subsample: a.rule.subsample,
                    trivial_skipped: rule.trivial_skipped,
                    rows: rule.len(),
                    wall_time_s: wall,
                },
                rows,
            };
            serde_json::to_string_pretty(&rec).expect("serializable") + "\n"
        }
    };
    sink(&a.out, out, &text)
}

fn cmd_integrate(a: &IntegrateArgs, out: &mut dyn Write) -> Outcome {
    let f = lookup(&a.f).ok_or_else(|| {
        let ids: Vec<&str> = functions().iter().map(|t| t.0).collect();
        Failure::Usage(format!("unknown function {:?}; known: {}", a.f, ids.join(", ")))
    })?;
    let rule = build_rule(&a.rule)?;
    let value = rule.integrate(f);
    writeln!(out, "value: {value:.16e}")?;
    if let Some(m) = a.reference {
        let ra = RuleArgs {
            n: m,
            weight: a.rule.weight,
            v: a.rule.v.clone(),
            method: Method::Auto,
            subsample: true,
        };
        let reference = build_rule(&ra)?.integrate(f);
        writeln!(out, "reference: {reference:.16e}")?;
        writeln!(out, "error: {:.3e}", (value - reference).abs())?;
    }
    Ok(())
}

fn time_once(method: &str, n: usize) -> std::result::Result<f64, Failure> {
    let t = Instant::now();
    match method {
        "asy" => {
            hermite_rule(n, false)?;
        }
        "asy-sub" => {
            hermite_rule(n, true)?;
        }
        "rec" => {
            hermite_rule_rec(n)?;
        }
        "gw" => {
            golub_welsch(&RecurrenceCoeffs::hermite(n), n)?;
        }
        _ => {
            if let Some(spec) = method.strip_prefix("freud:") {
                let (v, _, _) = parse_field(spec)?;
                freud_rule(&v, n, false)?;
            } else if let Some(spec) = method.strip_prefix("stieltjes:") {
                let (v, _, _) = parse_field(spec)?;
                golub_welsch(&stieltjes_coeffs(&v, n)?, n)?;
            } else {
                return Err(Failure::Usage(format!("unknown bench method {method:?}")));
            }
        }
    }
    Ok(t.elapsed().as_secs_f64())
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Outcome {
    if a.repeats == 0 {
        return Err(Failure::Usage("--repeats must be positive".into()));
    }
    writeln!(out, "method,n,median_s,min_s")?;
    for m in &a.methods {
        for &n in &a.sizes {
            let mut times = Vec::with_capacity(a.repeats);
            for _ in 0..a.repeats {
                times.push(time_once(m, n)?);
            }
            times.sort_by(f64::total_cmp);
            let med = times[times.len() / 2];
            writeln!(out, "{m},{n},{med:.6e},{:.6e}", times[0])?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct EqMeta {
    field: String,
    n: usize,
    a: f64,
    b: f64,
    beta: Vec<f64>,
}

#[derive(Serialize)]
struct EqRow {
    x: f64,
    density: f64,
    cdf: f64,
}

fn cmd_equilibrium(a: &EquilibriumArgs, out: &mut dyn Write) -> Outcome {
    if a.n == 0 || a.grid < 2 {
        return Err(Failure::Usage("--n must be positive and --grid at least 2".into()));
    }
    let (v, shift, _) = parse_field(&a.v)?;
    let mu = solve_support(&v, a.n)?;
    // the measure of Q lives at the x~ scale; shifted fields move by x0 there
    let x0 = shift.x0 / crate::generalized::scale(&v, a.n);
    let rows: Vec<EqRow> = (0..a.grid)
        .map(|i| {
            let x = mu.a + (mu.b - mu.a) * i as f64 / (a.grid - 1) as f64;
            EqRow {
                x: x + x0,
                density: mu.density(x),
                cdf: mu.cdf(x),
            }
        })
        .collect();
    let meta = EqMeta {
        field: a.v.trim().to_string(),
        n: a.n,
        a: mu.a + x0,
        b: mu.b + x0,
        beta: mu.beta.clone(),
    };
    let text = match a.format {
        Format::Csv => {
            let beta: Vec<String> = meta.beta.iter().map(|b| format!("{b:.16e}")).collect();
            let mut s = format!(
                "# field={} n={} a={:.16e} b={:.16e} beta={}\nx,density,cdf\n",
                meta.field,
                meta.n,
                meta.a,
                meta.b,
                beta.join(";")
            );
            for r in &rows {
                s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", r.x, r.density, r.cdf));
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&Record { metadata: meta, rows }).expect("serializable") + "\n",
    };
    sink(&a.out, out, &text)
}
