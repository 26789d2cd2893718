//! Command-line front end. Exit codes: 0 success, 1 a verification
//! failed, 2 usage error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cbh_engine::{associative_log_oracle, classical_cbh_in_model, compressed_cbh, mirrored_cbh};
use crate::exact_arith::{bernoulli_vec, parse_rational, ExtBernoulliTable, Rational};
use crate::hexagon_solver::{
    build_f, family_i, family_ii, family_iii, residual_15b, solve_degreewise, split_residuals, AlphaTable, ParamSet,
};
use crate::pentagon_checker::{dimension_report, pentagon_check, Variant};
use crate::series_core::{BiSeries, CoeffRing};
use crate::verify::run_checks;
use crate::zeta_symbols::{drinfeld_f, solve_betas_in_theta, ThetaPoly};

pub const MAX_DEGREE: usize = 16;
pub const MAX_PENTAGON_DEGREE: usize = 10;
pub const MAX_ASSOCIATIVE_DEGREE: usize = 8;
/// Directory for relative `--output` paths.
pub const OUTPUT_DIR_ENV: &str = "ASSOC_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("malformed input file {path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{0}")]
    Compute(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "assoc", version, about = "Compressed Drinfeld associators in exact arithmetic")]
pub struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bernoulli numbers B_0..B_max.
    Bernoulli {
        #[arg(long, default_value_t = 12)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Extended Bernoulli numbers C_mn with m+n <= max-weight.
    Cmn {
        #[arg(long, default_value_t = 12)]
        max_weight: usize,
        /// Seed the recursion with C'_11 = 1/2.
        #[arg(long)]
        primed: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compressed CBH series log(e^P e^Q) in the metabelian quotient.
    Cbh {
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = CbhMethod::Closed)]
        method: CbhMethod,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Hexagon solutions and residuals.
    #[command(subcommand)]
    Hexagon(HexagonCmd),
    /// Pentagon residuals and quotient dimensions.
    #[command(subcommand)]
    Pentagon(PentagonCmd),
    /// Drinfeld series over odd zeta symbols.
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Self-checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
pub enum HexagonCmd {
    /// Builds an α-table from a family, a parameter file, or the degreewise solver.
    Solve(SolveArgs),
    /// Checks an α-table against the compressed hexagon.
    Residual {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 8)]
    pub degree: usize,
    #[arg(long, value_enum, conflicts_with_all = ["params", "degreewise"])]
    pub family: Option<Family>,
    /// Parameter file `{"beta": [[n,k,"p/q"]], "beta_tilde": [...]}`.
    #[arg(long, conflicts_with = "degreewise")]
    pub params: Option<PathBuf>,
    /// Print the per-degree solver report instead of an α-table.
    #[arg(long)]
    pub degreewise: bool,
}

#[derive(Subcommand, Debug)]
pub enum PentagonCmd {
    /// Evaluates the substituted pentagon for an α-table.
    Check {
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// Quotient dimensions per degree as CSV.
    Dims {
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, value_enum)]
        variant: Option<DimVariant>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ZetaCmd {
    /// The Drinfeld series with odd θ symbols kept formal.
    Drinfeld {
        #[arg(long, default_value_t = 7)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Free parameters of the Drinfeld series over the θ-ring.
    SolveBetas {
        #[arg(long, default_value_t = 9)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Runs every sub-check concurrently.
    All {
        #[arg(long, default_value_t = 8)]
        degree: usize,
        /// Restrict to these sub-checks.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
    Csv,
    Latex,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbhMethod {
    Closed,
    Recursive,
    Mirrored,
    Associative,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimVariant {
    L3bar,
    L4bar,
}

/// Rendered output plus whether every check in it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, pass: true }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// On-disk α-table: `{"order": n, "alpha": [[k, l, "p/q"], ...]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct AlphaFile {
    pub order: usize,
    pub alpha: Vec<(usize, usize, String)>,
}

impl AlphaFile {
    pub fn from_series(f: &BiSeries<Rational>) -> Self {
        let alpha = AlphaTable::from_series(f).alpha.into_iter().map(|((k, l), c)| (k, l, c.to_string())).collect();
        AlphaFile { order: f.order(), alpha }
    }

    pub fn to_table(&self) -> Result<AlphaTable<Rational>, String> {
        let mut t = AlphaTable { alpha: Default::default(), order: self.order };
        for (k, l, c) in &self.alpha {
            if k + l > self.order {
                return Err(format!("entry ({k},{l}) beyond order {}", self.order));
            }
            let v = parse_rational(c).ok_or_else(|| format!("bad rational '{c}'"))?;
            t.alpha.insert((*k, *l), v);
        }
        Ok(t)
    }
}

/// On-disk parameter set: `{"beta": [[n,k,"p/q"]], "beta_tilde": [...]}`.
#[derive(Serialize, Deserialize, Debug, Clone, Default, PartialEq)]
pub struct ParamsFile {
    #[serde(default)]
    pub beta: Vec<(usize, usize, String)>,
    #[serde(default)]
    pub beta_tilde: Vec<(usize, usize, String)>,
}

impl ParamsFile {
    pub fn to_params(&self) -> Result<ParamSet<Rational>, String> {
        let mut p = ParamSet::zero();
        for (n, k, c) in &self.beta {
            if *k == 0 || *k > n / 3 {
                return Err(format!("beta_({n},{k}) is not a free parameter"));
            }
            p = p.with_beta(*n, *k, parse_rational(c).ok_or_else(|| format!("bad rational '{c}'"))?);
        }
        for (n, k, c) in &self.beta_tilde {
            if *k > n / 3 {
                return Err(format!("beta_tilde_({n},{k}) is not a free parameter"));
            }
            p = p.with_beta_tilde(*n, *k, parse_rational(c).ok_or_else(|| format!("bad rational '{c}'"))?);
        }
        Ok(p)
    }
}

fn params_json<R: CoeffRing>(p: &ParamSet<R>) -> Value {
    let list = |m: &std::collections::BTreeMap<(usize, usize), R>| -> Vec<Value> {
        m.iter().map(|(&(n, k), c)| json!([n, k, c.to_json()])).collect()
    };
    json!({ "beta": list(&p.beta), "beta_tilde": list(&p.beta_tilde) })
}

fn check_degree(degree: usize, max: usize, what: &str) -> Result<(), CliError> {
    if degree > max {
        return Err(CliError::Usage(format!("{what} degree {degree} exceeds the bound {max}")));
    }
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn csv_string<S: Serialize>(rows: &[S]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

#[derive(Serialize)]
struct RationalRow {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct CmnRow {
    m: usize,
    n: usize,
    value: String,
}

/// Executes a parsed command and returns its rendered output.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Bernoulli { max, format } => {
            check_degree(*max, 200, "bernoulli")?;
            let b = bernoulli_vec(*max);
            let rows: Vec<RationalRow> = b.iter().enumerate().map(|(n, v)| RationalRow { n, value: v.to_string() }).collect();
            Ok(Outcome::ok(match format {
                Format::Csv => csv_string(&rows),
                Format::Json => pretty(&json!(rows)),
                _ => rows.iter().map(|r| format!("B_{} = {}\n", r.n, r.value)).collect(),
            }))
        }
        Command::Cmn { max_weight, primed, format } => {
            check_degree(*max_weight, MAX_DEGREE, "cmn")?;
            let t = if *primed { ExtBernoulliTable::primed(*max_weight) } else { ExtBernoulliTable::new(*max_weight) };
            let rows: Vec<CmnRow> =
                t.entries().map(|(&(m, n), v)| CmnRow { m, n, value: v.to_string() }).collect();
            Ok(Outcome::ok(match format {
                Format::Json => pretty(&json!(rows)),
                Format::Csv => csv_string(&rows),
                _ => rows.iter().map(|r| format!("C_{},{} = {}\n", r.m, r.n, r.value)).collect(),
            }))
        }
        Command::Cbh { degree, method, format } => {
            let max = if *method == CbhMethod::Associative { MAX_ASSOCIATIVE_DEGREE } else { MAX_DEGREE };
            check_degree(*degree, max, "cbh")?;
            let h = match method {
                CbhMethod::Closed => compressed_cbh(*degree),
                CbhMethod::Recursive => classical_cbh_in_model(*degree),
                CbhMethod::Mirrored => mirrored_cbh(*degree),
                CbhMethod::Associative => associative_log_oracle(*degree),
            };
            let recs = h.records();
            Ok(Outcome::ok(match format {
                Format::Csv => csv_string(&recs),
                Format::Plain => {
                    let mut s = format!("P: {}\nQ: {}\n", h.coeff_p, h.coeff_q);
                    for r in &recs {
                        let _ = writeln!(s, "[Q^{} P^{} Q P]: {}", r.n - 1, r.m - 1, r.coeff);
                    }
                    s
                }
                _ => pretty(&json!({
                    "degree": degree,
                    "P": h.coeff_p.to_string(),
                    "Q": h.coeff_q.to_string(),
                    "terms": recs,
                })),
            }))
        }
        Command::Hexagon(HexagonCmd::Solve(args)) => {
            check_degree(args.degree, MAX_DEGREE, "hexagon")?;
            if args.degreewise {
                let rep = solve_degreewise(args.degree).map_err(compute)?;
                let pass = rep.census_matches();
                return Ok(Outcome {
                    text: pretty(&json!({
                        "census_matches": pass,
                        "degrees": rep.degrees,
                        "alpha": AlphaFile::from_series(&rep.f),
                    })),
                    pass,
                });
            }
            let f = if let Some(path) = &args.params {
                let pf: ParamsFile = read_json(path)?;
                let p = pf.to_params().map_err(|msg| CliError::Input { path: path.display().to_string(), msg })?;
                build_f(&p, args.degree).map_err(compute)?
            } else {
                match args.family.unwrap_or(Family::I) {
                    Family::I => family_i(args.degree),
                    Family::II => family_ii(args.degree),
                    Family::III => family_iii(args.degree),
                }
            };
            Ok(Outcome::ok(pretty(&json!(AlphaFile::from_series(&f)))))
        }
        Command::Hexagon(HexagonCmd::Residual { input }) => {
            let af: AlphaFile = read_json(input)?;
            check_degree(af.order, MAX_DEGREE, "hexagon")?;
            let t = af.to_table().map_err(|msg| CliError::Input { path: input.display().to_string(), msg })?;
            let f = t.to_series();
            let symmetric = f.is_symmetric();
            let r = residual_15b(&f);
            let split_zero = symmetric
                && split_residuals(&f).map(|(a, b)| a.is_zero() && b.is_zero()).unwrap_or(false);
            let pass = symmetric && r.is_zero() && split_zero;
            Ok(Outcome {
                text: pretty(&json!({
                    "order": af.order,
                    "symmetric": symmetric,
                    "residual_zero": r.is_zero(),
                    "split_residuals_zero": split_zero,
                    "nonzero_terms": r.records(),
                    "pass": pass,
                })),
                pass,
            })
        }
        Command::Pentagon(PentagonCmd::Check { degree, input }) => {
            check_degree(*degree, MAX_PENTAGON_DEGREE, "pentagon")?;
            let af: AlphaFile = read_json(input)?;
            let t = af.to_table().map_err(|msg| CliError::Input { path: input.display().to_string(), msg })?;
            let rep = pentagon_check(&t, *degree).map_err(compute)?;
            Ok(Outcome { pass: rep.pass, text: pretty(&json!(rep)) })
        }
        Command::Pentagon(PentagonCmd::Dims { degree, variant }) => {
            check_degree(*degree, MAX_PENTAGON_DEGREE, "pentagon")?;
            let variants = match variant {
                Some(DimVariant::L3bar) => vec![Variant::L3bar],
                Some(DimVariant::L4bar) => vec![Variant::L4bar],
                None => vec![Variant::L3bar, Variant::L4bar],
            };
            let rows: Vec<_> = variants.into_iter().flat_map(|v| dimension_report(*degree, v)).collect();
            let pass = rows.iter().all(|r| r.ok);
            Ok(Outcome { text: csv_string(&rows), pass })
        }
        Command::Zeta(ZetaCmd::Drinfeld { degree, format }) => {
            check_degree(*degree, MAX_DEGREE, "zeta")?;
            let f = drinfeld_f(*degree);
            Ok(Outcome::ok(render_theta_series(&f, *format)))
        }
        Command::Zeta(ZetaCmd::SolveBetas { degree, format }) => {
            check_degree(*degree, MAX_DEGREE, "zeta")?;
            let p = solve_betas_in_theta(*degree).map_err(compute)?;
            Ok(Outcome::ok(match format {
                Format::Plain | Format::Latex => {
                    let mut s = String::new();
                    for (&(n, k), c) in &p.beta {
                        let _ = writeln!(s, "beta_{n}{k} = {}", render_coeff(c, *format));
                    }
                    for (&(n, k), c) in &p.beta_tilde {
                        let _ = writeln!(s, "beta_tilde_{n}{k} = {}", render_coeff(c, *format));
                    }
                    s
                }
                _ => pretty(&params_json(&p)),
            }))
        }
        Command::Verify(VerifyCmd::All { degree, only }) => {
            check_degree(*degree, MAX_PENTAGON_DEGREE, "verify")?;
            let names: Vec<&str> = only.iter().map(String::as_str).collect();
            if let Some(bad) = names.iter().find(|n| !crate::verify::CHECKS.iter().any(|(c, _)| c == *n)) {
                return Err(CliError::Usage(format!("unknown check '{bad}'")));
            }
            let results = run_checks(*degree, &names);
            let pass = results.iter().all(|r| r.pass);
            let mut s = String::new();
            for r in &results {
                let _ = writeln!(s, "{} {} ({} ms): {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.millis, r.detail);
            }
            if !pass {
                let failures: Vec<_> = results.iter().filter(|r| !r.pass).collect();
                s.push_str(&pretty(&json!({ "failures": failures })));
            }
            Ok(Outcome { text: s, pass })
        }
    }
}

fn render_coeff(c: &ThetaPoly, format: Format) -> String {
    if format == Format::Latex {
        c.to_latex()
    } else {
        c.render()
    }
}

fn render_theta_series(f: &BiSeries<ThetaPoly>, format: Format) -> String {
    match format {
        Format::Latex => {
            let mut terms = Vec::new();
            for (k, l, c) in f.terms() {
                let pw = |v: &str, e: usize| match e {
                    0 => String::new(),
                    1 => v.to_string(),
                    _ => format!("{v}^{{{e}}}"),
                };
                let mono = format!("{}{}", pw("\\lambda", k), pw("\\mu", l));
                let mono = if mono.is_empty() { mono } else { format!(" {mono}") };
                terms.push(format!("\\left({}\\right){}", c.to_latex(), mono));
            }
            format!("f^D(\\lambda,\\mu) = {}\n", terms.join(" + "))
        }
        Format::Plain => {
            let mut s = String::new();
            for (k, l, c) in f.terms() {
                let _ = writeln!(s, "({k},{l}): {}", c.render());
            }
            s
        }
        _ => pretty(&json!({ "order": f.order(), "terms": f.records() })),
    }
}

/// Resolves `--output` against the output directory variable.
pub fn output_path(cli: &Cli) -> Option<PathBuf> {
    let p = cli.output.clone()?;
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if p.is_relative() => Some(PathBuf::from(dir).join(p)),
        _ => Some(p),
    }
}

/// Parses, runs, writes output, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            let written = match output_path(&cli) {
                Some(path) => fs::write(&path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Compute(msg) = &e {
                println!("{}", pretty(&json!({ "failures": [{ "name": "compute", "detail": msg }] })));
            }
            e.exit_code()
        }
    }
}
