use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gitmilnor_core::lambda::OnePs;
use gitmilnor_core::milnor::{
    associated_form, associated_form_of, gradient_point, hilbert_function, hilbert_point, is_regular_sequence,
    socle_degree, Normalization,
};
use gitmilnor_core::poly::parse_polynomial;
use gitmilnor_core::rational::int;
use gitmilnor_core::stability::{
    binary_oracle, disjoint_decomposition, find_destabilizer, find_gradient_destabilizer, form_state,
    torus_verdict, LambdaStrategy, SearchConfig, StabilityStatus,
};
use gitmilnor_core::{Error, ExponentVector, Polynomial};
use serde_json::{json, Value};

use crate::corpus::{CorpusSpec, Family};
use crate::harness::{verify_assoc_theorem, verify_gradient_theorem, HarnessReport};
use crate::report::{self, InputEcho, Report};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "gitmilnor", version, about = "Gradient points, associated forms and Hilbert-Mumford stability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Span of the first partials of a form.
    Gradient(FormArgs),
    /// Associated form of a smooth form or of a regular sequence.
    Assoc(InputArgs),
    /// Hilbert function and the m-th Hilbert point of a generator list.
    Hilbert(HilbertArgs),
    /// Torus verdict, destabilizer search and exact binary status.
    Stability(StabilityArgs),
    /// Check the gradient theorem on a generated corpus.
    VerifyGradientTheorem(CorpusArgs),
    /// Check the associated-form theorem on a generated corpus.
    VerifyAssocTheorem(CorpusArgs),
}

#[derive(Debug, Args)]
pub struct FormArgs {
    #[arg(long)]
    pub form: String,
    /// Number of variables; inferred from the largest index when omitted.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long, conflicts_with = "gens")]
    pub form: Option<String>,
    /// Generators separated by ';'.
    #[arg(long)]
    pub gens: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct HilbertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Degree of the Hilbert point; the socle degree by default.
    #[arg(long)]
    pub m: Option<u32>,
    /// Sorted 1-PS for the pivot report, e.g. "-1,0,1".
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[arg(long)]
    pub form: String,
    #[arg(long)]
    pub n: Option<usize>,
    /// Random frames tried after the identity and targeted frames.
    #[arg(long, default_value_t = 16)]
    pub budget: usize,
    #[arg(long, default_value_t = 3)]
    pub entry_bound: i64,
    /// Search integer 1-PS up to this bound instead of solving the LP.
    #[arg(long)]
    pub lambda_bound: Option<i64>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    #[arg(long, default_value = "random-smooth")]
    pub family: String,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Degree of the forms (generators have one less).
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Random frames per destabilizer search.
    #[arg(long, default_value_t = 4)]
    pub budget: usize,
    /// Random frames per item for the associated-form checks.
    #[arg(long, default_value_t = 2)]
    pub frames: usize,
    #[arg(long, default_value_t = 3)]
    pub entry_bound: i64,
    /// Bound on the sorted 1-PS enumerated by the associated-form checks.
    #[arg(long, default_value_t = 4)]
    pub lambda_bound: i64,
}

/// Parses one form with an optional variable count.
pub fn parse_form(text: &str, n: Option<usize>) -> Result<Polynomial, CliError> {
    Ok(parse_polynomial(text, n)?)
}

fn parse_homogeneous(text: &str, n: Option<usize>) -> Result<(Polynomial, u32), CliError> {
    let f = parse_form(text, n)?;
    let d = f
        .homogeneous_degree()
        .map_err(|e| CliError::Usage(format!("'{text}' is not a nonzero homogeneous form: {e}")))?;
    Ok((f, d))
}

/// Parses a ';'-separated list; all generators share the largest variable count.
pub fn parse_generators(text: &str, n: Option<usize>) -> Result<Vec<Polynomial>, CliError> {
    let parts: Vec<&str> = text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
    if parts.is_empty() {
        return Err(CliError::Usage("empty generator list".into()));
    }
    let n = match n {
        Some(n) => n,
        None => parts
            .iter()
            .map(|p| parse_form(p, None).map(|f| f.n_vars()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .max()
            .unwrap_or(1),
    };
    parts.iter().map(|p| parse_homogeneous(p, Some(n)).map(|(f, _)| f)).collect()
}

fn monomial_string(e: &ExponentVector) -> String {
    Polynomial::monomial(e.clone(), int(1)).to_string()
}

/// `(−k, …, k)` with unit steps for odd `n`, and odd entries `1 − n, 3 − n, …`
/// for even `n`.
pub fn default_lambda(n: usize) -> OnePs {
    let n_i = n as i64;
    let weights = if n % 2 == 1 {
        (0..n_i).map(|i| i - (n_i - 1) / 2).collect()
    } else {
        (0..n_i).map(|i| 2 * i - (n_i - 1)).collect()
    };
    OnePs::new(weights).expect("centered weights")
}

fn echo_form(f: &Polynomial, degree: u32) -> Value {
    serde_json::to_value(InputEcho { form: Some(f.to_string()), generators: None, n: f.n_vars(), degree })
        .expect("serializable")
}

fn echo_generators(g: &[Polynomial]) -> Value {
    let degree = g.first().and_then(|p| p.homogeneous_degree().ok()).unwrap_or(0);
    serde_json::to_value(InputEcho {
        form: None,
        generators: Some(g.iter().map(ToString::to_string).collect()),
        n: g.first().map_or(0, Polynomial::n_vars),
        degree,
    })
    .expect("serializable")
}

struct Outcome {
    operation: &'static str,
    input: Value,
    result: Value,
    certificate: Value,
    exit: i32,
}

fn cmd_gradient(args: &FormArgs) -> Result<Outcome, CliError> {
    let (f, d) = parse_homogeneous(&args.form, args.n)?;
    let (result, certificate) = match gradient_point(&f) {
        Ok(w) => {
            let lambda = default_lambda(f.n_vars());
            let pivots = w.pivot_set(&lambda)?;
            (
                json!({
                    "status": "nondegenerate",
                    "rank": w.rank(),
                    "degree": w.degree(),
                    "basis": w.basis().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "lambda": report::one_ps(&lambda),
                    "pivots": pivots.monomials.iter().map(monomial_string).collect::<Vec<_>>(),
                    "hm_weight": pivots.weight,
                }),
                Value::Null,
            )
        }
        Err(Error::DegenerateGradient { rank, certificate, .. }) => (
            json!({ "status": "degenerate", "rank": rank, "degree": d.saturating_sub(1) }),
            report::framed(&certificate),
        ),
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome { operation: "gradient", input: echo_form(&f, d), result, certificate, exit: 0 })
}

fn read_input(args: &InputArgs) -> Result<(Option<Polynomial>, Vec<Polynomial>, Value), CliError> {
    match (&args.form, &args.gens) {
        (Some(text), None) => {
            let (f, d) = parse_homogeneous(text, args.n)?;
            let echo = echo_form(&f, d);
            Ok((Some(f.clone()), f.gradient(), echo))
        }
        (None, Some(text)) => {
            let g = parse_generators(text, args.n)?;
            let echo = echo_generators(&g);
            Ok((None, g, echo))
        }
        _ => Err(CliError::Usage("give exactly one of --form or --gens".into())),
    }
}

fn cmd_assoc(args: &InputArgs) -> Result<Outcome, CliError> {
    let (form, generators, input) = read_input(args)?;
    let a = match &form {
        Some(f) => associated_form_of(f)?,
        None => associated_form(&generators)?,
    };
    let d = generators[0].homogeneous_degree()?;
    let result = json!({
        "dual_form": a.dual_form.to_string(),
        "normalization": match a.normalization {
            Normalization::HessianNormalized => "hessian",
            Normalization::MonomialNormalized => "monomial",
        },
        "socle_degree": socle_degree(generators.len(), d),
    });
    Ok(Outcome { operation: "assoc", input, result, certificate: Value::Null, exit: 0 })
}

fn cmd_hilbert(args: &HilbertArgs) -> Result<Outcome, CliError> {
    let (_, generators, input) = read_input(&args.input)?;
    let n = generators[0].n_vars();
    let d = generators[0].homogeneous_degree()?;
    let nu = socle_degree(n, d);
    let m = args.m.unwrap_or(nu);
    let lambda = match &args.lambda {
        Some(text) => text.parse::<OnePs>()?,
        None => default_lambda(n),
    };
    let regular = match is_regular_sequence(&generators) {
        Ok(w) => Some(w.regular),
        Err(Error::WrongGeneratorCount { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let point = hilbert_point(&generators, m, false)?;
    let pivots = point.ideal_piece.pivot_set(&lambda)?;
    let non_pivots = point.ideal_piece.non_pivots(&lambda)?;
    let hf = hilbert_function(&generators, m.max(nu + 1))?;
    let result = json!({
        "m": m,
        "codim": point.codim,
        "rank": point.ideal_piece.rank(),
        "regular": regular,
        "socle_degree": nu,
        "hilbert_function": hf,
        "lambda": report::one_ps(&lambda),
        "pivots": pivots.monomials.iter().map(monomial_string).collect::<Vec<_>>(),
        "non_pivots": non_pivots.iter().map(monomial_string).collect::<Vec<_>>(),
        "hm_weight": pivots.weight,
    });
    Ok(Outcome { operation: "hilbert", input, result, certificate: Value::Null, exit: 0 })
}

fn cmd_stability(args: &StabilityArgs, seed: u64) -> Result<Outcome, CliError> {
    let (f, d) = parse_homogeneous(&args.form, args.n)?;
    let cfg = SearchConfig {
        seed,
        frame_budget: args.budget,
        entry_bound: args.entry_bound,
        strategy: match args.lambda_bound {
            Some(bound) => LambdaStrategy::Grid { bound },
            None => LambdaStrategy::Exact,
        },
        ..Default::default()
    };
    cfg.validate()?;
    let torus = torus_verdict(&form_state(&f)?)?;
    let search = find_destabilizer(&f, &cfg)?;
    let binary = if f.n_vars() == 2 { Some(binary_oracle(&f)?) } else { None };
    let gradient = match find_gradient_destabilizer(&f, &cfg) {
        Ok(v) => json!({ "status": v.status.to_string(), "certificate": report::certificate(&v.certificate) }),
        Err(Error::DegenerateGradient { rank, certificate, .. }) => {
            json!({ "status": "degenerate", "rank": rank, "certificate": report::framed(&certificate) })
        }
        Err(e) => return Err(e.into()),
    };
    let status = if search.is_unstable() {
        StabilityStatus::Unstable
    } else {
        binary.as_ref().map_or(StabilityStatus::Unknown, |b| b.status)
    };
    let decomposition = disjoint_decomposition(&f);
    let mut result = json!({
        "status": status.to_string(),
        "torus": report::verdict(&torus),
        "search": report::verdict(&search),
        "gradient": gradient,
        "decomposition": {
            "blocks": decomposition.blocks.iter().map(|b| b.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "boundary_lambda": decomposition.boundary_one_ps.as_ref().map(report::one_ps),
        },
    });
    if let Some(b) = &binary {
        result["binary"] = json!({
            "status": b.status.to_string(),
            "degree": b.degree,
            "max_multiplicity": b.max_multiplicity,
            "roots": b.roots.iter().map(|r| json!({
                "point": [report::rational(&r.a), report::rational(&r.b)],
                "multiplicity": r.multiplicity,
            })).collect::<Vec<_>>(),
        });
    }
    let certificate = search.destabilizer().map_or(Value::Null, report::framed);
    Ok(Outcome { operation: "stability", input: echo_form(&f, d), result, certificate, exit: 0 })
}

fn corpus_spec(args: &CorpusArgs, seed: u64) -> Result<(CorpusSpec, SearchConfig), CliError> {
    let family: Family = args.family.parse()?;
    let n = if family == Family::BinaryCatalog { 2 } else { args.n };
    let spec = CorpusSpec::new(family, n, args.degree, args.count, seed);
    let cfg = SearchConfig { seed, frame_budget: args.budget, entry_bound: args.entry_bound, ..Default::default() };
    cfg.validate()?;
    if args.lambda_bound < 1 {
        return Err(CliError::Usage("--lambda-bound must be positive".into()));
    }
    Ok((spec, cfg))
}

fn harness_outcome(operation: &'static str, spec: &CorpusSpec, args: &CorpusArgs, report: HarnessReport) -> Outcome {
    let input = json!({
        "family": spec.family.to_string(),
        "n": spec.n,
        "degree": spec.degree,
        "count": spec.count,
        "budget": args.budget,
        "frames": args.frames,
        "entry_bound": args.entry_bound,
        "lambda_bound": args.lambda_bound,
    });
    let exit = if report.ok() { 0 } else { 1 };
    let result = json!({
        "ok": report.ok(),
        "tally": report.tally,
        "violations": report.violations,
    });
    Outcome { operation, input, result, certificate: Value::Null, exit }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Gradient(a) => cmd_gradient(a),
        Command::Assoc(a) => cmd_assoc(a),
        Command::Hilbert(a) => cmd_hilbert(a),
        Command::Stability(a) => cmd_stability(a, cli.seed),
        Command::VerifyGradientTheorem(a) => {
            let (spec, cfg) = corpus_spec(a, cli.seed)?;
            let report = verify_gradient_theorem(&spec, &cfg)?;
            Ok(harness_outcome("verify-gradient-theorem", &spec, a, report))
        }
        Command::VerifyAssocTheorem(a) => {
            let (spec, cfg) = corpus_spec(a, cli.seed)?;
            let report = verify_assoc_theorem(&spec, &cfg, a.lambda_bound, a.frames)?;
            Ok(harness_outcome("verify-assoc-theorem", &spec, a, report))
        }
    }
}

/// Runs a parsed command line; returns the report (when one was produced),
/// the rendered output and the exit code.
pub fn run(cli: &Cli) -> (Option<Report>, String, i32) {
    let start = Instant::now();
    match dispatch(cli) {
        Ok(outcome) => {
            let report = Report {
                operation: outcome.operation.to_string(),
                input: outcome.input,
                result: outcome.result,
                certificate: outcome.certificate,
                seed: cli.seed,
                timing_ms: start.elapsed().as_secs_f64() * 1000.0,
            };
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            (Some(report), text, outcome.exit)
        }
        Err(e) => {
            let code = e.exit_code();
            (None, format!("error: {e}"), code)
        }
    }
}

/// Parses and runs an argument list (without the program name); returns the
/// exit code and the rendered output or error message.
pub fn run_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("gitmilnor")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => {
            let (_, output, code) = run(&cli);
            (code, output)
        }
        Err(e) => (e.exit_code(), e.to_string()),
    }
}
