//! The `gwdeg` command line: argument handling, input decoding and output
//! rendering on top of `gwdeg-core`.

pub mod json;
pub mod parse;
mod selftest;

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gwdeg_core::degree::rational_roots;
use gwdeg_core::etale::{trace_form, Algebra, AlgebraElement};
use gwdeg_core::{
    add_gw, add_gwu, add_gwu_divisorial, bezoutian_matrix, check_poincare_hopf, get_diagonal_class, get_invariants,
    get_sum_decomposition_gwu, get_witt_decomposition, global_unstable_degree, is_isomorphic_gw, is_isomorphic_gwu,
    local_newton_coefficient, local_unstable_degree, make_diagonal_unstable_form, make_gwu_with_scalar,
    make_hyperbolic_unstable_form, multiply_gw, transfer_gw, transfer_gw_entrywise, FormInvariants,
    GrothendieckWittClass, PointedRationalFunction, UnstableGWClass,
};
use serde_json::{json, Value};

use crate::json::{
    element_from_json, gram_to_json, gw_from_json, gw_to_json, gwu_from_json, gwu_to_json, scalar_matrix_to_json,
    scalar_to_json, Context, DecodeError,
};
use crate::parse::{
    parse_algebra, parse_field, parse_polynomial, parse_rational_function, parse_scalar, parse_scalar_list, ParseError,
};

/// Exit code for malformed arguments or input.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for well-formed input the mathematics rejects.
pub const EXIT_DOMAIN: i32 = 2;
/// Exit code for requests outside what is implemented.
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(#[from] ParseError),
    #[error("{0}")]
    Domain(#[from] gwdeg_core::Error),
}

impl From<DecodeError> for CliError {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::Input(p) => CliError::Input(p),
            DecodeError::Domain(d) => CliError::Domain(d),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => EXIT_USAGE,
            CliError::Domain(e) if e.is_unsupported() => EXIT_UNSUPPORTED,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "gwdeg", version, about = "Grothendieck-Witt classes and unstable A1-degrees")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite etale algebras.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Grothendieck-Witt classes.
    #[command(subcommand)]
    Gw(GwCmd),
    /// Unstable Grothendieck-Witt classes.
    #[command(subcommand)]
    Gwu(GwuCmd),
    /// Unstable degrees of pointed rational functions.
    #[command(subcommand)]
    Deg(DegCmd),
    /// Run randomized consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases per check.
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct AlgebraArg {
    /// `BASE[x]/(f1)x(f2)...` or a JSON factor list.
    #[arg(long)]
    algebra: String,
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Validate an algebra and describe it.
    Make(AlgebraArg),
    /// Trace of an element.
    Trace {
        #[command(flatten)]
        alg: AlgebraArg,
        /// A polynomial in x, or JSON per-factor coefficient arrays.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Matrix of multiplication by an element on the standard basis.
    Multmatrix {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Gram matrix of the trace form.
    Traceform(AlgebraArg),
}

#[derive(Args, Debug, Clone, Default)]
struct CtxArgs {
    /// Base field: QQ, GF:p, RR or CC.
    #[arg(long)]
    field: Option<String>,
    /// Algebra the entries live in.
    #[arg(long)]
    algebra: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TransferMode {
    /// The trace form of the module over the base field (rank n * dim).
    Full,
    /// The n x n matrix of traces of the entries.
    Entrywise,
}

#[derive(Subcommand, Debug)]
enum GwCmd {
    /// Validate a Gram matrix.
    Make {
        #[command(flatten)]
        ctx: CtxArgs,
        /// File, `-` for stdin, or inline JSON.
        input: String,
    },
    /// Direct sum.
    Add {
        #[command(flatten)]
        ctx: CtxArgs,
        a: String,
        b: String,
    },
    /// Tensor product.
    Mul {
        #[command(flatten)]
        ctx: CtxArgs,
        a: String,
        b: String,
    },
    /// Diagonal representative with its change of basis.
    Diag {
        #[command(flatten)]
        ctx: CtxArgs,
        input: String,
    },
    /// Trace transfer to the base field.
    Transfer {
        #[command(flatten)]
        ctx: CtxArgs,
        input: String,
        #[arg(long, value_enum)]
        mode: Option<TransferMode>,
    },
    /// Rank, signature, discriminant and Hasse invariants.
    Classify {
        #[command(flatten)]
        ctx: CtxArgs,
        input: String,
    },
    /// Isomorphism test.
    Iso {
        #[command(flatten)]
        ctx: CtxArgs,
        a: String,
        b: String,
    },
    /// Witt decomposition into hyperbolic planes and an anisotropic part.
    Witt {
        #[command(flatten)]
        ctx: CtxArgs,
        input: String,
    },
}

#[derive(Subcommand, Debug)]
enum GwuCmd {
    /// Validate a class; the scalar defaults to the Gram determinant.
    Make {
        #[command(flatten)]
        ctx: CtxArgs,
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        scalar: Option<String>,
    },
    /// `(<a1,...,an>, a1...an)`.
    Diagonal {
        #[arg(long)]
        field: String,
        /// Comma-separated entries.
        #[arg(long, allow_hyphen_values = true)]
        entries: String,
    },
    /// `(n/2) H` with scalar `(-1)^(n/2)`.
    Hyperbolic {
        #[arg(long)]
        field: String,
        #[arg(long)]
        rank: usize,
    },
    /// Sum of two classes.
    Add {
        #[command(flatten)]
        ctx: CtxArgs,
        a: String,
        b: String,
    },
    /// Isomorphism test (forms isomorphic, scalars equal).
    Iso {
        #[command(flatten)]
        ctx: CtxArgs,
        a: String,
        b: String,
    },
    /// Rewrite as a sum of rank-one classes.
    Decompose {
        #[command(flatten)]
        ctx: CtxArgs,
        input: String,
    },
    /// Divisorial sum of local classes at distinct points.
    Divsum {
        #[command(flatten)]
        ctx: CtxArgs,
        /// Comma-separated points, one per input.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(required = true)]
        inputs: Vec<String>,
    },
}

#[derive(Args, Debug, Clone)]
struct FunctionArgs {
    #[arg(long, default_value = "QQ")]
    field: String,
    /// Monic numerator f.
    #[arg(long, allow_hyphen_values = true, requires = "den", conflicts_with = "frac")]
    num: Option<String>,
    /// Denominator g with deg g < deg f.
    #[arg(long, allow_hyphen_values = true, requires = "num")]
    den: Option<String>,
    /// A single fraction `N/D`; common factors cancel and N is made monic.
    #[arg(long, allow_hyphen_values = true)]
    frac: Option<String>,
}

#[derive(Subcommand, Debug)]
enum DegCmd {
    /// Global unstable degree from the Bezoutian.
    Global(FunctionArgs),
    /// The Bezoutian matrix alone.
    Bezoutian(FunctionArgs),
    /// Local unstable degree at a root of the numerator.
    Local {
        #[command(flatten)]
        fun: FunctionArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Compare the global degree with the divisorial sum of local degrees.
    PhCheck {
        #[command(flatten)]
        fun: FunctionArgs,
        /// Comma-separated roots; found automatically when omitted.
        #[arg(long, allow_hyphen_values = true)]
        roots: Option<String>,
    },
}

/// Rendered result of a command.
struct Output {
    text: String,
    json: Value,
    /// Informational lines for stderr.
    notes: Vec<String>,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, notes: Vec::new() }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let format = cli.format;
    match dispatch(cli.command) {
        Ok(out) => {
            for n in &out.notes {
                let _ = writeln!(stderr, "note: {n}");
            }
            let body = match format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable"),
            };
            let _ = writeln!(stdout, "{body}");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<Output> {
    match cmd {
        Command::Algebra(c) => algebra_cmd(c),
        Command::Gw(c) => gw_cmd(c),
        Command::Gwu(c) => gwu_cmd(c),
        Command::Deg(c) => deg_cmd(c),
        Command::Selftest { seed, cases } => {
            let report = selftest::run(seed, cases);
            let ok = report.iter().all(|r| r.passed);
            let text = report.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            let js = json!({
                "seed": seed,
                "passed": ok,
                "checks": report.iter().map(|r| json!({"name": r.name, "cases": r.cases, "passed": r.passed, "detail": r.detail})).collect::<Vec<_>>(),
            });
            if ok {
                Ok(Output::new(text, js))
            } else {
                Err(CliError::Domain(gwdeg_core::Error::Internal(format!("selftest failed (seed {seed})\n{text}"))))
            }
        }
    }
}

fn read_input(spec: &str) -> CliResult<Value> {
    let text = if spec == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
        s
    } else if spec.trim_start().starts_with(['[', '{']) {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("reading {spec}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| {
        CliError::Input(ParseError { message: format!("{spec}: invalid JSON: {e}"), position: None })
    })
}

fn context(args: &CtxArgs) -> CliResult<Context> {
    let field = args.field.as_deref().map(parse_field).transpose()?;
    let algebra = args.algebra.as_deref().map(algebra_arg).transpose()?;
    if let (Some(f), Some(a)) = (field, &algebra) {
        if a.base() != f {
            return Err(CliError::Usage(format!("--field {f} does not match --algebra over {}", a.base())));
        }
    }
    Ok(Context { field, algebra })
}

fn algebra_arg(text: &str) -> CliResult<Algebra> {
    if text.trim_start().starts_with(['[', '{']) {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Input(ParseError { message: format!("invalid JSON algebra: {e}"), position: None }))?;
        return Ok(json::algebra_from_json(&v, "algebra")?);
    }
    Ok(parse_algebra(text)?)
}

fn element_arg(alg: &Algebra, text: &str) -> CliResult<AlgebraElement> {
    if text.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Input(ParseError { message: format!("invalid JSON element: {e}"), position: None }))?;
        return Ok(element_from_json(&v, alg, "element")?);
    }
    let p = parse_polynomial(text, alg.base())?;
    Ok(AlgebraElement::from_polynomial(alg, &p)?)
}

fn load_gw(ctx: &Context, input: &str) -> CliResult<GrothendieckWittClass> {
    Ok(gw_from_json(&read_input(input)?, ctx)?)
}

fn load_gwu(ctx: &Context, input: &str) -> CliResult<UnstableGWClass> {
    Ok(gwu_from_json(&read_input(input)?, ctx)?)
}

fn gw_output(beta: &GrothendieckWittClass) -> Output {
    Output::new(beta.to_string(), gw_to_json(beta))
}

fn gwu_output(a: &UnstableGWClass) -> Output {
    Output::new(a.to_string(), gwu_to_json(a))
}

fn bool_output(b: bool) -> Output {
    Output::new(b.to_string(), Value::Bool(b))
}

fn algebra_cmd(cmd: AlgebraCmd) -> CliResult<Output> {
    match cmd {
        AlgebraCmd::Make(a) => {
            let alg = algebra_arg(&a.algebra)?;
            let factors: Vec<String> = alg.factors().iter().map(ToString::to_string).collect();
            let text = format!(
                "algebra: {alg}\nbase: {}\ndimension: {}\nfactors: {}",
                alg.base(),
                alg.dimension(),
                factors.join(", ")
            );
            let js = json!({
                "algebra": alg.to_string(),
                "field": alg.base().to_string(),
                "dimension": alg.dimension(),
                "factors": factors,
            });
            Ok(Output::new(text, js))
        }
        AlgebraCmd::Trace { alg, element } => {
            let alg = algebra_arg(&alg.algebra)?;
            let t = element_arg(&alg, &element)?.trace();
            Ok(Output::new(t.to_string(), scalar_to_json(&t)))
        }
        AlgebraCmd::Multmatrix { alg, element } => {
            let alg = algebra_arg(&alg.algebra)?;
            let m = element_arg(&alg, &element)?.multiplication_matrix();
            Ok(Output::new(m.to_string(), scalar_matrix_to_json(&m)))
        }
        AlgebraCmd::Traceform(a) => {
            let alg = algebra_arg(&a.algebra)?;
            let m = trace_form(&alg);
            Ok(Output::new(m.to_string(), scalar_matrix_to_json(&m)))
        }
    }
}

fn invariants_json(inv: &FormInvariants) -> Value {
    let hasse = inv.hasse.as_ref().map(|h| {
        Value::Object(h.iter().map(|(v, e)| (v.to_string(), json!(e))).collect())
    });
    json!({
        "field": inv.field.to_string(),
        "rank": inv.rank,
        "signature": inv.signature.map(|(p, n)| json!([p, n])),
        "discriminant": inv.discriminant.to_string(),
        "discriminant_representative": scalar_to_json(&inv.discriminant.representative(inv.field)),
        "hasse": hasse,
    })
}

fn gw_cmd(cmd: GwCmd) -> CliResult<Output> {
    match cmd {
        GwCmd::Make { ctx, input } => Ok(gw_output(&load_gw(&context(&ctx)?, &input)?)),
        GwCmd::Add { ctx, a, b } => {
            let ctx = context(&ctx)?;
            Ok(gw_output(&add_gw(&load_gw(&ctx, &a)?, &load_gw(&ctx, &b)?)?))
        }
        GwCmd::Mul { ctx, a, b } => {
            let ctx = context(&ctx)?;
            Ok(gw_output(&multiply_gw(&load_gw(&ctx, &a)?, &load_gw(&ctx, &b)?)?))
        }
        GwCmd::Diag { ctx, input } => {
            let beta = load_gw(&context(&ctx)?, &input)?;
            let (d, p) = get_diagonal_class(&beta)?;
            let text = format!("{d}\nwitness:\n{p}");
            let mut js = gw_to_json(&d);
            js["witness"] = gram_to_json(&p);
            Ok(Output::new(text, js))
        }
        GwCmd::Transfer { ctx, input, mode } => {
            let beta = load_gw(&context(&ctx)?, &input)?;
            let mut out = match mode.unwrap_or(TransferMode::Full) {
                TransferMode::Full => gw_output(&transfer_gw(&beta)),
                TransferMode::Entrywise => gw_output(&transfer_gw_entrywise(&beta)?),
            };
            if mode.is_none() && !beta.algebra().is_field() {
                out.notes.push(format!(
                    "full transfer has rank {}; --mode entrywise gives the {n} x {n} matrix of entry traces instead",
                    beta.rank() * beta.algebra().dimension(),
                    n = beta.rank()
                ));
            }
            Ok(out)
        }
        GwCmd::Classify { ctx, input } => {
            let inv = get_invariants(&load_gw(&context(&ctx)?, &input)?)?;
            Ok(Output::new(inv.to_string(), invariants_json(&inv)))
        }
        GwCmd::Iso { ctx, a, b } => {
            let ctx = context(&ctx)?;
            Ok(bool_output(is_isomorphic_gw(&load_gw(&ctx, &a)?, &load_gw(&ctx, &b)?)?))
        }
        GwCmd::Witt { ctx, input } => {
            let w = get_witt_decomposition(&load_gw(&context(&ctx)?, &input)?)?;
            let class = w.to_class();
            let aniso: Vec<String> = w.anisotropic.iter().map(ToString::to_string).collect();
            let text = format!("hyperbolic: {}\nanisotropic: <{}>\n{class}", w.hyperbolic, aniso.join(", "));
            let mut js = gw_to_json(&class);
            js["hyperbolic"] = json!(w.hyperbolic);
            js["anisotropic"] = Value::Array(w.anisotropic.iter().map(scalar_to_json).collect());
            Ok(Output::new(text, js))
        }
    }
}

fn gwu_cmd(cmd: GwuCmd) -> CliResult<Output> {
    match cmd {
        GwuCmd::Make { ctx, input, scalar } => {
            let ctx = context(&ctx)?;
            let a = load_gwu(&ctx, &input)?;
            let a = match scalar {
                None => a,
                Some(s) => {
                    let d = element_arg(a.algebra(), &s)?;
                    make_gwu_with_scalar(a.gw().clone(), d)?
                }
            };
            Ok(gwu_output(&a))
        }
        GwuCmd::Diagonal { field, entries } => {
            let field = parse_field(&field)?;
            let entries = parse_scalar_list(&entries, field)?;
            Ok(gwu_output(&make_diagonal_unstable_form(field, &entries)?))
        }
        GwuCmd::Hyperbolic { field, rank } => {
            Ok(gwu_output(&make_hyperbolic_unstable_form(parse_field(&field)?, rank)?))
        }
        GwuCmd::Add { ctx, a, b } => {
            let ctx = context(&ctx)?;
            Ok(gwu_output(&add_gwu(&load_gwu(&ctx, &a)?, &load_gwu(&ctx, &b)?)?))
        }
        GwuCmd::Iso { ctx, a, b } => {
            let ctx = context(&ctx)?;
            Ok(bool_output(is_isomorphic_gwu(&load_gwu(&ctx, &a)?, &load_gwu(&ctx, &b)?)?))
        }
        GwuCmd::Decompose { ctx, input } => {
            Ok(gwu_output(&get_sum_decomposition_gwu(&load_gwu(&context(&ctx)?, &input)?)?))
        }
        GwuCmd::Divsum { ctx, points, inputs } => {
            let ctx = context(&ctx)?;
            let classes = inputs.iter().map(|i| load_gwu(&ctx, i)).collect::<CliResult<Vec<_>>>()?;
            let field = classes[0].algebra().base();
            let points = parse_scalar_list(&points, field)?;
            Ok(gwu_output(&add_gwu_divisorial(&classes, &points)?))
        }
    }
}

fn function(args: &FunctionArgs) -> CliResult<PointedRationalFunction> {
    let field = parse_field(&args.field)?;
    match (&args.num, &args.den, &args.frac) {
        (Some(n), Some(d), None) => {
            let f = parse_polynomial(n, field)?;
            let g = parse_polynomial(d, field)?;
            Ok(PointedRationalFunction::new(f, g)?)
        }
        (None, None, Some(q)) => {
            let (n, d) = parse_rational_function(q, field)?;
            Ok(PointedRationalFunction::from_fraction(&n, &d)?)
        }
        _ => Err(CliError::Usage("give either --num and --den, or --frac".into())),
    }
}

fn deg_cmd(cmd: DegCmd) -> CliResult<Output> {
    match cmd {
        DegCmd::Global(args) => Ok(gwu_output(&global_unstable_degree(&function(&args)?)?)),
        DegCmd::Bezoutian(args) => {
            let m = bezoutian_matrix(&function(&args)?);
            Ok(Output::new(m.to_string(), scalar_matrix_to_json(&m)))
        }
        DegCmd::Local { fun, at } => {
            let q = function(&fun)?;
            let r = parse_scalar(&at, q.field())?;
            let (m, a) = local_newton_coefficient(&q, &r)?;
            let local = local_unstable_degree(&q, &r)?;
            let text = format!("multiplicity: {m}\ncoefficient: {a}\n{local}");
            let mut js = gwu_to_json(&local);
            js["point"] = scalar_to_json(&r);
            js["multiplicity"] = json!(m);
            js["coefficient"] = scalar_to_json(&a);
            Ok(Output::new(text, js))
        }
        DegCmd::PhCheck { fun, roots } => {
            let q = function(&fun)?;
            let roots = match roots {
                Some(r) => parse_scalar_list(&r, q.field())?,
                None => rational_roots(&q).ok_or_else(|| {
                    CliError::Domain(gwdeg_core::Error::Unsupported(format!(
                        "cannot find the roots of {} over {}; pass --roots",
                        q.numerator(),
                        q.field()
                    )))
                })?,
            };
            let holds = check_poincare_hopf(&q, &roots)?;
            let js = json!({
                "holds": holds,
                "roots": roots.iter().map(scalar_to_json).collect::<Vec<_>>(),
            });
            Ok(Output::new(holds.to_string(), js))
        }
    }
}
