use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixnorm::constructions::{
    degenerate_counterexample, form_from_file, ksz_random, ksz_vector, littlewood_extremizer,
    random_gaussian_tensor, random_unimodular_tensor, write_form, AnyForm, RandomScalar,
};
use mixnorm::experiments::{run_experiment, ExperimentConfig, Verdict};
use mixnorm::exponents::{
    bennett_carl_r, conjugate_exponent, constant_bounds, feasibility, hull_decompose, interpolate_exponents,
    ksz_alpha, lambda_base, parse_exponent, rho_exponent, ConstantSpec, ExponentVector, Field, ProblemSpec,
};
use mixnorm::numfmt::sig15;
use mixnorm::opnorm::{operator_norm, Method, MultilinearForm, NormEstimate, NormOptions};
use mixnorm::scalar::Scalar;
use mixnorm::tensor::{mixed_norm, parse_tensor_file, AnyTensor, MixedNormSpec};
use mixnorm::{Error, Result};
use num_complex::Complex64;

#[derive(Parser, Debug)]
#[command(name = "mixnorm", version, about = "Mixed-norm inequalities for multilinear forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an exponent vector q against the feasibility budget.
    Feasible(FeasibleArgs),
    /// Exponent calculus.
    #[command(subcommand)]
    Exponents(ExponentsCmd),
    /// Nested mixed norm of a tensor file.
    MixedNorm(MixedNormArgs),
    /// Operator norm of a form file.
    Opnorm(OpnormArgs),
    /// Write a generated form in the tensor text format.
    Generate(GenerateArgs),
    /// Run an experiment config and write CSV/JSON results.
    Experiment(ExperimentArgs),
}

fn exponent(s: &str) -> std::result::Result<f64, String> {
    parse_exponent(s).map_err(|e| e.to_string())
}

fn exponents(s: &str) -> std::result::Result<ExponentVector, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn field(s: &str) -> std::result::Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug)]
struct FeasibleArgs {
    /// Arity; defaults to the length of q.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_parser = exponents)]
    q: ExponentVector,
    #[arg(long, default_value = "1", value_parser = exponent)]
    s: f64,
    #[arg(long, default_value = "2", value_parser = exponent)]
    qcod: f64,
    /// Domain exponents; defaults to inf in every slot.
    #[arg(long, value_parser = exponents)]
    p: Option<ExponentVector>,
    #[arg(long, default_value = "real", value_parser = field)]
    field: Field,
}

#[derive(Subcommand, Debug)]
enum ExponentsCmd {
    /// p* with 1/p + 1/p* = 1.
    Conjugate {
        #[arg(value_parser = exponent)]
        p: f64,
    },
    /// max(1/2 - 1/p, 0).
    KszAlpha {
        #[arg(value_parser = exponent)]
        p: f64,
    },
    /// lambda and rho for a problem spec.
    Lambda {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "1", value_parser = exponent)]
        s: f64,
        #[arg(long, default_value = "2", value_parser = exponent)]
        qcod: f64,
        #[arg(long, value_parser = exponents)]
        p: Option<ExponentVector>,
    },
    /// Weights of q on the hull of the vertices (2,..,lambda,..,2).
    Hull {
        #[arg(long, value_parser = exponents)]
        q: ExponentVector,
        #[arg(long, value_parser = exponent)]
        lambda: f64,
    },
    /// 1/r = theta/p + (1 - theta)/q componentwise.
    Interpolate {
        #[arg(long, value_parser = exponents)]
        p: ExponentVector,
        #[arg(long, value_parser = exponents)]
        q: ExponentVector,
        #[arg(long)]
        theta: f64,
    },
    /// r with 1/r = 1/2 + 1/s - 1/qcod.
    BennettCarl {
        #[arg(long, value_parser = exponent)]
        s: f64,
        #[arg(long, value_parser = exponent)]
        qcod: f64,
    },
    /// Upper constants for arity m.
    Bounds {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "real", value_parser = field)]
        field: Field,
        #[arg(long, default_value_t = 1.0)]
        cotype2: f64,
        #[arg(long, default_value_t = 1.0)]
        summing: f64,
        /// Exponent pair for the bilinear constant (real, m = 2).
        #[arg(long, value_parser = exponents)]
        pair: Option<ExponentVector>,
    },
}

#[derive(Args, Debug)]
struct MixedNormArgs {
    #[arg(long)]
    tensor: PathBuf,
    #[arg(long, value_parser = exponents)]
    q: ExponentVector,
    /// Nesting order, 1-based and comma separated; outermost first.
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<usize>>,
    /// Exponent for the codomain axis of vector-valued tensors.
    #[arg(long, value_parser = exponent)]
    qcod: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Oracle,
    Ascent,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Ascent => Method::Ascent,
        }
    }
}

#[derive(Args, Debug)]
struct OpnormArgs {
    #[arg(long)]
    tensor: PathBuf,
    /// Domain exponents; overrides the file's `p:` header.
    #[arg(long, value_parser = exponents)]
    p: Option<ExponentVector>,
    /// Codomain exponent; overrides the file's `codomain_s:` header.
    #[arg(long, value_parser = exponent)]
    s: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    /// Smallest-norm of several random sign forms.
    Ksz,
    /// Vector-valued sign form into l_s.
    KszVector,
    /// The 2x2 form with norm 2.
    Extremizer,
    /// Sign form placed on the first slice of one extra slot.
    Degenerate,
    /// One random sign tensor.
    Sign,
    /// One standard Gaussian tensor.
    Gaussian,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, value_parser = exponents)]
    p: Option<ExponentVector>,
    /// Codomain exponent for ksz-vector.
    #[arg(long, default_value = "1", value_parser = exponent)]
    s: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    trials: usize,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value = "real", value_parser = field)]
    field: Field,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("MIXNORM_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("MIXNORM_THREADS = {value:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn run(cmd: Command) -> Result<u8> {
    let mut out = io::stdout().lock();
    match cmd {
        Command::Feasible(a) => feasible(a, &mut out),
        Command::Exponents(c) => exponents_cmd(c, &mut out),
        Command::MixedNorm(a) => mixed_norm_cmd(a, &mut out),
        Command::Opnorm(a) => opnorm_cmd(a, &mut out),
        Command::Generate(a) => generate(a, &mut out),
        Command::Experiment(a) => experiment(a, &mut out),
    }
}

fn domain_p(p: Option<ExponentVector>, m: usize) -> Result<ExponentVector> {
    let p = p.unwrap_or_else(|| ExponentVector::infinite(m));
    if p.m() != m {
        return Err(Error::Config(format!("--p has {} entries, expected {m}", p.m())));
    }
    Ok(p)
}

fn feasible(a: FeasibleArgs, out: &mut impl Write) -> Result<u8> {
    let m = a.m.unwrap_or(a.q.m());
    if a.q.m() != m {
        return Err(Error::Config(format!("--q has {} entries but --m is {m}", a.q.m())));
    }
    let spec = ProblemSpec::new(domain_p(a.p, m)?, a.s, a.qcod, a.field)?;
    let f = feasibility(&a.q, &spec)?;
    let rho = rho_exponent(&spec)?;
    writeln!(
        out,
        "{} slack={} lambda={} rho={}",
        if f.feasible { "feasible" } else { "infeasible" },
        sig15(f.slack),
        sig15(f.lambda),
        sig15(rho)
    )?;
    Ok(if f.feasible { 0 } else { 1 })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|&x| sig15(x)).collect::<Vec<_>>().join(",")
}

fn exponents_cmd(c: ExponentsCmd, out: &mut impl Write) -> Result<u8> {
    match c {
        ExponentsCmd::Conjugate { p } => writeln!(out, "{}", sig15(conjugate_exponent(p)?))?,
        ExponentsCmd::KszAlpha { p } => writeln!(out, "{}", sig15(ksz_alpha(p)?))?,
        ExponentsCmd::Lambda { m, s, qcod, p } => {
            let spec = ProblemSpec::new(domain_p(p, m)?, s, qcod, Field::Real)?;
            writeln!(
                out,
                "lambda={} rho={}",
                sig15(lambda_base(&spec)?),
                sig15(rho_exponent(&spec)?)
            )?;
        }
        ExponentsCmd::Hull { q, lambda } => writeln!(out, "{}", join(&hull_decompose(&q, lambda)?))?,
        ExponentsCmd::Interpolate { p, q, theta } => {
            writeln!(out, "{}", join(interpolate_exponents(&p, &q, theta)?.values()))?
        }
        ExponentsCmd::BennettCarl { s, qcod } => writeln!(out, "{}", sig15(bennett_carl_r(s, qcod)?))?,
        ExponentsCmd::Bounds {
            m,
            field,
            cotype2,
            summing,
            pair,
        } => {
            let base = ConstantSpec::scalar_default(field).khintchine_base;
            let b = constant_bounds(m, field, &ConstantSpec::new(cotype2, summing, base)?)?;
            write!(out, "bh_upper={} mixed_upper={}", sig15(b.bh_upper), sig15(b.mixed_upper))?;
            if let Some(pair) = pair {
                if pair.m() != 2 {
                    return Err(Error::Config("--pair takes two exponents".into()));
                }
                let v = b.bilinear_sharp(pair.values()[0], pair.values()[1])?;
                write!(out, " bilinear_sharp={}", sig15(v))?;
            }
            writeln!(out)?;
        }
    }
    Ok(0)
}

fn mixed_norm_cmd(a: MixedNormArgs, out: &mut impl Write) -> Result<u8> {
    let file = parse_tensor_file(&fs::read_to_string(&a.tensor)?)?;
    let mut spec = MixedNormSpec::new(a.q);
    if let Some(sigma) = a.sigma {
        if sigma.contains(&0) {
            return Err(Error::Config("--sigma is 1-based".into()));
        }
        spec = spec.with_sigma(sigma.into_iter().map(|i| i - 1).collect());
    }
    if let Some(q) = a.qcod {
        spec = spec.with_codomain(q);
    }
    let value = match &file.tensor {
        AnyTensor::Real(t) => mixed_norm(t, &spec)?,
        AnyTensor::Complex(t) => mixed_norm(t, &spec)?,
    };
    writeln!(out, "{}", sig15(value))?;
    Ok(0)
}

fn scalar_text<S: Scalar>(x: S) -> String {
    if !S::IS_COMPLEX {
        return sig15(x.re());
    }
    let im = x.im();
    let sign = if im < 0.0 || (im == 0.0 && im.is_sign_negative()) { "-" } else { "+" };
    format!("{}{sign}{}i", sig15(x.re()), sig15(im.abs()))
}

fn print_estimate<S: Scalar>(est: &NormEstimate<S>, out: &mut impl Write) -> Result<()> {
    let witness: Vec<String> = est
        .witness
        .iter()
        .map(|v| v.iter().map(|&x| scalar_text(x)).collect::<Vec<_>>().join(","))
        .collect();
    writeln!(
        out,
        "{} {} {} {}",
        sig15(est.value),
        est.kind,
        est.iterations,
        witness.join(" ")
    )?;
    Ok(())
}

fn opnorm_cmd(a: OpnormArgs, out: &mut impl Write) -> Result<u8> {
    let file = parse_tensor_file(&fs::read_to_string(&a.tensor)?)?;
    let form = form_from_file(file, a.p, a.s)?;
    let opts = NormOptions {
        restarts: a.restarts,
        max_iters: a.max_iters,
        tol: a.tol,
        ..NormOptions::default()
    };
    let method = Method::from(a.method);
    match form {
        AnyForm::Real(f) => print_estimate(&operator_norm(&f, method, &opts, a.seed)?, out)?,
        AnyForm::Complex(f) => print_estimate(&operator_norm(&f, method, &opts, a.seed)?, out)?,
    }
    Ok(0)
}

fn generated<S: RandomScalar>(a: &GenerateArgs) -> Result<MultilinearForm<S>> {
    let opts = NormOptions {
        restarts: a.restarts,
        ..NormOptions::default()
    };
    let p = domain_p(a.p.clone(), a.m)?;
    Ok(match a.kind {
        GenKind::Ksz => ksz_random::<S>(a.m, a.n, &p, a.seed, a.trials, &opts)?.form,
        GenKind::KszVector => ksz_vector::<S>(a.m, a.n, &p, a.s, a.seed, a.trials, &opts)?.form,
        GenKind::Sign => MultilinearForm::new(random_unimodular_tensor(vec![a.n; a.m], None, a.seed)?, p)?,
        GenKind::Gaussian => MultilinearForm::new(random_gaussian_tensor(vec![a.n; a.m], None, a.seed)?, p)?,
        GenKind::Extremizer | GenKind::Degenerate => unreachable!("real-only kinds are handled by the caller"),
    })
}

fn generate(a: GenerateArgs, out: &mut impl Write) -> Result<u8> {
    let real_only = matches!(a.kind, GenKind::Extremizer | GenKind::Degenerate);
    if real_only && a.field == Field::Complex {
        return Err(Error::Unsupported(format!("{:?} forms are real", a.kind).to_lowercase()));
    }
    let mut buf = Vec::new();
    match (a.kind, a.field) {
        (GenKind::Extremizer, _) => write_form(&littlewood_extremizer(), None, &mut buf)?,
        (GenKind::Degenerate, _) => {
            let opts = NormOptions {
                restarts: a.restarts,
                ..NormOptions::default()
            };
            let p = domain_p(a.p.clone(), a.m)?;
            let d = degenerate_counterexample(a.m, a.n, &p, a.seed, a.trials, &opts)?;
            write_form(&d.form, Some(a.seed), &mut buf)?;
        }
        (_, Field::Real) => write_form(&generated::<f64>(&a)?, Some(a.seed), &mut buf)?,
        (_, Field::Complex) => write_form(&generated::<Complex64>(&a)?, Some(a.seed), &mut buf)?,
    }
    match &a.out {
        Some(path) => atomic_write(path, &buf)?,
        None => out.write_all(&buf)?,
    }
    Ok(0)
}

fn atomic_write(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn experiment(a: ExperimentArgs, out: &mut impl Write) -> Result<u8> {
    let text = fs::read_to_string(&a.config)?;
    let cfg = ExperimentConfig::parse(&text)?;
    fs::create_dir_all(&a.out_dir)?;
    let report = run_experiment(&cfg)?;
    let (csv, json) = report.write_outputs(&a.out_dir)?;
    writeln!(out, "{} {}", report.verdict, report.headline)?;
    writeln!(out, "csv {}", csv.display())?;
    writeln!(out, "json {}", json.display())?;
    Ok(if report.verdict == Verdict::Pass { 0 } else { 1 })
}
