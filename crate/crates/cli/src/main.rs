use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermdens::cycles::{assemble_intersection, decompose_special_cycle, mu_q};
use hermdens::density::alpha_poly;
use hermdens::oracle::{calibrate_convention, counting_precision, normalize_count, DEFAULT_BUDGET};
use hermdens::poly::{rat, rat_string};
use hermdens::verify::{self, all_pass, Certification, VerificationOutcome};
use hermdens::{
    count_representations, normalize, parse_gram, CanonicalForm, Convention, CountJob, Error, FieldParams, SType,
};
use serde::Serialize;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "hermdens", version, about = "Local densities and intersection numbers of rank-2 hermitian lattices")]
struct Cli {
    /// Unit u₀ in π₀ = u₀·p.
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    pi0_unit: i64,
    /// Maximum number of candidate evaluations for brute-force counts.
    #[arg(long, global = true, env = "HERMDENS_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Worker threads for counting (0 = all cores).
    #[arg(long, global = true, env = "HERMDENS_THREADS", default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormKind {
    Diag,
    Anti,
}

#[derive(Clone, Copy, ValueEnum)]
enum SArg {
    Split,
    Nonsplit,
    Hyperbolic,
}

impl From<SArg> for SType {
    fn from(s: SArg) -> Self {
        match s {
            SArg::Split => SType::Split,
            SArg::Nonsplit => SType::NonSplit,
            SArg::Hyperbolic => SType::Hyperbolic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Herm,
    Hermdual,
}

#[derive(Subcommand)]
enum Command {
    /// The density polynomial α(S,T,X) with its value and derivative at X = 1.
    Density {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum)]
        form: FormKind,
        #[arg(long)]
        a: i32,
        #[arg(long, default_value_t = 0)]
        b: i32,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        eps1: i8,
        #[arg(long, value_enum)]
        s: SArg,
    },
    /// Brute-force representation count of T by S modulo π₀^ℓ.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u32,
        #[arg(long = "S")]
        s: String,
        #[arg(long = "T")]
        t: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::Hermdual)]
        convention: ConventionArg,
    },
    /// μ_q(T) for T of fundamental invariant (2a+1, 2b+1).
    Mu {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
    },
    /// Canonical form of a rank-2 Gram matrix.
    Normalize {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        gram: String,
    },
    /// Components of the special cycle Z^Kra(x) for x of valuation a.
    Decompose {
        #[arg(long)]
        a: i64,
    },
    /// Z^Kra(x)·Z^Kra(y) assembled from the pairwise intersection table.
    Assemble {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
    },
    /// Choose the counting convention reproducing the unimodular densities.
    Calibrate {
        #[arg(long)]
        p: u64,
    },
    /// Exact identity and oracle checks; exits 1 if any case fails
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args)]
struct CertifyFlag {
    /// Also certify each identity for all q by sampling past its q-degree bound.
    #[arg(long)]
    certify: bool,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// μ_q(T)·α(S,S) = 2·α′(S,T) over an (a, b) grid.
    Kr {
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 4, 5, 7, 9, 11, 13])]
        q: Vec<u64>,
        #[arg(long, default_value_t = 10)]
        a_max: i64,
        #[command(flatten)]
        certify: CertifyFlag,
    },
    /// Brute-force α(S ⊕ 𝓗^r, T) against α(S,T,q^{−2r}).
    Interpolation {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [SArg::Split, SArg::Nonsplit, SArg::Hyperbolic])]
        s: Vec<SArg>,
    },
    /// Stabilized brute-force α(S,T) against α(S,T,1) for T with entries of π₀-valuation ≤ 1.
    ValueAtOne {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        max_ell: u32,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [SArg::Split, SArg::Nonsplit])]
        s: Vec<SArg>,
    },
    /// Orbit-sum expression against the closed density formulas.
    Hironaka {
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7])]
        q: Vec<u64>,
        #[arg(long, default_value_t = 6)]
        a_max: i64,
        /// Also evaluate the direct orbit sum over Y (slow).
        #[arg(long)]
        orbit_sum: bool,
        #[command(flatten)]
        certify: CertifyFlag,
    },
    /// The α(𝓗,·) recursion through tabulated and explicit children.
    Recursion {
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7])]
        q: Vec<u64>,
        #[arg(long, default_value_t = 13)]
        inv_max: i32,
    },
    /// I + II + III against μ_q.
    Assembly {
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 4, 5, 7, 9])]
        q: Vec<u64>,
        #[arg(long, default_value_t = 12)]
        ab_max: i64,
        #[command(flatten)]
        certify: CertifyFlag,
    },
}

#[derive(Serialize)]
struct DensityOut {
    q: u64,
    form: &'static str,
    a: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps1: Option<i8>,
    s: &'static str,
    coeffs: Vec<String>,
    value_at_1: String,
    alpha_prime: String,
}

#[derive(Serialize)]
struct CountOut {
    count: String,
    normalized_alpha: String,
    ell: u32,
    stable: bool,
}

#[derive(Serialize)]
struct MuOut {
    mu: String,
}

#[derive(Serialize)]
struct NormalizeOut {
    form: &'static str,
    a: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps1: Option<i8>,
    fundamental_invariant: (i32, i32),
    chi: i8,
}

#[derive(Serialize)]
struct Certified {
    outcomes: Vec<VerificationOutcome>,
    certifications: Vec<Certification>,
}

/// Result of a command: its JSON value and whether it counts as a pass.
struct Report {
    value: Value,
    pass: bool,
}

impl Report {
    fn ok<T: Serialize>(v: &T) -> Result<Self, Error> {
        Ok(Report { value: to_value(v), pass: true })
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn form_fields(t: &CanonicalForm) -> (&'static str, i32, Option<i32>, Option<i8>) {
    match *t {
        CanonicalForm::Diagonal { a, b, eps1 } => ("diag", a, Some(b), Some(eps1)),
        CanonicalForm::AntiDiagonal { a } => ("anti", a, None, None),
    }
}

fn density(q: u64, t: CanonicalForm, s: SType) -> Result<Report, Error> {
    let poly = alpha_poly(q, &t, s)?;
    let (form, a, b, eps1) = form_fields(&t);
    Report::ok(&DensityOut {
        q,
        form,
        a,
        b,
        eps1,
        s: s.name(),
        coeffs: poly.coeff_strings(),
        value_at_1: rat_string(&poly.eval(&rat(1))),
        alpha_prime: rat_string(&-poly.derivative().eval(&rat(1))),
    })
}

fn count(cli: &Cli, p: u64, ell: u32, s: &str, t: &str, conv: Convention) -> Result<Report, Error> {
    let params = FieldParams::with_pi0_unit(p, cli.pi0_unit)?;
    let prec = counting_precision(params, ell + 1);
    let (s, t) = (parse_gram(s, params, Some(prec))?, parse_gram(t, params, Some(prec))?);
    let (m, n) = (s.n(), t.n());
    let run = |ell: u32| {
        let job = CountJob::new(s.clone(), t.clone(), ell)
            .with_convention(conv)
            .with_budget(cli.budget)
            .with_threads(cli.threads);
        count_representations(&job)
    };
    let c = run(ell)?;
    let alpha = normalize_count(params.q, ell, m, n, conv, c);
    let stable = match run(ell + 1) {
        Ok(next) => normalize_count(params.q, ell + 1, m, n, conv, next) == alpha,
        Err(Error::Budget { .. }) | Err(Error::Precision(_)) => false,
        Err(e) => return Err(e),
    };
    Report::ok(&CountOut { count: c.to_string(), normalized_alpha: rat_string(&alpha), ell, stable })
}

fn outcomes(v: Vec<VerificationOutcome>, certs: Option<Vec<Certification>>) -> Result<Report, Error> {
    let mut pass = all_pass(&v);
    let value = match certs {
        Some(c) => {
            pass &= c.iter().all(|c| c.certified);
            to_value(&Certified { outcomes: v, certifications: c })
        }
        None => to_value(&v),
    };
    Ok(Report { value, pass })
}

fn grid(a_max: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=a_max).flat_map(|a| (0..=a).map(move |b| (a, b)))
}

fn run_verify(cli: &Cli, cmd: &VerifyCommand) -> Result<Report, Error> {
    match cmd {
        VerifyCommand::Kr { q, a_max, certify } => {
            let certs = certify
                .certify
                .then(|| grid(*a_max).map(|(a, b)| verify::certify_kr(a, b)).collect::<Result<Vec<_>, _>>())
                .transpose()?;
            outcomes(verify::verify_kr(q, *a_max)?, certs)
        }
        VerifyCommand::Interpolation { p, ell, r, s } => {
            let mut cases = Vec::new();
            for &st in s {
                for t in [
                    CanonicalForm::Diagonal { a: 0, b: 0, eps1: 1 },
                    CanonicalForm::Diagonal { a: 0, b: 0, eps1: -1 },
                    CanonicalForm::AntiDiagonal { a: 0 },
                ] {
                    cases.push((t, st.into()));
                }
            }
            outcomes(verify::verify_interpolation(*p, *ell, *r, &cases, cli.budget, cli.threads)?, None)
        }
        VerifyCommand::ValueAtOne { p, max_ell, s } => {
            let mut cases = Vec::new();
            for &st in s {
                for t in low_valuation_forms() {
                    cases.push((t, st.into()));
                }
            }
            outcomes(verify::verify_value_at_one(*p, &cases, *max_ell, cli.budget, cli.threads)?, None)
        }
        VerifyCommand::Hironaka { q, a_max, orbit_sum, certify } => {
            let certs = certify
                .certify
                .then(|| -> Result<Vec<_>, Error> {
                    let mut out = Vec::new();
                    for (a, b) in grid(*a_max) {
                        for (e1, e2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                            out.extend(verify::certify_hironaka(a, b, e1, e2)?);
                        }
                    }
                    Ok(out)
                })
                .transpose()?;
            outcomes(verify::verify_hironaka(q, *a_max, *orbit_sum)?, certs)
        }
        VerifyCommand::Recursion { q, inv_max } => outcomes(verify::verify_recursion_suite(q, *inv_max)?, None),
        VerifyCommand::Assembly { q, ab_max, certify } => {
            let certs = certify
                .certify
                .then(|| {
                    (0..=*ab_max)
                        .flat_map(|a| (0..=*ab_max).map(move |b| (a, b)))
                        .map(|(a, b)| verify::certify_assembly(a, b))
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?;
            outcomes(verify::verify_assembly(q, *ab_max)?, certs)
        }
    }
}

/// Every canonical form whose entries have π₀-valuation at most 1.
fn low_valuation_forms() -> Vec<CanonicalForm> {
    let mut v = Vec::new();
    for (a, b) in [(0, 0), (1, 0), (1, 1)] {
        for eps1 in [1, -1] {
            v.push(CanonicalForm::Diagonal { a, b, eps1 });
        }
    }
    v.push(CanonicalForm::AntiDiagonal { a: 0 });
    v.push(CanonicalForm::AntiDiagonal { a: 1 });
    v
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Density { q, form, a, b, eps1, s } => {
            let t = match form {
                FormKind::Diag => CanonicalForm::diagonal(*a, *b, *eps1)?,
                FormKind::Anti => CanonicalForm::AntiDiagonal { a: *a },
            };
            density(*q, t, (*s).into())
        }
        Command::Count { p, ell, s, t, convention } => {
            let conv = match convention {
                ConventionArg::Herm => Convention::Herm,
                ConventionArg::Hermdual => Convention::HermDual,
            };
            count(cli, *p, *ell, s, t, conv)
        }
        Command::Mu { q, a, b } => Report::ok(&MuOut { mu: mu_q(*q, *a, *b)?.to_string() }),
        Command::Normalize { p, gram } => {
            let params = FieldParams::with_pi0_unit(*p, cli.pi0_unit)?;
            let t = normalize(&parse_gram(gram, params, None)?)?;
            let (form, a, b, eps1) = form_fields(&t);
            Report::ok(&NormalizeOut { form, a, b, eps1, fundamental_invariant: t.fundamental_invariant(), chi: t.chi() })
        }
        Command::Decompose { a } => Report::ok(&decompose_special_cycle(*a)?),
        Command::Assemble { q, a, b } => Report::ok(&assemble_intersection(*q, *a, *b)?),
        Command::Calibrate { p } => {
            let params = FieldParams::with_pi0_unit(*p, cli.pi0_unit)?;
            Report::ok(&calibrate_convention(params, cli.budget, cli.threads)?)
        }
        Command::Verify(v) => run_verify(cli, v),
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}[{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                out.push_str(&format!("{pad}- {i}\n"));
                render_text(x, indent + 1, out);
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        x => x.to_string(),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } | Error::Precision(_) => 3,
        Error::Mismatch(_) | Error::Calibration(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.value),
                Format::Text => {
                    let mut s = String::new();
                    render_text(&report.value, 0, &mut s);
                    print!("{s}");
                }
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
