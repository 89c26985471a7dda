//! `sextica`: sample symmetroid double solids, certify their node sets and
//! query the underlying algebra from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use sextica::bundle::{self, BundleSpec, Expression};
use sextica::codes::{self, CodeWire, NodeCode};
use sextica::cohomology;
use sextica::defect;
use sextica::ideal::{Ideal, IdealWire};
use sextica::pipeline::{self, Certificate, Preset, ReportFormat, Sample, Verdict, Verification};
use sextica::poly::{F2Vector, PrimeField};

const EXIT_DEGENERATE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_DIFFERENT_PRIME: u8 = 4;

#[derive(Parser)]
#[command(name = "sextica", version, about = "Even sets of nodes on symmetroid sextics")]
struct Cli {
    /// Characteristic of the base field.
    #[arg(long = "char", global = true, default_value_t = 32003)]
    characteristic: u64,
    /// Seed for sampling and randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format for commands that summarise runs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    report: Format,
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Md => ReportFormat::Md,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a family member and store Phi, B, w and Sing(B).
    Generate {
        #[arg(long)]
        family: Preset,
    },
    /// Recompute a certificate from its stored sample.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long)]
        sample: Option<PathBuf>,
    },
    /// N-defect of an ideal or of a list of points.
    Defect(DefectArgs),
    /// Cohomology of F(n) or of I_w(5) for a stored sample.
    Cohomology(CohomologyArgs),
    #[command(subcommand)]
    Bundles(BundlesCommand),
    #[command(subcommand)]
    Codes(CodesCommand),
    /// Run families over seeds and primes, writing certificates and a report.
    Certify(CertifyArgs),
    #[command(subcommand)]
    Ideal(IdealCommand),
}

#[derive(Args)]
struct DefectArgs {
    /// Ideal JSON ({char, generators}).
    #[arg(long, conflicts_with = "points")]
    ideal: Option<PathBuf>,
    /// JSON array of points [[x0, x1, x2, x3], ...].
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long = "N", default_value_t = 5)]
    n: u32,
}

#[derive(Args)]
struct CohomologyArgs {
    #[arg(long)]
    sample: PathBuf,
    /// Sheaf to compute; only F is supported.
    #[arg(long, default_value = "F")]
    sheaf: String,
    #[arg(long, allow_hyphen_values = true)]
    twist: Option<i64>,
    /// Compute (h^0, h^1) of I_w(5) instead.
    #[arg(long)]
    iw5: bool,
}

#[derive(Subcommand)]
enum BundlesCommand {
    /// List the arithmetic candidates for 1/2-even sets with their status.
    Enumerate {
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 8)]
        bound: u32,
    },
    /// Cohomology table of a bundle expression.
    Table {
        #[arg(long)]
        spec: PathBuf,
        /// One of e, dual, sym2, wedge2-dual, traceless; omitted gives the derived tables.
        #[arg(long)]
        expression: Option<ExprArg>,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
        to: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExprArg {
    E,
    Dual,
    Sym2,
    Wedge2Dual,
    Traceless,
}

impl From<ExprArg> for Expression {
    fn from(e: ExprArg) -> Self {
        match e {
            ExprArg::E => Expression::E,
            ExprArg::Dual => Expression::Dual,
            ExprArg::Sym2 => Expression::Sym2,
            ExprArg::Wedge2Dual => Expression::Wedge2Dual,
            ExprArg::Traceless => Expression::Traceless,
        }
    }
}

#[derive(Subcommand)]
enum CodesCommand {
    /// Dimension and canonical basis of a code.
    Dim {
        #[arg(long)]
        code: PathBuf,
    },
    /// Whether a set (comma-separated node indices) is a minimal element.
    Minimal {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// max(0, code_dim - defect_sing).
    Bound {
        #[arg(long)]
        code_dim: u64,
        #[arg(long)]
        defect_sing: u64,
    },
}

#[derive(Args)]
struct CertifyArgs {
    /// Families to run; all presets when omitted.
    #[arg(long, value_delimiter = ',')]
    family: Vec<Preset>,
    /// Number of consecutive seeds starting at --seed.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Primes to run at; --char when omitted. Two or more adds an agreement check.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
}

#[derive(Subcommand)]
enum IdealCommand {
    /// Hilbert function values, polynomial values and dimension.
    Hilbert {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, default_value_t = 10)]
        upto: i64,
    },
    /// Degree of a zero-dimensional scheme.
    Degree {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        saturate: bool,
    },
    /// Equality of two ideals.
    Equal {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn load_ideal(path: &Path) -> Result<Ideal> {
    let wire: IdealWire = read_json(path)?;
    Ok(Ideal::from_wire(&wire)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let field = PrimeField::new(cli.characteristic)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match cli.command {
        Command::Generate { family } => {
            let run = pipeline::run_family(family, cli.seed, field)?;
            if let (Some(out), Some(sample)) = (&cli.out, &run.sample) {
                write_json(out, sample)?;
                info!("sample written to {}", out.display());
            }
            print_json(&run.certificate)?;
            Ok(if run.certificate.verdict == Verdict::Degenerate { EXIT_DEGENERATE } else { 0 })
        }
        Command::Verify { certificate, sample } => {
            let cert: Certificate = read_json(&certificate)?;
            let sample: Option<Sample> = sample.as_deref().map(read_json).transpose()?;
            let result = pipeline::verify_certificate(&cert, sample.as_ref())?;
            print_json(&result)?;
            Ok(match result {
                Verification::Verified => 0,
                Verification::Mismatch { .. } => EXIT_MISMATCH,
                Verification::DifferentPrime { .. } => EXIT_DIFFERENT_PRIME,
            })
        }
        Command::Defect(args) => {
            let report = match (&args.ideal, &args.points) {
                (Some(path), None) => {
                    let ideal = load_ideal(path)?.saturate(&mut rng)?;
                    defect::defect_hilbert(&ideal, args.n)?
                }
                (None, Some(path)) => {
                    let pts: Vec<[u64; 4]> = read_json(path)?;
                    defect::defect_eval(field, &pts, args.n)?
                }
                _ => bail!("give exactly one of --ideal or --points"),
            };
            print_json(&report)?;
            Ok(0)
        }
        Command::Cohomology(args) => {
            let sample: Sample = read_json(&args.sample)?;
            if args.iw5 {
                let (h0, h1) = cohomology::hypercoh_iw5(&sample.phi)?;
                print_json(&serde_json::json!({ "h0": h0, "h1": h1 }))?;
            } else {
                if args.sheaf != "F" {
                    bail!("unsupported sheaf {}; only F is available", args.sheaf);
                }
                let n = args.twist.context("--twist is required for --sheaf F")?;
                let h = cohomology::sheaf_f_cohomology(&sample.phi, n)?;
                print_json(&serde_json::json!({ "twist": n, "h0": h[0], "h1": h[1], "h2": h[2] }))?;
            }
            Ok(0)
        }
        Command::Bundles(BundlesCommand::Enumerate { json, bound }) => {
            let cands = bundle::enumerate_candidates(bound);
            if json {
                print_json(&cands)?;
            } else {
                println!("| k | m2 | m3 | m4 | nodes | status |\n|---|---|---|---|---|---|");
                for c in cands {
                    println!("| {} | {} | {} | {} | {} | {:?} |", c.k, c.m2, c.m3, c.m4, c.nodes, c.status);
                }
            }
            Ok(0)
        }
        Command::Bundles(BundlesCommand::Table { spec, expression, from, to }) => {
            let spec: BundleSpec = read_json(&spec)?;
            if let bundle::Validation::Rejected(why) = spec.validate() {
                eprintln!("warning: spec rejected: {why}");
            }
            match expression {
                Some(e) => print_json(&bundle::cohomology_table(&spec, e.into(), from..=to, field)?)?,
                None => print_json(&bundle::derived_dim_tables(&spec, field)?)?,
            }
            Ok(0)
        }
        Command::Codes(cmd) => codes_command(cmd),
        Command::Certify(args) => certify(args, cli.seed, cli.characteristic, cli.out.as_deref(), cli.report.into()),
        Command::Ideal(cmd) => ideal_command(cmd, &mut rng),
    }
}

fn codes_command(cmd: CodesCommand) -> Result<u8> {
    match cmd {
        CodesCommand::Dim { code } => {
            let c: NodeCode = read_json(&code)?;
            let basis: CodeWire = c.clone().into();
            print_json(&serde_json::json!({ "dim": codes::code_dim(&c), "basis": basis.generators }))?;
        }
        CodesCommand::Minimal { code, set } => {
            let c: NodeCode = read_json(&code)?;
            if let Some(&bad) = set.iter().find(|&&i| i >= c.ambient()) {
                bail!("node {bad} outside ambient size {}", c.ambient());
            }
            let w = F2Vector::from_support(c.ambient(), set);
            print_json(&serde_json::json!({ "minimal": codes::is_minimal(&w, &c)? }))?;
        }
        CodesCommand::Bound { code_dim, defect_sing } => {
            print_json(&serde_json::json!({ "t2_lower": codes::torsion_lower_bound(code_dim, defect_sing) }))?;
        }
    }
    Ok(0)
}

fn ideal_command(cmd: IdealCommand, rng: &mut ChaCha8Rng) -> Result<u8> {
    match cmd {
        IdealCommand::Hilbert { ideal, upto } => {
            let i = load_ideal(&ideal)?;
            let hf: Vec<i64> = (0..=upto).map(|n| i.hilbert_function(n)).collect();
            let hp: Vec<i64> = (0..=upto).map(|n| i.hilbert_polynomial(n)).collect();
            print_json(&serde_json::json!({
                "hilbert_function": hf,
                "hilbert_polynomial": hp,
                "krull_dimension": i.krull_dimension(),
                "projective_dimension": i.projective_dimension(),
            }))?;
        }
        IdealCommand::Degree { ideal, saturate } => {
            let mut i = load_ideal(&ideal)?;
            if saturate {
                i = i.saturate(rng)?;
            }
            print_json(&serde_json::json!({ "degree": i.degree()? }))?;
        }
        IdealCommand::Equal { left, right } => {
            let (a, b) = (load_ideal(&left)?, load_ideal(&right)?);
            print_json(&serde_json::json!({ "equal": a.ideal_equal(&b) }))?;
        }
    }
    Ok(0)
}

fn certify(args: CertifyArgs, seed0: u64, characteristic: u64, out: Option<&Path>, format: ReportFormat) -> Result<u8> {
    let families = if args.family.is_empty() { Preset::ALL.to_vec() } else { args.family };
    let primes = if args.primes.is_empty() { vec![characteristic] } else { args.primes };
    let mut certs = Vec::new();
    let mut disagreements = Vec::new();
    for &family in &families {
        for seed in seed0..seed0 + args.seeds {
            let mut per_prime = Vec::new();
            for &p in &primes {
                let field = PrimeField::new(p)?;
                let run = pipeline::run_family(family, seed, field)?;
                if let Some(dir) = out {
                    let run_dir = dir.join(format!("{family}-{seed}-{p}"));
                    write_json(&run_dir.join("certificate.json"), &run.certificate)?;
                    if let Some(s) = &run.sample {
                        write_json(&run_dir.join("sample.json"), s)?;
                    }
                }
                per_prime.push(run.certificate);
            }
            if let Some(first) = per_prime.first() {
                let key = |c: &Certificate| (c.verdict, c.node_count, c.d_w, c.d_sing);
                for c in &per_prime[1..] {
                    if key(c) != key(first) {
                        disagreements.push(format!("{family} seed {seed}: p = {} and p = {} disagree", first.characteristic, c.characteristic));
                    }
                }
            }
            certs.extend(per_prime);
        }
    }
    let report = pipeline::render_report(&certs, format)?;
    match out {
        Some(dir) => {
            let name = if format == ReportFormat::Md { "report.md" } else { "report.json" };
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), &report)?;
            info!("report written to {}", dir.join(name).display());
        }
        None => print!("{report}"),
    }
    for d in &disagreements {
        eprintln!("warning: {d}");
    }
    Ok(if certs.iter().any(|c| c.verdict == Verdict::Degenerate) { EXIT_DEGENERATE } else { 0 })
}
