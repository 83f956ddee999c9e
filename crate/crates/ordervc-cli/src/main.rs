//! `ordervc`: compatibility queries, order enumeration, VC-dimension
//! searches, shattered-set constructions and their verification, proof
//! replay, and certificate I/O.
//!
//! Exit codes: 0 success/verified, 1 verification failure, 2 usage or IO
//! error, 3 exact search truncated by budget.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ordervc::construct::{
    proofcheck_thm1_upper, thm1_shattered_set, thm2_g_family, thm2_h_family, verify_property_star,
    ConstructionFamily, StarMode, StarReport,
};
use ordervc::dot::family_to_dot;
use ordervc::enumerate::{all_partial_orders, all_total_orders, Family};
use ordervc::json;
use ordervc::shatter::{vc_dimension, verify_certificate, SearchConfig, Termination};
use ordervc::Error;

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Writes a line to stdout, surfacing IO failures (a closed pipe ends the
/// run cleanly rather than panicking).
fn writeln_stdout(args: std::fmt::Arguments<'_>) -> Result<(), Error> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    out.write_fmt(args)
        .and_then(|()| out.write_all(b"\n"))
        .map_err(|e| Error::Io {
            path: "stdout".into(),
            detail: e.to_string(),
        })
}

macro_rules! outln {
    ($($arg:tt)*) => {
        writeln_stdout(format_args!($($arg)*))?
    };
}

#[derive(Parser)]
#[command(
    name = "ordervc",
    version,
    about = "Order compatibility, shattering and VC-dimension toolkit"
)]
struct Cli {
    /// Worker threads (default: machine parallelism; env ORDERVC_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two orders are compatible.
    Compat(CompatArgs),
    /// Enumerate all partial or total orders on [n].
    Enumerate(EnumerateArgs),
    /// Exact VC-dimension of a witness family grounded on another family.
    Vc(VcArgs),
    /// Generate a shattered-set construction.
    Construct(ConstructArgs),
    /// Verify the flip property of a construction over subsets.
    VerifyStar(VerifyStarArgs),
    /// Replay the upper-bound argument on a shattered set of total orders.
    Proofcheck(ProofcheckArgs),
    /// Re-verify a shattering certificate file.
    CheckCert(CheckCertArgs),
}

#[derive(Args)]
struct CompatArgs {
    /// First order as inline JSON ({"n":..,"relations":[..]} or {"n":..,"seq":[..]}).
    #[arg(long)]
    a: String,
    /// Second order as inline JSON.
    #[arg(long)]
    b: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Partial,
    Total,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    /// Print only the number of orders.
    #[arg(long)]
    count_only: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Table,
}

#[derive(Args)]
struct VcArgs {
    #[arg(long)]
    ground: KindArg,
    #[arg(long)]
    witness: KindArg,
    #[arg(long)]
    n: usize,
    /// Wall-clock budget in seconds; when exceeded the run reports a
    /// certified lower bound and exits with code 3.
    #[arg(long)]
    budget: Option<u64>,
    /// Write the shattering certificate to this file.
    #[arg(long)]
    emit_cert: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Thm1,
    Thm2g,
    Thm2h,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    which: WhichArg,
    #[arg(long)]
    n: usize,
    /// Write Graphviz DOT (one comment block per part).
    #[arg(long)]
    emit_dot: Option<PathBuf>,
    /// Write the family as JSON.
    #[arg(long)]
    emit_json: Option<PathBuf>,
    /// Write the construction's total orders (thm1 only) for `proofcheck --set`.
    #[arg(long)]
    emit_orders: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct VerifyStarArgs {
    #[arg(long)]
    which: WhichArg,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Sample count for sampled mode.
    #[arg(long, default_value_t = 100_000)]
    count: u64,
    /// Seed for sampled mode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Args)]
struct ProofcheckArgs {
    /// JSON file with the shattered set: {"n":K,"set":[{"n":K,"seq":[..]},..]}.
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Args)]
struct CheckCertArgs {
    /// Certificate JSON file.
    cert: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("ORDERVC_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("ordervc: failed to configure {t} threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Io { path, detail }) if path == "stdout" && detail.contains("Broken pipe") => {
            ExitCode::from(EXIT_OK)
        }
        Err(e) => {
            eprintln!("ordervc: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NotShattered | Error::StrategyFailure { .. } => EXIT_VERIFY_FAIL,
        _ => EXIT_USAGE,
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Compat(args) => {
            let a = json::parse_order(&args.a)?;
            let b = json::parse_order(&args.b)?;
            outln!("{}", a.compatible(&b)?);
            Ok(EXIT_OK)
        }
        Command::Enumerate(args) => run_enumerate(args),
        Command::Vc(args) => run_vc(args),
        Command::Construct(args) => run_construct(args),
        Command::VerifyStar(args) => run_verify_star(args),
        Command::Proofcheck(args) => run_proofcheck(args),
        Command::CheckCert(args) => run_check_cert(args),
    }
}

fn run_enumerate(args: EnumerateArgs) -> Result<u8, Error> {
    match args.kind {
        KindArg::Total => {
            let orders = all_total_orders(args.n)?;
            if args.count_only {
                outln!("{}", orders.len());
            } else {
                for t in &orders {
                    let doc = json::total_to_json(t);
                    outln!("{}", serde_json::to_string(&doc).expect("serializable"));
                }
            }
        }
        KindArg::Partial => {
            let orders = all_partial_orders(args.n)?;
            if args.count_only {
                outln!("{}", orders.len());
            } else {
                for p in &orders {
                    let doc = json::order_to_json(p);
                    outln!("{}", serde_json::to_string(&doc).expect("serializable"));
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn family_of(kind: KindArg, n: usize) -> Result<Family, Error> {
    match kind {
        KindArg::Partial => Family::all_partial(n),
        KindArg::Total => Family::all_total(n),
    }
}

fn kind_name(kind: KindArg) -> &'static str {
    match kind {
        KindArg::Partial => "partial",
        KindArg::Total => "total",
    }
}

/// Reference value or proven range for the computed dimension, mirroring the
/// small-n case split (n = 1, 2, 3 special; general rule from n = 4 on).
fn vc_reference(ground: KindArg, witness: KindArg, n: usize) -> String {
    match (ground, witness) {
        (KindArg::Total, KindArg::Partial) => match n {
            1 | 2 => format!("= n-1 = {}", n - 1),
            3 => "= 3".to_string(),
            _ => format!("= floor(n^2/4) = {}", n * n / 4),
        },
        (KindArg::Partial, KindArg::Total) => {
            let lower = if n >= 4 {
                (2 * (n - 3)).max(3 * (n / 2 - 1))
            } else {
                0
            };
            let upper = (n as f64 * (n as f64).log2()).floor() as usize;
            format!("in [{lower}, {upper}]")
        }
        (KindArg::Total, KindArg::Total) => {
            if n >= 2 {
                "= 1 (total orders are rigid)".to_string()
            } else {
                "= 0".to_string()
            }
        }
        (KindArg::Partial, KindArg::Partial) => "open".to_string(),
    }
}

fn run_vc(args: VcArgs) -> Result<u8, Error> {
    let ground = family_of(args.ground, args.n)?;
    let witnesses = family_of(args.witness, args.n)?;
    let config = SearchConfig {
        budget: args.budget.map(Duration::from_secs),
    };
    let report = vc_dimension(&ground, &witnesses, &config)?;
    if let Some(path) = &args.emit_cert {
        json::save_certificate(path, &report.certificate)?;
    }
    match args.format {
        FormatArg::Json => {
            let mut doc = json::vc_report_to_json(&report);
            doc["n"] = args.n.into();
            doc["ground"] = kind_name(args.ground).into();
            doc["witness"] = kind_name(args.witness).into();
            outln!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
        }
        FormatArg::Table => {
            outln!(
                "{:>2}  {:<7}  {:<7}  {:>9}  {:<8}  reference",
                "n",
                "ground",
                "witness",
                "dimension",
                "complete"
            );
            outln!(
                "{:>2}  {:<7}  {:<7}  {:>9}  {:<8}  {}",
                args.n,
                kind_name(args.ground),
                kind_name(args.witness),
                report.dimension,
                report.exhaustion.search_complete,
                vc_reference(args.ground, args.witness, args.n),
            );
        }
        FormatArg::Text => {
            outln!("dimension {}", report.dimension);
            outln!(
                "search_complete {} ({:?})",
                report.exhaustion.search_complete,
                report.exhaustion.termination
            );
            outln!("candidates_tested {}", report.exhaustion.candidates_tested);
        }
    }
    if report.exhaustion.termination == Termination::Budget {
        Ok(EXIT_BUDGET)
    } else {
        Ok(EXIT_OK)
    }
}

fn build_family(which: WhichArg, n: usize) -> Result<ConstructionFamily, Error> {
    match which {
        WhichArg::Thm1 => Ok(thm1_shattered_set(n)?.0),
        WhichArg::Thm2g => thm2_g_family(n),
        WhichArg::Thm2h => thm2_h_family(n),
    }
}

fn run_construct(args: ConstructArgs) -> Result<u8, Error> {
    let fam = build_family(args.which, args.n)?;
    if let Some(path) = &args.emit_dot {
        std::fs::write(path, family_to_dot(&fam)).map_err(|e| Error::Io {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
    }
    if let Some(path) = &args.emit_json {
        let doc = json::family_to_json(&fam);
        std::fs::write(
            path,
            serde_json::to_string_pretty(&doc).expect("serializable"),
        )
        .map_err(|e| Error::Io {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
    }
    if let Some(path) = &args.emit_orders {
        match args.which {
            WhichArg::Thm1 => {
                let (_, orders) = thm1_shattered_set(args.n)?;
                json::save_total_set(path, args.n, &orders)?;
            }
            _ => {
                return Err(Error::InvariantViolation {
                    what: "--emit-orders",
                    detail: "only the thm1 construction yields total orders".into(),
                })
            }
        }
    }
    outln!("kind {}", fam.kind());
    outln!("n {}", fam.n());
    if let Some(k) = fam.k() {
        outln!("k {k}");
    }
    outln!("parts {}", fam.len());
    for (part, name) in fam.parts().iter().zip(fam.part_names()) {
        let edges: Vec<String> = part
            .edges()
            .iter()
            .map(|(u, v)| format!("({u},{v})"))
            .collect();
        outln!("part {name}: {}", edges.join(" "));
    }
    Ok(EXIT_OK)
}

fn run_verify_star(args: VerifyStarArgs) -> Result<u8, Error> {
    let fam = build_family(args.which, args.n)?;
    let mode = match args.mode {
        ModeArg::Exhaustive => StarMode::Exhaustive,
        ModeArg::Sampled => StarMode::Sampled {
            count: args.count,
            seed: args.seed,
        },
    };
    let report = verify_property_star(&fam, mode)?;
    print_star_report(&report, args.format)?;
    if report.passed() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VERIFY_FAIL)
    }
}

fn print_star_report(report: &StarReport, format: FormatArg) -> Result<(), Error> {
    match format {
        FormatArg::Json => {
            let doc = json::star_report_to_json(report);
            outln!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
        }
        _ => {
            outln!(
                "kind {} n {} parts {}",
                report.kind,
                report.n,
                report.part_count
            );
            outln!("subsets_tested {}", report.subsets_tested);
            outln!("failures {}", report.failures.len());
            outln!("fallbacks {}", report.fallback_count);
            for f in report.failures.iter().take(5) {
                outln!("failure subset {:#b}: {}", f.subset, f.detail);
            }
            outln!("{}", if report.passed() { "PASS" } else { "FAIL" });
        }
    }
    Ok(())
}

fn run_proofcheck(args: ProofcheckArgs) -> Result<u8, Error> {
    let (file_n, set) = json::load_total_set(&args.set)?;
    if file_n != args.n {
        return Err(Error::SizeMismatch {
            left: args.n,
            right: file_n,
        });
    }
    let witnesses = Family::all_partial(args.n)?;
    let report = proofcheck_thm1_upper(&set, &witnesses)?;
    match args.format {
        FormatArg::Json => {
            let doc = json::proofcheck_report_to_json(&report);
            outln!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
        }
        _ => {
            outln!(
                "set_size {} edge_count {}",
                report.set_size,
                report.edge_count
            );
            outln!("acyclic {}", report.checks.acyclic);
            outln!("no_parallel_path {}", report.checks.no_parallel_path);
            outln!("triangle_free {}", report.checks.triangle_free);
            outln!(
                "mantel_bound {} ({} <= {})",
                report.checks.mantel_bound,
                report.edge_count,
                report.n * report.n / 4
            );
            outln!("{}", if report.checks.all() { "PASS" } else { "FAIL" });
        }
    }
    if report.checks.all() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VERIFY_FAIL)
    }
}

fn run_check_cert(args: CheckCertArgs) -> Result<u8, Error> {
    let cert = json::load_certificate(&args.cert)?;
    match verify_certificate(&cert) {
        Ok(()) => {
            outln!(
                "certificate verified: ground {}, witnesses {}",
                cert.size(),
                cert.witnesses().len()
            );
            Ok(EXIT_OK)
        }
        Err(defect) => {
            eprintln!("certificate invalid: {defect}");
            Ok(EXIT_VERIFY_FAIL)
        }
    }
}
