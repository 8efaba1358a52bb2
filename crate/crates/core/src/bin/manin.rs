use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use manin::ideal::DEFAULT_GUARD_WORDS;
use manin::report::RunReport;
use manin::runner::{self, FieldChoice, RunConfig};
use manin::scalar::SUPPORTED_PRIMES;
use manin::suites::{SuiteConfig, SuiteId};
use manin::{Error, Mode};

const EXIT_IDENTITY_FAILURE: u8 = 1;
const EXIT_INVALID_CONFIG: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(name = "manin", version, about = "Check multiparameter Manin-matrix identities by ideal membership")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run catalogue entries and write a JSON report.
    Run(Box<RunArgs>),
    /// Print the catalogue of suite ids.
    List,
}

#[derive(Args, Default)]
struct RunArgs {
    /// Suite id, comma-separated ids, or `all`.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Defaults to `n`.
    #[arg(long)]
    m: Option<usize>,
    /// Defaults to `n`.
    #[arg(long)]
    s: Option<usize>,
    /// Degree cap for the series identities.
    #[arg(long)]
    degree: Option<usize>,
    /// generic, one-parameter, classical or yangian.
    #[arg(long)]
    mode: Option<String>,
    /// One of the supported primes; implies `--field fp`.
    #[arg(long)]
    prime: Option<u64>,
    /// `fp` (default) or `q` for exact rationals.
    #[arg(long)]
    field: Option<String>,
    /// Number of seeds, run as 1..=N.
    #[arg(long)]
    seeds: Option<u64>,
    /// Explicit comma-separated seeds; overrides `--seeds`.
    #[arg(long)]
    seed_list: Option<String>,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Largest graded component the ideal engine may build.
    #[arg(long)]
    guard_words: Option<usize>,
    /// Record wall-clock milliseconds per report (breaks byte-identical output).
    #[arg(long)]
    timings: bool,
    /// Key-value file with the same fields; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

/// `key = value` lines; `#` starts a comment.
fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, Error> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("{}:{}: expected key = value", path.display(), no + 1)))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, Error> {
    v.parse().map_err(|_| invalid(format!("bad value {v:?} for {key}")))
}

/// Fills unset flags from the config file.
fn merge(mut a: RunArgs, file: &BTreeMap<String, String>) -> Result<RunArgs, Error> {
    for (k, v) in file {
        match k.as_str() {
            "suite" => a.suite = a.suite.or(Some(v.clone())),
            "n" => a.n = a.n.or(Some(parse(k, v)?)),
            "m" => a.m = a.m.or(Some(parse(k, v)?)),
            "s" => a.s = a.s.or(Some(parse(k, v)?)),
            "degree" => a.degree = a.degree.or(Some(parse(k, v)?)),
            "mode" => a.mode = a.mode.or(Some(v.clone())),
            "prime" => a.prime = a.prime.or(Some(parse(k, v)?)),
            "field" => a.field = a.field.or(Some(v.clone())),
            "seeds" => a.seeds = a.seeds.or(Some(parse(k, v)?)),
            "seed-list" => a.seed_list = a.seed_list.or(Some(v.clone())),
            "out" => a.out = a.out.or(Some(PathBuf::from(v))),
            "workers" => a.workers = a.workers.or(Some(parse(k, v)?)),
            "guard-words" => a.guard_words = a.guard_words.or(Some(parse(k, v)?)),
            "timings" => a.timings = a.timings || parse::<bool>(k, v)?,
            other => return Err(invalid(format!("unknown config key {other:?}"))),
        }
    }
    Ok(a)
}

fn parse_suites(s: &str) -> Result<Vec<SuiteId>, Error> {
    if s == "all" {
        return Ok(SuiteId::ALL.to_vec());
    }
    s.split(',').map(|x| x.trim().parse()).collect()
}

fn build_config(args: RunArgs) -> Result<(RunConfig, PathBuf), Error> {
    let args = match &args.config {
        Some(p) => {
            let file = read_config_file(p)?;
            merge(args, &file)?
        }
        None => args,
    };
    let suites = parse_suites(args.suite.as_deref().ok_or_else(|| invalid("--suite is required"))?)?;
    let n = args.n.unwrap_or(2);
    let mode: Mode = args.mode.as_deref().unwrap_or("generic").parse()?;
    let field = match (args.field.as_deref(), args.prime) {
        (Some("q"), Some(_)) => return Err(invalid("--prime conflicts with --field q")),
        (Some("q"), None) => FieldChoice::Rationals,
        (None | Some("fp"), Some(p)) => FieldChoice::Prime(p),
        (None | Some("fp"), None) => FieldChoice::default_prime(),
        (Some(other), _) => return Err(invalid(format!("unknown field {other:?}; use fp or q"))),
    };
    let seeds = match (&args.seed_list, args.seeds) {
        (Some(list), _) => list
            .split(',')
            .map(|x| parse::<u64>("seed-list", x.trim()))
            .collect::<Result<Vec<_>, _>>()?,
        (None, Some(k)) => (1..=k).collect(),
        (None, None) => vec![1],
    };
    let suite = SuiteConfig {
        n,
        m: args.m.unwrap_or(n),
        s: args.s.unwrap_or(n),
        degree: args.degree,
        mode,
        guard_words: args.guard_words.unwrap_or(DEFAULT_GUARD_WORDS),
        timings: args.timings,
    };
    let cfg = RunConfig {
        suites,
        suite,
        field,
        seeds,
        workers: args.workers,
    };
    cfg.validate()?;
    Ok((cfg, args.out.unwrap_or_else(|| PathBuf::from("manin-report.json"))))
}

fn print_table(report: &RunReport) {
    println!(
        "{:<20} {:>5} {:>6} {:>8}  {:<40} {:<10} result",
        "suite", "seeds", "cases", "failures", "controls (detected/required/applicable)", "nonvacuity"
    );
    for s in &report.summary {
        let controls = s
            .controls
            .iter()
            .map(|c| format!("{} {}/{}/{}", c.mutation.name(), c.detected_seeds, c.required, c.applicable_seeds))
            .collect::<Vec<_>>()
            .join(", ");
        println!(
            "{:<20} {:>5} {:>6} {:>8}  {:<40} {:<10} {}",
            s.id,
            s.seeds,
            s.cases,
            s.positive_failures,
            controls,
            if s.nonvacuity_ok { "ok" } else { "MISSING" },
            if s.passed { "PASS" } else { "FAIL" }
        );
    }
    if let Some(why) = &report.aborted {
        println!("aborted: {why}");
    }
}

fn write_report(path: &Path, report: &RunReport) -> Result<(), String> {
    let mut json = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    json.push('\n');
    fs::write(path, json).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let args = match cli.command {
        Command::List => {
            for id in SuiteId::ALL {
                println!("{id}");
            }
            return ExitCode::SUCCESS;
        }
        Command::Run(args) => *args,
    };
    let (cfg, out) = match build_config(args) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            match &e {
                Error::UnsupportedPrime(_) => eprintln!("supported primes: {SUPPORTED_PRIMES:?}"),
                Error::InvalidConfig(m) if m.contains("known:") => {}
                _ => eprintln!("known suites: {}", SuiteId::catalogue()),
            }
            return ExitCode::from(EXIT_INVALID_CONFIG);
        }
    };
    let report = match runner::run(&cfg) {
        Ok(r) => r,
        Err(e @ (Error::InvalidConfig(_) | Error::UnsupportedPrime(_) | Error::ConstraintUnsatisfiable(_))) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_CONFIG);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IDENTITY_FAILURE);
        }
    };
    if let Err(e) = write_report(&out, &report) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INVALID_CONFIG);
    }
    print_table(&report);
    if report.aborted.is_some() {
        ExitCode::from(EXIT_GUARD)
    } else if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_IDENTITY_FAILURE)
    }
}
