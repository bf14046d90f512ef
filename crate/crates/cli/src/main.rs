use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use delpezzo::certify::{certify, FixtureSet, CRITERIA};
use delpezzo::ffield::DEFAULT_FIELD_CAP;
use delpezzo::picard::weyl_group;
use delpezzo::report::{analyze, AnalyzeOptions};
use delpezzo::scan::{run_scan, ScanConfig, ScanKind};
use delpezzo::surface_file::load;
use delpezzo::Error;

#[derive(Parser)]
#[command(
    name = "delpezzo",
    version,
    about = "Exhaustive checks on cubic and degree four del Pezzo surfaces over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of a surface file.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        common: AnalyzeArgs,
        #[arg(long)]
        skip_param: bool,
        #[arg(long)]
        param_only: bool,
    },
    /// Lines and the third-point parameterization only.
    Param {
        path: PathBuf,
        #[command(flatten)]
        common: AnalyzeArgs,
    },
    /// Runs the acceptance checks on the bundled fixtures.
    #[command(name = "paper-check")]
    Certify {
        /// Criteria to run, e.g. `1,2,7`; all by default.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
        /// Replaces a bundled fixture, as `NAME=PATH`.
        #[arg(long = "fixture", value_name = "NAME=PATH")]
        fixtures: Vec<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Conjugacy classes of W(E6) with their H^1.
    WeylTable {
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Invariant checks on random surfaces.
    Scan {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_FIELD_CAP)]
        extension_cap: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Largest field size used.
    #[arg(long, default_value_t = DEFAULT_FIELD_CAP)]
    extension_cap: u64,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Adds per-stage timings, which makes the report nondeterministic.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cubic,
    Dp4,
}

/// Exit status for a library error.
fn exit_code(e: &Error) -> u8 {
    if e.is_out_of_range() {
        2
    } else if e.is_singular() {
        3
    } else {
        1
    }
}

fn write_json(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn run_analyze(path: &Path, args: &AnalyzeArgs, opts: AnalyzeOptions) -> Result<(), (u8, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (1, format!("cannot read {}: {e}", path.display())))?;
    let surface = load(&text).map_err(|e| (exit_code(&e), format!("input failed: {e}")))?;
    let report = analyze(&surface.with_cap(args.extension_cap), opts)
        .map_err(|f| (exit_code(&f.error), f.to_string()))?;
    if let Some(p) = &args.json {
        write_json(p, &report.to_json()).map_err(|m| (1, m))?;
    }
    print!("{}", report.to_text());
    Ok(())
}

fn run_certify(criteria: &[u8], overrides: &[String], json: Option<&Path>) -> Result<bool, String> {
    let mut fx = FixtureSet::bundled();
    for o in overrides {
        let (name, path) = o
            .split_once('=')
            .ok_or_else(|| format!("expected NAME=PATH, got {o}"))?;
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        fx.replace(name, text).map_err(|e| e.to_string())?;
    }
    let list: Vec<u8> = if criteria.is_empty() {
        CRITERIA.collect()
    } else {
        criteria.to_vec()
    };
    let cert = certify(&fx, &list);
    if let Some(p) = json {
        let mut s = serde_json::to_string_pretty(&cert).expect("certificates serialize");
        s.push('\n');
        write_json(p, &s)?;
    }
    print!("{}", cert.to_text());
    Ok(cert.passed())
}

fn weyl_table() -> (String, bool) {
    let g = weyl_group();
    let mut o = String::new();
    writeln!(
        o,
        "{:>5}  {:>5}  {:>5}  {:>5}  {:<28}  h1",
        "class", "order", "trace", "size", "cycle type on 27 lines"
    )
    .unwrap();
    for c in &g.classes {
        let cycles: Vec<String> = c.cycle_type.iter().map(|n| n.to_string()).collect();
        writeln!(
            o,
            "{:>5}  {:>5}  {:>5}  {:>5}  {:<28}  {}",
            c.index,
            c.order,
            c.trace,
            c.size,
            cycles.join(" "),
            c.h1
        )
        .unwrap();
    }
    let orders_ok = g.classes.iter().all(|c| [1, 4, 9].contains(&c.h1.order));
    let shapes_ok = g.classes.iter().all(|c| {
        c.h1.is_trivial() || c.h1.invariant_factors == [2, 2] || c.h1.invariant_factors == [3, 3]
    });
    let squares_ok = g.classes.iter().all(|c| c.h1.is_square());
    let ok = g.classes.len() == 25 && orders_ok && shapes_ok && squares_ok;
    writeln!(o, "{} classes, group order {}", g.classes.len(), g.order()).unwrap();
    writeln!(
        o,
        "nonzero H^1 is Z/2 x Z/2 or Z/3 x Z/3: {}",
        if orders_ok && shapes_ok { "yes" } else { "NO" }
    )
    .unwrap();
    writeln!(
        o,
        "every H^1 order is a square: {}",
        if squares_ok { "yes" } else { "NO" }
    )
    .unwrap();
    (o, ok)
}

fn configure_threads() {
    if let Some(n) = std::env::var("DELPEZZO_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // a second initialization only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let fail = |code: u8, msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(code)
    };
    match cli.command {
        Command::Analyze {
            path,
            common,
            skip_param,
            param_only,
        } => {
            let opts = AnalyzeOptions {
                skip_param,
                param_only,
                timing: common.timing,
            };
            match run_analyze(&path, &common, opts) {
                Ok(()) => ExitCode::SUCCESS,
                Err((code, msg)) => fail(code, msg),
            }
        }
        Command::Param { path, common } => {
            let opts = AnalyzeOptions {
                skip_param: false,
                param_only: true,
                timing: common.timing,
            };
            match run_analyze(&path, &common, opts) {
                Ok(()) => ExitCode::SUCCESS,
                Err((code, msg)) => fail(code, msg),
            }
        }
        Command::Certify {
            criteria,
            fixtures,
            json,
        } => match run_certify(&criteria, &fixtures, json.as_deref()) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::FAILURE,
            Err(msg) => fail(1, msg),
        },
        Command::WeylTable { json } => {
            let (text, ok) = weyl_table();
            if let Some(p) = json {
                let mut s =
                    serde_json::to_string_pretty(&weyl_group().classes).expect("classes serialize");
                s.push('\n');
                if let Err(m) = write_json(&p, &s) {
                    return fail(1, m);
                }
            }
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Scan {
            kind,
            p,
            r,
            count,
            seed,
            extension_cap,
            json,
        } => {
            let kind = match kind {
                Kind::Cubic => ScanKind::Cubic,
                Kind::Dp4 => ScanKind::Dp4,
            };
            let cfg = ScanConfig {
                kind,
                p,
                r,
                count,
                seed,
                cap: extension_cap,
            };
            let sum = match run_scan(&cfg) {
                Ok(s) => s,
                Err(e) => return fail(exit_code(&e), e.to_string()),
            };
            if let Some(path) = json {
                let mut s = serde_json::to_string_pretty(&sum).expect("summaries serialize");
                s.push('\n');
                if let Err(m) = write_json(&path, &s) {
                    return fail(1, m);
                }
            }
            print!("{}", sum.to_text());
            if sum.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
