use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qwalk::classify::{classify_with, ClassifyOptions, WalkCurve};
use qwalk::elliptic::point_add;
use qwalk::qrt::{estimate_orbit_order, DEFAULT_SEEDS};
use qwalk::rational::format_rational;
use qwalk::report::Report;
use qwalk::scan::{scan, ScanConfig, ScanSummary, Support};
use qwalk::{parse_weights, CurvePoint, WeightMatrix};

/// Group of the walk for weighted quarter-plane step sets.
#[derive(Parser, Debug)]
#[command(name = "qwalk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one weight matrix and print its report.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        /// Cross-check the order with the floating-point QRT iteration.
        #[arg(long)]
        oracle: bool,
        /// Include the opt-in order-8 cofactor determinant.
        #[arg(long)]
        yellowbook: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print n·Ω3 for n = 1..12, stopping at the identity.
    Orbit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Classify every weighting (or a sample) with bounded integer counts.
    Scan {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        denominator_max: u32,
        /// `full`, `compass`, or 8 bits for (1,1) (1,0) (1,-1) (0,1) (0,-1) (-1,1) (-1,0) (-1,-1).
        #[arg(long, default_value = "full")]
        support: String,
        /// Group order |H| to list.
        #[arg(long)]
        target_order: Option<u32>,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// JSON file `{"weights": [[..],[..],[..]]}`, or `-` for stdin.
    #[arg(required_unless_present = "grid", conflicts_with = "grid")]
    path: Option<PathBuf>,
    /// Inline grid, rows `i = 1, 0, -1` separated by `;`, e.g. `0,1/4,0;1/4,0,1/4;0,1/4,0`.
    #[arg(long)]
    grid: Option<String>,
    /// Rescale the weights to sum to 1.
    #[arg(long)]
    normalize: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<qwalk::Error> for Failure {
    fn from(e: qwalk::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InputFile {
    weights: [[String; 3]; 3],
}

fn read_input(args: &InputArgs) -> Result<WeightMatrix, Failure> {
    let raw: [[String; 3]; 3] = match (&args.grid, &args.path) {
        (Some(g), _) => parse_grid(g)?,
        (None, Some(p)) => {
            let text = if p.as_os_str() == "-" {
                let mut s = String::new();
                io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?
            };
            serde_json::from_str::<InputFile>(&text)
                .map_err(|e| Failure::Usage(format!("invalid input: {e}")))?
                .weights
        }
        (None, None) => return Err(Failure::Usage("no input given".into())),
    };
    Ok(parse_weights(&raw, args.normalize)?)
}

fn parse_grid(g: &str) -> Result<[[String; 3]; 3], Failure> {
    let rows: Vec<Vec<String>> = g
        .split(';')
        .map(|r| r.split(',').map(|c| c.trim().to_string()).collect())
        .collect();
    let bad = || Failure::Usage(format!("grid must be 3 rows of 3 entries: {g:?}"));
    let rows: Vec<[String; 3]> = rows
        .into_iter()
        .map(|r| r.try_into().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    rows.try_into().map_err(|_| bad())
}

fn emit(out: &str) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    stdout
        .write_all(out.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| Failure::Io(format!("stdout: {e}")))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_classify(input: &InputArgs, oracle: bool, yellowbook: bool, seed: u64, format: Format) -> Result<(), Failure> {
    let w = read_input(input)?;
    let result = classify_with(&w, ClassifyOptions { yellowbook_order8: yellowbook })?;
    let mut report = Report::new(&result);
    if oracle {
        match estimate_orbit_order(&result.coefficients, DEFAULT_SEEDS, 12, seed) {
            Ok(est) => report = report.with_oracle(&est),
            Err(e) => report.warnings.push(format!("QRT oracle unavailable: {e}")),
        }
    }
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    emit(&match format {
        Format::Json => to_json(&report),
        Format::Text => report.to_text(),
    })
}

#[derive(Serialize)]
struct OrbitLine {
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<String>,
    identity: bool,
}

fn cmd_orbit(input: &InputArgs, format: Format) -> Result<(), Failure> {
    let w = read_input(input)?;
    let wc = WalkCurve::new(&w)?.map_err(|d| Failure::Usage(format!("not a genus-1 instance: {}", d.tag())))?;
    let mut lines = Vec::new();
    let mut q = wc.omega3.clone();
    for n in 1..=12 {
        if n > 1 {
            q = point_add(&q, &wc.omega3, &wc.curve)?;
        }
        let line = match &q {
            CurvePoint::Infinity => OrbitLine {
                n,
                x: None,
                y: None,
                identity: true,
            },
            CurvePoint::Affine { x, y } => OrbitLine {
                n,
                x: Some(format_rational(x)),
                y: Some(format_rational(y)),
                identity: false,
            },
        };
        let done = line.identity;
        lines.push(line);
        if done {
            break;
        }
    }
    emit(&match format {
        Format::Json => to_json(&lines),
        Format::Text => lines
            .iter()
            .map(|l| match (&l.x, &l.y) {
                (Some(x), Some(y)) => format!("{:>2}  ({x}, {y})\n", l.n),
                _ => format!("{:>2}  O\n", l.n),
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct ScanOutput {
    space: u64,
    exhaustive: bool,
    examined: usize,
    histogram: Vec<(String, usize)>,
    target_order: Option<u32>,
    hits: Vec<HitOutput>,
}

#[derive(Serialize)]
struct HitOutput {
    index: u64,
    counts: [u32; 8],
    multiples_verified: bool,
    report: Report,
}

fn scan_output(summary: &ScanSummary, target_order: Option<u32>) -> ScanOutput {
    ScanOutput {
        space: summary.space,
        exhaustive: summary.exhaustive,
        examined: summary.examined,
        histogram: summary.histogram.iter().map(|(b, n)| (b.to_string(), *n)).collect(),
        target_order,
        hits: summary
            .hits
            .iter()
            .map(|h| {
                let mut report = Report::new(&h.result);
                if let Some(est) = &h.oracle {
                    report = report.with_oracle(est);
                }
                HitOutput {
                    index: h.index,
                    counts: h.counts,
                    multiples_verified: h.multiples_verified,
                    report,
                }
            })
            .collect(),
    }
}

fn scan_text(o: &ScanOutput) -> String {
    let mut s = format!(
        "examined {} of {} instances ({})\n",
        o.examined,
        o.space,
        if o.exhaustive { "exhaustive" } else { "sampled" }
    );
    for (bucket, n) in &o.histogram {
        s += &format!("  {bucket:<28}{n}\n");
    }
    if let Some(t) = o.target_order {
        s += &format!("hits with |H| = {t}: {}\n", o.hits.len());
    }
    for h in &o.hits {
        let counts: Vec<String> = h.counts.iter().map(u32::to_string).collect();
        s += &format!(
            "\n#{} counts [{}] multiples verified: {}\n",
            h.index,
            counts.join(" "),
            h.multiples_verified
        );
        s += &h.report.to_text();
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    denominator_max: u32,
    support: &str,
    target_order: Option<u32>,
    limit: usize,
    jobs: usize,
    seed: u64,
    oracle: bool,
    format: Format,
) -> Result<(), Failure> {
    let cfg = ScanConfig {
        denominator_max,
        support: support.parse::<Support>()?,
        target_order,
        limit,
        jobs,
        seed,
        oracle,
    };
    let summary = scan(&cfg)?;
    let out = scan_output(&summary, target_order);
    for h in &out.hits {
        for warning in &h.report.warnings {
            eprintln!("warning: #{}: {warning}", h.index);
        }
    }
    emit(&match format {
        Format::Json => to_json(&out),
        Format::Text => scan_text(&out),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify {
            input,
            oracle,
            yellowbook,
            seed,
            format,
        } => cmd_classify(&input, oracle, yellowbook, seed, format),
        Command::Orbit { input, format } => cmd_orbit(&input, format),
        Command::Scan {
            denominator_max,
            support,
            target_order,
            limit,
            jobs,
            seed,
            oracle,
            format,
        } => cmd_scan(denominator_max, &support, target_order, limit, jobs, seed, oracle, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
