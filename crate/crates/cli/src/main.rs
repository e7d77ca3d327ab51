//! `schubert-torsion`: compute, verify and search the integers `C`.
//!
//! Exit codes: 0 success / all checks pass, 1 a check failed, 2 invalid
//! input or unusable output path, 3 a check ran out of budget.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use schubert_torsion::euler::check_push;
use schubert_torsion::factor::factorize;
use schubert_torsion::search::replay_records;
use schubert_torsion::symgroup::Word;
use schubert_torsion::{
    build_x, check_lemma_inv, check_lemma_sub, check_lemma_xprop, compute_report,
    euler_class_cross_check, fibre_fixed_points, normal_bundle_weights, run_search, CheckStatus,
    ComputeReport, Enumeration, Error, FixedPoint, Root, SearchBounds, SearchOptions, SeedData,
    Subexpression,
};

const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Parser)]
#[command(
    name = "schubert-torsion",
    version,
    about = "Torsion in intersection cohomology of Schubert varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute C by both routes, factor |C| and report the verdict.
    Compute {
        /// Seed JSON, or a previous `compute --json` result (`-` for stdin).
        #[arg(long)]
        input: PathBuf,
        /// One-line JSON.
        #[arg(long, conflicts_with = "pretty")]
        json: bool,
        /// Indented JSON.
        #[arg(long)]
        pretty: bool,
    },
    /// Run the brute-force checks on one seed, or replay a search CSV.
    Verify {
        #[arg(long, required_unless_present = "records", conflicts_with = "records")]
        input: Option<PathBuf>,
        /// Recompute every |C| in a search output file.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Lemma::All)]
        lemma: Lemma,
        /// Node budget for fixed-point enumeration.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// List the torus-fixed points of the fibre over w_A.
    FixedPoints {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Normal-bundle weights of a seed's fibre, or chart weights of a word.
    Weights {
        /// Seed JSON; prints normal-bundle weights at fibre fixed points.
        #[arg(long, conflicts_with_all = ["word", "ambient"])]
        input: Option<PathBuf>,
        /// Comma-separated letters, e.g. `1,2,1`; prints chart weights.
        #[arg(long, requires_all = ["ambient", "point"], required_unless_present = "input")]
        word: Option<String>,
        #[arg(long)]
        ambient: Option<usize>,
        /// 0/1 string selecting one fixed point.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Sweep seed space, writing one CSV row per seed.
    Search {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        a_max: usize,
        #[arg(long)]
        out: PathBuf,
        /// Checkpoint to resume from; written next to `--out` by default.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = 64)]
        chunk_size: usize,
        /// Progress lines with elapsed time on stderr.
        #[arg(long)]
        timestamps: bool,
        #[arg(long, hide = true)]
        stop_after: Option<u64>,
    },
    /// Factor integers.
    Factor {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lemma {
    Xprop,
    Sub,
    Normal,
    Push,
    Inv,
    All,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidSeed(_)
            | Error::Parse(_)
            | Error::InvalidBits(_)
            | Error::LengthMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::FactorZero
            | Error::Checkpoint(_)
            | Error::RecordFile(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            input,
            json,
            pretty,
        } => cmd_compute(&input, json, pretty),
        Command::Verify {
            input,
            records,
            lemma,
            budget,
            json,
        } => match records {
            Some(path) => cmd_replay(&path),
            None => cmd_verify(
                input.as_deref().expect("clap requires one"),
                lemma,
                budget,
                json,
            ),
        },
        Command::FixedPoints {
            input,
            budget,
            json,
        } => cmd_fixed_points(&input, budget, json),
        Command::Weights {
            input,
            word,
            ambient,
            point,
            budget,
            json,
        } => match input {
            Some(input) => cmd_normal_weights(&input, point.as_deref(), budget, json),
            None => cmd_chart_weights(
                word.as_deref().expect("clap requires one"),
                ambient.expect("clap requires it"),
                point.as_deref().expect("clap requires it"),
                json,
            ),
        },
        Command::Search {
            n_min,
            n_max,
            m_max,
            a_max,
            out,
            resume,
            threads,
            chunk_size,
            timestamps,
            stop_after,
        } => {
            let bounds = SearchBounds {
                n_min,
                n_max,
                m_max,
                a_max,
            };
            let mut opts = SearchOptions::new(out);
            opts.resume_from = resume;
            opts.threads = threads;
            opts.chunk_size = chunk_size;
            opts.timestamps = timestamps;
            opts.stop_after = stop_after;
            cmd_search(bounds, &opts)
        }
        Command::Factor { values, json } => cmd_factor(&values, json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// What an `--input` file held.
struct Input {
    seed: SeedData,
    report: Option<ComputeReport>,
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
    };
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{}: malformed JSON: {e}", path.display())))?;
    let bad = |e: serde_json::Error| Failure::input(format!("{}: {e}", path.display()));
    if value.get("seed").is_some() {
        let report: ComputeReport = serde_json::from_value(value).map_err(bad)?;
        Ok(Input {
            seed: report.seed.clone(),
            report: Some(report),
        })
    } else {
        Ok(Input {
            seed: serde_json::from_value(value).map_err(bad)?,
            report: None,
        })
    }
}

fn to_json<T: Serialize>(x: &T, pretty: bool) -> Result<String, Failure> {
    let s = if pretty {
        serde_json::to_string_pretty(x)
    } else {
        serde_json::to_string(x)
    };
    s.map_err(|e| Failure::from(Error::Json(e)))
}

/// Differences between a recorded result and a fresh one.
fn replay_mismatches(old: &ComputeReport, new: &ComputeReport) -> Vec<String> {
    let mut out = Vec::new();
    let mut cmp = |name: &str, a: String, b: String| {
        if a != b {
            out.push(format!("{name}: recorded {a}, recomputed {b}"));
        }
    };
    cmp("N", old.big_n.to_string(), new.big_n.to_string());
    cmp("len_x", old.len_x.to_string(), new.len_x.to_string());
    cmp(
        "C_direct",
        old.c_direct.to_string(),
        new.c_direct.to_string(),
    );
    cmp("C_euler", old.c_euler.to_string(), new.c_euler.to_string());
    cmp("sign", old.sign.to_string(), new.sign.to_string());
    cmp("C_abs", old.c_abs.to_string(), new.c_abs.to_string());
    out
}

fn cmd_compute(input: &Path, json: bool, pretty: bool) -> CliResult {
    let Input {
        seed,
        report: recorded,
    } = read_input(input)?;
    let report = compute_report(&seed)?;
    if json || pretty {
        println!("{}", to_json(&report, pretty)?);
    } else {
        print_report(&report);
    }
    if let Some(old) = recorded {
        let diffs = replay_mismatches(&old, &report);
        if !diffs.is_empty() {
            for d in &diffs {
                eprintln!("replay mismatch: {d}");
            }
            return Ok(1);
        }
    }
    Ok(0)
}

fn print_report(r: &ComputeReport) {
    let factors = if r.factorization.is_empty() {
        "-".to_string()
    } else {
        r.factorization
            .iter()
            .map(|f| format!("{}^{}", f.0, f.1))
            .collect::<Vec<_>>()
            .join(" * ")
    };
    println!("seed        {}", r.seed);
    println!("N           {}", r.big_n);
    println!("len_x       {}", r.len_x);
    println!("C_direct    {}", r.c_direct);
    println!("C_euler     {}", r.c_euler);
    println!("sign        {:+}", r.sign);
    println!("|C|         {}", r.c_abs);
    println!("factors     {factors}");
    println!("verdict     {}", r.verdict);
}

#[derive(Serialize)]
struct CheckLine {
    check: &'static str,
    status: CheckStatus,
    detail: String,
    report: Value,
}

fn status_of(passed: bool) -> CheckStatus {
    if passed {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

fn cmd_verify(input: &Path, lemma: Lemma, budget: u64, json: bool) -> CliResult {
    let Input {
        seed,
        report: recorded,
    } = read_input(input)?;
    let bx = build_x(&seed);
    let want = |l: Lemma| lemma == l || lemma == Lemma::All;
    let mut lines = Vec::new();

    if want(Lemma::Xprop) {
        let r = check_lemma_xprop(&bx);
        lines.push(CheckLine {
            check: "xprop",
            status: status_of(r.passed()),
            detail: format!(
                "length {} (expected {}), reduced {}, minimal in x W_M {}",
                r.length, r.expected_length, r.reduced, r.minimal_in_coset
            ),
            report: as_value(&r),
        });
    }
    if want(Lemma::Sub) {
        let r = check_lemma_sub(&bx, budget);
        lines.push(CheckLine {
            check: "sub",
            status: r.status,
            detail: format!(
                "{} subexpressions land in w_A W_M, {} break the forced pattern, {} nodes",
                r.solutions,
                r.violations.len(),
                r.nodes
            ),
            report: as_value(&r),
        });
    }
    if want(Lemma::Normal) {
        let r = euler_class_cross_check(&seed, budget)?;
        let sign = |s: Option<i8>| s.map(|s| format!("{s:+}")).unwrap_or_else(|| "none".into());
        let mut summary = serde_json::to_value(&r).map_err(Error::Json)?;
        // the per-point table can be large; keep it out of the summary
        if let Some(obj) = summary.as_object_mut() {
            obj.remove("points");
        }
        lines.push(CheckLine {
            check: "normal",
            status: r.status,
            detail: format!(
                "{} of {} fixed points, weights outside Φ_(M∪A) {}, weight products match derived class {}, sign after ε_(>n) = 0: {}, literal sign: {}",
                r.fixed_points,
                r.expected_fixed_points,
                r.weights_ok,
                r.derived_exact,
                sign(r.sign),
                sign(r.literal_sign)
            ),
            report: summary,
        });
    }
    if want(Lemma::Push) {
        let r = check_push(&seed)?;
        lines.push(CheckLine {
            check: "push",
            status: status_of(r.passed),
            detail: format!(
                "nested {} vs localization {}, GKM divisible {}",
                r.nested, r.localization, r.gkm_divisible
            ),
            report: as_value(&r),
        });
    }
    if want(Lemma::Inv) {
        let r = check_lemma_inv(&seed)?;
        lines.push(CheckLine {
            check: "inv",
            status: status_of(r.passed),
            detail: format!(
                "stepwise values {:?} vs direct {}, invariance {}/{} ok",
                r.stepwise.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                r.direct,
                r.invariance_checks - r.invariance_failures,
                r.invariance_checks
            ),
            report: as_value(&r),
        });
    }
    if let Some(old) = recorded {
        let fresh = compute_report(&seed)?;
        let diffs = replay_mismatches(&old, &fresh);
        lines.push(CheckLine {
            check: "replay",
            status: status_of(diffs.is_empty()),
            detail: if diffs.is_empty() {
                format!("recorded C = {} reproduced", old.c_direct)
            } else {
                diffs.join("; ")
            },
            report: Value::from(diffs),
        });
    }

    if json {
        let doc = serde_json::json!({ "seed": seed, "checks": lines });
        println!("{}", to_json(&doc, false)?);
    } else {
        for l in &lines {
            let status = match l.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Inconclusive => "inconclusive",
            };
            println!("{:<7} {:<12} {}", l.check, status, l.detail);
        }
    }
    Ok(if lines.iter().any(|l| l.status == CheckStatus::Fail) {
        1
    } else if lines.iter().any(|l| l.status == CheckStatus::Inconclusive) {
        3
    } else {
        0
    })
}

fn as_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn cmd_replay(path: &Path) -> CliResult {
    let rows = replay_records(path)?;
    println!("{rows} rows re-verified");
    Ok(0)
}

fn fibre_points(seed: &SeedData, budget: u64) -> Result<Vec<Subexpression>, Failure> {
    let bx = build_x(seed);
    match fibre_fixed_points(&bx.x_word, &seed.m_set(), &seed.w_a(), budget) {
        Enumeration::Complete { points, .. } => Ok(points),
        Enumeration::Inconclusive { nodes, partial } => Err(Failure {
            code: 3,
            message: format!(
                "node budget exhausted after {nodes} nodes ({} fixed points found so far)",
                partial.len()
            ),
        }),
    }
}

#[derive(Serialize)]
struct PointLine {
    bits: Subexpression,
    w_bits: Subexpression,
    cell: Vec<usize>,
}

fn cmd_fixed_points(input: &Path, budget: u64, json: bool) -> CliResult {
    let seed = read_input(input)?.seed;
    let bx = build_x(&seed);
    let lines: Vec<PointLine> = fibre_points(&seed, budget)?
        .into_iter()
        .map(|e| {
            let cell = FixedPoint::new(bx.x_word.clone(), e.clone())
                .map(|p| p.bb_cell_coordinates())
                .unwrap_or_default();
            PointLine {
                w_bits: e.restrict(&bx.w_positions),
                bits: e,
                cell,
            }
        })
        .collect();
    if json {
        println!("{}", to_json(&lines, false)?);
    } else {
        println!("# {} fixed points over w_A, x = {}", lines.len(), bx.x_word);
        for l in &lines {
            println!("{}  w={}  cell={:?}", l.bits, l.w_bits, l.cell);
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct WeightLine {
    point: Subexpression,
    weights: Vec<Root>,
}

fn print_weights(lines: &[WeightLine], json: bool) -> CliResult {
    if json {
        println!("{}", to_json(&lines, false)?);
    } else {
        for l in lines {
            let ws: Vec<String> = l.weights.iter().map(|r| r.to_string()).collect();
            println!("{}  [{}]", l.point, ws.join(", "));
        }
    }
    Ok(0)
}

fn cmd_normal_weights(input: &Path, point: Option<&str>, budget: u64, json: bool) -> CliResult {
    let seed = read_input(input)?.seed;
    let bx = build_x(&seed);
    let points = match point {
        Some(p) => vec![p.parse::<Subexpression>()?],
        None => fibre_points(&seed, budget)?,
    };
    let lines = points
        .into_iter()
        .map(|e| {
            let weights = normal_bundle_weights(&bx, &e)?;
            Ok(WeightLine { point: e, weights })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    print_weights(&lines, json)
}

fn cmd_chart_weights(word: &str, ambient: usize, point: &str, json: bool) -> CliResult {
    let letters = word
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::input(format!("--word: {e}")))?;
    let word = Word::new(ambient, letters)?;
    let bits: Subexpression = point.parse()?;
    let p = FixedPoint::new(word, bits.clone())?;
    print_weights(
        &[WeightLine {
            point: bits,
            weights: p.chart_weights().0,
        }],
        json,
    )
}

fn cmd_search(bounds: SearchBounds, opts: &SearchOptions) -> CliResult {
    if bounds.n_max < bounds.n_min.max(2) || bounds.m_max == 0 || bounds.a_max == 0 {
        return Err(Failure::input(
            "bounds: need n_max >= max(n_min, 2), m_max >= 1 and a_max >= 1",
        ));
    }
    let summary = run_search(bounds, opts).map_err(|e| match e {
        Error::Io(io) => Failure::input(format!("{}: {io}", opts.out.display())),
        other => Failure::from(other),
    })?;
    println!(
        "{} seeds done{}",
        summary.completed,
        if summary.finished {
            ""
        } else {
            " (stopped early; resume from the checkpoint)"
        }
    );
    println!("rows      {}", opts.out.display());
    println!("records   {}", opts.records.display());
    println!("checkpoint {}", opts.checkpoint.display());
    println!(
        "{:>4}  {:>12}  {:>12}  seed",
        "N", "max_prime", "running_max"
    );
    for r in summary.records.rows() {
        println!(
            "{:>4}  {:>12}  {:>12}  n={} [{}]",
            r.big_n, r.max_prime, r.running_max, r.n, r.blocks
        );
    }
    Ok(0)
}

#[derive(Serialize)]
struct FactorLine {
    value: String,
    factors: Vec<(String, u32)>,
}

fn cmd_factor(values: &[String], json: bool) -> CliResult {
    let mut lines = Vec::new();
    for v in values {
        let x: BigInt = v
            .trim()
            .parse()
            .map_err(|_| Failure::input(format!("not an integer: {v:?}")))?;
        let f = factorize(&x)?;
        lines.push(FactorLine {
            value: x.to_string(),
            factors: f.into_iter().map(|(p, e)| (p.to_string(), e)).collect(),
        });
    }
    if json {
        println!("{}", to_json(&lines, false)?);
    } else {
        for l in &lines {
            let body = if l.factors.is_empty() {
                "1".to_string()
            } else {
                l.factors
                    .iter()
                    .map(|(p, e)| {
                        if *e == 1 {
                            p.clone()
                        } else {
                            format!("{p}^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" * ")
            };
            println!("{} = {body}", l.value);
        }
    }
    Ok(0)
}
