//! `kkmulti`: command-line access to every part of the library.
//!
//! Exit status: 0 on success, 1 when a verification finds a violation,
//! 2 on usage or input errors. Results go to stdout, diagnostics to stderr.

use std::fs;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use kkmulti::flow::{self, LayeredSet, StepProfile, CLAIM_TOLERANCE};
use kkmulti::io::{parse_family, parse_json, write_family};
use kkmulti::lattice::{enumerate_monotone, shadow_lattice, MonotoneLattice};
use kkmulti::llr::{check_curve_properties, ll, Curve, GridSpec, Identity, LLCurve};
use kkmulti::verify::{self, DEFAULT_SEED, LOVASZ_TOLERANCE, THEOREM_GUARD};
use kkmulti::{colex_rank, colex_unrank, compress, kk, kk_oracle, shadow_multi, ColexRank, RSet};

#[derive(Parser)]
#[command(name = "kkmulti", version, about = "Shadows of multidimensional uniform families")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Output format for reports that have a tabular form
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for verification runs (default: all cores)
    #[arg(long, global = true, env = "KKMULTI_JOBS")]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveKind {
    Ll,
    Identity,
}

#[derive(Args)]
struct CurveArgs {
    /// Curve applied to both axes
    #[arg(long, value_enum, default_value = "ll")]
    curve: CurveKind,
    /// Uniformity r of LL_r
    #[arg(long, default_value_t = 2)]
    r: u32,
}

impl CurveArgs {
    fn build(&self) -> Result<Box<dyn Curve>, Failure> {
        Ok(match self.curve {
            CurveKind::Ll => Box::new(LLCurve::new(self.r)?),
            CurveKind::Identity => Box::new(Identity),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Colex rank of a set
    Rank {
        /// Comma-separated increasing elements, e.g. 2,4
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u32>,
    },
    /// The r-set with a given colex rank
    Unrank {
        /// 1-based colex rank
        #[arg(long)]
        rank: u64,
        /// Set size
        #[arg(long)]
        r: usize,
    },
    /// Shadow of a family file
    Shadow {
        /// Family file, or - for stdin
        #[arg(long)]
        input: String,
    },
    /// Kruskal–Katona function KK_r(m)
    Kk {
        /// Family size
        #[arg(long)]
        m: u64,
        /// Set size
        #[arg(long)]
        r: usize,
        /// Also compute it by building the initial segment
        #[arg(long)]
        oracle: bool,
    },
    /// Evaluate LL_r
    Ll {
        /// One or more comma-separated arguments
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        v: Vec<f64>,
        /// Uniformity (at least 2)
        #[arg(long)]
        r: u32,
    },
    /// Check monotonicity, concavity, log-derivative decrease and the C1 joint of LL_r
    LlCheck {
        /// Uniformity (at least 2)
        #[arg(long)]
        r: u32,
        /// Largest argument sampled
        #[arg(long, default_value_t = 1e4)]
        vmax: f64,
        /// Number of sample points
        #[arg(long, default_value_t = 4000)]
        points: usize,
        /// Relative finite-difference step
        #[arg(long, default_value_t = 1e-5)]
        step: f64,
        /// Margin on monotonicity comparisons and the joint derivative mismatch
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Compress a family along one coordinate, or monotonize it
    Compress {
        /// Family file, or - for stdin
        #[arg(long)]
        input: String,
        /// 1-based coordinate; omit to compress until monotone
        #[arg(long)]
        coord: Option<usize>,
    },
    /// Shadow of a monotone lattice through KK_r on extreme points
    LatticeShadow {
        /// Lattice JSON file, or - for stdin
        #[arg(long)]
        input: String,
        /// Set size
        #[arg(long)]
        r: usize,
    },
    /// All monotone subsets of N^d of a given size, one lattice per line
    Enumerate {
        /// Dimension (1, 2 or 3)
        #[arg(long)]
        d: usize,
        /// Number of points
        #[arg(long)]
        s: u64,
    },
    /// f-area of the deformed profile over a grid of times (CSV)
    FlowTrace {
        /// Step profile JSON file, or - for stdin
        #[arg(long)]
        input: String,
        #[command(flatten)]
        curve: CurveArgs,
        /// First time (default: half the square side)
        #[arg(long)]
        t_min: Option<f64>,
        /// Last time (default: 1.5 times the profile width)
        #[arg(long)]
        t_max: Option<f64>,
        /// Number of grid times
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Compare a profile with the square of the same area
    ClaimCheck {
        /// Step profile JSON file, or - for stdin
        #[arg(long)]
        input: String,
        #[command(flatten)]
        curve: CurveArgs,
        /// Slack allowed on the comparison
        #[arg(long, default_value_t = CLAIM_TOLERANCE)]
        tolerance: f64,
    },
    /// Replace every layer of a layered set by a square of equal area
    Squarify {
        /// Layered set JSON file, or - for stdin
        #[arg(long)]
        input: String,
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// KK_r(m) >= LL_r(m) for all m <= C(n, r)
    VerifyLovasz {
        /// Ground set size; m runs up to C(n, r)
        #[arg(long)]
        n: u64,
        /// Set size (at least 2)
        #[arg(long)]
        r: u32,
        /// Slack allowed on each comparison
        #[arg(long, default_value_t = LOVASZ_TOLERANCE)]
        tolerance: f64,
    },
    /// Shadow identity on extreme points, on random monotone families
    VerifyLemma2 {
        /// Random families to test
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Dimension
        #[arg(long)]
        d: usize,
        /// Set size (at least 2)
        #[arg(long)]
        r: usize,
        /// Ground set size per coordinate
        #[arg(long)]
        n: u32,
    },
    /// Monotonization keeps size and does not grow the shadow, on random families
    VerifyCompression {
        /// Random families to test
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Dimension
        #[arg(long)]
        d: usize,
        /// Set size
        #[arg(long)]
        r: usize,
        /// Ground set size per coordinate
        #[arg(long)]
        n: u32,
    },
    /// Exhaustive check of the multidimensional bound (CSV summary by default)
    VerifyTheorem {
        /// Dimension
        #[arg(long)]
        d: usize,
        /// Set size (at least 2)
        #[arg(long)]
        r: u32,
        /// Largest lattice size checked
        #[arg(long)]
        smax: u64,
        /// Floating-point guard on the bound
        #[arg(long, default_value_t = THEOREM_GUARD)]
        tolerance: f64,
    },
    /// Shadows of product families C([y_1], r) x ... x C([y_d], r)
    VerifyEquality {
        /// Dimension
        #[arg(long)]
        d: usize,
        /// Set size (at least 2)
        #[arg(long)]
        r: u32,
        /// Largest side y_i
        #[arg(long)]
        ymax: u64,
        /// Relative guard on the equality test
        #[arg(long, default_value_t = THEOREM_GUARD)]
        tolerance: f64,
    },
}

/// Why a run did not succeed.
enum Failure {
    Usage(String),
    Verification,
}

impl From<kkmulti::Error> for Failure {
    fn from(e: kkmulti::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn parse_with<T>(path: &str, parse: impl FnOnce(&str) -> Result<T, kkmulti::io::ParseError>) -> Result<T, Failure> {
    let text = read_input(path)?;
    parse(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn emit_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("reports serialize"));
}

fn verdict(passed: bool) -> Result<(), Failure> {
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.config.format;
    match cli.command {
        Command::Rank { set } => {
            let s = RSet::new(set)?;
            emit_json(&json!({ "rank": colex_rank(&s)? }));
        }
        Command::Unrank { rank, r } => {
            let s = colex_unrank(ColexRank::new(rank)?, r)?;
            emit_json(&json!({ "set": s }));
        }
        Command::Shadow { input } => {
            let fam = parse_with(&input, parse_family)?;
            print!("{}", write_family(&shadow_multi(&fam)?));
        }
        Command::Kk { m, r, oracle } => {
            let value = kk(m, r)?;
            if oracle {
                emit_json(&json!({ "kk": value, "oracle": kk_oracle(m, r)? }));
            } else {
                emit_json(&json!({ "kk": value }));
            }
        }
        Command::Ll { v, r } => {
            let curve = LLCurve::new(r)?;
            let values = v.iter().map(|&x| ll(x, &curve)).collect::<Result<Vec<_>, _>>()?;
            match values.as_slice() {
                [one] => emit_json(&json!({ "ll": one })),
                many => emit_json(&json!({ "ll": many })),
            }
        }
        Command::LlCheck { r, vmax, points, step, tolerance } => {
            let grid = GridSpec { v_max: vmax, points, rel_step: step, tolerance, joint: Some(1.0) };
            let rep = check_curve_properties(&LLCurve::new(r)?, &grid)?;
            emit_json(&rep);
            verdict(rep.passed)?;
        }
        Command::Compress { input, coord } => {
            let fam = parse_with(&input, parse_family)?;
            let out = match coord {
                Some(0) => return Err(Failure::Usage("--coord is 1-based".into())),
                Some(c) => compress::compress_coordinate(&fam, c - 1)?,
                None => compress::monotonize(&fam)?,
            };
            print!("{}", write_family(&out));
        }
        Command::LatticeShadow { input, r } => {
            let l: MonotoneLattice = parse_with(&input, parse_json)?;
            emit_json(&shadow_lattice(&l, r)?);
        }
        Command::Enumerate { d, s } => {
            for l in enumerate_monotone(d, s)? {
                emit_json(&l);
            }
        }
        Command::FlowTrace { input, curve, t_min, t_max, steps } => {
            let g: StepProfile = parse_with(&input, parse_json)?;
            let f = curve.build()?;
            let side = flow::area(&g).sqrt();
            let lo = t_min.unwrap_or(0.5 * side);
            let hi = t_max.unwrap_or(1.5 * g.width());
            if !(lo > 0.0 && hi > lo) {
                return Err(Failure::Usage(format!("need 0 < t-min < t-max, got {lo} and {hi}")));
            }
            let trace = flow::flow_trace(&g, f.as_ref(), &flow::linear_grid(lo, hi, steps.max(2)))?;
            match format {
                Some(Format::Json) => emit_json(&trace),
                _ => print!("{}", trace.to_csv()),
            }
        }
        Command::ClaimCheck { input, curve, tolerance } => {
            let g: StepProfile = parse_with(&input, parse_json)?;
            let rep = flow::check_claim_d2(&g, curve.build()?.as_ref(), tolerance)?;
            emit_json(&rep);
            verdict(rep.passed)?;
        }
        Command::Squarify { input, curve } => {
            let m: LayeredSet = parse_with(&input, parse_json)?;
            let (out, rep) = flow::squarify_check(&m, curve.build()?.as_ref())?;
            emit_json(&json!({ "layers": out.layers(), "report": rep }));
            verdict(rep.passed)?;
        }
        Command::VerifyLovasz { n, r, tolerance } => {
            let rep = verify::check_lovasz_1d_with(n, r, tolerance)?;
            match format {
                Some(Format::Csv) => {
                    println!("m,kk,ll,margin");
                    for row in &rep.rows {
                        println!("{},{},{},{}", row.m, row.kk, row.ll, row.margin);
                    }
                }
                _ => emit_json(&rep),
            }
            verdict(rep.passed)?;
        }
        Command::VerifyLemma2 { samples, d, r, n } => {
            let rep = verify::check_lemma2(samples, d, r, n, cli.config.seed)?;
            emit_json(&rep);
            verdict(rep.passed)?;
        }
        Command::VerifyCompression { samples, d, r, n } => {
            let rep = verify::check_compression(samples, d, r, n, cli.config.seed)?;
            emit_json(&rep);
            verdict(rep.passed)?;
        }
        Command::VerifyTheorem { d, r, smax, tolerance } => {
            let run = verify::check_theorem_with(d, r, smax, tolerance)?;
            if let Some(at) = run.truncated_at {
                eprintln!("warning: truncated at s = {at} (enumeration budget for d = {d})");
            }
            match format {
                Some(Format::Json) => emit_json(&run),
                _ => print!("{}", run.summary_csv()),
            }
            verdict(run.passed)?;
        }
        Command::VerifyEquality { d, r, ymax, tolerance } => {
            let rep = verify::check_equality_products_with(d, r, ymax, tolerance)?;
            emit_json(&rep);
            verdict(rep.passed)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.config.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
