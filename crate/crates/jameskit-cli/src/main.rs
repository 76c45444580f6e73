mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jameskit::*;
use std::result::Result;

/// Exit code for malformed input, mode mismatches and other validation
/// failures.
const EXIT_VALIDATION: u8 = 2;
/// Exit code for internal consistency failures (oracle disagreements).
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "jameskit",
    about = "Exact James-space norm certificates, norming partitions and extreme-point tests",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit compact JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Relative tolerance for float-mode comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Cap on enumerated partitions.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_LIMIT)]
    limit: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Args)]
struct InputOpts {
    /// Inline JSON input.
    #[arg(long, conflicts_with = "input")]
    inline: Option<String>,
    /// Path to a JSON input file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Expected scalar mode; must agree with the input scalars.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Squared norm of a vector with a norming-partition witness.
    Norm(InputOpts),
    /// Squared-variation norm of a vector.
    #[command(name = "s-norm")]
    SNorm(InputOpts),
    /// Enumerate all norming partitions.
    Partitions(InputOpts),
    /// The finest norming partition.
    Finest(InputOpts),
    /// Count the norming partitions.
    Count(InputOpts),
    /// Extreme-point certificate for the unit ball.
    Extreme(InputOpts),
    /// Extreme-point test in the squared-variation norm.
    #[command(name = "extreme-js")]
    ExtremeJs(InputOpts),
    /// Squared norm of a bidual vector (finite part plus omega coordinate).
    #[command(name = "bidual-norm")]
    BidualNorm(InputOpts),
    /// Extreme-point certificate for the bidual unit ball.
    #[command(name = "bidual-extreme")]
    BidualExtreme(InputOpts),
    /// Operations on interval functionals.
    Dual {
        #[command(subcommand)]
        op: DualOp,
    },
    /// Generators for vectors and points with prescribed properties.
    Construct {
        #[command(subcommand)]
        what: ConstructOp,
    },
    /// Run the oracle cross-check suites.
    Verify {
        /// Bounding box for random vectors.
        #[arg(long, default_value_t = 8)]
        n: u32,
        /// Trials per suite.
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Random exact vectors: dynamic program against the brute-force oracle.
    Fuzz {
        /// Bounding box for random vectors.
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum DualOp {
    /// Norm-one test inside the unit-ball interval set.
    #[command(name = "norm-one")]
    NormOne(InputOpts),
    /// Dual extreme-point test with a failure reason.
    Extreme(InputOpts),
    /// Gap profile of the interval layout.
    Gaps(InputOpts),
    /// Membership in the norm closure of the dual extreme points.
    Closure(InputOpts),
    /// The m-th extreme approximant obtained by splitting the gaps.
    Approx {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
}

#[derive(Subcommand)]
enum ConstructOp {
    /// Float vector with exactly k norming partitions.
    Ek {
        #[arg(long)]
        k: u32,
    },
    /// Three-point pattern with coordinate sum 1 and squared sum 1.
    Eset {
        #[arg(long)]
        a1: f64,
    },
    /// Coefficient sequence for a strictly increasing ramp ending at 1.
    Prop65 {
        /// Comma-separated ramp values, e.g. 0.75,0.9,1.0.
        #[arg(long)]
        r: String,
    },
    /// Block vector with 4^b norming partitions.
    Blocks {
        #[arg(long)]
        b: u32,
        /// First coordinate of the three-point pattern.
        #[arg(long, default_value_t = 2.0 / 3.0)]
        a1: f64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read_input(opts: &InputOpts) -> Result<Value, Failure> {
    let text = match (&opts.inline, &opts.input) {
        (Some(inline), None) => inline.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Err(Failure::validation("missing input: pass --inline or --input")),
        (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
    };
    serde_json::from_str(&text).map_err(|e| Failure::validation(format!("malformed JSON: {e}")))
}

fn check_mode(expected: Option<ModeArg>, actual: Mode) -> Result<(), Failure> {
    match expected {
        Some(flag) if Mode::from(flag) != actual => Err(Failure::validation(format!(
            "mode flag says {}, input scalars are {}",
            Mode::from(flag),
            actual
        ))),
        _ => Ok(()),
    }
}

fn read_vector(opts: &InputOpts) -> Result<JVector, Failure> {
    let x = json::vector_from_json(&read_input(opts)?)?;
    check_mode(opts.mode, x.mode())?;
    Ok(x)
}

fn read_bidual(opts: &InputOpts) -> Result<BidualVector, Failure> {
    let x = json::bidual_from_json(&read_input(opts)?)?;
    check_mode(opts.mode, x.mode())?;
    Ok(x)
}

fn read_functional(opts: &InputOpts) -> Result<DualFunctional, Failure> {
    let f = json::functional_from_json(&read_input(opts)?)?;
    check_mode(opts.mode, f.mode())?;
    Ok(f)
}

fn count_to_json(count: &num::BigUint) -> Value {
    Value::String(count.to_string())
}

fn run(cli: &Cli) -> Result<(Value, String), Failure> {
    let tol = cli.tol;
    match &cli.command {
        Command::Norm(opts) => {
            let x = read_vector(opts)?;
            let cert = james_norm_sq(&x);
            let out = json!({
                "norm_sq": json::scalar_to_json(&cert.norm_sq)?,
                "witness": json::family_to_json(cert.witness.family()),
            });
            let summary = format!(
                "norm_sq = {} (witness: {} intervals)",
                cert.norm_sq,
                cert.witness.family().len()
            );
            Ok((out, summary))
        }
        Command::SNorm(opts) => {
            let y = read_vector(opts)?;
            let value = s_norm_sq(&y);
            let out = json!({ "norm_sq": json::scalar_to_json(&value)? });
            Ok((out, format!("s_norm_sq = {value}")))
        }
        Command::Partitions(opts) => {
            let x = read_vector(opts)?;
            let e = enumerate_norming_partitions(&x, cli.limit, tol)?;
            let out = json!({
                "count": e.partitions.len(),
                "truncated": e.truncated,
                "partitions": e
                    .partitions
                    .iter()
                    .map(|p| json::family_to_json(p.family()))
                    .collect::<Vec<_>>(),
            });
            let summary = format!(
                "{} norming partition(s){}",
                e.partitions.len(),
                if e.truncated { " (truncated)" } else { "" }
            );
            Ok((out, summary))
        }
        Command::Finest(opts) => {
            let x = read_vector(opts)?;
            let p = finest_partition(&x, tol)?;
            let out = json!({ "partition": json::family_to_json(p.family()) });
            Ok((out, format!("finest partition: {}", p.family())))
        }
        Command::Count(opts) => {
            let x = read_vector(opts)?;
            let count = count_norming_partitions(&x, tol)?;
            let out = json!({ "count": count_to_json(&count) });
            Ok((out, format!("{count} norming partition(s)")))
        }
        Command::Extreme(opts) => {
            let x = read_vector(opts)?;
            match x.mode() {
                Mode::Exact => {
                    let cert = is_extreme_bj(&x)?;
                    let out = json!({
                        "extreme": cert.verdict,
                        "james_sq": json::scalar_to_json(&cert.james_sq)?,
                        "l2_sq": json::scalar_to_json(&cert.l2_sq)?,
                        "failing_interval": cert
                            .failing_interval
                            .as_ref()
                            .map(json::interval_to_json)
                            .unwrap_or(Value::Null),
                    });
                    Ok((out, format!("extreme: {}", cert.verdict)))
                }
                Mode::Float => {
                    // Advisory only: float mode cannot certify exact equality.
                    let james = james_norm_sq(&x).norm_sq;
                    let l2 = l2_norm_sq(&x);
                    let one = Scalar::float(1.0);
                    let verdict = james.norm_eq(&l2, tol) && l2.norm_eq(&one, tol);
                    let out = json!({
                        "extreme": verdict,
                        "advisory": true,
                        "james_sq": json::scalar_to_json(&james)?,
                        "l2_sq": json::scalar_to_json(&l2)?,
                    });
                    Ok((out, format!("extreme: {verdict} (float advisory)")))
                }
            }
        }
        Command::ExtremeJs(opts) => {
            let y = read_vector(opts)?;
            let verdict = is_extreme_bjs(&y, tol)?;
            Ok((json!({ "extreme": verdict }), format!("extreme: {verdict}")))
        }
        Command::BidualNorm(opts) => {
            let x = read_bidual(opts)?;
            let cert = bidual_norm_sq(&x);
            let out = json!({
                "norm_sq": json::scalar_to_json(&cert.norm_sq)?,
                "witness": json::family_to_json(&cert.witness),
            });
            Ok((out, format!("bidual norm_sq = {}", cert.norm_sq)))
        }
        Command::BidualExtreme(opts) => {
            let x = read_bidual(opts)?;
            let cert = is_extreme_bjss(&x)?;
            let out = json!({
                "extreme": cert.verdict,
                "norm_sq": json::scalar_to_json(&cert.norm_sq)?,
                "l2_sq": json::scalar_to_json(&cert.l2_sq)?,
            });
            Ok((out, format!("extreme: {}", cert.verdict)))
        }
        Command::Dual { op } => run_dual(op, tol),
        Command::Construct { what } => run_construct(what, tol),
        Command::Verify { n, trials, seed } => {
            let report = suites::verify(*n, *trials, *seed, tol);
            let ok = report.ok();
            let out = report.to_json();
            let summary = report.summary();
            if ok {
                Ok((out, summary))
            } else {
                print_output(&out, cli.pretty);
                eprintln!("{summary}");
                Err(Failure {
                    code: EXIT_INTERNAL,
                    message: "verification suites reported failures".into(),
                })
            }
        }
        Command::Fuzz { n, trials, seed } => {
            let report = suites::fuzz(*n, *trials, *seed);
            let ok = report.mismatches == 0;
            let out = report.to_json();
            let summary = report.summary();
            if ok {
                Ok((out, summary))
            } else {
                print_output(&out, cli.pretty);
                eprintln!("{summary}");
                Err(Failure {
                    code: EXIT_INTERNAL,
                    message: "fuzzing found oracle mismatches".into(),
                })
            }
        }
    }
}

fn run_dual(op: &DualOp, tol: f64) -> Result<(Value, String), Failure> {
    match op {
        DualOp::NormOne(opts) => {
            let f = read_functional(opts)?;
            let verdict = is_norm_one_d1(&f, tol)?;
            Ok((json!({ "norm_one": verdict }), format!("norm one: {verdict}")))
        }
        DualOp::Extreme(opts) => {
            let f = read_functional(opts)?;
            let (verdict, reason) = is_extreme_bjstar(&f, tol)?;
            let out = json!({
                "extreme": verdict,
                "reason": reason.map(|r| Value::String(r.as_str().into())).unwrap_or(Value::Null),
            });
            let summary = match reason {
                Some(r) => format!("extreme: {verdict} ({})", r.as_str()),
                None => format!("extreme: {verdict}"),
            };
            Ok((out, summary))
        }
        DualOp::Gaps(opts) => {
            let f = read_functional(opts)?;
            let gaps = gap_profile(&f).gaps;
            Ok((json!({ "gaps": gaps }), format!("gaps: {gaps:?}")))
        }
        DualOp::Closure(opts) => {
            let f = read_functional(opts)?;
            let verdict = in_closure_of_extremes(&f, tol)?;
            Ok((
                json!({ "in_closure": verdict }),
                format!("in closure of extremes: {verdict}"),
            ))
        }
        DualOp::Approx { input, m } => {
            let f = read_functional(input)?;
            let out = approx_extreme_sequence(&f, *m, tol)?;
            let distance = coefficient_distance_sq(&out, &f)?.to_f64().sqrt();
            let value = json!({
                "functional": json::functional_to_json(&out)?,
                "distance_bound": distance,
            });
            Ok((
                value,
                format!("approximant m={m}, coefficient distance bound {distance:.6}"),
            ))
        }
    }
}

fn run_construct(what: &ConstructOp, tol: f64) -> Result<(Value, String), Failure> {
    match what {
        ConstructOp::Ek { k } => {
            let x = multi_partition_vector(*k)?;
            let count = count_norming_partitions(&x, tol)?;
            // The margin diagnostic exhausts families; skip it past its cap.
            let margin = match norming_margin(&x, tol) {
                Ok(m) => m,
                Err(Error::BruteForceCap { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let out = json!({
                "vector": json::vector_to_json(&x)?,
                "count": count_to_json(&count),
                "margin": margin,
            });
            Ok((out, format!("k = {k}: {count} norming partition(s)")))
        }
        ConstructOp::Eset { a1 } => {
            let p = e_set_point(*a1)?;
            let (r1, r2) = p.residuals();
            let out = json!({
                "a1": p.a1,
                "a2": p.a2,
                "a3": p.a3,
                "residuals": [r1, r2],
            });
            Ok((out, format!("a2 = {}, a3 = {}", p.a2, p.a3)))
        }
        ConstructOp::Prop65 { r } => {
            let ramp: Vec<f64> = r
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Failure::validation(format!("bad ramp value {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            let seq = ramp_sequence(&ramp)?;
            Ok((
                json!({ "sequence": seq }),
                format!("{} coefficients", 2 * ramp.len() - 1),
            ))
        }
        ConstructOp::Blocks { b, a1 } => {
            let p = e_set_point(*a1)?;
            let z = block_product_vector(*b, &p)?;
            let count = count_norming_partitions(&z, tol)?;
            let out = json!({
                "vector": json::vector_to_json(&z)?,
                "count": count_to_json(&count),
            });
            Ok((out, format!("b = {b}: {count} norming partition(s)")))
        }
    }
}

fn print_output(value: &Value, pretty: bool) {
    if pretty {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        println!("{}", serde_json::to_string(value).expect("serializable"));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, summary)) => {
            print_output(&value, cli.pretty);
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
