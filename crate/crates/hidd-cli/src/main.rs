//! Command-line harness: simulation traces, benchmark tables, closed-form
//! cost tables and a self-validation suite.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or configuration
//! error.

mod config;
mod validate;

use clap::{Args, Parser, Subcommand};
use hidd::{
    expanded_gains, gen_signal, precompute, run_bench, CaseKind, Method, NaiveState, NoCount,
    Params, SignalKind, SignalSpec, SineTerm, State, DEFAULT_ITERS,
};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hidd", version, about = "Implicit discrete-time differentiator toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration and emit a per-step trace CSV.
    Run(RunArgs),
    /// Time the methodologies over the configured grid and emit a CSV report.
    Bench(BenchArgs),
    /// Emit the closed-form per-step cost table as CSV.
    Complexity(ComplexityArgs),
    /// Run the built-in oracle and invariant checks.
    Validate,
}

#[derive(Args)]
struct RunArgs {
    /// Differentiator order.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Sampling period in seconds.
    #[arg(long, default_value_t = 0.001)]
    tau: f64,
    /// Simulated seconds.
    #[arg(long, default_value_t = 10.0)]
    seconds: f64,
    /// Methodology: naive, direct, half-horner, full-horner, shaw-traub.
    #[arg(long, default_value = "half-horner")]
    method: String,
    /// Lipschitz bound of the n-th derivative.
    #[arg(long, default_value_t = 1.0)]
    lipschitz: f64,
    /// Comma-separated gain overrides (n+1 values).
    #[arg(long)]
    gains: Option<String>,
    /// Signal: default, zero, sine, ramp.
    #[arg(long, default_value = "default")]
    signal: String,
    /// Sine amplitude.
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Sine angular frequency (rad/s).
    #[arg(long, default_value_t = 1.0)]
    frequency: f64,
    /// Ramp slope.
    #[arg(long, default_value_t = 1.0)]
    slope: f64,
    /// Uniform noise amplitude.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Noise seed (HIDD_SEED overrides).
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<String>,
    /// Orders to benchmark.
    #[arg(long = "n", num_args = 1.., value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
    /// Sampling period in seconds.
    #[arg(long)]
    tau: Option<f64>,
    /// Horizons in simulated seconds.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    horizons: Option<Vec<f64>>,
    /// Methods to time.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Timed repetitions per cell (median reported).
    #[arg(long)]
    reps: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(long, default_value_t = 2)]
    from: usize,
    #[arg(long, default_value_t = 30)]
    to: usize,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Complexity(args) => cmd_complexity(args),
        Command::Validate => return cmd_validate(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write_output(out: &Option<String>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {path}: {e}")),
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>()
}

/// HIDD_SEED overrides any configured seed.
fn seed_override() -> Result<Option<u64>, String> {
    match std::env::var("HIDD_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| format!("HIDD_SEED must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(None),
    }
}

fn cmd_complexity(args: ComplexityArgs) -> Result<(), String> {
    let csv = hidd::totals_csv(args.from, args.to).map_err(|e| e.to_string())?;
    write_output(&args.out, &csv)
}

fn cmd_run(args: RunArgs) -> Result<(), String> {
    let file = config::load(args.config.as_deref())?;

    let params = if let Some(p) = file.params {
        p
    } else {
        let lambda = match &args.gains {
            Some(csv) => config::parse_gain_list(csv)?,
            None => expanded_gains(args.n).map_err(|e| e.to_string())?,
        };
        Params::new(args.n, args.lipschitz, lambda, args.tau).map_err(|e| e.to_string())?
    };

    let mut signal = match file.signal {
        Some(s) => s,
        None => signal_from_flags(&args)?,
    };
    if let Some(seed) = seed_override()? {
        signal.seed = seed;
    }

    let method = parse_method(&args.method)?;
    let steps = (args.seconds / params.tau()).round() as usize;
    if steps == 0 {
        return Err("horizon shorter than one sample".into());
    }
    let samples = gen_signal(&signal, params.tau(), steps);

    let csv = trace_csv(&params, &samples, method)?;
    write_output(&args.out, &csv)
}

fn signal_from_flags(args: &RunArgs) -> Result<SignalSpec, String> {
    let kind = match args.signal.as_str() {
        "default" => return Ok(SignalSpec {
            noise_amplitude: args.noise,
            seed: args.seed,
            ..SignalSpec::default_bench()
        }),
        "zero" => SignalKind::Zero,
        "sine" => SignalKind::Sine {
            amplitude: args.amplitude,
            frequency: args.frequency,
        },
        "ramp" => SignalKind::Ramp { slope: args.slope },
        "sum" => SignalKind::SumOfSines(vec![
            SineTerm {
                amplitude: args.amplitude,
                frequency: args.frequency,
                phase: 0.0,
            },
            SineTerm {
                amplitude: 0.5 * args.amplitude,
                frequency: 2.0 * args.frequency,
                phase: std::f64::consts::FRAC_PI_2,
            },
        ]),
        other => return Err(format!("unknown signal `{other}` (default, zero, sine, ramp, sum)")),
    };
    Ok(SignalSpec {
        kind,
        noise_amplitude: args.noise,
        seed: args.seed,
    })
}

/// Per-step trace: `k,t,f,b_k,case,r0,z0..zn`.
fn trace_csv(params: &Params, samples: &[f64], method: Method) -> Result<String, String> {
    let n = params.n();
    let mut out = String::with_capacity(64 * samples.len());
    out.push_str("k,t,f,b_k,case,r0");
    for i in 0..=n {
        out.push_str(&format!(",z{i}"));
    }
    out.push('\n');

    let case_label = |c: CaseKind| c.to_string();
    match hidd::bench::method_pipeline(method) {
        Some((strategy, form)) => {
            let tables = precompute(params).map_err(|e| e.to_string())?;
            let mut st = State::new(n);
            for (k, &f) in samples.iter().enumerate() {
                st.step(f, &tables, strategy, form, &mut NoCount)
                    .map_err(|e| format!("step {k}: {e}"))?;
                let tr = st.last().expect("trace recorded");
                out.push_str(&format!(
                    "{k},{},{f},{},{},{}",
                    k as f64 * params.tau(),
                    tr.innovation,
                    case_label(tr.case),
                    tr.r0
                ));
                for v in st.z() {
                    out.push_str(&format!(",{v}"));
                }
                out.push('\n');
            }
        }
        None => {
            let mut z = vec![0.0f64; n + 1];
            let mut ns = NaiveState::new(n);
            for (k, &f) in samples.iter().enumerate() {
                let o = ns
                    .step(params, &mut z, f, DEFAULT_ITERS, &mut NoCount)
                    .map_err(|e| format!("step {k}: {e}"))?;
                out.push_str(&format!(
                    "{k},{},{f},{},{},{}",
                    k as f64 * params.tau(),
                    o.innovation,
                    case_label(o.case),
                    o.r0
                ));
                for v in &z {
                    out.push_str(&format!(",{v}"));
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn cmd_bench(args: BenchArgs) -> Result<(), String> {
    let file = config::load(args.config.as_deref())?;
    let mut cfg = file.bench.unwrap_or_default();
    if let Some(n) = args.n_values {
        cfg.n_values = n;
    }
    if let Some(tau) = args.tau {
        cfg.tau = tau;
    }
    if let Some(h) = args.horizons {
        cfg.horizons = h;
    }
    if let Some(methods) = args.methods {
        cfg.methods = methods
            .iter()
            .map(|s| parse_method(s))
            .collect::<Result<_, _>>()?;
    }
    if let Some(reps) = args.reps {
        cfg.repetitions = reps;
    }

    let mut signal = file.signal.unwrap_or_else(SignalSpec::default_bench);
    if let Some(seed) = seed_override()? {
        signal.seed = seed;
    }

    let cells = cfg.n_values.len() * cfg.horizons.len() * cfg.methods.len();
    eprintln!(
        "benchmarking {cells} cells ({} timed runs each + warm-up + tally pass)...",
        cfg.repetitions
    );
    let report = run_bench(&cfg, &signal).map_err(|e| e.to_string())?;
    write_output(&args.out, &report.to_csv())
}

fn cmd_validate() -> ExitCode {
    if validate::run_all() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
