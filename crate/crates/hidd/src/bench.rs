//! Wall-clock benchmarking of the five methodologies.
//!
//! Methodology: samples and constants are generated before anything is
//! timed, timed loops run single-threaded on a monotonic clock with an
//! untimed warm-up run discarded, and the median of the repetitions is
//! reported. Operation tallies come from one separate instrumented pass;
//! they are deterministic, so one pass suffices.

use crate::complexity::Method;
use crate::counter::{NoCount, OpCounter, Tally};
use crate::differentiator::{step_core, StepError, UpdateForm};
use crate::naive::NaiveState;
use crate::params::{default_gains, Params, MAX_DEFAULT_ORDER};
use crate::polyeval::EvalStrategy;
use crate::rootfind::DEFAULT_ITERS;
use crate::signal::{gen_signal, SignalSpec};
use crate::tables::{precompute, TableError, Tables};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Instant;

/// Gain sequence for one order not covered by the built-in table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainOverride {
    pub n: usize,
    pub lambda: Vec<f64>,
}

/// Benchmark configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub n_values: Vec<usize>,
    pub tau: f64,
    /// Horizons in simulated seconds; each must be a whole number of steps.
    pub horizons: Vec<f64>,
    pub methods: Vec<Method>,
    /// Timed repetitions per cell; the median is reported.
    pub repetitions: usize,
    /// Gains for orders above the built-in table.
    pub gains: Vec<GainOverride>,
    #[serde(rename = "L")]
    pub lipschitz: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        // Expanded gain sets keep the long default horizons bounded; the
        // order-10 ladder extends the built-in one smoothly. Per-step cost
        // does not depend on gain values, only on the order.
        let ladder10 = [
            1.1, 1.5, 2.0, 3.0, 5.0, 7.0, 10.0, 12.0, 15.0, 18.0, 22.0,
        ];
        BenchConfig {
            n_values: vec![3, 7, 10],
            tau: 0.001,
            horizons: vec![2000.0, 10000.0, 25000.0, 50000.0],
            methods: Method::ALL.to_vec(),
            repetitions: 3,
            gains: vec![
                GainOverride {
                    n: 3,
                    lambda: crate::params::expanded_gains(3).expect("order in range"),
                },
                GainOverride {
                    n: 7,
                    lambda: crate::params::expanded_gains(7).expect("order in range"),
                },
                GainOverride {
                    n: 10,
                    lambda: crate::params::expanded_gains_from(&ladder10),
                },
            ],
            lipschitz: 10.0,
        }
    }
}

/// One benchmark cell result.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    pub n: usize,
    pub horizon_s: f64,
    pub median_wall_s: f64,
    pub steps_per_s: f64,
    pub ops: OpCounter,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// CSV with header
    /// `method,n,horizon_s,median_wall_s,steps_per_s,adds,muls,roots,cmps`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("method,n,horizon_s,median_wall_s,steps_per_s,adds,muls,roots,cmps\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.method,
                r.n,
                r.horizon_s,
                r.median_wall_s,
                r.steps_per_s,
                r.ops.adds,
                r.ops.muls,
                r.ops.roots,
                r.ops.cmps
            ));
        }
        out
    }

    pub fn find(&self, method: Method, n: usize, horizon_s: f64) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.n == n && r.horizon_s == horizon_s)
    }
}

#[derive(Debug)]
pub enum BenchError {
    /// No gains available for a requested order.
    GainUnavailable(usize),
    BadConfig(String),
    Table(TableError),
    Param(crate::params::ParamError),
    Step {
        method: Method,
        n: usize,
        index: usize,
        source: StepError,
    },
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::GainUnavailable(n) => {
                write!(f, "no gains configured for order {n}; add a gain override")
            }
            BenchError::BadConfig(msg) => write!(f, "bad benchmark configuration: {msg}"),
            BenchError::Table(e) => write!(f, "{e}"),
            BenchError::Param(e) => write!(f, "{e}"),
            BenchError::Step {
                method,
                n,
                index,
                source,
            } => write!(f, "{method} at n={n}, step {index}: {source}"),
        }
    }
}

impl std::error::Error for BenchError {}

impl From<TableError> for BenchError {
    fn from(e: TableError) -> Self {
        BenchError::Table(e)
    }
}

impl From<crate::params::ParamError> for BenchError {
    fn from(e: crate::params::ParamError) -> Self {
        BenchError::Param(e)
    }
}

/// Evaluation strategy and update form behind each methodology label.
pub fn method_pipeline(method: Method) -> Option<(EvalStrategy, UpdateForm)> {
    match method {
        Method::NaiveNoTables => None,
        Method::DirectEval => Some((EvalStrategy::Direct, UpdateForm::SumOfPowers)),
        Method::HalfHorner => Some((EvalStrategy::HornerSeparate, UpdateForm::Horner)),
        Method::FullHorner => Some((EvalStrategy::HornerFused, UpdateForm::Horner)),
        Method::ShawTraub => Some((EvalStrategy::ShawTraub, UpdateForm::Horner)),
    }
}

/// Parameters for one benchmark order, from the built-in table or the
/// configured overrides.
pub fn params_for(cfg: &BenchConfig, n: usize) -> Result<Params, BenchError> {
    let lambda = if let Some(ov) = cfg.gains.iter().find(|g| g.n == n) {
        ov.lambda.clone()
    } else if (1..=MAX_DEFAULT_ORDER).contains(&n) {
        default_gains(n)?
    } else {
        return Err(BenchError::GainUnavailable(n));
    };
    Ok(Params::new(n, cfg.lipschitz, lambda, cfg.tau)?)
}

fn steps_for(horizon_s: f64, tau: f64) -> Result<usize, BenchError> {
    if !(horizon_s > 0.0) {
        return Err(BenchError::BadConfig(format!("horizon {horizon_s} s")));
    }
    let steps = (horizon_s / tau).round();
    if ((steps * tau) - horizon_s).abs() > 1e-6 * horizon_s.max(1.0) {
        return Err(BenchError::BadConfig(format!(
            "horizon {horizon_s} s is not a whole number of steps at tau = {tau}"
        )));
    }
    Ok(steps as usize)
}

fn run_tabled<C: Tally>(
    tables: &Tables,
    samples: &[f64],
    strategy: EvalStrategy,
    form: UpdateForm,
    c: &mut C,
) -> Result<(), (usize, StepError)> {
    let mut z = vec![0.0f64; tables.n() + 1];
    for (i, &s) in samples.iter().enumerate() {
        step_core(&mut z, s, tables, strategy, form, DEFAULT_ITERS, c).map_err(|e| (i, e))?;
    }
    std::hint::black_box(&z);
    Ok(())
}

fn run_table_free<C: Tally>(
    params: &Params,
    samples: &[f64],
    c: &mut C,
) -> Result<(), (usize, StepError)> {
    let mut z = vec![0.0f64; params.n() + 1];
    let mut ns = NaiveState::new(params.n());
    for (i, &s) in samples.iter().enumerate() {
        ns.step(params, &mut z, s, DEFAULT_ITERS, c).map_err(|e| (i, e))?;
    }
    std::hint::black_box(&z);
    Ok(())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Runs the whole benchmark grid.
pub fn run_bench(cfg: &BenchConfig, signal: &SignalSpec) -> Result<BenchReport, BenchError> {
    if cfg.repetitions < 1 {
        return Err(BenchError::BadConfig("repetitions must be >= 1".into()));
    }
    if cfg.n_values.is_empty() || cfg.horizons.is_empty() || cfg.methods.is_empty() {
        return Err(BenchError::BadConfig(
            "orders, horizons and methods must be non-empty".into(),
        ));
    }

    // Validate all orders up front so a late cell cannot waste a long run.
    let mut per_n: Vec<(usize, Params, Tables)> = Vec::new();
    for &n in &cfg.n_values {
        let params = params_for(cfg, n)?;
        let tables = precompute(&params)?;
        per_n.push((n, params, tables));
    }

    let mut rows = Vec::new();
    for &horizon_s in &cfg.horizons {
        let steps = steps_for(horizon_s, cfg.tau)?;
        let samples = gen_signal(signal, cfg.tau, steps);
        for (n, params, tables) in &per_n {
            for &method in &cfg.methods {
                let cell = |c: &mut dyn FnMut() -> Result<(), (usize, StepError)>| -> Result<f64, BenchError> {
                    let start = Instant::now();
                    c().map_err(|(index, source)| BenchError::Step {
                        method,
                        n: *n,
                        index,
                        source,
                    })?;
                    Ok(start.elapsed().as_secs_f64())
                };

                let pipeline = method_pipeline(method);
                let mut timed_run = || match pipeline {
                    Some((strategy, form)) => {
                        run_tabled(tables, &samples, strategy, form, &mut NoCount)
                    }
                    None => run_table_free(params, &samples, &mut NoCount),
                };

                // Warm-up run, discarded.
                cell(&mut timed_run)?;
                let mut times = Vec::with_capacity(cfg.repetitions);
                for _ in 0..cfg.repetitions {
                    times.push(cell(&mut timed_run)?);
                }
                let median_wall_s = median(times);

                // Instrumented pass, untimed.
                let mut ops = OpCounter::new();
                match pipeline {
                    Some((strategy, form)) => {
                        run_tabled(tables, &samples, strategy, form, &mut ops)
                    }
                    None => run_table_free(params, &samples, &mut ops),
                }
                .map_err(|(index, source)| BenchError::Step {
                    method,
                    n: *n,
                    index,
                    source,
                })?;

                rows.push(BenchRow {
                    method,
                    n: *n,
                    horizon_s,
                    median_wall_s,
                    steps_per_s: steps as f64 / median_wall_s,
                    ops,
                });
            }
        }
    }

    // Group rows the way the result tables read: by order, then horizon.
    rows.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.horizon_s.partial_cmp(&b.horizon_s).unwrap())
            .then_with(|| {
                let pos = |m: Method| Method::ALL.iter().position(|&x| x == m).unwrap();
                pos(a.method).cmp(&pos(b.method))
            })
    });
    Ok(BenchReport { rows })
}
