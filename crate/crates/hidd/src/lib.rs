//! Implicit discrete-time homogeneous differentiator.
//!
//! Estimates the first `n` derivatives of a sampled signal whose `n`-th
//! derivative has a known Lipschitz bound. Each sample either falls in a
//! dead zone (linear update) or requires the unique positive root of a
//! monic polynomial, found by a fixed-budget Halley iteration. Four
//! interchangeable evaluation backends feed that iteration, every kernel
//! reports exact operation tallies, and closed-form per-step cost models
//! plus a benchmark harness compare the methodologies end to end.
//!
//! ```
//! use hidd::{expanded_gains, run, EvalStrategy, Params, UpdateForm};
//!
//! let params = Params::new(2, 1.0, expanded_gains(2).unwrap(), 0.001).unwrap();
//! let samples: Vec<f64> = (0..20_000).map(|k| (k as f64 * 0.001).sin()).collect();
//! let (state, _traces) = run(&params, &samples, EvalStrategy::HornerSeparate,
//!                            UpdateForm::Horner).unwrap();
//! // After the transient, z[1] tracks d/dt sin t = cos t.
//! assert!((state.z()[1] - 20.0f64.cos()).abs() < 1e-3);
//! ```

pub mod bench;
pub mod complexity;
pub mod counter;
pub mod differentiator;
pub mod naive;
pub mod params;
pub mod polyeval;
pub mod rootfind;
pub mod signal;
pub mod tables;

pub use bench::{run_bench, BenchConfig, BenchError, BenchReport, BenchRow, GainOverride};
pub use complexity::{complexity_table, cost, totals_csv, ComplexityError, CostRow, Method};
pub use counter::{NoCount, OpCounter, Tally};
pub use differentiator::{
    apply_update, run, step_core, RunError, State, StepError, StepOutcome, StepTrace, UpdateForm,
};
pub use naive::{run_naive, NaiveState};
pub use params::{
    default_gains, expanded_gains, expanded_gains_from, ParamError, Params, DEFAULT_GAIN_TABLE,
    MAX_DEFAULT_ORDER,
};
pub use polyeval::{
    eval_direct, eval_horner_fused, eval_horner_separate, eval_shaw_traub, EvalError,
    EvalStrategy, PolySpec, R_GUARD,
};
pub use rootfind::{
    classify, halley_solve, halley_solve_with, initial_guess, innovation, poly_for_case,
    solve_case, CaseKind, RootCase, RootError, RootResult, DEFAULT_ITERS,
};
pub use signal::{gen_signal, SignalKind, SignalSpec, SineTerm};
pub use tables::{precompute, TableError, Tables};
