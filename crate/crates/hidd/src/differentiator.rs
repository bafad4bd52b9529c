//! The differentiator itself: one call per sample, three-case update law.
//!
//! A step computes the innovation, classifies it against the dead zone,
//! solves for the correction magnitude when off the dead zone, and applies
//! the case update to the derivative stack. Two production update forms
//! are provided (plain power sums and nested-in-r chains) plus a dense
//! matrix reference path used by the tests.

use crate::counter::{OpCounter, Tally};
use crate::polyeval::EvalStrategy;
use crate::rootfind::{
    classify, innovation, solve_case, CaseKind, RootCase, RootError, DEFAULT_ITERS,
};
use crate::tables::{precompute, TableError, Tables};
use std::fmt;

/// How the case update is applied to the state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateForm {
    /// Per-row power sums with per-term power chains.
    SumOfPowers,
    /// Per-row nested chains in the root estimate; the production default.
    Horner,
    /// Dense prediction + injection matrices; reference path, cubic cost.
    MatrixOracle,
}

/// Everything observable about one step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepTrace {
    pub k: u64,
    pub sample: f64,
    pub innovation: f64,
    pub case: CaseKind,
    pub r0: f64,
    pub sigma_tilde: f64,
    /// Tally delta for the step, when the driving counter keeps totals.
    pub ops: Option<OpCounter>,
}

/// Derivative-estimate stack plus step bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    z: Vec<f64>,
    k: u64,
    last: Option<StepTrace>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepError {
    /// The state (or the solve feeding it) became NaN or infinite.
    NonFiniteState,
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepError::NonFiniteState => write!(f, "state became non-finite"),
        }
    }
}

impl std::error::Error for StepError {}

#[derive(Debug)]
pub enum RunError {
    EmptySamples,
    Table(TableError),
    Step { index: usize, source: StepError },
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::EmptySamples => write!(f, "no samples to process"),
            RunError::Table(e) => write!(f, "{e}"),
            RunError::Step { index, source } => write!(f, "step {index}: {source}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<TableError> for RunError {
    fn from(e: TableError) -> Self {
        RunError::Table(e)
    }
}

/// Compact per-step outcome used by the hot loops.
#[derive(Clone, Copy, Debug)]
pub struct StepOutcome {
    pub innovation: f64,
    pub case: CaseKind,
    pub r0: f64,
    pub sigma_tilde: f64,
}

/// Applies the case update to `z` in place.
///
/// Row `i` only reads entries `i..=n`, so ascending in-place writes are
/// safe. Off the dead zone the per-step tallies are exact functions of the
/// order: `SumOfPowers` spends `(n+1)^2` adds, `Horner` spends `(n+1)^2`
/// adds and `n(n+1)` muls.
pub fn apply_update<C: Tally>(
    z: &mut [f64],
    tables: &Tables,
    case: &RootCase,
    r0: f64,
    form: UpdateForm,
    c: &mut C,
) {
    let n = tables.n();
    debug_assert_eq!(z.len(), n + 1);
    match (form, case) {
        (UpdateForm::MatrixOracle, _) => apply_matrix(z, tables, case, r0, c),
        (_, RootCase::DeadZone { .. }) => apply_dead_zone(z, tables, case, c),
        (UpdateForm::SumOfPowers, _) => apply_power_sum(z, tables, case, r0, c),
        (UpdateForm::Horner, _) => apply_horner(z, tables, case, r0, c),
    }
}

/// Prediction part shared by the branch updates: `z_i + Σ taylor * z_j`.
#[inline]
fn predict_row<C: Tally>(z: &[f64], taylor: &[f64], i: usize, n: usize, c: &mut C) -> f64 {
    let mut acc = z[i];
    for j in i + 1..=n {
        acc += taylor[j - i] * z[j];
        c.adds(1);
        c.muls(1);
    }
    acc
}

fn apply_power_sum<C: Tally>(z: &mut [f64], tables: &Tables, case: &RootCase, r0: f64, c: &mut C) {
    let n = tables.n();
    let taylor = tables.taylor();
    let add_correction = case.kind() == CaseKind::NegBranch;
    for i in 0..=n {
        let mut acc = predict_row(z, taylor, i, n, c);
        let row = tables.inj_row(i);
        for j in i..=n {
            let m = n - j;
            let term = if m == 0 {
                row[j - i]
            } else {
                // Per-term power chain: m - 1 muls for r0^m, 1 for the weight.
                let mut pw = r0;
                for _ in 1..m {
                    pw *= r0;
                    c.muls(1);
                }
                c.muls(1);
                row[j - i] * pw
            };
            if add_correction {
                acc += term;
            } else {
                acc -= term;
            }
            c.adds(1);
        }
        z[i] = acc;
    }
}

fn apply_horner<C: Tally>(z: &mut [f64], tables: &Tables, case: &RootCase, r0: f64, c: &mut C) {
    let n = tables.n();
    let taylor = tables.taylor();
    let add_correction = case.kind() == CaseKind::NegBranch;
    for i in 0..=n {
        let acc = predict_row(z, taylor, i, n, c);
        let row = tables.inj_row(i);
        // Chain of length 1 is its lone coefficient.
        let mut h = row[0];
        for &w in &row[1..] {
            h = h * r0 + w;
            c.muls(1);
            c.adds(1);
        }
        z[i] = if add_correction { acc + h } else { acc - h };
        c.adds(1);
    }
}

fn apply_dead_zone<C: Tally>(z: &mut [f64], tables: &Tables, case: &RootCase, c: &mut C) {
    let n = tables.n();
    let taylor = tables.taylor();
    let b = case.b();
    // Ratio b / radius enters every injection row; one division.
    let ratio = -case.xi();
    c.muls(1);

    // Value row: the innovation plus the full prediction, which telescopes
    // back to the sample itself.
    let mut acc = b + z[0];
    c.adds(1);
    for j in 1..=n {
        acc += taylor[j] * z[j];
        c.adds(1);
        c.muls(1);
    }
    let z0 = acc;

    // Ascending writes are safe: row i only reads columns i..=n.
    for i in 1..=n {
        let mut acc = predict_row(z, taylor, i, n, c);
        acc += tables.inj_at(i, n) * ratio;
        c.adds(1);
        c.muls(1);
        z[i] = acc;
    }
    z[0] = z0;
}

fn apply_matrix<C: Tally>(z: &mut [f64], tables: &Tables, case: &RootCase, r0: f64, c: &mut C) {
    let n = tables.n();
    let params = tables.params();
    let lambda = params.lambda();
    let big_l = params.lipschitz();
    let xi = case.xi();
    let sigma = match case.kind() {
        CaseKind::DeadZone => 0.0,
        CaseKind::NegBranch => -r0.powi(n as i32 + 1),
        CaseKind::PosBranch => r0.powi(n as i32 + 1),
    };
    let mag = sigma.abs();

    // Correction vector; the top row keeps |sigma|^0 = 1 so the dead-zone
    // injection survives at exactly one entry.
    let v: Vec<f64> = (0..=n)
        .map(|i| {
            let pw = if i == n {
                1.0
            } else {
                c.roots(1);
                mag.powf((n - i) as f64 / (n + 1) as f64)
            };
            let e = (i + 1) as f64 / (n + 1) as f64;
            c.roots(1);
            c.muls(3);
            -lambda[n - i] * big_l.powf(e) * pw * xi
        })
        .collect();

    let predict = tables.predict_matrix();
    let inject = tables.inject_matrix();
    let mut next = vec![0.0f64; n + 1];
    for i in 0..=n {
        let mut acc = 0.0;
        for j in i..=n {
            acc += predict[i][j] * z[j] + inject[i][j] * v[j];
            c.adds(2);
            c.muls(2);
        }
        next[i] = acc;
    }
    z.copy_from_slice(&next);
}

/// One full step on a raw state slice. Classification tallies two
/// comparisons; the final finiteness check is diagnostic and untallied.
pub fn step_core<C: Tally>(
    z: &mut [f64],
    sample: f64,
    tables: &Tables,
    strategy: EvalStrategy,
    form: UpdateForm,
    iters: u32,
    c: &mut C,
) -> Result<StepOutcome, StepError> {
    let b = innovation(tables, z, sample, c);
    c.cmps(2);
    let case = classify(b, tables.dead_zone_radius());
    let res = solve_case(tables, &case, strategy, iters, c).map_err(|e| match e {
        // Only non-finite data can make the solve fail on a classified case.
        RootError::NonFiniteIterate { .. } | RootError::DeadZoneInput => StepError::NonFiniteState,
    })?;
    apply_update(z, tables, &case, res.r0, form, c);
    if !z.iter().all(|v| v.is_finite()) {
        return Err(StepError::NonFiniteState);
    }
    Ok(StepOutcome {
        innovation: b,
        case: case.kind(),
        r0: res.r0,
        sigma_tilde: res.sigma_tilde,
    })
}

impl State {
    /// Fresh state of order `n`, all estimates zero.
    pub fn new(n: usize) -> Self {
        State {
            z: vec![0.0; n + 1],
            k: 0,
            last: None,
        }
    }

    /// State with explicit initial estimates.
    pub fn with_initial(z: Vec<f64>) -> Self {
        assert!(!z.is_empty());
        State { z, k: 0, last: None }
    }

    /// Assembles a state from parts; used by alternative loop drivers.
    pub(crate) fn assemble(z: Vec<f64>, k: u64, last: Option<StepTrace>) -> Self {
        State { z, k, last }
    }

    /// Current estimates: `z()[i]` approximates the i-th derivative.
    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn last(&self) -> Option<&StepTrace> {
        self.last.as_ref()
    }

    /// Consumes one sample and advances the stack.
    pub fn step<C: Tally>(
        &mut self,
        sample: f64,
        tables: &Tables,
        strategy: EvalStrategy,
        form: UpdateForm,
        c: &mut C,
    ) -> Result<(), StepError> {
        let before = c.snapshot();
        let out = step_core(&mut self.z, sample, tables, strategy, form, DEFAULT_ITERS, c)?;
        let ops = match (before, c.snapshot()) {
            (Some(b), Some(a)) => Some(a - b),
            _ => None,
        };
        self.last = Some(StepTrace {
            k: self.k,
            sample,
            innovation: out.innovation,
            case: out.case,
            r0: out.r0,
            sigma_tilde: out.sigma_tilde,
            ops,
        });
        self.k += 1;
        Ok(())
    }

    /// Reference step through the dense matrix form.
    pub fn step_matrix_oracle<C: Tally>(
        &mut self,
        sample: f64,
        tables: &Tables,
        c: &mut C,
    ) -> Result<(), StepError> {
        self.step(sample, tables, EvalStrategy::Direct, UpdateForm::MatrixOracle, c)
    }
}

/// Drives a whole sample sequence from a zero initial state, collecting
/// one trace per step.
pub fn run(
    params: &crate::params::Params,
    samples: &[f64],
    strategy: EvalStrategy,
    form: UpdateForm,
) -> Result<(State, Vec<StepTrace>), RunError> {
    if samples.is_empty() {
        return Err(RunError::EmptySamples);
    }
    let tables = precompute(params)?;
    let mut state = State::new(params.n());
    let mut traces = Vec::with_capacity(samples.len());
    let mut counter = OpCounter::new();
    for (index, &sample) in samples.iter().enumerate() {
        state
            .step(sample, &tables, strategy, form, &mut counter)
            .map_err(|source| RunError::Step { index, source })?;
        traces.push(state.last().expect("trace recorded").clone());
    }
    Ok((state, traces))
}
