//! Differentiator parameters and their validation.

use serde::Deserialize;
use std::fmt;

/// Built-in gain table for orders 1 through 7, drawn from the standard
/// homogeneous-differentiator gain set. Entry `i` is the gain attached to
/// the `i`-th correction level, counted from the sign term upward.
pub const DEFAULT_GAIN_TABLE: [f64; 8] = [1.1, 1.5, 2.0, 3.0, 5.0, 7.0, 10.0, 12.0];

/// Highest order served by [`default_gains`].
pub const MAX_DEFAULT_ORDER: usize = 7;

/// Validated differentiator configuration.
///
/// Estimates derivatives `0..=n` of a signal whose `n`-th derivative has
/// Lipschitz constant `lipschitz`, sampled every `tau` seconds, with one
/// positive gain per estimated derivative (`n + 1` gains total).
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    n: usize,
    lipschitz: f64,
    lambda: Vec<f64>,
    tau: f64,
}

/// Shape of the JSON configuration: keys `n`, `L`, `lambda`, `tau`.
#[derive(Deserialize)]
struct RawParams {
    n: usize,
    #[serde(rename = "L")]
    lipschitz: f64,
    lambda: Vec<f64>,
    tau: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamError {
    /// A quantity that must be strictly positive was not; carries the field name.
    NonPositive(&'static str),
    /// The gain sequence length does not match `n + 1`.
    GainCountMismatch { expected: usize, got: usize },
    /// No built-in gains for this order; the caller must supply them.
    UnsupportedOrder(usize),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::NonPositive(field) => {
                write!(f, "parameter `{field}` must be strictly positive")
            }
            ParamError::GainCountMismatch { expected, got } => {
                write!(f, "gain sequence must have {expected} entries, got {got}")
            }
            ParamError::UnsupportedOrder(n) => {
                write!(
                    f,
                    "no built-in gains for order {n} (supported 1..={MAX_DEFAULT_ORDER}); supply them explicitly"
                )
            }
        }
    }
}

impl std::error::Error for ParamError {}

impl Params {
    /// Validates and builds a parameter set.
    pub fn new(n: usize, lipschitz: f64, lambda: Vec<f64>, tau: f64) -> Result<Self, ParamError> {
        if n < 1 {
            return Err(ParamError::NonPositive("n"));
        }
        if !(lipschitz > 0.0) {
            return Err(ParamError::NonPositive("L"));
        }
        if !(tau > 0.0) {
            return Err(ParamError::NonPositive("tau"));
        }
        if lambda.len() != n + 1 {
            return Err(ParamError::GainCountMismatch {
                expected: n + 1,
                got: lambda.len(),
            });
        }
        if !lambda.iter().all(|&g| g > 0.0) {
            return Err(ParamError::NonPositive("lambda"));
        }
        Ok(Params {
            n,
            lipschitz,
            lambda,
            tau,
        })
    }

    /// Order `n` with the built-in gain table.
    pub fn with_default_gains(n: usize, lipschitz: f64, tau: f64) -> Result<Self, ParamError> {
        Params::new(n, lipschitz, default_gains(n)?, tau)
    }

    /// Parses the JSON form (`{"n":…, "L":…, "lambda":[…], "tau":…}`).
    pub fn from_json_str(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl TryFrom<RawParams> for Params {
    type Error = ParamError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        Params::new(raw.n, raw.lipschitz, raw.lambda, raw.tau)
    }
}

/// Gains for orders `1..=7` from [`DEFAULT_GAIN_TABLE`]; higher orders must
/// be supplied by the caller.
pub fn default_gains(n: usize) -> Result<Vec<f64>, ParamError> {
    if n < 1 || n > MAX_DEFAULT_ORDER {
        return Err(ParamError::UnsupportedOrder(n));
    }
    Ok(DEFAULT_GAIN_TABLE[..=n].to_vec())
}

/// Expands a cascaded-estimator gain ladder into the gains this
/// differentiator's injection structure needs.
///
/// The classic ladder values drive a cascade in which each level sees the
/// previous level's output error. Here every level is driven by powers of
/// the single measurement error, so the effective per-level gains compound:
/// with ladder `k` and levels counted from the measurement row, row gain
/// `g` satisfies `g_0 = k_n`, `g_{i+1} = k_{n-i-1} * g_i^((n-i-1)/(n-i))`.
/// For orders 1 and 2 the two coincide up to the middle entry; from order
/// 3 the raw ladder values stop converging in this structure while the
/// expanded ones keep the proven margins.
pub fn expanded_gains_from(ladder: &[f64]) -> Vec<f64> {
    assert!(!ladder.is_empty());
    let n = ladder.len() - 1;
    let mut row = vec![0.0; n + 1];
    row[0] = ladder[n];
    for i in 0..n {
        let e = (n - i - 1) as f64 / (n - i) as f64;
        row[i + 1] = ladder[n - i - 1] * row[i].powf(e);
    }
    (0..=n).map(|l| row[n - l]).collect()
}

/// [`expanded_gains_from`] applied to the built-in ladder, `1 <= n <= 7`.
pub fn expanded_gains(n: usize) -> Result<Vec<f64>, ParamError> {
    if n < 1 || n > MAX_DEFAULT_ORDER {
        return Err(ParamError::UnsupportedOrder(n));
    }
    Ok(expanded_gains_from(&DEFAULT_GAIN_TABLE[..=n]))
}
