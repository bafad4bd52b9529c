//! Closed-form per-step cost models for the five methodologies.
//!
//! Totals fold in assignments, loop overhead and comparisons with fixed
//! weights and are evaluated in integer arithmetic, so table output is
//! drift-free. The kernel columns carry the per-iteration evaluation
//! models and the update columns the per-step state-update models.

use std::fmt;

/// A complete per-step methodology: update form plus evaluation scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Method {
    /// Direct evaluation with every constant recomputed in the loop;
    /// benchmark-only, no closed form.
    #[serde(rename = "naive")]
    NaiveNoTables,
    /// Power-sum update, monomial evaluation.
    #[serde(rename = "direct")]
    DirectEval,
    /// Nested update, three separate nested evaluation chains.
    #[serde(rename = "half_horner")]
    HalfHorner,
    /// Nested update, fused single-pass evaluation.
    #[serde(rename = "full_horner")]
    FullHorner,
    /// Nested update, power-table evaluation with normalized derivatives.
    #[serde(rename = "shaw_traub")]
    ShawTraub,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::NaiveNoTables,
        Method::DirectEval,
        Method::HalfHorner,
        Method::FullHorner,
        Method::ShawTraub,
    ];

    /// The four methods with closed-form totals, in table order.
    pub const CLOSED_FORM: [Method; 4] = [
        Method::DirectEval,
        Method::HalfHorner,
        Method::FullHorner,
        Method::ShawTraub,
    ];

    pub fn has_closed_form(self) -> bool {
        self != Method::NaiveNoTables
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::NaiveNoTables => "naive",
            Method::DirectEval => "direct",
            Method::HalfHorner => "half-horner",
            Method::FullHorner => "full-horner",
            Method::ShawTraub => "shaw-traub",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" | "naive-no-tables" => Ok(Method::NaiveNoTables),
            "direct" => Ok(Method::DirectEval),
            "half-horner" | "half_horner" => Ok(Method::HalfHorner),
            "full-horner" | "full_horner" => Ok(Method::FullHorner),
            "shaw-traub" | "shaw_traub" => Ok(Method::ShawTraub),
            other => Err(format!(
                "unknown method `{other}` (expected naive, direct, half-horner, full-horner or shaw-traub)"
            )),
        }
    }
}

/// Cost model row for one method at one order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostRow {
    pub n: usize,
    /// Adds of the per-step state update once the root is known.
    pub adds_update: u64,
    /// Muls of the per-step state update once the root is known.
    pub muls_update: u64,
    /// Adds of one polynomial-and-derivatives evaluation.
    pub adds_eval_per_iter: u64,
    /// Muls of one polynomial-and-derivatives evaluation.
    pub muls_eval_per_iter: u64,
    /// Full per-step operation total, assignments and loop overhead included.
    pub total: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexityError {
    /// The deliberately table-free method has no closed form.
    NoClosedForm,
    /// Order range outside `2 <= lo <= hi`.
    BadRange,
}

impl fmt::Display for ComplexityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexityError::NoClosedForm => {
                write!(f, "the naive method has no closed-form cost model")
            }
            ComplexityError::BadRange => write!(f, "order range must satisfy 2 <= lo <= hi"),
        }
    }
}

impl std::error::Error for ComplexityError {}

/// Closed-form cost of `method` at order `n >= 2`, exact integers.
pub fn cost(method: Method, n: usize) -> Result<CostRow, ComplexityError> {
    if !method.has_closed_form() {
        return Err(ComplexityError::NoClosedForm);
    }
    if n < 2 {
        return Err(ComplexityError::BadRange);
    }
    let m = n as u64;
    let sq = m * m;
    let cu = m * m * m;
    let row = match method {
        Method::NaiveNoTables => unreachable!("checked above"),
        Method::DirectEval => CostRow {
            n,
            adds_update: (m + 1) * (m + 1),
            muls_update: (cu + 6 * sq - m - 6) / 6,
            adds_eval_per_iter: 3 * m + 1,
            muls_eval_per_iter: 3 * (sq + m) / 2,
            total: (cu + 39 * sq + 110 * m + 288) / 6,
        },
        Method::HalfHorner => CostRow {
            n,
            adds_update: (m + 1) * (m + 1),
            muls_update: m * (m + 1),
            adds_eval_per_iter: 3 * m + 1,
            muls_eval_per_iter: 3 * m - 1,
            total: 2 * sq + 24 * m + 46,
        },
        Method::FullHorner => CostRow {
            n,
            adds_update: (m + 1) * (m + 1),
            muls_update: m * (m + 1),
            adds_eval_per_iter: 3 * m,
            muls_eval_per_iter: 3 * m - 2,
            total: 2 * sq + 42 * m + 58,
        },
        Method::ShawTraub => CostRow {
            n,
            adds_update: (m + 1) * (m + 1),
            muls_update: m * (m + 1),
            adds_eval_per_iter: 3 * m,
            muls_eval_per_iter: 2 * m + 3,
            total: 2 * sq + 36 * m + 74,
        },
    };
    Ok(row)
}

/// Cost rows for every closed-form method over `lo..=hi`.
pub fn complexity_table(
    lo: usize,
    hi: usize,
) -> Result<Vec<(Method, Vec<CostRow>)>, ComplexityError> {
    if lo < 2 || lo > hi {
        return Err(ComplexityError::BadRange);
    }
    Method::CLOSED_FORM
        .iter()
        .map(|&m| {
            let rows = (lo..=hi)
                .map(|n| cost(m, n))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((m, rows))
        })
        .collect()
}

/// Totals table as CSV: `n,direct,half_horner,full_horner,shaw_traub`.
pub fn totals_csv(lo: usize, hi: usize) -> Result<String, ComplexityError> {
    if lo < 2 || lo > hi {
        return Err(ComplexityError::BadRange);
    }
    let mut out = String::from("n,direct,half_horner,full_horner,shaw_traub\n");
    for n in lo..=hi {
        let d = cost(Method::DirectEval, n)?.total;
        let h = cost(Method::HalfHorner, n)?.total;
        let f = cost(Method::FullHorner, n)?.total;
        let s = cost(Method::ShawTraub, n)?.total;
        out.push_str(&format!("{n},{d},{h},{f},{s}\n"));
    }
    Ok(out)
}
