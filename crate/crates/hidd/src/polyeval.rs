//! Evaluation of the monic implicit polynomial and its first two
//! derivatives under four interchangeable strategies.
//!
//! All strategies return the same `(p, dp, ddp)` triple; they differ in
//! the arithmetic they spend doing it. Per single evaluation of a degree
//! `n + 1` polynomial the tallies are exact functions of `n`:
//!
//! | strategy          | adds | muls        |
//! |-------------------|------|-------------|
//! | `Direct`          | 3n   | 3(n² + n)/2 |
//! | `HornerSeparate`  | 3n   | 3n − 1      |
//! | `HornerFused`     | 3n   | 3n − 2      |
//! | `ShawTraub`       | 3n   | 2n + 3      |
//!
//! `Direct` prices each monomial with its own power chain; that is the
//! whole reason it loses to the nested forms as `n` grows.

use crate::counter::Tally;
use std::fmt;

/// Division guard for the Shaw–Traub normalized-derivative outputs. In
/// differentiator operation the evaluation point is a strictly positive
/// root iterate, so this only fires on malformed external input.
pub const R_GUARD: f64 = 1e-300;

/// How to evaluate the polynomial and its derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalStrategy {
    Direct,
    HornerSeparate,
    HornerFused,
    ShawTraub,
}

/// View of one monic polynomial `p(r) = r^(n+1) + Σ coeffs[i-1] r^i + const_term`
/// together with precomputed derivative coefficients.
///
/// `coeffs[i]` multiplies `r^(i+1)` (so the slice holds the degree-1
/// through degree-n coefficients, ascending). `dcoeffs[i]` multiplies
/// `r^i` in `p'`; `ddcoeffs[i]` multiplies `r^i` in `p''`.
#[derive(Clone, Copy, Debug)]
pub struct PolySpec<'a> {
    pub n: usize,
    pub coeffs: &'a [f64],
    pub const_term: f64,
    pub dcoeffs: &'a [f64],
    pub ddcoeffs: &'a [f64],
}

impl<'a> PolySpec<'a> {
    pub fn new(
        n: usize,
        coeffs: &'a [f64],
        const_term: f64,
        dcoeffs: &'a [f64],
        ddcoeffs: &'a [f64],
    ) -> Self {
        assert!(n >= 1);
        assert_eq!(coeffs.len(), n);
        assert_eq!(dcoeffs.len(), n + 1);
        assert_eq!(ddcoeffs.len(), n);
        PolySpec {
            n,
            coeffs,
            const_term,
            dcoeffs,
            ddcoeffs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalError {
    /// The nested strategies are defined for order 2 and up.
    OrderTooSmall,
    /// Evaluation point too close to zero for the normalized-derivative
    /// divisions; fall back to `HornerSeparate`.
    NearZeroRadius,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::OrderTooSmall => write!(f, "strategy requires order n >= 2"),
            EvalError::NearZeroRadius => {
                write!(f, "evaluation point too close to zero for normalized derivatives")
            }
        }
    }
}

impl std::error::Error for EvalError {}

/// `r^k` by repeated multiplication, `k >= 1`; tallies `k - 1` muls.
#[inline]
fn pow_chain<C: Tally>(r: f64, k: usize, c: &mut C) -> f64 {
    let mut v = r;
    for _ in 1..k {
        v *= r;
        c.muls(1);
    }
    v
}

/// Monomial-sum evaluation with per-term power chains.
pub fn eval_direct<C: Tally>(poly: &PolySpec, r: f64, c: &mut C) -> (f64, f64, f64) {
    let n = poly.n;

    let mut p = pow_chain(r, n + 1, c);
    for i in 1..=n {
        p += poly.coeffs[i - 1] * pow_chain(r, i, c);
        c.muls(1);
        c.adds(1);
    }
    p += poly.const_term;
    c.adds(1);

    let mut dp = poly.dcoeffs[0];
    for i in 1..=n {
        dp += poly.dcoeffs[i] * pow_chain(r, i, c);
        c.muls(1);
        c.adds(1);
    }

    let mut ddp = poly.ddcoeffs[0];
    for i in 1..n {
        ddp += poly.ddcoeffs[i] * pow_chain(r, i, c);
        c.muls(1);
        c.adds(1);
    }

    (p, dp, ddp)
}

/// Three independent nested chains, one per output.
pub fn eval_horner_separate<C: Tally>(
    poly: &PolySpec,
    r: f64,
    c: &mut C,
) -> Result<(f64, f64, f64), EvalError> {
    let n = poly.n;
    if n < 2 {
        return Err(EvalError::OrderTooSmall);
    }

    let mut p = r + poly.coeffs[n - 1];
    c.adds(1);
    for k in (0..n - 1).rev() {
        p = p * r + poly.coeffs[k];
        c.muls(1);
        c.adds(1);
    }
    p = p * r + poly.const_term;
    c.muls(1);
    c.adds(1);

    let mut dp = poly.dcoeffs[n];
    for k in (0..n).rev() {
        dp = dp * r + poly.dcoeffs[k];
        c.muls(1);
        c.adds(1);
    }

    let mut ddp = poly.ddcoeffs[n - 1];
    for k in (0..n - 1).rev() {
        ddp = ddp * r + poly.ddcoeffs[k];
        c.muls(1);
        c.adds(1);
    }

    Ok((p, dp, ddp))
}

/// One nested pass producing value and both derivatives by triple
/// synthetic division; trades a few extra adds for the fewest muls.
pub fn eval_horner_fused<C: Tally>(
    poly: &PolySpec,
    r: f64,
    c: &mut C,
) -> Result<(f64, f64, f64), EvalError> {
    let n = poly.n;
    if n < 2 {
        return Err(EvalError::OrderTooSmall);
    }

    let mut f = r + poly.coeffs[n - 1];
    let mut df = r + f;
    let mut ddf = r + df;
    c.adds(3);

    // After iteration i the accumulators hold the stage-(i+1) values; the
    // loop stops with f, df, ddf at stage n-2.
    for i in 0..n.saturating_sub(2) {
        f = r * f + poly.coeffs[n - i - 2];
        df = r * df + f;
        ddf = r * ddf + df;
        c.muls(3);
        c.adds(3);
    }

    let f_last = r * f + poly.coeffs[0];
    let p = r * f_last + poly.const_term;
    let dp = r * df + f_last;
    let ddp = 2.0 * ddf;
    c.muls(4);
    c.adds(3);

    Ok((p, dp, ddp))
}

/// Power-table scheme returning the value and normalized derivatives,
/// un-normalized on output. Cheapest in muls after the fused form, at the
/// price of more table traffic.
pub fn eval_shaw_traub<C: Tally>(
    poly: &PolySpec,
    r: f64,
    c: &mut C,
) -> Result<(f64, f64, f64), EvalError> {
    let n = poly.n;
    if n < 2 {
        return Err(EvalError::OrderTooSmall);
    }
    if r.abs() <= R_GUARD {
        return Err(EvalError::NearZeroRadius);
    }

    // Incremental power table tpow[m] = r^(m+1), m = 0..n-1.
    let mut tpow = vec![0.0f64; n];
    tpow[0] = r;
    for m in 1..n {
        tpow[m] = tpow[m - 1] * r;
        c.muls(1);
    }
    let t00 = tpow[n - 1] * r;
    c.muls(1);

    // Rolling diagonal sums: u, v, w track the value row and the two
    // normalized-derivative rows. The shared seed t00 saves two stores.
    let mut u = t00;
    let mut v = 0.0;
    let mut w = 0.0;
    for i in 1..=n + 1 {
        if i >= 3 {
            w = v + w;
            c.adds(1);
        } else if i == 2 {
            w = t00;
        }
        if i >= 2 {
            v = u + v;
            c.adds(1);
        } else {
            v = t00;
        }
        let m = i - 1;
        let fold = if m < n {
            c.muls(1);
            poly.coeffs[n - m - 1] * tpow[n - m - 1]
        } else {
            poly.const_term
        };
        u = fold + u;
        c.adds(1);
    }

    let p = u;
    let dp = v / r;
    let ddp = 2.0 * w / tpow[1];
    c.muls(3);

    Ok((p, dp, ddp))
}

impl EvalStrategy {
    /// Total dispatcher used by the root solver.
    ///
    /// Order 1 delegates every strategy to [`eval_direct`] (the nested
    /// forms are defined from order 2), and a near-zero radius sends
    /// `ShawTraub` through the separate nested form instead of failing.
    pub fn eval<C: Tally>(self, poly: &PolySpec, r: f64, c: &mut C) -> (f64, f64, f64) {
        if poly.n < 2 {
            return eval_direct(poly, r, c);
        }
        match self {
            EvalStrategy::Direct => eval_direct(poly, r, c),
            EvalStrategy::HornerSeparate => {
                eval_horner_separate(poly, r, c).expect("order checked")
            }
            EvalStrategy::HornerFused => eval_horner_fused(poly, r, c).expect("order checked"),
            EvalStrategy::ShawTraub => match eval_shaw_traub(poly, r, c) {
                Ok(t) => t,
                Err(EvalError::NearZeroRadius) => {
                    eval_horner_separate(poly, r, c).expect("order checked")
                }
                Err(e) => unreachable!("order checked: {e}"),
            },
        }
    }

    pub const ALL: [EvalStrategy; 4] = [
        EvalStrategy::Direct,
        EvalStrategy::HornerSeparate,
        EvalStrategy::HornerFused,
        EvalStrategy::ShawTraub,
    ];
}

impl fmt::Display for EvalStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EvalStrategy::Direct => "direct",
            EvalStrategy::HornerSeparate => "horner-separate",
            EvalStrategy::HornerFused => "horner-fused",
            EvalStrategy::ShawTraub => "shaw-traub",
        };
        write!(f, "{s}")
    }
}

/// Expected per-evaluation tallies under the crate counting convention.
pub fn expected_eval_ops(strategy: EvalStrategy, n: usize) -> (u64, u64) {
    let n = n as u64;
    match strategy {
        EvalStrategy::Direct => (3 * n, 3 * (n * n + n) / 2),
        EvalStrategy::HornerSeparate => (3 * n, 3 * n - 1),
        EvalStrategy::HornerFused => (3 * n, 3 * n - 2),
        EvalStrategy::ShawTraub => (3 * n, 2 * n + 3),
    }
}
