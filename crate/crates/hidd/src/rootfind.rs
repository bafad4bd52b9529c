//! Case classification and the cubic-order root solve.
//!
//! Each sample lands in one of three regimes depending on how the
//! innovation compares against the dead-zone radius. Off the dead zone the
//! correction magnitude is the unique positive root of a monic polynomial,
//! found by Halley's method from a guess strictly inside the Cauchy
//! bracket. Three iterations are enough in practice for the polynomials
//! this differentiator produces.

use crate::counter::{NoCount, Tally};
use crate::polyeval::{EvalStrategy, PolySpec};
use crate::tables::Tables;
use std::fmt;

/// Fixed iteration budget of the production solve.
pub const DEFAULT_ITERS: u32 = 3;

/// Which update regime a sample falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CaseKind {
    /// Innovation above the dead zone; the correction enters negatively.
    NegBranch,
    /// Innovation inside the closed dead zone; no root solve needed.
    DeadZone,
    /// Innovation below the dead zone; the correction enters positively.
    PosBranch,
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseKind::NegBranch => "neg",
            CaseKind::DeadZone => "dead",
            CaseKind::PosBranch => "pos",
        };
        write!(f, "{s}")
    }
}

/// Classified innovation, carrying whatever the update needs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootCase {
    NegBranch { b: f64, const_term: f64 },
    DeadZone { b: f64, xi: f64 },
    PosBranch { b: f64, const_term: f64 },
}

impl RootCase {
    pub fn kind(&self) -> CaseKind {
        match self {
            RootCase::NegBranch { .. } => CaseKind::NegBranch,
            RootCase::DeadZone { .. } => CaseKind::DeadZone,
            RootCase::PosBranch { .. } => CaseKind::PosBranch,
        }
    }

    /// Sign factor of the correction term; varies in [-1, 1] on the dead zone.
    pub fn xi(&self) -> f64 {
        match self {
            RootCase::NegBranch { .. } => -1.0,
            RootCase::DeadZone { xi, .. } => *xi,
            RootCase::PosBranch { .. } => 1.0,
        }
    }

    /// Constant term of the implicit polynomial; absent on the dead zone.
    pub fn const_term(&self) -> Option<f64> {
        match self {
            RootCase::NegBranch { const_term, .. } | RootCase::PosBranch { const_term, .. } => {
                Some(*const_term)
            }
            RootCase::DeadZone { .. } => None,
        }
    }

    pub fn b(&self) -> f64 {
        match self {
            RootCase::NegBranch { b, .. }
            | RootCase::DeadZone { b, .. }
            | RootCase::PosBranch { b, .. } => *b,
        }
    }
}

/// Outcome of one root solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootResult {
    /// Root estimate, non-negative.
    pub r0: f64,
    /// Signed correction magnitude `xi * r0^(n+1)`; zero on the dead zone.
    pub sigma_tilde: f64,
    /// Iterations actually performed.
    pub iterations: u32,
    /// `|p(r0)|` at the returned estimate (diagnostic, untallied).
    pub residual: f64,
    /// Set when the Halley denominator hit exactly zero and the last
    /// iterate was returned unchanged. Cannot occur for the polynomials
    /// the differentiator produces.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootError {
    /// Operation requires an off-dead-zone case.
    DeadZoneInput,
    /// An iterate became NaN or infinite.
    NonFiniteIterate { iteration: u32 },
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::DeadZoneInput => write!(f, "innovation lies inside the dead zone"),
            RootError::NonFiniteIterate { iteration } => {
                write!(f, "non-finite iterate at iteration {iteration}")
            }
        }
    }
}

impl std::error::Error for RootError {}

/// Innovation `b = sample - predicted z_0`, the driver of case selection.
///
/// Tallies `n + 1` adds and `n` muls.
pub fn innovation<C: Tally>(tables: &Tables, z: &[f64], sample: f64, c: &mut C) -> f64 {
    let n = tables.n();
    debug_assert_eq!(z.len(), n + 1);
    let taylor = tables.taylor();
    let mut b = sample - z[0];
    c.adds(1);
    for l in 1..=n {
        b -= taylor[l] * z[l];
        c.adds(1);
        c.muls(1);
    }
    b
}

/// Three-way split of the innovation against the dead-zone radius. The
/// dead-zone interval is closed, so boundary values take the linear path.
pub fn classify(b: f64, radius: f64) -> RootCase {
    debug_assert!(radius > 0.0);
    if b > radius {
        RootCase::NegBranch {
            b,
            const_term: radius - b,
        }
    } else if b < -radius {
        RootCase::PosBranch {
            b,
            const_term: b + radius,
        }
    } else {
        // NaN innovations land here and poison the state downstream,
        // where the finiteness check reports them.
        RootCase::DeadZone { b, xi: -b / radius }
    }
}

/// Starting point `((|b| - radius) / 2)^(1/(n+1))`, strictly inside the
/// Cauchy bracket of the positive root. Tallies one add, one mul, one root.
pub fn initial_guess<C: Tally>(
    b: f64,
    radius: f64,
    n: usize,
    c: &mut C,
) -> Result<f64, RootError> {
    if b.abs() <= radius {
        return Err(RootError::DeadZoneInput);
    }
    let span = b.abs() - radius;
    c.adds(1);
    let half = span * 0.5;
    c.muls(1);
    let guess = half.powf(1.0 / (n + 1) as f64);
    c.roots(1);
    Ok(guess)
}

/// Assembles the polynomial view for an off-dead-zone case. The constant
/// fold is tallied here, once per solve.
pub fn poly_for_case<'t, C: Tally>(
    tables: &'t Tables,
    case: &RootCase,
    c: &mut C,
) -> Result<PolySpec<'t>, RootError> {
    let const_term = case.const_term().ok_or(RootError::DeadZoneInput)?;
    c.adds(1);
    debug_assert!(const_term < 0.0);
    Ok(PolySpec::new(
        tables.n(),
        &tables.poly_coeffs()[1..],
        const_term,
        tables.dpoly_coeffs(),
        tables.ddpoly_coeffs(),
    ))
}

/// Fixed-budget Halley refinement of the positive root.
///
/// Each iteration spends one `(p, dp, ddp)` evaluation through `strategy`
/// plus 2 adds and 6 muls of solver overhead. The returned residual is a
/// diagnostic and is computed outside the tallied budget.
pub fn halley_solve<C: Tally>(
    poly: &PolySpec,
    case: &RootCase,
    r00: f64,
    strategy: EvalStrategy,
    iters: u32,
    c: &mut C,
) -> Result<RootResult, RootError> {
    halley_solve_with(poly, case, r00, strategy, iters, false, c)
}

/// As [`halley_solve`], with an optional residual early stop at
/// `1e-12 * (1 + |const_term|)`. The stop check tallies one comparison per
/// iteration and is off in the production configuration.
pub fn halley_solve_with<C: Tally>(
    poly: &PolySpec,
    case: &RootCase,
    r00: f64,
    strategy: EvalStrategy,
    iters: u32,
    early_stop: bool,
    c: &mut C,
) -> Result<RootResult, RootError> {
    let xi = match case {
        RootCase::DeadZone { .. } => return Err(RootError::DeadZoneInput),
        other => other.xi(),
    };
    let stop_at = 1e-12 * (1.0 + poly.const_term.abs());

    let mut r = r00;
    let mut iterations = 0;
    let mut degenerate = false;
    for j in 0..iters {
        let (p, dp, ddp) = strategy.eval(poly, r, c);
        if early_stop {
            c.cmps(1);
            if p.abs() <= stop_at {
                break;
            }
        }
        let num = 2.0 * dp * p;
        c.muls(2);
        let den = 2.0 * dp * dp - ddp * p;
        c.muls(3);
        c.adds(1);
        if den == 0.0 {
            degenerate = true;
            break;
        }
        let next = r - num / den;
        c.muls(1);
        c.adds(1);
        if !next.is_finite() {
            return Err(RootError::NonFiniteIterate { iteration: j });
        }
        r = next;
        iterations = j + 1;
    }

    let residual = strategy.eval(poly, r, &mut NoCount).0.abs();
    let sigma_tilde = xi * r.powi(poly.n as i32 + 1);
    Ok(RootResult {
        r0: r,
        sigma_tilde,
        iterations,
        residual,
        degenerate,
    })
}

/// Full solve for a classified case: dead zones short-circuit to the
/// linear regime, branches run guess + Halley through `strategy`.
pub fn solve_case<C: Tally>(
    tables: &Tables,
    case: &RootCase,
    strategy: EvalStrategy,
    iters: u32,
    c: &mut C,
) -> Result<RootResult, RootError> {
    if let RootCase::DeadZone { .. } = case {
        return Ok(RootResult {
            r0: 0.0,
            sigma_tilde: 0.0,
            iterations: 0,
            residual: 0.0,
            degenerate: false,
        });
    }
    let poly = poly_for_case(tables, case, c)?;
    let guess = initial_guess(case.b(), tables.dead_zone_radius(), tables.n(), c)?;
    halley_solve(&poly, case, guess, strategy, iters, c)
}
