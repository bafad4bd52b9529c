//! Scalar operation tallies for the arithmetic kernels.
//!
//! Every kernel in this crate reports its work through a [`Tally`] sink so
//! that the measured counts are a deterministic function of the problem
//! order alone. One fixed convention applies everywhere:
//!
//! * additions and subtractions tally as `adds`;
//! * multiplications and divisions tally as `muls`;
//! * fractional-power extractions tally as `roots`;
//! * comparisons tally as `cmps`;
//! * multiplying by a literal `1.0` (monic leading terms, the unit Taylor
//!   weight) is not tallied;
//! * folding the sample offset into the polynomial constant term is tallied
//!   once per root solve, when the polynomial is assembled — not once per
//!   evaluation;
//! * diagnostics (residuals, trace records, finiteness checks) are never
//!   tallied.
//!
//! Hot loops that do not want instrumentation pass [`NoCount`]; the tally
//! calls monomorphize to nothing.

/// Sink for operation tallies.
pub trait Tally {
    fn adds(&mut self, k: u64);
    fn muls(&mut self, k: u64);
    fn roots(&mut self, k: u64);
    fn cmps(&mut self, k: u64);

    /// Current totals, if this sink keeps any.
    fn snapshot(&self) -> Option<OpCounter> {
        None
    }
}

/// Additive tallies of scalar operations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    /// Additions and subtractions.
    pub adds: u64,
    /// Multiplications and divisions.
    pub muls: u64,
    /// Fractional-power extractions.
    pub roots: u64,
    /// Comparisons.
    pub cmps: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.adds + self.muls + self.roots + self.cmps
    }
}

impl Tally for OpCounter {
    #[inline]
    fn adds(&mut self, k: u64) {
        self.adds += k;
    }
    #[inline]
    fn muls(&mut self, k: u64) {
        self.muls += k;
    }
    #[inline]
    fn roots(&mut self, k: u64) {
        self.roots += k;
    }
    #[inline]
    fn cmps(&mut self, k: u64) {
        self.cmps += k;
    }
    fn snapshot(&self) -> Option<OpCounter> {
        Some(*self)
    }
}

/// Tally sink that discards everything; compiles to no-ops.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoCount;

impl Tally for NoCount {
    #[inline]
    fn adds(&mut self, _: u64) {}
    #[inline]
    fn muls(&mut self, _: u64) {}
    #[inline]
    fn roots(&mut self, _: u64) {}
    #[inline]
    fn cmps(&mut self, _: u64) {}
}

impl std::ops::Sub for OpCounter {
    type Output = OpCounter;

    /// Delta between two snapshots of the same counter.
    fn sub(self, rhs: OpCounter) -> OpCounter {
        OpCounter {
            adds: self.adds - rhs.adds,
            muls: self.muls - rhs.muls,
            roots: self.roots - rhs.roots,
            cmps: self.cmps - rhs.cmps,
        }
    }
}

impl std::ops::AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: OpCounter) {
        self.adds += rhs.adds;
        self.muls += rhs.muls;
        self.roots += rhs.roots;
        self.cmps += rhs.cmps;
    }
}
