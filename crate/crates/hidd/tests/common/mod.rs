//! Shared oracles for the integration suites. Everything here evaluates
//! through its own arithmetic, independent of the library kernels it is
//! used to check.
#![allow(dead_code)]

use hidd::{expanded_gains, expanded_gains_from, precompute, Params, Tables};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Monic polynomial with owned derivative coefficient vectors, for tests
/// that build arbitrary polynomials rather than differentiator tables.
pub struct OwnedPoly {
    pub n: usize,
    pub coeffs: Vec<f64>,
    pub const_term: f64,
    pub dcoeffs: Vec<f64>,
    pub ddcoeffs: Vec<f64>,
}

impl OwnedPoly {
    pub fn new(n: usize, coeffs: Vec<f64>, const_term: f64) -> Self {
        assert_eq!(coeffs.len(), n);
        let mut dcoeffs = Vec::with_capacity(n + 1);
        for i in 0..n {
            dcoeffs.push((i + 1) as f64 * coeffs[i]);
        }
        dcoeffs.push((n + 1) as f64);
        let mut ddcoeffs = Vec::with_capacity(n);
        for i in 0..n - 1 {
            ddcoeffs.push(((i + 2) * (i + 1)) as f64 * coeffs[i + 1]);
        }
        ddcoeffs.push((n * (n + 1)) as f64);
        OwnedPoly {
            n,
            coeffs,
            const_term,
            dcoeffs,
            ddcoeffs,
        }
    }

    pub fn spec(&self) -> hidd::PolySpec<'_> {
        hidd::PolySpec::new(
            self.n,
            &self.coeffs,
            self.const_term,
            &self.dcoeffs,
            &self.ddcoeffs,
        )
    }
}

/// Value of the monic polynomial by plain monomial summation with `powi`.
pub fn oracle_p(n: usize, coeffs: &[f64], const_term: f64, r: f64) -> f64 {
    let mut acc = r.powi(n as i32 + 1) + const_term;
    for (i, &a) in coeffs.iter().enumerate() {
        acc += a * r.powi(i as i32 + 1);
    }
    acc
}

/// First derivative by termwise differentiation of the monomials.
pub fn oracle_dp(n: usize, coeffs: &[f64], r: f64) -> f64 {
    let mut acc = (n as f64 + 1.0) * r.powi(n as i32);
    for (i, &a) in coeffs.iter().enumerate() {
        acc += (i + 1) as f64 * a * r.powi(i as i32);
    }
    acc
}

/// Second derivative by termwise differentiation of the monomials.
pub fn oracle_ddp(n: usize, coeffs: &[f64], r: f64) -> f64 {
    let mut acc = (n as f64 + 1.0) * n as f64 * r.powi(n as i32 - 1);
    for (i, &a) in coeffs.iter().enumerate().skip(1) {
        let k = (i + 1) as f64;
        acc += k * (k - 1.0) * a * r.powi(i as i32 - 1);
    }
    acc
}

/// 200-iteration bisection for the unique positive root on `[0, hi]`.
pub fn bisect_root(n: usize, coeffs: &[f64], const_term: f64, hi: f64) -> f64 {
    assert!(oracle_p(n, coeffs, const_term, 0.0) < 0.0);
    assert!(oracle_p(n, coeffs, const_term, hi) >= 0.0);
    let (mut lo, mut hi) = (0.0f64, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if oracle_p(n, coeffs, const_term, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn assert_rel_close(a: f64, b: f64, rtol: f64, atol: f64, what: &str) {
    let tol = rtol * a.abs().max(b.abs()).max(atol / rtol);
    assert!(
        (a - b).abs() <= tol.max(atol),
        "{what}: {a} vs {b} (diff {:.3e}, tol {:.3e})",
        (a - b).abs(),
        tol.max(atol)
    );
}

/// Gains usable at any order: the built-in expansion through order 7 and
/// a smoothly extended ladder above it.
pub fn test_gains(n: usize) -> Vec<f64> {
    if n <= 7 {
        expanded_gains(n).unwrap()
    } else {
        let mut ladder = vec![1.1, 1.5, 2.0, 3.0, 5.0, 7.0, 10.0, 12.0];
        let mut next = 15.0;
        while ladder.len() < n + 1 {
            ladder.push(next);
            next += 4.0;
        }
        expanded_gains_from(&ladder)
    }
}

/// Random valid parameter set with differentiator-realistic scales.
pub fn random_params(rng: &mut ChaCha8Rng, n_lo: usize, n_hi: usize) -> Params {
    let n = rng.gen_range(n_lo..=n_hi);
    let tau = 10f64.powf(rng.gen_range(-3.0..-1.3));
    let lipschitz = rng.gen_range(0.5..4.0);
    Params::new(n, lipschitz, test_gains(n), tau).unwrap()
}

/// Random off-dead-zone innovation for the given tables: magnitude between
/// barely outside the radius and a thousand radii.
pub fn random_branch_innovation(rng: &mut ChaCha8Rng, tables: &Tables) -> f64 {
    let radius = tables.dead_zone_radius();
    let mag = radius * (1.0 + 10f64.powf(rng.gen_range(-6.0..3.0)));
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}

pub fn tables_for(n: usize, lipschitz: f64, tau: f64) -> Tables {
    precompute(&Params::new(n, lipschitz, test_gains(n), tau).unwrap()).unwrap()
}
