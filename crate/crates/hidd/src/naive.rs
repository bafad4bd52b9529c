//! Deliberately table-free differentiator path for the benchmark baseline.
//!
//! Every Taylor weight, scaled coefficient and injection weight is
//! recomputed from the raw parameters inside the loop, each step, through
//! the same scalar builders the precompute uses — so the trajectory is
//! bit-identical to the direct tabled method while paying the full
//! recomputation cost the tables exist to avoid.

use crate::counter::{OpCounter, Tally};
use crate::differentiator::{RunError, State, StepError, StepOutcome, StepTrace};
use crate::params::Params;
use crate::polyeval::{EvalStrategy, PolySpec};
use crate::rootfind::{classify, halley_solve, initial_guess, CaseKind, RootCase, DEFAULT_ITERS};
use crate::tables::{ddpoly_coeff, dpoly_coeff, inj_weight, poly_coeff, taylor_weight};

/// `tau^m / m!` recomputed by running product; 2m muls of honest work.
#[inline]
fn taylor_fresh<C: Tally>(tau: f64, m: usize, c: &mut C) -> f64 {
    c.muls(2 * m as u64);
    taylor_weight(tau, m)
}

/// Scaled polynomial coefficient recomputed from scratch: running product,
/// gain multiply, fractional power of the Lipschitz constant.
#[inline]
fn poly_coeff_fresh<C: Tally>(p: &Params, l: usize, c: &mut C) -> f64 {
    c.muls(2 * (p.n() - l + 1) as u64 + 3);
    c.roots(1);
    poly_coeff(p, l)
}

#[inline]
fn inj_weight_fresh<C: Tally>(p: &Params, i: usize, j: usize, c: &mut C) -> f64 {
    c.muls(2 * (j - i + 1) as u64 + 3);
    c.roots(1);
    inj_weight(p, i, j)
}

/// Scratch buffers for the per-step coefficient rebuild.
pub struct NaiveState {
    poly: Vec<f64>,
    dpoly: Vec<f64>,
    ddpoly: Vec<f64>,
}

impl NaiveState {
    pub fn new(n: usize) -> Self {
        NaiveState {
            poly: vec![0.0; n + 1],
            dpoly: vec![0.0; n + 1],
            ddpoly: vec![0.0; n],
        }
    }

    /// One step with every constant recomputed in place.
    pub fn step<C: Tally>(
        &mut self,
        params: &Params,
        z: &mut [f64],
        sample: f64,
        iters: u32,
        c: &mut C,
    ) -> Result<StepOutcome, StepError> {
        let n = params.n();
        let tau = params.tau();
        debug_assert_eq!(z.len(), n + 1);

        let mut b = sample - z[0];
        c.adds(1);
        for l in 1..=n {
            b -= taylor_fresh(tau, l, c) * z[l];
            c.adds(1);
            c.muls(1);
        }

        let radius = poly_coeff_fresh(params, 0, c);
        c.cmps(2);
        let case = classify(b, radius);

        let (r0, sigma_tilde) = match case {
            RootCase::DeadZone { .. } => {
                self.dead_zone_update(params, z, &case, c);
                (0.0, 0.0)
            }
            _ => {
                // Rebuild the polynomial and derivative coefficients.
                self.poly[0] = radius;
                for l in 1..=n {
                    self.poly[l] = poly_coeff_fresh(params, l, c);
                }
                for i in 0..=n {
                    if i < n {
                        // Underlying scaled coefficient plus the index multiply.
                        c.muls(2 * (n - i) as u64 + 4);
                        c.roots(1);
                    }
                    self.dpoly[i] = dpoly_coeff(params, i);
                }
                for i in 0..n {
                    if i + 1 < n {
                        c.muls(2 * (n - i - 1) as u64 + 4);
                        c.roots(1);
                    }
                    self.ddpoly[i] = ddpoly_coeff(params, i);
                }

                let const_term = case.const_term().expect("branch case");
                c.adds(1);
                let spec = PolySpec::new(n, &self.poly[1..], const_term, &self.dpoly, &self.ddpoly);
                let guess = initial_guess(b, radius, n, c).map_err(|_| StepError::NonFiniteState)?;
                let res = halley_solve(&spec, &case, guess, EvalStrategy::Direct, iters, c)
                    .map_err(|_| StepError::NonFiniteState)?;
                branch_update(params, z, &case, res.r0, c);
                (res.r0, res.sigma_tilde)
            }
        };

        if !z.iter().all(|v| v.is_finite()) {
            return Err(StepError::NonFiniteState);
        }
        Ok(StepOutcome {
            innovation: b,
            case: case.kind(),
            r0,
            sigma_tilde,
        })
    }

    fn dead_zone_update<C: Tally>(
        &mut self,
        params: &Params,
        z: &mut [f64],
        case: &RootCase,
        c: &mut C,
    ) {
        let n = params.n();
        let tau = params.tau();
        let ratio = -case.xi();
        c.muls(1);

        let mut acc = case.b() + z[0];
        c.adds(1);
        for j in 1..=n {
            acc += taylor_fresh(tau, j, c) * z[j];
            c.adds(1);
            c.muls(1);
        }
        let z0 = acc;

        for i in 1..=n {
            let mut acc = z[i];
            for j in i + 1..=n {
                acc += taylor_fresh(tau, j - i, c) * z[j];
                c.adds(1);
                c.muls(1);
            }
            acc += inj_weight_fresh(params, i, n, c) * ratio;
            c.adds(1);
            c.muls(1);
            z[i] = acc;
        }
        z[0] = z0;
    }
}

/// Power-sum update with every weight recomputed per term; mirrors the
/// tabled power-sum update operation for operation.
fn branch_update<C: Tally>(params: &Params, z: &mut [f64], case: &RootCase, r0: f64, c: &mut C) {
    let n = params.n();
    let tau = params.tau();
    let add_correction = case.kind() == CaseKind::NegBranch;
    for i in 0..=n {
        let mut acc = z[i];
        for j in i + 1..=n {
            acc += taylor_fresh(tau, j - i, c) * z[j];
            c.adds(1);
            c.muls(1);
        }
        for j in i..=n {
            let m = n - j;
            let w = inj_weight_fresh(params, i, j, c);
            let term = if m == 0 {
                w
            } else {
                let mut pw = r0;
                for _ in 1..m {
                    pw *= r0;
                    c.muls(1);
                }
                c.muls(1);
                w * pw
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

/// Loop driver over [`NaiveState::step`] from a zero initial state.
pub fn run_naive(params: &Params, samples: &[f64]) -> Result<(State, Vec<StepTrace>), RunError> {
    if samples.is_empty() {
        return Err(RunError::EmptySamples);
    }
    let n = params.n();
    let mut z = vec![0.0; n + 1];
    let mut ns = NaiveState::new(n);
    let mut counter = OpCounter::new();
    let mut traces = Vec::with_capacity(samples.len());
    for (index, &sample) in samples.iter().enumerate() {
        let before = counter;
        let out = ns
            .step(params, &mut z, sample, DEFAULT_ITERS, &mut counter)
            .map_err(|source| RunError::Step { index, source })?;
        traces.push(StepTrace {
            k: index as u64,
            sample,
            innovation: out.innovation,
            case: out.case,
            r0: out.r0,
            sigma_tilde: out.sigma_tilde,
            ops: Some(counter - before),
        });
    }
    let last = traces.last().cloned();
    Ok((State::assemble(z, samples.len() as u64, last), traces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::NoCount;
    use crate::differentiator::{run, UpdateForm};
    use crate::signal::{gen_signal, SignalSpec};

    #[test]
    fn naive_trajectory_is_bitwise_equal_to_tabled_direct() {
        let params = Params::new(3, 2.0, vec![1.1, 1.5, 2.0, 3.0], 0.002).unwrap();
        let spec = SignalSpec {
            noise_amplitude: 1e-3,
            seed: 5,
            ..SignalSpec::default_bench()
        };
        let samples = gen_signal(&spec, params.tau(), 3000);
        let (tabled, _) = run(
            &params,
            &samples,
            EvalStrategy::Direct,
            UpdateForm::SumOfPowers,
        )
        .unwrap();
        let (naive, _) = run_naive(&params, &samples).unwrap();
        for (a, b) in tabled.z().iter().zip(naive.z()) {
            assert_eq!(a.to_bits(), b.to_bits(), "{a} vs {b}");
        }
    }

    #[test]
    fn naive_counts_exceed_tabled_counts() {
        let params = Params::new(4, 1.0, vec![1.1, 1.5, 2.0, 3.0, 5.0], 0.01).unwrap();
        let samples: Vec<f64> = (0..200).map(|k| (k as f64 * 0.01).sin()).collect();
        let (_, tabled_traces) = run(
            &params,
            &samples,
            EvalStrategy::Direct,
            UpdateForm::SumOfPowers,
        )
        .unwrap();
        let (_, naive_traces) = run_naive(&params, &samples).unwrap();
        let total = |tr: &[StepTrace]| {
            tr.iter()
                .map(|t| t.ops.unwrap().total())
                .sum::<u64>()
        };
        let roots = |tr: &[StepTrace]| tr.iter().map(|t| t.ops.unwrap().roots).sum::<u64>();
        assert!(total(&naive_traces) > 2 * total(&tabled_traces));
        // The recomputation burden is dominated by fractional powers, of
        // which the tabled path pays exactly one per solve.
        assert!(roots(&naive_traces) > 10 * roots(&tabled_traces));
    }

    #[test]
    fn naive_dead_zone_keeps_zero_state() {
        let params = Params::new(2, 1.0, vec![1.1, 1.5, 2.0], 0.01).unwrap();
        let mut z_naive = vec![0.0, 0.0, 0.0];
        let mut ns = NaiveState::new(2);
        ns.step(&params, &mut z_naive, 0.0, 3, &mut NoCount).unwrap();
        assert_eq!(z_naive, vec![0.0, 0.0, 0.0]);
    }
}
