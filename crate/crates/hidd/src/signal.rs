//! Deterministic test-signal generation.
//!
//! Samples are produced up front, before any timed loop runs, and a fixed
//! seed regenerates them bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// One sinusoidal component `amplitude * sin(frequency * t + phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SineTerm {
    pub amplitude: f64,
    /// Angular frequency, rad/s.
    pub frequency: f64,
    #[serde(default)]
    pub phase: f64,
}

/// Base waveform of the generated signal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalKind {
    Zero,
    Sine { amplitude: f64, frequency: f64 },
    SumOfSines(Vec<SineTerm>),
    Ramp { slope: f64 },
    /// Ascending coefficients: `c[0] + c[1] t + c[2] t^2 + ...`
    Polynomial(Vec<f64>),
}

/// Signal description: base waveform plus uniform noise in
/// `[-noise_amplitude, noise_amplitude]` drawn from a seeded generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub kind: SignalKind,
    #[serde(default)]
    pub noise_amplitude: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SignalSpec {
    /// Benchmark default: `sin t + 0.5 cos 2t` with 1e-3 uniform noise.
    /// Bounded derivatives of every order make the Lipschitz bound easy
    /// to pick.
    pub fn default_bench() -> Self {
        SignalSpec {
            kind: SignalKind::SumOfSines(vec![
                SineTerm {
                    amplitude: 1.0,
                    frequency: 1.0,
                    phase: 0.0,
                },
                SineTerm {
                    amplitude: 0.5,
                    frequency: 2.0,
                    phase: std::f64::consts::FRAC_PI_2,
                },
            ]),
            noise_amplitude: 1e-3,
            seed: 42,
        }
    }

    /// Noise-free base value at time `t`.
    pub fn base_value(&self, t: f64) -> f64 {
        match &self.kind {
            SignalKind::Zero => 0.0,
            SignalKind::Sine {
                amplitude,
                frequency,
            } => amplitude * (frequency * t).sin(),
            SignalKind::SumOfSines(terms) => terms
                .iter()
                .map(|s| s.amplitude * (s.frequency * t + s.phase).sin())
                .sum(),
            SignalKind::Ramp { slope } => slope * t,
            SignalKind::Polynomial(coeffs) => {
                let mut v = 0.0;
                for &ck in coeffs.iter().rev() {
                    v = v * t + ck;
                }
                v
            }
        }
    }
}

/// Samples `f_k = base(k * tau) + noise_k` for `k = 0..steps`.
pub fn gen_signal(spec: &SignalSpec, tau: f64, steps: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let eta = spec.noise_amplitude;
    (0..steps)
        .map(|k| {
            let base = spec.base_value(k as f64 * tau);
            let noise = if eta > 0.0 {
                rng.gen_range(-eta..=eta)
            } else {
                0.0
            };
            base + noise
        })
        .collect()
}
