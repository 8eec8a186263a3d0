//! Discrete-time channel: sender, additive noise, single-tap feedback,
//! receiver, and the end-to-end session that couples the channel output to
//! the pathway machine.
//!
//! The channel maps an input series h to y(0) = h(0) + m(0) and
//! y(i) = h(i) + m(i) + g*y(i-1), with m drawn from the configured noise
//! model and |g| < 1 so bounded inputs stay bounded. Noise comes from a
//! seeded ChaCha8 stream, so a (config, seed) pair fixes the whole run.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moore::mlp::{classify, pathway_machine, FactorReading, PathwayState};
use crate::pipeline::{
    cumulative_reception, medulla_synapse, reception, secondary_afferent, vpl_potential,
    PipelineError, StageCoefficients, Thresholds,
};
use crate::trace::TraceRow;

/// Name of the noise generator algorithm, recorded in trace headers.
pub const GENERATOR_NAME: &str = "chacha8";

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("series is empty")]
    EmptySeries,
    #[error("series sample {0} is not finite")]
    NonFiniteSample(usize),
    #[error("time step must be positive and finite, got {0}")]
    InvalidTimeStep(f64),
    #[error("feedback gain magnitude must be below 1, got {0}")]
    InvalidFeedbackGain(f64),
    #[error("noise spread must be non-negative and finite, got {0}")]
    InvalidNoiseSpread(f64),
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// A uniformly sampled real-valued time series. Sample i sits at time i*dt.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    dt: f64,
    values: Vec<f64>,
}

impl Series {
    /// Builds a series, rejecting a non-positive time step and non-finite
    /// samples. Empty series are representable; operations that need samples
    /// reject them individually.
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self, ChannelError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(ChannelError::InvalidTimeStep(dt));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(ChannelError::NonFiniteSample(bad));
        }
        Ok(Self { dt, values })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Noise distribution families for the additive channel term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    /// No noise; the additive term is identically zero.
    #[default]
    None,
    /// mean + spread * z with z standard normal.
    Gaussian,
    /// mean + u with u uniform on [-spread, +spread].
    Uniform,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Gaussian => "gaussian",
            Self::Uniform => "uniform",
        }
    }
}

/// Additive noise model. `spread` is the standard deviation for gaussian
/// noise and the half-width for uniform noise.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub mean: f64,
    pub spread: f64,
    pub seed: u64,
}

impl NoiseModel {
    /// Fresh generator positioned at the model's seed.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Draws one noise value, advancing the generator. The `none` kind draws
    /// nothing and leaves the generator untouched.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self.kind {
            NoiseKind::None => 0.0,
            NoiseKind::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                self.mean + self.spread * z
            }
            NoiseKind::Uniform => {
                let u = Uniform::new_inclusive(-self.spread, self.spread)
                    .expect("validated spread")
                    .sample(rng);
                self.mean + u
            }
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.spread.is_finite() && self.spread >= 0.0) {
            return Err(ChannelError::InvalidNoiseSpread(self.spread));
        }
        if !self.mean.is_finite() {
            return Err(ChannelError::NonFiniteInput("noise mean"));
        }
        Ok(())
    }
}

/// Channel parameters: the noise model and the single-tap feedback gain.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelConfig {
    pub noise: NoiseModel,
    /// Feedback gain g, |g| < 1.
    pub feedback_gain: f64,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), ChannelError> {
        self.noise.validate()?;
        if !(self.feedback_gain.is_finite() && self.feedback_gain.abs() < 1.0) {
            return Err(ChannelError::InvalidFeedbackGain(self.feedback_gain));
        }
        Ok(())
    }
}

/// Pushes a series through the noisy feedback channel. Output length and
/// time step match the input.
pub fn transmit(input: &Series, config: &ChannelConfig) -> Result<Series, ChannelError> {
    if input.is_empty() {
        return Err(ChannelError::EmptySeries);
    }
    config.validate()?;

    let mut rng = config.noise.rng();
    let gain = config.feedback_gain;
    let mut values = Vec::with_capacity(input.len());
    let mut previous = 0.0;
    for (i, &x) in input.values().iter().enumerate() {
        let noise = config.noise.sample(&mut rng);
        let y = if i == 0 {
            x + noise
        } else {
            x + noise + gain * previous
        };
        values.push(y);
        previous = y;
    }
    Series::new(input.dt(), values)
}

/// Maps the five stage aggregates onto the classifier's factor lines.
///
/// The terminating and received stations gate against literal zero, so their
/// thresholds are fixed at 0 here.
pub fn bridge_factors(
    h: f64,
    s: f64,
    m: f64,
    v: f64,
    r: f64,
    thresholds: &Thresholds,
) -> Result<FactorReading, ChannelError> {
    for (value, name) in [
        (h, "h"),
        (s, "s"),
        (m, "m"),
        (v, "v"),
        (r, "r"),
        (thresholds.reception, "reception threshold"),
        (thresholds.synapsing, "synapsing threshold"),
        (thresholds.vpl, "vpl threshold"),
    ] {
        if !value.is_finite() {
            return Err(ChannelError::NonFiniteInput(name));
        }
    }
    Ok(FactorReading {
        cumulative: h,
        synapsing: s,
        terminating: m,
        vpl: v,
        received: r,
        cumulative_threshold: thresholds.reception,
        synapsing_threshold: thresholds.synapsing,
        terminating_threshold: 0.0,
        vpl_threshold: thresholds.vpl,
        received_threshold: 0.0,
    })
}

/// Result of an end-to-end session: the per-tick rows plus the session
/// verdict. The machine is never halted early, so the receiving state may be
/// entered and then revisited for the rest of the run.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionTrace {
    pub rows: Vec<TraceRow>,
    pub final_state: PathwayState,
    /// Whether the receiving state was entered at any tick.
    pub reached_receiving: bool,
    /// Whether some tick spent in the receiving state carried a nonzero
    /// received strength.
    pub accepted: bool,
}

/// Runs the full path: transmit the stimulus through the channel, split each
/// output sample into stage signals, aggregate, bridge onto the factor lines,
/// classify, and step the pathway machine — one machine step per tick, for
/// min(max_ticks, stimulus length) ticks.
///
/// # Panics
///
/// Panics when `max_ticks` is zero.
pub fn simulate_end_to_end(
    stimulus: &Series,
    thresholds: &Thresholds,
    config: &ChannelConfig,
    coefficients: &StageCoefficients,
    max_ticks: u64,
) -> Result<SessionTrace, ChannelError> {
    assert!(max_ticks >= 1, "max_ticks must be at least 1");
    if stimulus.is_empty() {
        return Err(ChannelError::EmptySeries);
    }
    coefficients.validate()?;

    let transmitted = transmit(stimulus, config)?;
    let machine = pathway_machine();
    let ticks = transmitted
        .len()
        .min(usize::try_from(max_ticks).unwrap_or(usize::MAX));

    let mut rows = Vec::with_capacity(ticks);
    let mut state = machine.initial;
    let mut reached_receiving = false;
    let mut accepted = false;

    for (i, &sample) in transmitted.values()[..ticks].iter().enumerate() {
        let samples = coefficients.derive(sample);
        let h = cumulative_reception(&samples)?;
        let s = medulla_synapse(&samples)?;
        let m = secondary_afferent(&samples)?;
        let v = vpl_potential(&samples)?;
        let (r, _) = reception(h, s, m, v)?;

        let reading = bridge_factors(h, s, m, v, r, thresholds)?;
        let symbol = classify(state, &reading);
        let step = machine
            .step(&state, &symbol)
            .expect("pathway machine accepts every classified symbol");

        rows.push(TraceRow {
            tick: i as u64,
            h,
            s,
            m,
            v,
            r,
            symbol,
            state_before: state,
            state_after: step.next_state,
            output: step.emitted,
            wait: state == step.next_state,
        });

        state = step.next_state;
        if state == PathwayState::Receiving {
            reached_receiving = true;
            if r != 0.0 {
                accepted = true;
            }
        }
    }

    Ok(SessionTrace {
        rows,
        final_state: state,
        reached_receiving,
        accepted,
    })
}
