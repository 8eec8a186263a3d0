//! Simulation configuration: TOML schema, defaults, strict parsing, and
//! load-time validation.
//!
//! An empty document is a complete configuration; every key has a documented
//! default. Unknown keys are rejected rather than silently ignored, so a
//! typo cannot fall back to a default. Validation re-checks every invariant
//! of the referenced types and names the offending key.
//!
//! ```toml
//! dt = 0.001          # seconds per tick
//! max_ticks = 10000
//! seed = 0
//!
//! [thresholds]
//! reception = 0.1
//! synapsing = 0.1
//! vpl = 0.1
//!
//! [channel]
//! noise = "none"      # none | gaussian | uniform
//! mean = 0.0
//! spread = 0.0
//! feedback_gain = 0.0
//!
//! [stimulus]
//! receptor = "merkel"
//! amplitude = 1.0
//! frequency_hz = 100.0
//! duration_s = 1.0
//! adaptation_tau_s = 0.05
//!
//! [stage_coefficients]
//! skin = 0.3333333333333333
//! # ... one key per stage gain, plus synapse_attenuation
//! ```

use serde::Deserialize;
use thiserror::Error;

use crate::channel::{ChannelConfig, NoiseKind, NoiseModel, GENERATOR_NAME};
use crate::pipeline::{StageCoefficients, Thresholds};
use crate::receptors::{self, StimulusParams};
use crate::trace::TraceHeader;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    /// Syntax error or unknown key; the message carries the location.
    #[error("config parse error: {0}")]
    Parse(String),
    /// A well-formed value violating a constraint.
    #[error("invalid value for `{key}`: {constraint}")]
    Validation { key: String, constraint: String },
}

fn invalid(key: &str, constraint: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        key: key.to_string(),
        constraint: constraint.into(),
    }
}

/// Effective simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Seconds per tick.
    pub dt: f64,
    pub max_ticks: u64,
    pub seed: u64,
    pub thresholds: Thresholds,
    pub noise_kind: NoiseKind,
    pub noise_mean: f64,
    pub noise_spread: f64,
    pub feedback_gain: f64,
    pub receptor: String,
    pub stimulus: StimulusParams,
    pub coefficients: StageCoefficients,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.001,
            max_ticks: 10_000,
            seed: 0,
            thresholds: Thresholds {
                reception: 0.1,
                synapsing: 0.1,
                vpl: 0.1,
            },
            noise_kind: NoiseKind::None,
            noise_mean: 0.0,
            noise_spread: 0.0,
            feedback_gain: 0.0,
            receptor: "merkel".to_string(),
            stimulus: StimulusParams {
                amplitude: 1.0,
                frequency_hz: 100.0,
                duration_s: 1.0,
                adaptation_tau_s: 0.05,
            },
            coefficients: StageCoefficients::default(),
        }
    }
}

impl SimConfig {
    /// The channel view of this configuration; the noise stream is seeded
    /// with the session seed.
    pub fn channel_config(&self) -> ChannelConfig {
        ChannelConfig {
            noise: NoiseModel {
                kind: self.noise_kind,
                mean: self.noise_mean,
                spread: self.noise_spread,
                seed: self.seed,
            },
            feedback_gain: self.feedback_gain,
        }
    }

    /// Reproducibility header recording every config value.
    pub fn trace_header(&self) -> TraceHeader {
        TraceHeader {
            version: env!("CARGO_PKG_VERSION").to_string(),
            generator: GENERATOR_NAME.to_string(),
            seed: self.seed,
            dt: self.dt,
            max_ticks: self.max_ticks,
            noise: self.noise_kind.name().to_string(),
            noise_mean: self.noise_mean,
            noise_spread: self.noise_spread,
            feedback_gain: self.feedback_gain,
            thresholds: self.thresholds,
            coefficients: self.coefficients,
            receptor: self.receptor.clone(),
            amplitude: self.stimulus.amplitude,
            frequency_hz: self.stimulus.frequency_hz,
            duration_s: self.stimulus.duration_s,
            adaptation_tau_s: self.stimulus.adaptation_tau_s,
        }
    }

    /// Re-checks every invariant, naming the offending key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid("dt", "must be positive and finite"));
        }
        if self.max_ticks < 1 {
            return Err(invalid("max_ticks", "must be at least 1"));
        }
        for (key, value) in [
            ("thresholds.reception", self.thresholds.reception),
            ("thresholds.synapsing", self.thresholds.synapsing),
            ("thresholds.vpl", self.thresholds.vpl),
            ("channel.mean", self.noise_mean),
        ] {
            if !value.is_finite() {
                return Err(invalid(key, "must be finite"));
            }
        }
        if !(self.noise_spread.is_finite() && self.noise_spread >= 0.0) {
            return Err(invalid("channel.spread", "must be non-negative and finite"));
        }
        if !(self.feedback_gain.is_finite() && self.feedback_gain.abs() < 1.0) {
            return Err(invalid("feedback_gain", "|g| < 1"));
        }

        let spec = receptors::find(&self.receptor).ok_or_else(|| {
            invalid(
                "stimulus.receptor",
                format!("unknown receptor `{}`", self.receptor),
            )
        })?;
        if !(self.stimulus.amplitude.is_finite() && self.stimulus.amplitude >= 0.0) {
            return Err(invalid(
                "stimulus.amplitude",
                "must be non-negative and finite",
            ));
        }
        if !(self.stimulus.frequency_hz.is_finite() && self.stimulus.frequency_hz > 0.0) {
            return Err(invalid(
                "stimulus.frequency_hz",
                "must be positive and finite",
            ));
        }
        if let Some((low, high)) = spec.band_hz {
            if !(low..=high).contains(&self.stimulus.frequency_hz) {
                return Err(invalid(
                    "stimulus.frequency_hz",
                    format!("must lie in {low}-{high} Hz for `{}`", spec.name),
                ));
            }
        }
        if !(self.stimulus.duration_s.is_finite() && self.stimulus.duration_s > 0.0) {
            return Err(invalid(
                "stimulus.duration_s",
                "must be positive and finite",
            ));
        }
        if !(self.stimulus.adaptation_tau_s.is_finite() && self.stimulus.adaptation_tau_s > 0.0) {
            return Err(invalid(
                "stimulus.adaptation_tau_s",
                "must be positive and finite",
            ));
        }
        if self.coefficients.validate().is_err() {
            return Err(invalid(
                "stage_coefficients",
                "all coefficients must be finite",
            ));
        }
        Ok(())
    }
}

// Wire-format structs: every key optional, unknown keys rejected.

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dt: Option<f64>,
    max_ticks: Option<u64>,
    seed: Option<u64>,
    #[serde(default)]
    thresholds: RawThresholds,
    #[serde(default)]
    channel: RawChannel,
    #[serde(default)]
    stimulus: RawStimulus,
    #[serde(default)]
    stage_coefficients: RawCoefficients,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThresholds {
    reception: Option<f64>,
    synapsing: Option<f64>,
    vpl: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    noise: Option<NoiseKind>,
    mean: Option<f64>,
    spread: Option<f64>,
    feedback_gain: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStimulus {
    receptor: Option<String>,
    amplitude: Option<f64>,
    frequency_hz: Option<f64>,
    duration_s: Option<f64>,
    adaptation_tau_s: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoefficients {
    skin: Option<f64>,
    joints: Option<f64>,
    muscle: Option<f64>,
    gracile: Option<f64>,
    cuneate: Option<f64>,
    brainstem: Option<f64>,
    thalamic_termination: Option<f64>,
    cutaneous_termination: Option<f64>,
    proprioceptive_termination: Option<f64>,
    vpl_movement: Option<f64>,
    vpl_termination: Option<f64>,
    synapse_attenuation: Option<f64>,
}

impl RawConfig {
    fn into_config(self) -> SimConfig {
        let defaults = SimConfig::default();
        let dc = defaults.coefficients;
        SimConfig {
            dt: self.dt.unwrap_or(defaults.dt),
            max_ticks: self.max_ticks.unwrap_or(defaults.max_ticks),
            seed: self.seed.unwrap_or(defaults.seed),
            thresholds: Thresholds {
                reception: self
                    .thresholds
                    .reception
                    .unwrap_or(defaults.thresholds.reception),
                synapsing: self
                    .thresholds
                    .synapsing
                    .unwrap_or(defaults.thresholds.synapsing),
                vpl: self.thresholds.vpl.unwrap_or(defaults.thresholds.vpl),
            },
            noise_kind: self.channel.noise.unwrap_or(defaults.noise_kind),
            noise_mean: self.channel.mean.unwrap_or(defaults.noise_mean),
            noise_spread: self.channel.spread.unwrap_or(defaults.noise_spread),
            feedback_gain: self.channel.feedback_gain.unwrap_or(defaults.feedback_gain),
            receptor: self.stimulus.receptor.unwrap_or(defaults.receptor),
            stimulus: StimulusParams {
                amplitude: self
                    .stimulus
                    .amplitude
                    .unwrap_or(defaults.stimulus.amplitude),
                frequency_hz: self
                    .stimulus
                    .frequency_hz
                    .unwrap_or(defaults.stimulus.frequency_hz),
                duration_s: self
                    .stimulus
                    .duration_s
                    .unwrap_or(defaults.stimulus.duration_s),
                adaptation_tau_s: self
                    .stimulus
                    .adaptation_tau_s
                    .unwrap_or(defaults.stimulus.adaptation_tau_s),
            },
            coefficients: StageCoefficients {
                skin: self.stage_coefficients.skin.unwrap_or(dc.skin),
                joints: self.stage_coefficients.joints.unwrap_or(dc.joints),
                muscle: self.stage_coefficients.muscle.unwrap_or(dc.muscle),
                gracile: self.stage_coefficients.gracile.unwrap_or(dc.gracile),
                cuneate: self.stage_coefficients.cuneate.unwrap_or(dc.cuneate),
                brainstem: self.stage_coefficients.brainstem.unwrap_or(dc.brainstem),
                thalamic_termination: self
                    .stage_coefficients
                    .thalamic_termination
                    .unwrap_or(dc.thalamic_termination),
                cutaneous_termination: self
                    .stage_coefficients
                    .cutaneous_termination
                    .unwrap_or(dc.cutaneous_termination),
                proprioceptive_termination: self
                    .stage_coefficients
                    .proprioceptive_termination
                    .unwrap_or(dc.proprioceptive_termination),
                vpl_movement: self
                    .stage_coefficients
                    .vpl_movement
                    .unwrap_or(dc.vpl_movement),
                vpl_termination: self
                    .stage_coefficients
                    .vpl_termination
                    .unwrap_or(dc.vpl_termination),
                synapse_attenuation: self
                    .stage_coefficients
                    .synapse_attenuation
                    .unwrap_or(dc.synapse_attenuation),
            },
        }
    }
}

/// Parses a TOML configuration document, applies defaults, and validates.
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let config = raw.into_config();
    config.validate()?;
    Ok(config)
}
