//! Somatosensory receptor catalog and stimulus synthesis.
//!
//! Twelve receptor entries with their structure, sensation, signal
//! description, adaptation class, and (for the two frequency-coded touch
//! receptors) the band they respond to: 20-50 Hz flutter for the Meissner
//! corpuscle and 100-300 Hz vibration for the Pacinian corpuscle. The muscle
//! spindle appears twice, as the source table lists it twice.
//!
//! Synthesis produces a sine at the requested frequency for band-limited
//! receptors and a constant level otherwise, both shaped by the adaptation
//! envelope: slow adapters sustain at 1, rapid adapters decay as
//! exp(-t/tau), and mixed adapters decay onto a 0.2 sustained floor.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::Series;

/// Response decay class under sustained stimulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Adaptation {
    Rapid,
    Slow,
    /// Rapid initial transient with a slow sustained component.
    Mixed,
    /// Depends on the information carried; treated as sustained.
    Depends,
}

impl Adaptation {
    pub fn name(self) -> &'static str {
        match self {
            Self::Rapid => "rapid",
            Self::Slow => "slow",
            Self::Mixed => "mixed",
            Self::Depends => "depends",
        }
    }
}

impl fmt::Display for Adaptation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// One catalog entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceptorSpec {
    /// Stable identifier used in configs and the catalog listing.
    pub name: &'static str,
    pub structure: &'static str,
    pub sensation: &'static str,
    pub signals: &'static str,
    pub adaptation: Adaptation,
    /// (low, high) response band in Hz, for frequency-coded receptors.
    pub band_hz: Option<(f64, f64)>,
}

/// Stimulus synthesis parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StimulusParams {
    pub amplitude: f64,
    /// Carrier frequency; only used for band-limited receptors and then
    /// required to lie inside the receptor's band.
    pub frequency_hz: f64,
    pub duration_s: f64,
    /// Decay constant for the rapid and mixed adaptation envelopes.
    pub adaptation_tau_s: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReceptorError {
    #[error("frequency {frequency_hz} Hz is outside the {receptor} band {low}-{high} Hz")]
    FrequencyOutOfBand {
        receptor: &'static str,
        frequency_hz: f64,
        low: f64,
        high: f64,
    },
    #[error("invalid parameter: {0}")]
    InvalidParams(&'static str),
}

const CATALOG: [ReceptorSpec; 12] = [
    ReceptorSpec {
        name: "meissner",
        structure: "Encapsulated, layered",
        sensation: "Touch: Flutter, Movement",
        signals: "Frequency/Velocity, Direction",
        adaptation: Adaptation::Rapid,
        band_hz: Some((20.0, 50.0)),
    },
    ReceptorSpec {
        name: "pacinian",
        structure: "Encapsulated, layered",
        sensation: "Touch: Vibration",
        signals: "Frequency: 100-300 Hz",
        adaptation: Adaptation::Rapid,
        band_hz: Some((100.0, 300.0)),
    },
    ReceptorSpec {
        name: "ruffini",
        structure: "Encapsulated collagen",
        sensation: "Touch: Skin Stretch",
        signals: "Direction, Force",
        adaptation: Adaptation::Slow,
        band_hz: None,
    },
    ReceptorSpec {
        name: "hair_follicle",
        structure: "Unencapsulated",
        sensation: "Touch: Movement",
        signals: "Direction, Velocity",
        adaptation: Adaptation::Rapid,
        band_hz: None,
    },
    ReceptorSpec {
        name: "merkel",
        structure: "Specialized epithelial cell",
        sensation: "Touch, Pressure, Form",
        signals: "Location, magnitude",
        adaptation: Adaptation::Slow,
        band_hz: None,
    },
    ReceptorSpec {
        name: "free_nerve_ending",
        structure: "Unencapsulated",
        sensation: "Pain, Touch, or Temperature",
        signals: "Tissue damage, Contact, Temperature change",
        adaptation: Adaptation::Depends,
        band_hz: None,
    },
    ReceptorSpec {
        name: "muscle_spindle_1",
        structure: "Encapsulated annulospiral and flower spray endings",
        sensation: "Muscle stretch",
        signals: "Muscle length, velocity",
        adaptation: Adaptation::Mixed,
        band_hz: None,
    },
    ReceptorSpec {
        name: "golgi_tendon_organ",
        structure: "Encapsulated collagen",
        sensation: "Muscle tension",
        signals: "Muscle contraction",
        adaptation: Adaptation::Slow,
        band_hz: None,
    },
    ReceptorSpec {
        name: "joint_pacinian",
        structure: "Encapsulated, layered",
        sensation: "Joint Movement",
        signals: "Direction, velocity",
        adaptation: Adaptation::Rapid,
        band_hz: None,
    },
    ReceptorSpec {
        name: "joint_ruffini",
        structure: "Encapsulated collagen",
        sensation: "Joint pressure",
        signals: "Pressure, Angle",
        adaptation: Adaptation::Slow,
        band_hz: None,
    },
    ReceptorSpec {
        name: "joint_golgi",
        structure: "Encapsulated collagen",
        sensation: "Joint torque",
        signals: "Twisting force",
        adaptation: Adaptation::Slow,
        band_hz: None,
    },
    ReceptorSpec {
        name: "muscle_spindle_2",
        structure: "Encapsulated annulospiral and flower spray endings",
        sensation: "Muscle stretch",
        signals: "Muscle length, velocity",
        adaptation: Adaptation::Mixed,
        band_hz: None,
    },
];

/// The twelve catalog entries, in table order.
pub fn catalog() -> &'static [ReceptorSpec] {
    &CATALOG
}

/// Looks an entry up by its identifier.
pub fn find(name: &str) -> Option<&'static ReceptorSpec> {
    CATALOG.iter().find(|r| r.name == name)
}

/// Adaptation envelope at time `t` with decay constant `tau_s`.
pub fn adaptation_envelope(kind: Adaptation, t: f64, tau_s: f64) -> Result<f64, ReceptorError> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(ReceptorError::InvalidParams(
            "t must be non-negative and finite",
        ));
    }
    if !(tau_s.is_finite() && tau_s > 0.0) {
        return Err(ReceptorError::InvalidParams(
            "tau_s must be positive and finite",
        ));
    }
    Ok(match kind {
        Adaptation::Slow | Adaptation::Depends => 1.0,
        Adaptation::Rapid => (-t / tau_s).exp(),
        Adaptation::Mixed => (-t / tau_s).exp().max(0.2),
    })
}

/// Synthesizes a stimulus series for a receptor: ceil(duration_s/dt) samples
/// at t = k*dt, sinusoidal for band-limited receptors and constant otherwise,
/// both scaled by the adaptation envelope.
pub fn synthesize(
    receptor: &ReceptorSpec,
    params: &StimulusParams,
    dt: f64,
) -> Result<Series, ReceptorError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(ReceptorError::InvalidParams(
            "dt must be positive and finite",
        ));
    }
    if !(params.duration_s.is_finite() && params.duration_s > 0.0) {
        return Err(ReceptorError::InvalidParams(
            "duration_s must be positive and finite",
        ));
    }
    if !(params.amplitude.is_finite() && params.amplitude >= 0.0) {
        return Err(ReceptorError::InvalidParams(
            "amplitude must be non-negative and finite",
        ));
    }
    if !(params.frequency_hz.is_finite() && params.frequency_hz > 0.0) {
        return Err(ReceptorError::InvalidParams(
            "frequency_hz must be positive and finite",
        ));
    }
    if !(params.adaptation_tau_s.is_finite() && params.adaptation_tau_s > 0.0) {
        return Err(ReceptorError::InvalidParams(
            "adaptation_tau_s must be positive and finite",
        ));
    }
    if let Some((low, high)) = receptor.band_hz {
        if !(low..=high).contains(&params.frequency_hz) {
            return Err(ReceptorError::FrequencyOutOfBand {
                receptor: receptor.name,
                frequency_hz: params.frequency_hz,
                low,
                high,
            });
        }
    }

    let count = (params.duration_s / dt).ceil() as usize;
    let mut values = Vec::with_capacity(count);
    for k in 0..count {
        let t = k as f64 * dt;
        let envelope = adaptation_envelope(receptor.adaptation, t, params.adaptation_tau_s)?;
        let carrier = match receptor.band_hz {
            Some(_) => (std::f64::consts::TAU * params.frequency_hz * t).sin(),
            None => 1.0,
        };
        values.push(params.amplitude * carrier * envelope);
    }
    Series::new(dt, values).map_err(|_| ReceptorError::InvalidParams("synthesized series"))
}
