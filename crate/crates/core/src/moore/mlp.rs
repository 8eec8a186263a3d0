//! The concrete five-state pathway machine and its threshold classifier.
//!
//! States trace the signal's stations: start, medulla synapse, medulla
//! termination, ventral posterolateral relay, and cortical receiving. Each
//! station compares one signal factor against one threshold; the comparison
//! picks one of ten input symbols, and the symbol drives the machine forward
//! (factor above threshold) or holds it in place (factor at or below).
//!
//! Ties go to the hold symbol, so a factor exactly at its threshold does not
//! advance the machine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MooreMachine;

/// The five pathway states, ordered by progress along the pathway.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PathwayState {
    /// Start: cumulative reception at the receptors.
    #[serde(rename = "S")]
    Start,
    /// Medulla synapse station.
    #[serde(rename = "MS")]
    MedullaSynapse,
    /// Medulla termination station.
    #[serde(rename = "MT")]
    MedullaTermination,
    /// Ventral posterolateral (thalamic relay) station.
    #[serde(rename = "MV")]
    VentralPosterolateral,
    /// Receiving station (primary somatosensory cortex). The accepting state.
    #[serde(rename = "RS")]
    Receiving,
}

impl PathwayState {
    pub const ALL: [Self; 5] = [
        Self::Start,
        Self::MedullaSynapse,
        Self::MedullaTermination,
        Self::VentralPosterolateral,
        Self::Receiving,
    ];

    /// Short station name used in traces and machine files.
    pub fn name(self) -> &'static str {
        match self {
            Self::Start => "S",
            Self::MedullaSynapse => "MS",
            Self::MedullaTermination => "MT",
            Self::VentralPosterolateral => "MV",
            Self::Receiving => "RS",
        }
    }
}

impl fmt::Display for PathwayState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for PathwayState {
    type Err = UnknownIdentifier;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| UnknownIdentifier {
                kind: "state",
                text: s.to_string(),
            })
    }
}

/// The ten input symbols. Each station owns a below/above pair; the wire
/// names d1..d10 pair up as (d1,d2)=cumulative, (d3,d4)=synapsing,
/// (d5,d6)=terminating, (d7,d8)=ventral posterolateral, (d9,d10)=received.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PathwaySymbol {
    #[serde(rename = "d1")]
    BelowCumulative,
    #[serde(rename = "d2")]
    AboveCumulative,
    #[serde(rename = "d3")]
    BelowSynapsing,
    #[serde(rename = "d4")]
    AboveSynapsing,
    #[serde(rename = "d5")]
    BelowTerminating,
    #[serde(rename = "d6")]
    AboveTerminating,
    #[serde(rename = "d7")]
    BelowVpl,
    #[serde(rename = "d8")]
    AboveVpl,
    #[serde(rename = "d9")]
    BelowReceived,
    #[serde(rename = "d10")]
    AboveReceived,
}

impl PathwaySymbol {
    pub const ALL: [Self; 10] = [
        Self::BelowCumulative,
        Self::AboveCumulative,
        Self::BelowSynapsing,
        Self::AboveSynapsing,
        Self::BelowTerminating,
        Self::AboveTerminating,
        Self::BelowVpl,
        Self::AboveVpl,
        Self::BelowReceived,
        Self::AboveReceived,
    ];

    /// Wire name d1..d10.
    pub fn name(self) -> &'static str {
        match self {
            Self::BelowCumulative => "d1",
            Self::AboveCumulative => "d2",
            Self::BelowSynapsing => "d3",
            Self::AboveSynapsing => "d4",
            Self::BelowTerminating => "d5",
            Self::AboveTerminating => "d6",
            Self::BelowVpl => "d7",
            Self::AboveVpl => "d8",
            Self::BelowReceived => "d9",
            Self::AboveReceived => "d10",
        }
    }
}

impl fmt::Display for PathwaySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for PathwaySymbol {
    type Err = UnknownIdentifier;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| UnknownIdentifier {
                kind: "symbol",
                text: s.to_string(),
            })
    }
}

/// The output alphabet. `Empty` is a legal output (the machine made a step
/// that reports nothing), not an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PathwayOutput {
    #[serde(rename = "eps")]
    Empty,
    O1,
    O2,
    O3,
}

impl PathwayOutput {
    pub const ALL: [Self; 4] = [Self::Empty, Self::O1, Self::O2, Self::O3];

    pub fn name(self) -> &'static str {
        match self {
            Self::Empty => "eps",
            Self::O1 => "O1",
            Self::O2 => "O2",
            Self::O3 => "O3",
        }
    }
}

impl fmt::Display for PathwayOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for PathwayOutput {
    type Err = UnknownIdentifier;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| UnknownIdentifier {
                kind: "output",
                text: s.to_string(),
            })
    }
}

/// Failed lookup of a pathway identifier by wire name.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} `{text}`")]
pub struct UnknownIdentifier {
    pub kind: &'static str,
    pub text: String,
}

/// The five signal factors and five thresholds the classifier compares.
///
/// One reading is one clock tick's view of the pathway: the cumulative
/// reception, synapsing, terminating, ventral posterolateral, and received
/// factors, paired with the threshold each is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FactorReading {
    pub cumulative: f64,
    pub synapsing: f64,
    pub terminating: f64,
    pub vpl: f64,
    pub received: f64,
    pub cumulative_threshold: f64,
    pub synapsing_threshold: f64,
    pub terminating_threshold: f64,
    pub vpl_threshold: f64,
    pub received_threshold: f64,
}

impl FactorReading {
    /// Factors in station order, for register mirroring.
    pub fn factors(&self) -> [f64; 5] {
        [
            self.cumulative,
            self.synapsing,
            self.terminating,
            self.vpl,
            self.received,
        ]
    }

    /// Thresholds in station order, for register mirroring.
    pub fn thresholds(&self) -> [f64; 5] {
        [
            self.cumulative_threshold,
            self.synapsing_threshold,
            self.terminating_threshold,
            self.vpl_threshold,
            self.received_threshold,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.factors()
            .iter()
            .chain(self.thresholds().iter())
            .all(|v| v.is_finite())
    }
}

/// Builds the five-state pathway machine.
///
/// Ten transitions: a hold self-loop and an advance edge per station, with
/// both received-station symbols looping on the receiving state (it absorbs).
/// Outputs: the synapse, termination, and receiving stations report O1, O2
/// and O3; the other two report nothing.
pub fn pathway_machine() -> MooreMachine<PathwayState, PathwaySymbol, PathwayOutput> {
    use PathwayOutput as O;
    use PathwayState as Q;
    use PathwaySymbol as D;

    let transitions: BTreeMap<(Q, D), Q> = [
        ((Q::Start, D::BelowCumulative), Q::Start),
        ((Q::Start, D::AboveCumulative), Q::MedullaSynapse),
        ((Q::MedullaSynapse, D::BelowSynapsing), Q::MedullaSynapse),
        (
            (Q::MedullaSynapse, D::AboveSynapsing),
            Q::MedullaTermination,
        ),
        (
            (Q::MedullaTermination, D::BelowTerminating),
            Q::MedullaTermination,
        ),
        (
            (Q::MedullaTermination, D::AboveTerminating),
            Q::VentralPosterolateral,
        ),
        (
            (Q::VentralPosterolateral, D::BelowVpl),
            Q::VentralPosterolateral,
        ),
        ((Q::VentralPosterolateral, D::AboveVpl), Q::Receiving),
        ((Q::Receiving, D::BelowReceived), Q::Receiving),
        ((Q::Receiving, D::AboveReceived), Q::Receiving),
    ]
    .into();

    let outputs: BTreeMap<Q, O> = [
        (Q::Start, O::Empty),
        (Q::MedullaSynapse, O::O1),
        (Q::MedullaTermination, O::O2),
        (Q::VentralPosterolateral, O::Empty),
        (Q::Receiving, O::O3),
    ]
    .into();

    MooreMachine {
        states: BTreeSet::from(Q::ALL),
        input_alphabet: BTreeSet::from(D::ALL),
        output_alphabet: BTreeSet::from(O::ALL),
        transitions,
        outputs,
        initial: Q::Start,
    }
}

/// Picks the input symbol for the current state from a factor reading.
///
/// Each state compares its own factor against its own threshold; at or below
/// yields the hold symbol, strictly above yields the advance symbol. Total
/// over the state set, and its result is always accepted by the pathway
/// machine's transition map at that state.
pub fn classify(state: PathwayState, reading: &FactorReading) -> PathwaySymbol {
    use PathwayState as Q;
    use PathwaySymbol as D;

    match state {
        Q::Start => {
            if reading.cumulative <= reading.cumulative_threshold {
                D::BelowCumulative
            } else {
                D::AboveCumulative
            }
        }
        Q::MedullaSynapse => {
            if reading.synapsing <= reading.synapsing_threshold {
                D::BelowSynapsing
            } else {
                D::AboveSynapsing
            }
        }
        Q::MedullaTermination => {
            if reading.terminating <= reading.terminating_threshold {
                D::BelowTerminating
            } else {
                D::AboveTerminating
            }
        }
        Q::VentralPosterolateral => {
            if reading.vpl <= reading.vpl_threshold {
                D::BelowVpl
            } else {
                D::AboveVpl
            }
        }
        Q::Receiving => {
            if reading.received <= reading.received_threshold {
                D::BelowReceived
            } else {
                D::AboveReceived
            }
        }
    }
}
