//! Deterministic discrete-time simulator of the body discriminative-touch
//! and proprioception pathway.
//!
//! The model has four coupled pieces:
//!
//! - [`moore`] — a generic Moore machine engine plus the concrete five-state
//!   pathway machine and its threshold classifier;
//! - [`pipeline`] — the threshold-gated pipeline over the eleven raw stage
//!   signals, with per-pass gate traces;
//! - [`channel`] — the discrete-time channel (additive seeded noise,
//!   single-tap feedback) and the end-to-end session that drives the machine
//!   one step per tick;
//! - [`nanomachine`] — a cycle-accurate emulator of the clocked processor
//!   built around the same machine.
//!
//! [`receptors`] supplies the stimulus side: the twelve-entry receptor
//! catalog and waveform synthesis with adaptation envelopes. [`config`],
//! [`session`], and [`trace`] wire everything to the CLI: strict TOML
//! configuration, one-call session runs, and CSV / JSON-lines trace files
//! that reproduce byte-for-byte under a fixed seed.

pub mod channel;
pub mod config;
pub mod moore;
pub mod nanomachine;
pub mod pipeline;
pub mod receptors;
pub mod session;
pub mod trace;

pub use channel::{ChannelConfig, NoiseKind, NoiseModel, Series, SessionTrace};
pub use config::{parse_config, ConfigError, SimConfig};
pub use moore::mlp::{
    classify, pathway_machine, FactorReading, PathwayOutput, PathwayState, PathwaySymbol,
};
pub use moore::MooreMachine;
pub use nanomachine::Nanomachine;
pub use pipeline::{run_pipeline, PipelineResult, StageCoefficients, StageSamples, Thresholds};
pub use receptors::{catalog, synthesize, ReceptorSpec, StimulusParams};
pub use session::run_session;
pub use trace::{TraceHeader, TraceRow};
