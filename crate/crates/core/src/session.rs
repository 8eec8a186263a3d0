//! End-to-end session: configuration in, trace out.

use thiserror::Error;

use crate::channel::{simulate_end_to_end, ChannelError, SessionTrace};
use crate::config::{ConfigError, SimConfig};
use crate::receptors::{self, ReceptorError};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Receptor(#[from] ReceptorError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Synthesizes the configured stimulus and runs it through the channel and
/// the pathway machine. Identical configurations give identical traces.
pub fn run_session(config: &SimConfig) -> Result<SessionTrace, SessionError> {
    config.validate()?;
    let spec = receptors::find(&config.receptor).ok_or_else(|| ConfigError::Validation {
        key: "stimulus.receptor".to_string(),
        constraint: format!("unknown receptor `{}`", config.receptor),
    })?;
    let stimulus = receptors::synthesize(spec, &config.stimulus, config.dt)?;
    let trace = simulate_end_to_end(
        &stimulus,
        &config.thresholds,
        &config.channel_config(),
        &config.coefficients,
        config.max_ticks,
    )?;
    Ok(trace)
}
