//! Threshold-gated signal pipeline.
//!
//! Each loop pass senses a fresh set of stage samples and pushes them through
//! four gates in pathway order: cumulative reception against its threshold,
//! medulla synapsing against its threshold, secondary afferent against zero,
//! and ventral posterolateral potential against its threshold. A gate passes
//! when its stage sum is strictly above the comparison value; a failed gate
//! ends the pass and the loop retries with the next samples. Once a pass
//! clears all four gates the received strength decides acceptance: any
//! nonzero total is accepted, exact zero (including exact cancellation) is
//! not.
//!
//! Sums are evaluated left to right in declaration order, so identical inputs
//! give bit-identical aggregates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PipelineError {
    /// A stage signal or threshold was NaN or infinite.
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),
    /// The sample provider ran dry before the loop terminated.
    #[error("sample source exhausted after {0} iterations")]
    ExhaustedSource(u64),
}

/// One tick's raw stage signals, in pathway order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageSamples {
    /// Reception at the skin.
    pub skin: f64,
    /// Reception at the joints.
    pub joints: f64,
    /// Reception at the muscle.
    pub muscle: f64,
    /// Synapsing contribution of the gracile fasciculus.
    pub gracile: f64,
    /// Synapsing contribution of the cuneate fasciculus.
    pub cuneate: f64,
    /// Ascent through the brain stem.
    pub brainstem: f64,
    /// Thalamic terminating signal in the ventral posterolateral nucleus.
    pub thalamic_termination: f64,
    /// Terminating cutaneous signal.
    pub cutaneous_termination: f64,
    /// Terminating proprioceptive signal.
    pub proprioceptive_termination: f64,
    /// Ventral posterolateral movement potential.
    pub vpl_movement: f64,
    /// Ventral posterolateral termination potential in the parietal lobe.
    pub vpl_termination: f64,
}

/// Gate thresholds. The afferent gate compares against literal zero and the
/// acceptance test against literal nonzero, so neither needs a field here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// Cumulative reception threshold.
    pub reception: f64,
    /// Medulla synapsing threshold.
    pub synapsing: f64,
    /// Ventral posterolateral potential threshold.
    pub vpl: f64,
}

/// Per-stage gains that split one transmitted channel sample into the eleven
/// stage signals. Defaults spread the sample evenly over the three reception
/// sites and the two fasciculi, route it whole through the brain stem ascent
/// and the movement potential, and leave the termination components silent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StageCoefficients {
    pub skin: f64,
    pub joints: f64,
    pub muscle: f64,
    pub gracile: f64,
    pub cuneate: f64,
    pub brainstem: f64,
    pub thalamic_termination: f64,
    pub cutaneous_termination: f64,
    pub proprioceptive_termination: f64,
    pub vpl_movement: f64,
    pub vpl_termination: f64,
    /// Extra gain applied to the two fasciculus contributions.
    pub synapse_attenuation: f64,
}

impl Default for StageCoefficients {
    fn default() -> Self {
        Self {
            skin: 1.0 / 3.0,
            joints: 1.0 / 3.0,
            muscle: 1.0 / 3.0,
            gracile: 0.5,
            cuneate: 0.5,
            brainstem: 1.0,
            thalamic_termination: 0.0,
            cutaneous_termination: 0.0,
            proprioceptive_termination: 0.0,
            vpl_movement: 1.0,
            vpl_termination: 0.0,
            synapse_attenuation: 1.0,
        }
    }
}

impl StageCoefficients {
    /// Splits one channel sample into stage signals.
    pub fn derive(&self, sample: f64) -> StageSamples {
        StageSamples {
            skin: self.skin * sample,
            joints: self.joints * sample,
            muscle: self.muscle * sample,
            gracile: self.gracile * self.synapse_attenuation * sample,
            cuneate: self.cuneate * self.synapse_attenuation * sample,
            brainstem: self.brainstem * sample,
            thalamic_termination: self.thalamic_termination * sample,
            cutaneous_termination: self.cutaneous_termination * sample,
            proprioceptive_termination: self.proprioceptive_termination * sample,
            vpl_movement: self.vpl_movement * sample,
            vpl_termination: self.vpl_termination * sample,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let all = [
            self.skin,
            self.joints,
            self.muscle,
            self.gracile,
            self.cuneate,
            self.brainstem,
            self.thalamic_termination,
            self.cutaneous_termination,
            self.proprioceptive_termination,
            self.vpl_movement,
            self.vpl_termination,
            self.synapse_attenuation,
        ];
        if all.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(PipelineError::NonFiniteInput("stage coefficient"))
        }
    }
}

fn finite(value: f64, name: &'static str) -> Result<f64, PipelineError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(PipelineError::NonFiniteInput(name))
    }
}

/// Cumulative reception: skin + joints + muscle.
pub fn cumulative_reception(samples: &StageSamples) -> Result<f64, PipelineError> {
    Ok(finite(samples.skin, "skin")?
        + finite(samples.joints, "joints")?
        + finite(samples.muscle, "muscle")?)
}

/// Medulla synapsing: gracile + cuneate fasciculus contributions.
pub fn medulla_synapse(samples: &StageSamples) -> Result<f64, PipelineError> {
    Ok(finite(samples.gracile, "gracile")? + finite(samples.cuneate, "cuneate")?)
}

/// Secondary afferent: brain stem ascent plus the three terminating signals.
pub fn secondary_afferent(samples: &StageSamples) -> Result<f64, PipelineError> {
    Ok(finite(samples.brainstem, "brainstem")?
        + finite(samples.thalamic_termination, "thalamic_termination")?
        + finite(samples.cutaneous_termination, "cutaneous_termination")?
        + finite(
            samples.proprioceptive_termination,
            "proprioceptive_termination",
        )?)
}

/// Ventral posterolateral potential: movement + termination potentials.
pub fn vpl_potential(samples: &StageSamples) -> Result<f64, PipelineError> {
    Ok(finite(samples.vpl_movement, "vpl_movement")?
        + finite(samples.vpl_termination, "vpl_termination")?)
}

/// Received strength and the acceptance verdict: the four stage aggregates
/// summed left to right, accepted exactly when the total differs from zero.
pub fn reception(h: f64, s: f64, m: f64, v: f64) -> Result<(f64, bool), PipelineError> {
    let r = finite(h, "h")? + finite(s, "s")? + finite(m, "m")? + finite(v, "v")?;
    Ok((r, r != 0.0))
}

/// The four gates, in evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Reception,
    Synapsing,
    Afferent,
    Potential,
}

/// One gate's verdict within one pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOutcome {
    pub gate: Gate,
    /// The stage aggregate the gate examined.
    pub value: f64,
    pub passed: bool,
}

/// The gates evaluated during one loop pass, in order, ending at the first
/// failure.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// 1-based pass number.
    pub iteration: u64,
    pub gates: Vec<GateOutcome>,
}

/// Final pipeline verdict plus the per-pass gate record.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineResult {
    pub h: f64,
    pub s: f64,
    pub m: f64,
    pub v: f64,
    /// Received strength; always the left-to-right sum of `h+s+m+v` as last
    /// evaluated (unevaluated stages count as zero).
    pub r: f64,
    pub accepted: bool,
    /// Loop passes consumed.
    pub iterations: u64,
    pub gate_trace: Vec<IterationTrace>,
}

/// Supplies one fresh [`StageSamples`] per loop pass.
pub trait SampleSource {
    fn next_sample(&mut self) -> Option<StageSamples>;
}

impl<F: FnMut() -> Option<StageSamples>> SampleSource for F {
    fn next_sample(&mut self) -> Option<StageSamples> {
        self()
    }
}

/// Runs the gated loop until one pass clears all four gates or the pass
/// budget is spent.
///
/// # Panics
///
/// Panics when `max_iterations` is zero; the loop needs at least one pass.
pub fn run_pipeline<P: SampleSource>(
    source: &mut P,
    thresholds: &Thresholds,
    max_iterations: u64,
) -> Result<PipelineResult, PipelineError> {
    assert!(max_iterations >= 1, "max_iterations must be at least 1");

    let mut gate_trace = Vec::new();
    let mut iterations = 0u64;
    let (mut h, mut s, mut m, mut v) = (0.0, 0.0, 0.0, 0.0);

    while iterations < max_iterations {
        iterations += 1;
        let samples = source
            .next_sample()
            .ok_or(PipelineError::ExhaustedSource(iterations - 1))?;

        (s, m, v) = (0.0, 0.0, 0.0);
        let mut gates = Vec::with_capacity(4);
        let mut all_passed = false;

        'pass: {
            h = cumulative_reception(&samples)?;
            let passed = h > thresholds.reception;
            gates.push(GateOutcome {
                gate: Gate::Reception,
                value: h,
                passed,
            });
            if !passed {
                break 'pass;
            }

            s = medulla_synapse(&samples)?;
            let passed = s > thresholds.synapsing;
            gates.push(GateOutcome {
                gate: Gate::Synapsing,
                value: s,
                passed,
            });
            if !passed {
                break 'pass;
            }

            m = secondary_afferent(&samples)?;
            let passed = m > 0.0;
            gates.push(GateOutcome {
                gate: Gate::Afferent,
                value: m,
                passed,
            });
            if !passed {
                break 'pass;
            }

            v = vpl_potential(&samples)?;
            let passed = v > thresholds.vpl;
            gates.push(GateOutcome {
                gate: Gate::Potential,
                value: v,
                passed,
            });
            if !passed {
                break 'pass;
            }

            all_passed = true;
        }

        gate_trace.push(IterationTrace {
            iteration: iterations,
            gates,
        });

        if all_passed {
            let (r, accepted) = reception(h, s, m, v)?;
            return Ok(PipelineResult {
                h,
                s,
                m,
                v,
                r,
                accepted,
                iterations,
                gate_trace,
            });
        }
    }

    let (r, _) = reception(h, s, m, v)?;
    Ok(PipelineResult {
        h,
        s,
        m,
        v,
        r,
        accepted: false,
        iterations: max_iterations,
        gate_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(samples: StageSamples) -> impl FnMut() -> Option<StageSamples> {
        move || Some(samples)
    }

    fn all_ones() -> StageSamples {
        StageSamples {
            skin: 1.0,
            joints: 1.0,
            muscle: 1.0,
            gracile: 1.0,
            cuneate: 1.0,
            brainstem: 1.0,
            thalamic_termination: 1.0,
            cutaneous_termination: 1.0,
            proprioceptive_termination: 1.0,
            vpl_movement: 1.0,
            vpl_termination: 1.0,
        }
    }

    #[test]
    fn stage_sums() {
        let s = StageSamples {
            skin: 1.0,
            joints: 2.0,
            muscle: 3.0,
            ..Default::default()
        };
        assert_eq!(cumulative_reception(&s).unwrap(), 6.0);
        assert_eq!(cumulative_reception(&StageSamples::default()).unwrap(), 0.0);
        let s = StageSamples {
            skin: -1.5,
            joints: 1.5,
            muscle: 0.25,
            ..Default::default()
        };
        assert_eq!(cumulative_reception(&s).unwrap(), 0.25);

        let s = StageSamples {
            gracile: 2.0,
            cuneate: 3.0,
            ..Default::default()
        };
        assert_eq!(medulla_synapse(&s).unwrap(), 5.0);
        let s = StageSamples {
            gracile: 1e-3,
            cuneate: -1e-3,
            ..Default::default()
        };
        assert_eq!(medulla_synapse(&s).unwrap(), 0.0);

        let s = StageSamples {
            brainstem: 1.0,
            thalamic_termination: 1.0,
            cutaneous_termination: 1.0,
            proprioceptive_termination: 1.0,
            ..Default::default()
        };
        assert_eq!(secondary_afferent(&s).unwrap(), 4.0);
        let s = StageSamples {
            brainstem: 2.0,
            thalamic_termination: -1.0,
            cutaneous_termination: -1.0,
            ..Default::default()
        };
        assert_eq!(secondary_afferent(&s).unwrap(), 0.0);

        let s = StageSamples {
            vpl_movement: 0.5,
            vpl_termination: 0.5,
            ..Default::default()
        };
        assert_eq!(vpl_potential(&s).unwrap(), 1.0);
        let s = StageSamples {
            vpl_movement: -2.0,
            vpl_termination: 2.0,
            ..Default::default()
        };
        assert_eq!(vpl_potential(&s).unwrap(), 0.0);
    }

    #[test]
    fn reception_rejects_exact_zero() {
        assert_eq!(reception(1.0, 1.0, 1.0, 1.0).unwrap(), (4.0, true));
        assert_eq!(reception(0.0, 0.0, 0.0, 0.0).unwrap(), (0.0, false));
        assert_eq!(reception(1.0, -1.0, 2.0, -2.0).unwrap(), (0.0, false));
    }

    #[test]
    fn non_finite_input_is_an_error() {
        let s = StageSamples {
            skin: f64::NAN,
            ..Default::default()
        };
        assert_eq!(
            cumulative_reception(&s).unwrap_err(),
            PipelineError::NonFiniteInput("skin")
        );
        assert!(reception(f64::INFINITY, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn accepts_first_pass_when_all_gates_clear() {
        let thresholds = Thresholds {
            reception: 2.0,
            synapsing: 1.0,
            vpl: 1.0,
        };
        let result = run_pipeline(&mut constant(all_ones()), &thresholds, 10).unwrap();
        assert!(result.accepted);
        assert_eq!(result.iterations, 1);
        assert_eq!(
            (result.h, result.s, result.m, result.v, result.r),
            (3.0, 2.0, 4.0, 2.0, 11.0)
        );
        assert_eq!(result.gate_trace.len(), 1);
        assert_eq!(result.gate_trace[0].gates.len(), 4);
        assert!(result.gate_trace[0].gates.iter().all(|g| g.passed));
    }

    #[test]
    fn zero_signal_never_clears_the_first_gate() {
        let thresholds = Thresholds {
            reception: 0.0,
            synapsing: 0.0,
            vpl: 0.0,
        };
        let result = run_pipeline(&mut constant(StageSamples::default()), &thresholds, 5).unwrap();
        assert!(!result.accepted);
        assert_eq!(result.iterations, 5);
        for pass in &result.gate_trace {
            assert_eq!(pass.gates.len(), 1);
            assert_eq!(pass.gates[0].gate, Gate::Reception);
            assert!(!pass.gates[0].passed);
        }
    }

    #[test]
    fn potential_gate_failure_retries_every_pass() {
        let samples = StageSamples {
            vpl_movement: 0.0,
            vpl_termination: 0.0,
            ..all_ones()
        };
        let thresholds = Thresholds {
            reception: 2.0,
            synapsing: 1.0,
            vpl: 1.0,
        };
        let result = run_pipeline(&mut constant(samples), &thresholds, 3).unwrap();
        assert!(!result.accepted);
        assert_eq!(result.iterations, 3);
        for pass in &result.gate_trace {
            let last = pass.gates.last().unwrap();
            assert_eq!(last.gate, Gate::Potential);
            assert!(!last.passed);
        }
    }

    #[test]
    fn exhausted_source_is_an_error() {
        let mut empty = || None;
        let thresholds = Thresholds {
            reception: 0.0,
            synapsing: 0.0,
            vpl: 0.0,
        };
        assert_eq!(
            run_pipeline(&mut empty, &thresholds, 3).unwrap_err(),
            PipelineError::ExhaustedSource(0)
        );
    }

    #[test]
    fn all_gates_pass_but_exact_cancellation_rejects() {
        // The afferent gate needs M > 0, so a zero total requires negative
        // aggregates elsewhere, which in turn need negative thresholds to
        // clear their gates: H=-1, S=-1, M=1, V=1 sums to exactly zero.
        let samples = StageSamples {
            skin: -1.0,
            joints: 0.0,
            muscle: 0.0,
            gracile: -1.0,
            cuneate: 0.0,
            brainstem: 1.0,
            thalamic_termination: 0.0,
            cutaneous_termination: 0.0,
            proprioceptive_termination: 0.0,
            vpl_movement: 1.0,
            vpl_termination: 0.0,
        };
        let thresholds = Thresholds {
            reception: -2.0,
            synapsing: -2.0,
            vpl: -2.0,
        };
        let result = run_pipeline(&mut constant(samples), &thresholds, 2).unwrap();
        assert_eq!(result.r, 0.0);
        assert!(!result.accepted);
        assert_eq!(result.iterations, 1);
        assert_eq!(result.gate_trace[0].gates.len(), 4);
    }

    #[test]
    fn non_finite_samples_propagate() {
        let samples = StageSamples {
            joints: f64::INFINITY,
            ..Default::default()
        };
        let thresholds = Thresholds {
            reception: 0.0,
            synapsing: 0.0,
            vpl: 0.0,
        };
        assert!(run_pipeline(&mut constant(samples), &thresholds, 2).is_err());
    }

    #[test]
    fn default_coefficients_split_a_sample() {
        let c = StageCoefficients::default();
        let s = c.derive(3.0);
        assert_eq!(s.skin, 1.0);
        assert_eq!(s.gracile, 1.5);
        assert_eq!(s.brainstem, 3.0);
        assert_eq!(s.thalamic_termination, 0.0);
        assert_eq!(s.vpl_movement, 3.0);
        assert_eq!(s.vpl_termination, 0.0);
    }

    #[test]
    fn attenuation_scales_only_the_fasciculi() {
        let c = StageCoefficients {
            synapse_attenuation: 0.5,
            ..Default::default()
        };
        let s = c.derive(2.0);
        assert_eq!(s.gracile, 0.5);
        assert_eq!(s.cuneate, 0.5);
        assert_eq!(s.skin, 2.0 / 3.0);
        assert_eq!(s.brainstem, 2.0);
    }
}
