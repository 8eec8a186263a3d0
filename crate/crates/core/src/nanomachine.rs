//! Clocked nanomachine built around the pathway machine.
//!
//! Five units: input (the latched factor reading), storage (a real-valued
//! register file with a five-op ALU), the processing unit (the pathway
//! machine plus the classifier), control (the fixed per-cycle microsequence),
//! and output (the received factor, exposed while the machine sits in the
//! receiving state).
//!
//! One clock cycle: read the latch, classify it against the current state,
//! assert exactly that decision line, step the machine, raise the wait line
//! when the step made no progress, and refresh the output value when the
//! entered state is the receiving one. Storage operations are intra-cycle
//! and never advance the clock.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moore::mlp::PathwayOutput;
use crate::moore::mlp::{classify, pathway_machine, FactorReading, PathwayState, PathwaySymbol};
use crate::moore::MooreMachine;

/// Smallest usable register file: the ten latched lines plus two scratch
/// registers.
pub const MIN_REGISTERS: usize = 12;
/// Default register file size.
pub const DEFAULT_REGISTERS: usize = 16;
/// Register that receives the output value when write-back is invoked.
pub const OUTPUT_FEEDBACK_REGISTER: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NanoError {
    #[error("invalid parameter: {0}")]
    InvalidParams(&'static str),
    #[error("register index {index} out of range (file size {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),
    #[error("reading source exhausted after {0} cycles")]
    ExhaustedSource(u64),
}

/// Storage-unit operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AluKind {
    Add,
    Sub,
    /// Boolean AND on truthiness (value != 0), writing 1.0 or 0.0.
    And,
    /// Boolean OR on truthiness.
    Or,
    /// Boolean NOT on truthiness; ignores `src_b`.
    Not,
}

/// One storage-unit instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AluOp {
    pub op: AluKind,
    pub src_a: usize,
    pub src_b: usize,
    pub dst: usize,
}

/// Snapshot of one completed cycle. Serializes into the same CSV / JSON-lines
/// shapes as session traces (see [`crate::trace::write_cycles_csv`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSnapshot {
    pub cycle: u64,
    pub state: PathwayState,
    pub d_line: Option<PathwaySymbol>,
    pub output: PathwayOutput,
    pub wait: bool,
    pub output_value: Option<f64>,
}

/// Supplies one factor reading per cycle.
pub trait ReadingSource {
    fn next_reading(&mut self) -> Option<FactorReading>;
}

impl<F: FnMut() -> Option<FactorReading>> ReadingSource for F {
    fn next_reading(&mut self) -> Option<FactorReading> {
        self()
    }
}

/// The nanomachine state: clock, pathway machine state, register file, input
/// latch, decision lines, wait line, and output value.
#[derive(Debug, Clone, PartialEq)]
pub struct Nanomachine {
    cycle: u64,
    fsm_state: PathwayState,
    storage: Vec<f64>,
    input_latch: FactorReading,
    asserted: Option<PathwaySymbol>,
    last_output: PathwayOutput,
    wait: bool,
    output_value: Option<f64>,
    machine: MooreMachine<PathwayState, PathwaySymbol, PathwayOutput>,
}

impl Nanomachine {
    /// Builds a reset machine: cycle 0, start state, zeroed storage, no line
    /// asserted, wait low, output empty. Needs at least [`MIN_REGISTERS`]
    /// registers.
    pub fn new(register_count: usize) -> Result<Self, NanoError> {
        if register_count < MIN_REGISTERS {
            return Err(NanoError::InvalidParams("register_count below minimum"));
        }
        Ok(Self {
            cycle: 0,
            fsm_state: PathwayState::Start,
            storage: vec![0.0; register_count],
            input_latch: FactorReading::default(),
            asserted: None,
            last_output: PathwayOutput::Empty,
            wait: false,
            output_value: None,
            machine: pathway_machine(),
        })
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn fsm_state(&self) -> PathwayState {
        self.fsm_state
    }

    pub fn registers(&self) -> &[f64] {
        &self.storage
    }

    pub fn input_latch(&self) -> &FactorReading {
        &self.input_latch
    }

    /// The decision line asserted by the last completed cycle, if any.
    pub fn d_line(&self) -> Option<PathwaySymbol> {
        self.asserted
    }

    pub fn wait(&self) -> bool {
        self.wait
    }

    pub fn output_value(&self) -> Option<f64> {
        self.output_value
    }

    pub fn snapshot(&self) -> CycleSnapshot {
        CycleSnapshot {
            cycle: self.cycle,
            state: self.fsm_state,
            d_line: self.asserted,
            output: self.last_output,
            wait: self.wait,
            output_value: self.output_value,
        }
    }

    fn register(&self, index: usize) -> Result<f64, NanoError> {
        self.storage
            .get(index)
            .copied()
            .ok_or(NanoError::IndexOutOfRange {
                index,
                size: self.storage.len(),
            })
    }

    /// Executes one storage-unit instruction. Only `dst` changes; the clock
    /// does not advance.
    pub fn alu_exec(&mut self, op: AluOp) -> Result<(), NanoError> {
        let a = self.register(op.src_a)?;
        let truthy = |v: f64| v != 0.0;
        let result = match op.op {
            AluKind::Add => a + self.register(op.src_b)?,
            AluKind::Sub => a - self.register(op.src_b)?,
            AluKind::And => {
                if truthy(a) && truthy(self.register(op.src_b)?) {
                    1.0
                } else {
                    0.0
                }
            }
            AluKind::Or => {
                if truthy(a) || truthy(self.register(op.src_b)?) {
                    1.0
                } else {
                    0.0
                }
            }
            AluKind::Not => {
                if truthy(a) {
                    0.0
                } else {
                    1.0
                }
            }
        };
        if op.dst >= self.storage.len() {
            return Err(NanoError::IndexOutOfRange {
                index: op.dst,
                size: self.storage.len(),
            });
        }
        self.storage[op.dst] = result;
        Ok(())
    }

    /// Latches a factor reading and mirrors it into storage: the five factors
    /// land in r0..r4 and the five thresholds in r5..r9.
    pub fn latch_inputs(&mut self, reading: FactorReading) -> Result<(), NanoError> {
        if !reading.is_finite() {
            return Err(NanoError::NonFiniteInput("factor reading"));
        }
        self.input_latch = reading;
        self.storage[..5].copy_from_slice(&reading.factors());
        self.storage[5..10].copy_from_slice(&reading.thresholds());
        Ok(())
    }

    /// Runs one clock cycle against the current latch.
    pub fn tick(&mut self) -> CycleSnapshot {
        let symbol = classify(self.fsm_state, &self.input_latch);
        let step = self
            .machine
            .step(&self.fsm_state, &symbol)
            .expect("pathway machine accepts every classified symbol");

        self.asserted = Some(symbol);
        self.wait = step.next_state == self.fsm_state;
        self.last_output = step.emitted;
        self.fsm_state = step.next_state;
        if self.fsm_state == PathwayState::Receiving {
            self.output_value = Some(self.input_latch.received);
        }
        self.cycle += 1;
        self.snapshot()
    }

    /// Copies the output value into [`OUTPUT_FEEDBACK_REGISTER`]. Never part
    /// of the normal cycle; callers opt in explicitly. Returns whether a
    /// value was written.
    pub fn write_back_output(&mut self) -> bool {
        match self.output_value {
            Some(value) => {
                self.storage[OUTPUT_FEEDBACK_REGISTER] = value;
                true
            }
            None => false,
        }
    }

    /// Latches and ticks until the machine sits in the receiving state with a
    /// nonzero output value, or the cycle budget runs out. Returns whether
    /// acceptance happened.
    ///
    /// # Panics
    ///
    /// Panics when `max_cycles` is zero.
    pub fn run_until_accept<R: ReadingSource>(
        &mut self,
        readings: &mut R,
        max_cycles: u64,
    ) -> Result<bool, NanoError> {
        assert!(max_cycles >= 1, "max_cycles must be at least 1");
        for done in 0..max_cycles {
            let reading = readings
                .next_reading()
                .ok_or(NanoError::ExhaustedSource(done))?;
            self.latch_inputs(reading)?;
            self.tick();
            if self.fsm_state == PathwayState::Receiving
                && self.output_value.is_some_and(|v| v != 0.0)
            {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn above_everything() -> FactorReading {
        FactorReading {
            cumulative: 3.0,
            synapsing: 3.0,
            terminating: 3.0,
            vpl: 3.0,
            received: 3.0,
            cumulative_threshold: 1.0,
            synapsing_threshold: 1.0,
            terminating_threshold: 1.0,
            vpl_threshold: 1.0,
            received_threshold: 1.0,
        }
    }

    #[test]
    fn reset_state() {
        let nm = Nanomachine::new(16).unwrap();
        assert_eq!(nm.fsm_state(), PathwayState::Start);
        assert_eq!(nm.cycle(), 0);
        assert!(nm.registers().iter().all(|&r| r == 0.0));
        assert_eq!(nm.d_line(), None);
        assert!(!nm.wait());
        assert_eq!(nm.output_value(), None);
    }

    #[test]
    fn too_small_register_file_is_rejected() {
        assert_eq!(
            Nanomachine::new(8).unwrap_err(),
            NanoError::InvalidParams("register_count below minimum")
        );
        assert!(Nanomachine::new(12).is_ok());
    }

    #[test]
    fn alu_ops() {
        let mut nm = Nanomachine::new(16).unwrap();
        nm.storage[0] = 2.0;
        nm.storage[1] = 3.0;
        nm.alu_exec(AluOp {
            op: AluKind::Add,
            src_a: 0,
            src_b: 1,
            dst: 2,
        })
        .unwrap();
        assert_eq!(nm.registers()[2], 5.0);

        nm.alu_exec(AluOp {
            op: AluKind::Sub,
            src_a: 0,
            src_b: 1,
            dst: 3,
        })
        .unwrap();
        assert_eq!(nm.registers()[3], -1.0);

        nm.storage[4] = 1.0;
        nm.storage[5] = 0.0;
        nm.alu_exec(AluOp {
            op: AluKind::And,
            src_a: 4,
            src_b: 5,
            dst: 6,
        })
        .unwrap();
        assert_eq!(nm.registers()[6], 0.0);
        nm.alu_exec(AluOp {
            op: AluKind::Or,
            src_a: 4,
            src_b: 5,
            dst: 7,
        })
        .unwrap();
        assert_eq!(nm.registers()[7], 1.0);
        nm.alu_exec(AluOp {
            op: AluKind::Not,
            src_a: 5,
            src_b: 0,
            dst: 8,
        })
        .unwrap();
        assert_eq!(nm.registers()[8], 1.0);
    }

    #[test]
    fn alu_does_not_advance_the_clock() {
        let mut nm = Nanomachine::new(16).unwrap();
        nm.alu_exec(AluOp {
            op: AluKind::Add,
            src_a: 0,
            src_b: 1,
            dst: 2,
        })
        .unwrap();
        assert_eq!(nm.cycle(), 0);
    }

    #[test]
    fn alu_checks_indices() {
        let mut nm = Nanomachine::new(12).unwrap();
        let err = nm
            .alu_exec(AluOp {
                op: AluKind::Add,
                src_a: 0,
                src_b: 99,
                dst: 2,
            })
            .unwrap_err();
        assert_eq!(
            err,
            NanoError::IndexOutOfRange {
                index: 99,
                size: 12
            }
        );
        let err = nm
            .alu_exec(AluOp {
                op: AluKind::Add,
                src_a: 0,
                src_b: 1,
                dst: 50,
            })
            .unwrap_err();
        assert_eq!(
            err,
            NanoError::IndexOutOfRange {
                index: 50,
                size: 12
            }
        );
    }

    #[test]
    fn latch_mirrors_into_registers() {
        let mut nm = Nanomachine::new(16).unwrap();
        let reading = FactorReading {
            cumulative: 3.0,
            cumulative_threshold: 2.0,
            ..Default::default()
        };
        nm.latch_inputs(reading).unwrap();
        assert_eq!(nm.registers()[0], 3.0);
        assert_eq!(nm.registers()[5], 2.0);

        nm.latch_inputs(FactorReading::default()).unwrap();
        assert!(nm.registers()[..10].iter().all(|&r| r == 0.0));
    }

    #[test]
    fn latch_rejects_non_finite_readings() {
        let mut nm = Nanomachine::new(16).unwrap();
        let reading = FactorReading {
            synapsing: f64::NAN,
            ..Default::default()
        };
        assert!(nm.latch_inputs(reading).is_err());
    }

    #[test]
    fn tick_advances_on_a_strong_reading() {
        let mut nm = Nanomachine::new(16).unwrap();
        let reading = FactorReading {
            cumulative: 3.0,
            cumulative_threshold: 2.0,
            ..Default::default()
        };
        nm.latch_inputs(reading).unwrap();
        let snap = nm.tick();
        assert_eq!(nm.fsm_state(), PathwayState::MedullaSynapse);
        assert_eq!(nm.d_line(), Some(PathwaySymbol::AboveCumulative));
        assert!(!nm.wait());
        assert_eq!(snap.cycle, 1);
    }

    #[test]
    fn tick_holds_and_raises_wait_on_a_weak_reading() {
        let mut nm = Nanomachine::new(16).unwrap();
        let reading = FactorReading {
            cumulative: 0.0,
            cumulative_threshold: 2.0,
            ..Default::default()
        };
        nm.latch_inputs(reading).unwrap();
        nm.tick();
        assert_eq!(nm.fsm_state(), PathwayState::Start);
        assert_eq!(nm.d_line(), Some(PathwaySymbol::BelowCumulative));
        assert!(nm.wait());
    }

    #[test]
    fn entering_receiving_exposes_the_received_factor() {
        let mut nm = Nanomachine::new(16).unwrap();
        // Walk to the ventral posterolateral state first.
        let mut source = || Some(above_everything());
        let accepted = nm.run_until_accept(&mut source, 3).unwrap();
        assert!(!accepted);
        assert_eq!(nm.fsm_state(), PathwayState::VentralPosterolateral);

        let reading = FactorReading {
            vpl: 5.0,
            vpl_threshold: 1.0,
            received: 7.5,
            ..Default::default()
        };
        nm.latch_inputs(reading).unwrap();
        nm.tick();
        assert_eq!(nm.fsm_state(), PathwayState::Receiving);
        assert_eq!(nm.d_line(), Some(PathwaySymbol::AboveVpl));
        assert_eq!(nm.output_value(), Some(7.5));
    }

    #[test]
    fn run_until_accept_needs_four_cycles() {
        let mut nm = Nanomachine::new(16).unwrap();
        let mut source = || Some(above_everything());
        assert!(nm.run_until_accept(&mut source, 10).unwrap());
        assert_eq!(nm.cycle(), 4);
        assert_eq!(nm.output_value(), Some(3.0));
    }

    #[test]
    fn run_until_accept_gives_up_at_the_budget() {
        let mut nm = Nanomachine::new(16).unwrap();
        let weak = FactorReading {
            cumulative_threshold: 1.0,
            ..Default::default()
        };
        let mut source = || Some(weak);
        assert!(!nm.run_until_accept(&mut source, 20).unwrap());
        assert_eq!(nm.cycle(), 20);
        assert_eq!(nm.fsm_state(), PathwayState::Start);
    }

    #[test]
    fn one_cycle_cannot_reach_acceptance() {
        let mut nm = Nanomachine::new(16).unwrap();
        let mut source = || Some(above_everything());
        assert!(!nm.run_until_accept(&mut source, 1).unwrap());
    }

    #[test]
    fn exhausted_reading_source_is_an_error() {
        let mut nm = Nanomachine::new(16).unwrap();
        let mut source = || None;
        assert_eq!(
            nm.run_until_accept(&mut source, 5).unwrap_err(),
            NanoError::ExhaustedSource(0)
        );
    }

    #[test]
    fn write_back_is_explicit_and_off_by_default() {
        let mut nm = Nanomachine::new(16).unwrap();
        assert!(!nm.write_back_output());

        let mut source = || Some(above_everything());
        nm.run_until_accept(&mut source, 10).unwrap();
        assert_eq!(nm.registers()[OUTPUT_FEEDBACK_REGISTER], 0.0);
        assert!(nm.write_back_output());
        assert_eq!(nm.registers()[OUTPUT_FEEDBACK_REGISTER], 3.0);
    }
}
