//! Generic Moore machine engine.
//!
//! A machine is the six-tuple of state set, input alphabet, output alphabet,
//! a deterministic partial transition map, a total per-state output map, and
//! an initial state. Output attaches to the state a step lands in, never to
//! the edge, so two steps entering the same state always emit the same output.
//!
//! The engine is generic over identifier types; [`mlp`] instantiates it with
//! the concrete five-state pathway machine, and [`text`] gives the plain-text
//! interchange format for variant machines.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub mod mlp;
pub mod text;

/// A deterministic Moore machine over arbitrary identifier sets.
///
/// Fields are public so that malformed machines can be represented (and then
/// reported on by [`MooreMachine::validate`]); the stepping functions assume a
/// machine that validates cleanly. Determinism of the transition map is
/// structural: a `BTreeMap` cannot hold two targets for one (state, symbol)
/// pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreMachine<Q, S, O> {
    /// State set Q.
    pub states: BTreeSet<Q>,
    /// Input alphabet.
    pub input_alphabet: BTreeSet<S>,
    /// Output alphabet, including the empty output.
    pub output_alphabet: BTreeSet<O>,
    /// Partial transition map (state, symbol) -> state.
    pub transitions: BTreeMap<(Q, S), Q>,
    /// Total output map state -> output.
    pub outputs: BTreeMap<Q, O>,
    /// Initial state.
    pub initial: Q,
}

/// Outcome of one step: the entered state and the output it carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepResult<Q, O> {
    pub next_state: Q,
    pub emitted: O,
}

/// A (state, symbol) pair with no transition. Distinct from the empty
/// output: an empty output is a legal step, an undefined pair is not.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no transition from state `{state}` on symbol `{symbol}`")]
pub struct UndefinedTransition<Q: fmt::Display, S: fmt::Display> {
    pub state: Q,
    pub symbol: S,
}

/// A run that hit an undefined pair. Carries the steps completed before the
/// abort together with the offending position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("run aborted at input index {index}: {cause}")]
pub struct RunAborted<Q: fmt::Display, S: fmt::Display, O> {
    /// Index into the input sequence at which the abort happened.
    pub index: usize,
    pub cause: UndefinedTransition<Q, S>,
    /// Steps completed before the abort.
    pub partial: Vec<StepResult<Q, O>>,
}

/// One invariant violation found by [`MooreMachine::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic<Q, S, O> {
    /// The initial state is not a member of the state set.
    InitialNotInStates(Q),
    /// A transition key names a state outside the state set.
    TransitionFromUnknownState { state: Q, symbol: S },
    /// A transition key names a symbol outside the input alphabet.
    TransitionOnUnknownSymbol { state: Q, symbol: S },
    /// A transition target lies outside the state set.
    DanglingTarget { state: Q, symbol: S, target: Q },
    /// The output map has no entry for this state.
    OutputNotTotal(Q),
    /// The output map has an entry for a state outside the state set.
    OutputForUnknownState(Q),
    /// An output value lies outside the output alphabet.
    OutputOutsideAlphabet { state: Q, output: O },
    /// No transition path reaches this state from the initial state.
    Unreachable(Q),
}

impl<Q: fmt::Display, S: fmt::Display, O: fmt::Display> fmt::Display for Diagnostic<Q, S, O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InitialNotInStates(q) => write!(f, "initial state `{q}` is not in the state set"),
            Self::TransitionFromUnknownState { state, symbol } => {
                write!(
                    f,
                    "transition ({state}, {symbol}) starts from an unknown state"
                )
            }
            Self::TransitionOnUnknownSymbol { state, symbol } => {
                write!(
                    f,
                    "transition ({state}, {symbol}) uses a symbol outside the alphabet"
                )
            }
            Self::DanglingTarget {
                state,
                symbol,
                target,
            } => {
                write!(
                    f,
                    "transition ({state}, {symbol}) targets unknown state `{target}`"
                )
            }
            Self::OutputNotTotal(q) => write!(f, "state `{q}` has no output"),
            Self::OutputForUnknownState(q) => {
                write!(f, "output entry for unknown state `{q}`")
            }
            Self::OutputOutsideAlphabet { state, output } => {
                write!(
                    f,
                    "state `{state}` emits `{output}` which is outside the output alphabet"
                )
            }
            Self::Unreachable(q) => write!(f, "state `{q}` is unreachable from the initial state"),
        }
    }
}

impl<Q, S, O> MooreMachine<Q, S, O>
where
    Q: Clone + Ord + fmt::Display,
    S: Clone + Ord + fmt::Display,
    O: Clone + Ord + fmt::Display,
{
    /// Applies the transition map once and emits the entered state's output.
    ///
    /// Expects a machine whose output map is total (see [`Self::validate`]);
    /// a missing output for the entered state panics.
    pub fn step(
        &self,
        state: &Q,
        symbol: &S,
    ) -> Result<StepResult<Q, O>, UndefinedTransition<Q, S>> {
        let key = (state.clone(), symbol.clone());
        let next = self
            .transitions
            .get(&key)
            .ok_or_else(|| UndefinedTransition {
                state: state.clone(),
                symbol: symbol.clone(),
            })?;
        let emitted = self
            .outputs
            .get(next)
            .unwrap_or_else(|| panic!("output map is not total: no output for state `{next}`"))
            .clone();
        Ok(StepResult {
            next_state: next.clone(),
            emitted,
        })
    }

    /// Folds [`Self::step`] over a symbol sequence starting from the initial
    /// state. Aborts at the first undefined pair, handing back the partial
    /// trace inside the error.
    pub fn run(&self, symbols: &[S]) -> Result<Vec<StepResult<Q, O>>, RunAborted<Q, S, O>> {
        let mut trace = Vec::with_capacity(symbols.len());
        let mut current = self.initial.clone();
        for (index, symbol) in symbols.iter().enumerate() {
            match self.step(&current, symbol) {
                Ok(step) => {
                    current = step.next_state.clone();
                    trace.push(step);
                }
                Err(cause) => {
                    return Err(RunAborted {
                        index,
                        cause,
                        partial: trace,
                    })
                }
            }
        }
        Ok(trace)
    }

    /// Checks every structural invariant plus reachability of all states from
    /// the initial state. An empty result means the machine is well formed.
    pub fn validate(&self) -> Vec<Diagnostic<Q, S, O>> {
        let mut found = Vec::new();

        if !self.states.contains(&self.initial) {
            found.push(Diagnostic::InitialNotInStates(self.initial.clone()));
        }

        for ((state, symbol), target) in &self.transitions {
            if !self.states.contains(state) {
                found.push(Diagnostic::TransitionFromUnknownState {
                    state: state.clone(),
                    symbol: symbol.clone(),
                });
            }
            if !self.input_alphabet.contains(symbol) {
                found.push(Diagnostic::TransitionOnUnknownSymbol {
                    state: state.clone(),
                    symbol: symbol.clone(),
                });
            }
            if !self.states.contains(target) {
                found.push(Diagnostic::DanglingTarget {
                    state: state.clone(),
                    symbol: symbol.clone(),
                    target: target.clone(),
                });
            }
        }

        for state in &self.states {
            if !self.outputs.contains_key(state) {
                found.push(Diagnostic::OutputNotTotal(state.clone()));
            }
        }
        for (state, output) in &self.outputs {
            if !self.states.contains(state) {
                found.push(Diagnostic::OutputForUnknownState(state.clone()));
            }
            if !self.output_alphabet.contains(output) {
                found.push(Diagnostic::OutputOutsideAlphabet {
                    state: state.clone(),
                    output: output.clone(),
                });
            }
        }

        if self.states.contains(&self.initial) {
            let reachable = self.reachable_states();
            for state in &self.states {
                if !reachable.contains(state) {
                    found.push(Diagnostic::Unreachable(state.clone()));
                }
            }
        }

        found
    }

    fn reachable_states(&self) -> BTreeSet<Q> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.initial.clone());
        queue.push_back(self.initial.clone());
        while let Some(state) = queue.pop_front() {
            for ((from, _), target) in &self.transitions {
                if *from == state && seen.insert(target.clone()) {
                    queue.push_back(target.clone());
                }
            }
        }
        seen
    }
}
