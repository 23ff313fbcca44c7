//! Real-time deterministic pushdown automata and their step semantics.
//!
//! Stack words are stored with the top of the stack at the rightmost
//! position: the configuration `(q, XZ)` has `Z` on top.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::Alphabets;
use crate::dfa::{inverse, UnderlyingDfa};
use crate::error::{Error, Result};

pub type State = usize;
pub type StackSymbol = usize;

/// Output of a transition: target state and the word replacing the stack
/// top (top-at-right).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub target: State,
    pub push: Vec<StackSymbol>,
}

impl Transition {
    pub fn new(target: State, push: Vec<StackSymbol>) -> Self {
        Self { target, push }
    }

    pub fn is_pop(&self) -> bool {
        self.push.is_empty()
    }
}

/// A configuration `(state, stack)`; the stack top is the last element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: State,
    pub stack: Vec<StackSymbol>,
}

impl Configuration {
    pub fn new(state: State, stack: Vec<StackSymbol>) -> Self {
        Self { state, stack }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AcceptanceMode {
    EmptyStack,
    FinalState,
    FinalStateAndEmptyStack,
}

impl AcceptanceMode {
    pub const ALL: [AcceptanceMode; 3] = [
        AcceptanceMode::EmptyStack,
        AcceptanceMode::FinalState,
        AcceptanceMode::FinalStateAndEmptyStack,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AcceptanceMode::EmptyStack => "empty-stack",
            AcceptanceMode::FinalState => "final-state",
            AcceptanceMode::FinalStateAndEmptyStack => "final-state-and-empty-stack",
        }
    }
}

impl fmt::Display for AcceptanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AcceptanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empty-stack" | "es" => Ok(AcceptanceMode::EmptyStack),
            "final-state" | "fs" => Ok(AcceptanceMode::FinalState),
            "final-state-and-empty-stack" | "fses" => Ok(AcceptanceMode::FinalStateAndEmptyStack),
            other => Err(Error::InvalidParameter(format!(
                "unknown acceptance mode '{other}'"
            ))),
        }
    }
}

/// A real-time deterministic pushdown automaton, complete or partial.
///
/// `delta` is a dense table indexed by `(state, input, top)`; `None` marks an
/// undefined transition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rdpda {
    alphabets: Arc<Alphabets>,
    num_states: usize,
    initial_state: State,
    initial_stack_symbol: StackSymbol,
    finals: Vec<bool>,
    delta: Vec<Option<Transition>>,
}

/// Incremental constructor for [`Rdpda`].
#[derive(Clone, Debug)]
pub struct RdpdaBuilder {
    alphabets: Arc<Alphabets>,
    num_states: usize,
    initial_state: State,
    initial_stack_symbol: StackSymbol,
    finals: Vec<State>,
    transitions: Vec<(State, usize, StackSymbol, Transition)>,
    require_complete: bool,
}

impl RdpdaBuilder {
    pub fn new(alphabets: impl Into<Arc<Alphabets>>, num_states: usize) -> Self {
        Self {
            alphabets: alphabets.into(),
            num_states,
            initial_state: 0,
            initial_stack_symbol: 0,
            finals: Vec::new(),
            transitions: Vec::new(),
            require_complete: false,
        }
    }

    pub fn initial_state(mut self, q: State) -> Self {
        self.initial_state = q;
        self
    }

    pub fn initial_stack_symbol(mut self, z: StackSymbol) -> Self {
        self.initial_stack_symbol = z;
        self
    }

    pub fn finals(mut self, finals: impl IntoIterator<Item = State>) -> Self {
        self.finals.extend(finals);
        self
    }

    pub fn transition(
        mut self,
        from: State,
        input: usize,
        top: StackSymbol,
        to: State,
        push: Vec<StackSymbol>,
    ) -> Self {
        self.transitions
            .push((from, input, top, Transition::new(to, push)));
        self
    }

    /// Adds a transition given by symbol names; `push` is top-at-right.
    pub fn transition_named(
        self,
        from: State,
        input: &str,
        top: &str,
        to: State,
        push: &str,
    ) -> Result<Self> {
        let a = self.alphabets.input_index(input)?;
        let x = self.alphabets.stack_index(top)?;
        let w = self.alphabets.parse_stack_word(push)?;
        Ok(self.transition(from, a, x, to, w))
    }

    pub fn require_complete(mut self, yes: bool) -> Self {
        self.require_complete = yes;
        self
    }

    pub fn build(self) -> Result<Rdpda> {
        let n = self.num_states;
        if n == 0 {
            return Err(Error::InvalidParameter(
                "an automaton needs at least one state".into(),
            ));
        }
        let check_state = |q: State| {
            if q < n {
                Ok(())
            } else {
                Err(Error::InvalidState {
                    state: q,
                    num_states: n,
                })
            }
        };
        check_state(self.initial_state)?;
        let (alpha, beta) = (self.alphabets.alpha(), self.alphabets.beta());
        if self.initial_stack_symbol >= beta {
            return Err(Error::InvalidParameter(format!(
                "initial stack symbol index {} out of range",
                self.initial_stack_symbol
            )));
        }
        let mut finals = vec![false; n];
        for &q in &self.finals {
            check_state(q)?;
            finals[q] = true;
        }
        let mut delta: Vec<Option<Transition>> = vec![None; n * alpha * beta];
        for (from, input, top, t) in self.transitions {
            check_state(from)?;
            check_state(t.target)?;
            if input >= alpha {
                return Err(Error::LetterOutOfRange(input));
            }
            if top >= beta || t.push.iter().any(|&x| x >= beta) {
                return Err(Error::InvalidParameter(
                    "stack symbol index out of range".into(),
                ));
            }
            let slot = &mut delta[(from * alpha + input) * beta + top];
            if slot.is_some() {
                return Err(Error::DuplicateTransition {
                    state: from,
                    input: self.alphabets.sigma()[input].clone(),
                    top: self.alphabets.gamma()[top].clone(),
                });
            }
            *slot = Some(t);
        }
        if self.require_complete {
            let missing = delta.iter().filter(|t| t.is_none()).count();
            if missing > 0 {
                return Err(Error::Incomplete { missing });
            }
        }
        Ok(Rdpda {
            alphabets: self.alphabets,
            num_states: n,
            initial_state: self.initial_state,
            initial_stack_symbol: self.initial_stack_symbol,
            finals,
            delta,
        })
    }
}

impl Rdpda {
    pub fn builder(alphabets: impl Into<Arc<Alphabets>>, num_states: usize) -> RdpdaBuilder {
        RdpdaBuilder::new(alphabets, num_states)
    }

    /// Builds directly from a dense transition table in canonical order.
    pub(crate) fn from_parts(
        alphabets: Arc<Alphabets>,
        num_states: usize,
        initial_state: State,
        initial_stack_symbol: StackSymbol,
        finals: Vec<bool>,
        delta: Vec<Option<Transition>>,
    ) -> Self {
        debug_assert_eq!(delta.len(), num_states * alphabets.rho());
        debug_assert_eq!(finals.len(), num_states);
        Self {
            alphabets,
            num_states,
            initial_state,
            initial_stack_symbol,
            finals,
            delta,
        }
    }

    pub fn alphabets(&self) -> &Alphabets {
        &self.alphabets
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial_state(&self) -> State {
        self.initial_state
    }

    pub fn initial_stack_symbol(&self) -> StackSymbol {
        self.initial_stack_symbol
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration::new(self.initial_state, vec![self.initial_stack_symbol])
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn final_flags(&self) -> &[bool] {
        &self.finals
    }

    pub fn finals(&self) -> impl Iterator<Item = State> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter_map(|(q, &f)| f.then_some(q))
    }

    #[inline]
    fn slot(&self, q: State, input: usize, top: StackSymbol) -> usize {
        (q * self.alphabets.alpha() + input) * self.alphabets.beta() + top
    }

    pub fn transition(&self, q: State, input: usize, top: StackSymbol) -> Option<&Transition> {
        self.delta[self.slot(q, input, top)].as_ref()
    }

    /// Defined transitions as `(state, input, top, transition)`, in
    /// canonical order.
    pub fn transitions(
        &self,
    ) -> impl Iterator<Item = (State, usize, StackSymbol, &Transition)> + '_ {
        let (alpha, beta) = (self.alphabets.alpha(), self.alphabets.beta());
        self.delta.iter().enumerate().filter_map(move |(i, t)| {
            t.as_ref()
                .map(|t| (i / (alpha * beta), (i / beta) % alpha, i % beta, t))
        })
    }

    /// s, the number of defined transitions.
    pub fn transition_count(&self) -> usize {
        self.delta.iter().filter(|t| t.is_some()).count()
    }

    /// m, the sum of all push-word lengths.
    pub fn output_size(&self) -> usize {
        self.delta.iter().flatten().map(|t| t.push.len()).sum()
    }

    pub fn pop_count(&self) -> usize {
        self.delta.iter().flatten().filter(|t| t.is_pop()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(Option::is_some)
    }

    /// Returns a copy with a different final-state set.
    pub fn with_finals(&self, finals: Vec<bool>) -> Result<Self> {
        if finals.len() != self.num_states {
            return Err(Error::InvalidParameter(
                "final flags must have one entry per state".into(),
            ));
        }
        let mut out = self.clone();
        out.finals = finals;
        Ok(out)
    }

    /// The unique `letter`-consecutive configuration, if any.
    pub fn step(&self, c: &Configuration, letter: usize) -> Option<Configuration> {
        let (&top, rest) = c.stack.split_last()?;
        if letter >= self.alphabets.alpha() || c.state >= self.num_states {
            return None;
        }
        let t = self.transition(c.state, letter, top)?;
        let mut stack = Vec::with_capacity(rest.len() + t.push.len());
        stack.extend_from_slice(rest);
        stack.extend_from_slice(&t.push);
        Some(Configuration::new(t.target, stack))
    }

    /// Runs `word` from the initial configuration, returning every visited
    /// configuration. The run stops early when no step applies.
    pub fn run(&self, word: &[usize]) -> Result<Vec<Configuration>> {
        if let Some(&bad) = word.iter().find(|&&a| a >= self.alphabets.alpha()) {
            return Err(Error::LetterOutOfRange(bad));
        }
        let mut trace = vec![self.initial_configuration()];
        for &a in word {
            match self.step(trace.last().unwrap(), a) {
                Some(next) => trace.push(next),
                None => break,
            }
        }
        Ok(trace)
    }

    pub fn accepts(&self, word: &[usize], mode: AcceptanceMode) -> Result<bool> {
        let trace = self.run(word)?;
        if trace.len() != word.len() + 1 {
            return Ok(false);
        }
        let last = trace.last().unwrap();
        Ok(self.satisfies(last, mode))
    }

    /// Parses `word` with [`Alphabets::parse_input_word`] and checks it.
    pub fn accepts_str(&self, word: &str, mode: AcceptanceMode) -> Result<bool> {
        let word = self.alphabets.parse_input_word(word)?;
        self.accepts(&word, mode)
    }

    pub fn satisfies(&self, c: &Configuration, mode: AcceptanceMode) -> bool {
        match mode {
            AcceptanceMode::EmptyStack => c.stack.is_empty(),
            AcceptanceMode::FinalState => self.finals[c.state],
            AcceptanceMode::FinalStateAndEmptyStack => c.stack.is_empty() && self.finals[c.state],
        }
    }

    /// The finite automaton over Σ×Γ obtained by forgetting outputs.
    pub fn underlying(&self) -> UnderlyingDfa {
        let delta = self
            .delta
            .iter()
            .map(|t| t.as_ref().map(|t| t.target))
            .collect();
        UnderlyingDfa::from_parts(
            Arc::clone(&self.alphabets),
            self.num_states,
            self.initial_state,
            self.finals.clone(),
            delta,
        )
    }

    pub fn is_accessible(&self) -> bool {
        self.underlying().is_accessible()
    }

    /// Renumbers states in breadth-first discovery order of the underlying
    /// automaton (letters explored in product order). Two accessible RDPDA
    /// are isomorphic iff their canonical forms are equal.
    pub fn canonicalize(&self) -> Result<Self> {
        let order = self.underlying().bfs_order();
        if order.len() != self.num_states {
            return Err(Error::NotAccessible);
        }
        let rank = inverse(&order);
        let rho = self.alphabets.rho();
        let mut delta = Vec::with_capacity(self.delta.len());
        for &old in &order {
            delta.extend(self.delta[old * rho..(old + 1) * rho].iter().map(|t| {
                t.as_ref()
                    .map(|t| Transition::new(rank[t.target], t.push.clone()))
            }));
        }
        Ok(Self {
            alphabets: Arc::clone(&self.alphabets),
            num_states: self.num_states,
            initial_state: 0,
            initial_stack_symbol: self.initial_stack_symbol,
            finals: order.iter().map(|&q| self.finals[q]).collect(),
            delta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ptoy_steps() {
        let p = fixtures::p_toy();
        let g = p.alphabets();
        let a = g.input_index("a").unwrap();
        // The printed target state 2 does not exist in P_toy; δ(1,(a,Z)) = (0,XZX).
        let c = Configuration::new(1, g.parse_stack_word("XZ").unwrap());
        let next = p.step(&c, a).unwrap();
        assert_eq!(next.state, 0);
        assert_eq!(g.format_stack_word(&next.stack), "XXZX");

        let c = Configuration::new(0, g.parse_stack_word("Z").unwrap());
        let next = p.step(&c, a).unwrap();
        assert_eq!(next, Configuration::new(0, g.parse_stack_word("ZZX").unwrap()));
    }

    #[test]
    fn empty_stack_blocks() {
        let p = fixtures::p_toy();
        for a in 0..2 {
            assert_eq!(p.step(&Configuration::new(0, vec![]), a), None);
        }
    }

    #[test]
    fn fig3_acceptance() {
        let f = fixtures::fig3();
        use AcceptanceMode::*;
        assert!(f.accepts_str("b", EmptyStack).unwrap());
        assert!(f.accepts_str("b", FinalStateAndEmptyStack).unwrap());
        assert!(f.accepts_str("aab", EmptyStack).unwrap());
        for w in ["", "a", "bb", "ba", "bab"] {
            assert!(!f.accepts_str(w, EmptyStack).unwrap(), "{w}");
        }
        assert!(f.accepts_str("aab", FinalState).unwrap());
        assert!(!f.accepts_str("ba", FinalState).unwrap());
        assert!(!f.accepts_str("abb", FinalState).unwrap());
        assert!(!f.accepts_str("", FinalState).unwrap());
    }

    #[test]
    fn empty_word_under_each_mode() {
        let f = fixtures::fig3().with_finals(vec![true, true, true, true]).unwrap();
        assert!(f.accepts(&[], AcceptanceMode::FinalState).unwrap());
        assert!(!f.accepts(&[], AcceptanceMode::EmptyStack).unwrap());
        assert!(!f.accepts(&[], AcceptanceMode::FinalStateAndEmptyStack).unwrap());
    }

    #[test]
    fn letter_out_of_range() {
        let f = fixtures::fig3();
        assert_eq!(
            f.accepts(&[0, 7], AcceptanceMode::FinalState),
            Err(Error::LetterOutOfRange(7))
        );
        assert!(f.accepts_str("c", AcceptanceMode::FinalState).is_err());
    }

    #[test]
    fn builder_errors() {
        let alph = Alphabets::new(["a"], ["Z"]).unwrap();
        let dup = Rdpda::builder(alph.clone(), 1)
            .transition(0, 0, 0, 0, vec![])
            .transition(0, 0, 0, 0, vec![0])
            .build();
        assert!(matches!(dup, Err(Error::DuplicateTransition { .. })));
        let bad_target = Rdpda::builder(alph.clone(), 1)
            .transition(0, 0, 0, 3, vec![])
            .build();
        assert!(matches!(bad_target, Err(Error::InvalidState { .. })));
        let incomplete = Rdpda::builder(alph, 2)
            .transition(0, 0, 0, 1, vec![])
            .require_complete(true)
            .build();
        assert_eq!(incomplete, Err(Error::Incomplete { missing: 1 }));
    }

    #[test]
    fn sizes() {
        let p = fixtures::p_toy();
        assert!(p.is_complete());
        assert_eq!(p.transition_count(), 8);
        assert_eq!(p.output_size(), 1 + 1 + 3 + 2 + 2 + 0 + 3 + 0);
        assert_eq!(p.pop_count(), 2);
    }
}
