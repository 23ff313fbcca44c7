//! Deterministic transition structures over the product alphabet Σ×Γ.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::alphabet::Alphabets;
use crate::error::{Error, Result};
use crate::rdpda::State;

/// Underlying finite automaton of an RDPDA: a deterministic, possibly
/// partial, transition map `(state, product letter) -> state`.
///
/// Product letters are indices into Σ×Γ ordered by (input, stack symbol).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnderlyingDfa {
    alphabets: Arc<Alphabets>,
    num_states: usize,
    initial_state: State,
    finals: Vec<bool>,
    delta: Vec<Option<State>>,
}

impl UnderlyingDfa {
    pub(crate) fn from_parts(
        alphabets: Arc<Alphabets>,
        num_states: usize,
        initial_state: State,
        finals: Vec<bool>,
        delta: Vec<Option<State>>,
    ) -> Self {
        debug_assert_eq!(delta.len(), num_states * alphabets.rho());
        Self {
            alphabets,
            num_states,
            initial_state,
            finals,
            delta,
        }
    }

    /// Builds a complete structure from its dense target table, which must
    /// list `num_states * rho` targets in (state, letter) order.
    pub fn complete(
        alphabets: impl Into<Arc<Alphabets>>,
        initial_state: State,
        targets: Vec<State>,
    ) -> Result<Self> {
        let alphabets = alphabets.into();
        let rho = alphabets.rho();
        if targets.is_empty() || targets.len() % rho != 0 {
            return Err(Error::InvalidParameter(format!(
                "target table length {} is not a positive multiple of {rho}",
                targets.len()
            )));
        }
        let n = targets.len() / rho;
        if let Some(&q) = targets.iter().chain([&initial_state]).find(|&&q| q >= n) {
            return Err(Error::InvalidState {
                state: q,
                num_states: n,
            });
        }
        Ok(Self::from_parts(
            alphabets,
            n,
            initial_state,
            vec![false; n],
            targets.into_iter().map(Some).collect(),
        ))
    }

    /// Builds a possibly partial structure from `(from, letter, to)` triples.
    pub fn from_transitions(
        alphabets: impl Into<Arc<Alphabets>>,
        num_states: usize,
        initial_state: State,
        finals: impl IntoIterator<Item = State>,
        transitions: impl IntoIterator<Item = (State, usize, State)>,
    ) -> Result<Self> {
        let alphabets = alphabets.into();
        let rho = alphabets.rho();
        let check = |q: State| {
            if q < num_states {
                Ok(())
            } else {
                Err(Error::InvalidState {
                    state: q,
                    num_states,
                })
            }
        };
        if num_states == 0 {
            return Err(Error::InvalidParameter(
                "an automaton needs at least one state".into(),
            ));
        }
        check(initial_state)?;
        let mut flags = vec![false; num_states];
        for q in finals {
            check(q)?;
            flags[q] = true;
        }
        let mut delta = vec![None; num_states * rho];
        for (from, letter, to) in transitions {
            check(from)?;
            check(to)?;
            if letter >= rho {
                return Err(Error::LetterOutOfRange(letter));
            }
            let slot = &mut delta[from * rho + letter];
            if slot.is_some() {
                let (a, x) = alphabets.split_product(letter);
                return Err(Error::DuplicateTransition {
                    state: from,
                    input: alphabets.sigma()[a].clone(),
                    top: alphabets.gamma()[x].clone(),
                });
            }
            *slot = Some(to);
        }
        Ok(Self::from_parts(
            alphabets,
            num_states,
            initial_state,
            flags,
            delta,
        ))
    }

    pub fn alphabets(&self) -> &Alphabets {
        &self.alphabets
    }

    pub(crate) fn alphabets_arc(&self) -> &Arc<Alphabets> {
        &self.alphabets
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial_state(&self) -> State {
        self.initial_state
    }

    pub fn final_flags(&self) -> &[bool] {
        &self.finals
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn target(&self, q: State, letter: usize) -> Option<State> {
        self.delta[q * self.alphabets.rho() + letter]
    }

    /// Targets in (state, letter) order; `None` for undefined transitions.
    pub fn targets(&self) -> &[Option<State>] {
        &self.delta
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().filter(|t| t.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(Option::is_some)
    }

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

    /// States in breadth-first discovery order from the initial state,
    /// exploring letters in product order.
    pub fn bfs_order(&self) -> Vec<State> {
        let rho = self.alphabets.rho();
        let mut seen = vec![false; self.num_states];
        let mut order = Vec::with_capacity(self.num_states);
        let mut queue = VecDeque::from([self.initial_state]);
        seen[self.initial_state] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for p in self.delta[q * rho..(q + 1) * rho].iter().flatten() {
                if !seen[*p] {
                    seen[*p] = true;
                    queue.push_back(*p);
                }
            }
        }
        order
    }

    pub fn is_accessible(&self) -> bool {
        self.bfs_order().len() == self.num_states
    }

    /// Renumbers states in breadth-first discovery order. Two accessible
    /// structures are isomorphic iff their canonical forms are equal.
    pub fn canonicalize(&self) -> Result<Self> {
        let order = self.bfs_order();
        if order.len() != self.num_states {
            return Err(Error::NotAccessible);
        }
        let rank = inverse(&order);
        let rho = self.alphabets.rho();
        let mut delta = Vec::with_capacity(self.delta.len());
        for &old in &order {
            delta.extend(
                self.delta[old * rho..(old + 1) * rho]
                    .iter()
                    .map(|t| t.map(|p| rank[p])),
            );
        }
        let finals = order.iter().map(|&old| self.finals[old]).collect();
        Ok(Self::from_parts(
            Arc::clone(&self.alphabets),
            self.num_states,
            0,
            finals,
            delta,
        ))
    }

    pub fn is_canonical(&self) -> bool {
        self.initial_state == 0 && self.bfs_order().iter().enumerate().all(|(i, &q)| i == q)
    }
}

/// `rank[order[i]] = i`.
pub(crate) fn inverse(order: &[usize]) -> Vec<usize> {
    let mut rank = vec![0; order.len()];
    for (i, &q) in order.iter().enumerate() {
        rank[q] = i;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn unary() -> Arc<Alphabets> {
        Arc::new(Alphabets::new(["a"], ["Z"]).unwrap())
    }

    #[test]
    fn single_state_is_accessible() {
        let d = UnderlyingDfa::complete(unary(), 0, vec![0]).unwrap();
        assert!(d.is_accessible());
        let partial = UnderlyingDfa::from_transitions(unary(), 1, 0, [], []).unwrap();
        assert!(partial.is_accessible());
    }

    #[test]
    fn loops_on_initial_are_inaccessible() {
        let two = Arc::new(Alphabets::new(["a", "b"], ["Z"]).unwrap());
        let d = UnderlyingDfa::complete(two, 0, vec![0, 0, 0, 0]).unwrap();
        assert!(!d.is_accessible());
        assert_eq!(d.canonicalize(), Err(Error::NotAccessible));
    }

    #[test]
    fn underlying_of_ptoy_matches_fig2() {
        let p = fixtures::p_toy();
        let u = p.underlying();
        assert_eq!(u, fixtures::fig2_underlying());
        assert!(u.is_accessible());
        // outputs are forgotten on the DFA but kept on the automaton
        assert_eq!(p.output_size(), 12);
    }

    #[test]
    fn canonical_forms_of_two_state_unary_structures() {
        let loop_back = UnderlyingDfa::complete(unary(), 0, vec![1, 1]).unwrap();
        let cycle = UnderlyingDfa::complete(unary(), 0, vec![1, 0]).unwrap();
        let a = loop_back.canonicalize().unwrap();
        let b = cycle.canonicalize().unwrap();
        assert_ne!(a, b);
        assert_eq!(a.canonicalize().unwrap(), a);
    }

    #[test]
    fn relabelling_gives_same_canonical_form() {
        let two = Arc::new(Alphabets::new(["a", "b"], ["Z"]).unwrap());
        // 0 -a-> 2, 0 -b-> 1, 1 -a-> 0, 1 -b-> 2, 2 -a-> 1, 2 -b-> 2
        let d = UnderlyingDfa::complete(two.clone(), 0, vec![2, 1, 0, 2, 1, 2]).unwrap();
        // rename 0->1, 1->2, 2->0
        let renamed = UnderlyingDfa::complete(two, 1, vec![2, 0, 0, 2, 1, 0]).unwrap();
        assert_eq!(d.canonicalize().unwrap(), renamed.canonicalize().unwrap());
        assert!(d.canonicalize().unwrap().is_canonical());
    }
}
