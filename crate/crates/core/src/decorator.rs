//! Stack-output decoration of a transition structure.
//!
//! All `β^m · C(s+m−1, m)` decorations of a structure with `s` transitions
//! and total output size `m` are equally likely: the length profile is a
//! uniform weak composition of `m` into `s` parts, and every profile carries
//! the same number `β^m` of words.

use std::sync::Arc;

use rand::seq::index;
use rand::Rng;

use crate::dfa::UnderlyingDfa;
use crate::error::{invalid, Result};
use crate::rdpda::{Rdpda, Transition};

/// A weak composition: `s` nonnegative parts summing to `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn into_parts(self) -> Vec<usize> {
        self.0
    }
}

/// Uniform weak composition of `m` into `s ≥ 1` parts: the `s−1` bars are a
/// uniform subset of the `m+s−1` slots.
pub fn sample_composition<R: Rng + ?Sized>(m: usize, s: usize, rng: &mut R) -> Composition {
    assert!(s >= 1, "a composition needs at least one part");
    let slots = m + s - 1;
    let mut bars = index::sample(rng, slots, s - 1).into_vec();
    bars.sort_unstable();
    let mut parts = Vec::with_capacity(s);
    let mut prev = 0;
    for b in bars {
        parts.push(b - prev);
        prev = b + 1;
    }
    parts.push(slots - prev);
    Composition(parts)
}

fn random_word<R: Rng + ?Sized>(len: usize, beta: usize, rng: &mut R) -> Vec<usize> {
    (0..len).map(|_| rng.random_range(0..beta)).collect()
}

/// Assigns `lengths[i]` random words to the `i`-th defined transition in
/// canonical order. The initial stack symbol is the first stack symbol.
fn build_with_lengths<R: Rng + ?Sized>(
    dfa: &UnderlyingDfa,
    lengths: &[usize],
    rng: &mut R,
) -> Rdpda {
    let alphabets: Arc<_> = Arc::clone(dfa.alphabets_arc());
    let beta = alphabets.beta();
    let mut lengths = lengths.iter();
    let delta = dfa
        .targets()
        .iter()
        .map(|t| {
            t.map(|target| {
                let len = *lengths.next().expect("one length per transition");
                Transition::new(target, random_word(len, beta, rng))
            })
        })
        .collect();
    Rdpda::from_parts(
        alphabets,
        dfa.num_states(),
        dfa.initial_state(),
        0,
        dfa.final_flags().to_vec(),
        delta,
    )
}

/// Uniform decoration of `dfa` with total output size `m`.
pub fn decorate<R: Rng + ?Sized>(dfa: &UnderlyingDfa, m: usize, rng: &mut R) -> Result<Rdpda> {
    let s = dfa.transition_count();
    if s == 0 {
        if m > 0 {
            return Err(invalid("cannot place a positive output size on zero transitions"));
        }
        return Ok(build_with_lengths(dfa, &[], rng));
    }
    let comp = sample_composition(m, s, rng);
    Ok(build_with_lengths(dfa, comp.parts(), rng))
}

/// Forces a uniform `k`-subset of transitions to be pops and decorates the
/// other `s−k` uniformly with total size `m`. Those may be pops as well, so
/// the result has at least `k` pops. This is not uniform over automata with
/// at least `k` pops.
pub fn decorate_min_pops<R: Rng + ?Sized>(
    dfa: &UnderlyingDfa,
    m: usize,
    k: usize,
    rng: &mut R,
) -> Result<Rdpda> {
    let s = dfa.transition_count();
    if k > s {
        return Err(invalid(format!("cannot force {k} pops among {s} transitions")));
    }
    if k == s && m > 0 {
        return Err(invalid("all transitions forced to pop but m > 0"));
    }
    let mut forced = vec![false; s];
    for i in index::sample(rng, s, k) {
        forced[i] = true;
    }
    let mut lengths = vec![0; s];
    if k < s {
        let comp = sample_composition(m, s - k, rng).into_parts();
        for (slot, len) in (0..s).filter(|&i| !forced[i]).zip(comp) {
            lengths[slot] = len;
        }
    }
    Ok(build_with_lengths(dfa, &lengths, rng))
}
