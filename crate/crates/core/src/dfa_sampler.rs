//! Uniform generation of accessible complete deterministic structures over
//! Σ×Γ, up to isomorphism.
//!
//! [`sample_accessible_dfa`] draws every transition target uniformly with
//! initial state 0 and rejects inaccessible draws. Each isomorphism class of
//! accessible structures has exactly `(n−1)!` labellings with initial state
//! 0 (no non-trivial automorphisms), so the canonical form of an accepted
//! draw is uniform over classes.
//!
//! The acceptance rate of that rejection decays exponentially in `n` for
//! small product alphabets (ρ = 2 in particular). [`RecursiveDfaSampler`]
//! samples canonical forms directly from an exact count table instead.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabets;
use crate::dfa::UnderlyingDfa;
use crate::error::{Error, Result};

/// Outcome bookkeeping of a rejection sampler.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerReport {
    /// Draws discarded before the returned one.
    pub rejects: u64,
}

impl SamplerReport {
    /// Total number of draws, the accepted one included.
    pub fn generations(&self) -> u64 {
        self.rejects + 1
    }
}

fn check_params(n: usize, alphabets: &Alphabets) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if alphabets.rho() < 2 {
        return Err(Error::Unsupported(
            "accessible structure sampling needs alpha*beta >= 2".into(),
        ));
    }
    Ok(())
}

/// Uniform accessible complete structure with `n` states, in canonical
/// form, with no final states (see [`attach_finals`]).
pub fn sample_accessible_dfa<R: Rng + ?Sized>(
    n: usize,
    alphabets: impl Into<Arc<Alphabets>>,
    rng: &mut R,
) -> Result<(UnderlyingDfa, SamplerReport)> {
    let alphabets = alphabets.into();
    check_params(n, &alphabets)?;
    let rho = alphabets.rho();
    let mut report = SamplerReport::default();
    let mut targets = vec![0usize; n * rho];
    loop {
        for t in targets.iter_mut() {
            *t = rng.random_range(0..n);
        }
        let dfa = UnderlyingDfa::complete(Arc::clone(&alphabets), 0, targets.clone())?;
        if dfa.is_accessible() {
            return Ok((dfa.canonicalize()?, report));
        }
        report.rejects += 1;
    }
}

/// Makes each state final independently with probability 1/2.
pub fn attach_finals<R: Rng + ?Sized>(dfa: &UnderlyingDfa, rng: &mut R) -> UnderlyingDfa {
    let finals = (0..dfa.num_states()).map(|_| rng.random()).collect();
    dfa.with_finals(finals)
        .expect("one flag per state by construction")
}

/// Exact sampler over canonical accessible complete structures.
///
/// A canonical structure is read as its transition targets in (state,
/// letter) order: each target is either an already discovered state or the
/// next new one, and state `q` must be discovered before its own
/// transitions are read. `ways[i][d]` counts completions after `i` targets
/// with `d` discovered states, so `ways[0][1]` is the number of classes.
#[derive(Clone, Debug)]
pub struct RecursiveDfaSampler {
    n: usize,
    alphabets: Arc<Alphabets>,
    ways: Vec<Vec<BigUint>>,
}

impl RecursiveDfaSampler {
    pub fn new(n: usize, alphabets: impl Into<Arc<Alphabets>>) -> Result<Self> {
        let alphabets = alphabets.into();
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        let k = alphabets.rho();
        let len = n * k;
        let mut ways = vec![Vec::new(); len + 1];
        ways[len] = (0..=n).map(|d| BigUint::from((d == n) as u8)).collect();
        for i in (0..len).rev() {
            let source = i / k;
            ways[i] = (0..=n)
                .map(|d| {
                    if source >= d {
                        return BigUint::zero();
                    }
                    let mut w = &ways[i + 1][d] * d;
                    if d < n {
                        w += &ways[i + 1][d + 1];
                    }
                    w
                })
                .collect();
        }
        Ok(Self { n, alphabets, ways })
    }

    /// Number of isomorphism classes, i.e. the size of the sample space.
    pub fn class_count(&self) -> &BigUint {
        &self.ways[0][1]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> UnderlyingDfa {
        let len = self.ways.len() - 1;
        let mut targets = Vec::with_capacity(len);
        let mut discovered = 1;
        for i in 0..len {
            let old = &self.ways[i + 1][discovered] * discovered;
            let r = uniform_below(rng, &self.ways[i][discovered]);
            if r < old {
                targets.push(rng.random_range(0..discovered));
            } else {
                targets.push(discovered);
                discovered += 1;
            }
        }
        debug_assert_eq!(discovered, self.n);
        UnderlyingDfa::complete(Arc::clone(&self.alphabets), 0, targets)
            .expect("targets are valid states")
    }
}

/// Uniform integer in `[0, bound)`; `bound` must be positive.
fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero());
    if bound.is_one() {
        return BigUint::zero();
    }
    let bits = (bound - 1u32).bits();
    let words = bits.div_ceil(32) as usize;
    let top_mask = if bits % 32 == 0 {
        u32::MAX
    } else {
        (1u32 << (bits % 32)) - 1
    };
    let mut digits = vec![0u32; words];
    loop {
        for d in digits.iter_mut() {
            *d = rng.random();
        }
        digits[words - 1] &= top_mask;
        let x = BigUint::from_slice(&digits);
        if &x < bound {
            return x;
        }
    }
}
