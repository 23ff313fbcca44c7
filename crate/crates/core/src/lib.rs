//! Uniform random generation, enumeration and reachability analysis of
//! accessible real-time deterministic pushdown automata (RDPDA).
//!
//! A complete accessible RDPDA with `n` states over input alphabet Σ and
//! stack alphabet Γ is sampled in two independent steps: a uniform
//! accessible complete transition structure over Σ×Γ, then a uniform
//! assignment of stack-output words with a prescribed total size `m`.
//! Reachability of the result (plain and with an empty stack) is decided by
//! post* saturation of the associated pushdown system.
//!
//! ```
//! use rdpda::{fixtures, reachability, AcceptanceMode};
//!
//! let a = fixtures::fig3();
//! assert!(a.accepts_str("b", AcceptanceMode::EmptyStack).unwrap());
//! assert_eq!(reachability::reachable_states(&a), vec![0, 1]);
//! ```

pub mod alphabet;
pub mod counting;
pub mod decorator;
pub mod dfa;
pub mod dfa_sampler;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod rdpda;
pub mod reachability;
pub mod rng;
pub mod samplers;

pub use alphabet::Alphabets;
pub use dfa::UnderlyingDfa;
pub use dfa_sampler::SamplerReport;
pub use error::{Error, Result};
pub use rdpda::{AcceptanceMode, Configuration, Rdpda, RdpdaBuilder, Transition};
