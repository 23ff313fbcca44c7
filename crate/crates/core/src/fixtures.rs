//! Automata transcribed from the figures used throughout the tests and docs.

use crate::dfa::UnderlyingDfa;
use crate::io::{dfa_from_json, rdpda_from_json};
use crate::rdpda::Rdpda;

pub const P_TOY_JSON: &str = include_str!("../fixtures/p_toy.json");
pub const FIG2_UNDERLYING_JSON: &str = include_str!("../fixtures/fig2_underlying.json");
pub const FIG3_JSON: &str = include_str!("../fixtures/fig3.json");

/// Two-state complete automaton over Σ={a,b}, Γ={Z,X}, Z_init=Z, F={1}.
pub fn p_toy() -> Rdpda {
    rdpda_from_json(P_TOY_JSON).expect("bundled fixture is valid")
}

/// Underlying automaton of [`p_toy`].
pub fn fig2_underlying() -> UnderlyingDfa {
    dfa_from_json(FIG2_UNDERLYING_JSON).expect("bundled fixture is valid")
}

/// Four-state partial automaton with Z_init=X, used to contrast the
/// acceptance conditions.
pub fn fig3() -> Rdpda {
    rdpda_from_json(FIG3_JSON).expect("bundled fixture is valid")
}
