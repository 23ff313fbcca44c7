//! JSON documents and DOT export.
//!
//! Stack words (`push`) are written top-at-right, e.g. `"ZZX"` has `X` on
//! top. When some stack symbol name is longer than one character, words are
//! space-separated.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabets;
use crate::dfa::UnderlyingDfa;
use crate::error::{Error, Result};
use crate::rdpda::Rdpda;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: usize,
    pub input: String,
    pub top: String,
    pub to: usize,
    pub push: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RdpdaDoc {
    pub num_states: usize,
    pub sigma: Vec<String>,
    pub gamma: Vec<String>,
    pub initial_state: usize,
    pub initial_stack_symbol: String,
    pub finals: Vec<usize>,
    pub transitions: Vec<TransitionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfaTransitionDoc {
    pub from: usize,
    pub input: String,
    pub top: String,
    pub to: usize,
}

/// Underlying automaton document; same layout as [`RdpdaDoc`] without
/// outputs or initial stack symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfaDoc {
    pub num_states: usize,
    pub sigma: Vec<String>,
    pub gamma: Vec<String>,
    pub initial_state: usize,
    pub finals: Vec<usize>,
    pub transitions: Vec<DfaTransitionDoc>,
}

impl From<&Rdpda> for RdpdaDoc {
    fn from(a: &Rdpda) -> Self {
        let g = a.alphabets();
        RdpdaDoc {
            num_states: a.num_states(),
            sigma: g.sigma().to_vec(),
            gamma: g.gamma().to_vec(),
            initial_state: a.initial_state(),
            initial_stack_symbol: g.gamma()[a.initial_stack_symbol()].clone(),
            finals: a.finals().collect(),
            transitions: a
                .transitions()
                .map(|(q, input, top, t)| TransitionDoc {
                    from: q,
                    input: g.sigma()[input].clone(),
                    top: g.gamma()[top].clone(),
                    to: t.target,
                    push: g.format_stack_word(&t.push),
                })
                .collect(),
        }
    }
}

impl TryFrom<&RdpdaDoc> for Rdpda {
    type Error = Error;

    fn try_from(doc: &RdpdaDoc) -> Result<Self> {
        let alphabets = Arc::new(Alphabets::new(doc.sigma.clone(), doc.gamma.clone())?);
        let z = alphabets.stack_index(&doc.initial_stack_symbol)?;
        let mut b = Rdpda::builder(Arc::clone(&alphabets), doc.num_states)
            .initial_state(doc.initial_state)
            .initial_stack_symbol(z)
            .finals(doc.finals.iter().copied());
        for t in &doc.transitions {
            b = b.transition_named(t.from, &t.input, &t.top, t.to, &t.push)?;
        }
        b.build()
    }
}

impl From<&UnderlyingDfa> for DfaDoc {
    fn from(d: &UnderlyingDfa) -> Self {
        let g = d.alphabets();
        DfaDoc {
            num_states: d.num_states(),
            sigma: g.sigma().to_vec(),
            gamma: g.gamma().to_vec(),
            initial_state: d.initial_state(),
            finals: (0..d.num_states()).filter(|&q| d.is_final(q)).collect(),
            transitions: d
                .targets()
                .iter()
                .enumerate()
                .filter_map(|(i, t)| {
                    let (q, letter) = (i / g.rho(), i % g.rho());
                    let (input, top) = g.split_product(letter);
                    t.map(|to| DfaTransitionDoc {
                        from: q,
                        input: g.sigma()[input].clone(),
                        top: g.gamma()[top].clone(),
                        to,
                    })
                })
                .collect(),
        }
    }
}

impl TryFrom<&DfaDoc> for UnderlyingDfa {
    type Error = Error;

    fn try_from(doc: &DfaDoc) -> Result<Self> {
        let alphabets = Arc::new(Alphabets::new(doc.sigma.clone(), doc.gamma.clone())?);
        let transitions = doc
            .transitions
            .iter()
            .map(|t| {
                let a = alphabets.input_index(&t.input)?;
                let x = alphabets.stack_index(&t.top)?;
                Ok((t.from, alphabets.product_index(a, x), t.to))
            })
            .collect::<Result<Vec<_>>>()?;
        UnderlyingDfa::from_transitions(
            alphabets,
            doc.num_states,
            doc.initial_state,
            doc.finals.iter().copied(),
            transitions,
        )
    }
}

pub fn rdpda_from_json(text: &str) -> Result<Rdpda> {
    let doc: RdpdaDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Rdpda::try_from(&doc)
}

pub fn rdpda_to_json(a: &Rdpda) -> String {
    serde_json::to_string(&RdpdaDoc::from(a)).expect("document serialization cannot fail")
}

pub fn rdpda_to_json_pretty(a: &Rdpda) -> String {
    serde_json::to_string_pretty(&RdpdaDoc::from(a)).expect("document serialization cannot fail")
}

pub fn dfa_from_json(text: &str) -> Result<UnderlyingDfa> {
    let doc: DfaDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    UnderlyingDfa::try_from(&doc)
}

pub fn dfa_to_json(d: &UnderlyingDfa) -> String {
    serde_json::to_string(&DfaDoc::from(d)).expect("document serialization cannot fail")
}

/// DOT rendering of the underlying automaton with edge labels `(a,X),w`;
/// the empty output is written `eps`.
pub fn rdpda_to_dot(a: &Rdpda) -> String {
    let g = a.alphabets();
    let mut out = String::from("digraph rdpda {\n  rankdir=LR;\n  __start [shape=point];\n");
    for q in 0..a.num_states() {
        let shape = if a.is_final(q) {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(out, "  {q} [shape={shape}];").unwrap();
    }
    writeln!(out, "  __start -> {};", a.initial_state()).unwrap();
    for (q, input, top, t) in a.transitions() {
        let w = if t.push.is_empty() {
            "eps".to_string()
        } else {
            g.format_stack_word(&t.push)
        };
        writeln!(
            out,
            "  {q} -> {} [label=\"({},{}),{w}\"];",
            t.target,
            g.sigma()[input],
            g.gamma()[top]
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
