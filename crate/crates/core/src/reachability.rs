//! Configuration reachability for RDPDA through pushdown-system post*
//! saturation, plus a bounded breadth-first oracle for differential tests.
//!
//! An RDPDA is turned into a pushdown system by ignoring input letters:
//! reachability does not depend on which letter fires a transition because
//! the automaton is real-time. PDS rules are written top-at-LEFT, unlike
//! [`Rdpda`] stack words; [`pds_word`] is the single place where the
//! orientation flips.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use crate::rdpda::{AcceptanceMode, Configuration, Rdpda, StackSymbol, State};

/// `⟨from, top⟩ → ⟨to, push⟩` with `push` top-at-left and at most two
/// symbols long.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdsRule {
    pub from: State,
    pub top: StackSymbol,
    pub to: State,
    pub push: Vec<StackSymbol>,
}

/// Pushdown system with control states `0..num_control`; states from
/// `num_original` upward are auxiliary states introduced by splitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pds {
    pub num_original: usize,
    pub num_control: usize,
    pub stack_size: usize,
    pub rules: Vec<PdsRule>,
}

/// RDPDA push word (top-at-right) to PDS orientation (top-at-left).
pub fn pds_word(push: &[StackSymbol]) -> Vec<StackSymbol> {
    push.iter().rev().copied().collect()
}

struct RuleSink {
    next_aux: usize,
    rules: Vec<PdsRule>,
}

impl RuleSink {
    fn aux(&mut self) -> State {
        self.next_aux += 1;
        self.next_aux - 1
    }

    fn add(&mut self, from: State, top: StackSymbol, to: State, push: Vec<StackSymbol>) {
        debug_assert!(push.len() <= 2);
        self.rules.push(PdsRule {
            from,
            top,
            to,
            push,
        });
    }

    /// `⟨cur, w[j]⟩ → ⟨·, w[j−1] w[j]⟩` for `j = start..1`, ending in `to`.
    fn unfold(&mut self, mut cur: State, w: &[StackSymbol], start: usize, to: State) -> State {
        for j in (1..=start).rev() {
            let next = if j == 1 { to } else { self.aux() };
            self.add(cur, w[j], next, vec![w[j - 1], w[j]]);
            cur = next;
        }
        cur
    }
}

/// Splits pushes longer than two symbols through `L−2` fresh auxiliary
/// states, each rule pushing one extra symbol.
pub fn normalize(a: &Rdpda) -> Pds {
    let mut sink = RuleSink {
        next_aux: a.num_states(),
        rules: Vec::new(),
    };
    for (q, _, x, t) in a.transitions() {
        let w = pds_word(&t.push);
        let len = w.len();
        if len <= 2 {
            sink.add(q, x, t.target, w);
        } else {
            let first = sink.aux();
            sink.add(q, x, first, w[len - 2..].to_vec());
            sink.unfold(first, &w, len - 2, t.target);
        }
    }
    Pds {
        num_original: a.num_states(),
        num_control: sink.next_aux,
        stack_size: a.alphabets().beta(),
        rules: sink.rules,
    }
}

/// Like [`normalize`], but every non-pop push, short ones included, is
/// routed through `L` auxiliary states: first the bottom symbol is written,
/// then one symbol per rule, then an identity rewrite into the target.
/// Reachability on original states is unchanged; used to exercise the
/// auxiliary-state path on small instances.
pub fn normalize_fine(a: &Rdpda) -> Pds {
    let mut sink = RuleSink {
        next_aux: a.num_states(),
        rules: Vec::new(),
    };
    for (q, _, x, t) in a.transitions() {
        let w = pds_word(&t.push);
        let len = w.len();
        if len == 0 {
            sink.add(q, x, t.target, w);
            continue;
        }
        let first = sink.aux();
        sink.add(q, x, first, vec![w[len - 1]]);
        let mut cur = first;
        for j in (1..len).rev() {
            let next = sink.aux();
            sink.add(cur, w[j], next, vec![w[j - 1], w[j]]);
            cur = next;
        }
        sink.add(cur, w[0], t.target, vec![w[0]]);
    }
    Pds {
        num_original: a.num_states(),
        num_control: sink.next_aux,
        stack_size: a.alphabets().beta(),
        rules: sink.rules,
    }
}

/// Finite automaton over the stack alphabet recognizing a set of
/// configurations: `(q, w)` is accepted when reading `w` top-first from
/// control state `q` reaches the accepting state.
///
/// ε-moves only ever leave control states (control states have no incoming
/// edges), so they are kept as a separate link relation.
#[derive(Clone, Debug)]
pub struct PAutomaton {
    num_original: usize,
    num_control: usize,
    accepting: usize,
    out: Vec<Vec<(StackSymbol, usize)>>,
    eps: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Pending {
    Edge(usize, StackSymbol, usize),
    Eps(usize, usize),
}

struct Saturation {
    out: Vec<Vec<(StackSymbol, usize)>>,
    edges: HashSet<(usize, StackSymbol, usize)>,
    eps_links: HashSet<(usize, usize)>,
    eps_out: Vec<Vec<usize>>,
    eps_in: Vec<Vec<usize>>,
    mids: HashMap<(State, StackSymbol), usize>,
}

impl Saturation {
    fn new_state(&mut self) -> usize {
        self.out.push(Vec::new());
        self.eps_in.push(Vec::new());
        self.out.len() - 1
    }

    fn mid(&mut self, p: State, y: StackSymbol) -> usize {
        if let Some(&m) = self.mids.get(&(p, y)) {
            return m;
        }
        let m = self.new_state();
        self.mids.insert((p, y), m);
        m
    }

    fn insert_edge(&mut self, from: usize, sym: StackSymbol, to: usize) -> bool {
        if self.edges.insert((from, sym, to)) {
            self.out[from].push((sym, to));
            true
        } else {
            false
        }
    }
}

/// Saturates the automaton of `{initial}` into one accepting every
/// configuration reachable from `initial`. `initial.stack` is top-at-right
/// and `initial.state` must be a control state of `pds`.
pub fn post_star(pds: &Pds, initial: &Configuration) -> PAutomaton {
    let p_count = pds.num_control;
    let beta = pds.stack_size;
    let mut by_head: Vec<Vec<usize>> = vec![Vec::new(); p_count * beta];
    for (i, r) in pds.rules.iter().enumerate() {
        by_head[r.from * beta + r.top].push(i);
    }

    // states: control 0..P, accepting P, then chain and mid states
    let accepting = p_count;
    let mut sat = Saturation {
        out: vec![Vec::new(); p_count + 1],
        edges: HashSet::new(),
        eps_links: HashSet::new(),
        eps_out: vec![Vec::new(); p_count],
        eps_in: vec![Vec::new(); p_count + 1],
        mids: HashMap::new(),
    };
    let mut work = VecDeque::new();

    let stack = pds_word(&initial.stack);
    if stack.is_empty() {
        work.push_back(Pending::Eps(initial.state, accepting));
    } else {
        let mut to = accepting;
        for &sym in stack[1..].iter().rev() {
            let from = sat.new_state();
            sat.insert_edge(from, sym, to);
            to = from;
        }
        work.push_back(Pending::Edge(initial.state, stack[0], to));
    }

    while let Some(item) = work.pop_front() {
        match item {
            Pending::Edge(p, sym, q) => {
                if !sat.insert_edge(p, sym, q) {
                    continue;
                }
                for &ri in &by_head[p * beta + sym] {
                    let r = &pds.rules[ri];
                    match r.push[..] {
                        [] => work.push_back(Pending::Eps(r.to, q)),
                        [y] => work.push_back(Pending::Edge(r.to, y, q)),
                        [y, z] => {
                            let m = sat.mid(r.to, y);
                            work.push_back(Pending::Edge(r.to, y, m));
                            if sat.insert_edge(m, z, q) {
                                for &src in &sat.eps_in[m] {
                                    work.push_back(Pending::Edge(src, z, q));
                                }
                            }
                        }
                        _ => unreachable!("normalized rules push at most two symbols"),
                    }
                }
            }
            Pending::Eps(p, q) => {
                if !sat.eps_links.insert((p, q)) {
                    continue;
                }
                sat.eps_out[p].push(q);
                sat.eps_in[q].push(p);
                for &(sym, t) in &sat.out[q] {
                    work.push_back(Pending::Edge(p, sym, t));
                }
            }
        }
    }

    PAutomaton {
        num_original: pds.num_original,
        num_control: p_count,
        accepting,
        out: sat.out,
        eps: sat.eps_out,
    }
}

impl PAutomaton {
    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum::<usize>() + self.eps.iter().map(Vec::len).sum::<usize>()
    }

    /// Whether configuration `(state, stack)` (top-at-right) is accepted.
    pub fn accepts(&self, state: State, stack: &[StackSymbol]) -> bool {
        if state >= self.num_control {
            return false;
        }
        let mut current: HashSet<usize> = HashSet::from([state]);
        current.extend(self.eps[state].iter().copied());
        for &sym in stack.iter().rev() {
            current = current
                .iter()
                .flat_map(|&s| {
                    self.out[s]
                        .iter()
                        .filter(move |&&(y, _)| y == sym)
                        .map(|&(_, t)| t)
                })
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.contains(&self.accepting)
    }

    fn co_reachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.out.len()];
        for (s, edges) in self.out.iter().enumerate() {
            for &(_, t) in edges {
                rev[t].push(s);
            }
        }
        for (s, targets) in self.eps.iter().enumerate() {
            for &t in targets {
                rev[t].push(s);
            }
        }
        let mut seen = vec![false; self.out.len()];
        let mut stack = vec![self.accepting];
        seen[self.accepting] = true;
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Original states `q` with some accepted `(q, w)`.
    pub fn reachable_states(&self) -> Vec<bool> {
        let co = self.co_reachable();
        co[..self.num_original].to_vec()
    }

    /// Original states `q` with `(q, ε)` accepted.
    pub fn empty_stack_states(&self) -> Vec<bool> {
        (0..self.num_original)
            .map(|q| self.eps[q].contains(&self.accepting))
            .collect()
    }
}

/// Reachable and empty-stack-reachable state sets of an RDPDA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability {
    pub reachable: Vec<bool>,
    pub empty_stack: Vec<bool>,
}

impl Reachability {
    pub fn reachable_count(&self) -> usize {
        self.reachable.iter().filter(|&&b| b).count()
    }

    pub fn empty_stack_count(&self) -> usize {
        self.empty_stack.iter().filter(|&&b| b).count()
    }

    pub fn reachable_list(&self) -> Vec<State> {
        flags_to_list(&self.reachable)
    }

    pub fn empty_stack_list(&self) -> Vec<State> {
        flags_to_list(&self.empty_stack)
    }

    /// Language emptiness for `a` under `mode`, valid because every
    /// reachable configuration is reached by reading some word.
    pub fn is_language_empty(&self, a: &Rdpda, mode: AcceptanceMode) -> bool {
        let set = match mode {
            AcceptanceMode::FinalState => &self.reachable,
            AcceptanceMode::EmptyStack => return !self.empty_stack.iter().any(|&b| b),
            AcceptanceMode::FinalStateAndEmptyStack => &self.empty_stack,
        };
        !set.iter()
            .zip(a.final_flags())
            .any(|(&reach, &fin)| reach && fin)
    }
}

fn flags_to_list(flags: &[bool]) -> Vec<State> {
    flags
        .iter()
        .enumerate()
        .filter_map(|(q, &b)| b.then_some(q))
        .collect()
}

/// Saturated automaton of the configurations reachable from the initial
/// configuration of `a`.
pub fn reachable_configurations(a: &Rdpda) -> PAutomaton {
    post_star(&normalize(a), &a.initial_configuration())
}

/// Reachability read off the post* automaton.
pub fn analyze_post_star(a: &Rdpda) -> Reachability {
    let pa = reachable_configurations(a);
    Reachability {
        reachable: pa.reachable_states(),
        empty_stack: pa.empty_stack_states(),
    }
}

/// Per `(p, γ)` summaries of what happens to a stack symbol `γ` on top in
/// state `p`: `pops` holds the states in which it can be completely popped,
/// `visits` the states met strictly before that.
#[derive(Clone, Debug)]
pub struct Summaries {
    n: usize,
    beta: usize,
    pops: Vec<FixedBitSet>,
    visits: Vec<FixedBitSet>,
}

impl Summaries {
    /// Least fixpoint over the transitions, computed on the RDPDA directly.
    /// Its cost is linear in the total push length per round, so it scales
    /// to large instances where post* over the normalized system does not.
    pub fn new(a: &Rdpda) -> Self {
        let n = a.num_states();
        let beta = a.alphabets().beta();
        let mut pops = vec![FixedBitSet::with_capacity(n); n * beta];
        let rules: Vec<_> = a.transitions().map(|(q, _, x, t)| (q * beta + x, t)).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for &(head, t) in &rules {
                let mut cur = FixedBitSet::with_capacity(n);
                cur.insert(t.target);
                for &sym in t.push.iter().rev() {
                    let mut next = FixedBitSet::with_capacity(n);
                    for c in cur.ones() {
                        next.union_with(&pops[c * beta + sym]);
                    }
                    cur = next;
                    if cur.is_clear() {
                        break;
                    }
                }
                if !cur.is_subset(&pops[head]) {
                    pops[head].union_with(&cur);
                    changed = true;
                }
            }
        }

        let mut visits: Vec<FixedBitSet> = (0..n * beta)
            .map(|i| {
                let mut v = FixedBitSet::with_capacity(n);
                v.insert(i / beta);
                v
            })
            .collect();
        changed = true;
        while changed {
            changed = false;
            for &(head, t) in &rules {
                let mut seen = FixedBitSet::with_capacity(n);
                let mut cur = FixedBitSet::with_capacity(n);
                cur.insert(t.target);
                for &sym in t.push.iter().rev() {
                    let mut next = FixedBitSet::with_capacity(n);
                    for c in cur.ones() {
                        seen.union_with(&visits[c * beta + sym]);
                        next.union_with(&pops[c * beta + sym]);
                    }
                    cur = next;
                }
                if !seen.is_subset(&visits[head]) {
                    visits[head].union_with(&seen);
                    changed = true;
                }
            }
        }
        Self { n, beta, pops, visits }
    }

    /// States where `top` can be popped starting from `state`.
    pub fn pops(&self, state: State, top: StackSymbol) -> Vec<State> {
        self.pops[state * self.beta + top].ones().collect()
    }

    /// Reachable and empty-stack-reachable states from `(state, stack)`.
    pub fn reachability_from(&self, state: State, stack: &[StackSymbol]) -> Reachability {
        let n = self.n;
        let mut seen = FixedBitSet::with_capacity(n);
        let mut cur = FixedBitSet::with_capacity(n);
        cur.insert(state);
        for &sym in stack.iter().rev() {
            let mut next = FixedBitSet::with_capacity(n);
            for c in cur.ones() {
                seen.union_with(&self.visits[c * self.beta + sym]);
                next.union_with(&self.pops[c * self.beta + sym]);
            }
            cur = next;
        }
        seen.union_with(&cur);
        let flags = |b: &FixedBitSet| (0..n).map(|q| b.contains(q)).collect();
        Reachability {
            reachable: flags(&seen),
            empty_stack: flags(&cur),
        }
    }
}

/// Reachable and empty-stack-reachable states of `a`, from the stack
/// summaries. Agrees with [`analyze_post_star`].
pub fn analyze(a: &Rdpda) -> Reachability {
    let init = a.initial_configuration();
    Summaries::new(a).reachability_from(init.state, &init.stack)
}

pub fn reachable_states(a: &Rdpda) -> Vec<State> {
    analyze(a).reachable_list()
}

pub fn empty_stack_reachable_states(a: &Rdpda) -> Vec<State> {
    analyze(a).empty_stack_list()
}

pub fn is_language_empty(a: &Rdpda, mode: AcceptanceMode) -> bool {
    analyze(a).is_language_empty(a, mode)
}

/// Configurations found by breadth-first search with stack height at most
/// `max_stack`. `closed` is set when no successor ever exceeded the bound,
/// in which case `configurations` is exactly the reachable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedReach {
    pub configurations: HashSet<Configuration>,
    pub closed: bool,
}

pub fn bounded_reach(a: &Rdpda, max_stack: usize) -> BoundedReach {
    let start = a.initial_configuration();
    let mut closed = start.stack.len() <= max_stack;
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    if closed {
        seen.insert(start.clone());
        queue.push_back(start);
    }
    while let Some(c) = queue.pop_front() {
        for letter in 0..a.alphabets().alpha() {
            let Some(next) = a.step(&c, letter) else {
                continue;
            };
            if next.stack.len() > max_stack {
                closed = false;
            } else if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    BoundedReach {
        configurations: seen,
        closed,
    }
}
