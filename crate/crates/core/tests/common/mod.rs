//! Brute-force oracles shared by the integration tests. Nothing here uses
//! the library's canonical forms or counting code.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rdpda::{AcceptanceMode, Alphabets, Rdpda};

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every target table of a complete structure with `n` states over `k`
/// letters, indexed `q*k + letter`.
pub fn all_tables(n: usize, k: usize) -> Vec<Vec<usize>> {
    let len = n * k;
    let total = n.pow(len as u32);
    (0..total)
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let t = code % n;
                    code /= n;
                    t
                })
                .collect()
        })
        .collect()
}

pub fn accessible_from(table: &[usize], n: usize, k: usize, init: usize) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![init];
    seen[init] = true;
    while let Some(q) = stack.pop() {
        for &t in &table[q * k..(q + 1) * k] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Isomorphism-invariant key: the least relabelled table over all
/// relabellings sending the initial state to 0.
pub fn table_key(table: &[usize], n: usize, k: usize, init: usize) -> Vec<usize> {
    permutations(n)
        .into_iter()
        .filter(|p| p[init] == 0)
        .map(|p| {
            let mut out = vec![0; n * k];
            for q in 0..n {
                for a in 0..k {
                    out[p[q] * k + a] = p[table[q * k + a]];
                }
            }
            out
        })
        .min()
        .unwrap()
}

/// Number of isomorphism classes of accessible complete structures.
pub fn brute_force_classes(n: usize, k: usize) -> usize {
    let mut keys = HashSet::new();
    for t in all_tables(n, k) {
        if accessible_from(&t, n, k, 0) {
            keys.insert(table_key(&t, n, k, 0));
        }
    }
    keys.len()
}

/// Labelled accessible tables with initial state 0, grouped by class.
pub fn orbits(n: usize, k: usize) -> HashMap<Vec<usize>, usize> {
    let mut m = HashMap::new();
    for t in all_tables(n, k) {
        if accessible_from(&t, n, k, 0) {
            *m.entry(table_key(&t, n, k, 0)).or_insert(0) += 1;
        }
    }
    m
}

/// Weak compositions of `m` into `s` parts.
pub fn compositions(m: usize, s: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return if m == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in compositions(m - first, s - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All words of length `len` over `0..beta`.
pub fn words(len: usize, beta: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..beta).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Key of a complete RDPDA up to relabelling of states (initial state
/// first, finals included). Slots are `(q*alpha + input)*beta + top`.
pub type RdpdaKey = (Vec<(usize, Vec<usize>)>, Vec<bool>);

pub fn rdpda_key(a: &Rdpda) -> RdpdaKey {
    let n = a.num_states();
    let rho = a.alphabets().rho();
    let mut slots = vec![(0, vec![]); n * rho];
    for (q, i, x, t) in a.transitions() {
        slots[q * rho + i * a.alphabets().beta() + x] = (t.target, t.push.clone());
    }
    permutations(n)
        .into_iter()
        .filter(|p| p[a.initial_state()] == 0)
        .map(|p| {
            let mut out = vec![(0, vec![]); n * rho];
            let mut fin = vec![false; n];
            for q in 0..n {
                fin[p[q]] = a.is_final(q);
                for l in 0..rho {
                    let (t, w) = &slots[q * rho + l];
                    out[p[q] * rho + l] = (p[*t], w.clone());
                }
            }
            (out, fin)
        })
        .min()
        .unwrap()
}

/// Every complete accessible RDPDA with `n` states, initial state 0 and
/// output size `m`, all states non-final, as labelled objects.
pub fn all_decorated(n: usize, alpha: usize, beta: usize, m: usize) -> Vec<Rdpda> {
    let alph = std::sync::Arc::new(Alphabets::generic(alpha, beta).unwrap());
    let rho = alpha * beta;
    let s = n * rho;
    let mut out = Vec::new();
    for t in all_tables(n, rho) {
        if !accessible_from(&t, n, rho, 0) {
            continue;
        }
        for comp in compositions(m, s) {
            let choices: Vec<Vec<Vec<usize>>> = comp.iter().map(|&l| words(l, beta)).collect();
            let mut idx = vec![0; s];
            loop {
                let mut b = Rdpda::builder(alph.clone(), n);
                for slot in 0..s {
                    let (q, l) = (slot / rho, slot % rho);
                    b = b.transition(q, l / beta, l % beta, t[slot], choices[slot][idx[slot]].clone());
                }
                out.push(b.build().unwrap());
                // odometer over word choices
                let mut j = 0;
                while j < s {
                    idx[j] += 1;
                    if idx[j] < choices[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == s {
                    break;
                }
            }
        }
    }
    out
}

/// Distinct decorated classes (finals ignored).
pub fn brute_force_decorated_classes(n: usize, alpha: usize, beta: usize, m: usize) -> HashSet<RdpdaKey> {
    all_decorated(n, alpha, beta, m).iter().map(rdpda_key).collect()
}

/// Language non-emptiness by trying every word up to length `max_len`.
pub fn nonempty_by_words(a: &Rdpda, mode: AcceptanceMode, max_len: usize) -> bool {
    let alpha = a.alphabets().alpha();
    (0..=max_len).any(|len| words(len, alpha).iter().any(|w| a.accepts(w, mode).unwrap()))
}

/// Pearson statistic against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

/// Pearson statistic against the given probabilities.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum()
}

/// Critical value of the chi-square distribution at significance `alpha`.
pub fn chi_square_critical(dof: usize, alpha: f64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - alpha)
}

/// Outcome of comparing both decision procedures with bounded search on
/// one automaton.
#[derive(Debug, Default)]
pub struct DifferentialTally {
    pub instances: usize,
    pub closed: usize,
    pub failures: Vec<String>,
}

/// Samples `count` automata with n <= 4, alpha, beta <= 2 (alpha*beta >= 2)
/// and output size <= 6, and checks post* and the summary procedure against
/// bounded breadth-first search with stack bound `bound`.
pub fn differential_corpus(count: usize, seed: u64, bound: usize) -> DifferentialTally {
    use rand::Rng;
    use rdpda::reachability::{analyze, analyze_post_star, bounded_reach, normalize, post_star};
    use rdpda::samplers::{OutputSize, Pipeline, PipelineConfig};

    let mut tally = DifferentialTally::default();
    let mut rng = rdpda::rng::stream_rng(seed, 0);
    while tally.instances < count {
        let (alpha, beta) = [(1, 2), (2, 1), (2, 2)][rng.random_range(0..3)];
        let n = rng.random_range(1..=4);
        let m = rng.random_range(0..=6);
        let alph = Alphabets::generic(alpha, beta).unwrap();
        let p = Pipeline::new(PipelineConfig::new(n, alph, OutputSize::Explicit(m))).unwrap();
        let a = p.sample_rdpda(&mut rng);
        tally.instances += 1;

        let bfs = bounded_reach(&a, bound);
        let mut seen_states = vec![false; n];
        let mut seen_empty = vec![false; n];
        for c in &bfs.configurations {
            seen_states[c.state] = true;
            if c.stack.is_empty() {
                seen_empty[c.state] = true;
            }
        }
        let pa = post_star(&normalize(&a), &a.initial_configuration());
        let label = rdpda::io::rdpda_to_json(&a);
        for (name, r) in [("post*", analyze_post_star(&a)), ("summaries", analyze(&a))] {
            let ok = if bfs.closed {
                r.reachable == seen_states && r.empty_stack == seen_empty
            } else {
                (0..n).all(|q| (!seen_states[q] || r.reachable[q]) && (!seen_empty[q] || r.empty_stack[q]))
            };
            if !ok {
                tally.failures.push(format!("{name} disagrees on {label}"));
            }
        }
        if bfs.closed {
            tally.closed += 1;
            // configuration level: the saturated automaton accepts exactly
            // the configurations found by search
            for q in 0..n {
                for len in 0..=bound + 1 {
                    for w in words(len, beta) {
                        let c = rdpda::Configuration::new(q, w.clone());
                        if pa.accepts(q, &w) != bfs.configurations.contains(&c) {
                            tally.failures.push(format!("configuration ({q}, {w:?}) on {label}"));
                        }
                    }
                }
            }
        } else if !bfs.configurations.iter().all(|c| pa.accepts(c.state, &c.stack)) {
            tally.failures.push(format!("post* misses a searched configuration on {label}"));
        }
    }
    tally
}
