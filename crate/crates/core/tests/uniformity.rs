mod common;

use std::collections::HashMap;
use std::sync::Arc;

use rdpda::counting::count_decorations;
use rdpda::decorator::{decorate, decorate_min_pops, sample_composition};
use rdpda::dfa_sampler::{sample_accessible_dfa, RecursiveDfaSampler};
use rdpda::reachability::analyze;
use rdpda::rng::stream_rng;
use rdpda::samplers::{OutputSize, Pipeline, PipelineConfig};
use rdpda::{AcceptanceMode, Alphabets, Rdpda, UnderlyingDfa};

use common::*;

const SIGNIFICANCE: f64 = 0.001;

fn push_words(a: &Rdpda) -> Vec<Vec<usize>> {
    a.transitions().map(|(_, _, _, t)| t.push.clone()).collect()
}

fn two_state_structure() -> UnderlyingDfa {
    let alph = Arc::new(Alphabets::generic(1, 2).unwrap());
    UnderlyingDfa::complete(alph, 0, vec![1, 0, 1, 1]).unwrap()
}

fn assert_uniform(counts: &HashMap<impl std::fmt::Debug, u64>, outcomes: usize) {
    assert_eq!(counts.len(), outcomes, "every outcome should appear");
    let c: Vec<u64> = counts.values().copied().collect();
    let stat = chi_square_uniform(&c);
    let crit = chi_square_critical(outcomes - 1, SIGNIFICANCE);
    assert!(stat < crit, "chi2 {stat:.2} >= {crit:.2}");
}

#[test]
fn compositions_are_uniform() {
    let mut rng = stream_rng(11, 0);
    let mut counts = HashMap::new();
    for _ in 0..60_000 {
        *counts.entry(sample_composition(2, 3, &mut rng).into_parts()).or_insert(0) += 1;
    }
    assert_uniform(&counts, compositions(2, 3).len());
}

#[test]
fn decorations_of_a_fixed_structure_are_uniform() {
    let d = two_state_structure();
    assert_eq!(count_decorations(4, 2, 2), 40u32.into());
    let mut rng = stream_rng(12, 0);
    let mut counts = HashMap::new();
    for _ in 0..40_000 {
        let a = decorate(&d, 2, &mut rng).unwrap();
        *counts.entry(push_words(&a)).or_insert(0) += 1;
    }
    assert_uniform(&counts, 40);
}

#[test]
fn forced_pop_decorations_follow_their_exact_law() {
    // a decoration with e empty slots arises from e of the 4 forced choices,
    // each followed by one of 24 decorations of the other 3 slots
    let d = two_state_structure();
    let mut all = Vec::new();
    for comp in compositions(2, 4) {
        let choices: Vec<Vec<Vec<usize>>> = comp.iter().map(|&l| words(l, 2)).collect();
        for a in &choices[0] {
            for b in &choices[1] {
                for c in &choices[2] {
                    for e in &choices[3] {
                        all.push(vec![a.clone(), b.clone(), c.clone(), e.clone()]);
                    }
                }
            }
        }
    }
    assert_eq!(all.len(), 40);
    let probs: Vec<f64> = all
        .iter()
        .map(|w| w.iter().filter(|x| x.is_empty()).count() as f64 / 96.0)
        .collect();
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);

    let index: HashMap<_, _> = all.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut counts = vec![0u64; all.len()];
    let mut rng = stream_rng(13, 0);
    for _ in 0..50_000 {
        let a = decorate_min_pops(&d, 2, 1, &mut rng).unwrap();
        counts[index[&push_words(&a)]] += 1;
    }
    let stat = chi_square(&counts, &probs);
    assert!(stat < chi_square_critical(all.len() - 1, SIGNIFICANCE), "chi2 {stat:.2}");
}

#[test]
fn rejection_sampler_is_uniform_over_classes() {
    let alph = Arc::new(Alphabets::generic(2, 1).unwrap());
    let mut rng = stream_rng(14, 0);
    let mut counts = HashMap::new();
    for _ in 0..60_000 {
        let (d, _) = sample_accessible_dfa(2, alph.clone(), &mut rng).unwrap();
        *counts.entry(d.targets().to_vec()).or_insert(0) += 1;
    }
    assert_uniform(&counts, brute_force_classes(2, 2));
}

#[test]
fn recursive_sampler_is_uniform_over_classes() {
    let alph = Arc::new(Alphabets::generic(2, 1).unwrap());
    let s = RecursiveDfaSampler::new(2, alph.clone()).unwrap();
    assert_eq!(*s.class_count(), brute_force_classes(2, 2).into());
    let mut rng = stream_rng(15, 0);
    let mut counts = HashMap::new();
    for _ in 0..60_000 {
        let d = s.sample(&mut rng);
        assert!(d.is_canonical());
        *counts.entry(d.targets().to_vec()).or_insert(0) += 1;
    }
    assert_uniform(&counts, 12);

    let s3 = RecursiveDfaSampler::new(3, Arc::new(Alphabets::generic(2, 1).unwrap())).unwrap();
    assert_eq!(*s3.class_count(), brute_force_classes(3, 2).into());
}

#[test]
fn conditioned_sampling_is_uniform_over_the_nonempty_subset() {
    let mode = AcceptanceMode::FinalStateAndEmptyStack;
    let mut support = HashMap::new();
    for a in all_decorated(2, 1, 2, 1) {
        for mask in 0..4u8 {
            let b = a.with_finals(vec![mask & 1 != 0, mask & 2 != 0]).unwrap();
            if nonempty_by_words(&b, mode, 8) {
                support.insert(rdpda_key(&b), 0u64);
            }
        }
    }
    assert!(!support.is_empty());

    let alph = Arc::new(Alphabets::generic(1, 2).unwrap());
    let mut cfg = PipelineConfig::new(2, alph, OutputSize::Explicit(1));
    cfg.mode = mode;
    cfg.max_rejects = 10_000;
    let p = Pipeline::new(cfg).unwrap();
    let mut rng = stream_rng(16, 0);
    for _ in 0..60_000 {
        let (a, _) = p.sample_nonempty(&mut rng).unwrap();
        *support.get_mut(&rdpda_key(&a)).expect("sample lies in the non-empty subset") += 1;
    }
    let n = support.len();
    assert_uniform(&support, n);
}

#[test]
fn library_emptiness_matches_word_search_on_small_instances() {
    for a in all_decorated(2, 1, 2, 2) {
        for mask in 0..4u8 {
            let b = a.with_finals(vec![mask & 1 != 0, mask & 2 != 0]).unwrap();
            let r = analyze(&b);
            for mode in AcceptanceMode::ALL {
                assert_eq!(!r.is_language_empty(&b, mode), nonempty_by_words(&b, mode, 10));
            }
        }
    }
}

fn accept_rate(n: usize, alpha: usize, beta: usize, samples: usize, seed: u64) -> f64 {
    let alph = Arc::new(Alphabets::generic(alpha, beta).unwrap());
    let mut rng = stream_rng(seed, n as u64);
    let mut rejects = 0u64;
    for _ in 0..samples {
        rejects += sample_accessible_dfa(n, alph.clone(), &mut rng).unwrap().1.rejects;
    }
    samples as f64 / (samples as u64 + rejects) as f64
}

#[test]
fn accept_rate_stays_bounded_for_larger_alphabets() {
    for (alpha, beta) in [(2, 2), (2, 4)] {
        for n in [10, 50, 100] {
            let r = accept_rate(n, alpha, beta, 400, 17);
            assert!(r > 0.1, "rho={} n={n}: {r}", alpha * beta);
        }
    }
}

#[test]
fn accept_rate_decays_for_two_letters() {
    // the small-alphabet regime where the bound does not hold
    let r10 = accept_rate(10, 2, 1, 400, 18);
    let r30 = accept_rate(30, 2, 1, 100, 18);
    assert!(r10 > 0.05 && r10 < 0.3, "{r10}");
    assert!(r30 < r10 / 4.0, "{r30} vs {r10}");
}
