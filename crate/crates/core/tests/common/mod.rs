//! Brute-force oracles, deliberately independent of the library's
//! enumeration and tableau machinery: terms are found by filtering raw
//! strings, incidence by exhaustively replaying substitutions.

// each test binary compiles this module and uses a subset of it
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use termcat_core::{
    enumerate_iterates, parse_polish, render_polish, Limits, Signature,
};

/// Every order-`order` iterate word, found by generating all strings over
/// the alphabet in the feasible length range and keeping the ones that parse
/// to a constant-free term of the right order.
pub fn filter_enumerated_words(sig: &Signature, order: usize) -> BTreeSet<String> {
    let mut alphabet: Vec<char> = sig.ops().iter().map(|op| op.symbol).collect();
    alphabet.push('x');
    let min_len = order + (sig.min_arity() - 1) * order + 1;
    let max_len = order + (sig.max_arity() - 1) * order + 1;

    let mut found = BTreeSet::new();
    for len in min_len..=max_len {
        let mut idxs = vec![0usize; len];
        loop {
            let candidate: String = idxs.iter().map(|&i| alphabet[i]).collect();
            if let Ok(term) = parse_polish(&candidate, sig) {
                if term.order() == order {
                    found.insert(candidate);
                }
            }
            let mut pos = len;
            let mut rolled_over = true;
            while pos > 0 {
                pos -= 1;
                idxs[pos] += 1;
                if idxs[pos] < alphabet.len() {
                    rolled_over = false;
                    break;
                }
                idxs[pos] = 0;
            }
            if rolled_over {
                break;
            }
        }
    }
    found
}

/// All ordered pairs of order-`order` words that arise from one identical
/// substitution applied to (possibly different) order-`order-1` iterates.
/// Replays every (parent, place, generator) combination directly.
pub fn replay_incidence_pairs(sig: &Signature, order: usize) -> BTreeSet<(String, String)> {
    let limits = Limits::default();
    let parents = enumerate_iterates(sig, order - 1, &limits).unwrap();
    let max_places = parents
        .iter()
        .map(|t| t.variable_places().unwrap())
        .max()
        .unwrap();

    let mut pairs = BTreeSet::new();
    for place in 1..=max_places {
        for op in 0..sig.len() {
            let line: Vec<String> = parents
                .iter()
                .filter(|t| t.variable_places().unwrap() >= place)
                .map(|t| render_polish(&t.substitute_at_place(place, op, sig).unwrap(), sig))
                .collect();
            for a in &line {
                for b in &line {
                    pairs.insert((a.clone(), b.clone()));
                }
            }
        }
    }
    pairs
}

/// How often each order-`order` word arises across all substitutions.
pub fn replay_multiplicities(sig: &Signature, order: usize) -> BTreeMap<String, u64> {
    let limits = Limits::default();
    let parents = enumerate_iterates(sig, order - 1, &limits).unwrap();
    let mut counts = BTreeMap::new();
    for parent in &parents {
        let places = parent.variable_places().unwrap();
        for place in 1..=places {
            for op in 0..sig.len() {
                let child = parent.substitute_at_place(place, op, sig).unwrap();
                *counts.entry(render_polish(&child, sig)).or_insert(0) += 1;
            }
        }
    }
    counts
}
