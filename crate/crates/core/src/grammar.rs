use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::counting::structure_catalan;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::signature::Signature;
use crate::term::{compositions, enumerate_iterates, render_polish, Word};

/// One derivation rule: from any `arity` words already in the language, the
/// operation's symbol followed by their concatenation is in the language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Production {
    pub op: usize,
    pub arity: usize,
}

/// The word grammar of a signature: start word `x`, one production per
/// operation. Its language, stratified by the number of operation symbols,
/// is exactly the set of iterate words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterateGrammar {
    sig: Signature,
    start: Word,
    productions: Vec<Production>,
}

impl IterateGrammar {
    pub fn from_signature(sig: &Signature) -> Self {
        let productions = sig
            .ops()
            .iter()
            .enumerate()
            .map(|(op, spec)| Production {
                op,
                arity: spec.arity,
            })
            .collect();
        IterateGrammar {
            sig: sig.clone(),
            start: crate::signature::VARIABLE_LEAF.to_string(),
            productions,
        }
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Level-wise closure: level 0 is the start word; a word of level `m`
    /// applies a production to argument words whose levels sum to `m - 1`.
    /// Each level comes back sorted and duplicate-free.
    pub fn generate(&self, max_order: usize, limits: &Limits) -> Result<Vec<Vec<Word>>> {
        let counts = structure_catalan(&self.sig, max_order);
        let predicted = counts.get(max_order);
        if *predicted > BigUint::from(limits.max_terms) {
            return Err(Error::ResourceCap {
                predicted: predicted.clone(),
                cap: limits.max_terms,
            });
        }

        let mut levels: Vec<Vec<Word>> = vec![vec![self.start.clone()]];
        for m in 1..=max_order {
            let mut level = BTreeSet::new();
            for production in &self.productions {
                let symbol = self.sig.symbol(production.op);
                for comp in compositions(m - 1, production.arity) {
                    let sizes: Vec<usize> = comp.iter().map(|&o| levels[o].len()).collect();
                    let mut idxs = vec![0usize; comp.len()];
                    'next: loop {
                        let mut word = String::new();
                        word.push(symbol);
                        for (&o, &i) in comp.iter().zip(&idxs) {
                            word.push_str(&levels[o][i]);
                        }
                        level.insert(word);
                        let mut pos = comp.len();
                        while pos > 0 {
                            pos -= 1;
                            idxs[pos] += 1;
                            if idxs[pos] < sizes[pos] {
                                continue 'next;
                            }
                            idxs[pos] = 0;
                        }
                        break;
                    }
                }
            }
            levels.push(level.into_iter().collect());
        }
        Ok(levels)
    }
}

/// Outcome of comparing the level-`order` language against direct term
/// enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageComparison {
    pub order: usize,
    pub language_count: usize,
    pub enumeration_count: usize,
    pub only_in_language: Vec<Word>,
    pub only_in_enumeration: Vec<Word>,
}

impl LanguageComparison {
    pub fn is_equal(&self) -> bool {
        self.only_in_language.is_empty() && self.only_in_enumeration.is_empty()
    }
}

/// Generates the language to level `order` and diffs that level against the
/// rendered output of [`enumerate_iterates`].
pub fn language_equals_enumeration(
    sig: &Signature,
    order: usize,
    limits: &Limits,
) -> Result<LanguageComparison> {
    let grammar = IterateGrammar::from_signature(sig);
    let levels = grammar.generate(order, limits)?;
    let language: BTreeSet<Word> = levels[order].iter().cloned().collect();
    let enumeration: BTreeSet<Word> = enumerate_iterates(sig, order, limits)?
        .iter()
        .map(|t| render_polish(t, sig))
        .collect();
    Ok(LanguageComparison {
        order,
        language_count: language.len(),
        enumeration_count: enumeration.len(),
        only_in_language: language.difference(&enumeration).cloned().collect(),
        only_in_enumeration: enumeration.difference(&language).cloned().collect(),
    })
}
