use std::str::CharIndices;

use num_bigint::BigUint;

use crate::counting::structure_catalan;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::signature::{Signature, CONSTANT_LEAF, VARIABLE_LEAF};

/// Prefix (Polish) rendering of a term. Single-character operation symbols
/// make the encoding separator-free and uniquely decodable.
pub type Word = String;

/// A rooted plane tree over a signature: internal nodes carry an operation
/// index, leaves are the variable `x` or (only for projection rendering) the
/// constant `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Variable,
    Constant,
    Apply { op: usize, args: Vec<Term> },
}

impl Term {
    pub fn apply(op: usize, args: Vec<Term>) -> Self {
        Term::Apply { op, args }
    }

    /// The order-1 iterate `O(x,...,x)` for the given operation.
    pub fn generator(op: usize, sig: &Signature) -> Self {
        Term::Apply {
            op,
            args: vec![Term::Variable; sig.arity(op)],
        }
    }

    /// Number of operation applications in the term.
    pub fn order(&self) -> usize {
        match self {
            Term::Variable | Term::Constant => 0,
            Term::Apply { args, .. } => 1 + args.iter().map(Term::order).sum::<usize>(),
        }
    }

    /// Number of variable leaves; errors if a constant leaf is present.
    ///
    /// For constant-free terms this equals `sum_i (arity_i - 1) * p_i + 1`
    /// with `p_i` the number of occurrences of operation `i`.
    pub fn variable_places(&self) -> Result<usize> {
        match self {
            Term::Variable => Ok(1),
            Term::Constant => Err(Error::ConstantPresent),
            Term::Apply { args, .. } => {
                let mut total = 0;
                for arg in args {
                    total += arg.variable_places()?;
                }
                Ok(total)
            }
        }
    }

    pub fn contains_constant(&self) -> bool {
        match self {
            Term::Variable => false,
            Term::Constant => true,
            Term::Apply { args, .. } => args.iter().any(Term::contains_constant),
        }
    }

    /// Occurrence count of every operation, indexed like `sig.ops()`.
    pub fn op_counts(&self, sig: &Signature) -> Vec<usize> {
        fn walk(term: &Term, counts: &mut [usize]) {
            if let Term::Apply { op, args } = term {
                counts[*op] += 1;
                for arg in args {
                    walk(arg, counts);
                }
            }
        }
        let mut counts = vec![0; sig.len()];
        walk(self, &mut counts);
        counts
    }

    /// Replaces the `place`-th variable leaf (1-based, prefix order) with the
    /// generator `O(x,...,x)` of the given operation.
    pub fn substitute_at_place(&self, place: usize, op: usize, sig: &Signature) -> Result<Term> {
        let places = self.variable_places()?;
        if place == 0 || place > places {
            return Err(Error::PlaceOutOfRange { place, places });
        }
        let mut remaining = place;
        Ok(self.replace_leaf(&mut remaining, op, sig))
    }

    fn replace_leaf(&self, remaining: &mut usize, op: usize, sig: &Signature) -> Term {
        match self {
            Term::Variable => {
                *remaining -= 1;
                if *remaining == 0 {
                    Term::generator(op, sig)
                } else {
                    Term::Variable
                }
            }
            Term::Constant => Term::Constant,
            Term::Apply { op: own, args } => {
                let args = args
                    .iter()
                    .map(|arg| {
                        if *remaining > 0 {
                            arg.replace_leaf(remaining, op, sig)
                        } else {
                            arg.clone()
                        }
                    })
                    .collect();
                Term::Apply { op: *own, args }
            }
        }
    }
}

/// Decodes a Polish word into the unique term it denotes.
pub fn parse_polish(word: &str, sig: &Signature) -> Result<Term> {
    let mut chars = word.char_indices();
    let term = parse_one(&mut chars, sig)?;
    match chars.next() {
        Some((at, _)) => Err(Error::TrailingInput(at)),
        None => Ok(term),
    }
}

fn parse_one(chars: &mut CharIndices<'_>, sig: &Signature) -> Result<Term> {
    match chars.next() {
        None => Err(Error::Truncated),
        Some((_, VARIABLE_LEAF)) => Ok(Term::Variable),
        Some((_, CONSTANT_LEAF)) => Ok(Term::Constant),
        Some((at, symbol)) => match sig.index_of(symbol) {
            None => Err(Error::UnknownSymbol { symbol, at }),
            Some(op) => {
                let mut args = Vec::with_capacity(sig.arity(op));
                for _ in 0..sig.arity(op) {
                    args.push(parse_one(chars, sig)?);
                }
                Ok(Term::Apply { op, args })
            }
        },
    }
}

/// Encodes a term as its Polish word.
pub fn render_polish(term: &Term, sig: &Signature) -> Word {
    let mut out = String::new();
    push_word(term, sig, &mut out);
    out
}

fn push_word(term: &Term, sig: &Signature, out: &mut String) {
    match term {
        Term::Variable => out.push(VARIABLE_LEAF),
        Term::Constant => out.push(CONSTANT_LEAF),
        Term::Apply { op, args } => {
            out.push(sig.symbol(*op));
            for arg in args {
                push_word(arg, sig, out);
            }
        }
    }
}

/// All weak compositions of `total` into `parts` nonnegative summands, in
/// ascending lexicographic order.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    debug_assert!(parts >= 1);
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut comp = Vec::with_capacity(parts);
            comp.push(first);
            comp.append(&mut rest);
            out.push(comp);
        }
    }
    out
}

/// All distinct constant-free terms of the given order, each exactly once.
///
/// Listing order is root-major: root operation by signature order, then the
/// composition of the remaining order over the children lexicographically,
/// then the children themselves recursively in the same order. The length of
/// the result equals the structure's Catalan number for that order.
pub fn enumerate_iterates(sig: &Signature, order: usize, limits: &Limits) -> Result<Vec<Term>> {
    let counts = structure_catalan(sig, order);
    let predicted = counts.get(order);
    if *predicted > BigUint::from(limits.max_terms) {
        return Err(Error::ResourceCap {
            predicted: predicted.clone(),
            cap: limits.max_terms,
        });
    }

    let mut by_order: Vec<Vec<Term>> = vec![vec![Term::Variable]];
    for m in 1..=order {
        let mut level = Vec::new();
        for (op, spec) in sig.ops().iter().enumerate() {
            for comp in compositions(m - 1, spec.arity) {
                push_products(op, &comp, &by_order, &mut level);
            }
        }
        by_order.push(level);
    }
    Ok(by_order.pop().expect("level for requested order"))
}

/// Cartesian product of child levels for one (root, composition) choice,
/// leftmost child varying slowest.
fn push_products(op: usize, comp: &[usize], by_order: &[Vec<Term>], out: &mut Vec<Term>) {
    let sizes: Vec<usize> = comp.iter().map(|&o| by_order[o].len()).collect();
    let mut idxs = vec![0usize; comp.len()];
    'next: loop {
        let args = comp
            .iter()
            .zip(&idxs)
            .map(|(&o, &i)| by_order[o][i].clone())
            .collect();
        out.push(Term::Apply { op, args });
        let mut pos = comp.len();
        while pos > 0 {
            pos -= 1;
            idxs[pos] += 1;
            if idxs[pos] < sizes[pos] {
                continue 'next;
            }
            idxs[pos] = 0;
        }
        return;
    }
}
