use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::signature::{Signature, CONSTANT_LEAF, VARIABLE_LEAF};
use crate::term::Word;

/// One binary projection of a higher-arity operation: the two variable
/// places are kept and the remaining `arity - 2` places are pinned to the
/// constant. `leading`/`middle`/`trailing` count the constants before,
/// between and after the two variables; they sum to `arity - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionSpec {
    pub source_op: usize,
    pub leading: usize,
    pub middle: usize,
    pub trailing: usize,
    pub derived_symbol: char,
}

/// A fully binary signature derived from a mixed-arity one, with the
/// provenance of every derived operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedSignature {
    pub source: Signature,
    pub signature: Signature,
    pub specs: Vec<ProjectionSpec>,
}

impl ProjectedSignature {
    /// Provenance entry of a derived symbol.
    pub fn spec_for(&self, derived: char) -> Option<&ProjectionSpec> {
        self.specs.iter().find(|s| s.derived_symbol == derived)
    }

    /// `[{"derived", "source", "ijk", "definition"}, ...]`
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .specs
            .iter()
            .map(|spec| {
                json!({
                    "derived": spec.derived_symbol.to_string(),
                    "source": self.source.symbol(spec.source_op).to_string(),
                    "ijk": [spec.leading, spec.middle, spec.trailing],
                    "definition": render_projection(spec, &self.source),
                })
            })
            .collect();
        Value::Array(entries)
    }
}

/// Fresh symbols for derived operations: lowercase letters without the
/// reserved leaves, then digits.
pub fn default_symbol_pool() -> Vec<char> {
    ('a'..='z')
        .filter(|&ch| ch != VARIABLE_LEAF && ch != CONSTANT_LEAF)
        .chain('0'..='9')
        .collect()
}

fn triples(arity: usize) -> Vec<(usize, usize, usize)> {
    // all i + j + k = arity - 2, ascending lexicographic on (i, j)
    let rest = arity - 2;
    let mut out = Vec::new();
    for leading in 0..=rest {
        for middle in 0..=rest - leading {
            out.push((leading, middle, rest - leading - middle));
        }
    }
    out
}

/// All `C(arity, 2)` binary projections of one operation. An arity-2
/// operation projects to itself and keeps its symbol; higher arities draw
/// fresh symbols from the start of the default pool.
pub fn binary_projections(sig: &Signature, op: usize) -> Result<Vec<ProjectionSpec>> {
    let arity = sig.arity(op);
    if arity < 2 {
        return Err(Error::ProjectionNeedsArityTwo {
            symbol: sig.symbol(op),
            arity,
        });
    }
    if arity == 2 {
        return Ok(vec![ProjectionSpec {
            source_op: op,
            leading: 0,
            middle: 0,
            trailing: 0,
            derived_symbol: sig.symbol(op),
        }]);
    }
    let taken: Vec<char> = sig.ops().iter().map(|o| o.symbol).collect();
    let pool: Vec<char> = default_symbol_pool()
        .into_iter()
        .filter(|ch| !taken.contains(ch))
        .collect();
    let triples = triples(arity);
    if triples.len() > pool.len() {
        return Err(Error::SymbolPoolExhausted {
            needed: triples.len(),
            available: pool.len(),
        });
    }
    Ok(triples
        .into_iter()
        .zip(pool)
        .map(|((leading, middle, trailing), derived_symbol)| ProjectionSpec {
            source_op: op,
            leading,
            middle,
            trailing,
            derived_symbol,
        })
        .collect())
}

/// Projects every operation, producing an all-binary signature ready for the
/// tableau and incidence pipeline. Arity-2 operations keep their symbols;
/// the rest are named from the default pool.
pub fn project_signature(sig: &Signature) -> Result<ProjectedSignature> {
    project_signature_with_pool(sig, &default_symbol_pool())
}

/// As [`project_signature`] with an explicit fresh-symbol pool.
pub fn project_signature_with_pool(sig: &Signature, pool: &[char]) -> Result<ProjectedSignature> {
    if let Some(op) = sig.ops().iter().find(|op| op.arity < 2) {
        return Err(Error::ProjectionNeedsArityTwo {
            symbol: op.symbol,
            arity: op.arity,
        });
    }
    let taken: Vec<char> = sig.ops().iter().map(|o| o.symbol).collect();
    let mut fresh = pool.iter().copied().filter(|ch| {
        *ch != VARIABLE_LEAF && *ch != CONSTANT_LEAF && !taken.contains(ch)
    });
    let needed: usize = sig
        .ops()
        .iter()
        .filter(|op| op.arity > 2)
        .map(|op| op.arity * (op.arity - 1) / 2)
        .sum();

    let mut specs = Vec::new();
    for (op, spec) in sig.ops().iter().enumerate() {
        if spec.arity == 2 {
            specs.push(ProjectionSpec {
                source_op: op,
                leading: 0,
                middle: 0,
                trailing: 0,
                derived_symbol: spec.symbol,
            });
            continue;
        }
        for (leading, middle, trailing) in triples(spec.arity) {
            let derived_symbol = fresh.next().ok_or(Error::SymbolPoolExhausted {
                needed,
                available: pool
                    .iter()
                    .filter(|ch| {
                        **ch != VARIABLE_LEAF && **ch != CONSTANT_LEAF && !taken.contains(ch)
                    })
                    .count(),
            })?;
            specs.push(ProjectionSpec {
                source_op: op,
                leading,
                middle,
                trailing,
                derived_symbol,
            });
        }
    }

    let signature = Signature::new(specs.iter().map(|s| (s.derived_symbol, 2)))?;
    Ok(ProjectedSignature {
        source: sig.clone(),
        signature,
        specs,
    })
}

/// Defining word of a projection: source symbol, `leading` constants, `x`,
/// `middle` constants, `x`, `trailing` constants.
pub fn render_projection(spec: &ProjectionSpec, sig: &Signature) -> Word {
    let mut word = String::with_capacity(sig.arity(spec.source_op) + 1);
    word.push(sig.symbol(spec.source_op));
    for _ in 0..spec.leading {
        word.push(CONSTANT_LEAF);
    }
    word.push(VARIABLE_LEAF);
    for _ in 0..spec.middle {
        word.push(CONSTANT_LEAF);
    }
    word.push(VARIABLE_LEAF);
    for _ in 0..spec.trailing {
        word.push(CONSTANT_LEAF);
    }
    word
}
