use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Leaf character for the single variable.
pub const VARIABLE_LEAF: char = 'x';
/// Leaf character for the projection constant.
pub const CONSTANT_LEAF: char = 'c';

/// One operation of the algebra: a single printable symbol and its arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Operation {
    pub symbol: char,
    pub arity: usize,
}

/// An ordered list of operations.
///
/// The order is significant: it drives tableau line order and canonical
/// labels. Symbols are pairwise distinct, single printable characters, and
/// never the reserved leaves 'x' / 'c'. Arities are at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<Operation>,
}

impl Signature {
    /// Validates and builds a signature from `(symbol, arity)` pairs.
    pub fn new(specs: impl IntoIterator<Item = (char, usize)>) -> Result<Self> {
        let mut ops = Vec::new();
        for (symbol, arity) in specs {
            if symbol == VARIABLE_LEAF || symbol == CONSTANT_LEAF {
                return Err(Error::ReservedSymbol(symbol));
            }
            if symbol.is_whitespace() || symbol.is_control() {
                return Err(Error::UnprintableSymbol(symbol));
            }
            if arity < 1 {
                return Err(Error::ArityTooSmall { symbol, arity });
            }
            if ops.iter().any(|op: &Operation| op.symbol == symbol) {
                return Err(Error::DuplicateSymbol(symbol));
            }
            ops.push(Operation { symbol, arity });
        }
        if ops.is_empty() {
            return Err(Error::EmptySignature);
        }
        Ok(Signature { ops })
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    /// Number of operations.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].arity
    }

    pub fn symbol(&self, op: usize) -> char {
        self.ops[op].symbol
    }

    pub fn index_of(&self, symbol: char) -> Option<usize> {
        self.ops.iter().position(|op| op.symbol == symbol)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|op| op.arity).max().unwrap_or(0)
    }

    pub fn min_arity(&self) -> usize {
        self.ops.iter().map(|op| op.arity).min().unwrap_or(0)
    }

    /// True when every operation is binary.
    pub fn all_binary(&self) -> bool {
        self.ops.iter().all(|op| op.arity == 2)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", op.symbol, op.arity)?;
        }
        Ok(())
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Parses the `SYM:ARITY[,SYM:ARITY...]` spec used on the command line.
    fn from_str(s: &str) -> Result<Self> {
        let mut specs = Vec::new();
        for part in s.split(',') {
            let (sym, arity) = part
                .split_once(':')
                .ok_or_else(|| Error::SpecSyntax(part.to_string()))?;
            let mut chars = sym.chars();
            let symbol = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(Error::SpecSyntax(part.to_string())),
            };
            let arity: usize = arity
                .parse()
                .map_err(|_| Error::SpecSyntax(part.to_string()))?;
            specs.push((symbol, arity));
        }
        Signature::new(specs)
    }
}
