use num_bigint::BigUint;
use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature needs at least one operation")]
    EmptySignature,
    #[error("duplicate operation symbol '{0}'")]
    DuplicateSymbol(char),
    #[error("symbol '{0}' is reserved for leaf nodes")]
    ReservedSymbol(char),
    #[error("operation '{symbol}' has arity {arity}, minimum is 1")]
    ArityTooSmall { symbol: char, arity: usize },
    #[error("symbol {0:?} is not printable")]
    UnprintableSymbol(char),
    #[error("cannot parse signature spec {0:?}, expected SYM:ARITY[,SYM:ARITY...]")]
    SpecSyntax(String),
    #[error("unknown symbol '{symbol}' at byte {at}")]
    UnknownSymbol { symbol: char, at: usize },
    #[error("word ended before all arguments were read")]
    Truncated,
    #[error("trailing input starting at byte {0}")]
    TrailingInput(usize),
    #[error("term contains a constant leaf")]
    ConstantPresent,
    #[error("variable place {place} outside 1..={places}")]
    PlaceOutOfRange { place: usize, places: usize },
    #[error("order must be at least {min} here, got {got}")]
    OrderTooSmall { min: usize, got: usize },
    #[error("tableau construction requires every arity >= 2; '{symbol}' has arity {arity}")]
    TableauNeedsArityTwo { symbol: char, arity: usize },
    #[error("projection requires arity >= 2; '{symbol}' has arity {arity}")]
    ProjectionNeedsArityTwo { symbol: char, arity: usize },
    #[error("fresh symbol pool exhausted: needed {needed} symbols, pool had {available}")]
    SymbolPoolExhausted { needed: usize, available: usize },
    #[error("predicted size {predicted} exceeds the resource cap {cap}")]
    ResourceCap { predicted: BigUint, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
