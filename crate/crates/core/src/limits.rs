/// Size guards for operations whose output grows like Catalan numbers.
///
/// Enumerations, tableaux and incidence matrices blow up quickly with the
/// order; callers that want to go past the defaults must say so explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of terms a single enumeration or language level may hold.
    pub max_terms: u64,
    /// Largest number of tableau cells (lines x columns).
    pub max_cells: u64,
    /// Largest number of incidence matrix bits (distinct iterates squared).
    pub max_bits: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_terms: 10_000_000,
            max_cells: 10_000_000,
            max_bits: 100_000_000,
        }
    }
}

impl Limits {
    /// No guards at all; the caller owns the blow-up risk.
    pub fn unlimited() -> Self {
        Limits {
            max_terms: u64::MAX,
            max_cells: u64::MAX,
            max_bits: u64::MAX,
        }
    }
}
