//! Iterates of algebras with several finitary operations: exact generalized
//! Catalan counts, substitution tableaux, and incidence matrices of formally
//! reducible identities.
//!
//! Terms are rooted plane trees over a [`Signature`] and travel as prefix
//! (Polish) words like `VxWxx`. The central pipeline builds the order-`n`
//! tableau by substituting each generator `O(x,...,x)` into every variable
//! place of every order-`n-1` iterate, labels the distinct results, and reads
//! formally reducible identities off shared tableau lines:
//!
//! ```
//! use termcat_core::{verify_theorem, Limits, Signature};
//!
//! let sig = Signature::new([('V', 2), ('W', 2)])?;
//! let report = verify_theorem(&sig, 3, &Limits::default())?;
//! assert!(report.all_rows_match);
//! assert_eq!(report.observed_total.to_string(), "368");
//! # Ok::<(), termcat_core::Error>(())
//! ```

pub mod counting;
pub mod error;
pub mod grammar;
pub mod incidence;
pub mod limits;
pub mod projection;
pub mod signature;
pub mod tableau;
pub mod term;

pub use counting::{
    binomial, catalan_asymptotic_ratio, classical_catalan, composition_count, fuss_catalan,
    functional_equation_residual, lambda_binary_closed, structure_catalan, CountSequence,
};
pub use error::{Error, Result};
pub use grammar::{language_equals_enumeration, IterateGrammar, LanguageComparison, Production};
pub use incidence::{
    reducible_count_via_histogram, render_exhibit, theorem_row_sum, verify_theorem, Frequency,
    IncidenceMatrix, RowCheck, TheoremReport,
};
pub use limits::Limits;
pub use projection::{
    binary_projections, project_signature, project_signature_with_pool, render_projection,
    ProjectedSignature, ProjectionSpec,
};
pub use signature::{Operation, Signature, CONSTANT_LEAF, VARIABLE_LEAF};
pub use tableau::{LabelMap, MultiplicityTable, Tableau, TableauLine, TableauStats};
pub use term::{enumerate_iterates, parse_polish, render_polish, Term, Word};

pub use num_bigint::{BigInt, BigUint};
