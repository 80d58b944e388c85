//! Signatures, formulas, identity patterns, parsing, and normal forms.

mod formula;
mod normal;
mod parser;
mod pattern;
mod signature;

pub use formula::{expand_fo_quantifier, Formula, Quantifier, Var};
pub use normal::{flatten, normalize_under, NormalAtom, NormalizedFormula};
pub use parser::parse_formula;
pub use pattern::IdentityPattern;
pub use signature::{Relation, Signature};
