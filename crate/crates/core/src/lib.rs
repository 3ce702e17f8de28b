//! A symbolic truth-predicate engine.
//!
//! The crate builds a finite universe of sentences over an interpreted
//! arithmetic base language extended with a monadic truth predicate `T`,
//! runs the monotone grounding operator `G` over subsets of the universe's
//! Gödel codes, iterates it to its least consistent fixed point, and
//! classifies every sentence as true, false, or ungrounded. A rule-driven
//! verifier cross-checks the constructive operator against an independent
//! closure oracle and the operator's order-theoretic properties.

mod coding;
mod lex;

pub mod base_lang;
pub mod classifier;
pub mod fixpoint;
pub mod operator;
pub mod syntax;
pub mod universe;
pub mod verifier;

pub use base_lang::{BaseConfig, BaseError, BaseFormula, BaseTerm};
pub use classifier::{ClassifyError, TBiconditional, Verdict};
pub use fixpoint::{FixpointError, FixpointTrace, StageOrigin};
pub use operator::{OperatorError, OperatorResult, TruthOperator};
pub use syntax::{GodelNumber, ParseError, Sentence};
pub use universe::{BuildParams, CodeSet, Universe, UniverseError};
pub use verifier::{RuleId, RuleReport};
