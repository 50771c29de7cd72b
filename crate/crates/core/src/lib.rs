//! Semi-simple splicing systems over regular initial languages: the
//! automata constructions for the languages they generate, a bounded
//! brute-force closure oracle for the splicing semantics, parametric
//! lower-bound witness families, and an experiment harness that measures
//! minimal DFA sizes against the closed-form state-complexity bounds.
//!
//! A semi-simple `(i,j)`-splicing system is a triple of an alphabet, a set
//! of markers `M ⊆ Σ × Σ` and a regular initial language. Each marker
//! `(a, b)` names a rule that cuts one word at an `a`-occurrence, a second
//! word at a `b`-occurrence and recombines prefix with suffix; the variant
//! tag `(i,j)` fixes which of the two letters survive at the junction. The
//! generated language is the closure of the initial language under all
//! rules; it is regular, and this crate builds deterministic automata for
//! it along two independent routes so they can be checked against each
//! other and against the word-level closure.

pub mod constructions;
pub mod dfa;
pub mod error;
pub mod format;
pub mod lab;
pub mod limits;
pub mod nfa;
pub mod splicing;
pub mod state_set;
pub mod symbol;
pub mod witnesses;
mod words;

pub use constructions::{
    closure_23, construct, construct_dfa_14, construct_dfa_23, construct_nfa_13,
    construct_nfa_14, construct_nfa_24, construct_raw, eliminate_eps, iterative_eps_build,
    ConstructionPath, EpsNfa, Role,
};
pub use dfa::{Dfa, PartialDfa};
pub use error::{Error, Result};
pub use limits::ResourceLimits;
pub use nfa::Nfa;
pub use splicing::{
    closure_bounded, sigma_step, splice, Diagnostic, Marker, Severity, SplicingSystem, Variant,
    WordSet,
};
pub use state_set::StateSet;
pub use symbol::{Alphabet, Symbol};
pub use witnesses::FamilyId;
