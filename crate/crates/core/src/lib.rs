//! Multi-agent belief engine.
//!
//! Evaluates formulas of a modal belief/revision language against
//! vectors of concrete epistemic states, synthesizes and ranks
//! explanations for designated explainees from designated explainers'
//! perspectives, detects belief discrepancies, and checks whether one
//! agent's model of another is adequate - with an independent
//! brute-force oracle verifying the whole engine at desk scale.
//!
//! - [`formula`]: the language, its parser and printer.
//! - [`semantics`]: epistemic state towers and the satisfaction relation.
//! - [`revision`]: prioritized-base and Dalal revision, contraction,
//!   and the empirical AGM postulate harness.
//! - [`explain`]: explanation predicates, synthesis and ranking,
//!   discrepancies, adequacy.
//! - [`scenario`]: declarative scenario files and vector construction.
//! - [`oracle`]: the independent reference evaluator and the bounded
//!   verification suite.

pub mod error;
pub mod explain;
pub mod formula;
pub mod oracle;
pub mod revision;
pub mod scenario;
pub mod semantics;

pub use error::{Error, Result};
pub use formula::{AgentFormula, AgentId, Formula, Vocabulary};
pub use revision::RevisionOperator;
pub use scenario::Scenario;
pub use semantics::{EpistemicState, StateVector, StratifiedBase, Valuation};
