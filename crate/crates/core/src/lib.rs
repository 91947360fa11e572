//! Controlled system synthesis for Kripke structures with labeled
//! transitions.
//!
//! A plant model ([`lts::KripkeLTS`]) is restricted so that it satisfies a
//! requirement ([`formula::Formula`]) while only controllable transitions
//! are removed, and as little behavior as possible is removed. The crate
//! also contains the model checker, the simulation/partial-bisimulation
//! checkers and brute-force oracles used to verify synthesis results.

pub mod cli;
pub mod formula;
pub mod lts;
pub mod oracle;
pub mod relations;
pub mod semantics;
pub mod synthesis;

pub use formula::{format_formula, parse_formula, BasicFormula, Event, Formula};
pub use lts::{parse_model, serialize_model, KripkeLTS, StateId};
pub use relations::{greatest_partial_bisimulation, greatest_simulation, PairRelation};
pub use semantics::satisfies;
pub use synthesis::{synthesize, SynthesisResult};
