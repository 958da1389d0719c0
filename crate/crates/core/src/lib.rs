//! Model checking for epistemic logics with skills.
//!
//! The crate has four layers:
//!
//! * [`syntax`] — the formula language: fifteen primitive constructors
//!   (atoms, `~`, `->`, individual knowledge, four group-knowledge operators,
//!   four capability updates, three skill quantifiers), a concrete-syntax
//!   parser, a canonical renderer, and structural analyses.
//! * [`model`] — skill-labeled models: worlds, unordered skill-labeled
//!   edges, agent capabilities, and a valuation, with a canonical JSON form.
//! * [`checker`] — the evaluator (`truth_set`, `holds`), an independent
//!   iterated-everyone-knows oracle for common knowledge, and the
//!   knowing-how readings (de dicto, explicit/implicit de re).
//! * [`ueg`] — undirected edge geography: a brute-force game solver, the
//!   translation of a rooted graph into a model and formula whose truth
//!   matches the game's winner, and a cross-check between the two.

pub mod checker;
pub mod model;
pub mod syntax;
pub mod ueg;

pub use checker::{holds, truth_set, truth_set_with, EvalOptions, TruthSet};
pub use model::{CapabilityUpdate, Model, ModelError, Skills};
pub use syntax::{
    formula_length, parse_formula, render_formula, AgentId, AtomId, Formula, Fragment,
    FragmentLetter, Group, InvalidToken, NodeId, ParseError, SkillId, SkillSet, WorldId,
};
pub use ueg::{
    induced_formula, induced_model, reduction_check, reduction_check_with, ueg_winner, GraphError,
    InducedModel, Player, ReductionReport, ReductionVariant, RootedGraph, UegError,
};
