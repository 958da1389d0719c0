//! Evaluation of formulas over models: truth sets, single-world queries, a
//! separately derived oracle for common knowledge, and the three knowing-how
//! readings (de dicto, explicit de re, implicit de re).

mod dere;
mod eval;
mod groups;
mod oracle;

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{Model, ModelError};
use crate::syntax::{Formula, WorldId};

pub use dere::{
    de_dicto, de_dicto_formula, explicit_de_re, explicit_de_re_formula, implicit_de_re,
    implicit_de_re_formula,
};
pub use groups::GroupEdgeView;
pub use oracle::common_oracle;

/// Evaluation knobs. The default is the standard semantics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Extra fresh skills added to every quantifier's enumeration universe.
    /// The bound is already representative with one fresh skill, so any
    /// positive value must not change results; tests use this to probe that
    /// stability.
    pub extra_fresh: usize,
}

/// The set of worlds where a formula holds.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TruthSet(BTreeSet<WorldId>);

impl TruthSet {
    pub fn contains(&self, w: &WorldId) -> bool {
        self.0.contains(w)
    }

    pub fn worlds(&self) -> &BTreeSet<WorldId> {
        &self.0
    }

    pub fn into_worlds(self) -> BTreeSet<WorldId> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &WorldId> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<WorldId> for TruthSet {
    fn from_iter<I: IntoIterator<Item = WorldId>>(iter: I) -> Self {
        TruthSet(iter.into_iter().collect())
    }
}

impl IntoIterator for TruthSet {
    type Item = WorldId;
    type IntoIter = std::collections::btree_set::IntoIter<WorldId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl fmt::Display for TruthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", itertools::join(self.0.iter(), ", "))
    }
}

/// The worlds of `m` where `f` holds.
pub fn truth_set(m: &Model, f: &Formula) -> TruthSet {
    truth_set_with(m, f, &EvalOptions::default())
}

/// [`truth_set`] with evaluation knobs.
pub fn truth_set_with(m: &Model, f: &Formula, options: &EvalOptions) -> TruthSet {
    TruthSet(eval::Engine::new(m, f, options.extra_fresh).run())
}

/// Whether `f` holds at world `w` of `m`. Errors when `w` is not a world of
/// `m`; evaluation itself is total.
pub fn holds(m: &Model, w: &WorldId, f: &Formula) -> Result<bool, ModelError> {
    if !m.contains_world(w) {
        return Err(ModelError::UnknownWorld(w.clone()));
    }
    Ok(truth_set(m, f).contains(w))
}
