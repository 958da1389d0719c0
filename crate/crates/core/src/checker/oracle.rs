//! An independently derived evaluation of common knowledge, used to
//! cross-check the evaluator's reachability-based one.
//!
//! Common knowledge is the conjunction of every finite iteration of the
//! "everyone in the group knows" operator. On a model with `n` worlds the
//! iterations stabilize within `n` steps, so this oracle literally applies
//! the one-step operator `n` times and intersects the stages — no
//! reachability computation, no shared machinery with the evaluator's
//! common-knowledge path beyond the evaluation of the target formula itself.

use std::collections::BTreeSet;

use crate::model::Model;
use crate::syntax::{Formula, Group, WorldId};

use super::{truth_set, TruthSet};

/// Worlds where every member of `g` knows that `target` holds at every world
/// reachable... — more plainly: one application of "everyone in `g` knows".
fn everyone_knows(m: &Model, g: &Group, target: &BTreeSet<WorldId>) -> BTreeSet<WorldId> {
    m.worlds()
        .iter()
        .filter(|w| {
            g.iter().all(|a| {
                let cap = m.capabilities(a);
                m.worlds().iter().all(|u| {
                    !cap.is_subset(m.edge_skills(w, u).expect("model worlds")) || target.contains(u)
                })
            })
        })
        .cloned()
        .collect()
}

/// The worlds where `f` is common knowledge among `g`, computed as the
/// intersection of the first `|W|` iterations of [`everyone_knows`].
pub fn common_oracle(m: &Model, g: &Group, f: &Formula) -> TruthSet {
    let mut stage = truth_set(m, f).into_worlds();
    let mut acc: Option<BTreeSet<WorldId>> = None;
    for _ in 0..m.world_count() {
        stage = everyone_knows(m, g, &stage);
        acc = Some(match acc {
            None => stage.clone(),
            Some(prev) => prev.intersection(&stage).cloned().collect(),
        });
    }
    acc.expect("models have at least one world")
        .into_iter()
        .collect()
}
