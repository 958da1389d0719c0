//! A queryable view of the one-step and chained group accessibility induced
//! by a formula's common- and mutual-knowledge operators.
//!
//! For a group `G`, the one-step relation connects `w` to `u` when some
//! member's capability set is contained in the edge label between them; the
//! chained relation is reachability along one or more such steps. Common
//! knowledge of the formula's groups is exactly truth along the chained
//! relation, which is why the view tracks the groups under `C` and `E`.

use std::collections::BTreeSet;

use crate::model::{Model, ModelError};
use crate::syntax::{Formula, Group, WorldId};

/// Group edges of a model, restricted to the groups a formula chains over.
pub struct GroupEdgeView<'m> {
    model: &'m Model,
    groups: BTreeSet<Group>,
}

impl<'m> GroupEdgeView<'m> {
    /// Tracks the groups occurring under `C` or `E` in `f`.
    pub fn new(model: &'m Model, f: &Formula) -> Self {
        GroupEdgeView {
            model,
            groups: f.reachability_groups(),
        }
    }

    /// The tracked groups.
    pub fn groups(&self) -> &BTreeSet<Group> {
        &self.groups
    }

    fn step(&self, g: &Group, w: &WorldId, u: &WorldId) -> Result<bool, ModelError> {
        let edge = self.model.edge_skills(w, u)?;
        Ok(g.iter().any(|a| self.model.capabilities(a).is_subset(edge)))
    }

    /// Whether `g` connects `w` and `u` in one step. Untracked groups connect
    /// nothing.
    pub fn one_step(&self, g: &Group, w: &WorldId, u: &WorldId) -> Result<bool, ModelError> {
        Ok(self.groups.contains(g) && self.step(g, w, u)?)
    }

    /// Whether `g` connects `w` to `u` along one or more steps. Because the
    /// path must have length at least one, `chained(g, w, w)` asks for a
    /// cycle through `w`, not for reflexivity.
    pub fn chained(&self, g: &Group, w: &WorldId, u: &WorldId) -> Result<bool, ModelError> {
        // Validate both endpoints up front so untracked groups still report
        // unknown worlds.
        self.model.edge_skills(w, u)?;
        if !self.groups.contains(g) {
            return Ok(false);
        }
        let mut reached: BTreeSet<&WorldId> = BTreeSet::new();
        let mut frontier: Vec<&WorldId> = Vec::new();
        for x in self.model.worlds() {
            if self.step(g, w, x)? {
                if x == u {
                    return Ok(true);
                }
                reached.insert(x);
                frontier.push(x);
            }
        }
        while let Some(x) = frontier.pop() {
            for y in self.model.worlds() {
                if !reached.contains(y) && self.step(g, x, y)? {
                    if y == u {
                        return Ok(true);
                    }
                    reached.insert(y);
                    frontier.push(y);
                }
            }
        }
        Ok(false)
    }
}
