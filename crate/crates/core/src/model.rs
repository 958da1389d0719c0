//! Skill-labeled models: worlds, an edge labeling with skill sets, agent
//! capabilities, and a valuation.
//!
//! An agent `a` cannot distinguish worlds `w` and `u` exactly when every
//! skill in `a`'s capability set appears on the edge between `w` and `u`
//! (`C(a) ⊆ E(w,u)`). Edges are unordered: the label between `w` and `u` is
//! the label between `u` and `w`, and the pair `(w,w)` labels the world's own
//! reflexive edge. Pairs without an entry carry the empty label, so an agent
//! with no capabilities cannot distinguish anything, and an agent with any
//! capability can always distinguish worlds across an unlabeled edge —
//! including `(w,w)` itself if the model omits that entry.
//!
//! Models are normalized on construction: edge entries are keyed by the
//! sorted world pair, and entries whose set is empty (edge labels, capability
//! sets, valuation rows) are dropped, since an absent entry already means the
//! empty set. Saving emits a canonical JSON document, so `load ∘ save` is the
//! identity on loaded models.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::syntax::{AgentId, AtomId, Formula, InvalidToken, SkillId, SkillSet, WorldId};

/// A (possibly empty) set of skills, as stored on edges and in capability
/// maps. Distinct from [`SkillSet`], the nonempty literal occurring in update
/// modalities.
pub type Skills = BTreeSet<SkillId>;

static NO_SKILLS: LazyLock<Skills> = LazyLock::new(BTreeSet::new);
static NO_ATOMS: LazyLock<BTreeSet<AtomId>> = LazyLock::new(BTreeSet::new);

/// Errors from loading or querying a model.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    /// The document is not valid JSON or not shaped like a model.
    #[error("model format error: {0}")]
    Format(String),
    /// The same unordered world pair is listed twice with different skill
    /// sets.
    #[error("conflicting skill sets for the edge between `{left}` and `{right}`")]
    ConflictingEdge { left: WorldId, right: WorldId },
    /// An edge endpoint, valuation key, or queried world is not in `worlds`.
    #[error("unknown world `{0}`")]
    UnknownWorld(WorldId),
    /// Models must have at least one world.
    #[error("a model needs at least one world")]
    NoWorlds,
    /// A name in the document is not a valid `[A-Za-z0-9_]+` token.
    #[error(transparent)]
    InvalidToken(#[from] InvalidToken),
}

/// One of the four capability-changing operations, mirroring the update
/// modalities of the formula language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapabilityUpdate {
    /// Add the skills to the agent's capability set.
    Add(AgentId, SkillSet),
    /// Remove the skills from the agent's capability set.
    Remove(AgentId, SkillSet),
    /// Replace the agent's capability set by the given skills.
    Assign(AgentId, SkillSet),
    /// Replace the learner's capability set by the source's current one.
    Copy { learner: AgentId, source: AgentId },
}

/// A skill-labeled model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    worlds: BTreeSet<WorldId>,
    /// Keyed by the sorted world pair; worlds may pair with themselves.
    edges: BTreeMap<(WorldId, WorldId), Skills>,
    capabilities: BTreeMap<AgentId, Skills>,
    valuation: BTreeMap<WorldId, BTreeSet<AtomId>>,
}

fn ordered_pair(w: WorldId, u: WorldId) -> (WorldId, WorldId) {
    if w <= u {
        (w, u)
    } else {
        (u, w)
    }
}

impl Model {
    /// Builds a model, normalizing edge keys and dropping empty entries.
    ///
    /// Duplicate edge entries for the same unordered pair are allowed when
    /// their skill sets agree and rejected as [`ModelError::ConflictingEdge`]
    /// otherwise. Every world mentioned by an edge or the valuation must be
    /// listed in `worlds`.
    pub fn new(
        worlds: impl IntoIterator<Item = WorldId>,
        edges: impl IntoIterator<Item = (WorldId, WorldId, Skills)>,
        capabilities: impl IntoIterator<Item = (AgentId, Skills)>,
        valuation: impl IntoIterator<Item = (WorldId, BTreeSet<AtomId>)>,
    ) -> Result<Self, ModelError> {
        let worlds: BTreeSet<WorldId> = worlds.into_iter().collect();
        if worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }

        let mut edge_map: BTreeMap<(WorldId, WorldId), Skills> = BTreeMap::new();
        for (w, u, skills) in edges {
            for end in [&w, &u] {
                if !worlds.contains(end) {
                    return Err(ModelError::UnknownWorld(end.clone()));
                }
            }
            let key = ordered_pair(w, u);
            match edge_map.get(&key) {
                Some(existing) if *existing != skills => {
                    return Err(ModelError::ConflictingEdge {
                        left: key.0,
                        right: key.1,
                    });
                }
                _ => {
                    edge_map.insert(key, skills);
                }
            }
        }
        edge_map.retain(|_, skills| !skills.is_empty());

        let mut capability_map: BTreeMap<AgentId, Skills> = capabilities.into_iter().collect();
        capability_map.retain(|_, skills| !skills.is_empty());

        let mut valuation_map: BTreeMap<WorldId, BTreeSet<AtomId>> = BTreeMap::new();
        for (w, atoms) in valuation {
            if !worlds.contains(&w) {
                return Err(ModelError::UnknownWorld(w));
            }
            valuation_map.entry(w).or_default().extend(atoms);
        }
        valuation_map.retain(|_, atoms| !atoms.is_empty());

        Ok(Model {
            worlds,
            edges: edge_map,
            capabilities: capability_map,
            valuation: valuation_map,
        })
    }

    /// The worlds, in sorted order.
    pub fn worlds(&self) -> &BTreeSet<WorldId> {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn contains_world(&self, w: &WorldId) -> bool {
        self.worlds.contains(w)
    }

    fn check_world(&self, w: &WorldId) -> Result<(), ModelError> {
        if self.contains_world(w) {
            Ok(())
        } else {
            Err(ModelError::UnknownWorld(w.clone()))
        }
    }

    /// The skill label on the unordered edge between `w` and `u` (which may
    /// be the same world); the empty set when the model stores no entry.
    pub fn edge_skills(&self, w: &WorldId, u: &WorldId) -> Result<&Skills, ModelError> {
        self.check_world(w)?;
        self.check_world(u)?;
        let key = ordered_pair(w.clone(), u.clone());
        Ok(self.edges.get(&key).unwrap_or(&NO_SKILLS))
    }

    /// The nonempty edge entries, keyed by sorted world pair.
    pub fn edges(&self) -> impl Iterator<Item = (&(WorldId, WorldId), &Skills)> {
        self.edges.iter()
    }

    /// The agent's capability set; the empty set for agents without an entry.
    pub fn capabilities(&self, agent: &AgentId) -> &Skills {
        self.capabilities.get(agent).unwrap_or(&NO_SKILLS)
    }

    /// The agents with a nonempty capability set.
    pub fn capable_agents(&self) -> impl Iterator<Item = (&AgentId, &Skills)> {
        self.capabilities.iter()
    }

    /// The atoms true at `w`.
    pub fn atoms_at(&self, w: &WorldId) -> Result<&BTreeSet<AtomId>, ModelError> {
        self.check_world(w)?;
        Ok(self.valuation.get(w).unwrap_or(&NO_ATOMS))
    }

    /// Applies a capability update, leaving worlds, edges, and valuation
    /// untouched. The result is normalized like any other model.
    pub fn apply_update(&self, update: &CapabilityUpdate) -> Model {
        let mut capabilities = self.capabilities.clone();
        let (agent, new_skills): (&AgentId, Skills) = match update {
            CapabilityUpdate::Add(a, s) => {
                let mut skills = self.capabilities(a).clone();
                skills.extend(s.iter().cloned());
                (a, skills)
            }
            CapabilityUpdate::Remove(a, s) => {
                let mut skills = self.capabilities(a).clone();
                for skill in s.iter() {
                    skills.remove(skill);
                }
                (a, skills)
            }
            CapabilityUpdate::Assign(a, s) => (a, s.iter().cloned().collect()),
            CapabilityUpdate::Copy { learner, source } => {
                (learner, self.capabilities(source).clone())
            }
        };
        if new_skills.is_empty() {
            capabilities.remove(agent);
        } else {
            capabilities.insert(agent.clone(), new_skills);
        }
        Model {
            worlds: self.worlds.clone(),
            edges: self.edges.clone(),
            capabilities,
            valuation: self.valuation.clone(),
        }
    }

    /// The skills visible to an evaluation of `f` in this model: every skill
    /// on any edge, plus the capabilities of every agent mentioned in `f`.
    pub fn relevant_skills(&self, f: &Formula) -> Skills {
        let mut out: Skills = self.edges.values().flatten().cloned().collect();
        for agent in f.agents() {
            out.extend(self.capabilities(&agent).iter().cloned());
        }
        out
    }

    /// A skill foreign to both the model (relative to `f`) and the formula
    /// itself: the first of `_fresh0`, `_fresh1`, … not already in use.
    pub fn fresh_skill(&self, f: &Formula) -> SkillId {
        let mut used = self.relevant_skills(f);
        used.extend(f.skills());
        (0..)
            .map(|i| SkillId::new(format!("_fresh{i}")).expect("generated name is a valid token"))
            .find(|s| !used.contains(s))
            .expect("some generated name is unused")
    }

    /// Parses a model from its JSON document form.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        let worlds = doc
            .worlds
            .into_iter()
            .map(WorldId::new)
            .collect::<Result<Vec<_>, _>>()?;
        let mut edges = Vec::new();
        for entry in doc.edges {
            let [w, u] = entry.between;
            edges.push((
                WorldId::new(w)?,
                WorldId::new(u)?,
                entry
                    .skills
                    .into_iter()
                    .map(SkillId::new)
                    .collect::<Result<_, _>>()?,
            ));
        }
        let mut capabilities = Vec::new();
        for (agent, skills) in doc.capabilities {
            capabilities.push((
                AgentId::new(agent)?,
                skills
                    .into_iter()
                    .map(SkillId::new)
                    .collect::<Result<_, _>>()?,
            ));
        }
        let mut valuation = Vec::new();
        for (world, atoms) in doc.valuation {
            valuation.push((
                WorldId::new(world)?,
                atoms
                    .into_iter()
                    .map(AtomId::new)
                    .collect::<Result<_, _>>()?,
            ));
        }
        Model::new(worlds, edges, capabilities, valuation)
    }

    /// Serializes the model as a canonical, pretty-printed JSON document:
    /// fields in a fixed order, every list sorted, empty entries omitted.
    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            worlds: self.worlds.iter().map(|w| w.to_string()).collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(w, atoms)| (w.to_string(), atoms.iter().map(|p| p.to_string()).collect()))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|((w, u), skills)| EdgeDoc {
                    between: [w.to_string(), u.to_string()],
                    skills: skills.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
            capabilities: self
                .capabilities
                .iter()
                .map(|(a, skills)| {
                    (
                        a.to_string(),
                        skills.iter().map(|s| s.to_string()).collect(),
                    )
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("document serialization is total");
        out.push('\n');
        out
    }

    /// The five-world showcase model used by the demo command and examples:
    /// three agents `a`, `b`, `c` over skills `s1..s4` and atoms `p1..p4`,
    /// with fully labeled reflexive edges.
    pub fn demo() -> Model {
        let w = |i: usize| WorldId::new(format!("w{i}")).unwrap();
        let s = |names: &[usize]| -> Skills {
            names
                .iter()
                .map(|i| SkillId::new(format!("s{i}")).unwrap())
                .collect()
        };
        let atoms = |names: &[usize]| -> BTreeSet<AtomId> {
            names
                .iter()
                .map(|i| AtomId::new(format!("p{i}")).unwrap())
                .collect()
        };
        let mut edges: Vec<(WorldId, WorldId, Skills)> =
            (1..=5).map(|i| (w(i), w(i), s(&[1, 2, 3, 4]))).collect();
        edges.extend([
            (w(1), w(2), s(&[1, 4])),
            (w(1), w(3), s(&[1, 2, 3])),
            (w(1), w(5), s(&[1])),
            (w(2), w(3), s(&[1])),
            (w(2), w(4), s(&[2, 3])),
            (w(2), w(5), s(&[1, 2, 3])),
            (w(3), w(4), s(&[4])),
            (w(3), w(5), s(&[1, 4])),
            (w(4), w(5), s(&[2, 3, 4])),
        ]);
        Model::new(
            (1..=5).map(w),
            edges,
            [
                (AgentId::new("a").unwrap(), s(&[1, 2, 3])),
                (AgentId::new("b").unwrap(), s(&[2, 3, 4])),
                (AgentId::new("c").unwrap(), s(&[4])),
            ],
            [
                (w(1), atoms(&[1, 2])),
                (w(2), atoms(&[1, 3])),
                (w(3), atoms(&[1, 2, 4])),
                (w(4), atoms(&[3, 4])),
                (w(5), atoms(&[1, 3, 4])),
            ],
        )
        .expect("demo model is well-formed")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    worlds: Vec<String>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
    #[serde(default)]
    capabilities: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    between: [String; 2],
    skills: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(name: &str) -> WorldId {
        WorldId::new(name).unwrap()
    }

    fn agent(name: &str) -> AgentId {
        AgentId::new(name).unwrap()
    }

    fn skills(names: &[&str]) -> Skills {
        names.iter().map(|s| SkillId::new(*s).unwrap()).collect()
    }

    fn skill_set(names: &[&str]) -> SkillSet {
        SkillSet::new(skills(names)).unwrap()
    }

    #[test]
    fn demo_model_has_expected_shape() {
        let m = Model::demo();
        assert_eq!(m.world_count(), 5);
        assert_eq!(m.edges().count(), 14);
        assert_eq!(m.edge_skills(&w("w1"), &w("w4")).unwrap(), &skills(&[]));
        assert_eq!(
            m.edge_skills(&w("w3"), &w("w5")).unwrap(),
            &skills(&["s1", "s4"])
        );
        // Unordered: querying in either direction sees the same label.
        assert_eq!(
            m.edge_skills(&w("w5"), &w("w3")).unwrap(),
            &skills(&["s1", "s4"])
        );
        assert_eq!(
            m.edge_skills(&w("w2"), &w("w2")).unwrap(),
            &skills(&["s1", "s2", "s3", "s4"])
        );
        assert_eq!(m.capabilities(&agent("c")), &skills(&["s4"]));
        assert_eq!(m.capabilities(&agent("nobody")), &skills(&[]));
    }

    #[test]
    fn json_roundtrip_is_identity() {
        let m = Model::demo();
        let text = m.to_json();
        assert_eq!(Model::from_json(&text).unwrap(), m);
        // And saving again yields the same bytes.
        assert_eq!(Model::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn minimal_document_loads() {
        let m = Model::from_json(r#"{ "worlds": ["u", "v"] }"#).unwrap();
        assert_eq!(m.world_count(), 2);
        assert_eq!(m.edge_skills(&w("u"), &w("v")).unwrap(), &skills(&[]));
        assert_eq!(m.atoms_at(&w("u")).unwrap().len(), 0);
    }

    #[test]
    fn duplicate_edge_entries_must_agree() {
        let ok = Model::new(
            [w("u"), w("v")],
            [
                (w("u"), w("v"), skills(&["s1"])),
                (w("v"), w("u"), skills(&["s1"])),
            ],
            [],
            [],
        );
        assert!(ok.is_ok());
        let err = Model::new(
            [w("u"), w("v")],
            [
                (w("u"), w("v"), skills(&["s1"])),
                (w("v"), w("u"), skills(&["s2"])),
            ],
            [],
            [],
        )
        .unwrap_err();
        assert_eq!(
            err,
            ModelError::ConflictingEdge {
                left: w("u"),
                right: w("v")
            }
        );
    }

    #[test]
    fn unknown_worlds_are_rejected() {
        let err = Model::new([w("u")], [(w("u"), w("x"), skills(&["s1"]))], [], []).unwrap_err();
        assert_eq!(err, ModelError::UnknownWorld(w("x")));
        let err = Model::new([w("u")], [], [], [(w("x"), BTreeSet::new())]).unwrap_err();
        assert_eq!(err, ModelError::UnknownWorld(w("x")));
        let m = Model::demo();
        assert!(m.edge_skills(&w("w1"), &w("nope")).is_err());
        assert!(m.atoms_at(&w("nope")).is_err());
    }

    #[test]
    fn empty_models_are_rejected() {
        assert_eq!(
            Model::new([], [], [], []).unwrap_err(),
            ModelError::NoWorlds
        );
        assert!(matches!(
            Model::from_json(r#"{ "worlds": [] }"#).unwrap_err(),
            ModelError::NoWorlds
        ));
    }

    #[test]
    fn format_errors_are_reported() {
        assert!(matches!(
            Model::from_json("not json").unwrap_err(),
            ModelError::Format(_)
        ));
        assert!(matches!(
            Model::from_json(r#"{ "worlds": ["u"], "extra": 1 }"#).unwrap_err(),
            ModelError::Format(_)
        ));
        assert!(matches!(
            Model::from_json(r#"{ "worlds": ["bad name"] }"#).unwrap_err(),
            ModelError::InvalidToken(_)
        ));
    }

    #[test]
    fn updates_follow_set_semantics() {
        let m = Model::demo();
        let a = agent("a");
        let add = m.apply_update(&CapabilityUpdate::Add(a.clone(), skill_set(&["s4"])));
        assert_eq!(add.capabilities(&a), &skills(&["s1", "s2", "s3", "s4"]));
        let remove = m.apply_update(&CapabilityUpdate::Remove(
            a.clone(),
            skill_set(&["s2", "s3"]),
        ));
        assert_eq!(remove.capabilities(&a), &skills(&["s1"]));
        let assign = m.apply_update(&CapabilityUpdate::Assign(a.clone(), skill_set(&["s9"])));
        assert_eq!(assign.capabilities(&a), &skills(&["s9"]));
        let copy = m.apply_update(&CapabilityUpdate::Copy {
            learner: a.clone(),
            source: agent("c"),
        });
        assert_eq!(copy.capabilities(&a), &skills(&["s4"]));
        // Everything else is untouched.
        assert_eq!(copy.worlds(), m.worlds());
        assert_eq!(copy.edges().count(), m.edges().count());
    }

    #[test]
    fn removing_all_skills_normalizes_to_no_entry() {
        let m = Model::demo();
        let c = agent("c");
        let gone = m.apply_update(&CapabilityUpdate::Remove(c.clone(), skill_set(&["s4"])));
        assert_eq!(gone.capabilities(&c), &skills(&[]));
        // The normalized form serializes without the entry, matching a model
        // that never listed the agent.
        assert!(!gone.to_json().contains("\"c\""));
    }

    #[test]
    fn relevant_skills_unions_edges_and_mentioned_capabilities() {
        let m = Model::new(
            [w("u"), w("v")],
            [(w("u"), w("v"), skills(&["s1"]))],
            [
                (agent("a"), skills(&["s2"])),
                (agent("zz"), skills(&["s3"])),
            ],
            [],
        )
        .unwrap();
        let f = Formula::parse("K_a p").unwrap();
        // `zz` is not mentioned by the formula, so its skills are invisible.
        assert_eq!(m.relevant_skills(&f), skills(&["s1", "s2"]));
    }

    #[test]
    fn fresh_skill_avoids_model_and_formula_names() {
        let m = Model::demo();
        let f = Formula::parse("K_a p1").unwrap();
        assert_eq!(m.fresh_skill(&f).as_str(), "_fresh0");
        let g = Formula::parse("(+{_fresh0})_a K_a p1").unwrap();
        assert_eq!(m.fresh_skill(&g).as_str(), "_fresh1");
        let odd = Model::new(
            [w("u")],
            [(w("u"), w("u"), skills(&["_fresh0", "_fresh1"]))],
            [],
            [],
        )
        .unwrap();
        assert_eq!(odd.fresh_skill(&f).as_str(), "_fresh2");
    }
}
