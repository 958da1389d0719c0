//! Translation of a rooted graph into a model-checking instance.
//!
//! The translation assigns one world and one atom per node and one skill
//! per edge; an agent whose capability set is exactly one edge's skill can
//! distinguish nothing about that edge's endpoints and everything else, so
//! "knowing which node the token is at" encodes "having just crossed that
//! edge". A nest of skill quantifiers, one per potential move, then lets
//! the two players pick edges in alternation: existential quantifiers for
//! the first player's choices, universal ones for the second player's.

use std::collections::BTreeMap;

use crate::model::{Model, Skills};
use crate::syntax::{AgentId, AtomId, Formula, NodeId, SkillId, WorldId};

use super::{ReductionVariant, RootedGraph};

/// A rooted graph translated into a model, together with the naming maps
/// that tie model ingredients back to graph ingredients.
#[derive(Debug, Clone)]
pub struct InducedModel {
    /// The translated model: one world per node, one skill per edge.
    pub model: Model,
    /// Skill assigned to each unordered node pair, keyed by the pair in
    /// canonical (sorted) order. Only pairs that are edges appear as edge
    /// labels, but every pair gets a name so that the skill-shedding
    /// variant can start agents with the full pair-skill set.
    pub pair_skills: BTreeMap<(NodeId, NodeId), SkillId>,
    /// Atom that is true exactly at each node's world.
    pub node_atoms: BTreeMap<NodeId, AtomId>,
    /// The move agents `a_1 .. a_n`, one per potential game move.
    pub agents: Vec<AgentId>,
}

/// One agent per potential move: the number of edges rounded up to a
/// positive even count, so the final move of the encoded game is always
/// the second player's.
fn move_agents(g: &RootedGraph) -> Vec<AgentId> {
    let r = g.edge_count();
    let n = if r == 0 { 2 } else { r + r % 2 };
    (1..=n)
        .map(|i| AgentId::new(format!("a_{i}")).expect("generated agent name is a valid token"))
        .collect()
}

/// Skill names for every unordered node pair, keyed by the canonical pair.
///
/// Names are built from the 1-based positions of the endpoints in sorted
/// node order (`s_1_2`, `s_1_3`, ...), which keeps them collision-free for
/// arbitrary node names; the returned map carries the correspondence.
fn pair_skill_names(g: &RootedGraph) -> BTreeMap<(NodeId, NodeId), SkillId> {
    let nodes: Vec<&NodeId> = g.nodes().iter().collect();
    let mut names = BTreeMap::new();
    for (i, left) in nodes.iter().enumerate() {
        for (j, right) in nodes.iter().enumerate().skip(i + 1) {
            let skill = SkillId::new(format!("s_{}_{}", i + 1, j + 1))
                .expect("generated skill name is a valid token");
            names.insert(((*left).clone(), (*right).clone()), skill);
        }
    }
    names
}

/// Atom names `p_<node>`, unique because node names are.
fn node_atom_names(g: &RootedGraph) -> BTreeMap<NodeId, AtomId> {
    g.nodes()
        .iter()
        .map(|node| {
            let atom =
                AtomId::new(format!("p_{node}")).expect("generated atom name is a valid token");
            (node.clone(), atom)
        })
        .collect()
}

fn world_of(node: &NodeId) -> WorldId {
    WorldId::new(node.to_string()).expect("node names are valid world names")
}

/// Translates a rooted graph into a model.
///
/// Worlds are the nodes. An edge between two nodes is labeled with that
/// pair's skill; all other pairs, including every self-pair, stay
/// unlabeled, so a world is inaccessible even from itself to any agent
/// with at least one skill. Each world's valuation is the single atom of
/// its node. Agents start with no skills, except in the
/// [`BoxMinus`](ReductionVariant::BoxMinus) variant, where every move
/// agent starts with the skill of every node pair and moves are made by
/// shedding skills instead of gaining them.
pub fn induced_model(g: &RootedGraph, variant: ReductionVariant) -> InducedModel {
    let pair_skills = pair_skill_names(g);
    let node_atoms = node_atom_names(g);
    let agents = move_agents(g);

    let worlds: Vec<WorldId> = g.nodes().iter().map(world_of).collect();
    let edges: Vec<(WorldId, WorldId, Skills)> = g
        .edges()
        .iter()
        .map(|pair| {
            let skill = pair_skills[pair].clone();
            (world_of(&pair.0), world_of(&pair.1), Skills::from([skill]))
        })
        .collect();
    let capabilities: Vec<(AgentId, Skills)> = match variant {
        ReductionVariant::BoxPlus | ReductionVariant::BoxAssign => Vec::new(),
        ReductionVariant::BoxMinus => {
            let all_pairs: Skills = pair_skills.values().cloned().collect();
            agents
                .iter()
                .map(|a| (a.clone(), all_pairs.clone()))
                .collect()
        }
    };
    let valuation = g
        .nodes()
        .iter()
        .map(|node| (world_of(node), [node_atoms[node].clone()].into()));

    let model = Model::new(worlds, edges, capabilities, valuation)
        .expect("translated model is well formed by construction");
    InducedModel {
        model,
        pair_skills,
        node_atoms,
        agents,
    }
}

/// Translates a rooted graph into the formula that encodes the game.
///
/// With `n` move agents, the formula is an alternating nest, existential
/// at odd levels and universal at even levels:
///
/// ```text
/// <Q>_a_1 (move_1 & ~repeat_1 & K_a_1
///   [Q]_a_2 (~move_2 | repeat_2 | hatK_a_2
///     <Q>_a_3 (move_3 & ~repeat_3 & K_a_3
///       [Q]_a_4 (~move_4 | repeat_4 | ...))))
/// ```
///
/// where `move_i` says agent `a_i`'s capability singles out exactly one
/// neighbouring world (it picked one edge at the token's node), and
/// `repeat_i` says some earlier agent already picked the same edge. The
/// quantifier family `[Q]`/`<Q>` is chosen by `variant`. The formula holds
/// at the translated model's root world exactly when the first player has
/// a winning strategy.
pub fn induced_formula(g: &RootedGraph, variant: ReductionVariant) -> Formula {
    let node_atoms = node_atom_names(g);
    let agents = move_agents(g);
    let n = agents.len();

    let atoms: Vec<&AtomId> = g.nodes().iter().map(|node| &node_atoms[node]).collect();
    let agent = |i: usize| agents[i - 1].clone();

    // Agent a_i considers exactly one world possible: it cannot rule out
    // everything, yet it can pin down which node's atom holds.
    let makes_a_move = |i: usize| {
        Formula::and(
            Formula::neg(Formula::knows(agent(i), Formula::bottom())),
            Formula::or_all(
                atoms
                    .iter()
                    .map(|p| Formula::knows(agent(i), Formula::atom((*p).clone()))),
            ),
        )
    };
    // Some earlier agent a_j picked the same edge that a_i just picked:
    // from the current node (atom x) agent a_j considers the other
    // endpoint (atom y) possible, and a_i knows it is at y.
    let repeats_a_move = |i: usize| {
        let mut cases = Vec::new();
        for (xi, x) in atoms.iter().enumerate() {
            for (yi, y) in atoms.iter().enumerate() {
                if yi == xi {
                    continue;
                }
                for j in 1..i {
                    cases.push(Formula::and_all([
                        Formula::atom((*x).clone()),
                        Formula::hat_knows(agent(j), Formula::atom((*y).clone())),
                        Formula::knows(agent(i), Formula::atom((*y).clone())),
                    ]));
                }
            }
        }
        Formula::or_all(cases)
    };
    let exists_gain = |i: usize, f: Formula| match variant {
        ReductionVariant::BoxPlus => Formula::dia_plus(agent(i), f),
        ReductionVariant::BoxMinus => Formula::dia_minus(agent(i), f),
        ReductionVariant::BoxAssign => Formula::dia_assign(agent(i), f),
    };
    let forall_gains = |i: usize, f: Formula| match variant {
        ReductionVariant::BoxPlus => Formula::box_plus(agent(i), f),
        ReductionVariant::BoxMinus => Formula::box_minus(agent(i), f),
        ReductionVariant::BoxAssign => Formula::box_assign(agent(i), f),
    };

    let mut inner: Option<Formula> = None;
    for i in (1..=n).rev() {
        let level = if i % 2 == 0 {
            // The second player fails to move, repeats an edge, or leaves
            // the first player a winning continuation.
            let mut outs = vec![Formula::neg(makes_a_move(i)), repeats_a_move(i)];
            if let Some(next) = inner.take() {
                outs.push(Formula::hat_knows(agent(i), next));
            }
            forall_gains(i, Formula::or_all(outs))
        } else {
            let next = inner
                .take()
                .expect("odd levels always precede an even level");
            // The first player makes a fresh move after which, at the new
            // node, the rest of the game still goes her way.
            exists_gain(
                i,
                Formula::and_all([
                    makes_a_move(i),
                    Formula::neg(repeats_a_move(i)),
                    Formula::knows(agent(i), next),
                ]),
            )
        };
        inner = Some(level);
    }
    inner.expect("there are always at least two levels")
}
