//! Deterministic fixtures for the benchmark suite. Everything here is
//! built from closed-form arithmetic (no randomness, no I/O) so criterion
//! numbers stay comparable across runs and machines.

use eskmc_core::{
    AgentId, AtomId, Formula, Group, Model, NodeId, RootedGraph, SkillId, SkillSet, Skills, WorldId,
};

fn world(i: usize) -> WorldId {
    WorldId::new(format!("w{i}")).unwrap()
}

fn skill(i: usize) -> SkillId {
    SkillId::new(format!("s{i}")).unwrap()
}

fn atom(i: usize) -> AtomId {
    AtomId::new(format!("q{i}")).unwrap()
}

fn agent(name: &str) -> AgentId {
    AgentId::new(name).unwrap()
}

fn group(names: &[&str]) -> Group {
    Group::new(names.iter().map(|n| agent(n))).unwrap()
}

fn skill_set(indices: &[usize]) -> SkillSet {
    SkillSet::new(indices.iter().map(|&i| skill(i))).unwrap()
}

/// A ring of `n` worlds. Neighbours are connected with a skill label that
/// cycles through four skills, every third world carries a self-loop, and
/// chords connect opposite worlds, so group reachability is non-trivial
/// at every size.
pub fn ring_model(n: usize) -> Model {
    assert!(n >= 3, "ring needs at least three worlds");
    let worlds: Vec<WorldId> = (0..n).map(world).collect();

    let mut edges: Vec<(WorldId, WorldId, Skills)> = Vec::new();
    for i in 0..n {
        let next = (i + 1) % n;
        let label: Skills = [skill(i % 4), skill((i + 1) % 4)].into_iter().collect();
        edges.push((worlds[i].clone(), worlds[next].clone(), label));
        if i % 3 == 0 {
            let loop_label: Skills = (0..4).map(skill).collect();
            edges.push((worlds[i].clone(), worlds[i].clone(), loop_label));
        }
        let across = (i + n / 2) % n;
        if i < across {
            let chord: Skills = [skill((i + 2) % 4)].into_iter().collect();
            edges.push((worlds[i].clone(), worlds[across].clone(), chord));
        }
    }

    let capabilities = vec![
        (
            agent("a"),
            [skill(0), skill(1)].into_iter().collect::<Skills>(),
        ),
        (
            agent("b"),
            [skill(1), skill(2)].into_iter().collect::<Skills>(),
        ),
        (
            agent("c"),
            [skill(0), skill(2), skill(3)]
                .into_iter()
                .collect::<Skills>(),
        ),
    ];

    let valuation = (0..n).map(|i| {
        let mut atoms = std::collections::BTreeSet::new();
        if i % 2 == 0 {
            atoms.insert(atom(0));
        }
        if i % 3 == 0 {
            atoms.insert(atom(1));
        }
        if i % 5 < 2 {
            atoms.insert(atom(2));
        }
        if i >= n / 2 {
            atoms.insert(atom(3));
        }
        (worlds[i].clone(), atoms)
    });

    Model::new(worlds.clone(), edges, capabilities, valuation).unwrap()
}

/// A quantifier-free nest of the given depth cycling through every group
/// and update operator over a small propositional core.
pub fn mixed_formula(depth: usize) -> Formula {
    let mut f = Formula::implies(
        Formula::atom(atom(0)),
        Formula::or(Formula::atom(atom(1)), Formula::neg(Formula::atom(atom(2)))),
    );
    for level in 0..depth {
        f = match level % 10 {
            0 => Formula::knows(agent("a"), f),
            1 => Formula::common(group(&["a", "b"]), f),
            2 => Formula::add_skills(agent("a"), skill_set(&[2]), f),
            3 => Formula::distributed(group(&["b", "c"]), f),
            4 => Formula::field(group(&["a", "c"]), f),
            5 => Formula::remove_skills(agent("b"), skill_set(&[3]), f),
            6 => Formula::mutual(group(&["a", "b", "c"]), f),
            7 => Formula::assign_skills(agent("c"), skill_set(&[0, 1]), f),
            8 => Formula::copy_skills(agent("a"), agent("b"), f),
            _ => Formula::neg(f),
        };
    }
    f
}

/// A single capability quantifier wrapped around a shallow mixed nest;
/// exercises the subset enumeration on top of ordinary evaluation.
pub fn quantified_formula() -> Formula {
    Formula::dia_plus(
        agent("a"),
        Formula::and(
            mixed_formula(3),
            Formula::knows(agent("a"), Formula::atom(atom(1))),
        ),
    )
}

/// A four-node, four-edge square rooted at one corner: the largest shape
/// in the exhaustive game family, with a non-trivial alternation depth.
pub fn square_graph() -> RootedGraph {
    let node = |i: usize| NodeId::new(format!("n{i}")).unwrap();
    RootedGraph::new(
        (1..=4).map(node),
        vec![
            (node(1), node(2)),
            (node(2), node(3)),
            (node(3), node(4)),
            (node(4), node(1)),
        ],
        node(1),
    )
    .unwrap()
}
