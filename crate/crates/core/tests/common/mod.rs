//! Shared helpers for the integration tests: a fixed vocabulary, seeded
//! random models and formulas, a direct recursive evaluator, and a
//! token-counting oracle for the length metric.
//!
//! The recursive evaluator is deliberately naive: it materializes a fresh
//! model for every capability change and re-derives everything per world,
//! sharing no code with the engine beyond the public model accessors, so
//! that agreement between the two is meaningful evidence.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use eskmc_core::{
    AgentId, AtomId, CapabilityUpdate, Formula, Group, Model, SkillId, SkillSet, Skills, WorldId,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The identifier pools the random generators draw from.
pub struct Vocab {
    pub atoms: Vec<AtomId>,
    pub agents: Vec<AgentId>,
    pub skills: Vec<SkillId>,
}

impl Vocab {
    /// Four atoms, three agents, three skills — small enough that random
    /// models collide with random formulas often.
    pub fn small() -> Vocab {
        Vocab {
            atoms: (1..=4)
                .map(|i| AtomId::new(format!("p{i}")).unwrap())
                .collect(),
            agents: ["a", "b", "c"]
                .iter()
                .map(|s| AgentId::new(*s).unwrap())
                .collect(),
            skills: (1..=3)
                .map(|i| SkillId::new(format!("s{i}")).unwrap())
                .collect(),
        }
    }

    fn atom(&self, r: &mut ChaCha8Rng) -> AtomId {
        self.atoms.choose(r).unwrap().clone()
    }

    fn agent(&self, r: &mut ChaCha8Rng) -> AgentId {
        self.agents.choose(r).unwrap().clone()
    }

    fn group(&self, r: &mut ChaCha8Rng) -> Group {
        let n = r.gen_range(1..=self.agents.len());
        Group::new(self.agents.choose_multiple(r, n).cloned()).unwrap()
    }

    fn skill_set(&self, r: &mut ChaCha8Rng) -> SkillSet {
        let n = r.gen_range(1..=self.skills.len());
        SkillSet::new(self.skills.choose_multiple(r, n).cloned()).unwrap()
    }
}

/// A random model over the vocabulary: up to `max_worlds` worlds, each
/// unordered world pair (self-pairs included) labeled with a random skill
/// set or left unlabeled, random capabilities, random valuation.
pub fn random_model(r: &mut ChaCha8Rng, vocab: &Vocab, max_worlds: usize) -> Model {
    let count = r.gen_range(1..=max_worlds);
    let worlds: Vec<WorldId> = (1..=count)
        .map(|i| WorldId::new(format!("w{i}")).unwrap())
        .collect();

    let mut edges = Vec::new();
    for i in 0..count {
        for j in i..count {
            if !r.gen_bool(0.55) {
                continue;
            }
            let label: Skills = vocab
                .skills
                .iter()
                .filter(|_| r.gen_bool(0.5))
                .cloned()
                .collect();
            edges.push((worlds[i].clone(), worlds[j].clone(), label));
        }
    }

    let capabilities: Vec<(AgentId, Skills)> = vocab
        .agents
        .iter()
        .map(|a| {
            let caps: Skills = vocab
                .skills
                .iter()
                .filter(|_| r.gen_bool(0.45))
                .cloned()
                .collect();
            (a.clone(), caps)
        })
        .collect();

    let valuation: Vec<(WorldId, BTreeSet<AtomId>)> = worlds
        .iter()
        .map(|w| {
            let atoms: BTreeSet<AtomId> = vocab
                .atoms
                .iter()
                .filter(|_| r.gen_bool(0.5))
                .cloned()
                .collect();
            (w.clone(), atoms)
        })
        .collect();

    Model::new(worlds, edges, capabilities, valuation).unwrap()
}

/// A random formula of the given depth. Each skill quantifier consumes one
/// unit of `quantifiers`; once the budget is spent, only quantifier-free
/// constructors are drawn. Pass `&mut 0` for quantifier-free formulas.
pub fn random_formula(
    r: &mut ChaCha8Rng,
    vocab: &Vocab,
    depth: usize,
    quantifiers: &mut usize,
) -> Formula {
    if depth == 0 {
        return Formula::atom(vocab.atom(r));
    }
    let sub = |r: &mut ChaCha8Rng, quantifiers: &mut usize| {
        random_formula(r, vocab, depth - 1, quantifiers)
    };
    loop {
        return match r.gen_range(0..100u32) {
            0..=9 => Formula::neg(sub(r, quantifiers)),
            10..=21 => {
                let l = sub(r, quantifiers);
                Formula::implies(l, sub(r, quantifiers))
            }
            22..=28 => {
                let l = sub(r, quantifiers);
                Formula::and(l, sub(r, quantifiers))
            }
            29..=35 => {
                let l = sub(r, quantifiers);
                Formula::or(l, sub(r, quantifiers))
            }
            36..=50 => Formula::knows(vocab.agent(r), sub(r, quantifiers)),
            51..=56 => Formula::mutual(vocab.group(r), sub(r, quantifiers)),
            57..=62 => Formula::distributed(vocab.group(r), sub(r, quantifiers)),
            63..=68 => Formula::field(vocab.group(r), sub(r, quantifiers)),
            69..=74 => Formula::common(vocab.group(r), sub(r, quantifiers)),
            75..=80 => Formula::add_skills(vocab.agent(r), vocab.skill_set(r), sub(r, quantifiers)),
            81..=85 => {
                Formula::remove_skills(vocab.agent(r), vocab.skill_set(r), sub(r, quantifiers))
            }
            86..=90 => {
                Formula::assign_skills(vocab.agent(r), vocab.skill_set(r), sub(r, quantifiers))
            }
            91..=94 => Formula::copy_skills(vocab.agent(r), vocab.agent(r), sub(r, quantifiers)),
            _ => {
                if *quantifiers == 0 {
                    continue;
                }
                *quantifiers -= 1;
                let agent = vocab.agent(r);
                let arg = sub(r, quantifiers);
                match r.gen_range(0..3u32) {
                    0 => Formula::box_plus(agent, arg),
                    1 => Formula::box_minus(agent, arg),
                    _ => Formula::box_assign(agent, arg),
                }
            }
        };
    }
}

/// Worlds the holder of `caps` cannot distinguish from `w`.
fn reachable(m: &Model, caps: &Skills, w: &WorldId) -> Vec<WorldId> {
    m.worlds()
        .iter()
        .filter(|u| caps.is_subset(m.edge_skills(w, u).unwrap()))
        .cloned()
        .collect()
}

/// Worlds one step away from `w` for some member of the group.
fn group_step(m: &Model, g: &Group, w: &WorldId) -> BTreeSet<WorldId> {
    let mut out = BTreeSet::new();
    for a in g.iter() {
        out.extend(reachable(m, m.capabilities(a), w));
    }
    out
}

/// The skills a quantifier ranges over: every skill on an edge, every
/// skill of an agent the formula mentions, every skill the formula spells
/// out, and one fresh skill standing in for "anything else".
fn subset_pool(m: &Model, f: &Formula) -> Vec<SkillId> {
    let mut pool = m.relevant_skills(f);
    pool.extend(f.skills());
    pool.insert(m.fresh_skill(f));
    pool.into_iter().collect()
}

/// Every nonempty subset of `pool`, as skill sets.
fn nonempty_subsets(pool: &[SkillId]) -> Vec<SkillSet> {
    assert!(pool.len() < usize::BITS as usize);
    (1..(1usize << pool.len()))
        .map(|mask| {
            SkillSet::new(
                pool.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, s)| s.clone()),
            )
            .unwrap()
        })
        .collect()
}

/// Truth at a world, by direct recursion on the formula.
pub fn naive_holds(m: &Model, w: &WorldId, f: &Formula) -> bool {
    match f {
        Formula::Atom(p) => m.atoms_at(w).unwrap().contains(p),
        Formula::Not(g) => !naive_holds(m, w, g),
        Formula::Implies(l, r) => !naive_holds(m, w, l) || naive_holds(m, w, r),
        Formula::Knows(a, g) => reachable(m, m.capabilities(a), w)
            .iter()
            .all(|u| naive_holds(m, u, g)),
        Formula::Common(group, g) => {
            let mut seen: BTreeSet<WorldId> = BTreeSet::new();
            let mut frontier: Vec<WorldId> = group_step(m, group, w).into_iter().collect();
            while let Some(u) = frontier.pop() {
                if seen.insert(u.clone()) {
                    frontier.extend(group_step(m, group, &u));
                }
            }
            seen.iter().all(|u| naive_holds(m, u, g))
        }
        Formula::Distributed(group, g) => {
            let mut pooled = Skills::new();
            for a in group.iter() {
                pooled.extend(m.capabilities(a).iter().cloned());
            }
            reachable(m, &pooled, w)
                .iter()
                .all(|u| naive_holds(m, u, g))
        }
        Formula::Mutual(group, g) => group.iter().all(|a| {
            reachable(m, m.capabilities(a), w)
                .iter()
                .all(|u| naive_holds(m, u, g))
        }),
        Formula::Field(group, g) => {
            let mut members = group.iter();
            let mut shared: Skills = m.capabilities(members.next().unwrap()).clone();
            for a in members {
                shared = shared.intersection(m.capabilities(a)).cloned().collect();
            }
            reachable(m, &shared, w)
                .iter()
                .all(|u| naive_holds(m, u, g))
        }
        Formula::AddSkills(a, s, g) => {
            let updated = m.apply_update(&CapabilityUpdate::Add(a.clone(), s.clone()));
            naive_holds(&updated, w, g)
        }
        Formula::RemoveSkills(a, s, g) => {
            let updated = m.apply_update(&CapabilityUpdate::Remove(a.clone(), s.clone()));
            naive_holds(&updated, w, g)
        }
        Formula::AssignSkills(a, s, g) => {
            let updated = m.apply_update(&CapabilityUpdate::Assign(a.clone(), s.clone()));
            naive_holds(&updated, w, g)
        }
        Formula::CopySkills {
            learner,
            source,
            arg,
        } => {
            let updated = m.apply_update(&CapabilityUpdate::Copy {
                learner: learner.clone(),
                source: source.clone(),
            });
            naive_holds(&updated, w, arg)
        }
        Formula::BoxPlus(a, g) => nonempty_subsets(&subset_pool(m, f)).iter().all(|s| {
            let updated = m.apply_update(&CapabilityUpdate::Add(a.clone(), s.clone()));
            naive_holds(&updated, w, g)
        }),
        Formula::BoxMinus(a, g) => nonempty_subsets(&subset_pool(m, f)).iter().all(|s| {
            let updated = m.apply_update(&CapabilityUpdate::Remove(a.clone(), s.clone()));
            naive_holds(&updated, w, g)
        }),
        Formula::BoxAssign(a, g) => nonempty_subsets(&subset_pool(m, f)).iter().all(|s| {
            let updated = m.apply_update(&CapabilityUpdate::Assign(a.clone(), s.clone()));
            naive_holds(&updated, w, g)
        }),
    }
}

/// Truth set by the naive evaluator.
pub fn naive_truth_set(m: &Model, f: &Formula) -> BTreeSet<WorldId> {
    m.worlds()
        .iter()
        .filter(|w| naive_holds(m, w, f))
        .cloned()
        .collect()
}

/// Counts the symbols of the fully parenthesized primitive spelling by
/// actually spelling it out, one symbol per list entry.
pub fn token_count(f: &Formula) -> usize {
    let mut symbols: Vec<String> = Vec::new();
    spell(f, &mut symbols);
    symbols.len()
}

fn spell(f: &Formula, out: &mut Vec<String>) {
    let brace_list = |out: &mut Vec<String>, items: Vec<String>| {
        out.push("{".into());
        for (i, item) in items.into_iter().enumerate() {
            if i > 0 {
                out.push(",".into());
            }
            out.push(item);
        }
        out.push("}".into());
    };
    match f {
        Formula::Atom(p) => out.push(p.to_string()),
        Formula::Not(g) => {
            out.push("~".into());
            spell(g, out);
        }
        Formula::Implies(l, r) => {
            out.push("(".into());
            spell(l, out);
            out.push("->".into());
            spell(r, out);
            out.push(")".into());
        }
        Formula::Knows(a, g) => {
            out.push("K".into());
            out.push(a.to_string());
            spell(g, out);
        }
        Formula::Common(group, g)
        | Formula::Distributed(group, g)
        | Formula::Mutual(group, g)
        | Formula::Field(group, g) => {
            let letter = match f {
                Formula::Common(..) => "C",
                Formula::Distributed(..) => "D",
                Formula::Mutual(..) => "E",
                _ => "F",
            };
            out.push(letter.into());
            brace_list(out, group.iter().map(|a| a.to_string()).collect());
            spell(g, out);
        }
        Formula::AddSkills(a, s, g)
        | Formula::RemoveSkills(a, s, g)
        | Formula::AssignSkills(a, s, g) => {
            let sign = match f {
                Formula::AddSkills(..) => "+",
                Formula::RemoveSkills(..) => "-",
                _ => "=",
            };
            out.push("(".into());
            out.push(sign.into());
            brace_list(out, s.iter().map(|x| x.to_string()).collect());
            out.push(")".into());
            out.push(a.to_string());
            spell(g, out);
        }
        Formula::CopySkills {
            learner,
            source,
            arg,
        } => {
            out.push("(".into());
            out.push("==".into());
            out.push(source.to_string());
            out.push(")".into());
            out.push(learner.to_string());
            spell(arg, out);
        }
        Formula::BoxPlus(a, g) | Formula::BoxMinus(a, g) | Formula::BoxAssign(a, g) => {
            let op = match f {
                Formula::BoxPlus(..) => "[+*]",
                Formula::BoxMinus(..) => "[-*]",
                _ => "[=*]",
            };
            out.push(op.into());
            out.push(a.to_string());
            spell(g, out);
        }
    }
}
