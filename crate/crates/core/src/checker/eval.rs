//! The set-based evaluator.
//!
//! A formula is compiled once into an arena of nodes over a fixed *skill
//! universe*: every skill on a model edge, the capabilities of every agent
//! the formula mentions, every skill written literally in the formula, and a
//! reserve of fresh skills for the quantifiers. Skill sets and world sets are
//! then plain bit masks, and evaluation computes whole truth sets bottom-up.
//!
//! The only evaluation state is the capability assignment of the formula's
//! agents — updates never touch worlds, edges, or the valuation — so results
//! are memoized per `(node, capabilities of the agents occurring in that
//! node's subformula)`. Capability masks are interned to keep the keys small.
//!
//! Quantifier bounding: a quantifier over agent `a`'s skills only needs to
//! range over subsets of `S₂ = S₁ ∪ {fresh}`, where `S₁` collects every edge
//! skill, the current capabilities of the agents in the quantified
//! subformula, and — beyond that baseline — the skills the subformula
//! mentions literally in update modalities, which can matter even when no
//! edge or capability carries them (removing such a skill is a no-op exactly
//! when it was never added). One fresh skill outside `S₁` represents all of
//! them: any skill no edge carries blocks or preserves exactly the same
//! accessibilities as any other. Subsets are enumerated by increasing
//! cardinality with an early exit once the accumulated intersection (the
//! conjunction over all choices) is empty.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use crate::model::Model;
use crate::syntax::{Formula, SkillId, WorldId};

/// A fixed-width bit set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut bits = Bits {
            len,
            words: vec![!0u64; len.div_ceil(64)],
        };
        bits.mask_tail();
        bits
    }

    fn mask_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn test(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn remove_all(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> Bits {
        let mut out = Bits {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.mask_tail();
        out
    }

    /// Indices of the set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, word)| {
            let mut w = *word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SetUpdateKind {
    Add,
    Remove,
    Assign,
}

/// Arena node. Agents are indices into the engine's agent table, skills are
/// bit positions, and children are arena indices.
#[derive(Debug, Clone)]
enum Node {
    /// Truth mask precomputed from the valuation.
    Atom(Bits),
    Not(u32),
    Implies(u32, u32),
    Knows(usize, u32),
    Common(Vec<usize>, u32),
    Distributed(Vec<usize>, u32),
    Mutual(Vec<usize>, u32),
    Field(Vec<usize>, u32),
    SetUpdate(SetUpdateKind, usize, Bits, u32),
    CopyCaps {
        learner: usize,
        source: usize,
        child: u32,
    },
    Quantifier(SetUpdateKind, usize, u32),
}

fn quantifier_depth(f: &Formula) -> usize {
    let here = matches!(
        f,
        Formula::BoxPlus(..) | Formula::BoxMinus(..) | Formula::BoxAssign(..)
    ) as usize;
    here + f
        .children()
        .iter()
        .map(|c| quantifier_depth(c))
        .max()
        .unwrap_or(0)
}

pub(crate) struct Engine<'m> {
    model: &'m Model,
    worlds: Vec<WorldId>,
    nw: usize,
    ns: usize,
    /// Skill mask of the edge between world `x` and world `y`, at `x*nw + y`.
    edge: Vec<Bits>,
    /// Union of all edge labels.
    edge_union: Bits,
    /// Skill bits reserved as quantifier-fresh, in pick order.
    fresh_pool: Vec<usize>,
    /// How many fresh skills beyond the first each quantifier adds to its
    /// enumeration universe (0 in normal operation; >0 to probe that the
    /// bound is already stable).
    extra_fresh: usize,
    nodes: Vec<Node>,
    /// Sorted agent indices occurring in each node's subformula.
    node_agents: Vec<Vec<usize>>,
    /// Skills mentioned literally in each node's subformula.
    node_skills: Vec<Bits>,
    root: u32,
    init_caps: Vec<u32>,
    caps_store: Vec<Bits>,
    caps_ids: HashMap<Bits, u32>,
    memo: HashMap<(u32, Box<[u32]>), Bits>,
}

impl<'m> Engine<'m> {
    pub fn new(model: &'m Model, f: &Formula, extra_fresh: usize) -> Self {
        let worlds: Vec<WorldId> = model.worlds().iter().cloned().collect();
        let nw = worlds.len();

        let agents: Vec<_> = f.agents().into_iter().collect();

        // The base universe: edge skills, capabilities of mentioned agents,
        // and skills the formula names literally.
        let mut base: BTreeSet<SkillId> = model
            .edges()
            .flat_map(|(_, skills)| skills.iter().cloned())
            .collect();
        for agent in &agents {
            base.extend(model.capabilities(agent).iter().cloned());
        }
        base.extend(f.skills());

        // Reserve enough fresh skills that every quantifier level can find
        // its own, even when outer quantifiers have already poured theirs
        // into some capability set.
        let depth = quantifier_depth(f);
        let per_level = 1 + extra_fresh;
        let wanted = if depth == 0 {
            0
        } else {
            (depth + 1) * per_level
        };
        let mut fresh_names = Vec::new();
        let mut i = 0;
        while fresh_names.len() < wanted {
            let candidate = SkillId::new(format!("_fresh{i}")).expect("generated token");
            if !base.contains(&candidate) {
                fresh_names.push(candidate);
            }
            i += 1;
        }

        let mut skill_index: HashMap<SkillId, usize> = HashMap::new();
        for s in base.iter().chain(fresh_names.iter()) {
            let next = skill_index.len();
            skill_index.insert(s.clone(), next);
        }
        let ns = skill_index.len();
        let fresh_pool: Vec<usize> = fresh_names.iter().map(|s| skill_index[s]).collect();

        let mut edge = vec![Bits::zeros(ns); nw * nw];
        let mut edge_union = Bits::zeros(ns);
        for (x, w) in worlds.iter().enumerate() {
            for (y, u) in worlds.iter().enumerate().skip(x) {
                let skills = model.edge_skills(w, u).expect("worlds come from the model");
                let mut mask = Bits::zeros(ns);
                for s in skills {
                    mask.set(skill_index[s]);
                }
                edge_union.union_with(&mask);
                edge[x * nw + y] = mask.clone();
                edge[y * nw + x] = mask;
            }
        }

        let mut engine = Engine {
            model,
            worlds,
            nw,
            ns,
            edge,
            edge_union,
            fresh_pool,
            extra_fresh,
            nodes: Vec::new(),
            node_agents: Vec::new(),
            node_skills: Vec::new(),
            root: 0,
            init_caps: Vec::new(),
            caps_store: Vec::new(),
            caps_ids: HashMap::new(),
            memo: HashMap::new(),
        };

        let agent_index: HashMap<_, _> = agents
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        engine.init_caps = agents
            .iter()
            .map(|a| {
                let mut mask = Bits::zeros(ns);
                for s in model.capabilities(a) {
                    mask.set(skill_index[s]);
                }
                engine.intern(mask)
            })
            .collect();
        engine.root = engine.compile(f, &agent_index, &skill_index);
        engine
    }

    fn intern(&mut self, mask: Bits) -> u32 {
        if let Some(&id) = self.caps_ids.get(&mask) {
            return id;
        }
        let id = self.caps_store.len() as u32;
        self.caps_store.push(mask.clone());
        self.caps_ids.insert(mask, id);
        id
    }

    fn compile(
        &mut self,
        f: &Formula,
        agent_index: &HashMap<crate::syntax::AgentId, usize>,
        skill_index: &HashMap<SkillId, usize>,
    ) -> u32 {
        let ai = |a: &crate::syntax::AgentId| agent_index[a];
        let group_indices = |g: &crate::syntax::Group| -> Vec<usize> {
            let mut v: Vec<usize> = g.iter().map(ai).collect();
            v.sort_unstable();
            v
        };
        let ns = self.ns;
        let skill_mask = move |s: &crate::syntax::SkillSet| -> Bits {
            let mut mask = Bits::zeros(ns);
            for skill in s.iter() {
                mask.set(skill_index[skill]);
            }
            mask
        };

        let (node, own_agents): (Node, Vec<usize>) = match f {
            Formula::Atom(p) => {
                let mut mask = Bits::zeros(self.nw);
                for (x, w) in self.worlds.iter().enumerate() {
                    if self.model.atoms_at(w).expect("model world").contains(p) {
                        mask.set(x);
                    }
                }
                (Node::Atom(mask), vec![])
            }
            Formula::Not(g) => {
                let c = self.compile(g, agent_index, skill_index);
                (Node::Not(c), vec![])
            }
            Formula::Implies(l, r) => {
                let lc = self.compile(l, agent_index, skill_index);
                let rc = self.compile(r, agent_index, skill_index);
                (Node::Implies(lc, rc), vec![])
            }
            Formula::Knows(a, g) => {
                let c = self.compile(g, agent_index, skill_index);
                (Node::Knows(ai(a), c), vec![ai(a)])
            }
            Formula::Common(g, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                let idx = group_indices(g);
                (Node::Common(idx.clone(), c), idx)
            }
            Formula::Distributed(g, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                let idx = group_indices(g);
                (Node::Distributed(idx.clone(), c), idx)
            }
            Formula::Mutual(g, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                let idx = group_indices(g);
                (Node::Mutual(idx.clone(), c), idx)
            }
            Formula::Field(g, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                let idx = group_indices(g);
                (Node::Field(idx.clone(), c), idx)
            }
            Formula::AddSkills(a, s, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                (
                    Node::SetUpdate(SetUpdateKind::Add, ai(a), skill_mask(s), c),
                    vec![ai(a)],
                )
            }
            Formula::RemoveSkills(a, s, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                (
                    Node::SetUpdate(SetUpdateKind::Remove, ai(a), skill_mask(s), c),
                    vec![ai(a)],
                )
            }
            Formula::AssignSkills(a, s, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                (
                    Node::SetUpdate(SetUpdateKind::Assign, ai(a), skill_mask(s), c),
                    vec![ai(a)],
                )
            }
            Formula::CopySkills {
                learner,
                source,
                arg,
            } => {
                let c = self.compile(arg, agent_index, skill_index);
                (
                    Node::CopyCaps {
                        learner: ai(learner),
                        source: ai(source),
                        child: c,
                    },
                    vec![ai(learner), ai(source)],
                )
            }
            Formula::BoxPlus(a, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                (Node::Quantifier(SetUpdateKind::Add, ai(a), c), vec![ai(a)])
            }
            Formula::BoxMinus(a, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                (
                    Node::Quantifier(SetUpdateKind::Remove, ai(a), c),
                    vec![ai(a)],
                )
            }
            Formula::BoxAssign(a, arg) => {
                let c = self.compile(arg, agent_index, skill_index);
                (
                    Node::Quantifier(SetUpdateKind::Assign, ai(a), c),
                    vec![ai(a)],
                )
            }
        };

        // The node's agent set is its own agents plus its children's; its
        // literal-skill set likewise.
        let mut agents: BTreeSet<usize> = own_agents.into_iter().collect();
        let mut skills = Bits::zeros(self.ns);
        if let Node::SetUpdate(_, _, mask, _) = &node {
            skills.union_with(mask);
        }
        for child in node_children(&node) {
            agents.extend(self.node_agents[child as usize].iter().copied());
            skills.union_with(&self.node_skills[child as usize]);
        }

        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.node_agents.push(agents.into_iter().collect());
        self.node_skills.push(skills);
        id
    }

    /// Evaluates the root and returns the truth set as world names.
    pub fn run(&mut self) -> BTreeSet<WorldId> {
        let caps = self.init_caps.clone();
        let bits = self.eval(self.root, &caps);
        bits.iter_ones().map(|x| self.worlds[x].clone()).collect()
    }

    fn eval(&mut self, node: u32, caps: &[u32]) -> Bits {
        let key: Box<[u32]> = self.node_agents[node as usize]
            .iter()
            .map(|&ai| caps[ai])
            .collect();
        if let Some(hit) = self.memo.get(&(node, key.clone())) {
            return hit.clone();
        }
        let op = self.nodes[node as usize].clone();
        let result = match op {
            Node::Atom(mask) => mask,
            Node::Not(c) => self.eval(c, caps).complement(),
            Node::Implies(l, r) => {
                let lv = self.eval(l, caps);
                // A false antecedent everywhere makes the implication
                // universally true without looking at the consequent.
                if lv.is_empty() {
                    Bits::ones(self.nw)
                } else {
                    let mut out = lv.complement();
                    out.union_with(&self.eval(r, caps));
                    out
                }
            }
            Node::Knows(a, c) => {
                let cv = self.eval(c, caps);
                let cap = self.caps_store[caps[a] as usize].clone();
                self.box_mask(&cv, |edge| cap.is_subset(edge))
            }
            Node::Distributed(group, c) => {
                let cv = self.eval(c, caps);
                let mut pooled = Bits::zeros(self.ns);
                for &ai in &group {
                    pooled.union_with(&self.caps_store[caps[ai] as usize]);
                }
                self.box_mask(&cv, |edge| pooled.is_subset(edge))
            }
            Node::Field(group, c) => {
                let cv = self.eval(c, caps);
                let mut shared = Bits::ones(self.ns);
                for &ai in &group {
                    shared.intersect_with(&self.caps_store[caps[ai] as usize]);
                }
                self.box_mask(&cv, |edge| shared.is_subset(edge))
            }
            Node::Mutual(group, c) => {
                let cv = self.eval(c, caps);
                let member_caps: Vec<Bits> = group
                    .iter()
                    .map(|&ai| self.caps_store[caps[ai] as usize].clone())
                    .collect();
                self.box_mask(&cv, |edge| {
                    member_caps.iter().any(|cap| cap.is_subset(edge))
                })
            }
            Node::Common(group, c) => {
                let cv = self.eval(c, caps);
                let member_caps: Vec<Bits> = group
                    .iter()
                    .map(|&ai| self.caps_store[caps[ai] as usize].clone())
                    .collect();
                // One-step rows of the group relation, then reachability in
                // one or more steps.
                let rows: Vec<Bits> = (0..self.nw)
                    .map(|x| {
                        let mut row = Bits::zeros(self.nw);
                        for y in 0..self.nw {
                            let edge = &self.edge[x * self.nw + y];
                            if member_caps.iter().any(|cap| cap.is_subset(edge)) {
                                row.set(y);
                            }
                        }
                        row
                    })
                    .collect();
                let mut out = Bits::zeros(self.nw);
                for x in 0..self.nw {
                    let mut reach = rows[x].clone();
                    let mut frontier: Vec<usize> = reach.iter_ones().collect();
                    while let Some(y) = frontier.pop() {
                        let mut new = rows[y].clone();
                        new.remove_all(&reach);
                        if !new.is_empty() {
                            reach.union_with(&new);
                            frontier.extend(new.iter_ones());
                        }
                    }
                    if reach.is_subset(&cv) {
                        out.set(x);
                    }
                }
                out
            }
            Node::SetUpdate(kind, a, mask, c) => {
                let next = self.updated_caps(caps, a, &mask, kind);
                self.eval(c, &next)
            }
            Node::CopyCaps {
                learner,
                source,
                child,
            } => {
                let mut next = caps.to_vec();
                next[learner] = caps[source];
                self.eval(child, &next)
            }
            Node::Quantifier(kind, a, c) => self.eval_quantifier(node, kind, a, c, caps),
        };
        self.memo.insert((node, key), result.clone());
        result
    }

    /// Worlds `x` such that the child holds at every `y` whose edge label
    /// passes the access test.
    fn box_mask(&self, child_val: &Bits, accessible: impl Fn(&Bits) -> bool) -> Bits {
        let mut out = Bits::zeros(self.nw);
        'world: for x in 0..self.nw {
            for y in 0..self.nw {
                if accessible(&self.edge[x * self.nw + y]) && !child_val.test(y) {
                    continue 'world;
                }
            }
            out.set(x);
        }
        out
    }

    fn updated_caps(
        &mut self,
        caps: &[u32],
        agent: usize,
        mask: &Bits,
        kind: SetUpdateKind,
    ) -> Vec<u32> {
        let mut new_mask = self.caps_store[caps[agent] as usize].clone();
        match kind {
            SetUpdateKind::Add => new_mask.union_with(mask),
            SetUpdateKind::Remove => new_mask.remove_all(mask),
            SetUpdateKind::Assign => new_mask = mask.clone(),
        }
        let id = self.intern(new_mask);
        let mut next = caps.to_vec();
        next[agent] = id;
        next
    }

    fn eval_quantifier(
        &mut self,
        node: u32,
        kind: SetUpdateKind,
        agent: usize,
        child: u32,
        caps: &[u32],
    ) -> Bits {
        // S₁: edge skills, current capabilities of the subformula's agents,
        // and skills the subformula mentions literally.
        let mut s1 = self.edge_union.clone();
        for &ai in &self.node_agents[node as usize] {
            s1.union_with(&self.caps_store[caps[ai] as usize]);
        }
        s1.union_with(&self.node_skills[node as usize]);

        let mut universe: Vec<usize> = s1.iter_ones().collect();
        let mut picked = 0;
        for &candidate in &self.fresh_pool {
            if picked == 1 + self.extra_fresh {
                break;
            }
            if !s1.test(candidate) {
                universe.push(candidate);
                picked += 1;
            }
        }
        assert_eq!(
            picked,
            1 + self.extra_fresh,
            "fresh pool sized for the nesting depth"
        );
        universe.sort_unstable();

        let mut acc = Bits::ones(self.nw);
        for size in 1..=universe.len() {
            for combo in universe.iter().copied().combinations(size) {
                let mut mask = Bits::zeros(self.ns);
                for skill in combo {
                    mask.set(skill);
                }
                let next = self.updated_caps(caps, agent, &mask, kind);
                let val = self.eval(child, &next);
                acc.intersect_with(&val);
                if acc.is_empty() {
                    return acc;
                }
            }
        }
        acc
    }
}

fn node_children(node: &Node) -> Vec<u32> {
    match node {
        Node::Atom(_) => vec![],
        Node::Not(c)
        | Node::Knows(_, c)
        | Node::Common(_, c)
        | Node::Distributed(_, c)
        | Node::Mutual(_, c)
        | Node::Field(_, c)
        | Node::SetUpdate(_, _, _, c)
        | Node::CopyCaps { child: c, .. }
        | Node::Quantifier(_, _, c) => vec![*c],
        Node::Implies(l, r) => vec![*l, *r],
    }
}
