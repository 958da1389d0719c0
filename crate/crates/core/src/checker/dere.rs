//! The three readings of "the agent can come to know": de dicto, explicit
//! de re, and implicit de re, each as a directly quantified semantic
//! condition plus a builder for the modal formula expressing it.
//!
//! With `acc(w)` the worlds the agent cannot currently distinguish from `w`,
//! `acc⁺S(w)` the same after adding `S` to her capabilities, and `m⁺S` the
//! updated model:
//!
//! * de dicto: every `u ∈ acc(w)` has some `S` with `m⁺S, u ⊨ f`;
//! * explicit de re: some `S` works for every `u ∈ acc(w)` at once;
//! * implicit de re: some `S` has `m⁺S, u ⊨ f` for every `u ∈ acc⁺S(w)`.
//!
//! The existential ranges over finite nonempty skill sets, exactly like the
//! `<+*>` quantifier it mirrors, bounded by the same representative universe
//! the evaluator uses (edge skills, the capabilities of the agents involved,
//! the skills the target mentions, and one fresh skill).

use itertools::Itertools;

use crate::model::{CapabilityUpdate, Model, ModelError, Skills};
use crate::syntax::{AgentId, Formula, SkillId, SkillSet, WorldId};

use super::{truth_set, TruthSet};

/// The bounded enumeration universe for the existential over skill sets.
fn universe(m: &Model, a: &AgentId, f: &Formula) -> Vec<SkillId> {
    let mut skills: Skills = m.relevant_skills(f);
    skills.extend(m.capabilities(a).iter().cloned());
    skills.extend(f.skills());
    let fresh = (0..)
        .map(|i| SkillId::new(format!("_fresh{i}")).expect("generated token"))
        .find(|s| !skills.contains(s))
        .expect("some generated name is unused");
    skills.insert(fresh);
    skills.into_iter().collect()
}

/// All nonempty subsets of the universe, by increasing size.
fn candidate_sets(universe: &[SkillId]) -> Vec<SkillSet> {
    (1..=universe.len())
        .flat_map(|k| {
            universe
                .iter()
                .cloned()
                .combinations(k)
                .map(|subset| SkillSet::new(subset).expect("subsets are nonempty"))
        })
        .collect()
}

/// The worlds the agent cannot distinguish from `w` in `m`.
fn accessible(m: &Model, a: &AgentId, w: &WorldId) -> Result<Vec<WorldId>, ModelError> {
    let cap = m.capabilities(a).clone();
    m.worlds()
        .iter()
        .filter_map(|u| match m.edge_skills(w, u) {
            Ok(edge) => cap.is_subset(edge).then(|| Ok(u.clone())),
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// Truth sets of `f` after each candidate skill gain, paired with the gain.
fn gained_truth_sets(m: &Model, a: &AgentId, f: &Formula) -> Vec<(SkillSet, Model, TruthSet)> {
    candidate_sets(&universe(m, a, f))
        .into_iter()
        .map(|s| {
            let updated = m.apply_update(&CapabilityUpdate::Add(a.clone(), s.clone()));
            let ts = truth_set(&updated, f);
            (s, updated, ts)
        })
        .collect()
}

/// The agent knows *that* some skill gain would achieve `f`: at every world
/// she currently considers possible, some gain achieves it — possibly a
/// different gain at each.
pub fn de_dicto(m: &Model, w: &WorldId, a: &AgentId, f: &Formula) -> Result<bool, ModelError> {
    let acc = accessible(m, a, w)?;
    let sets = gained_truth_sets(m, a, f);
    Ok(acc
        .iter()
        .all(|u| sets.iter().any(|(_, _, ts)| ts.contains(u))))
}

/// There is one skill gain the agent can point to, knowing with her current
/// skills that it achieves `f` everywhere she considers possible.
pub fn explicit_de_re(
    m: &Model,
    w: &WorldId,
    a: &AgentId,
    f: &Formula,
) -> Result<bool, ModelError> {
    let acc = accessible(m, a, w)?;
    let sets = gained_truth_sets(m, a, f);
    Ok(sets
        .iter()
        .any(|(_, _, ts)| acc.iter().all(|u| ts.contains(u))))
}

/// Some skill gain achieves `f` at every world she considers possible *after*
/// the gain — the gained skills participate in forming the knowledge.
pub fn implicit_de_re(
    m: &Model,
    w: &WorldId,
    a: &AgentId,
    f: &Formula,
) -> Result<bool, ModelError> {
    // Validate the world before any quantification.
    m.edge_skills(w, w)?;
    let sets = gained_truth_sets(m, a, f);
    for (_, updated, ts) in &sets {
        if accessible(updated, a, w)?.iter().all(|u| ts.contains(u)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `K_a <+*>_a f`: the modal expression of [`de_dicto`].
pub fn de_dicto_formula(a: &AgentId, f: &Formula) -> Formula {
    Formula::knows(a.clone(), Formula::dia_plus(a.clone(), f.clone()))
}

/// `(==a)_c <+*>_c K_a (==c)_a f` for a helper agent `c` foreign to `a` and
/// `f`: the modal expression of [`explicit_de_re`]. Returns the formula and
/// the helper. The helper banks the candidate gain while `K_a` is still
/// evaluated with `a`'s current skills; the inner copy then hands the banked
/// gain to `a` before `f` is checked.
pub fn explicit_de_re_formula(a: &AgentId, f: &Formula) -> (Formula, AgentId) {
    let mut taken = f.agents();
    taken.insert(a.clone());
    let helper = (0..)
        .map(|i| AgentId::new(format!("_helper{i}")).expect("generated token"))
        .find(|c| !taken.contains(c))
        .expect("some generated name is unused");
    let inner = Formula::copy_skills(a.clone(), helper.clone(), f.clone());
    let formula = Formula::copy_skills(
        helper.clone(),
        a.clone(),
        Formula::dia_plus(helper.clone(), Formula::knows(a.clone(), inner)),
    );
    (formula, helper)
}

/// `<+*>_a K_a f`: the modal expression of [`implicit_de_re`].
pub fn implicit_de_re_formula(a: &AgentId, f: &Formula) -> Formula {
    Formula::dia_plus(a.clone(), Formula::knows(a.clone(), f.clone()))
}
