//! Structural analyses over formulas: symbolic length, mentioned names, and
//! the operator fragment a formula lives in.

use std::collections::BTreeSet;
use std::fmt;

use super::ident::{AgentId, Group, SkillId};
use super::Formula;

/// The operators that extend the base language (atoms, `~`, `->`, `K_a`).
/// A formula's [`Fragment`] is the set of these letters it uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FragmentLetter {
    Common,
    Distributed,
    Mutual,
    Field,
    AddSkills,
    RemoveSkills,
    AssignSkills,
    CopySkills,
    BoxPlus,
    BoxMinus,
    BoxAssign,
}

impl FragmentLetter {
    /// The concrete-syntax token naming the operator family.
    pub fn token(self) -> &'static str {
        match self {
            FragmentLetter::Common => "C",
            FragmentLetter::Distributed => "D",
            FragmentLetter::Mutual => "E",
            FragmentLetter::Field => "F",
            FragmentLetter::AddSkills => "+",
            FragmentLetter::RemoveSkills => "-",
            FragmentLetter::AssignSkills => "=",
            FragmentLetter::CopySkills => "==",
            FragmentLetter::BoxPlus => "[+*]",
            FragmentLetter::BoxMinus => "[-*]",
            FragmentLetter::BoxAssign => "[=*]",
        }
    }
}

/// The set of extension operators occurring in a formula.
///
/// Displays as a language name: `L` for the base language, otherwise the
/// letters joined in a fixed order, e.g. `L_{F+[+*]}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Fragment(BTreeSet<FragmentLetter>);

impl Fragment {
    pub fn letters(&self) -> &BTreeSet<FragmentLetter> {
        &self.0
    }

    pub fn contains(&self, letter: FragmentLetter) -> bool {
        self.0.contains(&letter)
    }

    /// True for formulas of the base epistemic language.
    pub fn is_base(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Fragment) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("L");
        }
        f.write_str("L_{")?;
        for letter in &self.0 {
            f.write_str(letter.token())?;
        }
        f.write_str("}")
    }
}

impl Formula {
    /// The number of symbols in the formula, counting brackets, subscripted
    /// names, and set braces/commas, with abbreviations expanded: atoms count
    /// 1; `~f` adds 1; `(f -> g)` adds 3; `K_a f` adds 2; a group operator
    /// adds `2|G| + 2`; a set update adds `2|S| + 5`; a copy update adds 5;
    /// a quantifier adds 2.
    pub fn length(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) => f.length() + 1,
            Formula::Implies(l, r) => l.length() + r.length() + 3,
            Formula::Knows(_, f) => f.length() + 2,
            Formula::Common(g, f)
            | Formula::Distributed(g, f)
            | Formula::Mutual(g, f)
            | Formula::Field(g, f) => f.length() + 2 * g.len() + 2,
            Formula::AddSkills(_, s, f)
            | Formula::RemoveSkills(_, s, f)
            | Formula::AssignSkills(_, s, f) => 2 * s.len() + f.length() + 5,
            Formula::CopySkills { arg, .. } => arg.length() + 5,
            Formula::BoxPlus(_, f) | Formula::BoxMinus(_, f) | Formula::BoxAssign(_, f) => {
                f.length() + 2
            }
        }
    }

    /// Every agent mentioned anywhere in the formula: modal subscripts, group
    /// members, update subscripts, and copy sources.
    pub fn agents(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<AgentId>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Not(f) => f.collect_agents(out),
            Formula::Implies(l, r) => {
                l.collect_agents(out);
                r.collect_agents(out);
            }
            Formula::Knows(a, f)
            | Formula::AddSkills(a, _, f)
            | Formula::RemoveSkills(a, _, f)
            | Formula::AssignSkills(a, _, f)
            | Formula::BoxPlus(a, f)
            | Formula::BoxMinus(a, f)
            | Formula::BoxAssign(a, f) => {
                out.insert(a.clone());
                f.collect_agents(out);
            }
            Formula::Common(g, f)
            | Formula::Distributed(g, f)
            | Formula::Mutual(g, f)
            | Formula::Field(g, f) => {
                out.extend(g.iter().cloned());
                f.collect_agents(out);
            }
            Formula::CopySkills {
                learner,
                source,
                arg,
            } => {
                out.insert(learner.clone());
                out.insert(source.clone());
                arg.collect_agents(out);
            }
        }
    }

    /// Every skill mentioned literally in a set update.
    pub fn skills(&self) -> BTreeSet<SkillId> {
        let mut out = BTreeSet::new();
        self.collect_skills(&mut out);
        out
    }

    fn collect_skills(&self, out: &mut BTreeSet<SkillId>) {
        if let Formula::AddSkills(_, s, _)
        | Formula::RemoveSkills(_, s, _)
        | Formula::AssignSkills(_, s, _) = self
        {
            out.extend(s.iter().cloned());
        }
        for child in self.children() {
            child.collect_skills(out);
        }
    }

    /// Every group appearing under any of the four group operators.
    pub fn groups(&self) -> BTreeSet<Group> {
        let mut out = BTreeSet::new();
        self.collect_groups(false, &mut out);
        out
    }

    /// The groups appearing under `C` or `E` — exactly the ones whose
    /// evaluation chains one-step group edges, so exactly the ones a
    /// reachability view needs to track.
    pub fn reachability_groups(&self) -> BTreeSet<Group> {
        let mut out = BTreeSet::new();
        self.collect_groups(true, &mut out);
        out
    }

    fn collect_groups(&self, chained_only: bool, out: &mut BTreeSet<Group>) {
        match self {
            Formula::Common(g, _) | Formula::Mutual(g, _) => {
                out.insert(g.clone());
            }
            Formula::Distributed(g, _) | Formula::Field(g, _) if !chained_only => {
                out.insert(g.clone());
            }
            _ => {}
        }
        for child in self.children() {
            child.collect_groups(chained_only, out);
        }
    }

    /// The set of extension operators used by the formula.
    pub fn fragment(&self) -> Fragment {
        let mut letters = BTreeSet::new();
        self.collect_letters(&mut letters);
        Fragment(letters)
    }

    fn collect_letters(&self, out: &mut BTreeSet<FragmentLetter>) {
        let letter = match self {
            Formula::Common(..) => Some(FragmentLetter::Common),
            Formula::Distributed(..) => Some(FragmentLetter::Distributed),
            Formula::Mutual(..) => Some(FragmentLetter::Mutual),
            Formula::Field(..) => Some(FragmentLetter::Field),
            Formula::AddSkills(..) => Some(FragmentLetter::AddSkills),
            Formula::RemoveSkills(..) => Some(FragmentLetter::RemoveSkills),
            Formula::AssignSkills(..) => Some(FragmentLetter::AssignSkills),
            Formula::CopySkills { .. } => Some(FragmentLetter::CopySkills),
            Formula::BoxPlus(..) => Some(FragmentLetter::BoxPlus),
            Formula::BoxMinus(..) => Some(FragmentLetter::BoxMinus),
            Formula::BoxAssign(..) => Some(FragmentLetter::BoxAssign),
            _ => None,
        };
        out.extend(letter);
        for child in self.children() {
            child.collect_letters(out);
        }
    }
}

/// The symbolic length of a formula. Equivalent to `f.length()`.
pub fn formula_length(f: &Formula) -> usize {
    f.length()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn agents(names: &[&str]) -> BTreeSet<AgentId> {
        names.iter().map(|n| AgentId::new(*n).unwrap()).collect()
    }

    #[test]
    fn worked_length_example() {
        let f = parse_formula("p -> C_{a,b,c} q").unwrap();
        assert_eq!(f.length(), 13);
    }

    #[test]
    fn length_counts_abbreviations_expanded() {
        // (p & q) = ~(p -> ~q): 1 + (1 + 1 + 1 + 3) = 7
        assert_eq!(parse_formula("p & q").unwrap().length(), 7);
        // true = (p0 -> p0): 5
        assert_eq!(parse_formula("true").unwrap().length(), 5);
        // hatK_a p = ~K_a ~p: 1 + (1 + 1) + 2 = 5
        assert_eq!(parse_formula("hatK_a p").unwrap().length(), 5);
    }

    #[test]
    fn length_of_updates_and_quantifiers() {
        // (+{s1,s2})_a p: 2*2 + 1 + 5 = 10
        assert_eq!(parse_formula("(+{s1,s2})_a p").unwrap().length(), 10);
        // (==b)_a p: 1 + 5 = 6
        assert_eq!(parse_formula("(==b)_a p").unwrap().length(), 6);
        // [=*]_a p: 1 + 2 = 3
        assert_eq!(parse_formula("[=*]_a p").unwrap().length(), 3);
    }

    #[test]
    fn collects_agents_from_every_position() {
        let f = parse_formula("K_a (p -> (==c)_b [+*]_d E_{e,f} q)").unwrap();
        assert_eq!(f.agents(), agents(&["a", "b", "c", "d", "e", "f"]));
    }

    #[test]
    fn collects_skills_from_update_literals_only() {
        let f = parse_formula("(+{s1})_a (-{s2,s3})_b K_a (={s1,s9})_c p").unwrap();
        let expected: BTreeSet<SkillId> = ["s1", "s2", "s3", "s9"]
            .iter()
            .map(|s| SkillId::new(*s).unwrap())
            .collect();
        assert_eq!(f.skills(), expected);
        assert!(parse_formula("K_a p").unwrap().skills().is_empty());
    }

    #[test]
    fn group_collection_distinguishes_chained_operators() {
        let f = parse_formula("C_{a,b} p & E_{b,c} q & D_{c,d} r & F_{d,e} s").unwrap();
        assert_eq!(f.groups().len(), 4);
        let chained = f.reachability_groups();
        assert_eq!(chained.len(), 2);
        let ab = Group::new(agents(&["a", "b"])).unwrap();
        let bc = Group::new(agents(&["b", "c"])).unwrap();
        assert!(chained.contains(&ab) && chained.contains(&bc));
    }

    #[test]
    fn fragment_tracks_extension_operators() {
        assert!(parse_formula("K_a ~p -> q").unwrap().fragment().is_base());
        let f = parse_formula("F_{a,b} (+{s1})_a p").unwrap().fragment();
        assert_eq!(f.to_string(), "L_{F+}");
        assert!(f.contains(FragmentLetter::Field));
        assert!(f.contains(FragmentLetter::AddSkills));
        assert!(!f.contains(FragmentLetter::Common));
        // Duals normalize to their box quantifiers.
        let g = parse_formula("<+*>_a p").unwrap().fragment();
        assert_eq!(g.to_string(), "L_{[+*]}");
    }

    #[test]
    fn fragment_of_children_is_contained_in_parent() {
        let f = parse_formula("C_{a,b} ((+{s1})_a p -> [-*]_b q)").unwrap();
        let frag = f.fragment();
        for child in f.children() {
            assert!(child.fragment().is_subset(&frag));
        }
    }
}
