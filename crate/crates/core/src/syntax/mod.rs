//! Formula syntax: abstract syntax tree, concrete-syntax parser, canonical
//! renderer, and structural analyses (length, mentioned names, fragment).
//!
//! The language extends multi-agent epistemic logic (`K_a`, and the group
//! notions `C`/`D`/`E`/`F` for common, distributed, mutual, and field
//! knowledge) with *skill updates*: modalities that grow (`(+{..})_a`), shrink
//! (`(-{..})_a`), overwrite (`(={..})_a`), or copy (`(==b)_a`) an agent's
//! capability set before evaluating their argument, plus universal quantifiers
//! over nonempty skill sets for each of the three set-valued updates (`[+*]_a`,
//! `[-*]_a`, `[=*]_a`).
//!
//! Only implication and negation are primitive among the connectives;
//! `&`, `|`, `<->`, `true`, `false`, `hatK_a`, `<+*>_a`, `<-*>_a`, and
//! `<=*>_a` are parse-time abbreviations that normalize to the fifteen
//! constructors of [`Formula`]. Rendering always emits the canonical form, so
//! `parse ∘ render` is the identity on every tree.

mod analysis;
mod ident;
mod lexer;
mod parser;

pub use analysis::{formula_length, Fragment, FragmentLetter};
pub use ident::{
    AgentId, AtomId, EmptySet, Group, InvalidToken, NodeId, SkillId, SkillSet, WorldId,
};
pub use parser::{parse_formula, ParseError};

use std::fmt;

/// The atom reserved by the concrete syntax: `true` abbreviates
/// `(p0 -> p0)` and `false` its negation. The parser rejects a bare `p0` so
/// the abbreviations can be recovered unambiguously when rendering.
pub const RESERVED_ATOM: &str = "p0";

/// A formula of the full language, in normalized (sugar-free) form.
///
/// Unary modalities bind tighter than the binary connectives, and every
/// binary connective other than implication is an abbreviation, so the tree
/// below is the whole story: fifteen constructors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// Propositional atom `p`.
    Atom(AtomId),
    /// Negation `~f`.
    Not(Box<Formula>),
    /// Material implication `(f -> g)`; right-associative in the syntax.
    Implies(Box<Formula>, Box<Formula>),
    /// Individual knowledge `K_a f`: `f` holds at every world the agent
    /// cannot distinguish from the current one.
    Knows(AgentId, Box<Formula>),
    /// Common knowledge `C_{..} f`: every finite "everyone knows" iteration.
    Common(Group, Box<Formula>),
    /// Distributed knowledge `D_{..} f`: the group pools all of its skills.
    Distributed(Group, Box<Formula>),
    /// Mutual knowledge `E_{..} f`: every member knows `f`.
    Mutual(Group, Box<Formula>),
    /// Field knowledge `F_{..} f`: knowledge via the skills shared by all
    /// members.
    Field(Group, Box<Formula>),
    /// Skill gain `(+{..})_a f`: add the listed skills to `a`'s capabilities.
    AddSkills(AgentId, SkillSet, Box<Formula>),
    /// Skill loss `(-{..})_a f`: remove the listed skills from `a`'s
    /// capabilities.
    RemoveSkills(AgentId, SkillSet, Box<Formula>),
    /// Skill overwrite `(={..})_a f`: replace `a`'s capabilities by the listed
    /// set.
    AssignSkills(AgentId, SkillSet, Box<Formula>),
    /// Skill copy `(==b)_a f`: replace `a`'s capabilities by `b`'s current
    /// ones.
    CopySkills {
        /// The agent whose capabilities are overwritten.
        learner: AgentId,
        /// The agent whose capabilities are copied.
        source: AgentId,
        arg: Box<Formula>,
    },
    /// Universal gain quantifier `[+*]_a f`: `(+{S})_a f` for every finite
    /// nonempty skill set `S`.
    BoxPlus(AgentId, Box<Formula>),
    /// Universal loss quantifier `[-*]_a f`.
    BoxMinus(AgentId, Box<Formula>),
    /// Universal overwrite quantifier `[=*]_a f`.
    BoxAssign(AgentId, Box<Formula>),
}

impl Formula {
    pub fn atom(p: AtomId) -> Self {
        Formula::Atom(p)
    }

    #[allow(clippy::should_implement_trait)] // a constructor, not arithmetic negation
    pub fn neg(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn knows(a: AgentId, f: Formula) -> Self {
        Formula::Knows(a, Box::new(f))
    }

    pub fn common(g: Group, f: Formula) -> Self {
        Formula::Common(g, Box::new(f))
    }

    pub fn distributed(g: Group, f: Formula) -> Self {
        Formula::Distributed(g, Box::new(f))
    }

    pub fn mutual(g: Group, f: Formula) -> Self {
        Formula::Mutual(g, Box::new(f))
    }

    pub fn field(g: Group, f: Formula) -> Self {
        Formula::Field(g, Box::new(f))
    }

    pub fn add_skills(a: AgentId, s: SkillSet, f: Formula) -> Self {
        Formula::AddSkills(a, s, Box::new(f))
    }

    pub fn remove_skills(a: AgentId, s: SkillSet, f: Formula) -> Self {
        Formula::RemoveSkills(a, s, Box::new(f))
    }

    pub fn assign_skills(a: AgentId, s: SkillSet, f: Formula) -> Self {
        Formula::AssignSkills(a, s, Box::new(f))
    }

    pub fn copy_skills(learner: AgentId, source: AgentId, f: Formula) -> Self {
        Formula::CopySkills {
            learner,
            source,
            arg: Box::new(f),
        }
    }

    pub fn box_plus(a: AgentId, f: Formula) -> Self {
        Formula::BoxPlus(a, Box::new(f))
    }

    pub fn box_minus(a: AgentId, f: Formula) -> Self {
        Formula::BoxMinus(a, Box::new(f))
    }

    pub fn box_assign(a: AgentId, f: Formula) -> Self {
        Formula::BoxAssign(a, Box::new(f))
    }

    // ---- Abbreviations. Each normalizes immediately; none has its own
    // constructor, so two formulas are logically-equal-by-definition exactly
    // when the trees are equal.

    /// `true`, normalized to `(p0 -> p0)`.
    pub fn top() -> Self {
        let p = AtomId::new(RESERVED_ATOM).expect("reserved atom is a valid token");
        Formula::implies(Formula::Atom(p.clone()), Formula::Atom(p))
    }

    /// `false`, normalized to `~(p0 -> p0)`.
    pub fn bottom() -> Self {
        Formula::neg(Formula::top())
    }

    /// Conjunction `(f & g)`, normalized to `~(f -> ~g)`.
    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::neg(Formula::implies(l, Formula::neg(r)))
    }

    /// Disjunction `(f | g)`, normalized to `(~f -> g)`.
    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::implies(Formula::neg(l), r)
    }

    /// Biconditional `(f <-> g)`, normalized to `((f -> g) & (g -> f))`.
    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::and(
            Formula::implies(l.clone(), r.clone()),
            Formula::implies(r, l),
        )
    }

    /// Epistemic possibility `hatK_a f`, normalized to `~K_a ~f`.
    pub fn hat_knows(a: AgentId, f: Formula) -> Self {
        Formula::neg(Formula::knows(a, Formula::neg(f)))
    }

    /// Existential gain `<+*>_a f`, normalized to `~[+*]_a ~f`.
    pub fn dia_plus(a: AgentId, f: Formula) -> Self {
        Formula::neg(Formula::box_plus(a, Formula::neg(f)))
    }

    /// Existential loss `<-*>_a f`, normalized to `~[-*]_a ~f`.
    pub fn dia_minus(a: AgentId, f: Formula) -> Self {
        Formula::neg(Formula::box_minus(a, Formula::neg(f)))
    }

    /// Existential overwrite `<=*>_a f`, normalized to `~[=*]_a ~f`.
    pub fn dia_assign(a: AgentId, f: Formula) -> Self {
        Formula::neg(Formula::box_assign(a, Formula::neg(f)))
    }

    /// Left-associated conjunction of all formulas; `true` when empty.
    pub fn and_all(fs: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::top(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-associated disjunction of all formulas; `false` when empty.
    pub fn or_all(fs: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::bottom(),
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Direct subformulas, in syntactic order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Not(f) => vec![f],
            Formula::Implies(l, r) => vec![l, r],
            Formula::Knows(_, f)
            | Formula::Common(_, f)
            | Formula::Distributed(_, f)
            | Formula::Mutual(_, f)
            | Formula::Field(_, f)
            | Formula::AddSkills(_, _, f)
            | Formula::RemoveSkills(_, _, f)
            | Formula::AssignSkills(_, _, f)
            | Formula::CopySkills { arg: f, .. }
            | Formula::BoxPlus(_, f)
            | Formula::BoxMinus(_, f)
            | Formula::BoxAssign(_, f) => vec![f],
        }
    }

    fn is_top_shape(&self) -> bool {
        matches!(
            self,
            Formula::Implies(l, r)
                if matches!((l.as_ref(), r.as_ref()),
                    (Formula::Atom(p), Formula::Atom(q))
                        if p.as_str() == RESERVED_ATOM && q.as_str() == RESERVED_ATOM)
        )
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_formula(text)
    }
}

impl fmt::Display for Formula {
    /// Canonical concrete syntax: implications fully parenthesized, group and
    /// skill lists sorted, one space after each modality, and the reserved
    /// shapes printed back as `true`/`false`. Parsing the output yields the
    /// same tree.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_top_shape() {
            return out.write_str("true");
        }
        match self {
            Formula::Not(f) if f.is_top_shape() => out.write_str("false"),
            Formula::Atom(p) => write!(out, "{p}"),
            Formula::Not(f) => write!(out, "~{f}"),
            Formula::Implies(l, r) => write!(out, "({l} -> {r})"),
            Formula::Knows(a, f) => write!(out, "K_{a} {f}"),
            Formula::Common(g, f) => write!(out, "C_{g} {f}"),
            Formula::Distributed(g, f) => write!(out, "D_{g} {f}"),
            Formula::Mutual(g, f) => write!(out, "E_{g} {f}"),
            Formula::Field(g, f) => write!(out, "F_{g} {f}"),
            Formula::AddSkills(a, s, f) => write!(out, "(+{s})_{a} {f}"),
            Formula::RemoveSkills(a, s, f) => write!(out, "(-{s})_{a} {f}"),
            Formula::AssignSkills(a, s, f) => write!(out, "(={s})_{a} {f}"),
            Formula::CopySkills {
                learner,
                source,
                arg,
            } => {
                write!(out, "(=={source})_{learner} {arg}")
            }
            Formula::BoxPlus(a, f) => write!(out, "[+*]_{a} {f}"),
            Formula::BoxMinus(a, f) => write!(out, "[-*]_{a} {f}"),
            Formula::BoxAssign(a, f) => write!(out, "[=*]_{a} {f}"),
        }
    }
}

/// Renders a formula in canonical concrete syntax. Equivalent to
/// `formula.to_string()`.
pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}
