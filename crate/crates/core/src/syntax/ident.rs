//! Validated identifier newtypes shared across formulas, models, and graphs.
//!
//! Every user-facing name (atoms, agents, skills, worlds, graph nodes) is a
//! token matching `[A-Za-z0-9_]+`. Wrapping each kind in its own newtype keeps
//! the APIs honest: an agent name cannot silently flow into a slot expecting a
//! skill.

use std::collections::BTreeSet;
use std::fmt;

/// Error returned when a name is empty or contains a character outside
/// `[A-Za-z0-9_]`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid token `{0}`: expected a nonempty string of [A-Za-z0-9_]")]
pub struct InvalidToken(pub String);

fn validate_token(name: &str) -> Result<(), InvalidToken> {
    if name.is_empty() || !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
        return Err(InvalidToken(name.to_string()));
    }
    Ok(())
}

macro_rules! ident_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            /// Validates and wraps a raw token.
            pub fn new(name: impl Into<String>) -> Result<Self, InvalidToken> {
                let name = name.into();
                validate_token(&name)?;
                Ok(Self(name))
            }

            /// The underlying token.
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl std::str::FromStr for $name {
            type Err = InvalidToken;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::new(s)
            }
        }
    };
}

ident_type! {
    /// A propositional atom name such as `p3`.
    ///
    /// The atom `p0` is reserved by the concrete syntax (it anchors the
    /// `true`/`false` abbreviations) and is rejected by the parser, but the
    /// type itself permits it so that models mentioning `p0` still load.
    AtomId
}

ident_type! {
    /// An agent name such as `a` or `bob`.
    AgentId
}

ident_type! {
    /// A skill name such as `s1`.
    SkillId
}

ident_type! {
    /// A world name in a model, such as `w1`.
    WorldId
}

ident_type! {
    /// A node name in a rooted game graph.
    NodeId
}

/// Error for constructors that require a nonempty set.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("empty set: {0} must contain at least one element")]
pub struct EmptySet(pub &'static str);

/// A nonempty, deduplicated group of agents, as written in `C_{a,b}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group(BTreeSet<AgentId>);

impl Group {
    /// Builds a group from any collection of agents; fails on the empty
    /// collection.
    pub fn new(agents: impl IntoIterator<Item = AgentId>) -> Result<Self, EmptySet> {
        let set: BTreeSet<AgentId> = agents.into_iter().collect();
        if set.is_empty() {
            return Err(EmptySet("agent group"));
        }
        Ok(Self(set))
    }

    /// The members in sorted order.
    pub fn members(&self) -> &BTreeSet<AgentId> {
        &self.0
    }

    pub fn contains(&self, agent: &AgentId) -> bool {
        self.0.contains(agent)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AgentId> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Group {
    /// Renders as the brace list used by the concrete syntax: `{a,b}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", itertools::join(self.0.iter(), ","))
    }
}

/// A nonempty, deduplicated set of skills, as written in `(+{s1,s2})_a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SkillSet(BTreeSet<SkillId>);

impl SkillSet {
    /// Builds a skill set from any collection of skills; fails on the empty
    /// collection.
    pub fn new(skills: impl IntoIterator<Item = SkillId>) -> Result<Self, EmptySet> {
        let set: BTreeSet<SkillId> = skills.into_iter().collect();
        if set.is_empty() {
            return Err(EmptySet("skill set"));
        }
        Ok(Self(set))
    }

    /// The skills in sorted order.
    pub fn skills(&self) -> &BTreeSet<SkillId> {
        &self.0
    }

    pub fn contains(&self, skill: &SkillId) -> bool {
        self.0.contains(skill)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SkillId> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for SkillSet {
    /// Renders as the brace list used by the concrete syntax: `{s1,s2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", itertools::join(self.0.iter(), ","))
    }
}
