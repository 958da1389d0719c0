//! Recursive-descent parser for the concrete formula syntax.
//!
//! Precedence, loosest to tightest: `<->` (left-associative), `->`
//! (right-associative), `|`, `&`, then the prefix operators (`~` and all
//! modalities), which bind tighter than every binary connective. A modality's
//! argument is the next prefix-level formula, so `K_a p & q` reads as
//! `(K_a p) & q` and `K_a (p & q)` needs the parentheses.
//!
//! All abbreviations (`&`, `|`, `<->`, `true`, `false`, `hatK_a`, `<+*>_a`,
//! `<-*>_a`, `<=*>_a`) normalize during parsing; the returned tree uses only
//! the fifteen primitive constructors.

use super::ident::{AgentId, AtomId, Group, SkillId, SkillSet};
use super::lexer::{lex, Spanned, Tok, UpdateOp};
use super::{Formula, RESERVED_ATOM};

/// A syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub(super) fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

/// Parses a formula from concrete syntax.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if let Some(s) = p.peek_spanned() {
        return Err(ParseError::new(
            s.pos,
            format!("unexpected {} after formula", s.tok.describe()),
        ));
    }
    Ok(f)
}

impl Formula {
    /// Parses a formula from concrete syntax. See [`parse_formula`].
    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        parse_formula(text)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    i: usize,
    /// Byte length of the input, reported as the position of end-of-input
    /// errors.
    end: usize,
}

impl Parser {
    fn peek_spanned(&self) -> Option<&Spanned> {
        self.toks.get(self.i)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.i + 1).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |s| s.pos)
    }

    fn bump(&mut self) -> &Spanned {
        let s = &self.toks[self.i];
        self.i += 1;
        s
    }

    fn eat(&mut self, expected: &Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == expected => {
                self.i += 1;
                Ok(())
            }
            Some(t) => Err(ParseError::new(
                self.pos(),
                format!("expected {what}, found {}", t.describe()),
            )),
            None => Err(ParseError::new(
                self.end,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn word(&mut self, what: &str) -> Result<(usize, String), ParseError> {
        match self.peek() {
            Some(Tok::Word(_)) => {
                let pos = self.pos();
                let Spanned {
                    tok: Tok::Word(w), ..
                } = self.bump()
                else {
                    unreachable!()
                };
                Ok((pos, w.clone()))
            }
            Some(t) => Err(ParseError::new(
                self.pos(),
                format!("expected {what}, found {}", t.describe()),
            )),
            None => Err(ParseError::new(
                self.end,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    // formula := iff-chain (left-associative)
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.implication()?;
        while self.peek() == Some(&Tok::Iff) {
            self.i += 1;
            let r = self.implication()?;
            l = Formula::iff(l, r);
        }
        Ok(l)
    }

    // implication := disjunction ('->' implication)?   (right-associative)
    fn implication(&mut self) -> Result<Formula, ParseError> {
        let l = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.i += 1;
            let r = self.implication()?;
            return Ok(Formula::implies(l, r));
        }
        Ok(l)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.conjunction()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.i += 1;
            let r = self.conjunction()?;
            l = Formula::or(l, r);
        }
        Ok(l)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.prefixed()?;
        while self.peek() == Some(&Tok::Amp) {
            self.i += 1;
            let r = self.prefixed()?;
            l = Formula::and(l, r);
        }
        Ok(l)
    }

    // prefixed := ('~' | modality)* primary, folded right-to-left
    fn prefixed(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.i += 1;
                Ok(Formula::neg(self.prefixed()?))
            }
            Some(Tok::Word(w)) if w.len() > 2 && w.starts_with("K_") => {
                let (pos, w) = self.word("knowledge operator")?;
                let agent = ident_at(pos, AgentId::new(&w[2..]))?;
                Ok(Formula::knows(agent, self.prefixed()?))
            }
            Some(Tok::Word(w)) if w.len() > 5 && w.starts_with("hatK_") => {
                let (pos, w) = self.word("knowledge operator")?;
                let agent = ident_at(pos, AgentId::new(&w[5..]))?;
                Ok(Formula::hat_knows(agent, self.prefixed()?))
            }
            Some(Tok::Word(w)) if matches!(w.as_str(), "K_" | "hatK_") => Err(ParseError::new(
                self.pos(),
                format!("`{w}` is missing its agent name"),
            )),
            Some(Tok::Word(w))
                if matches!(w.as_str(), "C_" | "D_" | "E_" | "F_")
                    && self.peek2() == Some(&Tok::LBrace) =>
            {
                let (_, w) = self.word("group operator")?;
                let group = self.group()?;
                let arg = self.prefixed()?;
                Ok(match w.as_str() {
                    "C_" => Formula::common(group, arg),
                    "D_" => Formula::distributed(group, arg),
                    "E_" => Formula::mutual(group, arg),
                    _ => Formula::field(group, arg),
                })
            }
            Some(Tok::BoxOp(op)) => {
                let op = *op;
                self.i += 1;
                let agent = self.subscript()?;
                let arg = self.prefixed()?;
                Ok(match op {
                    UpdateOp::Add => Formula::box_plus(agent, arg),
                    UpdateOp::Remove => Formula::box_minus(agent, arg),
                    UpdateOp::Assign => Formula::box_assign(agent, arg),
                })
            }
            Some(Tok::DiaOp(op)) => {
                let op = *op;
                self.i += 1;
                let agent = self.subscript()?;
                let arg = self.prefixed()?;
                Ok(match op {
                    UpdateOp::Add => Formula::dia_plus(agent, arg),
                    UpdateOp::Remove => Formula::dia_minus(agent, arg),
                    UpdateOp::Assign => Formula::dia_assign(agent, arg),
                })
            }
            Some(Tok::LParen)
                if matches!(
                    self.peek2(),
                    Some(Tok::Plus | Tok::Minus | Tok::Eq | Tok::EqEq)
                ) =>
            {
                self.update_modality()
            }
            _ => self.primary(),
        }
    }

    // update := '(' ('+'|'-'|'=') '{' skills '}' ')' subscript prefixed
    //         | '(' '==' word ')' subscript prefixed
    fn update_modality(&mut self) -> Result<Formula, ParseError> {
        self.eat(&Tok::LParen, "`(`")?;
        let op = self.bump().tok.clone();
        match op {
            Tok::EqEq => {
                let (pos, w) = self.word("source agent name")?;
                let source = ident_at(pos, AgentId::new(w))?;
                self.eat(&Tok::RParen, "`)`")?;
                let learner = self.subscript()?;
                let arg = self.prefixed()?;
                Ok(Formula::copy_skills(learner, source, arg))
            }
            Tok::Plus | Tok::Minus | Tok::Eq => {
                let skills = self.skill_set()?;
                self.eat(&Tok::RParen, "`)`")?;
                let agent = self.subscript()?;
                let arg = self.prefixed()?;
                Ok(match op {
                    Tok::Plus => Formula::add_skills(agent, skills, arg),
                    Tok::Minus => Formula::remove_skills(agent, skills, arg),
                    _ => Formula::assign_skills(agent, skills, arg),
                })
            }
            _ => unreachable!("guarded by peek2 in prefixed()"),
        }
    }

    // subscript := word starting with '_', e.g. `_a`
    fn subscript(&mut self) -> Result<AgentId, ParseError> {
        let (pos, w) = self.word("`_agent` subscript")?;
        if !w.starts_with('_') || w.len() < 2 {
            return Err(ParseError::new(
                pos,
                format!("expected `_agent` subscript, found `{w}`"),
            ));
        }
        ident_at(pos, AgentId::new(&w[1..]))
    }

    // group := '{' word (',' word)* '}'
    fn group(&mut self) -> Result<Group, ParseError> {
        let open = self.pos();
        self.eat(&Tok::LBrace, "`{`")?;
        if self.peek() == Some(&Tok::RBrace) {
            return Err(ParseError::new(open, "agent group must not be empty"));
        }
        let mut agents = Vec::new();
        loop {
            let (pos, w) = self.word("agent name")?;
            agents.push(ident_at(pos, AgentId::new(w))?);
            if self.peek() == Some(&Tok::Comma) {
                self.i += 1;
            } else {
                break;
            }
        }
        self.eat(&Tok::RBrace, "`}`")?;
        Ok(Group::new(agents).expect("at least one agent was parsed"))
    }

    // skill_set := '{' word (',' word)* '}'
    fn skill_set(&mut self) -> Result<SkillSet, ParseError> {
        let open = self.pos();
        self.eat(&Tok::LBrace, "`{`")?;
        if self.peek() == Some(&Tok::RBrace) {
            return Err(ParseError::new(open, "skill set must not be empty"));
        }
        let mut skills = Vec::new();
        loop {
            let (pos, w) = self.word("skill name")?;
            skills.push(ident_at(pos, SkillId::new(w))?);
            if self.peek() == Some(&Tok::Comma) {
                self.i += 1;
            } else {
                break;
            }
        }
        self.eat(&Tok::RBrace, "`}`")?;
        Ok(SkillSet::new(skills).expect("at least one skill was parsed"))
    }

    // primary := atom | 'true' | 'false' | '(' formula ')'
    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.i += 1;
                let f = self.formula()?;
                self.eat(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Word(w)) => match w.as_str() {
                "true" => {
                    self.i += 1;
                    Ok(Formula::top())
                }
                "false" => {
                    self.i += 1;
                    Ok(Formula::bottom())
                }
                RESERVED_ATOM => Err(ParseError::new(
                    self.pos(),
                    format!(
                        "atom `{RESERVED_ATOM}` is reserved for the `true`/`false` abbreviations"
                    ),
                )),
                _ => {
                    let (pos, w) = self.word("atom")?;
                    Ok(Formula::Atom(ident_at(pos, AtomId::new(w))?))
                }
            },
            Some(t) => Err(ParseError::new(
                self.pos(),
                format!("expected a formula, found {}", t.describe()),
            )),
            None => Err(ParseError::new(
                self.end,
                "expected a formula, found end of input",
            )),
        }
    }
}

fn ident_at<T>(pos: usize, r: Result<T, super::ident::InvalidToken>) -> Result<T, ParseError> {
    r.map_err(|e| ParseError::new(pos, e.to_string()))
}
