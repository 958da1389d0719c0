//! Tokenizer for the concrete formula syntax.
//!
//! Words (`[A-Za-z0-9_]+`) are lexed by maximal munch, so `K_a`, `hatK_b`,
//! `C_`, and subscripts such as `_a` arrive as single tokens and the parser
//! classifies them. The four-character operators `<+*>`, `<-*>`, `<=*>` and
//! the bracketed quantifiers `[+*]`, `[-*]`, `[=*]` are lexed whole; `<->` is
//! disambiguated from `<-*>` by one extra character of lookahead.

use super::parser::ParseError;

/// Which of the three set-valued updates an operator token denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum UpdateOp {
    Add,
    Remove,
    Assign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    Word(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Iff,
    Plus,
    Minus,
    Eq,
    EqEq,
    /// `[+*]`, `[-*]`, or `[=*]`.
    BoxOp(UpdateOp),
    /// `<+*>`, `<-*>`, or `<=*>`.
    DiaOp(UpdateOp),
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::BoxOp(UpdateOp::Add) => "`[+*]`".into(),
            Tok::BoxOp(UpdateOp::Remove) => "`[-*]`".into(),
            Tok::BoxOp(UpdateOp::Assign) => "`[=*]`".into(),
            Tok::DiaOp(UpdateOp::Add) => "`<+*>`".into(),
            Tok::DiaOp(UpdateOp::Remove) => "`<-*>`".into(),
            Tok::DiaOp(UpdateOp::Assign) => "`<=*>`".into(),
        }
    }
}

/// A token together with the byte offset where it starts.
#[derive(Debug)]
pub(super) struct Spanned {
    pub pos: usize,
    pub tok: Tok,
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

pub(super) fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let pos = i;
        let b = bytes[i];
        let tok = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            _ if is_word_byte(b) => {
                let mut j = i;
                while j < bytes.len() && is_word_byte(bytes[j]) {
                    j += 1;
                }
                let word = text[i..j].to_string();
                i = j;
                toks.push(Spanned {
                    pos,
                    tok: Tok::Word(word),
                });
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'+' => Tok::Plus,
            b'*' => {
                return Err(ParseError::new(
                    pos,
                    "`*` is only valid inside `[..]` or `<..>` quantifiers",
                ));
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            b'=' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 1;
                    Tok::EqEq
                } else {
                    Tok::Eq
                }
            }
            b'[' => {
                let op = match bytes.get(i + 1) {
                    Some(b'+') => UpdateOp::Add,
                    Some(b'-') => UpdateOp::Remove,
                    Some(b'=') => UpdateOp::Assign,
                    _ => return Err(ParseError::new(pos, "expected `[+*]`, `[-*]`, or `[=*]`")),
                };
                if bytes.get(i + 2) != Some(&b'*') || bytes.get(i + 3) != Some(&b']') {
                    return Err(ParseError::new(pos, "expected `[+*]`, `[-*]`, or `[=*]`"));
                }
                i += 3;
                Tok::BoxOp(op)
            }
            b'<' => match bytes.get(i + 1) {
                Some(b'-') if bytes.get(i + 2) == Some(&b'>') => {
                    i += 2;
                    Tok::Iff
                }
                Some(b'-') if bytes.get(i + 2) == Some(&b'*') => {
                    if bytes.get(i + 3) != Some(&b'>') {
                        return Err(ParseError::new(pos, "expected `<-*>`"));
                    }
                    i += 3;
                    Tok::DiaOp(UpdateOp::Remove)
                }
                Some(b'+') => {
                    if bytes.get(i + 2) != Some(&b'*') || bytes.get(i + 3) != Some(&b'>') {
                        return Err(ParseError::new(pos, "expected `<+*>`"));
                    }
                    i += 3;
                    Tok::DiaOp(UpdateOp::Add)
                }
                Some(b'=') => {
                    if bytes.get(i + 2) != Some(&b'*') || bytes.get(i + 3) != Some(&b'>') {
                        return Err(ParseError::new(pos, "expected `<=*>`"));
                    }
                    i += 3;
                    Tok::DiaOp(UpdateOp::Assign)
                }
                _ => {
                    return Err(ParseError::new(
                        pos,
                        "expected `<->`, `<+*>`, `<-*>`, or `<=*>`",
                    ));
                }
            },
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("unexpected character `{}`", char::from(other)),
                ));
            }
        };
        i += 1;
        toks.push(Spanned { pos, tok });
    }
    Ok(toks)
}
