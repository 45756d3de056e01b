//! Parsing named lambda terms and resolving names to scope positions.
//!
//! Grammar, with application associating to the left:
//!
//! ```text
//! term ::= lam | app
//! lam  ::= ('\' | 'λ') IDENT '.' term
//! app  ::= atom atom*
//! atom ::= IDENT | '(' term ')'
//! ```
//!
//! Identifiers are ASCII `[A-Za-z_][A-Za-z0-9_']*`. Resolution turns names
//! into oldest-first scope positions; the innermost binding of a name
//! wins, and free names must appear in the supplied environment.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{db_app, db_lam, db_var};
use crate::universe::TermDB;

/// A term as written: names, not positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedTerm {
    Var(String),
    Lam(String, Box<NamedTerm>),
    App(Box<NamedTerm>, Box<NamedTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolveError {
    Unbound { name: String },
}

impl fmt::Display for ResolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResolveError::Unbound { name } => write!(f, "unbound name: {name}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ResolveError {}

struct Cursor {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor {
            chars: src.char_indices().collect(),
            at: 0,
            end: src.len(),
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|(_, c)| *c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.at += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            msg: String::from(msg),
        })
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_rest(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Parse a single term; trailing input is an error.
pub fn parse(input: &str) -> Result<NamedTerm, ParseError> {
    let mut cur = Cursor::new(input);
    let t = term(&mut cur)?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return cur.err("expected end of input");
    }
    Ok(t)
}

fn term(cur: &mut Cursor) -> Result<NamedTerm, ParseError> {
    cur.skip_ws();
    match cur.peek() {
        Some('\\') | Some('λ') => lam(cur),
        _ => app(cur),
    }
}

fn lam(cur: &mut Cursor) -> Result<NamedTerm, ParseError> {
    cur.bump();
    cur.skip_ws();
    let name = ident(cur)?;
    cur.skip_ws();
    if cur.bump() != Some('.') {
        return cur.err("expected '.' after binder");
    }
    Ok(NamedTerm::Lam(name, Box::new(term(cur)?)))
}

fn app(cur: &mut Cursor) -> Result<NamedTerm, ParseError> {
    let mut t = atom(cur)?;
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(c) if is_ident_start(c) || c == '(' => {
                let a = atom(cur)?;
                t = NamedTerm::App(Box::new(t), Box::new(a));
            }
            _ => return Ok(t),
        }
    }
}

fn atom(cur: &mut Cursor) -> Result<NamedTerm, ParseError> {
    cur.skip_ws();
    match cur.peek() {
        Some('(') => {
            cur.bump();
            let t = term(cur)?;
            cur.skip_ws();
            if cur.bump() != Some(')') {
                return cur.err("expected ')'");
            }
            Ok(t)
        }
        Some(c) if is_ident_start(c) => Ok(NamedTerm::Var(ident(cur)?)),
        _ => cur.err("expected a term"),
    }
}

fn ident(cur: &mut Cursor) -> Result<String, ParseError> {
    match cur.peek() {
        Some(c) if is_ident_start(c) => {
            let mut name = String::new();
            name.push(c);
            cur.bump();
            while matches!(cur.peek(), Some(c) if is_ident_rest(c)) {
                name.push(cur.bump().expect("peeked"));
            }
            Ok(name)
        }
        _ => cur.err("expected an identifier"),
    }
}

/// Turn names into scope positions. `env` lists the free names, oldest
/// first; binders extend the scope on the right, and the innermost
/// occurrence of a repeated name shadows the others.
pub fn resolve(t: &NamedTerm, env: &[String]) -> Result<TermDB, ResolveError> {
    fn go(t: &NamedTerm, names: &mut Vec<String>) -> Result<TermDB, ResolveError> {
        match t {
            NamedTerm::Var(n) => match names.iter().rposition(|m| m == n) {
                Some(p) => Ok(db_var(p)),
                None => Err(ResolveError::Unbound { name: n.clone() }),
            },
            NamedTerm::Lam(n, b) => {
                names.push(n.clone());
                let body = go(b, names);
                names.pop();
                Ok(db_lam(body?))
            }
            NamedTerm::App(f, s) => Ok(db_app(go(f, names)?, go(s, names)?)),
        }
    }
    let mut names = env.to_vec();
    go(t, &mut names)
}
