//! S-expression interchange for co-de-Bruijn lambda terms.
//!
//! The grammar mirrors the term structure one node per list:
//!
//! ```text
//! wrapped ::= (up term BITS)
//! term    ::= (var (up only BITS) (up body BITS) SHAPE)
//!           | (con body)
//! body    ::= unit
//!           | (pair (up body BITS) (up body BITS) SHAPE)
//!           | (bind BITS term)
//!           | (NAME body)                       ; constructor tag, e.g. lam, app
//! BITS    ::= ε | [01]+                          ; a thinning, oldest bit first
//! SHAPE   ::= ε | [LRB]+                         ; a cover, oldest position first
//! ```
//!
//! Reading rebuilds the raw structures without validity checks, so files
//! with deliberately broken covers load fine and are rejected by `check`;
//! every scope is a run of the lambda calculus's one variable kind, wide
//! enough for the bit string at hand.

use std::fmt;
use std::sync::Arc;

use codebruijn::lam::leaf_scope;
use codebruijn::{Bind, BodyR, Cover, Part, RPair, Relev, Tag, TermR, Thinning, VarLeaf};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SexpError {
    pub msg: String,
}

impl SexpError {
    fn new(msg: impl Into<String>) -> Self {
        SexpError { msg: msg.into() }
    }
}

impl fmt::Display for SexpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed s-expression: {}", self.msg)
    }
}

impl std::error::Error for SexpError {}

pub fn parse_sexp(src: &str) -> Result<Sexp, SexpError> {
    let chars: Vec<char> = src.chars().collect();
    let mut at = 0;
    let s = parse_at(&chars, &mut at)?;
    while at < chars.len() {
        if !chars[at].is_whitespace() {
            return Err(SexpError::new("trailing input after the term"));
        }
        at += 1;
    }
    Ok(s)
}

fn parse_at(chars: &[char], at: &mut usize) -> Result<Sexp, SexpError> {
    while *at < chars.len() && chars[*at].is_whitespace() {
        *at += 1;
    }
    match chars.get(*at) {
        None => Err(SexpError::new("unexpected end of input")),
        Some('(') => {
            *at += 1;
            let mut items = Vec::new();
            loop {
                while *at < chars.len() && chars[*at].is_whitespace() {
                    *at += 1;
                }
                match chars.get(*at) {
                    None => return Err(SexpError::new("unclosed '('")),
                    Some(')') => {
                        *at += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(parse_at(chars, at)?),
                }
            }
        }
        Some(')') => Err(SexpError::new("unexpected ')'")),
        Some(_) => {
            let start = *at;
            while *at < chars.len() && !chars[*at].is_whitespace() && chars[*at] != '(' && chars[*at] != ')' {
                *at += 1;
            }
            Ok(Sexp::Atom(chars[start..*at].iter().collect()))
        }
    }
}

fn atom(s: &Sexp) -> Result<&str, SexpError> {
    match s {
        Sexp::Atom(a) => Ok(a),
        Sexp::List(_) => Err(SexpError::new("expected an atom, found a list")),
    }
}

fn bits(s: &Sexp) -> Result<Thinning, SexpError> {
    let a = atom(s)?;
    let bits: Vec<bool> = if a == "ε" || a == "e" {
        Vec::new()
    } else {
        a.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(SexpError::new(format!("bad thinning bit {c:?} in {a:?}"))),
            })
            .collect::<Result<_, _>>()?
    };
    let n = bits.len();
    Ok(Thinning::new(leaf_scope(n), bits).expect("width matches by construction"))
}

fn cover(s: &Sexp) -> Result<Cover, SexpError> {
    let a = atom(s)?;
    let shape: Vec<Part> = if a == "ε" || a == "e" {
        Vec::new()
    } else {
        a.chars()
            .map(|c| Part::from_char(c).ok_or_else(|| SexpError::new(format!("bad cover part {c:?} in {a:?}"))))
            .collect::<Result<_, _>>()?
    };
    let n = shape.len();
    Ok(Cover::from_raw_parts(true, shape, leaf_scope(n)))
}

fn items<'a>(s: &'a Sexp, head: &str, n: usize) -> Result<&'a [Sexp], SexpError> {
    match s {
        Sexp::List(xs) if xs.len() == n + 1 && atom(&xs[0]).map_or(false, |a| a == head) => {
            Ok(&xs[1..])
        }
        _ => Err(SexpError::new(format!("expected ({head} …) with {n} fields"))),
    }
}

fn conv_wrapped_term(s: &Sexp) -> Result<Relev<TermR>, SexpError> {
    let xs = items(s, "up", 2)?;
    Ok(Relev::from_raw_parts(conv_term(&xs[0])?, bits(&xs[1])?))
}

fn conv_wrapped_leaf(s: &Sexp) -> Result<Relev<VarLeaf>, SexpError> {
    let xs = items(s, "up", 2)?;
    if atom(&xs[0])? != "only" {
        return Err(SexpError::new("a variable leaf must be the atom `only`"));
    }
    Ok(Relev::from_raw_parts(VarLeaf, bits(&xs[1])?))
}

fn conv_wrapped_body(s: &Sexp) -> Result<Relev<BodyR>, SexpError> {
    let xs = items(s, "up", 2)?;
    Ok(Relev::from_raw_parts(conv_body(&xs[0])?, bits(&xs[1])?))
}

fn conv_term(s: &Sexp) -> Result<TermR, SexpError> {
    if let Ok(xs) = items(s, "var", 3) {
        return Ok(TermR::Var(RPair::from_raw_parts(
            conv_wrapped_leaf(&xs[0])?,
            conv_wrapped_body(&xs[1])?,
            cover(&xs[2])?,
        )));
    }
    let xs = items(s, "con", 1)?;
    Ok(TermR::Con(conv_body(&xs[0])?))
}

fn conv_body(s: &Sexp) -> Result<BodyR, SexpError> {
    match s {
        Sexp::Atom(a) if a == "unit" => Ok(BodyR::Unit),
        Sexp::Atom(a) => Err(SexpError::new(format!("unknown body atom {a:?}"))),
        Sexp::List(xs) => {
            let head = xs
                .first()
                .ok_or_else(|| SexpError::new("empty list"))
                .and_then(atom)?;
            match head {
                "pair" => {
                    let xs = items(s, "pair", 3)?;
                    Ok(BodyR::Pair(RPair::from_raw_parts(
                        conv_wrapped_body(&xs[0])?,
                        conv_wrapped_body(&xs[1])?,
                        cover(&xs[2])?,
                    )))
                }
                "bind" => {
                    let xs = items(s, "bind", 2)?;
                    Ok(BodyR::Bind(Bind::from_raw_parts(
                        bits(&xs[0])?,
                        conv_term(&xs[1])?,
                    )))
                }
                name => {
                    let xs = items(s, name, 1)?;
                    Ok(BodyR::Tag(Tag::new(name), Arc::new(conv_body(&xs[0])?)))
                }
            }
        }
    }
}

/// Read one wrapped term from text.
pub fn read_term(src: &str) -> Result<Relev<TermR>, SexpError> {
    conv_wrapped_term(&parse_sexp(src)?)
}

/// Write a wrapped term on a single line; `read_term` inverts this.
pub fn write_term(r: &Relev<TermR>) -> String {
    format!("(up {} {})", term(r.thing()), r.thinning().bits_display())
}

fn term(t: &TermR) -> String {
    match t {
        TermR::Var(rp) => format!(
            "(var (up only {}) (up {} {}) {})",
            rp.left().thinning().bits_display(),
            body(rp.right().thing()),
            rp.right().thinning().bits_display(),
            shape(rp.cover()),
        ),
        TermR::Con(b) => format!("(con {})", body(b)),
    }
}

fn body(b: &BodyR) -> String {
    match b {
        BodyR::Unit => String::from("unit"),
        BodyR::Tag(tag, rest) => format!("({} {})", tag.name(), body(rest)),
        BodyR::Pair(rp) => format!(
            "(pair (up {} {}) (up {} {}) {})",
            body(rp.left().thing()),
            rp.left().thinning().bits_display(),
            body(rp.right().thing()),
            rp.right().thinning().bits_display(),
            shape(rp.cover()),
        ),
        BodyR::Bind(bd) => format!("(bind {} {})", bd.usage().bits_display(), term(bd.body())),
    }
}

fn shape(c: &Cover) -> String {
    let s = c.shape_string();
    if s.is_empty() {
        String::from("ε")
    } else {
        s
    }
}
