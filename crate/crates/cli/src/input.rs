//! Turning input text into terms.
//!
//! Two syntaxes are accepted. Text whose first significant character run
//! is `(up` is one co-de-Bruijn term in the s-expression format, possibly
//! spanning several lines. Anything else is lambda terms, one per line.
//! Either way `#` starts a comment that runs to the end of the line.

use std::fmt;

use codebruijn::lam::{parse, resolve};
use codebruijn::{Relev, TermDB, TermR};

use crate::sexp;

#[derive(Clone, Debug)]
pub enum Loaded {
    /// A named lambda term resolved against the environment.
    Db(TermDB),
    /// A raw co-de-Bruijn term, not yet validated.
    R(Relev<TermR>),
}

/// A problem with the input text itself: syntax or unbound names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub msg: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl std::error::Error for InputError {}

fn strip_comments(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        out.push_str(line);
        out.push('\n');
    }
    out
}

pub fn load(text: &str, env: &[String]) -> Result<Vec<Loaded>, InputError> {
    let text = strip_comments(text);
    if text.trim_start().starts_with("(up") {
        let r = sexp::read_term(&text).map_err(|e| InputError { msg: e.to_string() })?;
        return Ok(vec![Loaded::R(r)]);
    }
    let mut out = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let named = parse(line).map_err(|e| InputError {
            msg: format!("{e} in {:?}", line.trim()),
        })?;
        let t = resolve(&named, env).map_err(|e| InputError { msg: e.to_string() })?;
        out.push(Loaded::Db(t));
    }
    Ok(out)
}
