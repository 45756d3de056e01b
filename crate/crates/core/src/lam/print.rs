//! Three renderings of lambda terms: with invented names, with classic
//! indices counting binders inside out, and the co-de-Bruijn form with
//! its thinnings and covers spelled out.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{as_app, as_lam};
use crate::relev::Relev;
use crate::universe::{BodyR, TermDB, TermR};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Prec {
    Top,
    Fun,
    Arg,
}

fn parens(s: String, needed: bool) -> String {
    if needed {
        format!("({s})")
    } else {
        s
    }
}

fn fresh(taken: &[String]) -> String {
    let mut round = 0usize;
    loop {
        for c in b'a'..=b'z' {
            let cand = if round == 0 {
                (c as char).to_string()
            } else {
                format!("{}{round}", c as char)
            };
            if !taken.iter().any(|n| *n == cand) {
                return cand;
            }
        }
        round += 1;
    }
}

/// Render with names, inventing fresh letters for binders. `env` names the
/// ambient scope, oldest first; positions beyond it print as `?n`.
pub fn pretty_named(t: &TermDB, env: &[String]) -> String {
    fn go(t: &TermDB, names: &mut Vec<String>, prec: Prec) -> String {
        if let Some(body) = as_lam(t) {
            let name = fresh(names);
            names.push(name.clone());
            let body = go(body, names, Prec::Top);
            names.pop();
            return parens(format!(r"\{name}.{body}"), prec != Prec::Top);
        }
        if let Some((f, s)) = as_app(t) {
            let f = go(f, names, Prec::Fun);
            let s = go(s, names, Prec::Arg);
            return parens(format!("{f} {s}"), prec == Prec::Arg);
        }
        match t {
            TermDB::Var { index, .. } => names
                .get(*index)
                .cloned()
                .unwrap_or_else(|| format!("?{index}")),
            TermDB::Con(_) => String::from("<con>"),
        }
    }
    let mut names = env.to_vec();
    go(t, &mut names, Prec::Top)
}

/// Render with indices counting binders from the inside out, so the
/// newest variable is 0. `ambient` is the number of surrounding binders.
pub fn pretty_index(t: &TermDB, ambient: usize) -> String {
    fn go(t: &TermDB, len: usize, prec: Prec) -> String {
        if let Some(body) = as_lam(t) {
            let body = go(body, len + 1, Prec::Top);
            return parens(format!("λ. {body}"), prec != Prec::Top);
        }
        if let Some((f, s)) = as_app(t) {
            let f = go(f, len, Prec::Fun);
            let s = go(s, len, Prec::Arg);
            return parens(format!("{f} {s}"), prec == Prec::Arg);
        }
        match t {
            TermDB::Var { index, .. } => format!("{}", len - 1 - index),
            TermDB::Con(_) => String::from("<con>"),
        }
    }
    go(t, ambient, Prec::Top)
}

/// Render the co-de-Bruijn structure itself: every lambda shows which of
/// its variables is used, every application shows how the support splits
/// between function and argument, and the root shows the term's support
/// within the ambient scope.
pub fn pretty_codebruijn(r: &Relev<TermR>) -> String {
    format!("{} ↑ {}", term_str(r.thing()), r.thinning().bits_display())
}

fn term_str(t: &TermR) -> String {
    match t {
        TermR::Var(_) => String::from("# only"),
        TermR::Con(BodyR::Tag(tag, rest)) if tag.name() == "lam" => match &**rest {
            BodyR::Bind(bd) => {
                format!("λ ({}\\ {})", bd.usage().bits_display(), term_str(bd.body()))
            }
            other => format!("{other}"),
        },
        TermR::Con(BodyR::Tag(tag, rest)) if tag.name() == "app" => match &**rest {
            BodyR::Pair(rp) => {
                let (f, s) = (rp.left(), rp.right());
                match (f.thing(), s.thing()) {
                    (BodyR::Bind(fb), BodyR::Bind(sb)) => {
                        let shape = rp.cover().shape_string();
                        let shape = if shape.is_empty() {
                            String::from("ε")
                        } else {
                            shape
                        };
                        format!(
                            "({} ↑ {} {} ↑ {} {})",
                            term_str(fb.body()),
                            f.thinning().bits_display(),
                            term_str(sb.body()),
                            s.thinning().bits_display(),
                            shape
                        )
                    }
                    _ => format!("{t}"),
                }
            }
            other => format!("{other}"),
        },
        other => format!("{other}"),
    }
}
