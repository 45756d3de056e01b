//! The untyped lambda calculus as an instance of the syntax universe.
//!
//! One sort, two constructors: application is a pair of subterms,
//! abstraction binds one variable. Terms can be parsed from named
//! notation, resolved to de Bruijn form, coded into co-de-Bruijn form, and
//! reduced there. Reduction is leftmost-outermost. A redex whose binder is
//! unused never looks at the argument: the body is relocated by a thinning
//! and the argument's subtree is dropped in constant time. A used binder
//! steps through hereditary substitution.
//!
//! [`naive`] holds an independent reference implementation on classic
//! de Bruijn indices (shift and substitute), used to cross-check the
//! reducer.

pub mod naive;
mod parse;
mod print;

pub use naive::{db_to_ix, ix_to_db, naive_normalize, naive_step, IxTerm};
pub use parse::{parse, resolve, NamedTerm, ParseError, ResolveError};
pub use print::{pretty_codebruijn, pretty_index, pretty_named};

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::TermError;
use crate::hsub::{h_sub, HSub};
use crate::instrument;
use crate::relev::{bind, rpair, Bind, RPair, Relev};
use crate::scope::{Kind, Scope, Sort};
use crate::thin::Thinning;
use crate::universe::{BodyDB, BodyR, Desc, Syntax, Tag, TermDB, TermR};

/// The one sort of lambda terms.
pub fn sort() -> Sort {
    Sort::new("ι")
}

/// The kind of an ordinary term variable.
pub fn term_kind() -> Kind {
    Kind::base(sort())
}

/// The kind of the recursive position under a lambda: one new variable.
pub fn binder_kind() -> Kind {
    Kind::new(Scope::from_kinds(alloc::vec![term_kind()]), sort())
}

/// A scope of `n` term variables.
pub fn leaf_scope(n: usize) -> Scope {
    Scope::repeated(&term_kind(), n)
}

pub fn app_tag() -> Tag {
    Tag::new("app")
}

pub fn lam_tag() -> Tag {
    Tag::new("lam")
}

/// The lambda-calculus syntax description.
pub fn syntax() -> Syntax {
    Syntax::new(alloc::vec![(
        sort(),
        Desc::sg(alloc::vec![
            (
                app_tag(),
                Desc::times(Desc::Rec(term_kind()), Desc::Rec(term_kind())),
            ),
            (lam_tag(), Desc::Rec(binder_kind())),
        ]),
    )])
}

/// A variable by scope position, oldest first.
pub fn db_var(index: usize) -> TermDB {
    TermDB::var(index, BodyDB::Unit)
}

pub fn db_lam(body: TermDB) -> TermDB {
    TermDB::Con(BodyDB::Tag(
        lam_tag(),
        Box::new(BodyDB::Rec(Box::new(body))),
    ))
}

pub fn db_app(f: TermDB, s: TermDB) -> TermDB {
    TermDB::Con(BodyDB::Tag(
        app_tag(),
        Box::new(BodyDB::Pair(
            Box::new(BodyDB::Rec(Box::new(f))),
            Box::new(BodyDB::Rec(Box::new(s))),
        )),
    ))
}

/// Match a lambda node, yielding its body.
pub fn as_lam(t: &TermDB) -> Option<&TermDB> {
    match t {
        TermDB::Con(BodyDB::Tag(tag, rest)) if tag.name() == "lam" => match &**rest {
            BodyDB::Rec(body) => Some(body),
            _ => None,
        },
        _ => None,
    }
}

/// Match an application node, yielding function and argument.
pub fn as_app(t: &TermDB) -> Option<(&TermDB, &TermDB)> {
    match t {
        TermDB::Con(BodyDB::Tag(tag, rest)) if tag.name() == "app" => match &**rest {
            BodyDB::Pair(l, r) => match (&**l, &**r) {
                (BodyDB::Rec(f), BodyDB::Rec(s)) => Some((f, s)),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// Relocate a de Bruijn term along a thinning: free variable positions map
/// through the selected positions, bound ones shift with the target width.
pub fn thin_db(t: &TermDB, theta: &Thinning) -> TermDB {
    fn go_term(t: &TermDB, map: &[usize], trg_len: usize) -> TermDB {
        instrument::visit();
        match t {
            TermDB::Var { index, spine } => {
                let index = if *index < map.len() {
                    map[*index]
                } else {
                    trg_len + (*index - map.len())
                };
                TermDB::Var {
                    index,
                    spine: go_body(spine, map, trg_len),
                }
            }
            TermDB::Con(b) => TermDB::Con(go_body(b, map, trg_len)),
        }
    }
    fn go_body(b: &BodyDB, map: &[usize], trg_len: usize) -> BodyDB {
        match b {
            BodyDB::Unit => BodyDB::Unit,
            BodyDB::Tag(tag, rest) => {
                BodyDB::Tag(tag.clone(), Box::new(go_body(rest, map, trg_len)))
            }
            BodyDB::Pair(l, r) => BodyDB::Pair(
                Box::new(go_body(l, map, trg_len)),
                Box::new(go_body(r, map, trg_len)),
            ),
            BodyDB::Rec(t) => BodyDB::Rec(Box::new(go_term(t, map, trg_len))),
        }
    }
    go_term(t, &theta.selected_positions(), theta.target().len())
}

enum NodeView<'a> {
    Var,
    Lam(&'a Bind<TermR>),
    App(&'a RPair<BodyR, BodyR>),
}

fn node_view(t: &TermR) -> Result<NodeView<'_>, TermError> {
    match t {
        TermR::Var(_) => Ok(NodeView::Var),
        TermR::Con(BodyR::Tag(tag, rest)) if tag.name() == "lam" => match &**rest {
            BodyR::Bind(bd) => Ok(NodeView::Lam(bd)),
            other => Err(TermError::shape(format!("lambda carries {other}"))),
        },
        TermR::Con(BodyR::Tag(tag, rest)) if tag.name() == "app" => match &**rest {
            BodyR::Pair(rp) => Ok(NodeView::App(rp)),
            other => Err(TermError::shape(format!("application carries {other}"))),
        },
        other => Err(TermError::shape(format!("{other} is not a lambda term"))),
    }
}

/// Strip the trivial binder wrapped around an application component.
fn unwrap_component(c: &Relev<BodyR>) -> Result<Relev<TermR>, TermError> {
    match c.thing() {
        BodyR::Bind(bd) => Ok(Relev::from_shared(
            bd.shared_body().clone(),
            c.thinning().concat(bd.usage()),
        )),
        other => Err(TermError::shape(format!(
            "application component {other} is not a binder"
        ))),
    }
}

fn con_tag(tag: Tag, inner: &Relev<BodyR>) -> Relev<TermR> {
    Relev::from_raw_parts(
        TermR::Con(BodyR::Tag(tag, inner.shared_thing().clone())),
        inner.thinning().clone(),
    )
}

/// Build an application node from components over a common scope.
fn app_of(f: &Relev<TermR>, s: &Relev<TermR>) -> Result<Relev<TermR>, TermError> {
    let fw = bind(&Scope::empty(), f)?.map(|bd| BodyR::Bind(bd.clone()));
    let sw = bind(&Scope::empty(), s)?.map(|bd| BodyR::Bind(bd.clone()));
    let pair = rpair(&fw, &sw)?.map(|rp| BodyR::Pair(rp.clone()));
    Ok(con_tag(app_tag(), &pair))
}

/// Build a lambda node from a body over `ambient ++ [x]`.
fn lam_of(body: &Relev<TermR>) -> Result<Relev<TermR>, TermError> {
    let bound = bind(binder_kind().scope(), body)?.map(|bd| BodyR::Bind(bd.clone()));
    Ok(con_tag(lam_tag(), &bound))
}

/// One leftmost-outermost reduction step, or `None` for a normal form.
///
/// The input is a term over `scope`; so is the result. A redex with an
/// unused binder drops its argument without visiting it; a used binder
/// substitutes the argument hereditarily.
pub fn beta_step(r: &Relev<TermR>, scope: &Scope) -> Result<Option<Relev<TermR>>, TermError> {
    if r.thinning().target() != scope {
        return Err(TermError::relevance(format!(
            "term over {} but reduced in {}",
            r.thinning().target(),
            scope
        )));
    }
    let syn = syntax();
    step_term(&syn, r.thing(), r.thinning())
}

/// `psi` embeds the node's support into the ambient scope; a returned
/// replacement is over that ambient scope.
fn step_term(
    syn: &Syntax,
    t: &TermR,
    psi: &Thinning,
) -> Result<Option<Relev<TermR>>, TermError> {
    instrument::visit();
    match node_view(t)? {
        NodeView::Var => Ok(None),
        NodeView::Lam(bd) => {
            let inner_psi = psi.concat(bd.usage());
            match step_term(syn, bd.body(), &inner_psi)? {
                Some(new_body) => Ok(Some(lam_of(&new_body)?)),
                None => Ok(None),
            }
        }
        NodeView::App(rp) => {
            let f = unwrap_component(rp.left())?.thin(psi)?;
            if let NodeView::Lam(bd) = node_view(f.thing())? {
                if bd.usage().source_len() == 0 {
                    // The binder is unused: keep the body, drop the
                    // argument unvisited.
                    return Ok(Some(Relev::from_shared(
                        bd.shared_body().clone(),
                        f.thinning().clone(),
                    )));
                }
                let arg = unwrap_component(rp.right())?.thin(psi)?;
                let ambient = psi.target();
                let h = HSub::single(ambient, &term_kind(), &arg)
                    .map_err(TermError::from)?;
                let body = Relev::from_shared(
                    bd.shared_body().clone(),
                    f.thinning().concat(bd.usage()),
                );
                return Ok(Some(h_sub(syn, &h, &body, &sort())?));
            }
            if let Some(nf) = step_term(syn, f.thing(), f.thinning())? {
                let arg = unwrap_component(rp.right())?.thin(psi)?;
                return Ok(Some(app_of(&nf, &arg)?));
            }
            let arg = unwrap_component(rp.right())?.thin(psi)?;
            match step_term(syn, arg.thing(), arg.thinning())? {
                Some(na) => Ok(Some(app_of(&f, &na)?)),
                None => Ok(None),
            }
        }
    }
}

/// A normal form together with how many steps reached it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub term: Relev<TermR>,
    pub steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizeError {
    /// The fuel ran out with the term still reducible; the partial result
    /// is the term after `steps` reductions.
    OutOfFuel { partial: Relev<TermR>, steps: u64 },
    Term(TermError),
}

impl From<TermError> for NormalizeError {
    fn from(e: TermError) -> Self {
        NormalizeError::Term(e)
    }
}

impl fmt::Display for NormalizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizeError::OutOfFuel { steps, .. } => {
                write!(f, "out of fuel after {steps} steps")
            }
            NormalizeError::Term(e) => write!(f, "{e}"),
        }
    }
}

/// Reduce to normal form, spending at most `fuel` steps.
pub fn normalize(
    r: &Relev<TermR>,
    scope: &Scope,
    fuel: u64,
) -> Result<Normalized, NormalizeError> {
    let mut term = r.clone();
    let mut steps = 0;
    loop {
        match beta_step(&term, scope)? {
            None => return Ok(Normalized { term, steps }),
            Some(next) => {
                if steps == fuel {
                    return Err(NormalizeError::OutOfFuel {
                        partial: term,
                        steps,
                    });
                }
                term = next;
                steps += 1;
            }
        }
    }
}

/// All de Bruijn terms of exactly `size` nodes over `scope_len` variables.
/// Sizes: a variable is 1, a lambda or application adds 1 to its parts.
pub fn enumerate_terms(scope_len: usize, size: usize) -> Vec<TermDB> {
    if size == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if size == 1 {
        for i in 0..scope_len {
            out.push(db_var(i));
        }
        return out;
    }
    for body in enumerate_terms(scope_len + 1, size - 1) {
        out.push(db_lam(body));
    }
    for left in 1..size - 1 {
        for f in enumerate_terms(scope_len, left) {
            for s in enumerate_terms(scope_len, size - 1 - left) {
                out.push(db_app(f.clone(), s.clone()));
            }
        }
    }
    out
}

/// How many terms [`enumerate_terms`] yields, computed independently.
pub fn count_terms(scope_len: usize, size: usize) -> u64 {
    if size == 0 {
        return 0;
    }
    if size == 1 {
        return scope_len as u64;
    }
    let mut n = count_terms(scope_len + 1, size - 1);
    for left in 1..size - 1 {
        n += count_terms(scope_len, left) * count_terms(scope_len, size - 1 - left);
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::{code, decode, validate_r};

    fn coded(t: &TermDB, n: usize) -> Relev<TermR> {
        code(&syntax(), t, &leaf_scope(n), &sort()).unwrap()
    }

    fn decoded(r: &Relev<TermR>, n: usize) -> TermDB {
        decode(&syntax(), r, &leaf_scope(n), &sort()).unwrap()
    }

    fn named(s: &str) -> TermDB {
        resolve(&parse(s).unwrap(), &[]).unwrap()
    }

    #[test]
    fn identity_application_steps_once() {
        let t = named(r"(\a.a) (\b.b)");
        let r = coded(&t, 0);
        let out = normalize(&r, &leaf_scope(0), 10).unwrap();
        assert_eq!(out.steps, 1);
        assert_eq!(pretty_named(&decoded(&out.term, 0), &[]), r"\a.a");
    }

    #[test]
    fn unused_binder_discards_the_argument() {
        // (\x.\z.z) BIG reduces in one step without visiting BIG.
        let big = |n: usize| {
            let mut t = named(r"\b.b");
            for _ in 0..n {
                t = db_app(t.clone(), t);
            }
            t
        };
        let mut visit_counts = Vec::new();
        for n in [2, 6] {
            let t = db_app(named(r"\x.\z.z"), big(n));
            let r = coded(&t, 0);
            let (stepped, visited) =
                instrument::counting(|| beta_step(&r, &leaf_scope(0)).unwrap().unwrap());
            assert_eq!(decoded(&stepped, 0), named(r"\z.z"));
            visit_counts.push(visited);
        }
        // The cost is independent of the argument's size.
        assert_eq!(visit_counts[0], visit_counts[1]);
    }

    #[test]
    fn used_binder_substitutes() {
        // (\x. x x) y  over [y]
        let t = db_app(db_lam(db_app(db_var(1), db_var(1))), db_var(0));
        let r = coded(&t, 1);
        let stepped = beta_step(&r, &leaf_scope(1)).unwrap().unwrap();
        assert_eq!(decoded(&stepped, 1), db_app(db_var(0), db_var(0)));
        assert_eq!(
            validate_r(&syntax(), &stepped, &leaf_scope(1), &sort()),
            Ok(())
        );
    }

    #[test]
    fn leftmost_outermost_prefers_the_head_redex() {
        // (\a.a) ((\b.b) c)  steps at the head first.
        let t = db_app(
            db_lam(db_var(1)),
            db_app(db_lam(db_var(1)), db_var(0)),
        );
        let r = coded(&t, 1);
        let stepped = beta_step(&r, &leaf_scope(1)).unwrap().unwrap();
        assert_eq!(
            decoded(&stepped, 1),
            db_app(db_lam(db_var(1)), db_var(0))
        );
    }

    #[test]
    fn step_inside_lambda_bodies() {
        let t = named(r"\x.(\y.y) x");
        let r = coded(&t, 0);
        let stepped = beta_step(&r, &leaf_scope(0)).unwrap().unwrap();
        assert_eq!(decoded(&stepped, 0), named(r"\x.x"));
        assert!(beta_step(&stepped, &leaf_scope(0)).unwrap().is_none());
    }

    #[test]
    fn one_step_of_a_nested_redex() {
        let t = named(r"\x.(\y.y x (\z.z (y z))) (x (\v.v))");
        let r = coded(&t, 0);
        let stepped = beta_step(&r, &leaf_scope(0)).unwrap().unwrap();
        let expect = named(r"\x.(x (\v.v)) x (\z.z ((x (\v.v)) z))");
        assert_eq!(decoded(&stepped, 0), expect);
        assert_eq!(
            pretty_index(&decoded(&stepped, 0), 0),
            "λ. 0 (λ. 0) 0 (λ. 0 (1 (λ. 0) 0))"
        );
        assert_eq!(
            validate_r(&syntax(), &stepped, &leaf_scope(0), &sort()),
            Ok(())
        );
    }

    #[test]
    fn omega_runs_out_of_fuel() {
        let omega = named(r"(\x.x x) (\x.x x)");
        let r = coded(&omega, 0);
        match normalize(&r, &leaf_scope(0), 5) {
            Err(NormalizeError::OutOfFuel { partial, steps }) => {
                assert_eq!(steps, 5);
                assert_eq!(decoded(&partial, 0), omega);
            }
            other => panic!("expected fuel exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn two_argument_discard_chain() {
        // (\x.\y.x) a b  normalizes to a.
        let t = db_app(
            db_app(db_lam(db_lam(db_var(2))), db_var(0)),
            db_var(1),
        );
        let r = coded(&t, 2);
        let out = normalize(&r, &leaf_scope(2), 10).unwrap();
        assert_eq!(out.steps, 2);
        assert_eq!(decoded(&out.term, 2), db_var(0));
    }

    #[test]
    fn reducer_matches_the_naive_oracle() {
        for size in 1..=5 {
            for scope_len in 0..=1 {
                for t in enumerate_terms(scope_len, size) {
                    let r = coded(&t, scope_len);
                    let ours = normalize(&r, &leaf_scope(scope_len), 50);
                    let theirs = naive_normalize(&t, scope_len, 50);
                    match (ours, theirs) {
                        (Ok(a), Ok((nf, steps))) => {
                            assert_eq!(a.steps, steps, "step count for {t:?}");
                            assert_eq!(decoded(&a.term, scope_len), nf, "normal form for {t:?}");
                        }
                        (
                            Err(NormalizeError::OutOfFuel { partial, steps }),
                            Err((theirs_partial, theirs_steps)),
                        ) => {
                            assert_eq!(steps, theirs_steps);
                            assert_eq!(decoded(&partial, scope_len), theirs_partial);
                        }
                        (a, b) => panic!("reducers disagree on {t:?}: {a:?} vs {b:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn thin_db_commutes_with_coding() {
        for size in 1..=4 {
            for t in enumerate_terms(2, size) {
                for theta in Thinning::enumerate(&leaf_scope(3)) {
                    if theta.source_len() != 2 {
                        continue;
                    }
                    let moved = thin_db(&t, &theta);
                    let a = coded(&moved, 3);
                    let b = coded(&t, 2).thin(&theta).unwrap();
                    assert_eq!(a, b, "term {t:?} along {theta}");
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_match_the_recurrence() {
        for scope_len in 0..=2 {
            for size in 1..=6 {
                assert_eq!(
                    enumerate_terms(scope_len, size).len() as u64,
                    count_terms(scope_len, size),
                    "scope {scope_len} size {size}"
                );
            }
        }
        // The only closed term of size 2.
        assert_eq!(enumerate_terms(0, 2), alloc::vec![db_lam(db_var(0))]);
    }
}
