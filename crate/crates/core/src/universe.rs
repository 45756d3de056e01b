//! A universe of syntaxes with binding.
//!
//! A syntax assigns each sort a description built from recursive positions
//! (`Rec`, under a scope of newly bound kinds), tagged sums (`Sg`), units,
//! and pairs. Terms come in two representations:
//!
//! - [`TermDB`]: de Bruijn style. Variables are plain scope positions
//!   (oldest first) and every node lives in the full ambient scope.
//! - [`TermR`]: co-de-Bruijn style. Every node's scope is exactly its
//!   support; pairs split the scope with a [`Cover`], binders record a
//!   usage thinning, and unused variables never enter a subterm.
//!
//! [`code`] and [`decode`] translate between the two. [`validate_db`] and
//! [`validate_r`] check a term against its description; for the
//! co-de-Bruijn side this includes every support annotation, and
//! [`recompute_support`] re-derives supports bottom-up as an independent
//! cross-check.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::TermError;
use crate::relev::{bind, rpair, runit, rvar, Bind, RPair, Relev, VarLeaf};
use crate::scope::{Kind, Scope, Sort};
use crate::thin::Thinning;

/// A constructor tag: an interned symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tag(Arc<str>);

impl Tag {
    pub fn new(name: &str) -> Self {
        Tag(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite set of tags with decidable equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Datoid {
    values: Vec<Tag>,
}

impl Datoid {
    pub fn new(values: Vec<Tag>) -> Self {
        Datoid { values }
    }

    pub fn values(&self) -> &[Tag] {
        &self.values
    }

    pub fn contains(&self, tag: &Tag) -> bool {
        self.values.contains(tag)
    }

    /// Decidable equality on the carrier.
    pub fn decide(&self, x: &Tag, y: &Tag) -> bool {
        x == y
    }
}

/// Description of one layer of syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Desc {
    /// A subterm of the kind's sort, under the kind's scope of fresh
    /// bindings.
    Rec(Kind),
    /// A tagged sum; the arms are total over the datoid.
    Sg(Datoid, Vec<(Tag, Desc)>),
    /// Nothing.
    One,
    /// Two descriptions side by side.
    Times(Box<Desc>, Box<Desc>),
}

impl Desc {
    /// A tagged sum whose datoid is exactly the arms' tags, so totality
    /// holds by construction.
    pub fn sg(arms: Vec<(Tag, Desc)>) -> Desc {
        let datoid = Datoid::new(arms.iter().map(|(t, _)| t.clone()).collect());
        Desc::Sg(datoid, arms)
    }

    pub fn times(a: Desc, b: Desc) -> Desc {
        Desc::Times(Box::new(a), Box::new(b))
    }

    /// Look up a sum arm by tag.
    pub fn arm(&self, tag: &Tag) -> Option<&Desc> {
        match self {
            Desc::Sg(_, arms) => arms.iter().find(|(t, _)| t == tag).map(|(_, d)| d),
            _ => None,
        }
    }
}

/// The description of a spine: one recursive position per kind of `kz`,
/// nested as left-leaning pairs ending in `One`.
pub fn spine_desc(kz: &Scope) -> Desc {
    let mut desc = Desc::One;
    for kind in kz.kinds() {
        desc = Desc::times(desc, Desc::Rec(kind.clone()));
    }
    desc
}

/// A syntax: a description for each sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syntax {
    arms: Vec<(Sort, Desc)>,
}

impl Syntax {
    pub fn new(arms: Vec<(Sort, Desc)>) -> Self {
        Syntax { arms }
    }

    pub fn desc(&self, sort: &Sort) -> Option<&Desc> {
        self.arms.iter().find(|(s, _)| s == sort).map(|(_, d)| d)
    }
}

/// De Bruijn terms: variables are oldest-first positions in the ambient
/// scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermDB {
    /// A variable applied to a spine matching its kind's scope.
    Var { index: usize, spine: BodyDB },
    /// A constructor of the ambient sort's description.
    Con(BodyDB),
}

/// De Bruijn bodies, shaped by a description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BodyDB {
    Unit,
    Tag(Tag, Box<BodyDB>),
    Pair(Box<BodyDB>, Box<BodyDB>),
    /// A subterm in the scope extended by the recursive position's kinds.
    Rec(Box<TermDB>),
}

impl TermDB {
    pub fn var(index: usize, spine: BodyDB) -> Self {
        TermDB::Var { index, spine }
    }
}

/// Co-de-Bruijn terms: every node uses its whole scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermR {
    /// A variable (left, singleton support) with its spine (right).
    Var(RPair<VarLeaf, BodyR>),
    /// A constructor of the ambient sort's description.
    Con(BodyR),
}

/// Co-de-Bruijn bodies, shaped by a description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BodyR {
    /// Valid only at empty support.
    Unit,
    Tag(Tag, Arc<BodyR>),
    Pair(RPair<BodyR, BodyR>),
    /// A binder; the body is a term over the support extended by the used
    /// bindings.
    Bind(Bind<TermR>),
}

impl fmt::Display for TermR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermR::Var(rp) => write!(f, "# {rp}"),
            TermR::Con(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Display for BodyR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyR::Unit => f.write_str("⟨⟩"),
            BodyR::Tag(t, b) => write!(f, "({t} {b})"),
            BodyR::Pair(rp) => write!(f, "{rp}"),
            BodyR::Bind(bd) => write!(f, "{bd}"),
        }
    }
}

/// Check a de Bruijn term against a syntax.
pub fn validate_db(
    syntax: &Syntax,
    t: &TermDB,
    scope: &Scope,
    sort: &Sort,
) -> Result<(), TermError> {
    match t {
        TermDB::Var { index, spine } => {
            let kind = scope.get(*index).ok_or_else(|| {
                TermError::shape(format!(
                    "variable index {index} out of range for scope of length {}",
                    scope.len()
                ))
                .at("var")
            })?;
            if kind.sort() != sort {
                return Err(TermError::shape(format!(
                    "variable of sort {} where {} expected",
                    kind.sort(),
                    sort
                ))
                .at("var"));
            }
            validate_body_db(syntax, &spine_desc(kind.scope()), spine, scope)
                .map_err(|e| e.at("var.spine"))
        }
        TermDB::Con(b) => {
            let desc = syntax
                .desc(sort)
                .ok_or_else(|| TermError::shape(format!("no description for sort {sort}")))?;
            validate_body_db(syntax, desc, b, scope).map_err(|e| e.at("con"))
        }
    }
}

fn validate_body_db(
    syntax: &Syntax,
    desc: &Desc,
    b: &BodyDB,
    scope: &Scope,
) -> Result<(), TermError> {
    match (desc, b) {
        (Desc::One, BodyDB::Unit) => Ok(()),
        (Desc::Sg(datoid, _), BodyDB::Tag(tag, rest)) => {
            if !datoid.contains(tag) {
                return Err(TermError::shape(format!("unknown tag {tag}")));
            }
            let arm = desc
                .arm(tag)
                .ok_or_else(|| TermError::shape(format!("no arm for tag {tag}")))?;
            validate_body_db(syntax, arm, rest, scope).map_err(|e| e.at(tag.name()))
        }
        (Desc::Times(s1, s2), BodyDB::Pair(l, r)) => {
            validate_body_db(syntax, s1, l, scope).map_err(|e| e.at("pair.l"))?;
            validate_body_db(syntax, s2, r, scope).map_err(|e| e.at("pair.r"))
        }
        (Desc::Rec(kind), BodyDB::Rec(t)) => {
            validate_db(syntax, t, &scope.concat(kind.scope()), kind.sort())
                .map_err(|e| e.at("rec"))
        }
        (desc, body) => Err(TermError::shape(format!(
            "body {} does not match description {desc:?}",
            body_db_head(body)
        ))),
    }
}

fn body_db_head(b: &BodyDB) -> &'static str {
    match b {
        BodyDB::Unit => "unit",
        BodyDB::Tag(..) => "tag",
        BodyDB::Pair(..) => "pair",
        BodyDB::Rec(..) => "rec",
    }
}

fn body_r_head(b: &BodyR) -> &'static str {
    match b {
        BodyR::Unit => "unit",
        BodyR::Tag(..) => "tag",
        BodyR::Pair(..) => "pair",
        BodyR::Bind(..) => "bind",
    }
}

/// Check a co-de-Bruijn term against a syntax, including every support
/// annotation: covers must agree with their components' thinnings and
/// account for every position, binder usages must target the declared
/// scope, units must have empty and variables singleton support.
pub fn validate_r(
    syntax: &Syntax,
    r: &Relev<TermR>,
    scope: &Scope,
    sort: &Sort,
) -> Result<(), TermError> {
    if r.thinning().target() != scope {
        return Err(TermError::relevance(format!(
            "root thinning targets {} but the ambient scope is {}",
            r.thinning().target(),
            scope
        )));
    }
    check_term_r(syntax, r.thing(), &r.thinning().source(), sort)
}

/// Pair-level checks shared by the variable and pair cases.
fn check_rpair_shell<L, R>(rp: &RPair<L, R>, scope: &Scope) -> Result<(), TermError> {
    let cover = rp.cover();
    if cover.shape().len() != scope.len() || cover.covered() != scope {
        return Err(TermError::relevance(format!(
            "cover {} does not cover the scope {scope}",
            cover.shape_string()
        )));
    }
    if !cover.overlap_ok() {
        return Err(TermError::relevance(String::from(
            "pair cover must allow overlap",
        )));
    }
    if cover.left() != *rp.left().thinning() {
        return Err(TermError::relevance(String::from(
            "left component thinning disagrees with the cover",
        )));
    }
    if cover.right() != *rp.right().thinning() {
        return Err(TermError::relevance(String::from(
            "right component thinning disagrees with the cover",
        )));
    }
    Ok(())
}

fn check_term_r(syntax: &Syntax, t: &TermR, scope: &Scope, sort: &Sort) -> Result<(), TermError> {
    match t {
        TermR::Var(rp) => {
            check_rpair_shell(rp, scope).map_err(|e| e.at("var"))?;
            let vscope = rp.left().thinning().source();
            if vscope.len() != 1 {
                return Err(TermError::relevance(format!(
                    "variable leaf with support of length {}",
                    vscope.len()
                ))
                .at("var"));
            }
            let kind = vscope.get(0).expect("length checked");
            if kind.sort() != sort {
                return Err(TermError::shape(format!(
                    "variable of sort {} where {} expected",
                    kind.sort(),
                    sort
                ))
                .at("var"));
            }
            check_body_r(
                syntax,
                &spine_desc(kind.scope()),
                rp.right().thing(),
                &rp.right().thinning().source(),
            )
            .map_err(|e| e.at("var.spine"))
        }
        TermR::Con(b) => {
            let desc = syntax
                .desc(sort)
                .ok_or_else(|| TermError::shape(format!("no description for sort {sort}")))?;
            check_body_r(syntax, desc, b, scope).map_err(|e| e.at("con"))
        }
    }
}

/// Check a wrapped co-de-Bruijn body against a description, as
/// [`validate_r`] does for terms.
pub fn validate_body_r(
    syntax: &Syntax,
    desc: &Desc,
    b: &Relev<BodyR>,
    scope: &Scope,
) -> Result<(), TermError> {
    if b.thinning().target() != scope {
        return Err(TermError::relevance(format!(
            "root thinning targets {} but the ambient scope is {}",
            b.thinning().target(),
            scope
        )));
    }
    check_body_r(syntax, desc, b.thing(), &b.thinning().source())
}

fn check_body_r(syntax: &Syntax, desc: &Desc, b: &BodyR, scope: &Scope) -> Result<(), TermError> {
    match (desc, b) {
        (Desc::One, BodyR::Unit) => {
            if scope.is_empty() {
                Ok(())
            } else {
                Err(TermError::relevance(format!(
                    "unit leaf with nonempty support {scope}"
                )))
            }
        }
        (Desc::Sg(datoid, _), BodyR::Tag(tag, rest)) => {
            if !datoid.contains(tag) {
                return Err(TermError::shape(format!("unknown tag {tag}")));
            }
            let arm = desc
                .arm(tag)
                .ok_or_else(|| TermError::shape(format!("no arm for tag {tag}")))?;
            check_body_r(syntax, arm, rest, scope).map_err(|e| e.at(tag.name()))
        }
        (Desc::Times(s1, s2), BodyR::Pair(rp)) => {
            check_rpair_shell(rp, scope).map_err(|e| e.at("pair"))?;
            check_body_r(syntax, s1, rp.left().thing(), &rp.left().thinning().source())
                .map_err(|e| e.at("pair.l"))?;
            check_body_r(
                syntax,
                s2,
                rp.right().thing(),
                &rp.right().thinning().source(),
            )
            .map_err(|e| e.at("pair.r"))
        }
        (Desc::Rec(kind), BodyR::Bind(bd)) => {
            if bd.usage().target() != kind.scope() {
                return Err(TermError::shape(format!(
                    "binder usage targets {} but the description binds {}",
                    bd.usage().target(),
                    kind.scope()
                ))
                .at("bind"));
            }
            let inner = scope.concat(&bd.usage().source());
            check_term_r(syntax, bd.body(), &inner, kind.sort()).map_err(|e| e.at("bind"))
        }
        (desc, body) => Err(TermError::shape(format!(
            "body {} does not match description {desc:?}",
            body_r_head(body)
        ))),
    }
}

/// Re-derive which ambient positions a co-de-Bruijn term actually uses,
/// bottom-up from its leaves, trusting only the stored thinnings' bits.
/// Fails if any inner component's support annotation overstates its use.
/// For a valid term the result is all-true.
pub fn recompute_support(t: &TermR, scope_len: usize) -> Result<Vec<bool>, TermError> {
    used_term(t, scope_len)
}

/// Check that a wrapped term uses exactly the support its thinning claims.
pub fn check_relevance(r: &Relev<TermR>) -> Result<(), TermError> {
    let used = used_term(r.thing(), r.thinning().source_len())?;
    if used.iter().all(|b| *b) {
        Ok(())
    } else {
        Err(TermError::relevance(String::from(
            "support annotation overstates the variables used",
        )))
    }
}

fn image_through(
    thinning: &Thinning,
    scope_len: usize,
    child_used: Vec<bool>,
) -> Result<Vec<bool>, TermError> {
    if thinning.bits().len() != scope_len {
        return Err(TermError::relevance(format!(
            "thinning of width {} in a scope of length {scope_len}",
            thinning.bits().len()
        )));
    }
    if !child_used.iter().all(|b| *b) {
        return Err(TermError::relevance(String::from(
            "component does not use all of its claimed support",
        )));
    }
    let mut out = alloc::vec![false; scope_len];
    for pos in thinning.selected_positions() {
        out[pos] = true;
    }
    Ok(out)
}

fn used_term(t: &TermR, scope_len: usize) -> Result<Vec<bool>, TermError> {
    match t {
        TermR::Var(rp) => {
            let vlen = rp.left().thinning().source_len();
            if vlen != 1 {
                return Err(TermError::relevance(format!(
                    "variable leaf with support of length {vlen}"
                ))
                .at("var"));
            }
            let l = image_through(rp.left().thinning(), scope_len, alloc::vec![true])
                .map_err(|e| e.at("var"))?;
            let spine = used_body(rp.right().thing(), rp.right().thinning().source_len())
                .map_err(|e| e.at("var.spine"))?;
            let r = image_through(rp.right().thinning(), scope_len, spine)
                .map_err(|e| e.at("var.spine"))?;
            Ok(l.iter().zip(&r).map(|(a, b)| *a || *b).collect())
        }
        TermR::Con(b) => used_body(b, scope_len).map_err(|e| e.at("con")),
    }
}

fn used_body(b: &BodyR, scope_len: usize) -> Result<Vec<bool>, TermError> {
    match b {
        BodyR::Unit => {
            if scope_len == 0 {
                Ok(Vec::new())
            } else {
                Err(TermError::relevance(format!(
                    "unit leaf with support of length {scope_len}"
                )))
            }
        }
        BodyR::Tag(tag, rest) => used_body(rest, scope_len).map_err(|e| e.at(tag.name())),
        BodyR::Pair(rp) => {
            let lu = used_body(rp.left().thing(), rp.left().thinning().source_len())
                .map_err(|e| e.at("pair.l"))?;
            let l = image_through(rp.left().thinning(), scope_len, lu)
                .map_err(|e| e.at("pair.l"))?;
            let ru = used_body(rp.right().thing(), rp.right().thinning().source_len())
                .map_err(|e| e.at("pair.r"))?;
            let r = image_through(rp.right().thinning(), scope_len, ru)
                .map_err(|e| e.at("pair.r"))?;
            Ok(l.iter().zip(&r).map(|(a, b)| *a || *b).collect())
        }
        BodyR::Bind(bd) => {
            let inner_len = scope_len + bd.usage().source_len();
            let inner = used_term(bd.body(), inner_len).map_err(|e| e.at("bind"))?;
            if !inner.iter().all(|b| *b) {
                return Err(TermError::relevance(String::from(
                    "binder body does not use all of its scope",
                ))
                .at("bind"));
            }
            Ok(alloc::vec![true; scope_len])
        }
    }
}

/// Translate a de Bruijn term to co-de-Bruijn form, computing the support
/// of every node on the way up. The root thinning selects exactly the
/// variables that occur.
pub fn code(
    syntax: &Syntax,
    t: &TermDB,
    scope: &Scope,
    sort: &Sort,
) -> Result<Relev<TermR>, TermError> {
    match t {
        TermDB::Var { index, spine } => {
            let kind = scope
                .get(*index)
                .ok_or_else(|| {
                    TermError::shape(format!(
                        "variable index {index} out of range for scope of length {}",
                        scope.len()
                    ))
                    .at("var")
                })?
                .clone();
            if kind.sort() != sort {
                return Err(TermError::shape(format!(
                    "variable of sort {} where {} expected",
                    kind.sort(),
                    sort
                ))
                .at("var"));
            }
            let v = rvar(Thinning::point(scope, *index)?)?;
            let sp = codes(syntax, &spine_desc(kind.scope()), spine, scope)
                .map_err(|e| e.at("var.spine"))?;
            let p = rpair(&v, &sp)?;
            Ok(p.map(|inner| TermR::Var(inner.clone())))
        }
        TermDB::Con(b) => {
            let desc = syntax
                .desc(sort)
                .ok_or_else(|| TermError::shape(format!("no description for sort {sort}")))?;
            let body = codes(syntax, desc, b, scope).map_err(|e| e.at("con"))?;
            Ok(body.map(|inner| TermR::Con(inner.clone())))
        }
    }
}

/// Translate a de Bruijn body to co-de-Bruijn form under a description.
pub fn codes(
    syntax: &Syntax,
    desc: &Desc,
    b: &BodyDB,
    scope: &Scope,
) -> Result<Relev<BodyR>, TermError> {
    match (desc, b) {
        (Desc::One, BodyDB::Unit) => Ok(runit(scope).map(|_| BodyR::Unit)),
        (Desc::Sg(datoid, _), BodyDB::Tag(tag, rest)) => {
            if !datoid.contains(tag) {
                return Err(TermError::shape(format!("unknown tag {tag}")));
            }
            let arm = desc
                .arm(tag)
                .ok_or_else(|| TermError::shape(format!("no arm for tag {tag}")))?;
            let inner = codes(syntax, arm, rest, scope).map_err(|e| e.at(tag.name()))?;
            Ok(inner.map(|body| BodyR::Tag(tag.clone(), Arc::new(body.clone()))))
        }
        (Desc::Times(s1, s2), BodyDB::Pair(l, r)) => {
            let a = codes(syntax, s1, l, scope).map_err(|e| e.at("pair.l"))?;
            let b = codes(syntax, s2, r, scope).map_err(|e| e.at("pair.r"))?;
            Ok(rpair(&a, &b)?.map(|rp| BodyR::Pair(rp.clone())))
        }
        (Desc::Rec(kind), BodyDB::Rec(t)) => {
            let inner = code(syntax, t, &scope.concat(kind.scope()), kind.sort())
                .map_err(|e| e.at("rec"))?;
            Ok(bind(kind.scope(), &inner)?.map(|bd| BodyR::Bind(bd.clone())))
        }
        (desc, body) => Err(TermError::shape(format!(
            "body {} does not match description {desc:?}",
            body_db_head(body)
        ))),
    }
}

/// Translate a co-de-Bruijn term back to de Bruijn form. Variable
/// positions are recovered by composing the thinnings accumulated on the
/// path from the root down to each leaf.
pub fn decode(
    syntax: &Syntax,
    r: &Relev<TermR>,
    scope: &Scope,
    sort: &Sort,
) -> Result<TermDB, TermError> {
    debug_assert!(validate_r(syntax, r, scope, sort).is_ok());
    if r.thinning().target() != scope {
        return Err(TermError::relevance(format!(
            "root thinning targets {} but the ambient scope is {}",
            r.thinning().target(),
            scope
        )));
    }
    decode_term(r.thing(), r.thinning())
}

fn decode_term(t: &TermR, acc: &Thinning) -> Result<TermDB, TermError> {
    match t {
        TermR::Var(rp) => {
            let x = rp.left().thinning().compose(acc)?;
            let index = x.single_position()?;
            let spine_acc = rp.right().thinning().compose(acc)?;
            let spine = decode_body(rp.right().thing(), &spine_acc)?;
            Ok(TermDB::Var { index, spine })
        }
        TermR::Con(b) => Ok(TermDB::Con(decode_body(b, acc)?)),
    }
}

fn decode_body(b: &BodyR, acc: &Thinning) -> Result<BodyDB, TermError> {
    match b {
        BodyR::Unit => Ok(BodyDB::Unit),
        BodyR::Tag(tag, rest) => Ok(BodyDB::Tag(
            tag.clone(),
            Box::new(decode_body(rest, acc)?),
        )),
        BodyR::Pair(rp) => {
            let l = decode_body(rp.left().thing(), &rp.left().thinning().compose(acc)?)?;
            let r = decode_body(rp.right().thing(), &rp.right().thinning().compose(acc)?)?;
            Ok(BodyDB::Pair(Box::new(l), Box::new(r)))
        }
        BodyR::Bind(bd) => {
            let inner = acc.concat(bd.usage());
            Ok(BodyDB::Rec(Box::new(decode_term(bd.body(), &inner)?)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Cover;
    use crate::relev::unbind;
    use alloc::vec;

    fn iota() -> Sort {
        Sort::new("ι")
    }

    fn star() -> Kind {
        Kind::base(iota())
    }

    fn leaf_scope(n: usize) -> Scope {
        Scope::repeated(&star(), n)
    }

    fn tag(s: &str) -> Tag {
        Tag::new(s)
    }

    /// The untyped lambda calculus as a one-sort syntax.
    fn lam_syntax() -> Syntax {
        let term = Kind::base(iota());
        let binder = Kind::new(Scope::from_kinds(vec![star()]), iota());
        Syntax::new(vec![(
            iota(),
            Desc::sg(vec![
                (
                    tag("app"),
                    Desc::times(Desc::Rec(term.clone()), Desc::Rec(term)),
                ),
                (tag("lam"), Desc::Rec(binder)),
            ]),
        )])
    }

    fn db_var(i: usize) -> TermDB {
        TermDB::var(i, BodyDB::Unit)
    }

    fn db_lam(body: TermDB) -> TermDB {
        TermDB::Con(BodyDB::Tag(
            tag("lam"),
            Box::new(BodyDB::Rec(Box::new(body))),
        ))
    }

    fn db_app(f: TermDB, s: TermDB) -> TermDB {
        TermDB::Con(BodyDB::Tag(
            tag("app"),
            Box::new(BodyDB::Pair(
                Box::new(BodyDB::Rec(Box::new(f))),
                Box::new(BodyDB::Rec(Box::new(s))),
            )),
        ))
    }

    fn th(bits: &str) -> Thinning {
        Thinning::new(
            leaf_scope(bits.len()),
            bits.chars().map(|c| c == '1').collect(),
        )
        .unwrap()
    }

    #[test]
    fn spine_desc_nests_to_the_left() {
        assert_eq!(spine_desc(&leaf_scope(0)), Desc::One);
        assert_eq!(
            spine_desc(&leaf_scope(1)),
            Desc::times(Desc::One, Desc::Rec(star()))
        );
        assert_eq!(
            spine_desc(&leaf_scope(2)),
            Desc::times(
                Desc::times(Desc::One, Desc::Rec(star())),
                Desc::Rec(star())
            )
        );
    }

    #[test]
    fn validate_db_accepts_the_identity() {
        let syn = lam_syntax();
        let id = db_lam(db_var(0));
        assert_eq!(validate_db(&syn, &id, &Scope::empty(), &iota()), Ok(()));
    }

    #[test]
    fn validate_db_rejects_bad_terms() {
        let syn = lam_syntax();
        let oob = db_lam(db_var(1));
        assert!(matches!(
            validate_db(&syn, &oob, &Scope::empty(), &iota()),
            Err(TermError::Shape { .. })
        ));
        let bad_tag = TermDB::Con(BodyDB::Tag(tag("mu"), Box::new(BodyDB::Unit)));
        assert!(matches!(
            validate_db(&syn, &bad_tag, &Scope::empty(), &iota()),
            Err(TermError::Shape { .. })
        ));
    }

    /// The expected coding of the identity, assembled by hand.
    fn identity_r() -> Relev<TermR> {
        let one = leaf_scope(1);
        let leaf = rvar(Thinning::point(&one, 0).unwrap()).unwrap();
        let spine = runit(&one).map(|_| BodyR::Unit);
        let var = rpair(&leaf, &spine).unwrap().map(|p| TermR::Var(p.clone()));
        let bound = bind(&one, &var).unwrap().map(|b| BodyR::Bind(b.clone()));
        bound.map(|b| TermR::Con(BodyR::Tag(tag("lam"), Arc::new(b.clone()))))
    }

    #[test]
    fn code_identity_matches_hand_built_form() {
        let syn = lam_syntax();
        let got = code(&syn, &db_lam(db_var(0)), &Scope::empty(), &iota()).unwrap();
        assert_eq!(got, identity_r());
        assert_eq!(got.thinning().bits_string(), "");
        assert_eq!(
            alloc::format!("{got}"),
            "((lam (1\\ # (pair (only ↑ 1) (⟨⟩ ↑ 0) L))) ↑ ε)"
        );
    }

    #[test]
    fn code_discards_unused_binders_at_the_lam() {
        // \c.\e.c : the inner binder is unused, so the usage is 0 and the
        // variable leaf sits in the singleton scope of c alone.
        let syn = lam_syntax();
        let k = db_lam(db_lam(db_var(0)));
        let got = code(&syn, &k, &Scope::empty(), &iota()).unwrap();

        let one = leaf_scope(1);
        let leaf = rvar(Thinning::point(&one, 0).unwrap()).unwrap();
        let spine = runit(&one).map(|_| BodyR::Unit);
        let var = rpair(&leaf, &spine).unwrap().map(|p| TermR::Var(p.clone()));
        let inner = bind(&Scope::empty().snoc(star()), &var.thin(&th("1").concat(&Thinning::empty(&leaf_scope(1)))).unwrap())
            .unwrap()
            .map(|b| TermR::Con(BodyR::Tag(tag("lam"), Arc::new(BodyR::Bind(b.clone())))));
        let outer = bind(&Scope::empty().snoc(star()), &inner)
            .unwrap()
            .map(|b| TermR::Con(BodyR::Tag(tag("lam"), Arc::new(BodyR::Bind(b.clone())))));
        assert_eq!(got, outer);

        // Usage bits, outermost first: 1 then 0.
        assert_eq!(
            alloc::format!("{got}"),
            "((lam (1\\ (lam (0\\ # (pair (only ↑ 1) (⟨⟩ ↑ 0) L))))) ↑ ε)"
        );
    }

    #[test]
    fn code_computes_exact_support() {
        // Oracle: scan the de Bruijn term for free variables directly.
        fn scan(t: &TermDB, ambient: usize, used: &mut [bool]) {
            match t {
                TermDB::Var { index, spine } => {
                    if *index < ambient {
                        used[*index] = true;
                    }
                    scan_body(spine, ambient, used);
                }
                TermDB::Con(b) => scan_body(b, ambient, used),
            }
        }
        fn scan_body(b: &BodyDB, ambient: usize, used: &mut [bool]) {
            match b {
                BodyDB::Unit => {}
                BodyDB::Tag(_, rest) => scan_body(rest, ambient, used),
                BodyDB::Pair(l, r) => {
                    scan_body(l, ambient, used);
                    scan_body(r, ambient, used);
                }
                BodyDB::Rec(t) => scan(t, ambient, used),
            }
        }

        let syn = lam_syntax();
        let cases = vec![
            (db_var(1), 3),
            (db_app(db_var(0), db_var(2)), 3),
            (db_lam(db_var(0)), 2),
            (db_lam(db_app(db_var(1), db_var(1))), 2),
            (db_app(db_lam(db_var(1)), db_var(0)), 2),
        ];
        for (t, n) in cases {
            let scope = leaf_scope(n);
            let r = code(&syn, &t, &scope, &iota()).unwrap();
            let mut used = vec![false; n];
            scan(&t, n, &mut used);
            assert_eq!(r.thinning().bits(), &used[..], "support of {t:?}");
        }
    }

    #[test]
    fn decode_inverts_code() {
        let syn = lam_syntax();
        let cases = vec![
            (db_lam(db_var(0)), 0),
            (db_lam(db_lam(db_var(0))), 0),
            (db_lam(db_lam(db_var(1))), 0),
            (db_app(db_var(0), db_var(1)), 2),
            (db_lam(db_app(db_var(0), db_lam(db_app(db_var(1), db_var(2))))), 1),
        ];
        for (t, n) in cases {
            let scope = leaf_scope(n);
            let r = code(&syn, &t, &scope, &iota()).unwrap();
            assert_eq!(validate_r(&syn, &r, &scope, &iota()), Ok(()));
            assert_eq!(check_relevance(&r), Ok(()));
            assert_eq!(decode(&syn, &r, &scope, &iota()).unwrap(), t);
        }
    }

    #[test]
    fn validate_r_rejects_corrupted_covers() {
        let syn = lam_syntax();
        let scope = leaf_scope(2);
        let t = db_app(db_var(0), db_var(1));
        let good = code(&syn, &t, &scope, &iota()).unwrap();

        // Overwrite the app pair's cover with one that hands both
        // positions to the left.
        let corrupted = good.map(|term| match term {
            TermR::Con(BodyR::Tag(t, body)) => match &**body {
                BodyR::Pair(rp) => TermR::Con(BodyR::Tag(
                    t.clone(),
                    Arc::new(BodyR::Pair(RPair::from_raw_parts(
                        rp.left().clone(),
                        rp.right().clone(),
                        Cover::from_raw_parts(
                            true,
                            vec![crate::cover::Part::L, crate::cover::Part::L],
                            leaf_scope(2),
                        ),
                    ))),
                )),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        });
        let err = validate_r(&syn, &corrupted, &scope, &iota()).unwrap_err();
        assert!(matches!(err, TermError::Relevance { .. }), "{err:?}");
    }

    #[test]
    fn recompute_support_crosschecks_annotations() {
        let syn = lam_syntax();
        let scope = leaf_scope(2);
        let t = db_app(db_var(1), db_var(1));
        let r = code(&syn, &t, &scope, &iota()).unwrap();
        assert_eq!(
            recompute_support(r.thing(), r.thinning().source_len()).unwrap(),
            vec![true]
        );

        // A variable claiming wider support than it has is caught.
        let wide = Relev::from_raw_parts(
            TermR::Var(RPair::from_raw_parts(
                Relev::from_raw_parts(VarLeaf, th("10")),
                Relev::from_raw_parts(BodyR::Unit, th("00")),
                Cover::new(true, vec![crate::cover::Part::L, crate::cover::Part::L], leaf_scope(2)).unwrap(),
            )),
            Thinning::identity(&leaf_scope(2)),
        );
        assert!(check_relevance(&wide).is_err());
    }

    #[test]
    fn unbind_restores_coded_binders() {
        let syn = lam_syntax();
        let scope = leaf_scope(1);
        let t = db_lam(db_app(db_var(0), db_var(1)));
        let r = code(&syn, &t, &scope, &iota()).unwrap();
        if let TermR::Con(BodyR::Tag(_, body)) = r.thing() {
            if let BodyR::Bind(bd) = &**body {
                let whole = unbind(&Relev::from_raw_parts(bd.clone(), r.thinning().clone()));
                assert_eq!(whole.thinning().bits_string(), "11");
                return;
            }
        }
        panic!("coded lambda has unexpected shape");
    }
}
