//! Simultaneous hereditary substitution.
//!
//! An [`HSub`] from `src` to `trg` partitions `src` into passive variables,
//! which are renamed into `trg` by a thinning, and active variables, which
//! are replaced by images: a spine of binders over `trg`, one per active
//! kind. Substitution is support-directed. At every term node the
//! partition is restricted to the node's support; if no active variable
//! survives, the node is relocated by composing thinnings and its subtree
//! is shared, not visited. Only nodes whose support meets the active zone
//! are rebuilt.
//!
//! Replacing a variable of higher kind is hereditary: the image is a
//! binder, its parameters are substituted by the (already substituted)
//! spine components, and that inner substitution may uncover further
//! replacements. The active zone of each inner substitution is the
//! replaced kind's own scope, so the combined size of active kinds
//! strictly decreases and the process terminates. The instrumentation
//! module records this measure at every hereditary step.

use alloc::format;

use crate::cover::{left_right_cover, refine, Cover, Part};
use crate::error::{ScopeError, TermError};
use crate::instrument;
use crate::relev::{bind, rpair, runit, rvar, Relev};
use crate::scope::{Kind, Scope, Sort};
use crate::thin::{factor_through, Thinning};
use crate::universe::{spine_desc, BodyR, Desc, Syntax, TermR};

/// A simultaneous substitution, split into a passive renaming and a spine
/// of images for the active variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSub {
    /// Partition of the source scope: `L` is passive, `R` is active. The
    /// overlap flag is off, so no variable is both.
    parti: Cover,
    /// Renames the passive variables into the target scope.
    pass_trg: Thinning,
    /// Images for the active variables: a body shaped like the spine of
    /// the active scope, over the target scope. Each entry is a binder
    /// abstracting its kind's parameters.
    images: Relev<BodyR>,
}

impl HSub {
    /// Assemble a substitution, checking the boundary conditions: the
    /// partition really is one (no overlap), the passive renaming starts
    /// at the passive part, and the images live over the target.
    pub fn new(parti: Cover, pass_trg: Thinning, images: Relev<BodyR>) -> Result<Self, ScopeError> {
        if parti.overlap_ok() {
            return Err(ScopeError::FlagMismatch);
        }
        if !parti.is_well_formed() {
            return Err(ScopeError::ScopeMismatch {
                op: "HSub::new",
                detail: format!("partition shape {} is malformed", parti.shape_string()),
            });
        }
        if parti.left().source() != pass_trg.source() {
            return Err(ScopeError::ScopeMismatch {
                op: "HSub::new",
                detail: format!(
                    "passive part {} but the renaming starts at {}",
                    parti.left().source(),
                    pass_trg.source()
                ),
            });
        }
        if images.thinning().target() != pass_trg.target() {
            return Err(ScopeError::ScopeMismatch {
                op: "HSub::new",
                detail: format!(
                    "images over {} but the target is {}",
                    images.thinning().target(),
                    pass_trg.target()
                ),
            });
        }
        Ok(HSub {
            parti,
            pass_trg,
            images,
        })
    }

    /// Assemble a substitution without any checks. Intended for
    /// deserialisers and tests; garbage in, errors out of [`h_sub`].
    pub fn from_raw_parts(parti: Cover, pass_trg: Thinning, images: Relev<BodyR>) -> Self {
        HSub {
            parti,
            pass_trg,
            images,
        }
    }

    /// The substitution that only renames: everything is passive.
    pub fn renaming(theta: &Thinning) -> Self {
        let src = theta.source();
        let parti = Cover::new(false, alloc::vec![Part::L; src.len()], src)
            .expect("an all-left shape never needs the overlap flag");
        HSub {
            parti,
            pass_trg: theta.clone(),
            images: runit(theta.target()).map(|_| BodyR::Unit),
        }
    }

    /// Substitute the newest variable of `ambient ++ [kind]`, keeping the
    /// rest. The image abstracts the kind's parameters, so it lives over
    /// `ambient ++ kind.scope()`.
    pub fn single(
        ambient: &Scope,
        kind: &Kind,
        image: &Relev<TermR>,
    ) -> Result<Self, ScopeError> {
        let bound = Scope::from_kinds(alloc::vec![kind.clone()]);
        let (_, _, parti) = left_right_cover(ambient, &bound, false);
        let unit = runit(ambient).map(|_| BodyR::Unit);
        let entry = bind(kind.scope(), image)?.map(|bd| BodyR::Bind(bd.clone()));
        let images = rpair(&unit, &entry)?.map(|rp| BodyR::Pair(rp.clone()));
        HSub::new(parti, Thinning::identity(ambient), images)
    }

    pub fn src(&self) -> &Scope {
        self.parti.covered()
    }

    pub fn trg(&self) -> &Scope {
        self.pass_trg.target()
    }

    pub fn partition(&self) -> &Cover {
        &self.parti
    }

    /// Embeds the passive variables into the source scope.
    pub fn passive(&self) -> Thinning {
        self.parti.left()
    }

    /// Embeds the active variables into the source scope.
    pub fn active(&self) -> Thinning {
        self.parti.right()
    }

    pub fn pass_trg(&self) -> &Thinning {
        &self.pass_trg
    }

    pub fn images(&self) -> &Relev<BodyR> {
        &self.images
    }

    /// Push the substitution under `jz` new bindings, which pass through
    /// unchanged. The images are relocated by composing thinnings; their
    /// structure is shared, not visited.
    pub fn weaken(&self, jz: &Scope) -> Result<HSub, ScopeError> {
        let pad = Cover::new(false, alloc::vec![Part::L; jz.len()], jz.clone())?;
        Ok(HSub {
            parti: self.parti.concat(&pad)?,
            pass_trg: self.pass_trg.concat(&Thinning::identity(jz)),
            images: self
                .images
                .thin(&Thinning::identity(self.trg()).concat(&Thinning::empty(jz)))?,
        })
    }

    /// The total size of the active kinds: the termination measure of
    /// hereditary substitution.
    fn active_weight(&self) -> u64 {
        self.active().source().kind_size()
    }
}

/// Apply a substitution to a term over its source scope. The result is
/// over the target scope, with its support recomputed on the way up.
pub fn h_sub(
    syntax: &Syntax,
    h: &HSub,
    r: &Relev<TermR>,
    sort: &Sort,
) -> Result<Relev<TermR>, TermError> {
    if r.thinning().target() != h.src() {
        return Err(ScopeError::ScopeMismatch {
            op: "h_sub",
            detail: format!(
                "term over {} but the substitution starts at {}",
                r.thinning().target(),
                h.src()
            ),
        }
        .into());
    }
    let out = sub_term(syntax, h, r, sort, true)?;
    debug_assert!(
        crate::universe::validate_r(syntax, &out, h.trg(), sort).is_ok(),
        "substitution produced an invalid term"
    );
    Ok(out)
}

/// Apply a substitution to a body over its source scope.
pub fn h_subs(
    syntax: &Syntax,
    desc: &Desc,
    h: &HSub,
    b: &Relev<BodyR>,
) -> Result<Relev<BodyR>, TermError> {
    if b.thinning().target() != h.src() {
        return Err(ScopeError::ScopeMismatch {
            op: "h_subs",
            detail: format!(
                "body over {} but the substitution starts at {}",
                b.thinning().target(),
                h.src()
            ),
        }
        .into());
    }
    let out = sub_body(syntax, desc, h, b.thing(), b.thinning(), true)?;
    debug_assert!(
        crate::universe::validate_body_r(syntax, desc, &out, h.trg()).is_ok(),
        "substitution produced an invalid body"
    );
    Ok(out)
}

/// `fast` controls the support shortcut; tests disable it to check that
/// the shortcut changes nothing but the work done.
fn sub_term(
    syntax: &Syntax,
    h: &HSub,
    r: &Relev<TermR>,
    sort: &Sort,
    fast: bool,
) -> Result<Relev<TermR>, TermError> {
    if fast {
        let refined = refine(r.thinning(), &h.parti)?;
        if refined.cover.shape().iter().all(|p| matches!(*p, Part::L)) {
            // The support is entirely passive: relocate the whole subtree
            // without looking inside it.
            let emb = refined.left_embed.compose(&h.pass_trg)?;
            return Ok(Relev::from_shared(r.shared_thing().clone(), emb));
        }
    }
    instrument::visit();
    match r.thing() {
        TermR::Con(b) => {
            let desc = syntax
                .desc(sort)
                .ok_or_else(|| TermError::shape(format!("no description for sort {sort}")))?;
            let inner = sub_body(syntax, desc, h, b, r.thinning(), fast).map_err(|e| e.at("con"))?;
            Ok(Relev::from_raw_parts(
                TermR::Con(inner.thing().clone()),
                inner.thinning().clone(),
            ))
        }
        TermR::Var(rp) => {
            let x = rp.left().thinning().compose(r.thinning())?;
            let pos = x.single_position()?;
            let kind = h
                .src()
                .get(pos)
                .expect("a thinning's selected positions lie in its target")
                .clone();
            let spsi = rp.right().thinning().compose(r.thinning())?;
            let spine = sub_body(
                syntax,
                &spine_desc(kind.scope()),
                h,
                rp.right().thing(),
                &spsi,
                fast,
            )
            .map_err(|e| e.at("var.spine"))?;
            hered(syntax, h, &x, &kind, &spine, fast)
        }
    }
}

fn sub_body(
    syntax: &Syntax,
    desc: &Desc,
    h: &HSub,
    b: &BodyR,
    psi: &Thinning,
    fast: bool,
) -> Result<Relev<BodyR>, TermError> {
    instrument::visit();
    match (desc, b) {
        (Desc::One, BodyR::Unit) => Ok(runit(h.trg()).map(|_| BodyR::Unit)),
        (Desc::Sg(datoid, _), BodyR::Tag(tag, rest)) => {
            if !datoid.contains(tag) {
                return Err(TermError::shape(format!("unknown tag {tag}")));
            }
            let arm = desc
                .arm(tag)
                .ok_or_else(|| TermError::shape(format!("no arm for tag {tag}")))?;
            let inner =
                sub_body(syntax, arm, h, rest, psi, fast).map_err(|e| e.at(tag.name()))?;
            Ok(Relev::from_raw_parts(
                BodyR::Tag(tag.clone(), inner.shared_thing().clone()),
                inner.thinning().clone(),
            ))
        }
        (Desc::Times(s1, s2), BodyR::Pair(rp)) => {
            let lpsi = rp.left().thinning().compose(psi)?;
            let rpsi = rp.right().thinning().compose(psi)?;
            let ls = sub_body(syntax, s1, h, rp.left().thing(), &lpsi, fast)
                .map_err(|e| e.at("pair.l"))?;
            let rs = sub_body(syntax, s2, h, rp.right().thing(), &rpsi, fast)
                .map_err(|e| e.at("pair.r"))?;
            Ok(rpair(&ls, &rs)?.map(|p| BodyR::Pair(p.clone())))
        }
        (Desc::Rec(kind), BodyR::Bind(bd)) => {
            let h2 = h.weaken(kind.scope())?;
            let body = Relev::from_shared(bd.shared_body().clone(), psi.concat(bd.usage()));
            let inner =
                sub_term(syntax, &h2, &body, kind.sort(), fast).map_err(|e| e.at("bind"))?;
            Ok(bind(kind.scope(), &inner)?.map(|x| BodyR::Bind(x.clone())))
        }
        (desc, body) => Err(TermError::shape(format!(
            "body {body} does not match description {desc:?}"
        ))),
    }
}

/// Act on a variable `x` of `kind` whose spine has already been
/// substituted. Passive variables are renamed and rebuilt; an active
/// variable is replaced by its image, whose parameters are in turn
/// substituted by the spine components.
fn hered(
    syntax: &Syntax,
    h: &HSub,
    x: &Thinning,
    kind: &Kind,
    spine: &Relev<BodyR>,
    fast: bool,
) -> Result<Relev<TermR>, TermError> {
    let pos = x.single_position()?;
    if pos >= h.parti.shape().len() {
        return Err(TermError::shape(format!(
            "variable position {pos} outside the partition"
        )));
    }
    match h.parti.shape()[pos] {
        Part::B => Err(TermError::Unreachable(
            "a partition assigns each variable to exactly one side",
        )),
        Part::L => {
            let arrow = factor_through(x, &h.passive())?;
            let v = rvar(arrow.mediator().compose(&h.pass_trg)?)?;
            let p = rpair(&v, spine)?;
            Ok(p.map(|rp| TermR::Var(rp.clone())))
        }
        Part::R => {
            let act_idx = h.parti.shape()[..pos]
                .iter()
                .filter(|p| matches!(**p, Part::R))
                .count();
            let act_len = h.active().source_len();
            // The image spine nests to the left, newest entry outermost:
            // peel left past the newer entries, then take the right.
            let mut cur = h.images.clone();
            for _ in 0..(act_len - 1 - act_idx) {
                instrument::visit();
                cur = pair_left(&cur)?;
            }
            instrument::visit();
            let entry = pair_right(&cur)?;
            let bd = match entry.thing() {
                BodyR::Bind(bd) => bd.clone(),
                other => {
                    return Err(TermError::shape(format!(
                        "image spine entry {other} is not a binder"
                    )))
                }
            };
            // The image's parameters become the active zone of an inner
            // substitution whose images are the spine components.
            let (_, _, parti2) = left_right_cover(h.trg(), kind.scope(), false);
            let h2 = HSub {
                parti: parti2,
                pass_trg: Thinning::identity(h.trg()),
                images: spine.clone(),
            };
            instrument::record_hered(h.active_weight(), h2.active_weight());
            let body = Relev::from_shared(
                bd.shared_body().clone(),
                entry.thinning().concat(bd.usage()),
            );
            sub_term(syntax, &h2, &body, kind.sort(), fast)
        }
    }
}

fn pair_left(r: &Relev<BodyR>) -> Result<Relev<BodyR>, TermError> {
    match r.thing() {
        BodyR::Pair(rp) => Ok(rp.left().thin(r.thinning())?),
        other => Err(TermError::shape(format!(
            "image spine {other} is not a pair"
        ))),
    }
}

fn pair_right(r: &Relev<BodyR>) -> Result<Relev<BodyR>, TermError> {
    match r.thing() {
        BodyR::Pair(rp) => Ok(rp.right().thin(r.thinning())?),
        other => Err(TermError::shape(format!(
            "image spine {other} is not a pair"
        ))),
    }
}
