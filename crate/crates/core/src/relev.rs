//! Things bundled with a thinning into an ambient scope.
//!
//! A [`Relev<T>`] is a `T` whose own scope is exactly its support, plus a
//! thinning embedding that support into the ambient scope. Weakening is
//! then [`Relev::thin`]: compose the thinning, never touch the thing. The
//! thing is behind an [`Arc`], so relocation shares structure instead of
//! copying it.
//!
//! On top of this the module builds the two connectives of co-de-Bruijn
//! syntax: relevant pairs ([`RPair`], built with [`rpair`]), whose cover
//! says which component owns each variable, and binders ([`Bind`], built
//! with [`bind`]), whose usage thinning says which bound variables the body
//! actually uses. Vacuous binders keep their all-zero usage; nothing is
//! invented or lost.

use alloc::sync::Arc;
use core::fmt;

use crate::cover::{coproduct, Cover};
use crate::error::ScopeError;
use crate::scope::Scope;
use crate::thin::Thinning;

/// A `T` together with a thinning from its support into an ambient scope.
pub struct Relev<T> {
    thing: Arc<T>,
    thinning: Thinning,
}

impl<T> Relev<T> {
    /// Pair a thing with a thinning. The caller asserts that the thing's
    /// scope is the thinning's source; validation re-checks this for data
    /// arriving from outside.
    pub fn from_raw_parts(thing: T, thinning: Thinning) -> Self {
        Relev {
            thing: Arc::new(thing),
            thinning,
        }
    }

    pub(crate) fn from_shared(thing: Arc<T>, thinning: Thinning) -> Self {
        Relev { thing, thinning }
    }

    /// Embed a thing that uses all of `kz` via the identity thinning.
    pub fn unit(thing: T, kz: &Scope) -> Self {
        Relev {
            thing: Arc::new(thing),
            thinning: Thinning::identity(kz),
        }
    }

    pub fn thing(&self) -> &T {
        &self.thing
    }

    /// The shared handle; useful for checking that an operation did not
    /// copy the underlying structure.
    pub fn shared_thing(&self) -> &Arc<T> {
        &self.thing
    }

    pub fn thinning(&self) -> &Thinning {
        &self.thinning
    }

    /// Rebuild the wrapper around a new thing at the same support.
    pub fn map<U>(&self, f: impl FnOnce(&T) -> U) -> Relev<U> {
        Relev {
            thing: Arc::new(f(&self.thing)),
            thinning: self.thinning.clone(),
        }
    }

    /// Relocate into a wider scope: compose the thinnings, share the thing.
    pub fn thin(&self, psi: &Thinning) -> Result<Relev<T>, ScopeError> {
        Ok(Relev {
            thing: self.thing.clone(),
            thinning: self.thinning.compose(psi)?,
        })
    }
}

/// Flatten a nested relocation: `(t ↑ θ) ↑ φ` becomes `t ↑ (θ ; φ)`.
pub fn mult<T>(r: &Relev<Relev<T>>) -> Result<Relev<T>, ScopeError> {
    r.thing().thin(r.thinning())
}

impl<T> Clone for Relev<T> {
    fn clone(&self) -> Self {
        Relev {
            thing: self.thing.clone(),
            thinning: self.thinning.clone(),
        }
    }
}

impl<T: PartialEq> PartialEq for Relev<T> {
    fn eq(&self, other: &Self) -> bool {
        self.thinning == other.thinning && *self.thing == *other.thing
    }
}

impl<T: Eq> Eq for Relev<T> {}

impl<T: fmt::Debug> fmt::Debug for Relev<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relev")
            .field("thing", &self.thing)
            .field("thinning", &self.thinning)
            .finish()
    }
}

impl<T: fmt::Display> fmt::Display for Relev<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ↑ {})", self.thing, self.thinning.bits_display())
    }
}

/// A pair whose components each use exactly their share of the scope, as
/// witnessed by the cover.
pub struct RPair<L, R> {
    left: Relev<L>,
    right: Relev<R>,
    cover: Cover,
}

impl<L, R> RPair<L, R> {
    /// Assemble a pair from pre-split components. The component thinnings
    /// must be the cover's two projections; validation re-checks this for
    /// deserialised data.
    pub fn from_raw_parts(left: Relev<L>, right: Relev<R>, cover: Cover) -> Self {
        RPair { left, right, cover }
    }

    pub fn left(&self) -> &Relev<L> {
        &self.left
    }

    pub fn right(&self) -> &Relev<R> {
        &self.right
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }
}

impl<L, R> Clone for RPair<L, R> {
    fn clone(&self) -> Self {
        RPair {
            left: self.left.clone(),
            right: self.right.clone(),
            cover: self.cover.clone(),
        }
    }
}

impl<L: PartialEq, R: PartialEq> PartialEq for RPair<L, R> {
    fn eq(&self, other: &Self) -> bool {
        self.left == other.left && self.right == other.right && self.cover == other.cover
    }
}

impl<L: Eq, R: Eq> Eq for RPair<L, R> {}

impl<L: fmt::Debug, R: fmt::Debug> fmt::Debug for RPair<L, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RPair")
            .field("left", &self.left)
            .field("right", &self.right)
            .field("cover", &self.cover)
            .finish()
    }
}

impl<L: fmt::Display, R: fmt::Display> fmt::Display for RPair<L, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = self.cover.shape_string();
        let shape = if shape.is_empty() { "ε" } else { &shape };
        write!(f, "(pair {} {} {})", self.left, self.right, shape)
    }
}

/// Pair two relevant things over a common ambient scope. The result's
/// support is the union of the components' supports; the cover records the
/// split and is recomputed here, never copied.
pub fn rpair<L, R>(s: &Relev<L>, t: &Relev<R>) -> Result<Relev<RPair<L, R>>, ScopeError> {
    let r = coproduct(s.thinning(), t.thinning())?;
    Ok(Relev {
        thing: Arc::new(RPair {
            left: Relev::from_shared(s.thing.clone(), r.left_in),
            right: Relev::from_shared(t.thing.clone(), r.right_in),
            cover: r.cover,
        }),
        thinning: r.union,
    })
}

/// Project the left component, re-embedded into the pair's ambient scope.
pub fn outl<L, R>(p: &Relev<RPair<L, R>>) -> Relev<L> {
    p.thing()
        .left
        .thin(p.thinning())
        .expect("pair invariant: component thinnings land in the pair's support")
}

/// Project the right component, re-embedded into the pair's ambient scope.
pub fn outr<L, R>(p: &Relev<RPair<L, R>>) -> Relev<R> {
    p.thing()
        .right
        .thin(p.thinning())
        .expect("pair invariant: component thinnings land in the pair's support")
}

/// A binder: the body lives in the ambient scope extended by the used
/// subset of the declared bindings, and the usage thinning says which
/// those are.
pub struct Bind<T> {
    usage: Thinning,
    body: Arc<T>,
}

impl<T> Bind<T> {
    /// Assemble a binder from explicit parts; validation re-checks scope
    /// agreement for deserialised data.
    pub fn from_raw_parts(usage: Thinning, body: T) -> Self {
        Bind {
            usage,
            body: Arc::new(body),
        }
    }

    /// Which of the declared bindings the body uses.
    pub fn usage(&self) -> &Thinning {
        &self.usage
    }

    pub fn body(&self) -> &T {
        &self.body
    }

    pub(crate) fn shared_body(&self) -> &Arc<T> {
        &self.body
    }
}

impl<T> Clone for Bind<T> {
    fn clone(&self) -> Self {
        Bind {
            usage: self.usage.clone(),
            body: self.body.clone(),
        }
    }
}

impl<T: PartialEq> PartialEq for Bind<T> {
    fn eq(&self, other: &Self) -> bool {
        self.usage == other.usage && *self.body == *other.body
    }
}

impl<T: Eq> Eq for Bind<T> {}

impl<T: fmt::Debug> fmt::Debug for Bind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bind")
            .field("usage", &self.usage)
            .field("body", &self.body)
            .finish()
    }
}

impl<T: fmt::Display> fmt::Display for Bind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}\\ {})", self.usage.bits_display(), self.body)
    }
}

/// Abstract the `jz` suffix of a relevant thing's ambient scope. The
/// thing's support splits into a global part (the new support) and a local
/// part (the usage); a binder none of whose variables are used keeps its
/// all-zero usage.
pub fn bind<T>(jz: &Scope, r: &Relev<T>) -> Result<Relev<Bind<T>>, ScopeError> {
    let (global, local) = r.thinning().split(jz)?;
    Ok(Relev {
        thing: Arc::new(Bind {
            usage: local,
            body: r.thing.clone(),
        }),
        thinning: global,
    })
}

/// Undo [`bind`]: put the body back in the extended ambient scope.
pub fn unbind<T>(b: &Relev<Bind<T>>) -> Relev<T> {
    Relev {
        thing: b.thing().body.clone(),
        thinning: b.thinning().concat(&b.thing().usage),
    }
}

/// The nullary leaf: valid only at empty support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitLeaf;

impl fmt::Display for UnitLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨⟩")
    }
}

/// The variable leaf: valid only at singleton support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarLeaf;

impl fmt::Display for VarLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("only")
    }
}

/// The unit leaf at ambient scope `kz`: nothing used.
pub fn runit(kz: &Scope) -> Relev<UnitLeaf> {
    Relev {
        thing: Arc::new(UnitLeaf),
        thinning: Thinning::empty(kz),
    }
}

/// The variable leaf pointed at by a singleton thinning.
pub fn rvar(x: Thinning) -> Result<Relev<VarLeaf>, ScopeError> {
    x.single_position()?;
    Ok(Relev {
        thing: Arc::new(VarLeaf),
        thinning: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instrument;
    use crate::scope::{Kind, Sort};
    use alloc::format;

    fn leaf_scope(n: usize) -> Scope {
        Scope::repeated(&Kind::base(Sort::new("ι")), n)
    }

    fn th(bits: &str) -> Thinning {
        Thinning::new(
            leaf_scope(bits.len()),
            bits.chars().map(|c| c == '1').collect(),
        )
        .unwrap()
    }

    #[test]
    fn thin_composes_and_shares() {
        let r = Relev::from_raw_parts('x', th("10"));
        let psi = th("110");
        let (shifted, visited) = instrument::counting(|| r.thin(&psi).unwrap());
        assert_eq!(shifted.thinning().bits_string(), "100");
        assert!(Arc::ptr_eq(r.shared_thing(), shifted.shared_thing()));
        assert_eq!(visited, 0);
    }

    #[test]
    fn unit_and_mult_satisfy_the_monad_laws() {
        for n in 0..=3 {
            let kz = leaf_scope(n);
            for theta in Thinning::enumerate(&kz) {
                let r = Relev::from_raw_parts('x', theta.clone());
                // Left unit: wrapping at the ambient scope and flattening
                // is the identity.
                assert_eq!(mult(&Relev::unit(r.clone(), &kz)).unwrap(), r);
                // Right unit: wrapping each thing at its own support.
                let wrapped = r.map(|c| Relev::unit(*c, &theta.source()));
                assert_eq!(mult(&wrapped).unwrap(), r);
            }
        }
    }

    #[test]
    fn mult_is_associative() {
        for outer in Thinning::enumerate(&leaf_scope(3)) {
            for mid in Thinning::enumerate(&outer.source()) {
                for inner in Thinning::enumerate(&mid.source()) {
                    let r3 = Relev::from_raw_parts(
                        Relev::from_raw_parts(
                            Relev::from_raw_parts('x', inner.clone()),
                            mid.clone(),
                        ),
                        outer.clone(),
                    );
                    let once = mult(&mult(&r3).unwrap()).unwrap();
                    let other = mult(&r3.map(|inner2| mult(inner2).unwrap())).unwrap();
                    assert_eq!(once, other);
                }
            }
        }
    }

    #[test]
    fn thin_twice_is_thin_by_composite() {
        for psi in Thinning::enumerate(&leaf_scope(3)) {
            for theta in Thinning::enumerate(&psi.source()) {
                for sup in Thinning::enumerate(&theta.source()) {
                    let r = Relev::from_raw_parts('x', sup.clone());
                    let stepwise = r.thin(&theta).unwrap().thin(&psi).unwrap();
                    let at_once = r.thin(&theta.compose(&psi).unwrap()).unwrap();
                    assert_eq!(stepwise, at_once);
                }
            }
        }
    }

    #[test]
    fn rpair_unions_supports() {
        let s = Relev::from_raw_parts('f', th("10"));
        let t = Relev::from_raw_parts('e', th("01"));
        let p = rpair(&s, &t).unwrap();
        assert_eq!(p.thinning().bits_string(), "11");
        assert_eq!(p.thing().cover().shape_string(), "LR");
        assert_eq!(format!("{p}"), "((pair (f ↑ 10) (e ↑ 01) LR) ↑ 11)");
    }

    #[test]
    fn projections_invert_rpair() {
        for n in 0..=3 {
            let kz = leaf_scope(n);
            for a in Thinning::enumerate(&kz) {
                for b in Thinning::enumerate(&kz) {
                    let s = Relev::from_raw_parts('s', a.clone());
                    let t = Relev::from_raw_parts('t', b.clone());
                    let p = rpair(&s, &t).unwrap();
                    assert_eq!(outl(&p), s);
                    assert_eq!(outr(&p), t);
                }
            }
        }
    }

    #[test]
    fn bind_splits_usage_and_unbind_restores() {
        let jz = leaf_scope(1);
        let r = Relev::from_raw_parts('x', th("101"));
        let b = bind(&jz, &r).unwrap();
        assert_eq!(b.thinning().bits_string(), "10");
        assert_eq!(b.thing().usage().bits_string(), "1");
        assert_eq!(unbind(&b), r);

        // A binder that is not used keeps its zero usage.
        let vac = Relev::from_raw_parts('x', th("100"));
        let bv = bind(&jz, &vac).unwrap();
        assert_eq!(bv.thing().usage().bits_string(), "0");
        assert_eq!(unbind(&bv), vac);
    }

    #[test]
    fn bind_unbind_roundtrip_exhaustive() {
        for ambient in 0..=2usize {
            for bound in 0..=2usize {
                let kz = leaf_scope(ambient).concat(&leaf_scope(bound));
                for theta in Thinning::enumerate(&kz) {
                    let r = Relev::from_raw_parts('x', theta);
                    let b = bind(&leaf_scope(bound), &r).unwrap();
                    assert_eq!(unbind(&b), r);
                }
            }
        }
    }

    #[test]
    fn leaves_constrain_their_support() {
        assert_eq!(runit(&leaf_scope(2)).thinning().bits_string(), "00");
        assert_eq!(rvar(th("010")).unwrap().thinning().bits_string(), "010");
        assert_eq!(rvar(th("110")), Err(ScopeError::NotSingleton));
        assert_eq!(rvar(th("000")), Err(ScopeError::NotSingleton));
    }

    #[test]
    fn display_formats() {
        let r = Relev::from_raw_parts('t', th("10"));
        assert_eq!(format!("{r}"), "(t ↑ 10)");
        let b = Bind {
            usage: th("1"),
            body: Arc::new('t'),
        };
        assert_eq!(format!("{b}"), "(1\\ t)");
        assert_eq!(format!("{}", runit(&leaf_scope(0))), "(⟨⟩ ↑ ε)");
    }
}
