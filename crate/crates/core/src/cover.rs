//! Covers: how two subscopes jointly account for a scope.
//!
//! A cover assigns each covered position to the left part (`L`), the right
//! part (`R`), or both (`B`); `B` is only allowed when the overlap flag is
//! set. Covers with the flag off are partitions. The left and right
//! thinnings are derived from the shape on demand, so there is a single
//! source of truth. Textual renderings look like `cover:LRB`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::ScopeError;
use crate::scope::Scope;
use crate::thin::{factor_through, SliceArrow, Thinning};

/// Which side(s) of a cover a position belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    L,
    R,
    B,
}

impl Part {
    pub fn to_char(self) -> char {
        match self {
            Part::L => 'L',
            Part::R => 'R',
            Part::B => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Part> {
        match c {
            'L' => Some(Part::L),
            'R' => Some(Part::R),
            'B' => Some(Part::B),
            _ => None,
        }
    }

    fn in_left(self) -> bool {
        matches!(self, Part::L | Part::B)
    }

    fn in_right(self) -> bool {
        matches!(self, Part::R | Part::B)
    }
}

/// A cover of `covered`, one [`Part`] per position, oldest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    overlap_ok: bool,
    shape: Vec<Part>,
    covered: Scope,
}

impl Cover {
    /// Build a cover, checking the structural invariants: one part per
    /// covered position, and `B` only where overlap is allowed.
    pub fn new(overlap_ok: bool, shape: Vec<Part>, covered: Scope) -> Result<Self, ScopeError> {
        if shape.len() != covered.len() {
            return Err(ScopeError::ScopeMismatch {
                op: "Cover::new",
                detail: format!(
                    "{} parts for covered scope of length {}",
                    shape.len(),
                    covered.len()
                ),
            });
        }
        if !overlap_ok && shape.contains(&Part::B) {
            return Err(ScopeError::FlagMismatch);
        }
        Ok(Cover {
            overlap_ok,
            shape,
            covered,
        })
    }

    /// Build a cover without any checks. Intended for deserialisers; the
    /// result must pass validation before being trusted.
    pub fn from_raw_parts(overlap_ok: bool, shape: Vec<Part>, covered: Scope) -> Self {
        Cover {
            overlap_ok,
            shape,
            covered,
        }
    }

    pub fn overlap_ok(&self) -> bool {
        self.overlap_ok
    }

    pub fn shape(&self) -> &[Part] {
        &self.shape
    }

    pub fn covered(&self) -> &Scope {
        &self.covered
    }

    /// Is the structural invariant satisfied? Deserialised covers can
    /// violate it; everything built by this module satisfies it.
    pub fn is_well_formed(&self) -> bool {
        self.shape.len() == self.covered.len()
            && (self.overlap_ok || !self.shape.contains(&Part::B))
    }

    /// The thinning embedding the left part into the covered scope.
    pub fn left(&self) -> Thinning {
        Thinning::new(
            self.covered.clone(),
            self.shape.iter().map(|p| p.in_left()).collect(),
        )
        .expect("cover invariant: one part per position")
    }

    /// The thinning embedding the right part into the covered scope.
    pub fn right(&self) -> Thinning {
        Thinning::new(
            self.covered.clone(),
            self.shape.iter().map(|p| p.in_right()).collect(),
        )
        .expect("cover invariant: one part per position")
    }

    /// Concatenate with a cover of newer bindings. The overlap flags must
    /// agree.
    pub fn concat(&self, newer: &Cover) -> Result<Cover, ScopeError> {
        if self.overlap_ok != newer.overlap_ok {
            return Err(ScopeError::FlagMismatch);
        }
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&newer.shape);
        Ok(Cover {
            overlap_ok: self.overlap_ok,
            shape,
            covered: self.covered.concat(&newer.covered),
        })
    }

    pub fn shape_string(&self) -> String {
        self.shape.iter().map(|p| p.to_char()).collect()
    }

    /// All covers of `covered` with the given overlap flag.
    pub fn enumerate(covered: &Scope, overlap_ok: bool) -> Vec<Cover> {
        let parts: &[Part] = if overlap_ok {
            &[Part::L, Part::R, Part::B]
        } else {
            &[Part::L, Part::R]
        };
        let mut out = alloc::vec![Vec::new()];
        for _ in 0..covered.len() {
            let mut next = Vec::new();
            for shape in &out {
                for p in parts {
                    let mut s = shape.clone();
                    s.push(*p);
                    next.push(s);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|shape| Cover {
                overlap_ok,
                shape,
                covered: covered.clone(),
            })
            .collect()
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shape.is_empty() {
            f.write_str("cover:ε")
        } else {
            write!(f, "cover:{}", self.shape_string())
        }
    }
}

/// The coproduct of two thinnings into a common scope: the smallest
/// subscope through which both factor, with the witnessing cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductResult {
    /// The union support embedded in the shared target.
    pub union: Thinning,
    /// Left input re-embedded into the union's source.
    pub left_in: Thinning,
    /// Right input re-embedded into the union's source.
    pub right_in: Thinning,
    /// How the two inputs cover the union's source. Overlap is allowed.
    pub cover: Cover,
}

/// Pointwise union of two thinnings with the same target.
pub fn coproduct(theta: &Thinning, phi: &Thinning) -> Result<CoproductResult, ScopeError> {
    if theta.target() != phi.target() {
        return Err(ScopeError::ScopeMismatch {
            op: "coproduct",
            detail: format!("targets differ: {} vs {}", theta.target(), phi.target()),
        });
    }
    let mut union_bits = Vec::with_capacity(theta.bits().len());
    let mut shape = Vec::new();
    let mut left_bits = Vec::new();
    let mut right_bits = Vec::new();
    for (t, p) in theta.bits().iter().zip(phi.bits()) {
        union_bits.push(*t || *p);
        match (t, p) {
            (true, false) => shape.push(Part::L),
            (false, true) => shape.push(Part::R),
            (true, true) => shape.push(Part::B),
            (false, false) => continue,
        }
        left_bits.push(*t);
        right_bits.push(*p);
    }
    let union = Thinning::new(theta.target().clone(), union_bits)?;
    let source = union.source();
    Ok(CoproductResult {
        left_in: Thinning::new(source.clone(), left_bits)?,
        right_in: Thinning::new(source.clone(), right_bits)?,
        cover: Cover::new(true, shape, source)?,
        union,
    })
}

/// The universal property: if both inputs of `r` factor through a common
/// `base` (witnessed by `f` and `g`), then so does the union, mediated by
/// the pointwise disjunction of the two mediators. The returned arrow's
/// equation is checked at construction.
pub fn coproduct_factor(
    r: &CoproductResult,
    f: &SliceArrow,
    g: &SliceArrow,
) -> Result<SliceArrow, ScopeError> {
    if f.base() != g.base() {
        return Err(ScopeError::ScopeMismatch {
            op: "coproduct_factor",
            detail: String::from("the two factorizations go through different bases"),
        });
    }
    let theta = r.left_in.compose(&r.union)?;
    let phi = r.right_in.compose(&r.union)?;
    if *f.total() != theta || *g.total() != phi {
        return Err(ScopeError::ScopeMismatch {
            op: "coproduct_factor",
            detail: String::from("factorizations do not witness the coproduct's inputs"),
        });
    }
    let bits = f
        .mediator()
        .bits()
        .iter()
        .zip(g.mediator().bits())
        .map(|(a, b)| *a || *b)
        .collect();
    let mediator = Thinning::new(f.base().source(), bits)?;
    SliceArrow::new(mediator, f.base().clone(), r.union.clone())
}

/// A cover pulled back along a thinning into its covered scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refined {
    /// The restricted cover, over the thinning's source.
    pub cover: Cover,
    /// Embeds the restricted left part into the original left part.
    pub left_embed: Thinning,
    /// Embeds the restricted right part into the original right part.
    pub right_embed: Thinning,
}

/// Restrict cover `c` to the positions selected by `psi`. The two squares
/// `left_embed ; c.left = cover.left ; psi` and
/// `right_embed ; c.right = cover.right ; psi` commute.
pub fn refine(psi: &Thinning, c: &Cover) -> Result<Refined, ScopeError> {
    if psi.target() != c.covered() {
        return Err(ScopeError::ScopeMismatch {
            op: "refine",
            detail: format!(
                "thinning target {} is not the covered scope {}",
                psi.target(),
                c.covered()
            ),
        });
    }
    let mut shape = Vec::new();
    let mut left_bits = Vec::new();
    let mut right_bits = Vec::new();
    for (part, selected) in c.shape().iter().zip(psi.bits()) {
        if part.in_left() {
            left_bits.push(*selected);
        }
        if part.in_right() {
            right_bits.push(*selected);
        }
        if *selected {
            shape.push(*part);
        }
    }
    Ok(Refined {
        cover: Cover::new(c.overlap_ok(), shape, psi.source())?,
        left_embed: Thinning::new(c.left().source(), left_bits)?,
        right_embed: Thinning::new(c.right().source(), right_bits)?,
    })
}

/// The cover splitting `older ++ newer` into its two halves, together with
/// the corresponding embeddings. Valid for either overlap flag, so the
/// caller picks one.
pub fn left_right_cover(
    older: &Scope,
    newer: &Scope,
    overlap_ok: bool,
) -> (Thinning, Thinning, Cover) {
    let covered = older.concat(newer);
    let theta = Thinning::identity(older).concat(&Thinning::empty(newer));
    let phi = Thinning::empty(older).concat(&Thinning::identity(newer));
    let mut shape = alloc::vec![Part::L; older.len()];
    shape.extend(core::iter::repeat(Part::R).take(newer.len()));
    let cover = Cover::new(overlap_ok, shape, covered).expect("shape built to length");
    (theta, phi, cover)
}

/// Claim that a cover has everything on the left, i.e. its right part is
/// empty. Returns `true` whenever that holds; the left thinning is then
/// the identity.
pub fn all_left(c: &Cover) -> Result<bool, ScopeError> {
    if c.shape().iter().any(|p| p.in_right()) {
        return Err(ScopeError::ScopeMismatch {
            op: "all_left",
            detail: String::from("cover has a nonempty right part"),
        });
    }
    debug_assert!(c.left().is_identity());
    Ok(true)
}

/// Convenience: does `total` factor through `base`?
pub fn factors(total: &Thinning, base: &Thinning) -> bool {
    factor_through(total, base).is_ok()
}
