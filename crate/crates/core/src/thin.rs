//! Thinnings: order-preserving embeddings of one scope into another.
//!
//! A thinning records one bit per target position, oldest first: `1` means
//! the position is in the image, `0` that it is skipped. The source scope
//! is not stored; it is the subsequence of the target selected by the `1`
//! bits. Thinnings form a category with identities [`Thinning::identity`]
//! and composition [`Thinning::compose`]; textual renderings are bit
//! strings like `⊑:10001`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::ScopeError;
use crate::scope::Scope;

/// An order-preserving embedding into `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thinning {
    target: Scope,
    bits: Vec<bool>,
}

impl Thinning {
    /// Build a thinning from explicit bits. The only structural invariant,
    /// one bit per target position, is enforced even here.
    pub fn new(target: Scope, bits: Vec<bool>) -> Result<Self, ScopeError> {
        if bits.len() != target.len() {
            return Err(ScopeError::ScopeMismatch {
                op: "Thinning::new",
                detail: format!("{} bits for target of length {}", bits.len(), target.len()),
            });
        }
        Ok(Thinning { target, bits })
    }

    /// The identity thinning on `kz`: every position selected.
    pub fn identity(kz: &Scope) -> Self {
        Thinning {
            bits: alloc::vec![true; kz.len()],
            target: kz.clone(),
        }
    }

    /// The empty thinning into `kz`: no position selected. This is the
    /// unique thinning out of the empty scope.
    pub fn empty(kz: &Scope) -> Self {
        Thinning {
            bits: alloc::vec![false; kz.len()],
            target: kz.clone(),
        }
    }

    /// The singleton thinning selecting position `index` of `kz`.
    pub fn point(kz: &Scope, index: usize) -> Result<Self, ScopeError> {
        if index >= kz.len() {
            return Err(ScopeError::IndexOutOfRange {
                index,
                len: kz.len(),
            });
        }
        let mut bits = alloc::vec![false; kz.len()];
        bits[index] = true;
        Ok(Thinning {
            target: kz.clone(),
            bits,
        })
    }

    pub fn target(&self) -> &Scope {
        &self.target
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The source scope: the target subsequence at selected positions.
    pub fn source(&self) -> Scope {
        Scope::from_kinds(
            self.bits
                .iter()
                .zip(self.target.kinds())
                .filter(|(b, _)| **b)
                .map(|(_, k)| k.clone())
                .collect(),
        )
    }

    pub fn source_len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|b| *b)
    }

    /// Target positions in the image, oldest first.
    pub fn selected_positions(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| i)
            .collect()
    }

    /// The unique selected position of a singleton thinning.
    pub fn single_position(&self) -> Result<usize, ScopeError> {
        let sel = self.selected_positions();
        match sel[..] {
            [p] => Ok(p),
            _ => Err(ScopeError::NotSingleton),
        }
    }

    /// Composition in diagram order: `self : iz ⊑ jz`, `other : jz ⊑ kz`,
    /// result `iz ⊑ kz`.
    pub fn compose(&self, other: &Thinning) -> Result<Thinning, ScopeError> {
        if self.target != other.source() {
            return Err(ScopeError::ScopeMismatch {
                op: "compose",
                detail: format!(
                    "target {} of the first differs from source of ⊑:{}",
                    self.target,
                    other.bits_string()
                ),
            });
        }
        let mut bits = Vec::with_capacity(other.bits.len());
        let mut inner = self.bits.iter();
        for b in &other.bits {
            bits.push(*b && *inner.next().expect("source length checked"));
        }
        Ok(Thinning {
            target: other.target.clone(),
            bits,
        })
    }

    /// Check the composition triangle `self ; mid = total`.
    pub fn is_triangle(&self, mid: &Thinning, total: &Thinning) -> Result<bool, ScopeError> {
        if total.target != mid.target {
            return Err(ScopeError::ScopeMismatch {
                op: "is_triangle",
                detail: String::from("composite and claimed total have different targets"),
            });
        }
        if total.source() != self.source() {
            return Err(ScopeError::ScopeMismatch {
                op: "is_triangle",
                detail: String::from("composite and claimed total have different sources"),
            });
        }
        Ok(self.compose(mid)? == *total)
    }

    /// Concatenate side by side: `(θ ++ φ) : iz++lz ⊑ jz++mz`.
    pub fn concat(&self, newer: &Thinning) -> Thinning {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&newer.bits);
        Thinning {
            target: self.target.concat(&newer.target),
            bits,
        }
    }

    /// Undo [`Thinning::concat`]: split off the part over the `newer`
    /// suffix of the target scope.
    pub fn split(&self, newer: &Scope) -> Result<(Thinning, Thinning), ScopeError> {
        let older = self.target.split_suffix(newer).ok_or_else(|| {
            ScopeError::ScopeMismatch {
                op: "split",
                detail: format!("target {} does not end with {}", self.target, newer),
            }
        })?;
        let cut = older.len();
        Ok((
            Thinning {
                target: older,
                bits: self.bits[..cut].to_vec(),
            },
            Thinning {
                target: newer.clone(),
                bits: self.bits[cut..].to_vec(),
            },
        ))
    }

    /// All thinnings into `target`, in ascending bit order (oldest position
    /// is the least significant choice).
    pub fn enumerate(target: &Scope) -> impl Iterator<Item = Thinning> + '_ {
        let n = target.len();
        assert!(n < usize::BITS as usize, "scope too large to enumerate");
        (0..1usize << n).map(move |mask| Thinning {
            target: target.clone(),
            bits: (0..n).map(|i| mask & (1 << i) != 0).collect(),
        })
    }

    /// The bits as a `{0,1}` string, oldest first; empty string for the
    /// empty target.
    pub fn bits_string(&self) -> String {
        self.bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
    }

    /// The bits rendered for display: `ε` when the target is empty.
    pub fn bits_display(&self) -> String {
        if self.bits.is_empty() {
            String::from("ε")
        } else {
            self.bits_string()
        }
    }
}

impl fmt::Display for Thinning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⊑:{}", self.bits_display())
    }
}

/// A factoring of `total` through `base`: a mediating thinning with
/// `mediator ; base = total`. The equation is checked at construction, so
/// holders of a `SliceArrow` may rely on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceArrow {
    mediator: Thinning,
    base: Thinning,
    total: Thinning,
}

impl SliceArrow {
    pub fn new(mediator: Thinning, base: Thinning, total: Thinning) -> Result<Self, ScopeError> {
        let composite = mediator.compose(&base)?;
        if composite != total {
            return Err(ScopeError::ScopeMismatch {
                op: "SliceArrow::new",
                detail: format!(
                    "mediator ⊑:{} composed with base ⊑:{} gives ⊑:{}, not ⊑:{}",
                    mediator.bits_string(),
                    base.bits_string(),
                    composite.bits_string(),
                    total.bits_string()
                ),
            });
        }
        Ok(SliceArrow {
            mediator,
            base,
            total,
        })
    }

    pub fn mediator(&self) -> &Thinning {
        &self.mediator
    }

    pub fn base(&self) -> &Thinning {
        &self.base
    }

    pub fn total(&self) -> &Thinning {
        &self.total
    }
}

/// Factor `total` through `base` (both into the same target): find the
/// unique mediator with `mediator ; base = total`, or report that `total`
/// selects a position `base` misses.
pub fn factor_through(total: &Thinning, base: &Thinning) -> Result<SliceArrow, ScopeError> {
    if total.target() != base.target() {
        return Err(ScopeError::ScopeMismatch {
            op: "factor_through",
            detail: format!(
                "targets differ: {} vs {}",
                total.target(),
                base.target()
            ),
        });
    }
    let mut bits = Vec::with_capacity(base.source_len());
    for (t, b) in total.bits().iter().zip(base.bits()) {
        match (t, b) {
            (_, true) => bits.push(*t),
            (true, false) => return Err(ScopeError::NoFactor),
            (false, false) => {}
        }
    }
    let mediator = Thinning::new(base.source(), bits)?;
    SliceArrow::new(mediator, base.clone(), total.clone())
}

/// Mutual embeddings force both to be identities (and the scopes equal).
/// Returns `true` whenever the boundary preconditions hold; kept as a
/// runtime-checked lemma.
pub fn antisym(theta: &Thinning, phi: &Thinning) -> Result<bool, ScopeError> {
    if phi.source() != *theta.target() || theta.source() != *phi.target() {
        return Err(ScopeError::ScopeMismatch {
            op: "antisym",
            detail: String::from("the two thinnings do not point at each other"),
        });
    }
    Ok(theta.is_identity() && phi.is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scope::{Kind, Sort};
    use alloc::vec::Vec;

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

    /// Thinning over the source of `outer`, from a bit string.
    fn th_into(bits: &str, outer: &Thinning) -> Thinning {
        Thinning::new(outer.source(), bits.chars().map(|c| c == '1').collect()).unwrap()
    }

    #[test]
    fn compose_drops_through_skips() {
        // Selecting {0,2} out of the three survivors of 10101 lands on
        // positions {0,4} of the five-element target.
        let phi = th("10101");
        let theta = th_into("101", &phi);
        assert_eq!(theta.compose(&phi).unwrap().bits_string(), "10001");
    }

    #[test]
    fn compose_requires_matching_boundary() {
        let theta = th("10");
        let phi = th("10101");
        assert!(matches!(
            theta.compose(&phi),
            Err(ScopeError::ScopeMismatch { .. })
        ));
    }

    #[test]
    fn identity_laws_exhaustive_small() {
        for n in 0..=4 {
            let kz = leaf_scope(n);
            for theta in Thinning::enumerate(&kz) {
                let src_id = Thinning::identity(&theta.source());
                assert_eq!(src_id.compose(&theta).unwrap(), theta);
                assert_eq!(theta.compose(&Thinning::identity(&kz)).unwrap(), theta);
            }
        }
    }

    #[test]
    fn composition_associative_small() {
        for n in 0..=4 {
            let kz = leaf_scope(n);
            for psi in Thinning::enumerate(&kz) {
                for phi in Thinning::enumerate(&psi.source()) {
                    for theta in Thinning::enumerate(&phi.source()) {
                        let left = theta.compose(&phi).unwrap().compose(&psi).unwrap();
                        let right = theta.compose(&phi.compose(&psi).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn empty_source_thinning_unique() {
        for n in 0..=5 {
            let kz = leaf_scope(n);
            let found: Vec<Thinning> = Thinning::enumerate(&kz)
                .filter(|t| t.source().is_empty())
                .collect();
            assert_eq!(found, alloc::vec![Thinning::empty(&kz)]);
        }
    }

    #[test]
    fn antisym_forces_identity() {
        for n in 0..=4 {
            let kz = leaf_scope(n);
            for theta in Thinning::enumerate(&kz) {
                for phi in Thinning::enumerate(&theta.source()) {
                    if phi.source() == *theta.target() {
                        assert_eq!(antisym(&theta, &phi), Ok(true));
                        assert!(theta.is_identity() && phi.is_identity());
                    } else {
                        assert!(antisym(&theta, &phi).is_err());
                    }
                }
            }
        }
    }

    #[test]
    fn point_selects_one_position() {
        let kz = leaf_scope(3);
        assert_eq!(Thinning::point(&kz, 0).unwrap().bits_string(), "100");
        assert_eq!(Thinning::point(&kz, 2).unwrap().bits_string(), "001");
        assert_eq!(
            Thinning::point(&kz, 3),
            Err(ScopeError::IndexOutOfRange { index: 3, len: 3 })
        );
    }

    #[test]
    fn factor_through_finds_the_unique_mediator() {
        let base = th("10101");
        let total = th("10001");
        let arrow = factor_through(&total, &base).unwrap();
        assert_eq!(arrow.mediator().bits_string(), "101");

        // Brute force: the mediator is the only thinning that composes to
        // the total.
        let mediators: Vec<Thinning> = Thinning::enumerate(&base.source())
            .filter(|m| m.compose(&base).unwrap() == total)
            .collect();
        assert_eq!(mediators, alloc::vec![arrow.mediator().clone()]);
    }

    #[test]
    fn factor_through_rejects_escapees() {
        let base = th("10101");
        let total = th("01000");
        assert_eq!(factor_through(&total, &base), Err(ScopeError::NoFactor));
    }

    #[test]
    fn slice_arrow_checks_its_equation() {
        let base = th("10101");
        let good = th_into("101", &base);
        let bad = th_into("110", &base);
        let total = th("10001");
        assert!(SliceArrow::new(good, base.clone(), total.clone()).is_ok());
        assert!(SliceArrow::new(bad, base, total).is_err());
    }

    #[test]
    fn split_undoes_concat() {
        let psi = th("10011");
        let (older, newer) = psi.split(&leaf_scope(2)).unwrap();
        assert_eq!(older.bits_string(), "100");
        assert_eq!(newer.bits_string(), "11");
        assert_eq!(older.concat(&newer), psi);

        for a in 0..=3 {
            for b in 0..=3 {
                for theta in Thinning::enumerate(&leaf_scope(a)) {
                    for phi in Thinning::enumerate(&leaf_scope(b)) {
                        let joined = theta.concat(&phi);
                        let (t2, p2) = joined.split(&leaf_scope(b)).unwrap();
                        assert_eq!((t2, p2), (theta.clone(), phi.clone()));
                    }
                }
            }
        }
    }

    #[test]
    fn concat_is_functorial() {
        // (θ0 ; φ0) ++ (θ1 ; φ1) = (θ0 ++ θ1) ; (φ0 ++ φ1)
        for phi0 in Thinning::enumerate(&leaf_scope(2)) {
            for phi1 in Thinning::enumerate(&leaf_scope(2)) {
                for theta0 in Thinning::enumerate(&phi0.source()) {
                    for theta1 in Thinning::enumerate(&phi1.source()) {
                        let lhs = theta0
                            .compose(&phi0)
                            .unwrap()
                            .concat(&theta1.compose(&phi1).unwrap());
                        let rhs = theta0
                            .concat(&theta1)
                            .compose(&phi0.concat(&phi1))
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn is_triangle_checks_boundaries_first() {
        let theta = th("10");
        let phi = th("10101");
        assert!(theta.is_triangle(&phi, &th("10001")).is_err());

        let phi = th("10101");
        let theta = th_into("101", &phi);
        assert_eq!(theta.is_triangle(&phi, &th("10001")), Ok(true));
        assert_eq!(theta.is_triangle(&phi, &th("00101")), Ok(false));
    }

    #[test]
    fn display_renders_bits_oldest_first() {
        assert_eq!(alloc::format!("{}", th("10001")), "⊑:10001");
        assert_eq!(
            alloc::format!("{}", Thinning::identity(&leaf_scope(0))),
            "⊑:ε"
        );
    }
}
