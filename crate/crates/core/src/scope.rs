//! Sorts, kinds, and scopes.
//!
//! A scope is a snoc-list of kinds: new bindings are appended on the right,
//! so position 0 is always the oldest binding. All textual renderings and
//! all position indices in this crate follow that oldest-first convention.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// A base sort of the syntax being described.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sort(Arc<str>);

impl Sort {
    pub fn new(name: &str) -> Self {
        Sort(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The kind of a binding: a variable of kind `[j1,...,jn] => i` abstracts
/// over `n` arguments of kinds `j1..jn` and heads a term of sort `i`.
/// Ordinary first-order variables have an empty scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kind {
    scope: Scope,
    sort: Sort,
}

impl Kind {
    pub fn new(scope: Scope, sort: Sort) -> Self {
        Kind { scope, sort }
    }

    /// A kind with no arguments.
    pub fn base(sort: Sort) -> Self {
        Kind {
            scope: Scope::empty(),
            sort,
        }
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn sort(&self) -> &Sort {
        &self.sort
    }

    /// Structural size: 1 plus the sizes of all argument kinds. Strictly
    /// larger than the total size of the argument scope, which makes it a
    /// termination measure for hereditary substitution.
    pub fn size(&self) -> u64 {
        1 + self.scope.kind_size()
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scope.is_empty() && self.sort.name() == "ι" {
            return f.write_str("*");
        }
        write!(f, "{}⇒{}", self.scope, self.sort)
    }
}

/// A scope: the kinds of the variables currently in range, oldest first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Scope {
    kinds: Vec<Kind>,
}

impl Scope {
    pub fn empty() -> Self {
        Scope { kinds: Vec::new() }
    }

    pub fn from_kinds(kinds: Vec<Kind>) -> Self {
        Scope { kinds }
    }

    /// A scope of `n` copies of the same kind.
    pub fn repeated(kind: &Kind, n: usize) -> Self {
        Scope {
            kinds: alloc::vec![kind.clone(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Kind> {
        self.kinds.get(index)
    }

    pub fn kinds(&self) -> &[Kind] {
        &self.kinds
    }

    /// Append one binding at the new (right) end.
    pub fn snoc(&self, kind: Kind) -> Scope {
        let mut kinds = self.kinds.clone();
        kinds.push(kind);
        Scope { kinds }
    }

    /// Append a whole scope of newer bindings.
    pub fn concat(&self, newer: &Scope) -> Scope {
        let mut kinds = self.kinds.clone();
        kinds.extend_from_slice(&newer.kinds);
        Scope { kinds }
    }

    /// Does this scope end with `suffix`?
    pub fn ends_with(&self, suffix: &Scope) -> bool {
        self.len() >= suffix.len() && self.kinds[self.len() - suffix.len()..] == suffix.kinds[..]
    }

    /// Split off `suffix.len()` newest bindings; `None` unless the scope
    /// actually ends with `suffix`.
    pub fn split_suffix(&self, suffix: &Scope) -> Option<Scope> {
        if self.ends_with(suffix) {
            Some(Scope {
                kinds: self.kinds[..self.len() - suffix.len()].to_vec(),
            })
        } else {
            None
        }
    }

    /// Summed structural size of all kinds in the scope.
    pub fn kind_size(&self) -> u64 {
        self.kinds.iter().map(Kind::size).sum()
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, k) in self.kinds.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("]")
    }
}

/// Render a scope of named bindings, used in diagnostics.
pub fn render_names(names: &[String]) -> String {
    let mut out = String::from("[");
    for (i, n) in names.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(n);
    }
    out.push(']');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    fn iota() -> Sort {
        Sort::new("ι")
    }

    fn star() -> Kind {
        Kind::base(iota())
    }

    #[test]
    fn snoc_appends_at_new_end() {
        let s = Scope::empty().snoc(star());
        assert_eq!(s.len(), 1);
        let binder = Kind::new(Scope::from_kinds(vec![star()]), iota());
        let s2 = s.snoc(binder.clone());
        assert_eq!(s2.get(0), Some(&star()));
        assert_eq!(s2.get(1), Some(&binder));
    }

    #[test]
    fn concat_associative_on_small_scopes() {
        // Exhaustive over leaf-kind scopes of length <= 4.
        for a in 0..=4usize {
            for b in 0..=4usize {
                for c in 0..=4usize {
                    let (sa, sb, sc) = (
                        Scope::repeated(&star(), a),
                        Scope::repeated(&star(), b),
                        Scope::repeated(&star(), c),
                    );
                    assert_eq!(sa.concat(&sb).concat(&sc), sa.concat(&sb.concat(&sc)));
                }
            }
        }
    }

    #[test]
    fn concat_empty_units() {
        let s = Scope::repeated(&star(), 3);
        assert_eq!(Scope::empty().concat(&s), s);
        assert_eq!(s.concat(&Scope::empty()), s);
    }

    #[test]
    fn kind_size_counts_binders() {
        // [*, [*]=>i, *] has sizes 1 + 2 + 1.
        let binder = Kind::new(Scope::from_kinds(vec![star()]), iota());
        let s = Scope::from_kinds(vec![star(), binder, star()]);
        assert_eq!(s.kind_size(), 4);
    }

    #[test]
    fn kind_size_strictly_larger_than_argument_scope() {
        let binder = Kind::new(Scope::from_kinds(vec![star(), star()]), iota());
        assert!(binder.size() > binder.scope().kind_size());
        assert_eq!(binder.size(), 3);
    }

    #[test]
    fn split_suffix_inverts_concat() {
        let binder = Kind::new(Scope::from_kinds(vec![star()]), iota());
        let old = Scope::from_kinds(vec![star(), binder.clone()]);
        let new = Scope::from_kinds(vec![star()]);
        let joined = old.concat(&new);
        assert_eq!(joined.split_suffix(&new), Some(old.clone()));
        assert_eq!(joined.split_suffix(&old), None);
    }

    #[test]
    fn display_notation() {
        assert_eq!(format!("{}", star()), "*");
        let binder = Kind::new(Scope::from_kinds(vec![star(), star()]), iota());
        assert_eq!(format!("{binder}"), "[*,*]⇒ι");
        let s = Scope::from_kinds(vec![star(), binder]);
        assert_eq!(format!("{s}"), "[*,[*,*]⇒ι]");
    }
}
