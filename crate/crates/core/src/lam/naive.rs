//! A reference reducer in the textbook style: indices count binders from
//! the inside out, substitution shifts, and every traversal touches every
//! node it passes. The main reducer is checked against this one step for
//! step, so the two must pick the same redex: the head redex first, then
//! the function side, then the argument, and under lambdas.

use alloc::boxed::Box;

use super::{as_app, as_lam, db_app, db_lam, db_var};
use crate::instrument;
use crate::universe::TermDB;

/// Classic de Bruijn terms: `Var(0)` is the nearest binder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IxTerm {
    Var(usize),
    Lam(Box<IxTerm>),
    App(Box<IxTerm>, Box<IxTerm>),
}

/// Flip oldest-first positions into inside-out indices. Panics off the
/// lambda fragment or out of scope; callers validate first.
pub fn db_to_ix(t: &TermDB, scope_len: usize) -> IxTerm {
    if let Some(body) = as_lam(t) {
        return IxTerm::Lam(Box::new(db_to_ix(body, scope_len + 1)));
    }
    if let Some((f, s)) = as_app(t) {
        return IxTerm::App(
            Box::new(db_to_ix(f, scope_len)),
            Box::new(db_to_ix(s, scope_len)),
        );
    }
    match t {
        TermDB::Var { index, .. } => IxTerm::Var(scope_len - 1 - index),
        TermDB::Con(_) => panic!("db_to_ix: not a lambda term"),
    }
}

/// The inverse flip; the same involution on variable numbers.
pub fn ix_to_db(t: &IxTerm, scope_len: usize) -> TermDB {
    match t {
        IxTerm::Var(i) => db_var(scope_len - 1 - i),
        IxTerm::Lam(b) => db_lam(ix_to_db(b, scope_len + 1)),
        IxTerm::App(f, s) => db_app(ix_to_db(f, scope_len), ix_to_db(s, scope_len)),
    }
}

fn shift(t: &IxTerm, d: i64, cutoff: usize) -> IxTerm {
    instrument::visit();
    match t {
        IxTerm::Var(i) => {
            if *i >= cutoff {
                IxTerm::Var((*i as i64 + d) as usize)
            } else {
                IxTerm::Var(*i)
            }
        }
        IxTerm::Lam(b) => IxTerm::Lam(Box::new(shift(b, d, cutoff + 1))),
        IxTerm::App(f, s) => IxTerm::App(
            Box::new(shift(f, d, cutoff)),
            Box::new(shift(s, d, cutoff)),
        ),
    }
}

fn subst(t: &IxTerm, j: usize, s: &IxTerm) -> IxTerm {
    instrument::visit();
    match t {
        IxTerm::Var(i) if *i == j => s.clone(),
        IxTerm::Var(i) => IxTerm::Var(*i),
        IxTerm::Lam(b) => IxTerm::Lam(Box::new(subst(b, j + 1, &shift(s, 1, 0)))),
        IxTerm::App(f, a) => IxTerm::App(
            Box::new(subst(f, j, s)),
            Box::new(subst(a, j, s)),
        ),
    }
}

fn beta(body: &IxTerm, arg: &IxTerm) -> IxTerm {
    shift(&subst(body, 0, &shift(arg, 1, 0)), -1, 0)
}

/// One leftmost-outermost step, or `None` on a normal form.
pub fn ix_step(t: &IxTerm) -> Option<IxTerm> {
    instrument::visit();
    match t {
        IxTerm::Var(_) => None,
        IxTerm::Lam(b) => ix_step(b).map(|b| IxTerm::Lam(Box::new(b))),
        IxTerm::App(f, a) => {
            if let IxTerm::Lam(b) = &**f {
                return Some(beta(b, a));
            }
            if let Some(f) = ix_step(f) {
                return Some(IxTerm::App(Box::new(f), a.clone()));
            }
            ix_step(a).map(|a| IxTerm::App(f.clone(), Box::new(a)))
        }
    }
}

/// `ix_step` lifted to oldest-first terms.
pub fn naive_step(t: &TermDB, scope_len: usize) -> Option<TermDB> {
    ix_step(&db_to_ix(t, scope_len)).map(|n| ix_to_db(&n, scope_len))
}

/// Step to a normal form, or give back the partial result and the step
/// count once `fuel` steps have been taken and another is still possible.
pub fn naive_normalize(
    t: &TermDB,
    scope_len: usize,
    fuel: u64,
) -> Result<(TermDB, u64), (TermDB, u64)> {
    let mut cur = db_to_ix(t, scope_len);
    let mut steps = 0;
    loop {
        match ix_step(&cur) {
            None => return Ok((ix_to_db(&cur, scope_len), steps)),
            Some(next) => {
                if steps == fuel {
                    return Err((ix_to_db(&cur, scope_len), steps));
                }
                cur = next;
                steps += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lam::{parse, resolve};
    use alloc::string::String;
    use alloc::vec::Vec;

    fn named(src: &str, env: &[&str]) -> TermDB {
        let env: Vec<String> = env.iter().map(|s| String::from(*s)).collect();
        resolve(&parse(src).unwrap(), &env).unwrap()
    }

    fn ix(src: &str, env: &[&str]) -> IxTerm {
        db_to_ix(&named(src, env), env.len())
    }

    #[test]
    fn conversion_is_an_involution() {
        for (src, env) in [
            (r"\x.\y.x", &[][..]),
            (r"\x.\y.\z.x z (y z)", &[]),
            (r"\f.f a (f b b)", &["a", "b"]),
        ] {
            let t = named(src, env);
            assert_eq!(ix_to_db(&db_to_ix(&t, env.len()), env.len()), t);
        }
    }

    #[test]
    fn shift_moves_only_free_indices() {
        assert_eq!(shift(&IxTerm::Var(0), 1, 0), IxTerm::Var(1));
        let id = IxTerm::Lam(Box::new(IxTerm::Var(0)));
        assert_eq!(shift(&id, 1, 0), id);
        let free = IxTerm::Lam(Box::new(IxTerm::Var(1)));
        assert_eq!(shift(&free, 2, 0), IxTerm::Lam(Box::new(IxTerm::Var(3))));
    }

    #[test]
    fn subst_shifts_under_binders() {
        assert_eq!(subst(&IxTerm::Var(0), 0, &IxTerm::Var(5)), IxTerm::Var(5));
        assert_eq!(
            subst(&IxTerm::Lam(Box::new(IxTerm::Var(1))), 0, &IxTerm::Var(5)),
            IxTerm::Lam(Box::new(IxTerm::Var(6)))
        );
    }

    #[test]
    fn discarding_combinator_takes_two_steps() {
        let env = &["a", "b"];
        let t = ix(r"(\x.\y.x) a b", env);
        let one = ix_step(&t).unwrap();
        let two = ix_step(&one).unwrap();
        assert_eq!(two, ix("a", env));
        assert_eq!(ix_step(&two), None);
    }

    #[test]
    fn normalize_reports_fuel_exhaustion_with_the_partial_term() {
        let omega = named(r"(\x.x x) (\x.x x)", &[]);
        assert_eq!(naive_normalize(&omega, 0, 3), Err((omega.clone(), 3)));
        let s_k_k = named(r"(\x.\y.\z.x z (y z)) (\a.\b.a) (\a.\b.a)", &[]);
        let (nf, steps) = naive_normalize(&s_k_k, 0, 100).unwrap();
        assert_eq!(nf, named(r"\x.x", &[]));
        assert!(steps > 0);
    }
}
