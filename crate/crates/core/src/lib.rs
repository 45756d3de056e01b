//! Co-de-Bruijn syntax kernel.
//!
//! Terms are indexed by their exact support: every variable in scope is
//! used somewhere, and unused variables are discarded as close to the root
//! as possible. The kernel provides
//!
//! - order-preserving embeddings between scopes ([`thin::Thinning`]),
//! - covers witnessing how two supports combine ([`cover::Cover`]),
//! - things paired with a thinning into an ambient scope ([`relev::Relev`]),
//! - a generic universe of syntaxes with binding ([`universe`]),
//! - simultaneous hereditary substitution ([`hsub`]),
//! - an untyped lambda-calculus front end over the universe ([`lam`]).
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! only switches the instrumentation counters to thread-local storage.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cover;
pub mod error;
pub mod hsub;
pub mod instrument;
pub mod lam;
pub mod relev;
pub mod scope;
pub mod thin;
pub mod universe;

pub use cover::{Cover, CoproductResult, Part, Refined};
pub use error::{ScopeError, TermError};
pub use hsub::HSub;
pub use relev::{Bind, RPair, Relev, UnitLeaf, VarLeaf};
pub use scope::{Kind, Scope, Sort};
pub use thin::{SliceArrow, Thinning};
pub use universe::{BodyDB, BodyR, Datoid, Desc, Syntax, Tag, TermDB, TermR};
