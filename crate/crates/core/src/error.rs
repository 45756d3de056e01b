//! Error types shared by the kernel modules.

use alloc::string::String;
use core::fmt;

/// Errors from scope, thinning, and cover arithmetic.
///
/// A `ScopeMismatch` always indicates a programming bug in the caller:
/// the kernel never silently reindexes between scopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScopeError {
    /// Two scopes that had to agree did not.
    ScopeMismatch {
        /// Operation that was attempted.
        op: &'static str,
        /// Human-readable description of the disagreement.
        detail: String,
    },
    /// A position index fell outside its scope.
    IndexOutOfRange { index: usize, len: usize },
    /// `factor_through`: the candidate selects a position the base misses.
    NoFactor,
    /// A thinning expected to have singleton source did not.
    NotSingleton,
    /// Two covers with different overlap flags cannot be combined.
    FlagMismatch,
}

impl fmt::Display for ScopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScopeError::ScopeMismatch { op, detail } => {
                write!(f, "scope mismatch in {op}: {detail}")
            }
            ScopeError::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for scope of length {len}")
            }
            ScopeError::NoFactor => write!(f, "no factoring: target position not in base"),
            ScopeError::NotSingleton => write!(f, "thinning does not have singleton source"),
            ScopeError::FlagMismatch => write!(f, "covers carry different overlap flags"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ScopeError {}

/// Errors from term validation, translation, and substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermError {
    /// The term does not match its description. `path` locates the offending
    /// node from the root, e.g. `con.lam.bind.body`.
    Shape { path: String, msg: String },
    /// A support annotation is wrong: some variable in scope is unused, a
    /// cover disagrees with its components, or a leaf sits in the wrong
    /// scope. `path` locates the offending node from the root.
    Relevance { path: String, msg: String },
    /// Scope arithmetic failed while manipulating the term.
    Scope(ScopeError),
    /// A supposedly impossible case was reached; indicates corrupted data
    /// that bypassed the smart constructors.
    Unreachable(&'static str),
}

impl TermError {
    pub fn shape(msg: impl Into<String>) -> Self {
        TermError::Shape {
            path: String::new(),
            msg: msg.into(),
        }
    }

    pub fn relevance(msg: impl Into<String>) -> Self {
        TermError::Relevance {
            path: String::new(),
            msg: msg.into(),
        }
    }

    /// Prefix a path segment, used while unwinding out of a traversal.
    pub fn at(self, seg: &str) -> Self {
        let push = |path: String| {
            if path.is_empty() {
                String::from(seg)
            } else {
                alloc::format!("{seg}.{path}")
            }
        };
        match self {
            TermError::Shape { path, msg } => TermError::Shape {
                path: push(path),
                msg,
            },
            TermError::Relevance { path, msg } => TermError::Relevance {
                path: push(path),
                msg,
            },
            other => other,
        }
    }
}

impl From<ScopeError> for TermError {
    fn from(e: ScopeError) -> Self {
        TermError::Scope(e)
    }
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::Shape { path, msg } if path.is_empty() => write!(f, "shape error: {msg}"),
            TermError::Shape { path, msg } => write!(f, "shape error at {path}: {msg}"),
            TermError::Relevance { path, msg } if path.is_empty() => {
                write!(f, "relevance error: {msg}")
            }
            TermError::Relevance { path, msg } => write!(f, "relevance error at {path}: {msg}"),
            TermError::Scope(e) => write!(f, "{e}"),
            TermError::Unreachable(what) => write!(f, "unreachable case reached: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TermError {}
