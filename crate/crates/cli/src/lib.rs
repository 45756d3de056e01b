//! Library side of the CLI: the s-expression interchange format and the
//! input loader, shared between the binary and the integration tests.

pub mod input;
pub mod sexp;
