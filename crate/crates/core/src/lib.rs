//! Exact computational algebra for word maps on `SL2`/`PSL2` over finite
//! fields: trace polynomials of words in the rank-2 free group, cyclotomic
//! factorization checks, number-theoretic applicability conditions, and
//! exhaustive non-surjectivity certificates.

pub mod certificate;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod fppoly;
pub mod number_theory;
pub mod oracle;
pub mod poly;
pub mod ring;
pub mod trace;
pub mod word;

pub use error::{Error, Result};

/// Library version, embedded in every structured output document.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
