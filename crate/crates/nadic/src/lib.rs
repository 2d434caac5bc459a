//! Truncated n-adic ring arithmetic and friends.
//!
//! The working representation is the projection of the n-adic integers onto
//! Z/n^kZ for a base n >= 2 and a precision of k base-n digits. On top of it:
//!
//! - Hensel-lifted square roots, exponentials and logarithms ([`analytic`]);
//! - hybrid n-continued fractions with exact rational convergents and dual
//!   real / n-adic convergence checking ([`cf`]);
//! - a toy multiplicative cipher and digit codecs ([`cipher`]);
//! - a square-root-iteration pseudo-random generator with a Monte-Carlo pi
//!   harness ([`prng`]);
//! - last-digit computation for power towers, tetration limits and
//!   idempotents ([`tower`]).

pub mod analytic;
pub mod cf;
pub mod cipher;
mod context;
mod digits;
mod error;
mod int;
pub mod prng;
pub mod tower;

pub use context::NadicContext;
pub use digits::DigitString;
pub use error::{Error, Result};
pub use int::NadicInt;
