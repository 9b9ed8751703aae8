//! Quadratic forms over rational function fields `F_q(t)`, `q = 2^k`:
//! local invariants, the global isometry and similarity decisions, and
//! independent brute-force oracles.

mod bits;
mod dense;
pub mod error;
pub mod expr;
pub mod funcfield;
pub mod gf2k;
pub mod globaldec;
pub mod localinv;
pub mod oracle;
pub mod polyring;
pub mod qform;
pub mod random;
pub mod selftest;

pub use error::{Error, Result};
pub use funcfield::{Place, RatFunc};
pub use gf2k::{ExtElem, ExtField, FieldElem, Gf2k};
pub use globaldec::{Decision, FactorStatus, Obstruction};
pub use localinv::{LocalProfile, SymbolPair};
pub use polyring::Poly;
pub use qform::{GramInput, QuadraticForm};
