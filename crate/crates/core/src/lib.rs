//! Discovery, enumeration and correlation analysis of CAZAC
//! (constant-amplitude zero-autocorrelation) sequences.
//!
//! CAZAC sequences are found as the zeros of a sum-of-squares polynomial
//! objective over the real and imaginary parts of the entries, minimized
//! from many random starts with Levenberg-Marquardt and deduplicated up to a
//! global phase.

pub mod correlate;
pub mod equiv;
pub mod error;
pub mod families;
pub mod format;
pub mod residual;
pub mod search;
pub mod seq;
pub mod solver;

pub use error::{Error, Result};
pub use seq::{canonicalize, embed, key_of, lift, verify_cazac, CanonicalKey, ComplexSeq, RealEmbedding, UnitSequence};
