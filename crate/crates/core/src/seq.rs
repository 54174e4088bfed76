//! Complex sequences, the unit-modulus invariant, and canonical forms under
//! the scalar-phase equivalence `y = c·x`, `|c| = 1`.
//!
//! The canonical representative of a class is the member whose first entry
//! is exactly `1 + 0i`. [`CanonicalKey`] fingerprints a canonical
//! representative by rounding every coordinate to eight decimals, which is
//! the resolution used to deduplicate solver output.

use std::ops::Deref;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlate;
use crate::error::{Error, Result};

/// Default tolerance on `| |x_j| - 1 |` for [`UnitSequence`].
pub const DEFAULT_MODULUS_TOL: f64 = 1e-8;

/// Below this leading-entry modulus, canonicalization is refused.
pub const LEADING_ENTRY_FLOOR: f64 = 1e-12;

/// Fixed-point scale of [`CanonicalKey`] digits (eight decimals).
pub const KEY_SCALE: f64 = 1e8;

/// A finite complex sequence with 0-based, cyclic (mod n) indexing.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSeq {
    entries: Vec<Complex64>,
}

impl ComplexSeq {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self { entries })
    }

    /// Builds `e^{iθ_j}` for each phase.
    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        Self::new(phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect())
    }

    pub fn from_re_im(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    /// Entry at `j mod n`; negative indices wrap.
    #[inline]
    pub fn at(&self, j: i64) -> Complex64 {
        let n = self.entries.len() as i64;
        self.entries[j.rem_euclid(n) as usize]
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { entries: self.entries.iter().map(|&z| z * c).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { entries: self.entries.iter().map(|z| z.conj()).collect() }
    }

    pub fn max_modulus_error(&self) -> f64 {
        self.entries.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest coordinatewise distance between two sequences of equal length.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "length mismatch");
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl AsRef<ComplexSeq> for ComplexSeq {
    fn as_ref(&self) -> &ComplexSeq {
        self
    }
}

/// A [`ComplexSeq`] whose entries all have modulus one within `modulus_tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitSequence {
    inner: ComplexSeq,
    modulus_tol: f64,
}

impl UnitSequence {
    pub fn new(inner: ComplexSeq) -> Result<Self> {
        Self::with_tolerance(inner, DEFAULT_MODULUS_TOL)
    }

    pub fn with_tolerance(inner: ComplexSeq, modulus_tol: f64) -> Result<Self> {
        for (index, z) in inner.entries().iter().enumerate() {
            let modulus = z.norm();
            if (modulus - 1.0).abs() > modulus_tol || modulus.is_nan() {
                return Err(Error::NotUnitModulus { index, modulus, tol: modulus_tol });
            }
        }
        Ok(Self { inner, modulus_tol })
    }

    pub fn modulus_tol(&self) -> f64 {
        self.modulus_tol
    }

    pub fn as_seq(&self) -> &ComplexSeq {
        &self.inner
    }

    pub fn into_inner(self) -> ComplexSeq {
        self.inner
    }
}

impl Deref for UnitSequence {
    type Target = ComplexSeq;

    fn deref(&self) -> &ComplexSeq {
        &self.inner
    }
}

impl AsRef<ComplexSeq> for UnitSequence {
    fn as_ref(&self) -> &ComplexSeq {
        &self.inner
    }
}

/// Real coordinates `(a, b)` of a complex vector `x = a + ib`, stored flat
/// as `[a_0 .. a_{n-1}, b_0 .. b_{n-1}]`. This flat layout is the parameter
/// vector the solver iterates on.
#[derive(Clone, Debug, PartialEq)]
pub struct RealEmbedding {
    values: Vec<f64>,
}

impl RealEmbedding {
    pub fn from_parts(a: &[f64], b: &[f64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
        }
        if a.is_empty() {
            return Err(Error::EmptySequence);
        }
        let mut values = Vec::with_capacity(2 * a.len());
        values.extend_from_slice(a);
        values.extend_from_slice(b);
        Ok(Self { values })
    }

    /// Wraps an `[a.., b..]` vector; its length must be even and nonzero.
    pub fn from_flat(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        if !values.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch { expected: values.len() + 1, got: values.len() });
        }
        Ok(Self { values })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.values.len() / 2
    }

    #[inline]
    pub fn a(&self) -> &[f64] {
        &self.values[..self.n()]
    }

    #[inline]
    pub fn b(&self) -> &[f64] {
        &self.values[self.n()..]
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

pub fn embed(x: &ComplexSeq) -> RealEmbedding {
    let n = x.len();
    let mut values = vec![0.0; 2 * n];
    for (j, z) in x.entries().iter().enumerate() {
        values[j] = z.re;
        values[n + j] = z.im;
    }
    RealEmbedding { values }
}

pub fn lift(v: &RealEmbedding) -> ComplexSeq {
    let entries = v.a().iter().zip(v.b()).map(|(&re, &im)| Complex64::new(re, im)).collect();
    ComplexSeq { entries }
}

/// Divides by the first entry, so the result starts with exactly `1 + 0i`.
pub fn canonicalize(x: &ComplexSeq) -> Result<ComplexSeq> {
    let lead = x.entries[0];
    let modulus = lead.norm();
    if modulus < LEADING_ENTRY_FLOOR || modulus.is_nan() {
        return Err(Error::ZeroLeadingEntry(modulus));
    }
    let mut entries: Vec<Complex64> = x.entries.iter().map(|&z| z / lead).collect();
    entries[0] = Complex64::new(1.0, 0.0);
    Ok(ComplexSeq { entries })
}

/// Eight-decimal fixed-point fingerprint of a canonical sequence, laid out
/// like [`RealEmbedding`] (real parts, then imaginary parts).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey {
    digits: Vec<i64>,
}

impl CanonicalKey {
    /// Rounds `x` as given, without canonicalizing it first.
    pub fn of_raw(x: &ComplexSeq) -> Self {
        let n = x.len();
        let mut digits = vec![0i64; 2 * n];
        for (j, z) in x.entries().iter().enumerate() {
            digits[j] = fixed_point(z.re);
            digits[n + j] = fixed_point(z.im);
        }
        Self { digits }
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn n(&self) -> usize {
        self.digits.len() / 2
    }
}

// f64::round is half-away-from-zero.
#[inline]
fn fixed_point(v: f64) -> i64 {
    (v * KEY_SCALE).round() as i64
}

/// Key of the canonical representative of `x`'s class. Falls back to the raw
/// coordinates when `x` cannot be canonicalized (vanishing first entry).
pub fn key_of(x: &ComplexSeq) -> CanonicalKey {
    match canonicalize(x) {
        Ok(c) => CanonicalKey::of_raw(&c),
        Err(_) => CanonicalKey::of_raw(x),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub max_modulus_error: f64,
    /// `max_{k != 0} |A_p[k]|`.
    pub max_autocorrelation: f64,
    pub pass: bool,
}

pub fn verify_cazac(x: &ComplexSeq, tol: f64) -> Verification {
    let max_modulus_error = x.max_modulus_error();
    let acf = correlate::periodic_autocorrelation(x);
    let max_autocorrelation = acf.iter().skip(1).map(|z| z.norm()).fold(0.0, f64::max);
    Verification {
        max_modulus_error,
        max_autocorrelation,
        pass: max_modulus_error <= tol && max_autocorrelation <= tol,
    }
}
