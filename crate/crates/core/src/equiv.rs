//! Transformations under which the CAZAC property is closed, orbit
//! enumeration under the group they generate, and deduplication.
//!
//! For `ω = e^{2πi/n}`:
//!
//! | transform        | action                  |
//! |------------------|-------------------------|
//! | `Translate(k)`   | `y_j = x_{j+k}`         |
//! | `Modulate(ℓ)`    | `y_j = ω^{ℓj} x_j`      |
//! | `Decimate(m)`    | `y_j = x_{mj}`, `gcd(m, n) = 1` |
//! | `Conjugate`      | `y_j = conj(x_j)`       |

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::gcd;
use crate::seq::{canonicalize, key_of, CanonicalKey, ComplexSeq};

pub const DEFAULT_MAX_WORD_LEN: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Transform {
    Translate(usize),
    Modulate(usize),
    Decimate(usize),
    Conjugate,
}

impl Transform {
    pub fn translate(k: i64, n: usize) -> Self {
        Transform::Translate(k.rem_euclid(n as i64) as usize)
    }

    pub fn modulate(l: i64, n: usize) -> Self {
        Transform::Modulate(l.rem_euclid(n as i64) as usize)
    }

    pub fn decimate(m: i64, n: usize) -> Result<Self> {
        let m = m.rem_euclid(n as i64) as usize;
        check_decimation(m, n)?;
        Ok(Transform::Decimate(m))
    }

    /// Every non-identity single transform for length `n`.
    pub fn generators(n: usize) -> Vec<Transform> {
        let mut out = Vec::with_capacity(3 * n);
        out.extend((1..n).map(Transform::Translate));
        out.extend((1..n).map(Transform::Modulate));
        out.extend((2..n).filter(|&m| gcd(m as i64, n as i64) == 1).map(Transform::Decimate));
        out.push(Transform::Conjugate);
        out
    }

    /// `self ∘ other` (apply `other` first) where a closed form exists.
    pub fn compose(self, other: Transform, n: usize) -> Option<Transform> {
        match (self, other) {
            (Transform::Translate(a), Transform::Translate(b)) => Some(Transform::Translate((a + b) % n)),
            (Transform::Modulate(a), Transform::Modulate(b)) => Some(Transform::Modulate((a + b) % n)),
            (Transform::Decimate(a), Transform::Decimate(b)) => Some(Transform::Decimate((a * b) % n)),
            _ => None,
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Translate(k) => write!(f, "T{k}"),
            Transform::Modulate(l) => write!(f, "M{l}"),
            Transform::Decimate(m) => write!(f, "D{m}"),
            Transform::Conjugate => write!(f, "C"),
        }
    }
}

fn check_decimation(m: usize, n: usize) -> Result<()> {
    if gcd(m as i64, n as i64) != 1 {
        return Err(Error::BadDecimation { m, n });
    }
    Ok(())
}

/// `e^{2πi m/n}` with `m` reduced to `(-n/2, n/2]`.
fn root_of_unity(m: usize, n: usize) -> Complex64 {
    let m = m % n;
    if m == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * m == n {
        return Complex64::new(-1.0, 0.0);
    }
    let signed = if 2 * m > n { m as f64 - n as f64 } else { m as f64 };
    Complex64::from_polar(1.0, 2.0 * PI * signed / n as f64)
}

pub fn apply(t: Transform, x: &ComplexSeq) -> Result<ComplexSeq> {
    let n = x.len();
    let xs = x.entries();
    let entries: Vec<Complex64> = match t {
        Transform::Translate(k) => (0..n).map(|j| xs[(j + k) % n]).collect(),
        Transform::Modulate(l) => {
            let l = l % n;
            (0..n).map(|j| root_of_unity(l * j % n, n) * xs[j]).collect()
        }
        Transform::Decimate(m) => {
            let m = m % n;
            check_decimation(m, n)?;
            (0..n).map(|j| xs[m * j % n]).collect()
        }
        Transform::Conjugate => xs.iter().map(|z| z.conj()).collect(),
    };
    ComplexSeq::new(entries)
}

/// Applies a word left to right (`word[0]` first).
pub fn apply_word(word: &[Transform], x: &ComplexSeq) -> Result<ComplexSeq> {
    word.iter().try_fold(x.clone(), |acc, &t| apply(t, &acc))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitMember {
    pub sequence: ComplexSeq,
    /// A shortest word (within the sweep order) mapping the base here.
    pub word: Vec<Transform>,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub bases: Vec<ComplexSeq>,
    pub members: BTreeMap<CanonicalKey, OrbitMember>,
    /// Sweeps that added at least one key.
    pub sweeps: usize,
    /// True when a sweep added nothing before the word-length bound.
    pub reached_fixpoint: bool,
}

impl OrbitReport {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.members.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.members.keys()
    }

    /// Canonical members in key order.
    pub fn sequences(&self) -> Vec<ComplexSeq> {
        self.members.values().map(|m| m.sequence.clone()).collect()
    }
}

pub fn orbit(x: &ComplexSeq, max_word_len: usize) -> Result<OrbitReport> {
    orbit_of_set(std::slice::from_ref(x), max_word_len)
}

/// Breadth-first closure of the canonical classes of `bases` under
/// [`Transform::generators`], stopping at a fixpoint or after
/// `max_word_len` sweeps.
pub fn orbit_of_set(bases: &[ComplexSeq], max_word_len: usize) -> Result<OrbitReport> {
    let mut members: BTreeMap<CanonicalKey, OrbitMember> = BTreeMap::new();
    let mut frontier: Vec<CanonicalKey> = Vec::new();
    for base in bases {
        let sequence = canonicalize(base)?;
        if let Entry::Vacant(slot) = members.entry(key_of(&sequence)) {
            frontier.push(slot.key().clone());
            slot.insert(OrbitMember { sequence, word: Vec::new() });
        }
    }
    frontier.sort();

    let mut sweeps = 0;
    let mut reached_fixpoint = false;
    for _ in 0..max_word_len {
        let expanded: Vec<Vec<(CanonicalKey, OrbitMember)>> = frontier
            .par_iter()
            .map(|key| {
                let parent = &members[key];
                let n = parent.sequence.len();
                let mut out = Vec::new();
                for t in Transform::generators(n) {
                    let image = canonicalize(&apply(t, &parent.sequence)?)?;
                    let key = key_of(&image);
                    if !members.contains_key(&key) {
                        let mut word = parent.word.clone();
                        word.push(t);
                        out.push((key, OrbitMember { sequence: image, word }));
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;

        let mut next = Vec::new();
        for (key, member) in expanded.into_iter().flatten() {
            if let Entry::Vacant(slot) = members.entry(key) {
                next.push(slot.key().clone());
                slot.insert(member);
            }
        }
        if next.is_empty() {
            reached_fixpoint = true;
            break;
        }
        sweeps += 1;
        next.sort();
        frontier = next;
    }

    Ok(OrbitReport { bases: bases.to_vec(), members, sweeps, reached_fixpoint })
}

/// One canonical representative per key, first occurrence wins, sorted by key.
pub fn dedupe(xs: &[ComplexSeq]) -> Vec<ComplexSeq> {
    let mut seen: BTreeMap<CanonicalKey, ComplexSeq> = BTreeMap::new();
    for x in xs {
        let rep = canonicalize(x).unwrap_or_else(|_| x.clone());
        seen.entry(key_of(&rep)).or_insert(rep);
    }
    seen.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlate::{aperiodic_autocorrelation, sidelobe_metrics};
    use crate::families::{self, QuadraticPhaseSpec};
    use crate::seq::verify_cazac;

    fn labelled(n: usize) -> ComplexSeq {
        ComplexSeq::new((0..n).map(|j| Complex64::new(j as f64, 0.0)).collect()).unwrap()
    }

    fn labels(x: &ComplexSeq) -> Vec<usize> {
        x.entries().iter().map(|z| z.re as usize).collect()
    }

    #[test]
    fn translate_shifts_left() {
        let y = apply(Transform::Translate(1), &labelled(3)).unwrap();
        assert_eq!(labels(&y), vec![1, 2, 0]);
    }

    #[test]
    fn decimate_by_two_mod_seven() {
        let y = apply(Transform::Decimate(2), &labelled(7)).unwrap();
        assert_eq!(labels(&y), vec![0, 2, 4, 6, 1, 3, 5]);
    }

    #[test]
    fn bad_decimation_is_rejected() {
        assert_eq!(apply(Transform::Decimate(2), &labelled(6)), Err(Error::BadDecimation { m: 2, n: 6 }));
        assert!(Transform::decimate(3, 9).is_err());
        assert_eq!(Transform::decimate(-1, 7), Ok(Transform::Decimate(6)));
    }

    #[test]
    fn modulating_bjorck_keeps_cazac() {
        let b7 = families::bjorck(7).unwrap();
        for l in 0..7 {
            let y = apply(Transform::Modulate(l), &b7).unwrap();
            assert!(verify_cazac(&y, 1e-12).pass, "l = {l}");
        }
    }

    #[test]
    fn translate_only_orbit_of_length_four() {
        let x = ComplexSeq::from_re_im(&[(1., 0.), (1., 0.), (1., 0.), (-1., 0.)]).unwrap();
        let mut keys = std::collections::BTreeSet::new();
        for k in 0..4 {
            let y = canonicalize(&apply(Transform::Translate(k), &x).unwrap()).unwrap();
            assert!(verify_cazac(&y, 1e-12).pass);
            keys.insert(key_of(&y));
        }
        assert!(keys.len() <= 4);
    }

    #[test]
    fn bjorck_7_orbit_is_bounded() {
        let report = orbit(&families::bjorck(7).unwrap(), DEFAULT_MAX_WORD_LEN).unwrap();
        assert!(report.reached_fixpoint);
        assert!(report.count() <= 252, "count {}", report.count());
        for (key, m) in &report.members {
            assert_eq!(&key_of(&m.sequence), key);
            assert!(verify_cazac(&m.sequence, 1e-10).pass);
            let replay = canonicalize(&apply_word(&m.word, &report.bases[0]).unwrap()).unwrap();
            assert_eq!(&key_of(&replay), key);
        }
    }

    #[test]
    fn orbit_members_verify_for_small_base() {
        let x = ComplexSeq::from_re_im(&[(1., 0.), (1., 0.), (1., 0.), (-1., 0.)]).unwrap();
        let report = orbit(&x, DEFAULT_MAX_WORD_LEN).unwrap();
        assert!(report.count() >= 1);
        assert!(report.sequences().iter().all(|s| verify_cazac(s, 1e-12).pass));
    }

    #[test]
    fn orbit_does_not_depend_on_base_order() {
        let b = families::bjorck(7).unwrap().into_inner();
        let w = families::quadratic_phase(&QuadraticPhaseSpec::wiener(7, 3)).unwrap().into_inner();
        let t = apply(Transform::Translate(2), &b).unwrap();
        let one = orbit_of_set(&[b.clone(), w.clone()], DEFAULT_MAX_WORD_LEN).unwrap();
        let two = orbit_of_set(&[w, t], DEFAULT_MAX_WORD_LEN).unwrap();
        assert!(one.keys().eq(two.keys()));
    }

    #[test]
    fn group_laws_hold_at_key_level() {
        let x = families::bjorck(11).unwrap().into_inner();
        let n = 11;
        let key = |s: ComplexSeq| key_of(&canonicalize(&s).unwrap());
        for (a, b) in [(1usize, 3usize), (4, 9), (10, 10)] {
            let seq = apply_word(&[Transform::Translate(b), Transform::Translate(a)], &x).unwrap();
            let direct = apply(Transform::Translate(a).compose(Transform::Translate(b), n).unwrap(), &x).unwrap();
            assert_eq!(key(seq), key(direct));
        }
        for (a, b) in [(2usize, 3usize), (5, 7), (10, 10)] {
            let seq = apply_word(&[Transform::Decimate(b), Transform::Decimate(a)], &x).unwrap();
            let direct = apply(Transform::Decimate(a).compose(Transform::Decimate(b), n).unwrap(), &x).unwrap();
            assert_eq!(key(seq), key(direct));
        }
        let twice = apply_word(&[Transform::Conjugate, Transform::Conjugate], &x).unwrap();
        assert_eq!(key(twice), key(x));
    }

    #[test]
    fn modulation_preserves_aperiodic_magnitudes() {
        let x = families::bjorck(7).unwrap().into_inner();
        let base = aperiodic_autocorrelation(&x);
        for l in 1..7 {
            let y = aperiodic_autocorrelation(&apply(Transform::Modulate(l), &x).unwrap());
            for (p, q) in base.iter().zip(&y) {
                assert!((p.norm() - q.norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn translation_and_decimation_change_psl() {
        let x = families::bjorck(7).unwrap().into_inner();
        let base = sidelobe_metrics(&x).psl;
        let moved =
            (1..7).any(|k| (sidelobe_metrics(&apply(Transform::Translate(k), &x).unwrap()).psl - base).abs() > 1e-6);
        assert!(moved);
        let zc = families::quadratic_phase(&QuadraticPhaseSpec::zadoff_chu(7)).unwrap().into_inner();
        let base = sidelobe_metrics(&zc).psl;
        let moved =
            (2..7).any(|m| (sidelobe_metrics(&apply(Transform::Decimate(m), &zc).unwrap()).psl - base).abs() > 1e-6);
        assert!(moved);
    }

    #[test]
    fn dedupe_collapses_scalar_multiples() {
        let x = families::bjorck(7).unwrap().into_inner();
        let cx = x.scaled(Complex64::from_polar(1.0, 2.1));
        let out = dedupe(&[x.clone(), cx, x.clone()]);
        assert_eq!(out.len(), 1);
        assert_eq!(key_of(&out[0]), key_of(&canonicalize(&x).unwrap()));
        assert_eq!(out[0].entries()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn dedupe_output_is_sorted() {
        let xs: Vec<ComplexSeq> =
            (0..7).map(|l| apply(Transform::Modulate(l), &families::bjorck(7).unwrap()).unwrap()).collect();
        let out = dedupe(&xs);
        assert_eq!(out.len(), 7);
        let keys: Vec<_> = out.iter().map(key_of).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
