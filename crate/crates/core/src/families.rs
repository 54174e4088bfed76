//! Closed-form CAZAC families: the quadratic phase sequences (Zadoff-Chu,
//! P4, Wiener) and Björck's Legendre-symbol construction for prime lengths.
//!
//! Every generator returns the canonical representative (first entry 1).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{ComplexSeq, UnitSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadraticFamily {
    ZadoffChu,
    P4,
    Wiener,
}

/// Family tag plus length; `k` is only read for [`QuadraticFamily::Wiener`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticPhaseSpec {
    pub family: QuadraticFamily,
    pub n: usize,
    pub k: i64,
}

impl QuadraticPhaseSpec {
    pub fn zadoff_chu(n: usize) -> Self {
        Self { family: QuadraticFamily::ZadoffChu, n, k: 0 }
    }

    pub fn p4(n: usize) -> Self {
        Self { family: QuadraticFamily::P4, n, k: 0 }
    }

    pub fn wiener(n: usize, k: i64) -> Self {
        Self { family: QuadraticFamily::Wiener, n, k }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        match self.family {
            QuadraticFamily::ZadoffChu if n.is_multiple_of(2) => {
                Err(Error::InvalidSpec(format!("zadoff-chu: n must be odd, got {n}")))
            }
            QuadraticFamily::Wiener if n % 2 == 1 && gcd(self.k, n as i64) != 1 => {
                Err(Error::InvalidSpec(format!("wiener: gcd(k, n) must be 1 for odd n, got k={} n={n}", self.k)))
            }
            QuadraticFamily::Wiener if n.is_multiple_of(2) && gcd(self.k, 2 * n as i64) != 1 => {
                Err(Error::InvalidSpec(format!("wiener: gcd(k, 2n) must be 1 for even n, got k={} n={n}", self.k)))
            }
            _ => Ok(()),
        }
    }

    /// The phase polynomial `p(j)` with `x_j = e^{πi p(j)/n}`.
    fn phase_poly(&self, j: i128) -> i128 {
        let n = self.n as i128;
        match self.family {
            QuadraticFamily::ZadoffChu => j * (j - 1),
            QuadraticFamily::P4 => j * (j - n),
            QuadraticFamily::Wiener if n % 2 == 1 => 2 * (self.k as i128) * j * j,
            QuadraticFamily::Wiener => (self.k as i128) * j * j,
        }
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Trial division.
pub fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn require_odd_prime(p: i64) -> Result<()> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

fn pow_mod(base: i64, mut exp: i64, m: i64) -> i64 {
    let m = m as i128;
    let mut acc: i128 = 1;
    let mut b = (base as i128).rem_euclid(m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as i64
}

/// Legendre symbol `(j/p)` by Euler's criterion.
pub fn legendre(j: i64, p: i64) -> Result<i8> {
    require_odd_prime(p)?;
    Ok(legendre_unchecked(j, p))
}

fn legendre_unchecked(j: i64, p: i64) -> i8 {
    match pow_mod(j, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `(j/p)` for `j = 0..p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreTable {
    p: i64,
    values: Vec<i8>,
}

impl LegendreTable {
    pub fn new(p: i64) -> Result<Self> {
        require_odd_prime(p)?;
        let values = (0..p).map(|j| legendre_unchecked(j, p)).collect();
        Ok(Self { p, values })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn get(&self, j: i64) -> i8 {
        self.values[j.rem_euclid(self.p) as usize]
    }
}

/// `e^{πi·r/n}` with `r` first reduced to `(-n, n]`, so the trigonometric
/// argument stays in `(-π, π]` regardless of how large `p(j)` grows.
fn half_turn_root(r: i128, n: i128) -> Complex64 {
    let mut r = r.rem_euclid(2 * n);
    if r > n {
        r -= 2 * n;
    }
    match (r, n) {
        (0, _) => Complex64::new(1.0, 0.0),
        (r, n) if r == n => Complex64::new(-1.0, 0.0),
        (r, n) if 2 * r == n => Complex64::new(0.0, 1.0),
        (r, n) if -2 * r == n => Complex64::new(0.0, -1.0),
        _ => Complex64::from_polar(1.0, PI * r as f64 / n as f64),
    }
}

pub fn quadratic_phase(spec: &QuadraticPhaseSpec) -> Result<UnitSequence> {
    spec.validate()?;
    let n = spec.n as i128;
    let entries = (0..n).map(|j| half_turn_root(spec.phase_poly(j), n)).collect();
    UnitSequence::new(ComplexSeq::new(entries)?)
}

/// Björck's sequence of prime length `p`.
///
/// `p ≡ 1 (mod 4)`: `θ(j) = (j/p)·arccos(1/(1+√p))`.
/// `p ≡ 3 (mod 4)`: `θ(j) = arccos((1-p)/(1+p))` on non-residues, 0 elsewhere.
pub fn bjorck(p: i64) -> Result<UnitSequence> {
    let table = LegendreTable::new(p)?;
    let pf = p as f64;
    let phases: Vec<f64> = if p % 4 == 1 {
        let theta = (1.0 / (1.0 + pf.sqrt())).acos();
        table.values().iter().map(|&l| l as f64 * theta).collect()
    } else {
        let theta = ((1.0 - pf) / (1.0 + pf)).acos();
        table.values().iter().map(|&l| if l == -1 { theta } else { 0.0 }).collect()
    };
    UnitSequence::new(ComplexSeq::from_phases(&phases)?)
}

/// Valid Wiener parameters for length `n`, one per residue class of `k`
/// (mod `n` for odd `n`, mod `2n` for even `n`).
pub fn wiener_parameters(n: usize) -> Vec<i64> {
    let n = n as i64;
    let modulus = if n % 2 == 1 { n } else { 2 * n };
    (1..=modulus).filter(|&k| gcd(k, modulus) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::verify_cazac;
    use proptest::prelude::*;

    #[test]
    fn legendre_values_mod_7() {
        assert_eq!(legendre(0, 7).unwrap(), 0);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(3, 7).unwrap(), -1);
        assert_eq!(legendre(-1, 7).unwrap(), -1);
        assert_eq!(legendre(14, 7).unwrap(), 0);
    }

    #[test]
    fn legendre_rejects_non_odd_primes() {
        for p in [2, 9, 15, 1, 0, -7] {
            assert_eq!(legendre(1, p), Err(Error::NotOddPrime(p)));
        }
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 43, 47] {
            let squares: Vec<i64> = (1..p).map(|x| x * x % p).collect();
            let table = LegendreTable::new(p).unwrap();
            assert_eq!(table.get(0), 0);
            for j in 1..p {
                let expected = if squares.contains(&j) { 1 } else { -1 };
                assert_eq!(table.get(j), expected, "({j}/{p})");
            }
            let plus = table.values().iter().filter(|&&v| v == 1).count();
            let minus = table.values().iter().filter(|&&v| v == -1).count();
            assert_eq!((plus, minus), ((p as usize - 1) / 2, (p as usize - 1) / 2));
        }
    }

    #[test]
    fn zadoff_chu_3() {
        let x = quadratic_phase(&QuadraticPhaseSpec::zadoff_chu(3)).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((x.entries()[0] - 1.0).norm() < 1e-15);
        assert!((x.entries()[1] - 1.0).norm() < 1e-15);
        assert!((x.entries()[2] - w).norm() < 1e-15);
        assert!(verify_cazac(&x, 1e-12).pass);
    }

    #[test]
    fn p4_2() {
        let x = quadratic_phase(&QuadraticPhaseSpec::p4(2)).unwrap();
        assert_eq!(x.entries(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]);
        assert!(verify_cazac(&x, 1e-12).pass);
    }

    #[test]
    fn wiener_7_1() {
        let x = quadratic_phase(&QuadraticPhaseSpec::wiener(7, 1)).unwrap();
        assert!(verify_cazac(&x, 1e-12).pass);
    }

    #[test]
    fn invalid_specs_name_the_constraint() {
        let err = quadratic_phase(&QuadraticPhaseSpec::zadoff_chu(8)).unwrap_err();
        assert!(err.to_string().contains("n must be odd"), "{err}");
        let err = quadratic_phase(&QuadraticPhaseSpec::wiener(9, 3)).unwrap_err();
        assert!(err.to_string().contains("gcd(k, n)"), "{err}");
        let err = quadratic_phase(&QuadraticPhaseSpec::wiener(8, 2)).unwrap_err();
        assert!(err.to_string().contains("gcd(k, 2n)"), "{err}");
        assert!(quadratic_phase(&QuadraticPhaseSpec::wiener(8, 3)).is_ok());
    }

    #[test]
    fn bjorck_7_closed_form() {
        let x = bjorck(7).unwrap();
        let theta = (-0.75f64).acos();
        let expected = ComplexSeq::from_phases(&[0., 0., 0., theta, 0., theta, theta]).unwrap();
        assert!(x.max_abs_diff(&expected) < 1e-15);
        assert!(verify_cazac(&x, 1e-10).pass);
    }

    #[test]
    fn bjorck_5_uses_residue_branch() {
        let x = bjorck(5).unwrap();
        let theta = (1.0 / (1.0 + 5f64.sqrt())).acos();
        let signs = [0.0, 1.0, -1.0, -1.0, 1.0];
        for (j, z) in x.entries().iter().enumerate() {
            assert!((z.arg() - signs[j] * theta).abs() < 1e-15);
        }
        assert!(verify_cazac(&x, 1e-12).pass);
    }

    #[test]
    fn bjorck_13_and_rejects_composites() {
        assert!(verify_cazac(&bjorck(13).unwrap(), 1e-12).pass);
        assert_eq!(bjorck(9).unwrap_err(), Error::NotOddPrime(9));
        assert_eq!(bjorck(2).unwrap_err(), Error::NotOddPrime(2));
    }

    #[test]
    fn bjorck_3_mod_4_is_two_valued() {
        for p in [3i64, 7, 11, 19, 23, 31, 43, 47] {
            let x = bjorck(p).unwrap();
            let mut distinct: Vec<Complex64> = Vec::new();
            for z in x.entries() {
                if !distinct.iter().any(|d| (d - z).norm() < 1e-12) {
                    distinct.push(*z);
                }
            }
            assert_eq!(distinct.len(), 2, "p = {p}");
        }
    }

    #[test]
    fn all_families_verify_up_to_100() {
        for n in 1..=100usize {
            let mut specs = vec![QuadraticPhaseSpec::p4(n)];
            if n % 2 == 1 {
                specs.push(QuadraticPhaseSpec::zadoff_chu(n));
            }
            specs.extend(wiener_parameters(n).into_iter().map(|k| QuadraticPhaseSpec::wiener(n, k)));
            for spec in specs {
                let x = quadratic_phase(&spec).unwrap();
                assert_eq!(x.entries()[0], Complex64::new(1.0, 0.0));
                let v = verify_cazac(&x, 1e-12);
                assert!(v.pass, "{spec:?}: {v:?}");
            }
            if is_prime(n as i64) && n > 2 {
                let x = bjorck(n as i64).unwrap();
                assert_eq!(x.entries()[0], Complex64::new(1.0, 0.0));
                assert!(verify_cazac(&x, 1e-12).pass, "bjorck {n}");
            }
        }
    }

    proptest! {
        #[test]
        fn legendre_is_multiplicative(a in -500i64..500, b in -500i64..500,
                                      p in prop::sample::select(vec![3i64, 5, 7, 11, 13, 29, 47, 101])) {
            let lhs = legendre(a * b, p).unwrap();
            let rhs = legendre(a, p).unwrap() * legendre(b, p).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn wiener_parameter_is_periodic(n in 1usize..40, k in 1i64..200) {
            let spec = QuadraticPhaseSpec::wiener(n, k);
            prop_assume!(spec.validate().is_ok());
            let period = if n % 2 == 1 { n as i64 } else { 2 * n as i64 };
            let x = quadratic_phase(&spec).unwrap();
            let y = quadratic_phase(&QuadraticPhaseSpec::wiener(n, k + period)).unwrap();
            prop_assert!(x.max_abs_diff(&y) < 1e-15);
        }
    }
}
