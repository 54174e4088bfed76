//! Properties that must hold for every CAZAC sequence and every transform.

use cazac::correlate::sidelobe_metrics;
use cazac::equiv::{apply_word, Transform};
use cazac::families::{self, gcd, QuadraticPhaseSpec};
use cazac::{verify_cazac, ComplexSeq};
use num_complex::Complex64;
use proptest::prelude::*;

fn base_sequences(n: usize) -> Vec<ComplexSeq> {
    let mut out = vec![families::quadratic_phase(&QuadraticPhaseSpec::p4(n)).unwrap().into_inner()];
    if n % 2 == 1 {
        out.push(families::quadratic_phase(&QuadraticPhaseSpec::zadoff_chu(n)).unwrap().into_inner());
    }
    if families::is_prime(n as i64) && n > 2 {
        out.push(families::bjorck(n as i64).unwrap().into_inner());
    }
    out
}

fn transform(n: usize) -> impl Strategy<Value = Transform> {
    prop_oneof![
        (0..n).prop_map(Transform::Translate),
        (0..n).prop_map(Transform::Modulate),
        (1..n.max(2)).prop_filter("coprime", move |&m| gcd(m as i64, n as i64) == 1).prop_map(Transform::Decimate),
        Just(Transform::Conjugate),
    ]
}

fn case() -> impl Strategy<Value = (usize, Vec<Transform>)> {
    (4usize..=12).prop_flat_map(|n| (Just(n), prop::collection::vec(transform(n), 0..6)))
}

proptest! {
    #[test]
    fn transforms_preserve_cazac((n, word) in case()) {
        for x in base_sequences(n) {
            let y = apply_word(&word, &x).unwrap();
            prop_assert!(verify_cazac(&y, 1e-12).pass, "n={} word={:?}", n, word);
        }
    }

    #[test]
    fn sidelobes_ignore_global_phase_and_conjugation(
        phases in prop::collection::vec(0.0..std::f64::consts::TAU, 2..40),
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let x = ComplexSeq::from_phases(&phases).unwrap();
        let base = sidelobe_metrics(&x);
        for y in [x.scaled(Complex64::from_polar(1.0, phi)), x.conj()] {
            let m = sidelobe_metrics(&y);
            prop_assert!((m.psl - base.psl).abs() <= 1e-12 && (m.isl - base.isl).abs() <= 1e-12);
        }
        prop_assert!(base.isl + 1e-15 >= base.psl * base.psl);
    }
}
