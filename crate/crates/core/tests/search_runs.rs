//! Small end-to-end searches.

use cazac::correlate::sidelobe_metrics;
use cazac::families::{self, QuadraticPhaseSpec};
use cazac::search::{filter_known, finiteness_verdict, run_search_with_workers, Finiteness, SearchPlan, VerdictConfig};
use cazac::{key_of, verify_cazac};

#[test]
fn reports_do_not_depend_on_worker_count() {
    let plan = SearchPlan::new(6, 1500, 42);
    let one = run_search_with_workers(&plan, 1).unwrap();
    let three = run_search_with_workers(&plan, 3).unwrap();
    assert_eq!(one.solutions, three.solutions);
    assert_eq!(one.growth_curve, three.growth_curve);
    assert_eq!(one.terminations, three.terminations);
    assert_eq!(one.max_accepted_cost, three.max_accepted_cost);
}

#[test]
fn length_seven_search_is_consistent() {
    let report = run_search_with_workers(&SearchPlan::new(7, 4000, 7), 2).unwrap();
    assert!(report.unique_count() <= report.converged - report.rejected);
    assert!(report.converged + report.non_converged + report.solver_failures == report.trials_run);
    assert!(report.growth_curve.windows(2).all(|w| w[0].unique <= w[1].unique && w[0].trials < w[1].trials));
    assert!(report.max_accepted_cost.unwrap() < 1e-20);
    // No spurious local minima at this length.
    assert_eq!(report.non_converged, 0);
    let keys: Vec<_> = report.solutions.iter().map(|(k, _)| k.clone()).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    for (key, x) in &report.solutions {
        assert_eq!(x.entries()[0].re, 1.0);
        assert_eq!(&key_of(x), key);
        assert!(verify_cazac(x, 1e-8).pass);
    }
    let verdict = finiteness_verdict(&report, &VerdictConfig::default()).unwrap();
    assert_ne!(verdict.verdict, Finiteness::LikelyInfinite);
}

#[test]
fn named_families_are_labelled_known() {
    let zc = families::quadratic_phase(&QuadraticPhaseSpec::zadoff_chu(7)).unwrap().into_inner();
    let bj = families::bjorck(7).unwrap().into_inner();
    let random = cazac::ComplexSeq::from_phases(&[0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
    let split = filter_known(&[zc, bj, random.clone()], 7).unwrap();
    assert_eq!(split.known.len(), 2);
    assert_eq!(split.new, vec![random]);
    assert!(split.known.iter().any(|l| l.provenance.contains("jorck")));
}

#[test]
fn psl_of_known_barker_like_sequence() {
    let x = cazac::ComplexSeq::from_re_im(&[(1., 0.), (1., 0.), (1., 0.), (-1., 0.)]).unwrap();
    let m = sidelobe_metrics(&x);
    assert_eq!((m.psl, m.isl), (0.25, 0.125));
}
