//! Levenberg-Marquardt on the CAZAC system: local recovery, convergence
//! rate and the rank of the Jacobian at solutions.

use cazac::families::{self, QuadraticPhaseSpec};
use cazac::residual::ResidualSystem;
use cazac::search::trial_start;
use cazac::solver::{minimize, SolverConfig, Termination};
use cazac::{embed, key_of, lift, verify_cazac, RealEmbedding};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn perturbed_zadoff_chu_is_recovered() {
    let zc = families::quadratic_phase(&QuadraticPhaseSpec::zadoff_chu(7)).unwrap().into_inner();
    let sys = ResidualSystem::new(7);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let noisy: Vec<f64> = embed(&zc).as_slice().iter().map(|v| v + rng.random_range(-1e-3..1e-3)).collect();
        let out = minimize(&sys, &RealEmbedding::from_flat(noisy).unwrap(), &SolverConfig::default()).unwrap();
        assert!(out.converged, "{:?}", out.termination);
        let x = lift(&out.point);
        assert!(verify_cazac(&x, 1e-8).pass);
        // The nearest root need not be Zadoff-Chu itself, only a unimodular multiple.
        assert_eq!(key_of(&x), key_of(&zc));

        // Final iterations reduce the cost at least at rate 1.5:
        // cost_{i+1} <= C * cost_i^1.5 with C = 10. Linear convergence fails
        // this as soon as cost_i < 1e-4. Steps starting below 1e-20 are in
        // the rounding regime and are skipped.
        let h = &out.cost_history;
        let pairs: Vec<(f64, f64)> =
            h.windows(2).map(|w| (w[0], w[1])).filter(|&(c, _)| c > 1e-20 && c < 1e-4).collect();
        assert!(pairs.len() >= 2, "{h:?}");
        for &(c0, c1) in pairs.iter().rev().take(3) {
            assert!(c1 <= 10.0 * c0.powf(1.5), "{c0:e} -> {c1:e}");
        }
    }
}

#[test]
fn exact_root_terminates_immediately() {
    let x = families::bjorck(7).unwrap().into_inner();
    let out = minimize(&ResidualSystem::new(7), &embed(&x), &SolverConfig::default()).unwrap();
    assert_eq!(out.iterations, 0);
    assert!(out.converged);
    assert_ne!(out.termination, Termination::MaxIterations);
}

#[test]
fn gradient_is_small_at_converged_points() {
    let sys = ResidualSystem::new(7);
    let cfg = SolverConfig::default();
    let mut converged = 0;
    for i in 0..200 {
        let out = minimize(&sys, &trial_start(3, 7, i), &cfg).unwrap();
        if !out.converged {
            continue;
        }
        converged += 1;
        let j = sys.jacobian(&out.point).to_matrix();
        let r = nalgebra::DVector::from_vec(sys.residuals(&out.point));
        let g = j.tr_mul(&r);
        assert!(g.amax() <= cfg.gradient_tol, "‖Jᵀr‖∞ = {:e}", g.amax());
        assert!(out.cost_history.windows(2).all(|w| w[1] < w[0]));
    }
    assert!(converged > 150, "only {converged}/200 starts converged");
}

#[test]
fn jacobian_is_rank_deficient_at_solutions() {
    // Multiplying by e^{iφ} keeps a root a root, so the tangent of that
    // circle lies in the null space and the rank is at most 2n - 1.
    for n in [5usize, 7, 11] {
        let seqs = [
            families::quadratic_phase(&QuadraticPhaseSpec::zadoff_chu(n)).unwrap().into_inner(),
            families::bjorck(n as i64).unwrap().into_inner(),
        ];
        for x in seqs {
            let j = ResidualSystem::new(n).jacobian(&embed(&x)).to_matrix();
            let sv = j.singular_values();
            let rank = sv.iter().filter(|&&s| s > 1e-8 * sv.max()).count();
            assert!(rank < 2 * n, "n={n}: rank {rank}");
        }
    }
}

#[test]
fn solutions_from_random_starts_have_rank_deficient_jacobian() {
    let sys = ResidualSystem::new(6);
    let mut seen = 0;
    for i in 0..50 {
        let out = minimize(&sys, &trial_start(17, 6, i), &SolverConfig::default()).unwrap();
        if out.converged {
            seen += 1;
            let sv = sys.jacobian(&out.point).to_matrix().singular_values();
            let rank = sv.iter().filter(|&&s| s > 1e-6 * sv.max()).count();
            assert!(rank <= 11, "rank {rank}");
        }
    }
    assert!(seen > 0);
}
