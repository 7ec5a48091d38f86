mod common;

use common::*;
use pulsekit_core::analysis::{classify, find_tau_m, find_tau_s, limit_at_infinity, Limit, Regime};
use pulsekit_core::impulse_sim::{empirical_growth_factor, propagate};
use pulsekit_core::spectral_map::{r_tau, sample_curve};
use pulsekit_core::ControlSystem;
use rand::Rng;

fn random_in_regime(rng: &mut impl Rng, regime: Regime) -> ControlSystem {
    loop {
        let n = rng.random_range(2..=4);
        let d = random_control_with_gap(rng, n, 0.05);
        let sys = system(random_symmetrizable(rng, n, 3.0), d);
        if classify(&sys).regime == regime {
            return sys;
        }
    }
}

#[test]
fn threshold_separates_stable_and_unstable_periods() {
    let mut rng = rng(41);
    for _ in 0..60 {
        let sys = random_in_regime(&mut rng, Regime::UnstableInteriorOptimum);
        let report = classify(&sys);
        let tau_s = report.tau_s.unwrap();
        assert_eq!(find_tau_s(&sys).unwrap(), tau_s);
        assert!((r_tau(&sys, tau_s).unwrap() - 1.0).abs() <= 1e-9);
        for f in [0.1, 0.5, 0.9, 0.99] {
            assert!(r_tau(&sys, f * tau_s).unwrap() < 1.0);
        }
        for f in [1.01, 1.5, 3.0] {
            assert!(r_tau(&sys, f * tau_s).unwrap() > 1.0);
        }
    }
}

#[test]
fn optimal_period_beats_a_dense_grid() {
    let mut rng = rng(42);
    for _ in 0..40 {
        let sys = random_in_regime(&mut rng, Regime::UnstableInteriorOptimum);
        let report = classify(&sys);
        let (tau_m, r_m) = find_tau_m(&sys).unwrap();
        assert_eq!(report.tau_m, Some(tau_m));
        assert_eq!(report.r_at_tau_m, Some(r_m));
        let tau_s = report.tau_s.unwrap();
        assert!(tau_m > 0.0 && tau_m < tau_s);
        let curve = sample_curve(&sys, tau_s, 2001).unwrap();
        let grid_min = curve.radii.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(r_m <= grid_min * (1.0 + 1e-12), "{r_m} vs grid {grid_min}");
    }
}

#[test]
fn monotone_regimes() {
    let mut rng = rng(43);
    for (regime, increasing) in [
        (Regime::StableNeverControl, false),
        (Regime::UnstableSelfPromotingWeakClass, true),
    ] {
        for _ in 0..30 {
            let sys = random_in_regime(&mut rng, regime);
            let report = classify(&sys);
            // the self-promoting minimizer sits on the boundary
            assert_eq!(report.tau_m, increasing.then_some(0.0));
            let curve = sample_curve(&sys, 4.0, 200).unwrap();
            for w in curve.radii.windows(2) {
                let step = w[1] - w[0];
                assert!(
                    if increasing {
                        step > -1e-12
                    } else {
                        step < 1e-12
                    },
                    "{regime:?}: {w:?}"
                );
            }
            let limit = limit_at_infinity(&sys).unwrap();
            let expected = if increasing {
                Limit::DivergesToInfinity
            } else {
                Limit::DecaysToZero
            };
            assert_eq!(limit, expected);
        }
    }
}

#[test]
fn simulation_decays_below_threshold_and_grows_above() {
    let mut rng = rng(44);
    for _ in 0..30 {
        let sys = random_in_regime(&mut rng, Regime::UnstableInteriorOptimum);
        let tau_s = classify(&sys).tau_s.unwrap();
        let x0 = vec![1.0; sys.dim()];
        for (f, grows) in [(0.5, false), (2.0, true)] {
            let traj = propagate(&sys, &x0, f * tau_s, 60, 0).unwrap();
            let g = empirical_growth_factor(&traj).unwrap();
            assert_eq!(g.factor > 1.0, grows, "factor {} at {f}·tau_s", g.factor);
            let r = r_tau(&sys, f * tau_s).unwrap();
            assert!(rel_err(g.factor, r) <= 1e-2, "{} vs {r}", g.factor);
        }
    }
}

#[test]
fn weak_class_rate_decides_initial_direction() {
    let mut rng = rng(45);
    for _ in 0..200 {
        let n = rng.random_range(2..=4);
        let d = random_control_with_gap(&mut rng, n, 0.05);
        let k = d.unique_argmax().unwrap();
        let sys = system(random_symmetrizable(&mut rng, n, 3.0), d);
        let a_kk = sys.a()[(k, k)];
        if a_kk.abs() < 0.05 {
            continue;
        }
        let r0 = r_tau(&sys, 0.0).unwrap();
        let r1 = r_tau(&sys, 1e-4).unwrap();
        assert_eq!(r1 > r0, a_kk > 0.0, "a_kk = {a_kk}");
    }
}

#[test]
fn tied_control_is_out_of_scope() {
    let sys = system_from(&[&[-2.0, 1.0], &[1.0, 1.0]], &[0.5, 0.5]);
    let report = classify(&sys);
    assert_eq!(report.regime, Regime::OutOfTheoryScope);
    assert!(!report.check("unique_k").unwrap().holds);
}
