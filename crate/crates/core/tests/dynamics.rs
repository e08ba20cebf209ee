use proptest::prelude::*;
use smoothlearn::dynamics::*;
use smoothlearn::games::*;
use smoothlearn::geometry::{self, prox};

fn min_gap(traj: &Trajectory) -> f64 {
    (0..traj.len()).map(|t| traj.ne_gap(t)).fold(f64::INFINITY, f64::min)
}

#[test]
fn shapley3_stays_away_from_equilibrium() {
    let b = builtin("shapley3").unwrap();
    let traj = run_ogd(&b.game, 0.01, 100_000, &b.init).unwrap();
    assert_eq!(traj.len(), 100_000);
    assert!(min_gap(&traj) >= 0.1875, "{}", min_gap(&traj));
}

#[test]
fn counterexample_stays_away_from_equilibrium() {
    let b = builtin("counterexample").unwrap();
    let traj = run_ogd(&b.game, 0.01, 100_000, &b.init).unwrap();
    assert!(min_gap(&traj) >= 0.046, "{}", min_gap(&traj));
}

#[test]
fn zero_sum_ogd_approaches_equilibrium() {
    for seed in 0..3 {
        let g = random_constant_sum_bimatrix(5, 5, 0.0, seed).unwrap();
        let traj = run_ogd(&g, default_ogd_eta(&g), 10_000, &MixedProfile::uniform(&[5, 5])).unwrap();
        assert!(min_gap(&traj) <= 0.05);
    }
}

#[test]
fn first_prediction_is_utility_at_initial_secondary() {
    let g = random_game(2, &[3, 2], 1).unwrap();
    let init = MixedProfile::new(vec![vec![0.2, 0.5, 0.3], vec![0.6, 0.4]]).unwrap();
    let traj = run_ogd(&g, 0.1, 3, &init).unwrap();
    let f = game_operator(&g, &init).unwrap();
    assert_eq!(traj.prediction(0, 0).unwrap(), f[0].as_slice());
    assert_eq!(traj.prediction(1, 1).unwrap(), traj.utility(0, 1));
    let step: Vec<f64> = f[0].iter().map(|v| 0.1 * v).collect();
    assert_eq!(traj.played(0, 0), prox(init.strategy(0), &step).unwrap().as_slice());
}

#[test]
fn ogd_is_deterministic_and_csv_is_stable() {
    let g = random_game(3, &[2, 2, 3], 3).unwrap();
    let init = MixedProfile::uniform(g.actions());
    let (a, b) = (run_ogd(&g, 0.05, 500, &init).unwrap(), run_ogd(&g, 0.05, 500, &init).unwrap());
    let (mut ca, mut cb) = (Vec::new(), Vec::new());
    a.write_csv(&mut ca).unwrap();
    b.write_csv(&mut cb).unwrap();
    assert_eq!(ca, cb);
    let text = String::from_utf8(ca).unwrap();
    assert!(text.starts_with("t,x0_0,x0_1,x1_0,x1_1,x2_0,x2_1,x2_2,negap,sw\n"));
    assert_eq!(text.lines().count(), 501);
}

#[test]
fn empty_run_writes_header_only() {
    let g = builtin("mp").unwrap().game;
    let traj = run_ogd(&g, 0.1, 0, &MixedProfile::uniform(&[2, 2])).unwrap();
    let mut out = Vec::new();
    traj.write_csv(&mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "t,x0_0,x0_1,x1_0,x1_1,negap,sw\n");
}

#[test]
fn one_player_fixed_point_takes_one_update() {
    let g = NormalFormGame::new(vec![3], vec![vec![0.3, 0.9, 0.1]]).unwrap();
    let x = MixedProfile::new(vec![vec![0.5, 0.2, 0.3]]).unwrap();
    let fp = cgd_fixed_point(&g, &x, 0.4, 1e-12, 64).unwrap();
    assert_eq!(fp.iterations, 1);
    let expected = prox(x.strategy(0), &[0.12, 0.36, 0.04]).unwrap();
    for (a, b) in fp.next.strategy(0).iter().zip(&expected) {
        assert!((a - b).abs() < 1e-15);
    }
    let traj = run_cgd(&g, &CgdSchedule::for_game(&g, 0.4), 1, &x).unwrap();
    for (a, b) in traj.played(0, 0).iter().zip(&expected) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn fixed_point_residual_reverifies() {
    let g = random_game(3, &[2, 3, 2], 4).unwrap();
    let eta = default_cgd_eta(&g);
    let x = MixedProfile::uniform(g.actions());
    let eps = 1e-10;
    let fp = cgd_fixed_point(&g, &x, eta, eps, 64).unwrap();
    let f = game_operator(&g, &fp.anchor).unwrap();
    let mut sq = 0.0;
    for i in 0..3 {
        let step: Vec<f64> = f[i].iter().map(|v| eta * v).collect();
        sq += geometry::dist_sq(&prox(x.strategy(i), &step).unwrap(), fp.anchor.strategy(i));
    }
    assert!(sq.sqrt() <= eps);
    let d_x = geometry::product_diameter(g.actions());
    let bound = ((d_x / eps).ln() / (1.0 / (eta * g.lipschitz_bound())).ln()).ceil() as usize + 1;
    assert!(fp.iterations <= bound, "{} > {bound}", fp.iterations);
}

#[test]
fn picard_residuals_shrink_geometrically_on_matching_pennies() {
    let g = builtin("mp").unwrap().game;
    let eta = 0.5 / g.lipschitz_bound();
    let x = MixedProfile::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
    let fp = cgd_fixed_point(&g, &x, eta, 1e-14, 64).unwrap();
    assert!(fp.history.len() >= 3);
    for w in fp.history.windows(2) {
        if w[0] > 1e-15 {
            assert!(w[1] <= (0.5 + 1e-9) * w[0], "{w:?}");
        }
    }
}

#[test]
fn cgd_checks_contraction_and_budget() {
    let g = builtin("mp").unwrap().game;
    let x = MixedProfile::uniform(&[2, 2]);
    assert!(matches!(cgd_fixed_point(&g, &x, 1.0, 1e-6, 64), Err(DynamicsError::NotContractive { .. })));
    let start = MixedProfile::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
    let err = cgd_fixed_point(&g, &start, 0.2, 1e-300, 2).unwrap_err();
    assert!(matches!(err, DynamicsError::BudgetExhausted { budget: 2, .. }), "{err}");
    assert!(cgd_fixed_point(&g, &x, 0.1, 0.0, 64).is_err());
}

#[test]
fn cgd_residuals_respect_schedule() {
    let g = random_game(3, &[2, 2, 2], 2).unwrap();
    let schedule = CgdSchedule::for_game(&g, default_cgd_eta(&g));
    assert_eq!(schedule.tolerance(2), 2f64.sqrt() / 4.0);
    let traj = run_cgd(&g, &schedule, 300, &MixedProfile::uniform(&[2, 2, 2])).unwrap();
    assert_eq!(traj.algorithm(), Algorithm::Cgd);
    for (t, (r, e)) in traj.residuals().iter().zip(traj.tolerances()).enumerate() {
        assert!(r <= e, "step {t}");
        assert_eq!(*e, schedule.tolerance(t + 1));
    }
}

proptest! {
    #[test]
    fn ogd_iterates_stay_on_simplex(seed in 0u64..200, eta in 0.0f64..2.0) {
        let g = random_game(2, &[3, 4], seed).unwrap();
        let traj = run_ogd(&g, eta, 30, &MixedProfile::uniform(&[3, 4])).unwrap();
        for t in 0..30 {
            for i in 0..2 {
                prop_assert!(geometry::is_simplex_point(traj.played(t, i), 1e-9));
                prop_assert!(geometry::is_simplex_point(traj.secondary(t + 1, i).unwrap(), 1e-9));
            }
        }
    }

    #[test]
    fn zero_rate_freezes_ogd(seed in 0u64..200) {
        let g = random_game(3, &[2, 2, 2], seed).unwrap();
        let init = MixedProfile::new(vec![vec![0.3, 0.7], vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        let traj = run_ogd(&g, 0.0, 10, &init).unwrap();
        for t in 0..10 {
            prop_assert_eq!(traj.played_profile(t), init.clone());
        }
    }
}
