use proptest::prelude::*;
use smoothlearn::dynamics::*;
use smoothlearn::games::*;
use smoothlearn::lp::LinearProgram;
use smoothlearn::metrics::{regrets, squared_gap_series};
use smoothlearn::oracle::{lp_vertex_value, minty_slack_brute_force};
use smoothlearn::smoothness::*;

fn game(name: &str) -> NormalFormGame {
    builtin(name).unwrap().game
}

#[test]
fn counterexample_is_smooth_at_one_eighth() {
    let c = is_smooth(&game("counterexample"), 0.125, 0.0).unwrap();
    assert!(c.holds);
    assert!(c.violation.is_none());
}

#[test]
fn shapley_bimatrix_is_not_smooth() {
    let g = game("shapley2");
    let (opt, maximizers) = optimal_welfare(&g).unwrap();
    for (lambda, mu) in [(0.01, 0.0), (0.1, 5.0), (1.0, 100.0), (1e-3, -0.5)] {
        let c = is_smooth(&g, lambda, mu).unwrap();
        assert!(!c.holds);
        let w = c.violation.unwrap();
        if mu > 0.0 {
            assert_eq!(w[0], w[1], "witness {w:?} is off the diagonal");
        }
        // Every maximizer has a diagonal cell with zero deviation benefit.
        for a_star in &maximizers {
            let violated = (0..3).any(|j| {
                let dev = g.pure_utility(0, &[a_star[0], j]) + g.pure_utility(1, &[j, a_star[1]]);
                dev < lambda * opt - mu * pure_welfare(&g, &[j, j])
            });
            assert!(violated, "{a_star:?}");
        }
    }
}

#[test]
fn tiny_lambda_holds_with_positive_deviations() {
    let g = NormalFormGame::from_fn(&[2, 3], |i, a| 1.0 + 0.1 * (i + a[0] + 2 * a[1]) as f64).unwrap();
    assert!(is_smooth(&g, 1e-9, 0.0).unwrap().holds);
}

#[test]
fn rpoa_goldens() {
    assert!(rpoa(&game("shapley2"), 0.0).unwrap().rho.abs() <= 1e-6);
    let dom = game("dominance");
    assert!((rpoa(&dom, 0.0).unwrap().rho - 0.5).abs() <= 1e-6);
    let reduced = eliminate_dominated(&dom).unwrap().game;
    assert!((rpoa(&reduced, 0.0).unwrap().rho - 1.0).abs() <= 1e-6);
    for name in ["shapley3", "mp"] {
        let c = rpoa(&game(name), 0.0).unwrap();
        assert!((c.rho - 1.0).abs() <= 1e-6, "{name}");
        assert!(c.z.unwrap() <= DEGENERATE_Z && c.flagged_degenerate, "{name}");
        assert!(c.lambda.is_none() && c.mu.is_none());
    }
}

#[test]
fn dominance_weighted_golden_matches_vertex_oracle() {
    let dom = game("dominance");
    let c = weighted_rpoa(&dom, None, None).unwrap();
    assert!((c.rho - 1.0).abs() <= 1e-6);
    assert!(certificate_violation(&dom, &c).unwrap() <= 1e-7);

    // Same program built by hand: maximize ρ over (ρ, z_1, z_2 ≥ 0), a* = (1, 1), OPT = 2.
    let (opt, maximizers) = optimal_welfare(&dom).unwrap();
    assert_eq!((opt, maximizers.clone()), (2.0, vec![vec![1, 1]]));
    let mut lp = LinearProgram::new(vec![1.0, 0.0, 0.0]);
    lp.set_free(0);
    for_each_profile(&[2, 2], |_, a| {
        let dev = |i: usize| {
            let mut b = a.to_vec();
            b[i] = 1;
            dom.pure_utility(i, &b) - dom.pure_utility(i, a)
        };
        lp.add_le(vec![opt, -dev(0), -dev(1)], pure_welfare(&dom, a));
    });
    // Boxed so every vertex is finite; the optimum sits well inside.
    lp.set_bounds(1, 0.0, 10.0).set_bounds(2, 0.0, 10.0);
    assert!((lp_vertex_value(&lp).unwrap() - c.rho).abs() <= 1e-9);
}

#[test]
fn constant_sum_weighted_is_degenerate() {
    let g = random_constant_sum_bimatrix(3, 4, 1.0, 3).unwrap();
    let c = weighted_rpoa(&g, None, None).unwrap();
    assert!((c.rho - 1.0).abs() <= 1e-6);
    assert!(c.z_i.unwrap().iter().all(|&z| z <= DEGENERATE_Z));
    assert!(c.flagged_degenerate);
}

#[test]
fn nonpositive_opt_is_rejected() {
    let g = random_constant_sum_bimatrix(2, 2, 0.0, 1).unwrap();
    assert!(matches!(rpoa(&g, 0.0), Err(SmoothnessError::NonPositiveOpt(_))));
}

#[test]
fn minty_on_matching_pennies() {
    let m = minty_certificate(&game("mp")).unwrap();
    assert!(m.feasible);
    for i in 0..2 {
        for &p in m.profile.strategy(i) {
            assert!((p - 0.5).abs() <= 1e-9);
        }
    }
}

#[test]
fn minty_on_shapley_bimatrix_matches_grid() {
    let g = game("shapley2");
    let m = minty_certificate(&g).unwrap();
    assert!(!m.feasible);
    assert!((m.worst_slack + 1.0 / 3.0).abs() <= 1e-9, "{}", m.worst_slack);
    assert!((minty_slack_brute_force(&g, &m.profile) - m.worst_slack).abs() <= 1e-12);
    let k = 30;
    let mut grid = Vec::new();
    for i in 0..=k {
        for j in 0..=(k - i) {
            grid.push(vec![i as f64 / k as f64, j as f64 / k as f64, (k - i - j) as f64 / k as f64]);
        }
    }
    let mut best = f64::NEG_INFINITY;
    for x in &grid {
        for y in &grid {
            let p = MixedProfile::new(vec![x.clone(), y.clone()]).unwrap();
            best = best.max(minty_worst_slack(&g, &p).unwrap());
        }
    }
    assert!(best <= m.worst_slack + 1e-9);
    assert!(best >= m.worst_slack - 0.1);
}

#[test]
fn two_player_constant_sum_games_are_minty() {
    for seed in 0..10 {
        let g = random_constant_sum_bimatrix(4, 3, 0.3, seed).unwrap();
        let m = minty_certificate(&g).unwrap();
        assert!(m.feasible, "seed {seed}: {}", m.worst_slack);
        assert!(minty_slack_brute_force(&g, &m.profile) >= -1e-7);
    }
}

#[test]
fn minty_games_keep_regret_sum_nonnegative() {
    let mut checked = 0;
    for seed in 0..40 {
        let g = random_game(2, &[2, 3], seed).unwrap();
        if !minty_certificate(&g).unwrap().feasible {
            continue;
        }
        checked += 1;
        let traj = run_ogd(&g, 0.05, 500, &MixedProfile::uniform(&[2, 3])).unwrap();
        assert!(regrets(&g, &traj, None).unwrap().sum >= -1e-6 * 500.0, "seed {seed}");
    }
    assert!(checked > 0);
}

#[test]
fn horizon_halves_when_loss_doubles() {
    let g = game("counterexample");
    let eta = default_ogd_eta(&g);
    let steps = |e: f64| match horizon(&g, e, 0.0, eta).unwrap() {
        Horizon::Finite { steps, .. } => steps,
        Horizon::ZeroLoss => panic!("finite expected"),
    };
    for e in [0.01, 0.1, 0.3] {
        let (t1, t2) = (steps(e) as i64, steps(2.0 * e) as i64);
        assert!((t1 - 2 * t2).abs() <= 2, "{t1} vs {t2}");
    }
    assert_eq!(horizon(&g, 0.0, 0.0, eta).unwrap(), Horizon::ZeroLoss);
    assert!(horizon(&g, 0.1, 0.0, 0.0).is_err());
}

#[test]
fn zero_loss_bound_decays_inversely() {
    let g = game("mp");
    let b = best_iterate_bound(&g, 0.1, 100);
    for t in [200, 400, 1000] {
        assert!((best_iterate_bound(&g, 0.1, t) * t as f64 - b * 100.0).abs() <= 1e-9 * b * 100.0);
    }
}

#[test]
fn cgd_gate_formula() {
    // L = 1, D_X² = 4, ε₀ = 0.5.
    assert!((cgd_horizon_gate(1.0, &[2, 2], 0.5) - 64.0 * 16.0 / 0.25).abs() < 1e-9);
}

#[test]
fn constant_sum_best_iterate_bound() {
    for seed in 0..3 {
        let g = random_constant_sum_bimatrix(3, 3, 1.0, seed).unwrap();
        let eta = default_ogd_eta(&g);
        let t = 2000;
        let traj = run_ogd(&g, eta, t, &MixedProfile::uniform(&[3, 3])).unwrap();
        let min = squared_gap_series(&traj).into_iter().fold(f64::INFINITY, f64::min);
        assert!(min <= best_iterate_bound(&g, eta, t) + 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn certificates_reverify(seed in 0u64..10_000) {
        let g = random_game(2, &[3, 2], seed).unwrap();
        let c = rpoa(&g, 0.0).unwrap();
        prop_assert!(certificate_violation(&g, &c).unwrap() <= 1e-7);
        let w = weighted_rpoa(&g, None, None).unwrap();
        prop_assert!(certificate_violation(&g, &w).unwrap() <= 1e-7);
        if let (Some(l), Some(m)) = (c.lambda, c.mu) {
            prop_assert!(l > 0.0 && m > -1.0 || c.rho <= 0.0);
            if l > 0.0 {
                prop_assert!(is_smooth(&g, l * (1.0 - 1e-9), m).unwrap().worst_slack >= -1e-7);
            }
        }
    }

    #[test]
    fn rpoa_is_monotone_in_z_min(seed in 0u64..10_000) {
        let g = random_game(3, &[2, 2, 2], seed).unwrap();
        let rhos: Vec<f64> = [0.0, 0.5, 1.0, 2.0].iter().map(|&z| rpoa(&g, z).unwrap().rho).collect();
        for w in rhos.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "{:?}", rhos);
        }
    }

    #[test]
    fn weighted_relaxes_uniform(seed in 0u64..10_000) {
        let g = random_game(2, &[3, 3], seed).unwrap();
        let uniform = rpoa(&g, 0.0).unwrap().rho;
        prop_assert!(uniform <= weighted_rpoa(&g, None, None).unwrap().rho + 1e-6);
        prop_assert!((uniform - weighted_rpoa(&g, Some(1.0), None).unwrap().rho).abs() <= 1e-6);
    }
}
