use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smoothlearn::equilibria::*;
use smoothlearn::games::*;
use smoothlearn::metrics::ne_gap;
use smoothlearn::oracle::bimatrix_2x2_equilibria;
use smoothlearn::smoothness::rpoa;

fn game(name: &str) -> NormalFormGame {
    builtin(name).unwrap().game
}

fn is_uniform(x: &MixedProfile) -> bool {
    x.strategies().all(|s| s.iter().all(|&p| (p - 1.0 / s.len() as f64).abs() <= 1e-9))
}

#[test]
fn pure_equilibria_of_builtins() {
    let dom = pure_nash(&game("dominance")).unwrap();
    assert_eq!(dom.len(), 1);
    assert_eq!(dom.equilibria[0].profile, MixedProfile::pure(&[2, 2], &[1, 1]).unwrap());
    assert!(pure_nash(&game("mp")).unwrap().is_empty());
    let barman = pure_nash(&game("barman-demo")).unwrap();
    let all_b = MixedProfile::pure(&[3, 3], &[2, 2]).unwrap();
    assert!(barman.equilibria.iter().any(|e| e.profile == all_b));
}

#[test]
fn support_enumeration_on_builtins() {
    let mp = bimatrix_nash(&game("mp")).unwrap();
    assert_eq!(mp.len(), 1);
    assert!(is_uniform(&mp.equilibria[0].profile));

    let og = bimatrix_nash(&game("shapley2")).unwrap();
    assert_eq!(og.len(), 1);
    assert!(is_uniform(&og.equilibria[0].profile));

    let dom = bimatrix_nash(&game("dominance")).unwrap();
    let pure = MixedProfile::pure(&[2, 2], &[1, 1]).unwrap();
    assert!(dom.equilibria.iter().any(|e| e.profile.distance(&pure) <= 1e-9));

    assert!(matches!(bimatrix_nash(&game("shapley3")), Err(EquilibriumError::NotSmallBimatrix(_))));
}

#[test]
fn constant_sum_price_of_anarchy_is_one() {
    for seed in 0..5 {
        let g = random_constant_sum_bimatrix(3, 3, 1.0, seed).unwrap();
        for mode in [PoaMode::Worst, PoaMode::Best] {
            assert!((poa(&g, mode, None).unwrap() - 1.0).abs() <= 1e-9);
        }
    }
    assert!((poa(&game("mp"), PoaMode::Worst, None).unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn dominance_price_of_anarchy() {
    assert_eq!(poa(&game("dominance"), PoaMode::Worst, None).unwrap(), 1.0);
    let three = game("shapley3");
    assert!(matches!(poa(&three, PoaMode::Worst, None), Err(EquilibriumError::Undetermined)));
}

#[test]
fn epsilon_equilibria_only_lower_the_worst_case() {
    let g = random_game(2, &[2, 2], 4).unwrap();
    let exact = poa(&g, PoaMode::Worst, None).unwrap();
    let approx = poa(&g, PoaMode::Worst, Some(0.05)).unwrap();
    assert!(approx <= exact + 1e-12);
}

#[test]
fn random_bimatrices_order_and_verify() {
    for seed in 0..40 {
        let g = random_game(2, &[3, 4], seed).unwrap();
        let set = bimatrix_nash(&g).unwrap();
        assert!(!set.is_empty(), "seed {seed}");
        for e in &set.equilibria {
            assert!(ne_gap(&g, &e.profile).unwrap().ne_gap <= 1e-8);
            assert!((social_welfare(&g, &e.profile).unwrap() - e.welfare).abs() <= 1e-12);
        }
        let (w, b) = (poa(&g, PoaMode::Worst, None).unwrap(), poa(&g, PoaMode::Best, None).unwrap());
        assert!(w <= b && (0.0..=1.0 + 1e-12).contains(&w) && b <= 1.0 + 1e-12);
        assert!(w >= rpoa(&g, 0.0).unwrap().rho - 1e-6, "seed {seed}");
    }
}

#[test]
fn closed_form_agreement_on_two_by_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..200 {
        let mut m = || [[rng.gen::<f64>(), rng.gen::<f64>()], [rng.gen::<f64>(), rng.gen::<f64>()]];
        let (a, b) = (m(), m());
        let g = NormalFormGame::bimatrix(&[a[0].to_vec(), a[1].to_vec()], &[b[0].to_vec(), b[1].to_vec()]).unwrap();
        let ours = bimatrix_nash(&g).unwrap();
        let expected = bimatrix_2x2_equilibria(a, b);
        assert_eq!(ours.len(), expected.len(), "game {k}");
        for (x, y) in expected {
            let p = MixedProfile::new(vec![x.to_vec(), y.to_vec()]).unwrap();
            assert!(ours.equilibria.iter().any(|e| e.profile.distance(&p) <= 1e-9), "game {k}");
        }
    }
}
