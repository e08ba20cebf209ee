use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smoothlearn::lp::*;
use smoothlearn::oracle::lp_vertex_value;

#[test]
fn single_variable_examples() {
    let mut lp = LinearProgram::new(vec![1.0]);
    lp.add_le(vec![1.0], 3.0);
    let s = lp.solve().unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert!((s.value - 3.0).abs() < 1e-12);

    let mut lp = LinearProgram::new(vec![1.0]);
    lp.add_le(vec![-1.0], -1.0).add_le(vec![1.0], 0.0);
    assert_eq!(lp.solve().unwrap().status, LpStatus::Infeasible);
}

#[test]
fn unbounded_program() {
    let mut lp = LinearProgram::new(vec![1.0, 1.0]);
    lp.add_le(vec![1.0, -1.0], 1.0);
    let s = lp.solve().unwrap();
    assert_eq!(s.status, LpStatus::Unbounded);
    assert_eq!(s.value, f64::INFINITY);
}

#[test]
fn malformed_rows_are_errors() {
    let mut lp = LinearProgram::new(vec![1.0, 1.0]);
    lp.add_le(vec![1.0], 1.0);
    assert!(matches!(lp.solve(), Err(LpError::Malformed(_))));
    let mut lp = LinearProgram::new(vec![f64::NAN]);
    lp.add_le(vec![1.0], 1.0);
    assert!(lp.solve().is_err());
}

/// Bounded feasible-or-not program with up to 8 variables and 20 rows.
fn random_program(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(1..=20);
    let mut lp = LinearProgram::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
    for j in 0..n {
        match rng.gen_range(0..3) {
            0 => lp.set_bounds(j, 0.0, 4.0),
            1 => lp.set_bounds(j, -2.0, 2.0),
            _ => lp.set_bounds(j, 1.0, 3.0),
        };
    }
    for _ in 0..m {
        let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let rhs = rng.gen_range(-0.5..3.0);
        match rng.gen_range(0..6) {
            0 => lp.add_ge(row, rhs),
            1 => lp.add_eq(row, rhs * 0.2),
            _ => lp.add_le(row, rhs),
        };
    }
    lp
}

#[test]
fn vertex_enumeration_oracle_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut optimal, mut infeasible) = (0, 0);
    for k in 0..80 {
        let lp = random_program(&mut rng);
        let s = lp.solve().unwrap();
        match (s.status, lp_vertex_value(&lp)) {
            (LpStatus::Optimal, Some(v)) => {
                assert!((s.value - v).abs() <= 1e-6, "program {k}: {} vs {v}", s.value);
                assert!(lp.max_violation(&s.point) <= 1e-7);
                let obj: f64 = lp.objective().iter().zip(&s.point).map(|(a, b)| a * b).sum();
                assert!((obj - s.value).abs() <= 1e-7);
                optimal += 1;
            }
            (LpStatus::Infeasible, None) => infeasible += 1,
            (status, v) => panic!("program {k}: solver {status:?}, oracle {v:?}"),
        }
    }
    assert!(optimal > 10 && infeasible > 0, "{optimal} optimal, {infeasible} infeasible");
}

#[test]
fn weak_duality_spot_check() {
    // max c·y, A y ≤ b, y ≥ 0 against min b·p, Aᵀp ≥ c, p ≥ 0.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let (n, m) = (rng.gen_range(1..=5), rng.gen_range(1..=6));
        let a: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0.1..1.0)).collect()).collect();
        let b: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..2.0)).collect();
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..1.0)).collect();
        let mut primal = LinearProgram::new(c.clone());
        for (row, &h) in a.iter().zip(&b) {
            primal.add_le(row.clone(), h);
        }
        let mut dual = LinearProgram::new(b.iter().map(|v| -v).collect());
        for j in 0..n {
            dual.add_ge((0..m).map(|i| a[i][j]).collect(), c[j]);
        }
        let (p, d) = (primal.solve().unwrap(), dual.solve().unwrap());
        assert_eq!(p.status, LpStatus::Optimal);
        assert_eq!(d.status, LpStatus::Optimal);
        assert!(p.value <= -d.value + 1e-7);
        assert!((p.value + d.value).abs() <= 1e-6, "strong duality: {} vs {}", p.value, -d.value);
    }
}

#[test]
fn solving_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let lp = random_program(&mut rng);
        let (a, b) = (lp.solve().unwrap(), lp.solve().unwrap());
        assert_eq!(a.pivots, b.pivots);
        assert_eq!(a.point, b.point);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}

proptest! {
    #[test]
    fn optimal_points_are_feasible(seed in 0u64..10_000) {
        let lp = random_program(&mut ChaCha8Rng::seed_from_u64(seed));
        let s = lp.solve().unwrap();
        if s.status == LpStatus::Optimal {
            prop_assert!(lp.max_violation(&s.point) <= 1e-7);
            for j in 0..lp.num_vars() {
                let (lo, hi) = lp.bounds(j);
                prop_assert!(s.point[j] >= lo - 1e-7 && s.point[j] <= hi + 1e-7);
            }
        }
    }
}
