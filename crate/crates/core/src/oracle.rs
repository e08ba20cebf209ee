//! Slow reference computations. Nothing here calls the fast paths it is used to check.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::games::{for_each_profile, Game, MixedProfile, NormalFormGame};
use crate::lp::LinearProgram;

/// Argmin of `‖v − w‖` over simplex points `w` whose coordinates are multiples of `step` (3-D only).
pub fn grid_projection(v: &[f64; 3], step: f64) -> [f64; 3] {
    let k = (1.0 / step).round() as usize;
    let mut best = [0.0; 3];
    let mut best_d = f64::INFINITY;
    for i in 0..=k {
        for j in 0..=(k - i) {
            let w = [i as f64 / k as f64, j as f64 / k as f64, (k - i - j) as f64 / k as f64];
            let d: f64 = (0..3).map(|c| (v[c] - w[c]).powi(2)).sum();
            if d < best_d {
                best_d = d;
                best = w;
            }
        }
    }
    best
}

/// `Σ_a u_i(a) Π_j x_j[a_j]`, straight from pure utilities.
pub fn brute_force_utility<G: Game + ?Sized>(game: &G, player: usize, x: &MixedProfile) -> f64 {
    let mut total = 0.0;
    for_each_profile(game.actions(), |_, a| {
        let p: f64 = a.iter().enumerate().map(|(j, &aj)| x.strategy(j)[aj]).product();
        total += p * game.pure_utility(player, a);
    });
    total
}

/// Best objective over basic feasible solutions, or `None` if there are none.
/// Only meaningful for bounded programs; every bound becomes a row.
pub fn lp_vertex_value(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<f64>, f64)> = lp.constraints().map(|(g, h)| (g.to_vec(), h)).collect();
    for j in 0..n {
        let (lo, hi) = lp.bounds(j);
        let mut e = vec![0.0; n];
        if lo.is_finite() {
            e[j] = -1.0;
            rows.push((e.clone(), -lo));
        }
        if hi.is_finite() {
            e[j] = 1.0;
            rows.push((e, hi));
        }
    }
    let mut best: Option<f64> = None;
    let mut chosen = Vec::with_capacity(n);
    choose(rows.len(), n, 0, &mut chosen, &mut |idx| {
        let m = DMatrix::from_fn(n, n, |r, c| rows[idx[r]].0[c]);
        let rhs = DVector::from_fn(n, |r, _| rows[idx[r]].1);
        let Some(y) = m.lu().solve(&rhs) else { return };
        if y.iter().any(|v| !v.is_finite()) {
            return;
        }
        let feasible = rows.iter().all(|(g, h)| {
            let lhs: f64 = g.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
            lhs <= h + 1e-9 * (1.0 + h.abs())
        });
        if feasible {
            let value: f64 = lp.objective().iter().zip(y.iter()).map(|(a, b)| a * b).sum();
            best = Some(best.map_or(value, |b: f64| b.max(value)));
        }
    });
    best
}

fn choose(total: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..total {
        if total - i < k - cur.len() {
            break;
        }
        cur.push(i);
        choose(total, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Equilibria of a 2×2 bimatrix game: pure cells plus the interior mixed point when it exists.
/// Assumes a nondegenerate game.
pub fn bimatrix_2x2_equilibria(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> Vec<([f64; 2], [f64; 2])> {
    let mut out = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            if a[r][c] >= a[1 - r][c] && b[r][c] >= b[r][1 - c] {
                let mut x = [0.0; 2];
                let mut y = [0.0; 2];
                x[r] = 1.0;
                y[c] = 1.0;
                out.push((x, y));
            }
        }
    }
    let p = (b[1][1] - b[1][0]) / (b[0][0] - b[1][0] - b[0][1] + b[1][1]);
    let q = (a[1][1] - a[0][1]) / (a[0][0] - a[0][1] - a[1][0] + a[1][1]);
    if p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0 {
        out.push(([p, 1.0 - p], [q, 1.0 - q]));
    }
    out
}

/// `min_a Σ_i Σ_b x_i[b] u_i(b, a_{-i}) − SW(a)`, read directly from the tensors.
pub fn minty_slack_brute_force(game: &NormalFormGame, x: &MixedProfile) -> f64 {
    let n = game.num_players();
    let mut worst = f64::INFINITY;
    for idx in 0..game.num_profiles() {
        let a = game.profile_of(idx);
        let mut s = 0.0;
        for i in 0..n {
            s -= game.utilities(i)[idx];
            for (bi, &p) in x.strategy(i).iter().enumerate() {
                let mut dev = a.clone();
                dev[i] = bi;
                s += p * game.utilities(i)[game.joint_index(&dev)];
            }
        }
        worst = worst.min(s);
    }
    worst
}

/// Random point of the product of simplices (normalized exponentials).
pub fn random_profile(rng: &mut impl Rng, dims: &[usize]) -> MixedProfile {
    let strategies = dims
        .iter()
        .map(|&d| {
            let e: Vec<f64> = (0..d).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
            let s: f64 = e.iter().sum();
            e.into_iter().map(|v| v / s).collect()
        })
        .collect();
    MixedProfile::new(strategies).expect("normalized")
}

/// Largest `‖F(x) − F(x')‖₂ / ‖x − x'‖₂` over `samples` pairs: half independent, half nearby.
pub fn sampled_lipschitz_ratio<G: Game + ?Sized>(game: &G, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = game.actions().to_vec();
    let operator = |x: &MixedProfile| -> Vec<f64> {
        (0..dims.len())
            .flat_map(|i| {
                let mut u = vec![0.0; dims[i]];
                let mut buf = vec![0usize; dims.len()];
                for_each_profile(&dims, |_, a| {
                    let p: f64 = (0..dims.len()).filter(|&j| j != i).map(|j| x.strategy(j)[a[j]]).product();
                    buf.copy_from_slice(a);
                    u[a[i]] += p * game.pure_utility(i, &buf);
                });
                // Every a_i is visited once per opponent profile; each cell above already carries its weight.
                u
            })
            .collect()
    };
    let mut best: f64 = 0.0;
    for k in 0..samples {
        let x = random_profile(&mut rng, &dims);
        let y = if k % 2 == 0 {
            random_profile(&mut rng, &dims)
        } else {
            let z = random_profile(&mut rng, &dims);
            let mix = 1e-3;
            let flat: Vec<Vec<f64>> = (0..dims.len())
                .map(|i| x.strategy(i).iter().zip(z.strategy(i)).map(|(a, b)| (1.0 - mix) * a + mix * b).collect())
                .collect();
            MixedProfile::new(flat).expect("convex combination")
        };
        let dx = x.distance(&y);
        if dx < 1e-12 {
            continue;
        }
        let (fx, fy) = (operator(&x), operator(&y));
        let df: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        best = best.max(df / dx);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_oracle_on_box() {
        let mut lp = LinearProgram::new(vec![1.0, 2.0]);
        lp.set_bounds(0, 0.0, 1.0).set_bounds(1, 0.0, 1.0).add_le(vec![1.0, 1.0], 1.5);
        assert!((lp_vertex_value(&lp).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matching_pennies() {
        let eq = bimatrix_2x2_equilibria([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(eq, vec![([0.5, 0.5], [0.5, 0.5])]);
    }
}
