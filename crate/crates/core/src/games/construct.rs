use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    check_enumerable, pure_welfare, Game, GameError, GraphicalGame, NormalFormGame, PolymatrixEdge, PolymatrixGame,
    DEFAULT_ENUMERATION_CAP,
};

/// One step of iterated strict dominance, in original action indices.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Removal {
    pub player: usize,
    pub action: usize,
    pub dominated_by: usize,
}

#[derive(Debug, Clone)]
pub struct Elimination {
    pub game: NormalFormGame,
    /// Surviving original action indices per player.
    pub kept: Vec<Vec<usize>>,
    pub removals: Vec<Removal>,
}

/// Iteratively removes actions strictly dominated by another pure action.
pub fn eliminate_dominated(game: &NormalFormGame) -> Result<Elimination, GameError> {
    let n = game.num_players();
    let mut kept: Vec<Vec<usize>> = game.actions().iter().map(|&d| (0..d).collect()).collect();
    let mut removals = Vec::new();
    'outer: loop {
        for i in 0..n {
            for &a in &kept[i] {
                for &b in &kept[i] {
                    if b != a && strictly_dominates(game, &kept, i, b, a) {
                        removals.push(Removal { player: i, action: a, dominated_by: b });
                        kept[i].retain(|&x| x != a);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    let reduced = game.restrict(&kept)?;
    Ok(Elimination { game: reduced, kept, removals })
}

fn strictly_dominates(game: &NormalFormGame, kept: &[Vec<usize>], i: usize, b: usize, a: usize) -> bool {
    let others: Vec<usize> = kept.iter().map(Vec::len).collect();
    let mut profile = vec![0usize; kept.len()];
    let mut ok = true;
    super::for_each_profile(&others, |_, idx| {
        if !ok {
            return;
        }
        for (p, (k, &j)) in profile.iter_mut().zip(kept.iter().zip(idx)) {
            *p = k[j];
        }
        profile[i] = b;
        let ub = game.pure_utility(i, &profile);
        profile[i] = a;
        if ub <= game.pure_utility(i, &profile) {
            ok = false;
        }
    });
    ok
}

/// Adds a fallback action `b_i` (the last index) to every player.
///
/// All-original profiles pay `SW(a)/n` to everyone; a single augmenting player gets `k/n`
/// and the rest 0; with two or more augmenting players each of them gets `eps/n`.
pub fn barman_augment(game: &NormalFormGame, k: f64, eps: f64) -> Result<NormalFormGame, GameError> {
    let n = game.num_players();
    let nf = n as f64;
    if !(k > 0.0) || !(eps >= k / nf && eps <= k) {
        return Err(GameError::AugmentParameter { eps, lo: k / nf, hi: k });
    }
    let actions: Vec<usize> = game.actions().iter().map(|d| d + 1).collect();
    let orig = game.actions().to_vec();
    NormalFormGame::from_fn(&actions, |i, a| {
        let augmented: Vec<bool> = a.iter().zip(&orig).map(|(x, d)| x == d).collect();
        match augmented.iter().filter(|&&b| b).count() {
            0 => pure_welfare(game, a) / nf,
            1 if augmented[i] => k / nf,
            1 => 0.0,
            _ if augmented[i] => eps / nf,
            _ => 0.0,
        }
    })
}

/// I.i.d. uniform `[0, 1)` utilities from a seeded ChaCha8 stream, player by player.
pub fn random_game(n: usize, actions: &[usize], seed: u64) -> Result<NormalFormGame, GameError> {
    if n != actions.len() {
        return Err(GameError::PlayerCount { expected: n, found: actions.len() });
    }
    let cells = check_enumerable(actions, DEFAULT_ENUMERATION_CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let utilities = (0..n).map(|_| (0..cells).map(|_| rng.gen::<f64>()).collect()).collect();
    NormalFormGame::new(actions.to_vec(), utilities)
}

/// Bimatrix game with `A` uniform on `[0, 1)` and `B = value − A`.
pub fn random_constant_sum_bimatrix(rows: usize, cols: usize, value: f64, seed: u64) -> Result<NormalFormGame, GameError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..rows * cols).map(|_| rng.gen::<f64>()).collect();
    let b = a.iter().map(|x| value - x).collect();
    NormalFormGame::new(vec![rows, cols], vec![a, b])
}

/// Polymatrix game on the complete directed graph with uniform `[0, 1)` edge matrices.
pub fn random_polymatrix(actions: &[usize], seed: u64) -> Result<PolymatrixGame, GameError> {
    let n = actions.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for from in 0..n {
        for to in (0..n).filter(|&t| t != from) {
            let matrix = (0..actions[from])
                .map(|_| (0..actions[to]).map(|_| rng.gen::<f64>()).collect())
                .collect();
            edges.push(PolymatrixEdge { from, to, matrix });
        }
    }
    PolymatrixGame::new(actions.to_vec(), edges)
}

/// Graphical game where player `i` watches the next `degree` players around a ring.
pub fn random_graphical(actions: &[usize], degree: usize, seed: u64) -> Result<GraphicalGame, GameError> {
    let n = actions.len();
    if degree >= n {
        return Err(GameError::Invalid(format!("ring of {n} players cannot have degree {degree}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let neighborhoods: Vec<Vec<usize>> = (0..n).map(|i| (1..=degree).map(|s| (i + s) % n).collect()).collect();
    let tables = neighborhoods
        .iter()
        .enumerate()
        .map(|(i, nb)| {
            let cells = actions[i] * nb.iter().map(|&j| actions[j]).product::<usize>();
            (0..cells).map(|_| rng.gen::<f64>()).collect()
        })
        .collect();
    GraphicalGame::new(actions.to_vec(), degree, neighborhoods, tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_game_is_deterministic_and_in_range() {
        let a = random_game(3, &[2, 3, 2], 11).unwrap();
        let b = random_game(3, &[2, 3, 2], 11).unwrap();
        assert_eq!(a, b);
        let r = a.utility_range();
        assert!(r.min >= 0.0 && r.max < 1.0);
        assert_ne!(a, random_game(3, &[2, 3, 2], 12).unwrap());
    }

    #[test]
    fn eps_range_is_checked() {
        let g = random_game(2, &[2, 2], 0).unwrap();
        assert!(barman_augment(&g, 1.0, 0.4).is_err());
        assert!(barman_augment(&g, 1.0, 1.1).is_err());
        assert!(barman_augment(&g, 1.0, 0.5).is_ok());
        assert!(barman_augment(&g, 0.0, 0.0).is_err());
    }
}
