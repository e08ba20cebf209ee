use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{check_player, Game, GameError, MixedProfile, UtilityRange};

/// Directed edge `from → to` carrying the `|A_from| × |A_to|` payoff matrix of `from`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolymatrixEdge {
    pub from: usize,
    pub to: usize,
    pub matrix: Vec<Vec<f64>>,
}

/// `u_i(x) = (1/n) Σ_{(i,j) ∈ E} x_iᵀ A_{i,j} x_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolymatrixGame {
    actions: Vec<usize>,
    edges: Vec<PolymatrixEdge>,
    outgoing: Vec<Vec<usize>>,
    range: UtilityRange,
}

impl PolymatrixGame {
    pub fn new(actions: Vec<usize>, edges: Vec<PolymatrixEdge>) -> Result<Self, GameError> {
        let n = actions.len();
        if n == 0 || actions.contains(&0) {
            return Err(GameError::Invalid("every player needs at least one action".into()));
        }
        let mut outgoing = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            if e.from >= n || e.to >= n || e.from == e.to {
                return Err(GameError::Invalid(format!("edge {k} ({} -> {}) is not a valid pair", e.from, e.to)));
            }
            let (r, c) = (actions[e.from], actions[e.to]);
            if e.matrix.len() != r || e.matrix.iter().any(|row| row.len() != c) {
                return Err(GameError::Invalid(format!("edge {k}: matrix must be {r}x{c}")));
            }
            if e.matrix.iter().flatten().any(|v| !v.is_finite()) {
                return Err(GameError::Invalid(format!("edge {k}: non-finite entry")));
            }
            outgoing[e.from].push(k);
        }
        let scale = 1.0 / n as f64;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for out in &outgoing {
            let (mut l, mut h) = (0.0, 0.0);
            for &k in out {
                let m = edges[k].matrix.iter().flatten();
                l += m.clone().copied().fold(f64::INFINITY, f64::min) * scale;
                h += m.copied().fold(f64::NEG_INFINITY, f64::max) * scale;
            }
            lo = lo.min(l);
            hi = hi.max(h);
        }
        let range = UtilityRange { min: lo, max: hi };
        range.warn_if_outside_unit("polymatrix game");
        Ok(PolymatrixGame { actions, edges, outgoing, range })
    }

    pub fn edges(&self) -> &[PolymatrixEdge] {
        &self.edges
    }

    /// Largest spectral norm over the edge matrices.
    pub fn max_spectral_norm(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| {
                let m = DMatrix::from_fn(e.matrix.len(), e.matrix[0].len(), |r, c| e.matrix[r][c]);
                m.singular_values().max()
            })
            .fold(0.0, f64::max)
    }
}

impl Game for PolymatrixGame {
    fn num_players(&self) -> usize {
        self.actions.len()
    }

    fn actions(&self) -> &[usize] {
        &self.actions
    }

    fn utility_vector(&self, player: usize, x: &MixedProfile) -> Result<Vec<f64>, GameError> {
        check_player(self, player)?;
        x.check_shape(&self.actions)?;
        let scale = 1.0 / self.actions.len() as f64;
        let mut out = vec![0.0; self.actions[player]];
        for &k in &self.outgoing[player] {
            let e = &self.edges[k];
            let y = x.strategy(e.to);
            for (o, row) in out.iter_mut().zip(&e.matrix) {
                *o += scale * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
            }
        }
        Ok(out)
    }

    fn pure_utility(&self, player: usize, profile: &[usize]) -> f64 {
        let scale = 1.0 / self.actions.len() as f64;
        self.outgoing[player]
            .iter()
            .map(|&k| {
                let e = &self.edges[k];
                e.matrix[profile[e.from]][profile[e.to]]
            })
            .sum::<f64>()
            * scale
    }

    fn utility_range(&self) -> UtilityRange {
        self.range
    }

    fn lipschitz_bound(&self) -> f64 {
        self.max_spectral_norm().max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops() {
        let e = PolymatrixEdge { from: 0, to: 0, matrix: vec![vec![1.0]] };
        assert!(PolymatrixGame::new(vec![1, 1], vec![e]).is_err());
    }

    #[test]
    fn spectral_norm_of_identity_is_one() {
        let e = PolymatrixEdge { from: 0, to: 1, matrix: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        let g = PolymatrixGame::new(vec![2, 2], vec![e]).unwrap();
        assert!((g.max_spectral_norm() - 1.0).abs() < 1e-12);
    }
}
