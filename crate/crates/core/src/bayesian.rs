//! Finite Bayesian games with independent uniform type priors and their agent form.

use serde::Serialize;

use crate::games::{
    cell_count, check_enumerable, contract_all_but, dot, for_each_profile, strides, GameError, MixedProfile,
    NormalFormGame, DEFAULT_ENUMERATION_CAP,
};

/// Player `i` draws a type `v_i` uniformly from `0..|V_i|`, independently.
///
/// `utilities[i]` is indexed by `(own type, joint action)`, own type slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianGame {
    actions: Vec<usize>,
    types: Vec<usize>,
    cells: usize,
    utilities: Vec<Vec<f64>>,
    revenue: Option<Vec<f64>>,
}

impl BayesianGame {
    pub fn new(
        actions: Vec<usize>,
        types: Vec<usize>,
        utilities: Vec<Vec<f64>>,
        revenue: Option<Vec<f64>>,
    ) -> Result<Self, GameError> {
        let n = actions.len();
        if n == 0 || actions.contains(&0) || types.contains(&0) {
            return Err(GameError::Invalid("players need at least one action and one type".into()));
        }
        if types.len() != n || utilities.len() != n {
            return Err(GameError::PlayerCount { expected: n, found: types.len().min(utilities.len()) });
        }
        let cells = check_enumerable(&actions, DEFAULT_ENUMERATION_CAP)?;
        for (i, u) in utilities.iter().enumerate() {
            let expected = types[i] * cells;
            if u.len() != expected {
                return Err(GameError::DimensionMismatch { player: i, expected, found: u.len() });
            }
            if let Some(index) = u.iter().position(|v| !v.is_finite() || *v < 0.0) {
                return Err(GameError::Invalid(format!("player {i}: utility at {index} must be finite and ≥ 0")));
            }
        }
        if let Some(r) = &revenue {
            if r.len() != cells || r.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(GameError::Invalid("revenue must hold one finite nonnegative value per joint action".into()));
            }
        }
        Ok(BayesianGame { actions, types, cells, utilities, revenue })
    }

    /// Non-uniform rational priors: type `v` of player `i` with weight `w[i][v]` is repeated `w[i][v]` times.
    /// Returns the game and, per player, the original type of every duplicated type.
    pub fn with_integer_prior(
        actions: Vec<usize>,
        weights: &[Vec<u32>],
        utilities: Vec<Vec<f64>>,
        revenue: Option<Vec<f64>>,
    ) -> Result<(Self, Vec<Vec<usize>>), GameError> {
        let cells = check_enumerable(&actions, DEFAULT_ENUMERATION_CAP)?;
        if weights.len() != actions.len() || utilities.len() != actions.len() {
            return Err(GameError::PlayerCount { expected: actions.len(), found: weights.len() });
        }
        let mut types = Vec::new();
        let mut expanded = Vec::new();
        let mut origin = Vec::new();
        for (i, (w, u)) in weights.iter().zip(&utilities).enumerate() {
            if u.len() != w.len() * cells {
                return Err(GameError::DimensionMismatch { player: i, expected: w.len() * cells, found: u.len() });
            }
            let mut map = Vec::new();
            let mut table = Vec::new();
            for (v, &k) in w.iter().enumerate() {
                for _ in 0..k {
                    map.push(v);
                    table.extend_from_slice(&u[v * cells..(v + 1) * cells]);
                }
            }
            types.push(map.len());
            expanded.push(table);
            origin.push(map);
        }
        Ok((Self::new(actions, types, expanded, revenue)?, origin))
    }

    pub fn num_players(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn types(&self) -> &[usize] {
        &self.types
    }

    pub fn revenue(&self) -> Option<&[f64]> {
        self.revenue.as_deref()
    }

    /// `u_i(a; v_i)` as a flat joint-action table.
    pub fn table(&self, player: usize, own_type: usize) -> &[f64] {
        &self.utilities[player][own_type * self.cells..(own_type + 1) * self.cells]
    }

    pub fn num_agents(&self) -> usize {
        self.types.iter().sum()
    }

    /// Index of agent `(i, v)` in the agent form.
    pub fn agent_index(&self, player: usize, own_type: usize) -> usize {
        self.types[..player].iter().sum::<usize>() + own_type
    }

    fn joint_index(&self, a: &[usize]) -> usize {
        a.iter().zip(strides(&self.actions)).map(|(x, s)| x * s).sum()
    }
}

/// Per player, per type, a mixed strategy over that player's actions.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesStrategy {
    strategies: Vec<Vec<Vec<f64>>>,
}

impl BayesStrategy {
    pub fn new(bg: &BayesianGame, strategies: Vec<Vec<Vec<f64>>>) -> Result<Self, GameError> {
        if strategies.len() != bg.num_players() {
            return Err(GameError::PlayerCount { expected: bg.num_players(), found: strategies.len() });
        }
        for (i, per_type) in strategies.iter().enumerate() {
            if per_type.len() != bg.types[i] {
                return Err(GameError::DimensionMismatch { player: i, expected: bg.types[i], found: per_type.len() });
            }
            let dims = vec![bg.actions[i]; per_type.len()];
            MixedProfile::new(per_type.clone())
                .and_then(|p| p.check_shape(&dims))
                .map_err(|e| GameError::InvalidStrategy { player: i, reason: e.to_string() })?;
        }
        Ok(BayesStrategy { strategies })
    }

    pub fn uniform(bg: &BayesianGame) -> Self {
        let strategies = (0..bg.num_players())
            .map(|i| vec![vec![1.0 / bg.actions[i] as f64; bg.actions[i]]; bg.types[i]])
            .collect();
        BayesStrategy { strategies }
    }

    /// Reads the agent-form profile back into per-type strategies.
    pub fn from_agent_profile(bg: &BayesianGame, x: &MixedProfile) -> Result<Self, GameError> {
        x.check_shape(&agent_actions(bg))?;
        let strategies = (0..bg.num_players())
            .map(|i| (0..bg.types[i]).map(|v| x.strategy(bg.agent_index(i, v)).to_vec()).collect())
            .collect();
        Ok(BayesStrategy { strategies })
    }

    pub fn get(&self, player: usize, own_type: usize) -> &[f64] {
        &self.strategies[player][own_type]
    }
}

fn agent_actions(bg: &BayesianGame) -> Vec<usize> {
    (0..bg.num_players()).flat_map(|i| std::iter::repeat_n(bg.actions[i], bg.types[i])).collect()
}

/// Flattens a Bayesian strategy into an agent-form profile.
pub fn agent_profile(bg: &BayesianGame, s: &BayesStrategy) -> MixedProfile {
    MixedProfile::from_flat(&agent_actions(bg), s.strategies.iter().flatten().flatten().copied().collect())
}

/// One agent per `(i, v_i)` with utility `(1/|V_i|) E_{v_{-i}}[u_i(a(v); v_i)]`.
pub fn agent_form(bg: &BayesianGame) -> Result<NormalFormGame, GameError> {
    let dims = agent_actions(bg);
    check_enumerable(&dims, DEFAULT_ENUMERATION_CAP)?;
    let n = bg.num_players();
    let others: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).map(|j| if j == i { 1 } else { bg.types[j] }).collect()).collect();
    let weight = 1.0 / bg.types.iter().product::<usize>() as f64;
    let mut a = vec![0usize; n];
    NormalFormGame::from_fn(&dims, |agent, alpha| {
        let (i, v) = locate(bg, agent);
        let mut total = 0.0;
        for_each_profile(&others[i], |_, vt| {
            for j in 0..n {
                let vj = if j == i { v } else { vt[j] };
                a[j] = alpha[bg.agent_index(j, vj)];
            }
            total += bg.table(i, v)[bg.joint_index(&a)];
        });
        total * weight
    })
}

fn locate(bg: &BayesianGame, agent: usize) -> (usize, usize) {
    let mut rest = agent;
    for (i, &t) in bg.types.iter().enumerate() {
        if rest < t {
            return (i, rest);
        }
        rest -= t;
    }
    unreachable!("agent index out of range")
}

/// Interim gaps `max_{a'} E_{v_{-i}}[u_i(a', x_{-i}(v_{-i}); v_i)] − E_{v_{-i}}[u_i(x(v); v_i)]` for every `(i, v_i)`.
pub fn bne_gap(bg: &BayesianGame, s: &BayesStrategy) -> Result<Vec<Vec<f64>>, GameError> {
    let n = bg.num_players();
    if cell_count(&bg.types).is_none() {
        return Err(GameError::EnumerationTooLarge { cells: "overflow".into(), cap: DEFAULT_ENUMERATION_CAP });
    }
    let mut gaps = Vec::with_capacity(n);
    for i in 0..n {
        let others: Vec<usize> = (0..n).map(|j| if j == i { 1 } else { bg.types[j] }).collect();
        let count = others.iter().product::<usize>() as f64;
        let mut row = Vec::with_capacity(bg.types[i]);
        for v in 0..bg.types[i] {
            let mut vec = vec![0.0; bg.actions[i]];
            for_each_profile(&others, |_, vt| {
                let weights: Vec<&[f64]> =
                    (0..n).map(|j| if j == i { s.get(i, v) } else { s.get(j, vt[j]) }).collect();
                let u = contract_all_but(bg.table(i, v), &bg.actions, i, &weights);
                vec.iter_mut().zip(&u).for_each(|(acc, x)| *acc += x / count);
            });
            let best = vec.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            row.push((best - dot(s.get(i, v), &vec)).max(0.0));
        }
        gaps.push(row);
    }
    Ok(gaps)
}

/// `E_v[Σ_i u_i(x(v); v_i) + R(x(v))]`.
pub fn expected_welfare(bg: &BayesianGame, s: &BayesStrategy) -> f64 {
    let n = bg.num_players();
    let count = bg.types.iter().product::<usize>() as f64;
    let mut total = 0.0;
    for_each_profile(&bg.types, |_, v| {
        for_each_profile(&bg.actions, |idx, a| {
            let p: f64 = (0..n).map(|j| s.get(j, v[j])[a[j]]).product();
            if p == 0.0 {
                return;
            }
            let mut w: f64 = (0..n).map(|i| bg.table(i, v[i])[idx]).sum();
            if let Some(r) = &bg.revenue {
                w += r[idx];
            }
            total += p * w / count;
        });
    });
    total
}

/// Mechanism smoothness parameters with both efficiency ratios kept apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MechanismCertificate {
    pub lambda: f64,
    pub mu: f64,
    /// `λ / max(1, μ)`, the mechanism convention.
    pub rho_mechanism: f64,
    /// `λ / (1 + μ)`, the game convention.
    pub rho_game: f64,
}

impl MechanismCertificate {
    pub fn new(lambda: f64, mu: f64) -> Self {
        MechanismCertificate { lambda, mu, rho_mechanism: lambda / mu.max(1.0), rho_game: lambda / (1.0 + mu) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::Game;

    fn two_type_game() -> BayesianGame {
        // Player 0 has two types, player 1 one; 2 actions each.
        BayesianGame::new(
            vec![2, 2],
            vec![2, 1],
            vec![vec![1.0, 0.0, 0.0, 1.0, 0.0, 2.0, 2.0, 0.0], vec![0.5, 0.5, 1.0, 0.0]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn two_types_halve_utilities() {
        let bg = two_type_game();
        let af = agent_form(&bg).unwrap();
        assert_eq!(af.actions(), &[2, 2, 2]);
        // Agent (0, 0) at its own action 0 against player 1's action 1.
        assert_eq!(af.pure_utility(0, &[0, 1, 1]), 0.0);
        assert_eq!(af.pure_utility(0, &[1, 0, 1]), 0.5);
        assert_eq!(af.pure_utility(1, &[0, 0, 1]), 1.0);
    }

    #[test]
    fn negative_utilities_rejected() {
        let err = BayesianGame::new(vec![1], vec![1], vec![vec![-1.0]], None).unwrap_err();
        assert!(err.to_string().contains("≥ 0"));
    }

    #[test]
    fn integer_prior_duplicates_types() {
        let (bg, origin) =
            BayesianGame::with_integer_prior(vec![1, 1], &[vec![2, 1], vec![1]], vec![vec![1.0, 3.0], vec![0.0]], None)
                .unwrap();
        assert_eq!(bg.types(), &[3, 1]);
        assert_eq!(origin[0], vec![0, 0, 1]);
        // Expected utility of player 0 is the weighted mean (2·1 + 1·3)/3.
        let s = BayesStrategy::uniform(&bg);
        assert!((expected_welfare(&bg, &s) - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn certificate_keeps_both_ratios() {
        let c = MechanismCertificate::new(0.5, 2.0);
        assert_eq!(c.rho_mechanism, 0.25);
        assert!((c.rho_game - 0.5 / 3.0).abs() < 1e-15);
    }
}
