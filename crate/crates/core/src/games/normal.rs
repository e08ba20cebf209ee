use super::{
    cell_count, check_enumerable, check_player, contract_all_but, for_each_profile, pure_welfare, sensitivity, strides,
    Game, GameError, MixedProfile, UtilityRange, DEFAULT_ENUMERATION_CAP,
};

/// Dense tensor game. Utilities are stored per player in row-major order
/// with the last player's action varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame {
    actions: Vec<usize>,
    strides: Vec<usize>,
    utilities: Vec<Vec<f64>>,
    range: UtilityRange,
}

/// Records whether every pure profile has the same welfare.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConstantSumTag {
    pub is_constant_sum: bool,
    /// The common welfare `V` when flagged.
    pub value: Option<f64>,
}

impl NormalFormGame {
    pub fn new(actions: Vec<usize>, utilities: Vec<Vec<f64>>) -> Result<Self, GameError> {
        if actions.is_empty() {
            return Err(GameError::Invalid("a game needs at least one player".into()));
        }
        if let Some(p) = actions.iter().position(|&d| d == 0) {
            return Err(GameError::Invalid(format!("player {p} has no actions")));
        }
        if utilities.len() != actions.len() {
            return Err(GameError::PlayerCount { expected: actions.len(), found: utilities.len() });
        }
        let cells = check_enumerable(&actions, DEFAULT_ENUMERATION_CAP)?;
        for (player, u) in utilities.iter().enumerate() {
            if u.len() != cells {
                return Err(GameError::DimensionMismatch { player, expected: cells, found: u.len() });
            }
            if let Some(index) = u.iter().position(|v| !v.is_finite()) {
                return Err(GameError::NonFinite { player, index });
            }
        }
        let range = UtilityRange::of(utilities.iter().flatten().copied());
        range.warn_if_outside_unit("normal-form game");
        Ok(NormalFormGame { strides: strides(&actions), actions, utilities, range })
    }

    /// Builds the tensor by evaluating `f(player, profile)` on every pure profile.
    pub fn from_fn(actions: &[usize], mut f: impl FnMut(usize, &[usize]) -> f64) -> Result<Self, GameError> {
        let cells = check_enumerable(actions, DEFAULT_ENUMERATION_CAP)?;
        let n = actions.len();
        let mut utilities = vec![Vec::with_capacity(cells); n];
        for_each_profile(actions, |_, a| {
            for (i, u) in utilities.iter_mut().enumerate() {
                u.push(f(i, a));
            }
        });
        Self::new(actions.to_vec(), utilities)
    }

    /// Two-player game from row-player matrix `a` and column-player matrix `b`.
    pub fn bimatrix(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<Self, GameError> {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let shape_ok = |m: &[Vec<f64>]| m.len() == rows && m.iter().all(|r| r.len() == cols);
        if !shape_ok(a) || !shape_ok(b) {
            return Err(GameError::Invalid("bimatrix payoff matrices must share a rectangular shape".into()));
        }
        Self::new(vec![rows, cols], vec![a.concat(), b.concat()])
    }

    pub fn num_profiles(&self) -> usize {
        self.utilities[0].len()
    }

    /// Flat utility tensor of one player.
    pub fn utilities(&self, player: usize) -> &[f64] {
        &self.utilities[player]
    }

    pub fn joint_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn profile_of(&self, mut index: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let a = index / s;
                index %= s;
                a
            })
            .collect()
    }

    /// Row-player and column-player matrices of a two-player game.
    pub fn bimatrix_parts(&self) -> Option<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        if self.actions.len() != 2 {
            return None;
        }
        let cols = self.actions[1];
        let split = |u: &[f64]| u.chunks(cols).map(<[f64]>::to_vec).collect::<Vec<_>>();
        Some((split(&self.utilities[0]), split(&self.utilities[1])))
    }

    pub fn constant_sum(&self) -> ConstantSumTag {
        let mut first = None;
        let mut constant = true;
        for_each_profile(&self.actions, |_, a| {
            let sw = pure_welfare(self, a);
            match first {
                None => first = Some(sw),
                Some(v) if (sw - v).abs() > 1e-9 => constant = false,
                _ => {}
            }
        });
        ConstantSumTag { is_constant_sum: constant, value: first.filter(|_| constant) }
    }

    /// Subgame keeping the listed actions (original indices, in order) of each player.
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Result<Self, GameError> {
        if keep.len() != self.actions.len() {
            return Err(GameError::PlayerCount { expected: self.actions.len(), found: keep.len() });
        }
        for (player, k) in keep.iter().enumerate() {
            if let Some(&a) = k.iter().find(|&&a| a >= self.actions[player]) {
                return Err(GameError::ActionOutOfRange { player, action: a, count: self.actions[player] });
            }
        }
        let dims: Vec<usize> = keep.iter().map(Vec::len).collect();
        let mut orig = vec![0; dims.len()];
        Self::from_fn(&dims, |i, a| {
            for (o, (k, &ai)) in orig.iter_mut().zip(keep.iter().zip(a)) {
                *o = k[ai];
            }
            self.utilities[i][self.joint_index(&orig)]
        })
    }

    fn max_actions(&self) -> usize {
        self.actions.iter().copied().max().unwrap_or(1)
    }
}

impl Game for NormalFormGame {
    fn num_players(&self) -> usize {
        self.actions.len()
    }

    fn actions(&self) -> &[usize] {
        &self.actions
    }

    fn utility_vector(&self, player: usize, x: &MixedProfile) -> Result<Vec<f64>, GameError> {
        check_player(self, player)?;
        x.check_shape(&self.actions)?;
        let weights: Vec<&[f64]> = x.strategies().collect();
        Ok(contract_all_but(&self.utilities[player], &self.actions, player, &weights))
    }

    fn pure_utility(&self, player: usize, profile: &[usize]) -> f64 {
        debug_assert_eq!(profile.len(), self.actions.len());
        self.utilities[player][self.joint_index(profile)]
    }

    fn utility_range(&self) -> UtilityRange {
        self.range
    }

    fn lipschitz_bound(&self) -> f64 {
        let n = self.actions.len() as f64;
        let a = self.max_actions() as f64;
        let general = n * a * self.range.abs_max();
        // The sensitivity-aware bound needs a full pass over the tensor; skip it when huge.
        let sensitive = if cell_count(&self.actions).is_some_and(|c| c <= 1 << 20) {
            sensitivity(self).map_or(f64::INFINITY, |eps| eps * n * a)
        } else {
            f64::INFINITY
        };
        general.min(sensitive).max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn joint_index_roundtrip() {
        let g = NormalFormGame::from_fn(&[2, 3, 2], |_, _| 0.0).unwrap();
        for idx in 0..g.num_profiles() {
            assert_eq!(g.joint_index(&g.profile_of(idx)), idx);
        }
    }

    #[test]
    fn restrict_keeps_selected_cells() {
        let g = NormalFormGame::bimatrix(
            &[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]],
            &[vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]],
        )
        .unwrap();
        let r = g.restrict(&[vec![1], vec![0, 2]]).unwrap();
        assert_eq!(r.actions(), &[1, 2]);
        assert_eq!(r.utilities(0), &[4.0, 6.0]);
    }

    #[test]
    fn rejects_wrong_tensor_size() {
        let err = NormalFormGame::new(vec![2, 2], vec![vec![0.0; 4], vec![0.0; 3]]).unwrap_err();
        assert!(matches!(err, GameError::DimensionMismatch { player: 1, .. }));
    }
}
