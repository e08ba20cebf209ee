use super::{check_player, contract_all_but, strides, Game, GameError, MixedProfile, UtilityRange};

/// Game where player `i`'s utility depends only on its own action and its neighborhood `N_i`.
///
/// The local table of player `i` is indexed over `A_i × Π_{j ∈ N_i} A_j`, row-major,
/// own action slowest and neighbors in the listed order.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphicalGame {
    actions: Vec<usize>,
    degree: usize,
    neighborhoods: Vec<Vec<usize>>,
    tables: Vec<Vec<f64>>,
    local_dims: Vec<Vec<usize>>,
    range: UtilityRange,
}

impl GraphicalGame {
    pub fn new(
        actions: Vec<usize>,
        degree: usize,
        neighborhoods: Vec<Vec<usize>>,
        tables: Vec<Vec<f64>>,
    ) -> Result<Self, GameError> {
        let n = actions.len();
        if n == 0 || actions.contains(&0) {
            return Err(GameError::Invalid("every player needs at least one action".into()));
        }
        if neighborhoods.len() != n || tables.len() != n {
            return Err(GameError::PlayerCount { expected: n, found: neighborhoods.len().min(tables.len()) });
        }
        let mut influence = vec![0usize; n];
        let mut local_dims = Vec::with_capacity(n);
        for (i, nb) in neighborhoods.iter().enumerate() {
            if nb.len() > degree {
                return Err(GameError::Invalid(format!("player {i}: |N_i| = {} exceeds degree {degree}", nb.len())));
            }
            let mut seen = vec![false; n];
            for &j in nb {
                if j >= n || j == i || seen[j] {
                    return Err(GameError::Invalid(format!("player {i}: bad neighbor {j}")));
                }
                seen[j] = true;
                influence[j] += 1;
            }
            let dims: Vec<usize> = std::iter::once(actions[i]).chain(nb.iter().map(|&j| actions[j])).collect();
            let cells: usize = dims.iter().product();
            if tables[i].len() != cells {
                return Err(GameError::DimensionMismatch { player: i, expected: cells, found: tables[i].len() });
            }
            if let Some(index) = tables[i].iter().position(|v| !v.is_finite()) {
                return Err(GameError::NonFinite { player: i, index });
            }
            local_dims.push(dims);
        }
        if let Some(j) = influence.iter().position(|&c| c > degree) {
            return Err(GameError::Invalid(format!(
                "player {j} influences {} players, exceeding degree {degree}",
                influence[j]
            )));
        }
        let range = UtilityRange::of(tables.iter().flatten().copied());
        range.warn_if_outside_unit("graphical game");
        Ok(GraphicalGame { actions, degree, neighborhoods, tables, local_dims, range })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn neighborhood(&self, player: usize) -> &[usize] {
        &self.neighborhoods[player]
    }

    pub fn table(&self, player: usize) -> &[f64] {
        &self.tables[player]
    }
}

impl Game for GraphicalGame {
    fn num_players(&self) -> usize {
        self.actions.len()
    }

    fn actions(&self) -> &[usize] {
        &self.actions
    }

    fn utility_vector(&self, player: usize, x: &MixedProfile) -> Result<Vec<f64>, GameError> {
        check_player(self, player)?;
        x.check_shape(&self.actions)?;
        let weights: Vec<&[f64]> = std::iter::once(&[][..])
            .chain(self.neighborhoods[player].iter().map(|&j| x.strategy(j)))
            .collect();
        Ok(contract_all_but(&self.tables[player], &self.local_dims[player], 0, &weights))
    }

    fn pure_utility(&self, player: usize, profile: &[usize]) -> f64 {
        let dims = &self.local_dims[player];
        let st = strides(dims);
        let mut idx = profile[player] * st[0];
        for (k, &j) in self.neighborhoods[player].iter().enumerate() {
            idx += profile[j] * st[k + 1];
        }
        self.tables[player][idx]
    }

    fn utility_range(&self) -> UtilityRange {
        self.range
    }

    fn lipschitz_bound(&self) -> f64 {
        let n = self.actions.len() as f64;
        let a = self.actions.iter().copied().max().unwrap_or(1) as f64;
        let d = self.degree.min(self.actions.len().saturating_sub(1)) as f64;
        (d.min(n) * a * self.range.abs_max()).max(1.0)
    }
}
