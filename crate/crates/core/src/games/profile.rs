use super::GameError;

const SUM_TOL: f64 = 1e-9;
const NEG_TOL: f64 = -1e-12;

/// One mixed strategy per player, stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile {
    data: Vec<f64>,
    offsets: Vec<usize>,
}

impl MixedProfile {
    /// Validates every strategy against the simplex (sum within 1e-9, entries ≥ −1e-12).
    pub fn new(strategies: Vec<Vec<f64>>) -> Result<Self, GameError> {
        for (player, s) in strategies.iter().enumerate() {
            check_simplex(player, s)?;
        }
        let dims: Vec<usize> = strategies.iter().map(Vec::len).collect();
        let data = strategies.into_iter().flatten().collect();
        Ok(Self::from_flat(&dims, data))
    }

    pub fn uniform(actions: &[usize]) -> Self {
        let data = actions
            .iter()
            .flat_map(|&d| std::iter::repeat_n(1.0 / d as f64, d))
            .collect();
        Self::from_flat(actions, data)
    }

    /// Point masses on the given pure profile.
    pub fn pure(actions: &[usize], profile: &[usize]) -> Result<Self, GameError> {
        if actions.len() != profile.len() {
            return Err(GameError::PlayerCount {
                expected: actions.len(),
                found: profile.len(),
            });
        }
        let mut strategies = Vec::with_capacity(actions.len());
        for (player, (&d, &a)) in actions.iter().zip(profile).enumerate() {
            if a >= d {
                return Err(GameError::ActionOutOfRange { player, action: a, count: d });
            }
            let mut s = vec![0.0; d];
            s[a] = 1.0;
            strategies.push(s);
        }
        Ok(Self::from_flat(actions, strategies.concat()))
    }

    /// Builds a profile from already-validated flat data.
    pub(crate) fn from_flat(dims: &[usize], data: Vec<f64>) -> Self {
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        offsets.push(0);
        for d in dims {
            offsets.push(offsets.last().unwrap() + d);
        }
        debug_assert_eq!(*offsets.last().unwrap(), data.len());
        MixedProfile { data, offsets }
    }

    pub fn num_players(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn strategy(&self, player: usize) -> &[f64] {
        &self.data[self.offsets[player]..self.offsets[player + 1]]
    }

    pub fn strategies(&self) -> impl Iterator<Item = &[f64]> {
        self.offsets.windows(2).map(move |w| &self.data[w[0]..w[1]])
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Replaces one player's strategy, validating it.
    pub fn with_strategy(&self, player: usize, s: &[f64]) -> Result<Self, GameError> {
        let expected = self.offsets[player + 1] - self.offsets[player];
        if s.len() != expected {
            return Err(GameError::DimensionMismatch { player, expected, found: s.len() });
        }
        check_simplex(player, s)?;
        let mut out = self.clone();
        out.data[self.offsets[player]..self.offsets[player + 1]].copy_from_slice(s);
        Ok(out)
    }

    pub(crate) fn set_strategy_unchecked(&mut self, player: usize, s: &[f64]) {
        self.data[self.offsets[player]..self.offsets[player + 1]].copy_from_slice(s);
    }

    /// Euclidean distance on the product space.
    pub fn distance(&self, other: &MixedProfile) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Errors unless the profile has exactly these per-player dimensions.
    pub fn check_shape(&self, actions: &[usize]) -> Result<(), GameError> {
        if self.num_players() != actions.len() {
            return Err(GameError::PlayerCount {
                expected: actions.len(),
                found: self.num_players(),
            });
        }
        for (player, &d) in actions.iter().enumerate() {
            let found = self.offsets[player + 1] - self.offsets[player];
            if found != d {
                return Err(GameError::DimensionMismatch { player, expected: d, found });
            }
        }
        Ok(())
    }
}

fn check_simplex(player: usize, s: &[f64]) -> Result<(), GameError> {
    if s.is_empty() {
        return Err(GameError::InvalidStrategy { player, reason: "empty".into() });
    }
    if let Some(v) = s.iter().find(|v| !v.is_finite() || **v < NEG_TOL) {
        return Err(GameError::InvalidStrategy {
            player,
            reason: format!("entry {v} is negative or not finite"),
        });
    }
    let sum: f64 = s.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(GameError::InvalidStrategy { player, reason: format!("entries sum to {sum}") });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sum() {
        let err = MixedProfile::new(vec![vec![0.5, 0.5], vec![0.7, 0.7]]).unwrap_err();
        assert!(matches!(err, GameError::InvalidStrategy { player: 1, .. }));
    }

    #[test]
    fn shape_check_names_player() {
        let x = MixedProfile::uniform(&[2, 3]);
        let err = x.check_shape(&[2, 2]).unwrap_err();
        assert!(matches!(err, GameError::DimensionMismatch { player: 1, expected: 2, found: 3 }));
    }

    #[test]
    fn pure_profile_is_point_mass() {
        let x = MixedProfile::pure(&[2, 3], &[1, 2]).unwrap();
        assert_eq!(x.strategy(0), &[0.0, 1.0]);
        assert_eq!(x.strategy(1), &[0.0, 0.0, 1.0]);
    }
}
