//! Game representations and the multilinear operator `F`.
//!
//! Every backing implements [`Game`]: a map from a mixed profile to each
//! player's vector of expected action utilities.

mod builtin;
mod construct;
mod graphical;
mod io;
mod normal;
mod polymatrix;
mod profile;
mod tensor;

pub use builtin::{builtin, builtin_names, Builtin, BARMAN_DEMO_K};
pub use construct::{
    barman_augment, eliminate_dominated, random_constant_sum_bimatrix, random_game, random_graphical,
    random_polymatrix, Elimination, Removal,
};
pub use graphical::GraphicalGame;
pub use io::{load_game, parse_game, AnyGame, GameFile, Parsed};
pub use normal::{ConstantSumTag, NormalFormGame};
pub use polymatrix::{PolymatrixEdge, PolymatrixGame};
pub use profile::MixedProfile;
pub use tensor::for_each_profile;

pub(crate) use tensor::{cell_count, contract_all_but, strides};

/// Default cap on the number of joint pure profiles any enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000_000;

/// Tolerance used when collecting tied welfare maximizers.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("player {player}: expected {expected} entries, found {found}")]
    DimensionMismatch { player: usize, expected: usize, found: usize },
    #[error("expected {expected} players, found {found}")]
    PlayerCount { expected: usize, found: usize },
    #[error("player {player}: action {action} out of range (has {count})")]
    ActionOutOfRange { player: usize, action: usize, count: usize },
    #[error("player {player}: invalid mixed strategy ({reason})")]
    InvalidStrategy { player: usize, reason: String },
    #[error("enumeration too large: {cells} joint profiles exceed the cap of {cap}")]
    EnumerationTooLarge { cells: String, cap: usize },
    #[error("player {player}: non-finite utility at index {index}")]
    NonFinite { player: usize, index: usize },
    #[error("invalid game: {0}")]
    Invalid(String),
    #[error("augmentation parameter eps = {eps} outside [{lo}, {hi}]")]
    AugmentParameter { eps: f64, lo: f64, hi: f64 },
    #[error("unknown builtin game `{0}`")]
    UnknownBuiltin(String),
    #[error("malformed game file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("reading game file: {0}")]
    Io(#[from] std::io::Error),
}

/// Smallest and largest utility value a game can produce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityRange {
    pub min: f64,
    pub max: f64,
}

impl UtilityRange {
    pub fn abs_max(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub(crate) fn of(values: impl IntoIterator<Item = f64>) -> Self {
        values.into_iter().fold(
            UtilityRange { min: f64::INFINITY, max: f64::NEG_INFINITY },
            |r, v| UtilityRange { min: r.min.min(v), max: r.max.max(v) },
        )
    }

    pub(crate) fn warn_if_outside_unit(&self, what: &str) {
        if self.min < -1.0 || self.max > 1.0 {
            log::warn!("{what}: utilities span [{}, {}], outside [-1, 1]", self.min, self.max);
        }
    }
}

/// A multilinear game over products of simplices.
pub trait Game: Send + Sync {
    fn num_players(&self) -> usize;

    /// Action counts `|A_i|`.
    fn actions(&self) -> &[usize];

    /// Expected utility of each action of `player` against the opponents in `x`.
    /// The player's own strategy in `x` is ignored.
    fn utility_vector(&self, player: usize, x: &MixedProfile) -> Result<Vec<f64>, GameError>;

    /// Utility of `player` at a joint pure profile (no bounds checking beyond debug asserts).
    fn pure_utility(&self, player: usize, profile: &[usize]) -> f64;

    fn utility_range(&self) -> UtilityRange;

    /// Lipschitz constant of `F` in the Euclidean norm, clamped below by 1.
    fn lipschitz_bound(&self) -> f64;
}

pub(crate) fn check_player<G: Game + ?Sized>(game: &G, player: usize) -> Result<(), GameError> {
    if player >= game.num_players() {
        return Err(GameError::PlayerCount { expected: game.num_players(), found: player + 1 });
    }
    Ok(())
}

/// Errors unless the joint profile count fits under `cap`.
pub fn check_enumerable(actions: &[usize], cap: usize) -> Result<usize, GameError> {
    match cell_count(actions) {
        Some(c) if c <= cap => Ok(c),
        Some(c) => Err(GameError::EnumerationTooLarge { cells: c.to_string(), cap }),
        None => Err(GameError::EnumerationTooLarge { cells: "overflow".into(), cap }),
    }
}

/// Stacked operator `F(x) = (u_1(x_{-1}), …, u_n(x_{-n}))`.
pub fn game_operator<G: Game + ?Sized>(game: &G, x: &MixedProfile) -> Result<Vec<Vec<f64>>, GameError> {
    (0..game.num_players()).map(|i| game.utility_vector(i, x)).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `u_i(x) = ⟨x_i, u_i(x_{-i})⟩`.
pub fn expected_utility<G: Game + ?Sized>(game: &G, player: usize, x: &MixedProfile) -> Result<f64, GameError> {
    Ok(dot(x.strategy(player), &game.utility_vector(player, x)?))
}

pub fn social_welfare<G: Game + ?Sized>(game: &G, x: &MixedProfile) -> Result<f64, GameError> {
    (0..game.num_players()).map(|i| expected_utility(game, i, x)).sum()
}

pub fn pure_welfare<G: Game + ?Sized>(game: &G, profile: &[usize]) -> f64 {
    (0..game.num_players()).map(|i| game.pure_utility(i, profile)).sum()
}

/// `OPT` and every pure maximizer, in lexicographic order.
pub fn optimal_welfare<G: Game + ?Sized>(game: &G) -> Result<(f64, Vec<Vec<usize>>), GameError> {
    optimal_welfare_with_cap(game, DEFAULT_ENUMERATION_CAP)
}

pub fn optimal_welfare_with_cap<G: Game + ?Sized>(
    game: &G,
    cap: usize,
) -> Result<(f64, Vec<Vec<usize>>), GameError> {
    check_enumerable(game.actions(), cap)?;
    let mut best = f64::NEG_INFINITY;
    let mut argmax: Vec<Vec<usize>> = Vec::new();
    for_each_profile(game.actions(), |_, a| {
        let sw = pure_welfare(game, a);
        if sw > best + TIE_TOL {
            best = sw;
            argmax.clear();
            argmax.push(a.to_vec());
        } else if (sw - best).abs() <= TIE_TOL {
            argmax.push(a.to_vec());
        }
    });
    Ok((best, argmax))
}

/// Strategic sensitivity: the largest change in any player's utility caused by
/// a unilateral pure deviation of some other player.
pub fn sensitivity<G: Game + ?Sized>(game: &G) -> Result<f64, GameError> {
    sensitivity_with_cap(game, DEFAULT_ENUMERATION_CAP)
}

pub fn sensitivity_with_cap<G: Game + ?Sized>(game: &G, cap: usize) -> Result<f64, GameError> {
    let actions = game.actions();
    let n = actions.len();
    check_enumerable(actions, cap)?;
    let mut eps: f64 = 0.0;
    let mut dev = Vec::new();
    for_each_profile(actions, |_, a| {
        for j in 0..n {
            dev.clear();
            dev.extend_from_slice(a);
            for b in 0..actions[j] {
                if b == a[j] {
                    continue;
                }
                dev[j] = b;
                for i in (0..n).filter(|&i| i != j) {
                    eps = eps.max((game.pure_utility(i, &dev) - game.pure_utility(i, a)).abs());
                }
            }
        }
    });
    Ok(eps)
}

/// Dense expansion of any game.
pub fn to_normal_form<G: Game + ?Sized>(game: &G) -> Result<NormalFormGame, GameError> {
    check_enumerable(game.actions(), DEFAULT_ENUMERATION_CAP)?;
    NormalFormGame::from_fn(game.actions(), |i, a| game.pure_utility(i, a))
}

/// Largest `‖u_i(x_{-i})‖₂` bound per player, `√|A_i|·max|u|`.
pub fn utility_norm_bounds<G: Game + ?Sized>(game: &G) -> Vec<f64> {
    let scale = game.utility_range().abs_max();
    game.actions().iter().map(|&d| (d as f64).sqrt() * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_player_game_has_zero_sensitivity() {
        let g = NormalFormGame::new(vec![3], vec![vec![0.1, 0.5, 0.2]]).unwrap();
        assert_eq!(sensitivity(&g).unwrap(), 0.0);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let g = NormalFormGame::new(vec![2, 2], vec![vec![0.0; 4], vec![0.0; 4]]).unwrap();
        let err = optimal_welfare_with_cap(&g, 3).unwrap_err();
        assert!(err.to_string().contains("enumeration too large"));
    }
}
