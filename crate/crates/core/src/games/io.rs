use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Game, GameError, GraphicalGame, MixedProfile, NormalFormGame, PolymatrixEdge, PolymatrixGame, UtilityRange};
use crate::bayesian::BayesianGame;

/// On-disk game description. `kind` defaults to normal form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GameFile {
    #[serde(alias = "normal-form")]
    Normal { players: usize, actions: Vec<usize>, utilities: Vec<Vec<f64>> },
    Polymatrix { players: usize, actions: Vec<usize>, edges: Vec<PolymatrixEdge> },
    Graphical {
        players: usize,
        actions: Vec<usize>,
        degree: usize,
        neighborhoods: Vec<Vec<usize>>,
        tables: Vec<Vec<f64>>,
    },
    Bayesian {
        players: usize,
        actions: Vec<usize>,
        types: Vec<usize>,
        utilities: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        revenue: Option<Vec<f64>>,
    },
}

/// Any complete-information backing.
#[derive(Debug, Clone)]
pub enum AnyGame {
    Normal(NormalFormGame),
    Polymatrix(PolymatrixGame),
    Graphical(GraphicalGame),
}

macro_rules! delegate {
    ($self:ident, $g:ident => $e:expr) => {
        match $self {
            AnyGame::Normal($g) => $e,
            AnyGame::Polymatrix($g) => $e,
            AnyGame::Graphical($g) => $e,
        }
    };
}

impl Game for AnyGame {
    fn num_players(&self) -> usize {
        delegate!(self, g => g.num_players())
    }
    fn actions(&self) -> &[usize] {
        delegate!(self, g => g.actions())
    }
    fn utility_vector(&self, player: usize, x: &MixedProfile) -> Result<Vec<f64>, GameError> {
        delegate!(self, g => g.utility_vector(player, x))
    }
    fn pure_utility(&self, player: usize, profile: &[usize]) -> f64 {
        delegate!(self, g => g.pure_utility(player, profile))
    }
    fn utility_range(&self) -> UtilityRange {
        delegate!(self, g => g.utility_range())
    }
    fn lipschitz_bound(&self) -> f64 {
        delegate!(self, g => g.lipschitz_bound())
    }
}

impl AnyGame {
    /// Dense form (the identity for normal-form games).
    pub fn to_normal_form(&self) -> Result<NormalFormGame, GameError> {
        match self {
            AnyGame::Normal(g) => Ok(g.clone()),
            other => super::to_normal_form(other),
        }
    }
}

/// Either a complete-information game or a Bayesian game, as read from JSON.
#[derive(Debug, Clone)]
pub enum Parsed {
    Game(AnyGame),
    Bayesian(BayesianGame),
}

fn check_players(players: usize, actions: &[usize]) -> Result<(), GameError> {
    if players != actions.len() {
        return Err(GameError::PlayerCount { expected: players, found: actions.len() });
    }
    Ok(())
}

impl GameFile {
    pub fn build(self) -> Result<Parsed, GameError> {
        Ok(match self {
            GameFile::Normal { players, actions, utilities } => {
                check_players(players, &actions)?;
                Parsed::Game(AnyGame::Normal(NormalFormGame::new(actions, utilities)?))
            }
            GameFile::Polymatrix { players, actions, edges } => {
                check_players(players, &actions)?;
                Parsed::Game(AnyGame::Polymatrix(PolymatrixGame::new(actions, edges)?))
            }
            GameFile::Graphical { players, actions, degree, neighborhoods, tables } => {
                check_players(players, &actions)?;
                Parsed::Game(AnyGame::Graphical(GraphicalGame::new(actions, degree, neighborhoods, tables)?))
            }
            GameFile::Bayesian { players, actions, types, utilities, revenue } => {
                check_players(players, &actions)?;
                Parsed::Bayesian(BayesianGame::new(actions, types, utilities, revenue)?)
            }
        })
    }

    pub fn from_normal(game: &NormalFormGame) -> Self {
        GameFile::Normal {
            players: game.num_players(),
            actions: game.actions().to_vec(),
            utilities: (0..game.num_players()).map(|i| game.utilities(i).to_vec()).collect(),
        }
    }
}

/// Parses a JSON game. A missing `kind` means normal form.
pub fn parse_game(json: &str) -> Result<Parsed, GameError> {
    let mut value: serde_json::Value = serde_json::from_str(json)?;
    if let Some(obj) = value.as_object_mut() {
        obj.entry("kind").or_insert_with(|| "normal".into());
    }
    serde_json::from_value::<GameFile>(value)?.build()
}

pub fn load_game(path: impl AsRef<Path>) -> Result<Parsed, GameError> {
    parse_game(&std::fs::read_to_string(path)?)
}
