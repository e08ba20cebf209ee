//! Experiment plumbing behind the `smoothlearn` binary.

mod acceptance;
mod analyze;
mod scan;
mod simulate;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::bayesian::agent_form;
use crate::dynamics::DynamicsError;
use crate::equilibria::EquilibriumError;
use crate::games::{builtin, random_game, AnyGame, Game, GameError, MixedProfile, Parsed};
use crate::metrics::MetricsError;
use crate::smoothness::SmoothnessError;

pub use acceptance::{rpoa_goldens, CriterionReport, Suite};
pub use analyze::{cmd_analyze, AnalysisReport, AnalyzeOptions, EliminationReport, MintyReport};
pub use scan::{cmd_scan, write_scan_csv, ScanConfig, ScanRow};
pub use simulate::{cmd_simulate, Summary};

/// Worker threads used by parallel commands.
pub const THREADS_ENV: &str = "SMOOTHLEARN_THREADS";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid {field}: {message}")]
    Config { field: &'static str, message: String },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Smoothness(#[from] SmoothnessError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
    /// A checked property failed; not an input problem.
    #[error("check failed: {0}")]
    Check(String),
}

impl HarnessError {
    /// True when the user supplied something unusable (exit code 2).
    pub fn is_input_error(&self) -> bool {
        match self {
            HarnessError::Config { .. } => true,
            HarnessError::Game(e) | HarnessError::Dynamics(DynamicsError::Game(e)) => !matches!(e, GameError::ActionOutOfRange { .. }),
            HarnessError::Dynamics(e) => matches!(
                e,
                DynamicsError::InvalidRate(_) | DynamicsError::NotContractive { .. } | DynamicsError::InvalidTolerance(_)
            ),
            HarnessError::Smoothness(SmoothnessError::InvalidParameter(_) | SmoothnessError::NonPositiveOpt(_)) => true,
            _ => false,
        }
    }
}

/// Where a game comes from: a builtin name, `random:RxC[x…]`, or a JSON file.
#[derive(Debug, Clone, PartialEq)]
pub enum GameSource {
    Builtin(String),
    Random(Vec<usize>),
    File(PathBuf),
}

impl FromStr for GameSource {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(spec) = s.strip_prefix("random:") {
            let dims: Result<Vec<usize>, _> = spec.split('x').map(str::parse).collect();
            return match dims {
                Ok(d) if !d.is_empty() && !d.contains(&0) => Ok(GameSource::Random(d)),
                _ => Err(HarnessError::Config {
                    field: "game",
                    message: format!("random spec must look like random:3x3, got {s:?}"),
                }),
            };
        }
        if crate::games::builtin_names().contains(&s) {
            return Ok(GameSource::Builtin(s.to_string()));
        }
        let path = PathBuf::from(s);
        if path.extension().is_some_and(|e| e == "json") || path.exists() {
            return Ok(GameSource::File(path));
        }
        Err(HarnessError::Config {
            field: "game",
            message: format!(
                "{s:?} is neither a builtin ({}) nor a random spec nor an existing file",
                crate::games::builtin_names().join(", ")
            ),
        })
    }
}

/// A resolved game with the point experiments start from.
#[derive(Debug, Clone)]
pub struct LoadedGame {
    pub label: String,
    pub game: AnyGame,
    pub init: MixedProfile,
}

impl GameSource {
    /// Bayesian files are loaded as their agent form.
    pub fn load(&self, seed: u64) -> Result<LoadedGame, HarnessError> {
        let (label, game, init) = match self {
            GameSource::Builtin(name) => {
                let b = builtin(name)?;
                (name.clone(), AnyGame::Normal(b.game), Some(b.init))
            }
            GameSource::Random(dims) => {
                let g = random_game(dims.len(), dims, seed)?;
                (format!("random:{}", dims.iter().map(usize::to_string).collect::<Vec<_>>().join("x")), AnyGame::Normal(g), None)
            }
            GameSource::File(path) => {
                let game = match crate::games::load_game(path)? {
                    Parsed::Game(g) => g,
                    Parsed::Bayesian(bg) => AnyGame::Normal(agent_form(&bg)?),
                };
                (path.display().to_string(), game, None)
            }
        };
        let init = init.unwrap_or_else(|| MixedProfile::uniform(game.actions()));
        Ok(LoadedGame { label, game, init })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmChoice {
    Ogd,
    Cgd,
}

impl FromStr for AlgorithmChoice {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ogd" => Ok(AlgorithmChoice::Ogd),
            "cgd" => Ok(AlgorithmChoice::Cgd),
            _ => Err(HarnessError::Config { field: "alg", message: format!("expected ogd or cgd, got {s:?}") }),
        }
    }
}

/// Learning rate: explicit, or `auto` (1/(4L) for OGD, 1/(2L) for CGD).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaSpec {
    Auto,
    Fixed(f64),
}

impl FromStr for EtaSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(EtaSpec::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(EtaSpec::Fixed(v)),
            _ => Err(HarnessError::Config { field: "eta", message: format!("expected auto or a finite number ≥ 0, got {s:?}") }),
        }
    }
}

impl EtaSpec {
    pub fn resolve<G: Game + ?Sized>(self, game: &G, alg: AlgorithmChoice) -> f64 {
        match (self, alg) {
            (EtaSpec::Fixed(v), _) => v,
            (EtaSpec::Auto, AlgorithmChoice::Ogd) => crate::dynamics::default_ogd_eta(game),
            (EtaSpec::Auto, AlgorithmChoice::Cgd) => crate::dynamics::default_cgd_eta(game),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub game: GameSource,
    pub algorithm: AlgorithmChoice,
    pub eta: EtaSpec,
    pub steps: usize,
    pub seed: u64,
    pub out: PathBuf,
}

/// Pool honoring [`THREADS_ENV`]; unset or 0 means rayon's default.
pub fn thread_pool() -> Result<rayon::ThreadPool, HarnessError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| HarnessError::Config {
            field: "SMOOTHLEARN_THREADS",
            message: format!("expected a thread count, got {v:?}"),
        })?,
        Err(_) => 0,
    };
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

/// Writes through a temporary file in the same directory, then renames.
pub(crate) fn write_atomic(
    path: &Path,
    fill: impl FnOnce(&mut dyn Write) -> Result<(), HarnessError>,
) -> Result<(), HarnessError> {
    let wrap = |source| HarnessError::Write { path: path.to_path_buf(), source };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut buf)?;
        buf.flush().map_err(wrap)?;
    }
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}
