use serde::Serialize;

use super::{write_atomic, LoadedGame, AlgorithmChoice, ExperimentConfig, HarnessError};
use crate::dynamics::{run_cgd, run_ogd, CgdSchedule, Trajectory};
use crate::games::Game;
use crate::metrics::{avg_cce_gap, best_iterate, regrets, rvu_audit, write_metrics_csv};

/// `summary.json`. Statistics over an empty run are `null`.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub game: String,
    pub algorithm: AlgorithmChoice,
    pub eta: f64,
    pub lipschitz: f64,
    pub steps: usize,
    pub seed: u64,
    pub min_negap: Option<f64>,
    /// 1-based round minimizing `Σ_i BRGap_i²`.
    pub best_iterate_t: Option<usize>,
    pub best_iterate_negap: Option<f64>,
    pub regrets: Option<Vec<f64>>,
    pub sum_regret: Option<f64>,
    pub avg_cce_gap: Option<f64>,
    /// OGD only.
    pub rvu_min_player_slack: Option<f64>,
    pub rvu_summed_slack: Option<f64>,
    /// CGD only.
    pub max_residual_ratio: Option<f64>,
}

fn run(config: &ExperimentConfig) -> Result<(LoadedGame, f64, f64, Trajectory), HarnessError> {
    let loaded = config.game.load(config.seed)?;
    let lipschitz = loaded.game.lipschitz_bound();
    let eta = config.eta.resolve(&loaded.game, config.algorithm);
    log::info!("{}: L = {lipschitz}, η = {eta}", loaded.label);
    let traj = match config.algorithm {
        AlgorithmChoice::Ogd => run_ogd(&loaded.game, eta, config.steps, &loaded.init)?,
        AlgorithmChoice::Cgd => {
            run_cgd(&loaded.game, &CgdSchedule::for_game(&loaded.game, eta), config.steps, &loaded.init)?
        }
    };
    Ok((loaded, lipschitz, eta, traj))
}

/// Runs the dynamics and writes `trajectory.csv`, `metrics.csv` and `summary.json` into `config.out`.
pub fn cmd_simulate(config: &ExperimentConfig) -> Result<Summary, HarnessError> {
    if config.steps > 100_000_000 {
        return Err(HarnessError::Config { field: "steps", message: format!("{} exceeds 10^8", config.steps) });
    }
    let (loaded, lipschitz, eta, traj) = run(config)?;
    let game = &loaded.game;

    let mut summary = Summary {
        game: loaded.label.clone(),
        algorithm: config.algorithm,
        eta,
        lipschitz,
        steps: traj.len(),
        seed: config.seed,
        min_negap: None,
        best_iterate_t: None,
        best_iterate_negap: None,
        regrets: None,
        sum_regret: None,
        avg_cce_gap: None,
        rvu_min_player_slack: None,
        rvu_summed_slack: None,
        max_residual_ratio: None,
    };
    if !traj.is_empty() {
        summary.min_negap = (0..traj.len()).map(|t| traj.ne_gap(t)).reduce(f64::min);
        let best = best_iterate(&traj)?;
        summary.best_iterate_t = Some(best.t + 1);
        summary.best_iterate_negap = Some(best.ne_gap);
        let r = regrets(game, &traj, None)?;
        summary.sum_regret = Some(r.sum);
        summary.regrets = Some(r.per_player);
        summary.avg_cce_gap = Some(avg_cce_gap(game, &traj)?);
        if traj.has_ogd_state() {
            let rvu = rvu_audit(&traj)?;
            summary.rvu_min_player_slack = Some(rvu.min_player_slack());
            summary.rvu_summed_slack = Some(rvu.summed_slack);
        } else {
            summary.max_residual_ratio =
                traj.residuals().iter().zip(traj.tolerances()).map(|(r, e)| r / e).reduce(f64::max);
        }
    }

    std::fs::create_dir_all(&config.out)
        .map_err(|source| HarnessError::Write { path: config.out.clone(), source })?;
    write_atomic(&config.out.join("trajectory.csv"), |w| Ok(traj.write_csv(w)?))?;
    write_atomic(&config.out.join("metrics.csv"), |w| Ok(write_metrics_csv(&traj, w)?))?;
    write_atomic(&config.out.join("summary.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &summary)?;
        writeln!(w).map_err(|source| HarnessError::Write { path: config.out.join("summary.json"), source })
    })?;
    Ok(summary)
}
