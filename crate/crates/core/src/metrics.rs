//! Equilibrium gaps, regrets, RVU audits and welfare traces.

use std::io::Write;

use crate::dynamics::Trajectory;
use crate::games::{dot, Game, GameError, MixedProfile};
use crate::geometry::{self, dist_sq, norm_sq};

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("trajectory is empty")]
    Empty,
    #[error("trajectory lacks {0}")]
    MissingState(&'static str),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn gap_of(x: &[f64], u: &[f64]) -> f64 {
    let best = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (best - dot(x, u)).max(0.0)
}

/// Per-player best-response gaps and their maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub gaps: Vec<f64>,
    pub ne_gap: f64,
}

impl GapReport {
    pub fn from_gaps(gaps: Vec<f64>) -> Self {
        let gaps: Vec<f64> = gaps.into_iter().map(|g| g.max(0.0)).collect();
        let ne_gap = gaps.iter().copied().fold(0.0, f64::max);
        GapReport { gaps, ne_gap }
    }

    /// Gaps in ascending order: the `(ε, δ)` frontier.
    pub fn sorted(&self) -> Vec<f64> {
        let mut s = self.gaps.clone();
        s.sort_by(f64::total_cmp);
        s
    }

    /// `ε` read off as the smallest of the `⌈δn⌉` largest gaps (at least one).
    pub fn extraction_epsilon(&self, delta: f64) -> f64 {
        let n = self.gaps.len();
        let k = ((delta * n as f64 - 1e-9).ceil() as usize).clamp(1, n);
        self.sorted()[n - k]
    }

    /// Smallest `ε` for which the profile is an `(ε, δ)`-weak equilibrium.
    pub fn tight_epsilon(&self, delta: f64) -> f64 {
        let n = self.gaps.len();
        self.sorted()[quota(n, delta) - 1]
    }

    pub fn is_weak_ne(&self, eps: f64, delta: f64) -> bool {
        self.gaps.iter().filter(|&&g| g <= eps).count() >= quota(self.gaps.len(), delta)
    }
}

/// `⌈(1 − δ) n⌉`, guarded against float noise.
fn quota(n: usize, delta: f64) -> usize {
    (((1.0 - delta) * n as f64 - 1e-9).ceil() as usize).clamp(1, n)
}

pub fn br_gap<G: Game + ?Sized>(game: &G, x: &MixedProfile, i: usize) -> Result<f64, GameError> {
    Ok(gap_of(x.strategy(i), &game.utility_vector(i, x)?))
}

pub fn ne_gap<G: Game + ?Sized>(game: &G, x: &MixedProfile) -> Result<GapReport, GameError> {
    let gaps = (0..game.num_players()).map(|i| br_gap(game, x, i)).collect::<Result<_, _>>()?;
    Ok(GapReport::from_gaps(gaps))
}

/// True iff at least `⌈(1−δ)n⌉` players are `ε`-best responding.
pub fn weak_ne_check<G: Game + ?Sized>(game: &G, x: &MixedProfile, eps: f64, delta: f64) -> Result<bool, MetricsError> {
    if !(0.0..1.0).contains(&delta) || !(eps >= 0.0) {
        return Err(MetricsError::InvalidParameter(format!("need δ ∈ [0, 1) and ε ≥ 0, got ({eps}, {delta})")));
    }
    Ok(ne_gap(game, x)?.is_weak_ne(eps, delta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    pub per_player: Vec<f64>,
    pub sum: f64,
    /// Regret against the fixed comparator profile, when one was given.
    pub fixed: Option<Vec<f64>>,
    pub steps: usize,
}

impl RegretReport {
    pub fn weighted_sum(&self, z: &[f64]) -> f64 {
        dot(&self.per_player, z)
    }

    pub fn fixed_sum(&self) -> Option<f64> {
        self.fixed.as_ref().map(|f| f.iter().sum())
    }
}

fn check_dims<G: Game + ?Sized>(game: &G, traj: &Trajectory) -> Result<(), MetricsError> {
    if game.actions() != traj.dims() {
        return Err(MetricsError::Shape(format!("game {:?} vs trajectory {:?}", game.actions(), traj.dims())));
    }
    Ok(())
}

/// `Reg_i = max_{a_i} Σ_t u_i(a_i, x_{-i}^{(t)}) − Σ_t u_i(x^{(t)})`, from the recorded utilities.
pub fn regrets<G: Game + ?Sized>(
    game: &G,
    traj: &Trajectory,
    comparator: Option<&[usize]>,
) -> Result<RegretReport, MetricsError> {
    check_dims(game, traj)?;
    if traj.is_empty() {
        return Err(MetricsError::Empty);
    }
    if let Some(b) = comparator {
        MixedProfile::pure(game.actions(), b)?;
    }
    let n = traj.num_players();
    let mut per_player = Vec::with_capacity(n);
    let mut fixed = comparator.map(|_| Vec::with_capacity(n));
    for i in 0..n {
        let mut cum = vec![0.0; traj.dims()[i]];
        let mut realized = 0.0;
        for t in 0..traj.len() {
            let u = traj.utility(t, i);
            cum.iter_mut().zip(u).for_each(|(c, v)| *c += v);
            realized += dot(traj.played(t, i), u);
        }
        per_player.push(cum.iter().copied().fold(f64::NEG_INFINITY, f64::max) - realized);
        if let (Some(f), Some(b)) = (fixed.as_mut(), comparator) {
            f.push(cum[b[i]] - realized);
        }
    }
    Ok(RegretReport { sum: per_player.iter().sum(), per_player, fixed, steps: traj.len() })
}

/// `max(0, max_i Reg_i / T)`: the CCE gap of the average correlated play.
pub fn avg_cce_gap<G: Game + ?Sized>(game: &G, traj: &Trajectory) -> Result<f64, MetricsError> {
    let r = regrets(game, traj, None)?;
    Ok((r.per_player.iter().copied().fold(f64::NEG_INFINITY, f64::max) / traj.len() as f64).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RvuPlayer {
    pub regret: f64,
    pub bound: f64,
    pub slack: f64,
    /// `Σ_t ‖u_i^{(t)} − m_i^{(t)}‖²`.
    pub prediction_error: f64,
    /// `Σ_t ‖x_i^{(t)} − x̂_i^{(t)}‖² + ‖x_i^{(t)} − x̂_i^{(t+1)}‖²`.
    pub path: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RvuReport {
    pub players: Vec<RvuPlayer>,
    pub path_length: f64,
    pub sum_regret: f64,
    /// `Σ D_i² / (2η) − path / (4η)`; valid when `η ≤ 1/(4L)`.
    pub summed_bound: f64,
    pub summed_slack: f64,
}

impl RvuReport {
    pub fn min_player_slack(&self) -> f64 {
        self.players.iter().map(|p| p.slack).fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates both sides of the per-player RVU inequality and its summed form on an OGD run.
pub fn rvu_audit(traj: &Trajectory) -> Result<RvuReport, MetricsError> {
    if !traj.has_ogd_state() {
        return Err(MetricsError::MissingState("secondary iterates and predictions (not an OGD run)"));
    }
    let eta = traj.eta();
    if !(eta > 0.0) {
        return Err(MetricsError::InvalidParameter(format!("RVU audit needs η > 0, got {eta}")));
    }
    let mut players = Vec::with_capacity(traj.num_players());
    let mut d_sq = 0.0;
    for i in 0..traj.num_players() {
        let d2 = geometry::diameter(traj.dims()[i]).powi(2);
        d_sq += d2;
        let mut cum = vec![0.0; traj.dims()[i]];
        let (mut realized, mut pred, mut path) = (0.0, 0.0, 0.0);
        for t in 0..traj.len() {
            let (x, u) = (traj.played(t, i), traj.utility(t, i));
            cum.iter_mut().zip(u).for_each(|(c, v)| *c += v);
            realized += dot(x, u);
            let m = traj.prediction(t, i).expect("OGD state");
            pred += u.iter().zip(m).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            path += dist_sq(x, traj.secondary(t, i).expect("OGD state"))
                + dist_sq(x, traj.secondary(t + 1, i).expect("OGD state"));
        }
        let regret = cum.iter().copied().fold(f64::NEG_INFINITY, f64::max) - realized;
        let bound = d2 / (2.0 * eta) + eta * pred - path / (2.0 * eta);
        players.push(RvuPlayer { regret, bound, slack: bound - regret, prediction_error: pred, path });
    }
    let path_length: f64 = players.iter().map(|p| p.path).sum();
    let sum_regret: f64 = players.iter().map(|p| p.regret).sum();
    let summed_bound = d_sq / (2.0 * eta) - path_length / (4.0 * eta);
    Ok(RvuReport { players, path_length, sum_regret, summed_bound, summed_slack: summed_bound - sum_regret })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLengthCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// `path ≤ 2 Σ D_i² + 4 η ε_n (1+μ) OPT T` for a game certified `(λ, μ)`-smooth with `ε_n = 1 − λ/(1+μ)`.
pub fn path_length_check(report: &RvuReport, traj: &Trajectory, efficiency_loss: f64, mu: f64, opt: f64) -> PathLengthCheck {
    let rhs = 2.0 * geometry::product_diameter_sq(traj.dims())
        + 4.0 * traj.eta() * efficiency_loss.max(0.0) * (1.0 + mu) * opt * traj.len() as f64;
    PathLengthCheck { lhs: report.path_length, rhs, slack: rhs - report.path_length }
}

/// Slack of `Σ_i Reg_i ≥ λ OPT T − (1+μ) Σ_t SW(x^{(t)})`.
pub fn regret_lower_bound_slack(traj: &Trajectory, report: &RegretReport, lambda: f64, mu: f64, opt: f64) -> f64 {
    let sw: f64 = (0..traj.len()).map(|t| traj.welfare(t)).sum();
    report.sum - (lambda * opt * traj.len() as f64 - (1.0 + mu) * sw)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WelfareTrace {
    pub sw: Vec<f64>,
    pub running_avg: Vec<f64>,
}

pub fn welfare_trace(traj: &Trajectory) -> WelfareTrace {
    let sw: Vec<f64> = (0..traj.len()).map(|t| traj.welfare(t)).collect();
    let mut acc = 0.0;
    let running_avg = sw
        .iter()
        .enumerate()
        .map(|(t, v)| {
            acc += v;
            acc / (t + 1) as f64
        })
        .collect();
    WelfareTrace { sw, running_avg }
}

/// Per-round probability that players 1 and 2 pick the same action index.
pub fn diagonal_mass(traj: &Trajectory) -> Result<Vec<f64>, MetricsError> {
    let d = traj.dims();
    if d.len() < 2 || d[0] != d[1] {
        return Err(MetricsError::Shape(format!("diagonal mass needs |A_1| = |A_2|, got {d:?}")));
    }
    Ok((0..traj.len()).map(|t| dot(traj.played(t, 0), traj.played(t, 1))).collect())
}

/// `Σ_i BRGap_i(x^{(t)})²` for every round.
pub fn squared_gap_series(traj: &Trajectory) -> Vec<f64> {
    (0..traj.len())
        .map(|t| (0..traj.num_players()).map(|i| traj.br_gap(t, i).powi(2)).sum())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestIterate {
    /// 0-based step index.
    pub t: usize,
    pub squared_gap_sum: f64,
    pub ne_gap: f64,
}

/// `t* = argmin_t Σ_i BRGap_i(x^{(t)})²`; first minimizer on ties.
pub fn best_iterate(traj: &Trajectory) -> Result<BestIterate, MetricsError> {
    let series = squared_gap_series(traj);
    let (t, v) = series
        .iter()
        .copied()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (t, v)| match best {
            Some((_, bv)) if bv <= v => best,
            _ => Some((t, v)),
        })
        .ok_or(MetricsError::Empty)?;
    Ok(BestIterate { t, squared_gap_sum: v, ne_gap: traj.ne_gap(t) })
}

/// Fraction of rounds whose squared gap sum is at most `factor` times the trajectory mean.
pub fn most_iterates_fraction(traj: &Trajectory, factor: f64) -> Result<f64, MetricsError> {
    let series = squared_gap_series(traj);
    if series.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    Ok(series.iter().filter(|&&v| v <= factor * mean).count() as f64 / series.len() as f64)
}

/// One row per round: `t, negap, sw, sw_running_avg, diag_mass, sum_regret`.
/// `diag_mass` is left empty when players 1 and 2 have different action counts.
pub fn write_metrics_csv<W: Write>(traj: &Trajectory, out: W) -> Result<(), MetricsError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "negap", "sw", "sw_running_avg", "diag_mass", "sum_regret"])?;
    let trace = welfare_trace(traj);
    let diag = diagonal_mass(traj).ok();
    let mut cum: Vec<Vec<f64>> = traj.dims().iter().map(|&d| vec![0.0; d]).collect();
    let mut realized = vec![0.0; traj.num_players()];
    for t in 0..traj.len() {
        let mut sum_regret = 0.0;
        for (i, c) in cum.iter_mut().enumerate() {
            let u = traj.utility(t, i);
            c.iter_mut().zip(u).for_each(|(a, v)| *a += v);
            realized[i] += dot(traj.played(t, i), u);
            sum_regret += c.iter().copied().fold(f64::NEG_INFINITY, f64::max) - realized[i];
        }
        w.write_record([
            (t + 1).to_string(),
            traj.ne_gap(t).to_string(),
            trace.sw[t].to_string(),
            trace.running_avg[t].to_string(),
            diag.as_ref().map_or(String::new(), |d| d[t].to_string()),
            sum_regret.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `‖u‖₂` for each recorded utility vector of player `i`; used for sanity bounds.
pub fn max_utility_norm(traj: &Trajectory, i: usize) -> f64 {
    (0..traj.len()).map(|t| norm_sq(traj.utility(t, i)).sqrt()).fold(0.0, f64::max)
}
