//! Optimistic gradient descent (OGD) and clairvoyant gradient descent (CGD).

mod trajectory;

pub use trajectory::{Algorithm, Trajectory};

use crate::games::{game_operator, Game, GameError, MixedProfile};
use crate::geometry::{self, GeometryError};

#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("learning rate {0} must be finite and nonnegative")]
    InvalidRate(f64),
    #[error("non-finite utility for player {player} at step {step}")]
    NonFinite { step: usize, player: usize },
    #[error("eta * L = {product} is not below 1 (eta = {eta}, L = {lipschitz})")]
    NotContractive { eta: f64, lipschitz: f64, product: f64 },
    #[error("fixed-point budget of {budget} iterations exhausted at step {step}; last residual {residual:e}")]
    BudgetExhausted { step: usize, budget: usize, residual: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

/// Per-player OGD iterates. `played` always holds `P(x̂ + η m)` for the upcoming round.
#[derive(Debug, Clone)]
pub struct OgdState {
    eta: f64,
    secondary: MixedProfile,
    played: MixedProfile,
    prediction: Vec<Vec<f64>>,
    steps: Vec<usize>,
}

impl OgdState {
    /// Starts at `x̂^{(1)} = init` with `m^{(1)} = u(x̂^{(1)})`.
    pub fn new<G: Game + ?Sized>(game: &G, init: MixedProfile, eta: f64) -> Result<Self, DynamicsError> {
        if !eta.is_finite() || eta < 0.0 {
            return Err(DynamicsError::InvalidRate(eta));
        }
        init.check_shape(game.actions())?;
        let prediction = game_operator(game, &init)?;
        let mut state = OgdState {
            eta,
            played: init.clone(),
            secondary: init,
            prediction,
            steps: vec![0; game.num_players()],
        };
        for i in 0..game.num_players() {
            state.refresh_played(i)?;
        }
        Ok(state)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn played(&self) -> &MixedProfile {
        &self.played
    }

    pub fn secondary(&self) -> &MixedProfile {
        &self.secondary
    }

    pub fn prediction(&self, i: usize) -> &[f64] {
        &self.prediction[i]
    }

    fn refresh_played(&mut self, i: usize) -> Result<(), GeometryError> {
        let x = step_point(self.secondary.strategy(i), &self.prediction[i], self.eta)?;
        self.played.set_strategy_unchecked(i, &x);
        Ok(())
    }

    /// Feeds player `i` its observed utility `u^{(t)}`: `x̂ ← P(x̂ + η u)`, `m ← u`,
    /// and prepares the next played point `P(x̂ + η m)`.
    pub fn ogd_step(&mut self, i: usize, u: &[f64]) -> Result<(), DynamicsError> {
        let step = self.steps[i];
        if u.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::NonFinite { step, player: i });
        }
        let expected = self.prediction[i].len();
        if u.len() != expected {
            return Err(GameError::DimensionMismatch { player: i, expected, found: u.len() }.into());
        }
        let xh = step_point(self.secondary.strategy(i), u, self.eta)?;
        self.secondary.set_strategy_unchecked(i, &xh);
        self.prediction[i].copy_from_slice(u);
        self.refresh_played(i)?;
        self.steps[i] += 1;
        Ok(())
    }
}

fn step_point(x: &[f64], u: &[f64], eta: f64) -> Result<Vec<f64>, GeometryError> {
    let shifted: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + eta * b).collect();
    geometry::project_simplex(&shifted)
}

/// Simultaneous OGD for `steps` rounds from `x̂^{(1)} = init`.
pub fn run_ogd<G: Game + ?Sized>(
    game: &G,
    eta: f64,
    steps: usize,
    init: &MixedProfile,
) -> Result<Trajectory, DynamicsError> {
    let mut state = OgdState::new(game, init.clone(), eta)?;
    let mut traj = Trajectory::empty(Algorithm::Ogd, eta, game.actions(), steps);
    traj.secondary.reserve((steps + 1) * traj.width);
    traj.predictions.reserve(steps * traj.width);
    traj.secondary.extend_from_slice(state.secondary.as_flat());
    for _ in 0..steps {
        for m in &state.prediction {
            traj.predictions.extend_from_slice(m);
        }
        traj.played.extend_from_slice(state.played.as_flat());
        let u = game_operator(game, &state.played)?;
        for (i, ui) in u.iter().enumerate() {
            traj.utilities.extend_from_slice(ui);
            state.ogd_step(i, ui)?;
        }
        traj.secondary.extend_from_slice(state.secondary.as_flat());
        traj.steps += 1;
    }
    Ok(traj)
}

/// Default learning rate `1/(4L)`.
pub fn default_ogd_eta<G: Game + ?Sized>(game: &G) -> f64 {
    0.25 / game.lipschitz_bound()
}

/// Default learning rate `1/(2L)`.
pub fn default_cgd_eta<G: Game + ?Sized>(game: &G) -> f64 {
    0.5 / game.lipschitz_bound()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// `ε^{(t)} = scale / t²`.
    InverseSquare { scale: f64 },
    Constant(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgdSchedule {
    pub eta: f64,
    pub tolerance: Tolerance,
    pub max_iterations: usize,
}

impl CgdSchedule {
    pub const DEFAULT_BUDGET: usize = 64;

    /// `ε^{(t)} = min_i D_{X_i} / t²`, taking the minimum over players with at least two actions.
    pub fn for_game<G: Game + ?Sized>(game: &G, eta: f64) -> Self {
        let scale = game
            .actions()
            .iter()
            .filter(|&&d| d >= 2)
            .map(|&d| geometry::diameter(d))
            .fold(f64::INFINITY, f64::min);
        let scale = if scale.is_finite() { scale } else { 1.0 };
        CgdSchedule { eta, tolerance: Tolerance::InverseSquare { scale }, max_iterations: Self::DEFAULT_BUDGET }
    }

    /// Tolerance for 1-based round `t`.
    pub fn tolerance(&self, t: usize) -> f64 {
        match self.tolerance {
            Tolerance::InverseSquare { scale } => scale / (t as f64 * t as f64),
            Tolerance::Constant(e) => e,
        }
    }
}

/// Approximate fixed point `w ≈ Π_{x_prev}(η F(w))` found by Picard iteration from `w = x_prev`.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub anchor: MixedProfile,
    pub anchor_utilities: Vec<Vec<f64>>,
    /// `Π_{x_prev}(η F(anchor))`.
    pub next: MixedProfile,
    /// `‖anchor − next‖₂`.
    pub residual: f64,
    /// Picard updates performed.
    pub iterations: usize,
    /// Residual after each evaluation, starting at `w = x_prev`.
    pub history: Vec<f64>,
}

pub fn cgd_fixed_point<G: Game + ?Sized>(
    game: &G,
    x_prev: &MixedProfile,
    eta: f64,
    eps: f64,
    budget: usize,
) -> Result<FixedPoint, DynamicsError> {
    check_contraction(eta, game.lipschitz_bound())?;
    fixed_point(game, x_prev, eta, eps, budget, 0)
}

fn check_contraction(eta: f64, lipschitz: f64) -> Result<(), DynamicsError> {
    if !eta.is_finite() || eta < 0.0 {
        return Err(DynamicsError::InvalidRate(eta));
    }
    let product = eta * lipschitz;
    if product >= 1.0 {
        return Err(DynamicsError::NotContractive { eta, lipschitz, product });
    }
    Ok(())
}

fn fixed_point<G: Game + ?Sized>(
    game: &G,
    x_prev: &MixedProfile,
    eta: f64,
    eps: f64,
    budget: usize,
    step: usize,
) -> Result<FixedPoint, DynamicsError> {
    if !(eps > 0.0) {
        return Err(DynamicsError::InvalidTolerance(eps));
    }
    x_prev.check_shape(game.actions())?;
    let dims = x_prev.dims();
    let mut w = x_prev.clone();
    let mut history = Vec::new();
    let mut k = 0;
    loop {
        let fw = game_operator(game, &w)?;
        let mut flat = Vec::with_capacity(x_prev.as_flat().len());
        for (i, u) in fw.iter().enumerate() {
            if u.iter().any(|v| !v.is_finite()) {
                return Err(DynamicsError::NonFinite { step, player: i });
            }
            flat.extend(step_point(x_prev.strategy(i), u, eta)?);
        }
        let next = MixedProfile::from_flat(&dims, flat);
        let residual = w.distance(&next);
        history.push(residual);
        if residual <= eps {
            return Ok(FixedPoint { anchor: w, anchor_utilities: fw, next, residual, iterations: k, history });
        }
        if k >= budget {
            return Err(DynamicsError::BudgetExhausted { step, budget, residual });
        }
        w = next;
        k += 1;
    }
}

/// CGD: `x^{(t)} = Π_{x^{(t−1)}}(η F(w^{(t)}))` with `x^{(0)} = init`.
pub fn run_cgd<G: Game + ?Sized>(
    game: &G,
    schedule: &CgdSchedule,
    steps: usize,
    init: &MixedProfile,
) -> Result<Trajectory, DynamicsError> {
    check_contraction(schedule.eta, game.lipschitz_bound())?;
    init.check_shape(game.actions())?;
    let mut traj = Trajectory::empty(Algorithm::Cgd, schedule.eta, game.actions(), steps);
    traj.initial = init.as_flat().to_vec();
    let mut x = init.clone();
    for t in 0..steps {
        let eps = schedule.tolerance(t + 1);
        let fp = fixed_point(game, &x, schedule.eta, eps, schedule.max_iterations, t)?;
        traj.anchors.extend_from_slice(fp.anchor.as_flat());
        for u in &fp.anchor_utilities {
            traj.anchor_utilities.extend_from_slice(u);
        }
        traj.residuals.push(fp.residual);
        traj.tolerances.push(eps);
        traj.iterations.push(fp.iterations);
        x = fp.next;
        traj.played.extend_from_slice(x.as_flat());
        for u in game_operator(game, &x)? {
            traj.utilities.extend(u);
        }
        traj.steps += 1;
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::NormalFormGame;

    #[test]
    fn zero_rate_freezes_play() {
        let g = crate::games::random_game(2, &[3, 2], 4).unwrap();
        let init = MixedProfile::new(vec![vec![0.2, 0.3, 0.5], vec![0.9, 0.1]]).unwrap();
        let traj = run_ogd(&g, 0.0, 20, &init).unwrap();
        for t in 0..20 {
            assert_eq!(traj.played_profile(t), init);
        }
    }

    #[test]
    fn empty_run() {
        let g = crate::games::random_game(2, &[2, 2], 0).unwrap();
        let traj = run_ogd(&g, 0.1, 0, &MixedProfile::uniform(&[2, 2])).unwrap();
        assert!(traj.is_empty());
    }

    #[test]
    fn constant_utility_reaches_best_response_vertex() {
        let g = NormalFormGame::new(vec![3], vec![vec![0.0, 1.0, 0.0]]).unwrap();
        let eta = 0.05;
        let steps = (2.0 / eta) as usize;
        let traj = run_ogd(&g, eta, steps, &MixedProfile::uniform(&[3])).unwrap();
        assert_eq!(traj.secondary(steps, 0).unwrap(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn nan_utilities_abort_with_step() {
        let g = crate::games::random_game(2, &[2, 2], 0).unwrap();
        let mut s = OgdState::new(&g, MixedProfile::uniform(&[2, 2]), 0.1).unwrap();
        s.ogd_step(0, &[0.1, 0.2]).unwrap();
        let err = s.ogd_step(0, &[f64::NAN, 0.0]).unwrap_err();
        assert!(matches!(err, DynamicsError::NonFinite { step: 1, player: 0 }));
    }

    #[test]
    fn rejects_non_contractive_rate() {
        let g = crate::games::builtin("mp").unwrap().game;
        let x = MixedProfile::uniform(&[2, 2]);
        let err = cgd_fixed_point(&g, &x, 1.0, 1e-6, 64).unwrap_err();
        assert!(matches!(err, DynamicsError::NotContractive { .. }));
    }

    #[test]
    fn constant_game_converges_in_one_update() {
        let g = NormalFormGame::new(vec![3], vec![vec![0.3, 0.9, 0.1]]).unwrap();
        let x = MixedProfile::new(vec![vec![0.6, 0.2, 0.2]]).unwrap();
        let fp = cgd_fixed_point(&g, &x, 0.4, 1e-12, 64).unwrap();
        assert_eq!(fp.iterations, 1);
        let eu: Vec<f64> = [0.3, 0.9, 0.1].iter().map(|v| 0.4 * v).collect();
        let direct = geometry::prox(x.strategy(0), &eu).unwrap();
        assert_eq!(fp.anchor.strategy(0), direct.as_slice());
        assert_eq!(fp.residual, 0.0);
    }
}
