//! Smoothness certificates from linear programs over pure profiles.
//!
//! All checks enumerate pure profiles; multilinearity makes this exact.

use serde::Serialize;

use crate::games::{
    check_enumerable, for_each_profile, optimal_welfare, pure_welfare, utility_norm_bounds, Game, GameError,
    MixedProfile, DEFAULT_ENUMERATION_CAP,
};
use crate::geometry;
use crate::lp::{LinearProgram, LpError, LpStatus};

/// Dual weights at or below this are treated as zero.
pub const DEGENERATE_Z: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum SmoothnessError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("OPT = {0} must be positive")]
    NonPositiveOpt(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("LP unexpectedly {0:?}")]
    UnexpectedStatus(LpStatus),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessCheck {
    pub holds: bool,
    /// The welfare maximizer achieving the best worst-case slack.
    pub a_star: Vec<usize>,
    /// `min_a Σ_i u_i(a*_i, a_{-i}) − λ OPT + μ SW(a)`.
    pub worst_slack: f64,
    pub violation: Option<Vec<usize>>,
}

/// `Σ_i u_i(a*_i, a_{-i})`.
fn deviation_sum<G: Game + ?Sized>(game: &G, a_star: &[usize], a: &[usize], buf: &mut Vec<usize>) -> f64 {
    (0..game.num_players())
        .map(|i| {
            buf.clear();
            buf.extend_from_slice(a);
            buf[i] = a_star[i];
            game.pure_utility(i, buf)
        })
        .sum()
}

/// Checks `Σ_i u_i(a*_i, a_{-i}) ≥ λ OPT − μ SW(a)` for every pure `a`, trying each tied maximizer `a*`.
pub fn is_smooth<G: Game + ?Sized>(game: &G, lambda: f64, mu: f64) -> Result<SmoothnessCheck, SmoothnessError> {
    if !(lambda > 0.0) || !(mu > -1.0) {
        return Err(SmoothnessError::InvalidParameter(format!("need λ > 0 and μ > −1, got ({lambda}, {mu})")));
    }
    let (opt, maximizers) = optimal_welfare(game)?;
    let mut best: Option<SmoothnessCheck> = None;
    let mut buf = Vec::new();
    for a_star in maximizers {
        let mut worst = f64::INFINITY;
        let mut at = Vec::new();
        for_each_profile(game.actions(), |_, a| {
            let slack = deviation_sum(game, &a_star, a, &mut buf) - lambda * opt + mu * pure_welfare(game, a);
            if slack < worst {
                worst = slack;
                at = a.to_vec();
            }
        });
        if best.as_ref().map_or(true, |b| worst > b.worst_slack) {
            let holds = worst >= -1e-9;
            best = Some(SmoothnessCheck { holds, a_star, worst_slack: worst, violation: (!holds).then_some(at) });
        }
    }
    Ok(best.expect("games have at least one pure profile"))
}

/// Output of the rPoA programs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothnessCertificate {
    /// `ρ / z`, reported only for a single positive weight.
    pub lambda: Option<f64>,
    /// `1/z − 1`, reported only for a single positive weight.
    pub mu: Option<f64>,
    pub rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_i: Option<Vec<f64>>,
    pub a_star: Vec<usize>,
    pub z_min: f64,
    /// All weights are zero: smoothness only with unbounded parameters.
    pub flagged_degenerate: bool,
}

impl SmoothnessCertificate {
    /// `ε_n = 1 − ρ`.
    pub fn efficiency_loss(&self) -> f64 {
        1.0 - self.rho
    }

    fn weights(&self, n: usize) -> Vec<f64> {
        match (&self.z, &self.z_i) {
            (Some(z), _) => vec![*z; n],
            (None, Some(zs)) => zs.clone(),
            (None, None) => vec![0.0; n],
        }
    }
}

struct Enumerated {
    opt: f64,
    maximizers: Vec<Vec<usize>>,
    profiles: Vec<Vec<usize>>,
    welfare: Vec<f64>,
}

fn enumerate<G: Game + ?Sized>(game: &G) -> Result<Enumerated, SmoothnessError> {
    check_enumerable(game.actions(), DEFAULT_ENUMERATION_CAP)?;
    let (opt, maximizers) = optimal_welfare(game)?;
    if !(opt > 0.0) {
        return Err(SmoothnessError::NonPositiveOpt(opt));
    }
    let mut profiles = Vec::new();
    let mut welfare = Vec::new();
    for_each_profile(game.actions(), |_, a| {
        profiles.push(a.to_vec());
        welfare.push(pure_welfare(game, a));
    });
    Ok(Enumerated { opt, maximizers, profiles, welfare })
}

/// Per-player deviation benefits `u_i(a*_i, a_{-i}) − u_i(a)`.
fn deviation_terms<G: Game + ?Sized>(game: &G, a_star: &[usize], a: &[usize], buf: &mut Vec<usize>) -> Vec<f64> {
    (0..game.num_players())
        .map(|i| {
            buf.clear();
            buf.extend_from_slice(a);
            buf[i] = a_star[i];
            game.pure_utility(i, buf) - game.pure_utility(i, a)
        })
        .collect()
}

fn optimal(lp: &LinearProgram) -> Result<Vec<f64>, SmoothnessError> {
    let sol = lp.solve()?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.point),
        s => Err(SmoothnessError::UnexpectedStatus(s)),
    }
}

/// Robust price of anarchy: maximize `ρ` over `(ρ, z ≥ z_min)` subject to
/// `z Σ_i (u_i(a*_i, a_{-i}) − u_i(a)) ≥ ρ SW(a*) − SW(a)` for all pure `a`, best over tied `a*`.
pub fn rpoa<G: Game + ?Sized>(game: &G, z_min: f64) -> Result<SmoothnessCertificate, SmoothnessError> {
    if !(z_min >= 0.0) || !z_min.is_finite() {
        return Err(SmoothnessError::InvalidParameter(format!("z_min must be finite and ≥ 0, got {z_min}")));
    }
    let e = enumerate(game)?;
    let mut buf = Vec::new();
    let mut best: Option<(f64, f64, Vec<usize>)> = None;
    for a_star in &e.maximizers {
        let mut lp = LinearProgram::new(vec![1.0, 0.0]);
        lp.set_free(0).set_bounds(1, z_min, f64::INFINITY);
        for (a, &sw) in e.profiles.iter().zip(&e.welfare) {
            let dev: f64 = deviation_terms(game, a_star, a, &mut buf).iter().sum();
            lp.add_le(vec![e.opt, -dev], sw);
        }
        let y = optimal(&lp)?;
        if best.as_ref().map_or(true, |b| y[0] > b.0 + 1e-9) {
            best = Some((y[0], y[1], a_star.clone()));
        }
    }
    let (rho, z, a_star) = best.expect("at least one maximizer");
    let degenerate = z <= DEGENERATE_Z;
    Ok(SmoothnessCertificate {
        lambda: (!degenerate).then(|| rho / z),
        mu: (!degenerate).then(|| 1.0 / z - 1.0),
        rho,
        z: Some(z),
        z_i: None,
        a_star,
        z_min,
        flagged_degenerate: degenerate,
    })
}

/// Per-player weights `z_i ≥ z_floor` in place of a common `z`, optionally with `z_i ≤ R z_j`.
pub fn weighted_rpoa<G: Game + ?Sized>(
    game: &G,
    ratio_bound: Option<f64>,
    z_floor: Option<f64>,
) -> Result<SmoothnessCertificate, SmoothnessError> {
    if let Some(r) = ratio_bound {
        if !(r >= 1.0) || !r.is_finite() {
            return Err(SmoothnessError::InvalidParameter(format!("ratio bound must be ≥ 1, got {r}")));
        }
    }
    let floor = z_floor.unwrap_or(0.0);
    if !(floor >= 0.0) || !floor.is_finite() {
        return Err(SmoothnessError::InvalidParameter(format!("z floor must be finite and ≥ 0, got {floor}")));
    }
    let n = game.num_players();
    let e = enumerate(game)?;
    let mut buf = Vec::new();
    let mut best: Option<(f64, Vec<f64>, Vec<usize>)> = None;
    for a_star in &e.maximizers {
        let mut objective = vec![0.0; n + 1];
        objective[0] = 1.0;
        let mut lp = LinearProgram::new(objective);
        lp.set_free(0);
        for i in 0..n {
            lp.set_bounds(i + 1, floor, f64::INFINITY);
        }
        for (a, &sw) in e.profiles.iter().zip(&e.welfare) {
            let mut row = vec![e.opt];
            row.extend(deviation_terms(game, a_star, a, &mut buf).iter().map(|d| -d));
            lp.add_le(row, sw);
        }
        if let Some(r) = ratio_bound {
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let mut row = vec![0.0; n + 1];
                    row[i + 1] = 1.0;
                    row[j + 1] = -r;
                    lp.add_le(row, 0.0);
                }
            }
        }
        let y = optimal(&lp)?;
        if best.as_ref().map_or(true, |b| y[0] > b.0 + 1e-9) {
            best = Some((y[0], y[1..].to_vec(), a_star.clone()));
        }
    }
    let (rho, z, a_star) = best.expect("at least one maximizer");
    let degenerate = z.iter().all(|&v| v <= DEGENERATE_Z);
    Ok(SmoothnessCertificate {
        lambda: None,
        mu: None,
        rho,
        z: None,
        z_i: Some(z),
        a_star,
        z_min: floor,
        flagged_degenerate: degenerate,
    })
}

/// Largest violation of the certificate's pure-profile constraints (0 when all hold).
pub fn certificate_violation<G: Game + ?Sized>(game: &G, cert: &SmoothnessCertificate) -> Result<f64, SmoothnessError> {
    let e = enumerate(game)?;
    let z = cert.weights(game.num_players());
    let mut buf = Vec::new();
    let mut worst: f64 = 0.0;
    for (a, &sw) in e.profiles.iter().zip(&e.welfare) {
        let lhs: f64 = deviation_terms(game, &cert.a_star, a, &mut buf).iter().zip(&z).map(|(d, w)| d * w).sum();
        worst = worst.max(cert.rho * e.opt - sw - lhs);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MintyResult {
    pub feasible: bool,
    /// The certificate `x*` when feasible, otherwise the profile with the best worst slack.
    pub profile: MixedProfile,
    /// `min_a Σ_i ⟨x*_i, u_i(·, a_{-i})⟩ − SW(a)`, recomputed at `profile`.
    pub worst_slack: f64,
}

/// Feasibility threshold on the worst slack.
pub const MINTY_TOL: f64 = 1e-9;

/// `min_a Σ_i ⟨x_i, u_i(·, a_{-i})⟩ − SW(a)` by enumeration.
pub fn minty_worst_slack<G: Game + ?Sized>(game: &G, x: &MixedProfile) -> Result<f64, SmoothnessError> {
    check_enumerable(game.actions(), DEFAULT_ENUMERATION_CAP)?;
    x.check_shape(game.actions())?;
    let mut worst = f64::INFINITY;
    let mut buf = Vec::new();
    for_each_profile(game.actions(), |_, a| {
        let mut s = -pure_welfare(game, a);
        for i in 0..game.num_players() {
            buf.clear();
            buf.extend_from_slice(a);
            for (b, &p) in x.strategy(i).iter().enumerate() {
                buf[i] = b;
                s += p * game.pure_utility(i, &buf);
            }
        }
        worst = worst.min(s);
    });
    Ok(worst)
}

/// Maximizes the worst slack of the Minty inequality over mixed `x*`; feasible iff it is ≥ −1e-9.
pub fn minty_certificate<G: Game + ?Sized>(game: &G) -> Result<MintyResult, SmoothnessError> {
    let actions = game.actions().to_vec();
    check_enumerable(&actions, DEFAULT_ENUMERATION_CAP)?;
    let dim: usize = actions.iter().sum();
    let mut offsets = vec![0];
    for d in &actions {
        offsets.push(offsets.last().unwrap() + d);
    }
    let mut objective = vec![0.0; dim + 1];
    objective[dim] = 1.0;
    let mut lp = LinearProgram::new(objective);
    lp.set_free(dim);
    let mut buf = Vec::new();
    for_each_profile(&actions, |_, a| {
        let mut row = vec![0.0; dim + 1];
        row[dim] = 1.0;
        for i in 0..actions.len() {
            buf.clear();
            buf.extend_from_slice(a);
            for b in 0..actions[i] {
                buf[i] = b;
                row[offsets[i] + b] = -game.pure_utility(i, &buf);
            }
        }
        lp.add_le(row, -pure_welfare(game, a));
    });
    for i in 0..actions.len() {
        let mut row = vec![0.0; dim + 1];
        row[offsets[i]..offsets[i + 1]].iter_mut().for_each(|v| *v = 1.0);
        lp.add_eq(row, 1.0);
    }
    let y = optimal(&lp)?;
    let strategies = (0..actions.len())
        .map(|i| {
            let s: Vec<f64> = y[offsets[i]..offsets[i + 1]].iter().map(|v| v.max(0.0)).collect();
            let total: f64 = s.iter().sum();
            s.into_iter().map(|v| v / total).collect()
        })
        .collect();
    let profile = MixedProfile::new(strategies)?;
    let worst_slack = minty_worst_slack(game, &profile)?;
    Ok(MintyResult { feasible: worst_slack >= -MINTY_TOL, profile, worst_slack })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    /// `T = ⌈D_X² / (2 η ε_n (1+μ) OPT)⌉` with the bound on `min_t Σ_i BRGap_i²` it guarantees.
    Finite { steps: u64, squared_gap_bound: f64 },
    /// `ε_n ≤ 0`: use [`best_iterate_bound`], which decays as `1/T`.
    ZeroLoss,
}

fn bound_constant<G: Game + ?Sized>(game: &G, eta: f64) -> f64 {
    let max_d_sq = game.actions().iter().map(|&d| geometry::diameter(d).powi(2)).fold(0.0, f64::max);
    let max_b = utility_norm_bounds(game).into_iter().fold(0.0, f64::max);
    max_d_sq / (eta * eta) + max_b * max_b
}

pub fn horizon<G: Game + ?Sized>(game: &G, efficiency_loss: f64, mu: f64, eta: f64) -> Result<Horizon, SmoothnessError> {
    if !(eta > 0.0) || !(mu > -1.0) {
        return Err(SmoothnessError::InvalidParameter(format!("need η > 0 and μ > −1, got ({eta}, {mu})")));
    }
    if efficiency_loss <= 0.0 {
        return Ok(Horizon::ZeroLoss);
    }
    let (opt, _) = optimal_welfare(game)?;
    if !(opt > 0.0) {
        return Err(SmoothnessError::NonPositiveOpt(opt));
    }
    let scaled = efficiency_loss * (1.0 + mu) * opt;
    let d_sq = geometry::product_diameter_sq(game.actions());
    let steps = (d_sq / (2.0 * eta * scaled)).ceil() as u64;
    Ok(Horizon::Finite { steps, squared_gap_bound: 32.0 * bound_constant(game, eta) * eta * scaled })
}

/// `(8/T)(max_i D_i²/η² + max_i B_i²) D_X²`.
pub fn best_iterate_bound<G: Game + ?Sized>(game: &G, eta: f64, steps: usize) -> f64 {
    8.0 / steps as f64 * bound_constant(game, eta) * geometry::product_diameter_sq(game.actions())
}

/// Minimum horizon `64 L² D_X⁴ / ε₀²` for the CGD efficiency guarantee.
pub fn cgd_horizon_gate(lipschitz: f64, dims: &[usize], eps0: f64) -> f64 {
    64.0 * lipschitz * lipschitz * geometry::product_diameter_sq(dims).powi(2) / (eps0 * eps0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::builtin;

    #[test]
    fn rejects_bad_parameters() {
        let g = builtin("mp").unwrap().game;
        assert!(is_smooth(&g, 0.0, 0.0).is_err());
        assert!(rpoa(&g, -1.0).is_err());
        assert!(weighted_rpoa(&g, Some(0.5), None).is_err());
    }

    #[test]
    fn zero_loss_branch() {
        let g = builtin("mp").unwrap().game;
        assert_eq!(horizon(&g, 0.0, 0.0, 0.1).unwrap(), Horizon::ZeroLoss);
        let b1 = best_iterate_bound(&g, 0.1, 100);
        let b2 = best_iterate_bound(&g, 0.1, 200);
        assert!((b1 / b2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tiny_lambda_holds() {
        let g = builtin("counterexample").unwrap().game;
        assert!(is_smooth(&g, 1e-9, 0.0).unwrap().holds);
    }
}
