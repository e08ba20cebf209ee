//! Exact equilibrium enumeration at desk scale and price-of-anarchy ratios.

use crate::games::{
    check_enumerable, for_each_profile, optimal_welfare, pure_welfare, social_welfare, Game, GameError, MixedProfile,
    NormalFormGame, DEFAULT_ENUMERATION_CAP,
};
use crate::metrics::ne_gap;

/// Gap threshold for accepting a profile as an exact equilibrium.
pub const NE_TOL: f64 = 1e-8;
/// PoA^ε grid spacing per simplex coordinate.
pub const GRID_RESOLUTION: f64 = 0.02;
/// Largest number of grid profile pairs PoA^ε will scan.
pub const GRID_CAP: usize = 5_000_000;

#[derive(Debug, thiserror::Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("support enumeration needs a two-player game with at most 5 actions each, got {0:?}")]
    NotSmallBimatrix(Vec<usize>),
    #[error("undetermined: no equilibrium found by the available enumeration")]
    Undetermined,
    #[error("OPT = {0} must be positive")]
    NonPositiveOpt(f64),
    #[error("grid of {0} profile pairs exceeds the cap of {GRID_CAP}")]
    GridTooLarge(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub profile: MixedProfile,
    pub welfare: f64,
    pub ne_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EquilibriumSet {
    pub equilibria: Vec<Equilibrium>,
    /// Some equilibrium came from a rank-deficient support system (a continuum may exist).
    pub degenerate: bool,
}

impl EquilibriumSet {
    pub fn len(&self) -> usize {
        self.equilibria.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equilibria.is_empty()
    }

    fn push_unique<G: Game + ?Sized>(&mut self, game: &G, profile: MixedProfile) -> Result<bool, GameError> {
        if self.equilibria.iter().any(|e| e.profile.distance(&profile) <= NE_TOL) {
            return Ok(false);
        }
        let gap = ne_gap(game, &profile)?.ne_gap;
        if gap > NE_TOL {
            return Ok(false);
        }
        let welfare = social_welfare(game, &profile)?;
        self.equilibria.push(Equilibrium { profile, welfare, ne_gap: gap });
        Ok(true)
    }
}

/// Every pure profile where no player gains more than 1e-9 by deviating.
pub fn pure_nash<G: Game + ?Sized>(game: &G) -> Result<EquilibriumSet, EquilibriumError> {
    let actions = game.actions().to_vec();
    check_enumerable(&actions, DEFAULT_ENUMERATION_CAP)?;
    let mut found = Vec::new();
    let mut buf = Vec::new();
    for_each_profile(&actions, |_, a| {
        let stable = (0..actions.len()).all(|i| {
            let current = game.pure_utility(i, a);
            buf.clear();
            buf.extend_from_slice(a);
            (0..actions[i]).all(|b| {
                buf[i] = b;
                game.pure_utility(i, &buf) <= current + 1e-9
            })
        });
        if stable {
            found.push(a.to_vec());
        }
    });
    let mut set = EquilibriumSet::default();
    for a in found {
        let profile = MixedProfile::pure(&actions, &a)?;
        let gap = ne_gap(game, &profile)?.ne_gap;
        set.equilibria.push(Equilibrium { profile, welfare: pure_welfare(game, &a), ne_gap: gap });
    }
    Ok(set)
}

/// Solution of a possibly non-square linear system.
struct SolveOutcome {
    x: Vec<f64>,
    rank_deficient: bool,
}

/// Gaussian elimination with partial pivoting on `m × n` system `M x = r`; free variables set to 0.
fn solve_system(mut m: Vec<Vec<f64>>, mut r: Vec<f64>, n: usize) -> Option<SolveOutcome> {
    const TOL: f64 = 1e-10;
    let rows = m.len();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == rows {
            break;
        }
        let (best, val) = (row..rows)
            .map(|k| (k, m[k][col].abs()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= TOL {
            continue;
        }
        m.swap(row, best);
        r.swap(row, best);
        let p = m[row][col];
        for k in 0..rows {
            if k != row && m[k][col] != 0.0 {
                let f = m[k][col] / p;
                for j in col..n {
                    m[k][j] -= f * m[row][j];
                }
                r[k] -= f * r[row];
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if r[row..].iter().any(|v| v.abs() > 1e-9) {
        return None;
    }
    let mut x = vec![0.0; n];
    for (k, &col) in pivot_cols.iter().enumerate() {
        x[col] = r[k] / m[k][col];
    }
    Some(SolveOutcome { rank_deficient: pivot_cols.len() < n, x })
}

/// Distribution on `support` making the opponent indifferent over `opp_support`.
/// `payoff(own, opp)` is the opponent's payoff.
fn indifference(
    support: &[usize],
    opp_support: &[usize],
    size: usize,
    payoff: impl Fn(usize, usize) -> f64,
) -> Option<(Vec<f64>, bool)> {
    let k = support.len();
    // Unknowns: k probabilities and the common value v.
    let mut m = Vec::with_capacity(opp_support.len() + 1);
    let mut r = Vec::with_capacity(opp_support.len() + 1);
    for &j in opp_support {
        let mut row: Vec<f64> = support.iter().map(|&s| payoff(s, j)).collect();
        row.push(-1.0);
        m.push(row);
        r.push(0.0);
    }
    let mut sum_row = vec![1.0; k];
    sum_row.push(0.0);
    m.push(sum_row);
    r.push(1.0);
    let out = solve_system(m, r, k + 1)?;
    if out.x[..k].iter().any(|&p| p < -1e-9) {
        return None;
    }
    let mut full = vec![0.0; size];
    for (&s, &p) in support.iter().zip(&out.x) {
        full[s] = p.max(0.0);
    }
    let total: f64 = full.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    full.iter_mut().for_each(|p| *p /= total);
    Some((full, out.rank_deficient))
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n)).map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect()).collect()
}

/// All equilibria of a small bimatrix game found by support enumeration over every support pair.
pub fn bimatrix_nash(game: &NormalFormGame) -> Result<EquilibriumSet, EquilibriumError> {
    let dims = game.actions().to_vec();
    if dims.len() != 2 || dims.iter().any(|&d| d > 5) {
        return Err(EquilibriumError::NotSmallBimatrix(dims));
    }
    let (a, b) = game.bimatrix_parts().expect("two players");
    let mut set = EquilibriumSet::default();
    for s1 in subsets(dims[0]) {
        for s2 in subsets(dims[1]) {
            // Row mix makes the column player indifferent on s2, and vice versa.
            let Some((x, dx)) = indifference(&s1, &s2, dims[0], |i, j| b[i][j]) else { continue };
            let Some((y, dy)) = indifference(&s2, &s1, dims[1], |j, i| a[i][j]) else { continue };
            let profile = MixedProfile::new(vec![x, y])?;
            if set.push_unique(game, profile)? && (dx || dy) {
                set.degenerate = true;
            }
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoaMode {
    /// Least efficient equilibrium.
    Worst,
    /// Most efficient equilibrium.
    Best,
}

/// Equilibrium welfare over `OPT`. Bimatrix games (≤ 5 actions) use support enumeration;
/// otherwise only pure equilibria are considered. With `eps`, grid points with
/// `NEGap ≤ ε` join the exact set.
pub fn poa(game: &NormalFormGame, mode: PoaMode, eps: Option<f64>) -> Result<f64, EquilibriumError> {
    let (opt, _) = optimal_welfare(game)?;
    if !(opt > 0.0) {
        return Err(EquilibriumError::NonPositiveOpt(opt));
    }
    let small_bimatrix = game.num_players() == 2 && game.actions().iter().all(|&d| d <= 5);
    let set = if small_bimatrix { bimatrix_nash(game)? } else { pure_nash(game)? };
    let mut welfare: Vec<f64> = set.equilibria.iter().map(|e| e.welfare).collect();
    if let Some(eps) = eps {
        if !small_bimatrix {
            return Err(EquilibriumError::NotSmallBimatrix(game.actions().to_vec()));
        }
        welfare.extend(grid_eps_welfare(game, eps)?);
    }
    let pick = match mode {
        PoaMode::Worst => welfare.iter().copied().reduce(f64::min),
        PoaMode::Best => welfare.iter().copied().reduce(f64::max),
    };
    pick.map(|w| w / opt).ok_or(EquilibriumError::Undetermined)
}

fn simplex_grid(d: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(d: usize, left: usize, steps: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == d - 1 {
            cur.push(left);
            out.push(cur.iter().map(|&k| k as f64 / steps as f64).collect());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(d, left - k, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, steps, steps, &mut Vec::new(), &mut out);
    out
}

fn grid_eps_welfare(game: &NormalFormGame, eps: f64) -> Result<Vec<f64>, EquilibriumError> {
    let steps = (1.0 / GRID_RESOLUTION).round() as usize;
    let gx = simplex_grid(game.actions()[0], steps);
    let gy = simplex_grid(game.actions()[1], steps);
    let pairs = gx.len().saturating_mul(gy.len());
    if pairs > GRID_CAP {
        return Err(EquilibriumError::GridTooLarge(pairs));
    }
    let (a, b) = game.bimatrix_parts().expect("two players");
    let mut out = Vec::new();
    for x in &gx {
        // Column payoffs against x, and row payoffs are formed per y below.
        let bx: Vec<f64> = (0..b[0].len()).map(|j| x.iter().zip(&b).map(|(p, row)| p * row[j]).sum()).collect();
        for y in &gy {
            let ay: Vec<f64> = a.iter().map(|row| row.iter().zip(y).map(|(r, q)| r * q).sum()).collect();
            let u1: f64 = x.iter().zip(&ay).map(|(p, v)| p * v).sum();
            let u2: f64 = y.iter().zip(&bx).map(|(q, v)| q * v).sum();
            let g1 = ay.iter().copied().fold(f64::NEG_INFINITY, f64::max) - u1;
            let g2 = bx.iter().copied().fold(f64::NEG_INFINITY, f64::max) - u2;
            if g1.max(g2) <= eps {
                out.push(u1 + u2);
            }
        }
    }
    Ok(out)
}
