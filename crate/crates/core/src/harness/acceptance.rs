//! The acceptance criteria as executable checks.

use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cmd_scan, write_scan_csv, ScanConfig};
use crate::bayesian::{agent_form, agent_profile, bne_gap, BayesStrategy, BayesianGame};
use crate::dynamics::{default_ogd_eta, run_cgd, run_ogd, CgdSchedule, Trajectory};
use crate::equilibria::bimatrix_nash;
use crate::games::{
    builtin, builtin_names, eliminate_dominated, expected_utility, optimal_welfare, pure_welfare,
    random_constant_sum_bimatrix, random_game, random_graphical, random_polymatrix, AnyGame, Game, MixedProfile,
    NormalFormGame, BARMAN_DEMO_K,
};
use crate::geometry::{self, project_simplex};
use crate::lp::{LinearProgram, LpStatus};
use crate::metrics::{avg_cce_gap, best_iterate, path_length_check, regrets, rvu_audit};
use crate::oracle;
use crate::smoothness::{best_iterate_bound, is_smooth, minty_certificate, rpoa};

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Measured values against their thresholds.
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<34} {:>7.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

type Checked = Result<(bool, String), String>;

fn finish(id: u8, name: &'static str, start: Instant, outcome: Checked) -> CriterionReport {
    let (passed, detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// An OGD run plus the smoothness data its path-length check uses.
struct Run {
    label: String,
    game: NormalFormGame,
    traj: Trajectory,
    seconds: f64,
    opt: f64,
    efficiency_loss: f64,
    mu: f64,
}

fn ogd_run(label: String, game: NormalFormGame, init: &MixedProfile, eta: f64, steps: usize) -> Result<Run, String> {
    let start = Instant::now();
    let traj = run_ogd(&game, eta, steps, init).map_err(err)?;
    let seconds = start.elapsed().as_secs_f64();
    let opt = optimal_welfare(&game).map_err(err)?.0;
    // Certificate with μ pinned near 0 (z ≥ 1); OPT ≤ 0 makes the path term vanish anyway.
    let (efficiency_loss, mu) = if opt > 0.0 {
        let c = rpoa(&game, 1.0).map_err(err)?;
        (c.efficiency_loss(), c.mu.expect("z ≥ 1 is never degenerate"))
    } else {
        (0.0, 0.0)
    };
    Ok(Run { label, game, traj, seconds, opt, efficiency_loss, mu })
}

fn min_ne_gap(traj: &Trajectory) -> f64 {
    (0..traj.len()).map(|t| traj.ne_gap(t)).fold(f64::INFINITY, f64::min)
}

pub const SHAPLEY_STEPS: usize = 100_000;
pub const ZERO_SUM_STEPS: usize = 10_000;
pub const CGD_STEPS: usize = 2_000;

/// Runs criteria, sharing the OGD trajectories that several of them audit.
#[derive(Default)]
pub struct Suite {
    shapley3: OnceLock<Result<Run, String>>,
    counterexample: OnceLock<Result<Run, String>>,
    zero_sum: OnceLock<Result<Vec<Run>, String>>,
    mp: OnceLock<Result<Run, String>>,
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    fn builtin_run<'a>(cell: &'a OnceLock<Result<Run, String>>, name: &str, eta: f64, steps: usize) -> Result<&'a Run, String> {
        cell.get_or_init(|| {
            let b = builtin(name).map_err(err)?;
            ogd_run(name.to_string(), b.game, &b.init, eta, steps)
        })
        .as_ref()
        .map_err(Clone::clone)
    }

    fn shapley3(&self) -> Result<&Run, String> {
        Self::builtin_run(&self.shapley3, "shapley3", 0.01, SHAPLEY_STEPS)
    }

    fn counterexample(&self) -> Result<&Run, String> {
        Self::builtin_run(&self.counterexample, "counterexample", 0.01, SHAPLEY_STEPS)
    }

    /// Started away from its uniform equilibrium so the regrets are not trivially zero.
    fn mp(&self) -> Result<&Run, String> {
        self.mp
            .get_or_init(|| {
                let g = builtin("mp").map_err(err)?.game;
                let init = MixedProfile::new(vec![vec![0.8, 0.2], vec![0.3, 0.7]]).map_err(err)?;
                ogd_run("mp".into(), g, &init, 0.05, ZERO_SUM_STEPS)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn zero_sum(&self) -> Result<&[Run], String> {
        self.zero_sum
            .get_or_init(|| {
                (0..10u64)
                    .map(|seed| {
                        let g = random_constant_sum_bimatrix(5, 5, 0.0, seed).map_err(err)?;
                        let eta = default_ogd_eta(&g);
                        ogd_run(format!("zero-sum seed {seed}"), g, &MixedProfile::uniform(&[5, 5]), eta, ZERO_SUM_STEPS)
                    })
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn ids() -> std::ops::RangeInclusive<u8> {
        1..=11
    }

    pub fn run(&self, id: u8) -> CriterionReport {
        match id {
            1 => self.shapley_nonconvergence(),
            2 => self.smooth_nonconvergence(),
            3 => {
                let start = Instant::now();
                let dom = builtin("dominance").map(|b| b.game);
                match dom {
                    Ok(dom) => rpoa_goldens(&dom),
                    Err(e) => finish(3, RPOA_NAME, start, Err(err(e))),
                }
            }
            4 => self.zero_sum_convergence(),
            5 => self.rvu(),
            6 => cgd_guarantees(),
            7 => minty_constant_sum(),
            8 => lipschitz_bounds(),
            9 => self.regret_signs(),
            10 => scan_determinism(),
            11 => oracle_suites(),
            _ => CriterionReport { id, name: "unknown", passed: false, detail: "no such criterion".into(), seconds: 0.0 },
        }
    }

    pub fn run_all(&self) -> Vec<CriterionReport> {
        Self::ids().map(|id| self.run(id)).collect()
    }

    fn shapley_nonconvergence(&self) -> CriterionReport {
        let start = Instant::now();
        let outcome = self.shapley3().map(|r| {
            let gap = min_ne_gap(&r.traj);
            (
                gap >= 0.18 && r.seconds < 30.0,
                format!("min NEGap {gap:.5} (≥ 0.18), dynamics {:.2}s (< 30s)", r.seconds),
            )
        });
        finish(1, "Shapley-3 non-convergence", start, outcome)
    }

    fn smooth_nonconvergence(&self) -> CriterionReport {
        let start = Instant::now();
        let outcome = (|| {
            let r = self.counterexample()?;
            let smooth = is_smooth(&r.game, 0.125, 0.0).map_err(err)?.holds;
            let gap = min_ne_gap(&r.traj);
            Ok((
                smooth && (r.opt - 1.6).abs() <= 1e-9 && gap >= 0.04,
                format!("(0.125, 0)-smooth {smooth}, OPT {} (1.6), min NEGap {gap:.5} (≥ 0.04)", r.opt),
            ))
        })();
        finish(2, "smooth but nonconvergent", start, outcome)
    }

    fn zero_sum_convergence(&self) -> CriterionReport {
        let start = Instant::now();
        let outcome = self.zero_sum().and_then(|runs| {
            let mut ok = true;
            let mut worst_gap: f64 = 0.0;
            let mut worst_ratio: f64 = 0.0;
            let mut seconds = 0.0;
            for r in runs {
                let gap = min_ne_gap(&r.traj);
                let best = best_iterate(&r.traj).map_err(err)?.squared_gap_sum;
                let bound = best_iterate_bound(&r.game, r.traj.eta(), r.traj.len());
                ok &= gap <= 0.05 && best <= bound + 1e-6;
                worst_gap = worst_gap.max(gap);
                worst_ratio = worst_ratio.max(best / bound);
                seconds += r.seconds;
            }
            ok &= seconds < 60.0;
            Ok((
                ok,
                format!(
                    "{} games: max min-NEGap {worst_gap:.4} (≤ 0.05), best-iterate/bound ≤ {worst_ratio:.2e}, {seconds:.2}s (< 60s)",
                    runs.len()
                ),
            ))
        });
        finish(4, "zero-sum convergence", start, outcome)
    }

    fn rvu(&self) -> CriterionReport {
        let start = Instant::now();
        let outcome = (|| {
            let mut runs: Vec<&Run> = vec![self.shapley3()?, self.counterexample()?];
            runs.extend(self.zero_sum()?);
            let mut failures = Vec::new();
            let (mut min_rvu, mut min_path) = (f64::INFINITY, f64::INFINITY);
            for r in &runs {
                let audit = rvu_audit(&r.traj).map_err(err)?;
                let path = path_length_check(&audit, &r.traj, r.efficiency_loss, r.mu, r.opt);
                min_rvu = min_rvu.min(audit.min_player_slack());
                min_path = min_path.min(path.slack);
                if audit.min_player_slack() < -1e-6 || path.slack < -1e-6 {
                    failures.push(r.label.clone());
                }
            }
            Ok((
                failures.is_empty(),
                format!(
                    "{} trajectories, min RVU slack {min_rvu:.3e}, min path-length slack {min_path:.3e}{}",
                    runs.len(),
                    if failures.is_empty() { String::new() } else { format!(", failing: {failures:?}") }
                ),
            ))
        })();
        finish(5, "RVU and path length", start, outcome)
    }

    fn regret_signs(&self) -> CriterionReport {
        let start = Instant::now();
        let outcome = (|| {
            let mut runs: Vec<&Run> = self.zero_sum()?.iter().collect();
            runs.push(self.mp()?);
            let mut worst: f64 = f64::INFINITY;
            let mut ok = true;
            for r in &runs {
                let sum = regrets(&r.game, &r.traj, None).map_err(err)?.sum;
                let scaled = sum / r.traj.len() as f64;
                worst = worst.min(scaled);
                ok &= sum >= -1e-6 * r.traj.len() as f64;
            }
            let b = builtin("barman-demo").map_err(err)?;
            let profile = [1usize, 1];
            let welfare = pure_welfare(&b.game, &profile);
            let played = MixedProfile::pure(b.game.actions(), &profile).map_err(err)?;
            let traj = Trajectory::replay(&b.game, &vec![played; 100]).map_err(err)?;
            let fallback: Vec<usize> = b.game.actions().iter().map(|d| d - 1).collect();
            let fixed = regrets(&b.game, &traj, Some(&fallback)).map_err(err)?.fixed_sum().expect("comparator given");
            ok &= welfare > BARMAN_DEMO_K && fixed < 0.0;
            Ok((
                ok,
                format!(
                    "{} constant-sum runs, min ΣReg/T {worst:.3e} (≥ −1e-6); barman SW {welfare} > k {BARMAN_DEMO_K}, ΣReg(b) {fixed:.3} (< 0)",
                    runs.len()
                ),
            ))
        })();
        finish(9, "sum-of-regrets sign", start, outcome)
    }
}

const RPOA_NAME: &str = "rPoA goldens";

/// Criterion 3 with the dominance game supplied, so a tampered copy can be checked.
pub fn rpoa_goldens(dominance: &NormalFormGame) -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let og = rpoa(&builtin("shapley2").map_err(err)?.game, 0.0).map_err(err)?.rho;
        let dom = rpoa(dominance, 0.0).map_err(err)?.rho;
        let reduced = eliminate_dominated(dominance).map_err(err)?;
        let elim = rpoa(&reduced.game, 0.0).map_err(err)?.rho;
        let mut ok = og.abs() <= 1e-6 && (dom - 0.5).abs() <= 1e-6 && (elim - 1.0).abs() <= 1e-6;
        let mut constant_sum = Vec::new();
        for name in builtin_names() {
            let g = builtin(name).map_err(err)?.game;
            if g.constant_sum().is_constant_sum {
                let c = rpoa(&g, 0.0).map_err(err)?;
                ok &= (c.rho - 1.0).abs() <= 1e-6 && c.flagged_degenerate;
                constant_sum.push(format!("{name} ρ={:.6} degenerate={}", c.rho, c.flagged_degenerate));
            }
        }
        ok &= !constant_sum.is_empty();
        Ok((
            ok,
            format!("G_OG {og:.6} (0), G_DOM {dom:.6} (0.5), reduced {elim:.6} (1); {}", constant_sum.join(", ")),
        ))
    })();
    finish(3, RPOA_NAME, start, outcome)
}

fn cgd_guarantees() -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let mut ok = true;
        let (mut min_slack, mut max_cce_ratio, mut max_residual_ratio) = (f64::INFINITY, 0.0f64, 0.0f64);
        for seed in 0..5u64 {
            let g = random_game(3, &[2, 2, 2], seed).map_err(err)?;
            let l = g.lipschitz_bound();
            let eta = 0.5 / l;
            let traj = run_cgd(&g, &CgdSchedule::for_game(&g, eta), CGD_STEPS, &MixedProfile::uniform(&[2, 2, 2]))
                .map_err(err)?;
            let dx_sq = geometry::product_diameter_sq(g.actions());
            let cce = avg_cce_gap(&g, &traj).map_err(err)?;
            let cce_bound = 4.0 * l * dx_sq / CGD_STEPS as f64;
            ok &= cce <= cce_bound + 1e-6;
            max_cce_ratio = max_cce_ratio.max(cce / cce_bound);
            for (r, e) in traj.residuals().iter().zip(traj.tolerances()) {
                ok &= r <= e;
                max_residual_ratio = max_residual_ratio.max(r / e);
            }
            let reg = regrets(&g, &traj, None).map_err(err)?;
            for i in 0..3 {
                let d_sq = geometry::diameter(g.actions()[i]).powi(2);
                let (mut gaps, mut drift) = (0.0, 0.0);
                for t in 0..traj.len() {
                    gaps += traj.br_gap(t, i).powi(2);
                    drift += geometry::dist_sq(traj.anchor_utility(t, i).expect("CGD run"), traj.utility(t, i));
                }
                let bound = 3.0 * l * d_sq - gaps / (8.0 * l * d_sq) + eta / 2.0 * drift;
                let slack = bound - reg.per_player[i];
                ok &= slack >= -1e-6;
                min_slack = min_slack.min(slack);
            }
        }
        Ok((
            ok,
            format!(
                "5 games: max CCE gap/bound {max_cce_ratio:.3}, min per-player slack {min_slack:.3e}, max residual/ε {max_residual_ratio:.3}"
            ),
        ))
    })();
    finish(6, "CGD guarantees", start, outcome)
}

fn minty_constant_sum() -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let (mut feasible, mut agree) = (0, 0);
        let mut worst: f64 = f64::INFINITY;
        for seed in 0..20u64 {
            let g = random_constant_sum_bimatrix(3, 3, 1.0, seed).map_err(err)?;
            let m = minty_certificate(&g).map_err(err)?;
            let brute = oracle::minty_slack_brute_force(&g, &m.profile);
            worst = worst.min(brute);
            feasible += m.feasible as usize;
            agree += (m.feasible == (brute >= -1e-9)) as usize;
        }
        Ok((feasible == 20 && agree == 20, format!("feasible {feasible}/20, agree {agree}/20, min brute-force slack {worst:.3e}")))
    })();
    finish(7, "Minty on constant-sum games", start, outcome)
}

fn lipschitz_bounds() -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let mut worst: [f64; 3] = [0.0; 3];
        for seed in 0..20u64 {
            let games = [
                AnyGame::Normal(random_game(3, &[2, 3, 2], seed).map_err(err)?),
                AnyGame::Graphical(random_graphical(&[2, 3, 2, 2, 3], 2, seed).map_err(err)?),
                AnyGame::Polymatrix(random_polymatrix(&[3, 2, 3, 2], seed).map_err(err)?),
            ];
            for (k, g) in games.iter().enumerate() {
                let ratio = oracle::sampled_lipschitz_ratio(g, 200, seed) / g.lipschitz_bound();
                worst[k] = worst[k].max(ratio);
            }
        }
        Ok((
            worst.iter().all(|&r| r <= 1.0),
            format!(
                "max sampled/bound: normal {:.3}, graphical {:.3}, polymatrix {:.3} (≤ 1)",
                worst[0], worst[1], worst[2]
            ),
        ))
    })();
    finish(8, "Lipschitz bounds", start, outcome)
}

fn scan_determinism() -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let dir = tempfile::tempdir().map_err(err)?;
        let mut files = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("scan{k}.csv"));
            let cfg = ScanConfig { count: 10, rows: 3, cols: 3, seed: 1, out: Some(path.clone()) };
            let rows = cmd_scan(&cfg).map_err(err)?;
            if rows.len() != 10 {
                return Ok((false, format!("{} rows, expected 10", rows.len())));
            }
            files.push(std::fs::read(&path).map_err(err)?);
        }
        let mut buf = Vec::new();
        let rows = cmd_scan(&ScanConfig { count: 10, rows: 3, cols: 3, seed: 1, out: None }).map_err(err)?;
        write_scan_csv(&rows, &mut buf).map_err(err)?;
        let min_gap = rows.iter().map(|r| r.poa_worst - r.rpoa).fold(f64::INFINITY, f64::min);
        let identical = files[0] == files[1] && files[0] == buf;
        Ok((identical, format!("10 rows, min poa_worst − rpoa {min_gap:.4} (≥ −1e-6), identical files {identical}")))
    })();
    finish(10, "PoA vs rPoA scan", start, outcome)
}

fn oracle_suites() -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut parts = Vec::new();
        let mut ok = true;

        let mut proj: f64 = 0.0;
        for _ in 0..40 {
            let v = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let p = project_simplex(&v).map_err(err)?;
            let g = oracle::grid_projection(&v, 1e-3);
            proj = proj.max(p.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
        ok &= proj <= 2e-3;
        parts.push(format!("projection {proj:.1e}"));

        let (mut lp_err, mut lp_mismatch): (f64, usize) = (0.0, 0);
        for _ in 0..40 {
            let (lp, _) = random_lp(&mut rng);
            let sol = lp.solve().map_err(err)?;
            match (sol.status, oracle::lp_vertex_value(&lp)) {
                (LpStatus::Optimal, Some(v)) => lp_err = lp_err.max((sol.value - v).abs()),
                (LpStatus::Infeasible, None) => {}
                _ => lp_mismatch += 1,
            }
        }
        ok &= lp_err <= 1e-6 && lp_mismatch == 0;
        parts.push(format!("LP {lp_err:.1e} ({lp_mismatch} status mismatches)"));

        let mut util: f64 = 0.0;
        for seed in 0..10u64 {
            let games = [
                AnyGame::Normal(random_game(3, &[2, 3, 4], seed).map_err(err)?),
                AnyGame::Graphical(random_graphical(&[2, 2, 3, 2], 2, seed).map_err(err)?),
                AnyGame::Polymatrix(random_polymatrix(&[3, 2, 2], seed).map_err(err)?),
            ];
            for g in &games {
                let x = oracle::random_profile(&mut rng, g.actions());
                for i in 0..g.num_players() {
                    let fast = expected_utility(g, i, &x).map_err(err)?;
                    util = util.max((fast - oracle::brute_force_utility(g, i, &x)).abs());
                }
            }
        }
        ok &= util <= 1e-9;
        parts.push(format!("utilities {util:.1e}"));

        let mut bimatrix_mismatch = 0;
        for _ in 0..200 {
            let a = [[rng.gen::<f64>(), rng.gen()], [rng.gen(), rng.gen()]];
            let b = [[rng.gen::<f64>(), rng.gen()], [rng.gen(), rng.gen()]];
            let g = NormalFormGame::bimatrix(&a.map(Vec::from), &b.map(Vec::from)).map_err(err)?;
            let found = bimatrix_nash(&g).map_err(err)?;
            let expected = oracle::bimatrix_2x2_equilibria(a, b);
            let matched = expected.iter().all(|(x, y)| {
                found.equilibria.iter().any(|e| {
                    let d = e.profile.strategy(0).iter().zip(x).chain(e.profile.strategy(1).iter().zip(y));
                    d.map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) <= 1e-8
                })
            });
            if !matched || found.len() != expected.len() {
                bimatrix_mismatch += 1;
            }
        }
        ok &= bimatrix_mismatch == 0;
        parts.push(format!("2×2 equilibria {bimatrix_mismatch}/200 mismatched"));

        let (iso, rescale) = agent_form_identities(&mut rng).map_err(err)?;
        ok &= iso <= 1e-9 && rescale <= 1e-9;
        parts.push(format!("agent form iso {iso:.1e}, rescaling {rescale:.1e}"));
        Ok((ok, parts.join("; ")))
    })();
    finish(11, "oracle suites", start, outcome)
}

/// Bounded random program: boxes on every variable, mixed row senses.
pub(crate) fn random_lp(rng: &mut impl Rng) -> (LinearProgram, usize) {
    let n = rng.gen_range(2..=4);
    let m = rng.gen_range(2..=5);
    let objective = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut lp = LinearProgram::new(objective);
    for j in 0..n {
        if rng.gen_bool(0.3) {
            lp.set_bounds(j, -3.0, 3.0);
        } else {
            lp.set_bounds(j, 0.0, 5.0);
        }
    }
    for _ in 0..m {
        let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let rhs = rng.gen_range(-1.0..2.0);
        if rng.gen_bool(0.25) {
            lp.add_ge(row, rhs);
        } else {
            lp.add_le(row, rhs);
        }
    }
    (lp, n)
}

fn agent_form_identities(rng: &mut ChaCha8Rng) -> Result<(f64, f64), crate::games::GameError> {
    let mut iso: f64 = 0.0;
    let mut rescale: f64 = 0.0;
    for seed in 0..10u64 {
        let base = random_game(2, &[3, 2], seed)?;
        let single = BayesianGame::new(
            base.actions().to_vec(),
            vec![1, 1],
            (0..2).map(|i| base.utilities(i).to_vec()).collect(),
            None,
        )?;
        let af = agent_form(&single)?;
        for i in 0..2 {
            let d = af.utilities(i).iter().zip(base.utilities(i)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            iso = iso.max(d);
        }

        let actions = vec![2, 3];
        let types = vec![2, 3];
        let cells: usize = actions.iter().product();
        let utilities = types.iter().map(|&t| (0..t * cells).map(|_| rng.gen::<f64>()).collect()).collect();
        let bg = BayesianGame::new(actions.clone(), types.clone(), utilities, None)?;
        let strategies = (0..2)
            .map(|i| (0..types[i]).map(|_| oracle::random_profile(rng, &[actions[i]]).strategy(0).to_vec()).collect())
            .collect();
        let s = BayesStrategy::new(&bg, strategies)?;
        let gaps = bne_gap(&bg, &s)?;
        let af = agent_form(&bg)?;
        let x = agent_profile(&bg, &s);
        for i in 0..2 {
            for v in 0..types[i] {
                let agent = bg.agent_index(i, v);
                let af_gap = crate::metrics::br_gap(&af, &x, agent)?;
                rescale = rescale.max((gaps[i][v] - types[i] as f64 * af_gap).abs());
            }
        }
    }
    Ok((iso, rescale))
}
