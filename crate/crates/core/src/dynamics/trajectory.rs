use std::io::Write;

use crate::games::{dot, Game, GameError, MixedProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Ogd,
    Cgd,
    /// A prescribed sequence of profiles, no learning.
    Replay,
}

/// Flat record of a run. Step `t` (0-based) is round `t + 1` of the dynamics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub(crate) algorithm: Algorithm,
    pub(crate) eta: f64,
    pub(crate) dims: Vec<usize>,
    pub(crate) offsets: Vec<usize>,
    pub(crate) width: usize,
    pub(crate) steps: usize,
    pub(crate) played: Vec<f64>,
    pub(crate) utilities: Vec<f64>,
    /// OGD: `x̂` for rounds `1..=T+1`.
    pub(crate) secondary: Vec<f64>,
    /// OGD: predictions `m`.
    pub(crate) predictions: Vec<f64>,
    /// CGD: the profile the first step anchors on.
    pub(crate) initial: Vec<f64>,
    pub(crate) anchors: Vec<f64>,
    pub(crate) anchor_utilities: Vec<f64>,
    pub(crate) residuals: Vec<f64>,
    pub(crate) tolerances: Vec<f64>,
    pub(crate) iterations: Vec<usize>,
}

impl Trajectory {
    pub(crate) fn empty(algorithm: Algorithm, eta: f64, dims: &[usize], capacity: usize) -> Self {
        let mut offsets = vec![0];
        for d in dims {
            offsets.push(offsets.last().unwrap() + d);
        }
        let width = *offsets.last().unwrap();
        Trajectory {
            algorithm,
            eta,
            dims: dims.to_vec(),
            offsets,
            width,
            steps: 0,
            played: Vec::with_capacity(capacity * width),
            utilities: Vec::with_capacity(capacity * width),
            secondary: Vec::new(),
            predictions: Vec::new(),
            initial: Vec::new(),
            anchors: Vec::new(),
            anchor_utilities: Vec::new(),
            residuals: Vec::new(),
            tolerances: Vec::new(),
            iterations: Vec::new(),
        }
    }

    /// Records a fixed sequence of profiles, evaluating `F` at each.
    pub fn replay<G: Game + ?Sized>(game: &G, profiles: &[MixedProfile]) -> Result<Self, GameError> {
        let mut traj = Trajectory::empty(Algorithm::Replay, 0.0, game.actions(), profiles.len());
        for x in profiles {
            x.check_shape(game.actions())?;
            traj.played.extend_from_slice(x.as_flat());
            for i in 0..game.num_players() {
                traj.utilities.extend(game.utility_vector(i, x)?);
            }
            traj.steps += 1;
        }
        Ok(traj)
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn len(&self) -> usize {
        self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps == 0
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_players(&self) -> usize {
        self.dims.len()
    }

    fn slice<'a>(&self, buf: &'a [f64], t: usize, i: usize) -> &'a [f64] {
        let base = t * self.width;
        &buf[base + self.offsets[i]..base + self.offsets[i + 1]]
    }

    /// `x_i^{(t+1)}`.
    pub fn played(&self, t: usize, i: usize) -> &[f64] {
        self.slice(&self.played, t, i)
    }

    pub fn played_profile(&self, t: usize) -> MixedProfile {
        MixedProfile::from_flat(&self.dims, self.played[t * self.width..(t + 1) * self.width].to_vec())
    }

    /// Observed `u_i(x_{-i}^{(t+1)})`.
    pub fn utility(&self, t: usize, i: usize) -> &[f64] {
        self.slice(&self.utilities, t, i)
    }

    pub fn has_ogd_state(&self) -> bool {
        self.algorithm == Algorithm::Ogd
    }

    /// `x̂_i^{(t+1)}` for `t ∈ 0..=T`.
    pub fn secondary(&self, t: usize, i: usize) -> Option<&[f64]> {
        self.has_ogd_state().then(|| self.slice(&self.secondary, t, i))
    }

    /// `m_i^{(t+1)}`.
    pub fn prediction(&self, t: usize, i: usize) -> Option<&[f64]> {
        self.has_ogd_state().then(|| self.slice(&self.predictions, t, i))
    }

    /// CGD anchor `w_i^{(t+1)}`.
    pub fn anchor(&self, t: usize, i: usize) -> Option<&[f64]> {
        (self.algorithm == Algorithm::Cgd).then(|| self.slice(&self.anchors, t, i))
    }

    /// `u_i(w_{-i}^{(t+1)})`.
    pub fn anchor_utility(&self, t: usize, i: usize) -> Option<&[f64]> {
        (self.algorithm == Algorithm::Cgd).then(|| self.slice(&self.anchor_utilities, t, i))
    }

    pub fn initial(&self, i: usize) -> Option<&[f64]> {
        (self.algorithm == Algorithm::Cgd).then(|| &self.initial[self.offsets[i]..self.offsets[i + 1]])
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn tolerances(&self) -> &[f64] {
        &self.tolerances
    }

    pub fn iterations(&self) -> &[usize] {
        &self.iterations
    }

    /// `u_i(x^{(t+1)})`.
    pub fn realized_utility(&self, t: usize, i: usize) -> f64 {
        dot(self.played(t, i), self.utility(t, i))
    }

    pub fn br_gap(&self, t: usize, i: usize) -> f64 {
        let u = self.utility(t, i);
        let best = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (best - dot(self.played(t, i), u)).max(0.0)
    }

    pub fn ne_gap(&self, t: usize) -> f64 {
        (0..self.num_players()).map(|i| self.br_gap(t, i)).fold(0.0, f64::max)
    }

    /// `SW(x^{(t+1)}) = ⟨x, F(x)⟩`.
    pub fn welfare(&self, t: usize) -> f64 {
        (0..self.num_players()).map(|i| self.realized_utility(t, i)).sum()
    }

    /// CSV with columns `t`, every strategy coordinate `x{i}_{a}`, `negap`, `sw`. Rounds are 1-based.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        for (i, &d) in self.dims.iter().enumerate() {
            header.extend((0..d).map(|a| format!("x{i}_{a}")));
        }
        header.push("negap".into());
        header.push("sw".into());
        w.write_record(&header)?;
        for t in 0..self.steps {
            let mut rec = vec![(t + 1).to_string()];
            rec.extend(self.played[t * self.width..(t + 1) * self.width].iter().map(f64::to_string));
            rec.push(self.ne_gap(t).to_string());
            rec.push(self.welfare(t).to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}
