//! Dense two-phase simplex for `max c·y  s.t.  G y ≤ h,  l ≤ y ≤ u`.
//!
//! Bland's rule is used for both entering and leaving choices, so a fixed
//! input always produces the same pivot sequence.

const FEAS_TOL: f64 = 1e-7;
const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("ill-conditioned basis: pivot {value:e} at row {row}, column {col}; {detail}")]
    IllConditioned { row: usize, col: usize, value: f64, detail: String },
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; `-inf` when infeasible, `+inf` when unbounded.
    pub value: f64,
    /// Primal point (empty unless optimal).
    pub point: Vec<f64>,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LinearProgram {
    /// Maximizes `objective · y`. Variables start with bounds `[0, ∞)`.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram { objective, rows: Vec::new(), rhs: Vec::new(), lower: vec![0.0; n], upper: vec![f64::INFINITY; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.rows.iter().map(Vec::as_slice).zip(self.rhs.iter().copied())
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// `coeffs · y ≤ rhs`.
    pub fn add_le(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        self
    }

    /// `coeffs · y ≥ rhs`.
    pub fn add_ge(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.add_le(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    /// `coeffs · y = rhs`, stored as two inequalities.
    pub fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.add_ge(coeffs.clone(), rhs);
        self.add_le(coeffs, rhs)
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if let Some(k) = self.rows.iter().position(|r| r.len() != n) {
            return Err(LpError::Malformed(format!("constraint {k} has {} coefficients, expected {n}", self.rows[k].len())));
        }
        if self.objective.iter().chain(self.rows.iter().flatten()).chain(&self.rhs).any(|v| !v.is_finite()) {
            return Err(LpError::Malformed("non-finite coefficient".into()));
        }
        if self.lower.iter().chain(&self.upper).any(|v| v.is_nan()) {
            return Err(LpError::Malformed("NaN bound".into()));
        }
        if self.lower.iter().any(|&l| l == f64::INFINITY) || self.upper.iter().any(|&u| u == f64::NEG_INFINITY) {
            return Err(LpError::Malformed("empty bound interval".into()));
        }
        Ok(())
    }

    /// Largest violation of any constraint or bound at `y`, relative to `1 + |rhs|`.
    pub fn max_violation(&self, y: &[f64]) -> f64 {
        let rows = self.constraints().map(|(g, h)| {
            let lhs: f64 = g.iter().zip(y).map(|(a, b)| a * b).sum();
            (lhs - h) / (1.0 + h.abs())
        });
        let bounds = y.iter().enumerate().map(|(j, &v)| {
            ((self.lower[j] - v) / (1.0 + self.lower[j].abs())).max((v - self.upper[j]) / (1.0 + self.upper[j].abs()))
        });
        rows.chain(bounds).fold(0.0, f64::max)
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        solve(self)
    }
}

/// How an original variable maps to standard-form columns `y = offset + Σ sign·col`.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    Shift { col: usize, offset: f64 },
    Reflect { col: usize, offset: f64 },
    Split { pos: usize, neg: usize },
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    if (0..n).any(|j| lp.lower[j] > lp.upper[j]) {
        return Ok(infeasible(0));
    }

    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut extra_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (lo, hi) = (lp.lower[j], lp.upper[j]);
        let m = if lo.is_finite() {
            if hi.is_finite() {
                extra_rows.push((ncols, hi - lo));
            }
            VarMap::Shift { col: ncols, offset: lo }
        } else if hi.is_finite() {
            VarMap::Reflect { col: ncols, offset: hi }
        } else {
            ncols += 1;
            VarMap::Split { pos: ncols - 1, neg: ncols }
        };
        ncols += 1;
        maps.push(m);
    }

    let expand = |coeffs: &[f64]| -> (Vec<f64>, f64) {
        let mut row = vec![0.0; ncols];
        let mut shift = 0.0;
        for (c, m) in coeffs.iter().zip(&maps) {
            match *m {
                VarMap::Shift { col, offset } => {
                    row[col] += c;
                    shift += c * offset;
                }
                VarMap::Reflect { col, offset } => {
                    row[col] -= c;
                    shift += c * offset;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += c;
                    row[neg] -= c;
                }
            }
        }
        (row, shift)
    };

    let mut a_rows = Vec::new();
    let mut b = Vec::new();
    for (g, h) in lp.constraints() {
        let (row, shift) = expand(g);
        a_rows.push(row);
        b.push(h - shift);
    }
    for (col, width) in extra_rows {
        let mut row = vec![0.0; ncols];
        row[col] = 1.0;
        a_rows.push(row);
        b.push(width);
    }
    let (cost, cost_shift) = expand(&lp.objective);

    let mut tab = Tableau::build(&a_rows, &b, ncols);
    let phase1 = tab.has_artificials();
    if phase1 {
        let c1: Vec<f64> = (0..tab.ncols).map(|j| if j >= tab.first_art { -1.0 } else { 0.0 }).collect();
        tab.run(&c1, tab.ncols)?;
        let infeas = -tab.objective_value(&c1);
        let scale = 1.0 + b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if infeas > FEAS_TOL * scale {
            return Ok(infeasible(tab.pivots));
        }
        tab.drive_out_artificials();
    }
    let mut c2 = vec![0.0; tab.ncols];
    c2[..ncols].copy_from_slice(&cost);
    if tab.run(&c2, tab.first_art)? == RunOutcome::Unbounded {
        return Ok(LpSolution { status: LpStatus::Unbounded, value: f64::INFINITY, point: Vec::new(), pivots: tab.pivots });
    }

    let cols = tab.primal(ncols);
    let point: Vec<f64> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shift { col, offset } => offset + cols[col],
            VarMap::Reflect { col, offset } => offset - cols[col],
            VarMap::Split { pos, neg } => cols[pos] - cols[neg],
        })
        .collect();
    let value = cost.iter().zip(&cols).map(|(c, y)| c * y).sum::<f64>() + cost_shift;
    let violation = lp.max_violation(&point);
    if violation > FEAS_TOL {
        let (row, col, v) = tab.last_pivot.unwrap_or((0, 0, f64::NAN));
        return Err(LpError::IllConditioned {
            row,
            col,
            value: v,
            detail: format!("returned point violates a constraint by {violation:e}"),
        });
    }
    Ok(LpSolution { status: LpStatus::Optimal, value, point, pivots: tab.pivots })
}

fn infeasible(pivots: usize) -> LpSolution {
    LpSolution { status: LpStatus::Infeasible, value: f64::NEG_INFINITY, point: Vec::new(), pivots }
}

#[derive(Debug, PartialEq, Eq)]
enum RunOutcome {
    Optimal,
    Unbounded,
}

/// Row-major tableau `[A | b]` in canonical form w.r.t. `basis`.
struct Tableau {
    data: Vec<f64>,
    m: usize,
    ncols: usize,
    first_art: usize,
    basis: Vec<usize>,
    pivots: usize,
    last_pivot: Option<(usize, usize, f64)>,
}

impl Tableau {
    /// Columns: structural, one slack per row, then artificials for rows with negative rhs.
    fn build(a: &[Vec<f64>], b: &[f64], nx: usize) -> Self {
        let m = a.len();
        let n_art = b.iter().filter(|&&v| v < 0.0).count();
        let first_art = nx + m;
        let ncols = first_art + n_art;
        let width = ncols + 1;
        let mut data = vec![0.0; m * width];
        let mut basis = Vec::with_capacity(m);
        let mut art = first_art;
        for r in 0..m {
            let row = &mut data[r * width..(r + 1) * width];
            let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
            for (dst, v) in row.iter_mut().zip(&a[r]) {
                *dst = sign * v;
            }
            row[nx + r] = sign;
            row[ncols] = sign * b[r];
            if sign < 0.0 {
                row[art] = 1.0;
                basis.push(art);
                art += 1;
            } else {
                basis.push(nx + r);
            }
        }
        Tableau { data, m, ncols, first_art, basis, pivots: 0, last_pivot: None }
    }

    fn width(&self) -> usize {
        self.ncols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.ncols)
    }

    fn has_artificials(&self) -> bool {
        self.first_art < self.ncols
    }

    fn objective_value(&self, c: &[f64]) -> f64 {
        (0..self.m).map(|r| c[self.basis[r]] * self.rhs(r)).sum()
    }

    fn reduced_costs(&self, c: &[f64]) -> Vec<f64> {
        let mut d = c.to_vec();
        for r in 0..self.m {
            let cb = c[self.basis[r]];
            if cb != 0.0 {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= cb * self.at(r, j);
                }
            }
        }
        d
    }

    /// Primal simplex over columns `< allowed`, maximizing `c`.
    fn run(&mut self, c: &[f64], allowed: usize) -> Result<RunOutcome, LpError> {
        let limit = 50 * (self.m + self.ncols).max(200);
        let mut d = self.reduced_costs(c);
        let mut iters = 0;
        loop {
            let Some(enter) = (0..allowed).find(|&j| d[j] > COST_TOL) else {
                return Ok(RunOutcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, enter);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((br, best)) => {
                            if ratio < best - 1e-12 || (ratio <= best + 1e-12 && self.basis[r] < self.basis[br]) {
                                Some((r, ratio))
                            } else {
                                Some((br, best))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Ok(RunOutcome::Unbounded);
            };
            self.pivot(row, enter);
            let f = d[enter];
            if f != 0.0 {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= f * self.at(row, j);
                }
            }
            iters += 1;
            if iters > limit {
                return Err(LpError::IterationLimit(limit));
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width();
        let p = self.at(row, col);
        self.last_pivot = Some((row, col, p));
        self.pivots += 1;
        for v in &mut self.data[row * w..(row + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.data[row * w..(row + 1) * w].to_vec();
        for r in 0..self.m {
            if r == row {
                continue;
            }
            let f = self.at(r, col);
            if f == 0.0 {
                continue;
            }
            for (dst, src) in self.data[r * w..(r + 1) * w].iter_mut().zip(&pivot_row) {
                *dst -= f * src;
            }
            let rhs = &mut self.data[r * w + self.ncols];
            if *rhs < 0.0 && *rhs > -PIVOT_TOL {
                *rhs = 0.0;
            }
        }
        self.basis[row] = col;
    }

    /// After phase one, pivots artificials out of the basis or drops their (redundant) rows.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.m {
            if self.basis[r] < self.first_art {
                r += 1;
                continue;
            }
            match (0..self.first_art).find(|&j| self.at(r, j).abs() > PIVOT_TOL) {
                Some(j) => {
                    self.pivot(r, j);
                    r += 1;
                }
                None => {
                    let w = self.width();
                    self.data.drain(r * w..(r + 1) * w);
                    self.basis.remove(r);
                    self.m -= 1;
                }
            }
        }
    }

    fn primal(&self, nx: usize) -> Vec<f64> {
        let mut y = vec![0.0; nx];
        for r in 0..self.m {
            if self.basis[r] < nx {
                y[self.basis[r]] = self.rhs(r).max(0.0);
            }
        }
        y
    }
}
