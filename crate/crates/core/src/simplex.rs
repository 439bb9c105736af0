//! Revised simplex for covering LPs: minimize `c x` subject to `A x >= b`,
//! `x >= 0`, `b >= 0`. The basis inverse is kept dense, updated by pivoting
//! and rebuilt from scratch every few dozen pivots.
//!
//! A [`SimplexSolver`] keeps its basis between calls, so columns appended
//! with [`SimplexSolver::add_column`] are priced in from the previous optimum.

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    rhs: Vec<f64>,
    costs: Vec<f64>,
    columns: Vec<Vec<(usize, f64)>>,
}

impl LinearProgram {
    /// Empty program with `rows` covering rows of right-hand side 1.
    pub fn new(rows: usize) -> Self {
        Self::with_rhs(vec![1.0; rows])
    }

    pub fn with_rhs(rhs: Vec<f64>) -> Self {
        assert!(rhs.iter().all(|&b| b >= 0.0), "right-hand sides must be nonnegative");
        Self {
            rhs,
            costs: Vec::new(),
            columns: Vec::new(),
        }
    }

    /// Appends a column given as `(row, coefficient)` pairs and returns its index.
    pub fn add_column(&mut self, cost: f64, entries: Vec<(usize, f64)>) -> usize {
        assert!(entries.iter().all(|&(i, _)| i < self.rhs.len()), "row out of range");
        self.costs.push(cost);
        self.columns.push(entries);
        self.columns.len() - 1
    }

    /// Appends a 0/1 column with ones in `rows`.
    pub fn add_unit_column(&mut self, cost: f64, rows: &[usize]) -> usize {
        self.add_column(cost, rows.iter().map(|&i| (i, 1.0)).collect())
    }

    pub fn row_count(&self) -> usize {
        self.rhs.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn cost(&self, j: usize) -> f64 {
        self.costs[j]
    }

    pub fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Values of the structural columns.
    pub primal: Vec<f64>,
    /// One dual per row; nonnegative at an optimum.
    pub duals: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub pivot_tol: f64,
    pub refactor_every: usize,
    /// Consecutive degenerate pivots before switching to the least-index rule.
    pub degenerate_switch: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200_000,
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            pivot_tol: 1e-9,
            refactor_every: 50,
            degenerate_switch: 20,
        }
    }
}

/// Basic and nonbasic variables: structural columns, one surplus per row
/// (coefficient -1) and one artificial per row (coefficient +1). The derived
/// order is the fixed order used by the least-index rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Var {
    Column(usize),
    Surplus(usize),
    Artificial(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

#[derive(Debug, Clone)]
pub struct SimplexSolver {
    lp: LinearProgram,
    options: SimplexOptions,
    basis: Vec<Var>,
    /// Row-major `m x m` inverse of the basis matrix.
    inverse: Vec<f64>,
    values: Vec<f64>,
    phase: Phase,
    since_refactor: usize,
    iterations: usize,
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Limit,
}

impl SimplexSolver {
    pub fn new(lp: LinearProgram) -> Self {
        Self::with_options(lp, SimplexOptions::default())
    }

    pub fn with_options(lp: LinearProgram, options: SimplexOptions) -> Self {
        let m = lp.row_count();
        let mut inverse = vec![0.0; m * m];
        for i in 0..m {
            inverse[i * m + i] = 1.0;
        }
        Self {
            basis: (0..m).map(Var::Artificial).collect(),
            values: lp.rhs.clone(),
            inverse,
            lp,
            options,
            phase: Phase::One,
            since_refactor: 0,
            iterations: 0,
        }
    }

    pub fn lp(&self) -> &LinearProgram {
        &self.lp
    }

    /// Total pivots performed over the solver's lifetime.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Appends a column; the current basis stays valid and the next
    /// [`solve`](Self::solve) continues from it.
    pub fn add_column(&mut self, cost: f64, entries: Vec<(usize, f64)>) -> usize {
        self.lp.add_column(cost, entries)
    }

    pub fn add_unit_column(&mut self, cost: f64, rows: &[usize]) -> usize {
        self.lp.add_unit_column(cost, rows)
    }

    fn m(&self) -> usize {
        self.lp.row_count()
    }

    fn cost(&self, v: Var) -> f64 {
        match (self.phase, v) {
            (Phase::One, Var::Artificial(_)) => 1.0,
            (Phase::One, _) => 0.0,
            (Phase::Two, Var::Column(j)) => self.lp.costs[j],
            (Phase::Two, _) => 0.0,
        }
    }

    fn entries(&self, v: Var) -> Vec<(usize, f64)> {
        match v {
            Var::Column(j) => self.lp.columns[j].clone(),
            Var::Surplus(i) => vec![(i, -1.0)],
            Var::Artificial(i) => vec![(i, 1.0)],
        }
    }

    /// `B^{-1} a` for a sparse column `a`.
    fn ftran(&self, entries: &[(usize, f64)]) -> Vec<f64> {
        let m = self.m();
        let mut out = vec![0.0; m];
        for &(k, a) in entries {
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.inverse[i * m + k] * a;
            }
        }
        out
    }

    /// Simplex multipliers `c_B B^{-1}` for the current phase.
    fn multipliers(&self) -> Vec<f64> {
        let m = self.m();
        let mut y = vec![0.0; m];
        for (i, &v) in self.basis.iter().enumerate() {
            let c = self.cost(v);
            if c != 0.0 {
                let row = &self.inverse[i * m..(i + 1) * m];
                for (yk, r) in y.iter_mut().zip(row) {
                    *yk += c * r;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, v: Var, y: &[f64]) -> f64 {
        match v {
            Var::Column(j) => {
                self.cost(v) - self.lp.columns[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>()
            }
            Var::Surplus(i) => y[i],
            Var::Artificial(i) => self.cost(v) - y[i],
        }
    }

    fn candidates(&self) -> impl Iterator<Item = Var> + '_ {
        let in_basis = {
            let mut mark_col = vec![false; self.lp.column_count()];
            let mut mark_sur = vec![false; self.m()];
            for &v in &self.basis {
                match v {
                    Var::Column(j) => mark_col[j] = true,
                    Var::Surplus(i) => mark_sur[i] = true,
                    Var::Artificial(_) => {}
                }
            }
            (mark_col, mark_sur)
        };
        let (mark_col, mark_sur) = in_basis;
        (0..self.lp.column_count())
            .filter(move |&j| !mark_col[j])
            .map(Var::Column)
            .chain(
                (0..self.m())
                    .filter(move |&i| !mark_sur[i])
                    .map(Var::Surplus),
            )
    }

    fn refactor(&mut self) {
        let m = self.m();
        self.since_refactor = 0;
        if m == 0 {
            return;
        }
        let mut mat = vec![0.0; m * m];
        for (c, &v) in self.basis.iter().enumerate() {
            for (r, a) in self.entries(v) {
                mat[r * m + c] = a;
            }
        }
        let Some(inv) = invert(mat, m) else {
            return;
        };
        self.inverse = inv;
        let rhs = self.lp.rhs.clone();
        let mut values = vec![0.0; m];
        for (i, v) in values.iter_mut().enumerate() {
            *v = (0..m).map(|k| self.inverse[i * m + k] * rhs[k]).sum();
            if v.abs() < self.options.feasibility_tol {
                *v = 0.0;
            }
        }
        self.values = values;
    }

    fn pivot(&mut self, row: usize, entering: Var, direction: &[f64]) {
        let m = self.m();
        let step = self.values[row] / direction[row];
        let tol = self.options.feasibility_tol;
        for (i, (v, d)) in self.values.iter_mut().zip(direction).enumerate() {
            if i != row {
                *v -= step * d;
                if v.abs() < tol {
                    *v = 0.0;
                }
            }
        }
        self.values[row] = step;
        let p = direction[row];
        let pivot_row: Vec<f64> = self.inverse[row * m..(row + 1) * m].iter().map(|x| x / p).collect();
        for (i, &f) in direction.iter().enumerate() {
            if i != row && f != 0.0 {
                for (x, p) in self.inverse[i * m..(i + 1) * m].iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        self.inverse[row * m..(row + 1) * m].copy_from_slice(&pivot_row);
        self.basis[row] = entering;
        self.iterations += 1;
        self.since_refactor += 1;
        if self.since_refactor >= self.options.refactor_every {
            self.refactor();
        }
    }

    fn run_phase(&mut self) -> StepOutcome {
        let tol = self.options.optimality_tol;
        let mut degenerate = 0usize;
        loop {
            if self.iterations >= self.options.max_iterations {
                return StepOutcome::Limit;
            }
            let y = self.multipliers();
            let bland = degenerate >= self.options.degenerate_switch;
            let mut entering: Option<(Var, f64)> = None;
            for v in self.candidates() {
                let d = self.reduced_cost(v, &y);
                if d < -tol {
                    match entering {
                        None => entering = Some((v, d)),
                        Some((_, best)) if !bland && d < best => entering = Some((v, d)),
                        _ => {}
                    }
                    if bland {
                        break;
                    }
                }
            }
            let Some((q, _)) = entering else {
                return StepOutcome::Optimal;
            };
            let direction = self.ftran(&self.entries(q));

            let mut rows: Vec<(usize, f64)> = Vec::new();
            for (i, &u) in direction.iter().enumerate() {
                if u > self.options.pivot_tol {
                    rows.push((i, self.values[i] / u));
                } else if u.abs() > self.options.pivot_tol
                    && self.phase == Phase::Two
                    && matches!(self.basis[i], Var::Artificial(_))
                {
                    // an artificial left in the basis at zero must stay there
                    rows.push((i, 0.0));
                }
            }
            let min_ratio = rows.iter().map(|&(_, r)| r).fold(f64::INFINITY, f64::min);
            let leave = rows
                .into_iter()
                .filter(|&(_, r)| r <= min_ratio + 1e-12)
                .reduce(|a, b| if tie_break(bland, b.0, a.0, &direction, &self.basis) { b } else { a });
            let Some((row, ratio)) = leave else {
                return StepOutcome::Unbounded;
            };
            if ratio <= self.options.feasibility_tol {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, q, &direction);
        }
    }

    /// Pivots zero-valued artificials out of the basis where some structural
    /// or surplus column has a nonzero entry in their row.
    fn drive_out_artificials(&mut self) {
        let m = self.m();
        for row in 0..m {
            if !matches!(self.basis[row], Var::Artificial(_)) {
                continue;
            }
            let inv_row: Vec<f64> = self.inverse[row * m..(row + 1) * m].to_vec();
            let pick = self.candidates().find(|&v| {
                let e: f64 = self.entries(v).iter().map(|&(k, a)| inv_row[k] * a).sum();
                e.abs() > 1e-7
            });
            if let Some(q) = pick {
                let direction = self.ftran(&self.entries(q));
                self.pivot(row, q, &direction);
            }
        }
    }

    /// Solves (or re-solves after added columns) and reports the solution.
    pub fn solve(&mut self) -> LpSolution {
        if self.phase == Phase::One {
            match self.run_phase() {
                StepOutcome::Limit => return self.report(LpStatus::IterationLimit),
                StepOutcome::Unbounded => unreachable!("phase one is bounded below"),
                StepOutcome::Optimal => {}
            }
            let infeasibility: f64 = self
                .basis
                .iter()
                .zip(&self.values)
                .filter(|(v, _)| matches!(v, Var::Artificial(_)))
                .map(|(_, x)| x)
                .sum();
            if infeasibility > 1e-7 {
                return self.report(LpStatus::Infeasible);
            }
            self.drive_out_artificials();
            self.phase = Phase::Two;
        }
        let status = match self.run_phase() {
            StepOutcome::Optimal => LpStatus::Optimal,
            StepOutcome::Unbounded => LpStatus::Unbounded,
            StepOutcome::Limit => LpStatus::IterationLimit,
        };
        self.report(status)
    }

    fn report(&self, status: LpStatus) -> LpSolution {
        let mut primal = vec![0.0; self.lp.column_count()];
        for (&v, &x) in self.basis.iter().zip(&self.values) {
            if let Var::Column(j) = v {
                primal[j] = x.max(0.0);
            }
        }
        let duals = if self.phase == Phase::Two {
            self.multipliers()
        } else {
            vec![0.0; self.m()]
        };
        let objective = primal.iter().zip(&self.lp.costs).map(|(x, c)| x * c).sum();
        LpSolution {
            status,
            primal,
            duals,
            objective,
            iterations: self.iterations,
        }
    }
}

fn tie_break(bland: bool, candidate: usize, current: usize, direction: &[f64], basis: &[Var]) -> bool {
    if bland {
        basis[candidate] < basis[current]
    } else {
        direction[candidate].abs() > direction[current].abs()
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` if singular.
fn invert(mut mat: Vec<f64>, m: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&a, &b| mat[a * m + col].abs().total_cmp(&mat[b * m + col].abs()))?;
        if mat[piv * m + col].abs() < 1e-12 {
            return None;
        }
        if piv != col {
            for k in 0..m {
                mat.swap(piv * m + k, col * m + k);
                inv.swap(piv * m + k, col * m + k);
            }
        }
        let p = mat[col * m + col];
        for k in 0..m {
            mat[col * m + k] /= p;
            inv[col * m + k] /= p;
        }
        for r in 0..m {
            if r != col {
                let f = mat[r * m + col];
                if f != 0.0 {
                    for k in 0..m {
                        mat[r * m + k] -= f * mat[col * m + k];
                        inv[r * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// One-shot solve with default options.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    SimplexSolver::new(lp.clone()).solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-6
    }

    #[test]
    fn two_steps_master() {
        // items 0..5, patterns {1,2}, {1,3}, {0,4}, {2,3}
        let mut lp = LinearProgram::new(5);
        for p in [[1, 2], [1, 3], [0, 4], [2, 3]] {
            lp.add_unit_column(1.0, &p);
        }
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.objective, 2.5));
        for (x, want) in s.primal.iter().zip([0.5, 0.5, 1.0, 0.5]) {
            assert!(close(*x, want), "{:?}", s.primal);
        }
        assert!(close(s.duals.iter().sum::<f64>(), 2.5));
        assert!(s.duals.iter().all(|&d| d >= -1e-9));
    }

    #[test]
    fn identity_columns() {
        let mut lp = LinearProgram::new(3);
        for i in 0..3 {
            lp.add_unit_column(1.0, &[i]);
        }
        let s = solve_lp(&lp);
        assert!(close(s.objective, 3.0));
        assert!(s.duals.iter().all(|&d| close(d, 1.0)));

        let mut one = LinearProgram::new(1);
        one.add_unit_column(1.0, &[0]);
        let s = solve_lp(&one);
        assert!(close(s.objective, 1.0) && close(s.duals[0], 1.0));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(2);
        lp.add_unit_column(1.0, &[0]);
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);
        let mut lp = LinearProgram::new(1);
        lp.add_unit_column(-1.0, &[0]);
        assert_eq!(solve_lp(&lp).status, LpStatus::Unbounded);
        let empty = LinearProgram::new(0);
        assert!(close(solve_lp(&empty).objective, 0.0));
    }

    #[test]
    fn warm_start_adds_column() {
        let mut solver = SimplexSolver::new(LinearProgram::new(3));
        for i in 0..3 {
            solver.add_unit_column(1.0, &[i]);
        }
        assert!(close(solver.solve().objective, 3.0));
        solver.add_unit_column(1.0, &[0, 1, 2]);
        let s = solver.solve();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.objective, 1.0));
        assert!(close(s.primal[3], 1.0));
    }

    #[test]
    fn iteration_limit() {
        let mut lp = LinearProgram::new(3);
        for i in 0..3 {
            lp.add_unit_column(1.0, &[i]);
        }
        let opts = SimplexOptions {
            max_iterations: 1,
            ..SimplexOptions::default()
        };
        let s = SimplexSolver::with_options(lp, opts).solve();
        assert_eq!(s.status, LpStatus::IterationLimit);
    }
}
