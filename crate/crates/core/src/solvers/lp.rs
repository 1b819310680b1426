//! Exact linear programming over the rationals.
//!
//! A dense two-phase tableau simplex with Bland's pivoting rule, so it
//! terminates on degenerate inputs without perturbation. Everything is
//! `BigRational`: optima, solution vectors, and the dual values recovered
//! from the final basis are exact, which is what lets downstream code turn
//! LP answers directly into integer inequality coefficients.
//!
//! Problems here are small (tens of rows, a few hundred columns), so a dense
//! tableau is both the simplest and an entirely adequate choice.

use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub objective: Rat,
    /// Values of the caller's variables.
    pub x: Vec<Rat>,
    /// One multiplier per constraint row, for the maximization problem: at
    /// optimality `objective = Σ duals[i]·rhs[i]` and the duals price the
    /// rows (`≤` rows get nonnegative values, `≥` rows nonpositive).
    pub duals: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// A maximization problem. Variables are nonnegative unless marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<Rat>,
    free: Vec<bool>,
    rows: Vec<(Vec<Rat>, Relation, Rat)>,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<Rat>) -> Self {
        let n = objective.len();
        LinearProgram { objective, free: vec![false; n], rows: Vec::new() }
    }

    /// Mark a variable as unrestricted in sign.
    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add_row(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.objective.len(), "row width must match variable count");
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

/// Column roles in the standard form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Col {
    /// Positive part of caller variable `v`.
    Plus(usize),
    /// Negative part of a free caller variable `v`.
    Minus(usize),
    Slack,
    Artificial,
}

struct Tableau {
    /// `rows × (cols + 1)`; the last column is the right-hand side.
    tab: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    roles: Vec<Col>,
    /// Original standard-form columns, kept pristine for dual recovery.
    a_std: Vec<Vec<Rat>>,
    /// Phase-two objective per standard column.
    c_std: Vec<Rat>,
    /// Rows whose sign was flipped to make the right-hand side nonnegative.
    flipped: Vec<bool>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.rows.len();
        let mut roles: Vec<Col> = Vec::new();
        for (v, &f) in lp.free.iter().enumerate() {
            roles.push(Col::Plus(v));
            if f {
                roles.push(Col::Minus(v));
            }
        }
        let n_struct = roles.len();

        // Normalize rows to nonnegative right-hand sides.
        let mut flipped = vec![false; m];
        let mut rows: Vec<(Vec<Rat>, Relation, Rat)> = lp.rows.clone();
        for (i, (coeffs, rel, rhs)) in rows.iter_mut().enumerate() {
            if rhs.is_negative() {
                flipped[i] = true;
                for c in coeffs.iter_mut() {
                    *c = -c.clone();
                }
                *rhs = -rhs.clone();
                *rel = match *rel {
                    Relation::Le => Relation::Ge,
                    Relation::Eq => Relation::Eq,
                    Relation::Ge => Relation::Le,
                };
            }
        }

        // One slack/surplus column per inequality, then one artificial per
        // `=`/`≥` row. Count them first so the tableau width is known.
        let n_slack = rows.iter().filter(|(_, rel, _)| *rel != Relation::Eq).count();
        let n_art = rows.iter().filter(|(_, rel, _)| *rel != Relation::Le).count();
        let n_cols = n_struct + n_slack + n_art;
        for _ in 0..n_slack {
            roles.push(Col::Slack);
        }
        for _ in 0..n_art {
            roles.push(Col::Artificial);
        }

        let mut tab = vec![vec![Rat::zero(); n_cols + 1]; m];
        let mut basis = vec![usize::MAX; m];
        let mut next_slack = n_struct;
        let mut next_art = n_struct + n_slack;
        for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
            for (j, role) in roles[..n_struct].iter().enumerate() {
                tab[i][j] = match role {
                    Col::Plus(v) => coeffs[*v].clone(),
                    Col::Minus(v) => -coeffs[*v].clone(),
                    _ => unreachable!(),
                };
            }
            match rel {
                Relation::Le => {
                    tab[i][next_slack] = Rat::one();
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    tab[i][next_slack] = -Rat::one();
                    next_slack += 1;
                    tab[i][next_art] = Rat::one();
                    basis[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    tab[i][next_art] = Rat::one();
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
            tab[i][n_cols] = rhs.clone();
        }

        let a_std: Vec<Vec<Rat>> = tab.iter().map(|r| r[..n_cols].to_vec()).collect();
        let mut c_std = vec![Rat::zero(); n_cols];
        for (j, role) in roles.iter().enumerate() {
            match role {
                Col::Plus(v) => c_std[j] = lp.objective[*v].clone(),
                Col::Minus(v) => c_std[j] = -lp.objective[*v].clone(),
                _ => {}
            }
        }

        Tableau { tab, basis, roles, a_std, c_std, flipped }
    }

    fn n_cols(&self) -> usize {
        self.roles.len()
    }

    /// Reduced-cost row for a given per-column objective, eliminating the
    /// current basic columns.
    fn cost_row(&self, c: &[Rat]) -> Vec<Rat> {
        let n = self.n_cols();
        let mut row: Vec<Rat> = c.to_vec();
        row.push(Rat::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if !row[b].is_zero() {
                let f = row[b].clone();
                for j in 0..=n {
                    let t = &f * &self.tab[i][j];
                    row[j] -= t;
                }
            }
        }
        row
    }

    fn pivot(&mut self, row: usize, col: usize, cost: &mut [Rat]) {
        let n = self.n_cols();
        let inv = {
            let p = self.tab[row][col].clone();
            debug_assert!(!p.is_zero());
            p
        };
        for j in 0..=n {
            self.tab[row][j] = &self.tab[row][j] / &inv;
        }
        for i in 0..self.tab.len() {
            if i != row && !self.tab[i][col].is_zero() {
                let f = self.tab[i][col].clone();
                for j in 0..=n {
                    let t = &f * &self.tab[row][j];
                    self.tab[i][j] -= t;
                }
            }
        }
        if !cost[col].is_zero() {
            let f = cost[col].clone();
            for j in 0..=n {
                let t = &f * &self.tab[row][j];
                cost[j] -= t;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule simplex on the current basis. Returns `false` when the
    /// chosen entering column proves the problem unbounded.
    fn optimize(&mut self, cost: &mut Vec<Rat>, allow: impl Fn(&Col) -> bool) -> bool {
        let n = self.n_cols();
        loop {
            // Entering: smallest-index admissible column with positive
            // reduced cost.
            let Some(e) = (0..n).find(|&j| allow(&self.roles[j]) && cost[j].is_positive()) else {
                return true; // optimal
            };
            // Leaving: minimum ratio, ties to the smallest basis index.
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.tab.len() {
                if self.tab[i][e].is_positive() {
                    let ratio = &self.tab[i][n] / &self.tab[i][e];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false; // unbounded along column e
            };
            self.pivot(r, e, cost);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let n = self.n_cols();
        let has_artificials = self.roles.iter().any(|r| *r == Col::Artificial);

        if has_artificials {
            // Phase one: maximize minus the sum of artificials.
            let c1: Vec<Rat> = self
                .roles
                .iter()
                .map(|r| if *r == Col::Artificial { -Rat::one() } else { Rat::zero() })
                .collect();
            let mut cost = self.cost_row(&c1);
            let bounded = self.optimize(&mut cost, |_| true);
            debug_assert!(bounded, "phase one is bounded by construction");
            // cost[n] carries minus the phase objective; feasible iff zero.
            if !cost[n].is_zero() {
                return LpOutcome::Infeasible;
            }
        }

        // Phase two over the real objective; artificial columns may linger
        // in the basis at level zero but must never re-enter.
        let mut cost = self.cost_row(&self.c_std.clone());
        if !self.optimize(&mut cost, |role| *role != Col::Artificial) {
            return LpOutcome::Unbounded;
        }

        // Solution in caller variables.
        let mut x = vec![Rat::zero(); lp.objective.len()];
        for (i, &b) in self.basis.iter().enumerate() {
            match self.roles[b] {
                Col::Plus(v) => x[v] += &self.tab[i][n],
                Col::Minus(v) => x[v] -= &self.tab[i][n],
                _ => {}
            }
        }
        let mut objective = Rat::zero();
        for (c, xv) in lp.objective.iter().zip(&x) {
            objective += c * xv;
        }

        let duals = self.recover_duals();
        LpOutcome::Optimal(LpSolution { objective, x, duals })
    }

    /// Solve `Bᵀ y = c_B` exactly on the final basis, then undo the row
    /// sign normalization.
    fn recover_duals(&self) -> Vec<Rat> {
        let m = self.tab.len();
        // Augmented system [Bᵀ | c_B].
        let mut sys = vec![vec![Rat::zero(); m + 1]; m];
        for (k, &b) in self.basis.iter().enumerate() {
            for i in 0..m {
                sys[k][i] = self.a_std[i][b].clone();
            }
            sys[k][m] = self.c_std[b].clone();
        }
        // Gaussian elimination; B is invertible because it is a basis.
        for c in 0..m {
            let p = (c..m).find(|&r| !sys[r][c].is_zero()).expect("basis matrix is invertible");
            sys.swap(c, p);
            let inv = sys[c][c].clone();
            for j in c..=m {
                sys[c][j] = &sys[c][j] / &inv;
            }
            for r in 0..m {
                if r != c && !sys[r][c].is_zero() {
                    let f = sys[r][c].clone();
                    for j in c..=m {
                        let t = &f * &sys[c][j];
                        sys[r][j] -= t;
                    }
                }
            }
        }
        (0..m)
            .map(|i| if self.flipped[i] { -sys[i][m].clone() } else { sys[i][m].clone() })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6).
        let mut lp = LinearProgram::maximize(r(&[3, 5]));
        lp.add_row(r(&[1, 0]), Relation::Le, rat(4));
        lp.add_row(r(&[0, 2]), Relation::Le, rat(12));
        lp.add_row(r(&[3, 2]), Relation::Le, rat(18));
        let sol = lp.solve().optimal().unwrap();
        assert_eq!(sol.objective, rat(36));
        assert_eq!(sol.x, r(&[2, 6]));
        // Strong duality: Σ y_i b_i equals the optimum.
        let b = [rat(4), rat(12), rat(18)];
        let dual_val: Rat = sol.duals.iter().zip(&b).map(|(y, b)| y * b).sum();
        assert_eq!(dual_val, rat(36));
        // The loose first row prices at zero.
        assert_eq!(sol.duals[0], rat(0));
    }

    #[test]
    fn equality_and_free_variables() {
        // max x - t s.t. x + t = 3, x - t ≥ 1, with t free → t can go to -∞?
        // No: x ≥ 0 and x + t = 3 force t = 3 - x, objective = 2x - 3,
        // x - t = 2x - 3 ≥ 1 gives x ≥ 2; unbounded above in x? x + t = 3
        // caps nothing on its own, but x ≥ 0, t = 3 - x: objective 2x - 3
        // grows with x, and no row caps x. Unbounded.
        let mut lp = LinearProgram::maximize(r(&[1, -1]));
        lp.set_free(1);
        lp.add_row(r(&[1, 1]), Relation::Eq, rat(3));
        lp.add_row(r(&[1, -1]), Relation::Ge, rat(1));
        assert!(matches!(lp.solve(), LpOutcome::Unbounded));

        // Cap x and it becomes a bounded problem with a free variable.
        let mut lp = LinearProgram::maximize(r(&[1, -1]));
        lp.set_free(1);
        lp.add_row(r(&[1, 1]), Relation::Eq, rat(3));
        lp.add_row(r(&[1, 0]), Relation::Le, rat(5));
        let sol = lp.solve().optimal().unwrap();
        assert_eq!(sol.x, vec![rat(5), rat(-2)]);
        assert_eq!(sol.objective, rat(7));
    }

    #[test]
    fn infeasible_system_is_reported() {
        let mut lp = LinearProgram::maximize(r(&[1]));
        lp.add_row(r(&[1]), Relation::Le, rat(1));
        lp.add_row(r(&[1]), Relation::Ge, rat(2));
        assert!(matches!(lp.solve(), LpOutcome::Infeasible));
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        // max -x s.t. -x ≤ -2 (i.e. x ≥ 2) → optimum -2.
        let mut lp = LinearProgram::maximize(r(&[-1]));
        lp.add_row(r(&[-1]), Relation::Le, rat(-2));
        let sol = lp.solve().optimal().unwrap();
        assert_eq!(sol.objective, rat(-2));
        assert_eq!(sol.x, vec![rat(2)]);
    }

    #[test]
    fn fractional_data_stays_exact() {
        // max x + y s.t. 2x + y ≤ 1/3, x + 3y ≤ 1/2 → exact rational corner.
        let mut lp = LinearProgram::maximize(r(&[1, 1]));
        lp.add_row(r(&[2, 1]), Relation::Le, ratio(1, 3));
        lp.add_row(r(&[1, 3]), Relation::Le, ratio(1, 2));
        let sol = lp.solve().optimal().unwrap();
        assert_eq!(sol.x, vec![ratio(1, 10), ratio(2, 15)]);
        assert_eq!(sol.objective, ratio(1, 10) + ratio(2, 15));
    }

    #[test]
    fn duals_price_equality_rows() {
        // max x + 2y s.t. x + y = 1 → optimum 2 at (0,1); dual of the
        // equality row must be 2 (worth of one more unit of rhs).
        let mut lp = LinearProgram::maximize(r(&[1, 2]));
        lp.add_row(r(&[1, 1]), Relation::Eq, rat(1));
        let sol = lp.solve().optimal().unwrap();
        assert_eq!(sol.objective, rat(2));
        assert_eq!(sol.duals, vec![rat(2)]);
    }

    #[test]
    fn degenerate_cycling_candidate_terminates() {
        // Classic Beale example that cycles under naive Dantzig pivoting.
        let mut lp = LinearProgram::maximize(vec![
            ratio(3, 4),
            rat(-150),
            ratio(1, 50),
            rat(-6),
        ]);
        lp.add_row(vec![ratio(1, 4), rat(-60), ratio(-1, 25), rat(9)], Relation::Le, rat(0));
        lp.add_row(vec![ratio(1, 2), rat(-90), ratio(-1, 50), rat(3)], Relation::Le, rat(0));
        lp.add_row(vec![rat(0), rat(0), rat(1), rat(0)], Relation::Le, rat(1));
        let sol = lp.solve().optimal().unwrap();
        assert_eq!(sol.objective, ratio(1, 20));
    }
}
