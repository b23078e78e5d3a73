//! Exact rational linear programming.
//!
//! Dense two-phase simplex over the rationals with Bland's rule, which
//! terminates on every input and detects zero optima exactly. Variables are
//! free (split internally into nonnegative pairs).

use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rel {
    Eq,
    Ge,
    Le,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Rel, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// rows[i] has `cols` coefficient entries plus the rhs at the end.
    rows: Vec<Vec<Rat>>,
    cols: usize,
    basis: Vec<usize>,
    /// Columns that may never enter the basis (retired artificials).
    banned: Vec<bool>,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize, reduced: &mut Vec<Rat>) {
        let inv = self.rows[row][col].recip();
        for x in self.rows[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for j in 0..=self.cols {
                let t = &self.rows[row][j] * &f;
                self.rows[i][j] -= t;
            }
        }
        if !reduced[col].is_zero() {
            let f = reduced[col].clone();
            for j in 0..=self.cols {
                let t = &self.rows[row][j] * &f;
                reduced[j] -= t;
            }
        }
        self.basis[row] = col;
    }

    /// Reduced objective row for `obj` (coefficients over all columns).
    fn reduced_row(&self, obj: &[Rat]) -> Vec<Rat> {
        let mut r: Vec<Rat> = obj.to_vec();
        r.push(Rat::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if r[b].is_zero() {
                continue;
            }
            let f = r[b].clone();
            for j in 0..=self.cols {
                let t = &self.rows[i][j] * &f;
                r[j] -= t;
            }
        }
        r
    }

    /// Maximize with Bland's rule. Returns false on unbounded.
    fn optimize(&mut self, reduced: &mut Vec<Rat>) -> bool {
        loop {
            let Some(enter) = (0..self.cols)
                .find(|&j| !self.banned[j] && reduced[j].is_positive())
            else {
                return true;
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][enter].is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / &self.rows[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && self.basis[i] < self.basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
            match leave {
                None => return false,
                Some(row) => self.pivot(row, enter, reduced),
            }
        }
    }
}

/// Maximize `objective · x` over free variables `x` subject to `constraints`.
pub fn maximize(n_vars: usize, objective: &[Rat], constraints: &[Constraint]) -> LpOutcome {
    assert_eq!(objective.len(), n_vars);
    for c in constraints {
        assert_eq!(c.coeffs.len(), n_vars, "constraint arity mismatch");
    }
    // Columns: x⁺ (n), x⁻ (n), then one slack/surplus per inequality, then
    // one artificial per Ge/Eq row.
    let m = constraints.len();
    let n2 = 2 * n_vars;
    let n_slack = constraints.iter().filter(|c| c.rel != Rel::Eq).count();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut artificial_rows: Vec<usize> = Vec::new();
    let mut slack_idx = 0;
    let mut art_idx = 0;
    let n_art_total = constraints
        .iter()
        .filter(|c| {
            let flip = c.rhs.is_negative();
            let rel = effective_rel(c.rel, flip);
            rel != Rel::Le
        })
        .count();
    let cols = n2 + n_slack + n_art_total;
    for c in constraints {
        let flip = c.rhs.is_negative();
        let rel = effective_rel(c.rel, flip);
        let mut row = vec![Rat::zero(); cols + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            let v = if flip { -a } else { a.clone() };
            row[j + n_vars] = -&v;
            row[j] = v;
        }
        row[cols] = if flip { -&c.rhs } else { c.rhs.clone() };
        match rel {
            Rel::Le => {
                row[n2 + slack_idx] = Rat::one();
                basis.push(n2 + slack_idx);
                slack_idx += 1;
            }
            Rel::Ge => {
                row[n2 + slack_idx] = -Rat::one();
                slack_idx += 1;
                row[n2 + n_slack + art_idx] = Rat::one();
                basis.push(n2 + n_slack + art_idx);
                artificial_rows.push(rows.len());
                art_idx += 1;
            }
            Rel::Eq => {
                row[n2 + n_slack + art_idx] = Rat::one();
                basis.push(n2 + n_slack + art_idx);
                artificial_rows.push(rows.len());
                art_idx += 1;
            }
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, cols, basis, banned: vec![false; cols] };

    // Phase 1: drive the artificials to zero.
    if n_art_total > 0 {
        let mut phase1 = vec![Rat::zero(); cols];
        for j in n2 + n_slack..cols {
            phase1[j] = -Rat::one();
        }
        let mut reduced = t.reduced_row(&phase1);
        let bounded = t.optimize(&mut reduced);
        debug_assert!(bounded, "phase-1 objective is bounded by construction");
        let value = -&reduced[t.cols];
        // phase-1 max is −(sum of artificials); feasible iff it reaches 0
        let attained: Rat = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= n2 + n_slack)
            .map(|(i, _)| t.rhs(i).clone())
            .sum();
        let _ = value;
        if !attained.is_zero() {
            return LpOutcome::Infeasible;
        }
        // Pivot any basic artificial (at level zero) out, or drop its row.
        let mut drop_rows = Vec::new();
        for i in 0..t.rows.len() {
            if t.basis[i] < n2 + n_slack {
                continue;
            }
            match (0..n2 + n_slack).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    let mut dummy = vec![Rat::zero(); cols + 1];
                    t.pivot(i, j, &mut dummy);
                }
                None => drop_rows.push(i),
            }
        }
        for &i in drop_rows.iter().rev() {
            t.rows.remove(i);
            t.basis.remove(i);
        }
        for j in n2 + n_slack..cols {
            t.banned[j] = true;
        }
    }

    // Phase 2.
    let mut obj = vec![Rat::zero(); cols];
    for j in 0..n_vars {
        obj[j] = objective[j].clone();
        obj[j + n_vars] = -&objective[j];
    }
    let mut reduced = t.reduced_row(&obj);
    if !t.optimize(&mut reduced) {
        return LpOutcome::Unbounded;
    }
    let mut assign = vec![Rat::zero(); cols];
    for (i, &b) in t.basis.iter().enumerate() {
        assign[b] = t.rhs(i).clone();
    }
    let point: Vec<Rat> = (0..n_vars)
        .map(|j| &assign[j] - &assign[j + n_vars])
        .collect();
    let value = objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .fold(Rat::zero(), |a, b| a + b);
    LpOutcome::Optimal { value, point }
}

fn effective_rel(rel: Rel, flipped: bool) -> Rel {
    match (rel, flipped) {
        (Rel::Ge, true) => Rel::Le,
        (Rel::Le, true) => Rel::Ge,
        (r, _) => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn bounded_box() {
        // max x + y, 0 ≤ x ≤ 2, 0 ≤ y ≤ 3
        let out = maximize(
            2,
            &r(&[1, 1]),
            &[
                Constraint::new(r(&[1, 0]), Rel::Le, rat(2)),
                Constraint::new(r(&[0, 1]), Rel::Le, rat(3)),
                Constraint::new(r(&[1, 0]), Rel::Ge, rat(0)),
                Constraint::new(r(&[0, 1]), Rel::Ge, rat(0)),
            ],
        );
        match out {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(5));
                assert_eq!(point, r(&[2, 3]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbounded_and_infeasible() {
        let out = maximize(1, &r(&[1]), &[Constraint::new(r(&[1]), Rel::Ge, rat(0))]);
        assert_eq!(out, LpOutcome::Unbounded);
        let out = maximize(
            1,
            &r(&[1]),
            &[
                Constraint::new(r(&[1]), Rel::Ge, rat(2)),
                Constraint::new(r(&[1]), Rel::Le, rat(1)),
            ],
        );
        assert_eq!(out, LpOutcome::Infeasible);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // max x − y with x + y = 1, −x ≤ −1/4 (i.e. x ≥ 1/4), y ≥ 0
        let out = maximize(
            2,
            &r(&[1, -1]),
            &[
                Constraint::new(r(&[1, 1]), Rel::Eq, rat(1)),
                Constraint::new(r(&[-1, 0]), Rel::Le, -crate::rat::rat_frac(1, 4)),
                Constraint::new(r(&[0, 1]), Rel::Ge, rat(0)),
            ],
        );
        match out {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(1));
                assert_eq!(point, r(&[1, 0]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_optimum_is_exact() {
        // max x subject to x ≤ 0, x ≥ 0: optimum exactly 0
        let out = maximize(
            1,
            &r(&[1]),
            &[
                Constraint::new(r(&[1]), Rel::Le, rat(0)),
                Constraint::new(r(&[1]), Rel::Ge, rat(0)),
            ],
        );
        match out {
            LpOutcome::Optimal { value, .. } => assert!(value.is_zero()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_guard() {
        // Klee–Minty-ish degenerate system; Bland's rule must terminate.
        let out = maximize(
            3,
            &r(&[10, 5, 1]),
            &[
                Constraint::new(r(&[1, 0, 0]), Rel::Le, rat(1)),
                Constraint::new(r(&[4, 1, 0]), Rel::Le, rat(8)),
                Constraint::new(r(&[8, 4, 1]), Rel::Le, rat(16)),
                Constraint::new(r(&[1, 0, 0]), Rel::Ge, rat(0)),
                Constraint::new(r(&[0, 1, 0]), Rel::Ge, rat(0)),
                Constraint::new(r(&[0, 0, 1]), Rel::Ge, rat(0)),
            ],
        );
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(20)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
