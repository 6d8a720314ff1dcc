//! Exact rational linear programming: two-phase dense simplex with Bland's rule,
//! returning certificates that can be re-checked independently.
//!
//! Problems have the form `minimize c·x` subject to `A x ≥ b` and `E x = d`, with
//! free variables. Rows of the form `x_j ≥ 0` are recognised and turned into
//! variable bounds, which keeps the tableau small for the nonnegative LPs built
//! by the stability module; their duals are recovered from reduced costs.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    /// `coeffs · x ≥ rhs`
    pub inequalities: Vec<Constraint>,
    /// `coeffs · x = rhs`
    pub equalities: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Rational>,
        /// One nonnegative multiplier per inequality.
        ineq_duals: Vec<Rational>,
        /// One free multiplier per equality.
        eq_duals: Vec<Rational>,
        value: Rational,
    },
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
    /// Farkas certificate: `Aᵀy + Eᵀz = 0`, `y ≥ 0`, `b·y + d·z > 0`.
    Infeasible {
        ineq_multipliers: Vec<Rational>,
        eq_multipliers: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            objective: vec![Rational::zero(); num_vars],
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.inequalities.push(Constraint::new(coeffs, rhs));
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.equalities.push(Constraint::new(coeffs, rhs));
    }

    fn check_dims(&self) -> Result<()> {
        let n = self.num_vars();
        for c in self.inequalities.iter().chain(&self.equalities) {
            if c.coeffs.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Column {
    /// `(variable, +1 or -1)`
    Structural(usize, bool),
    Slack(usize),
    Artificial(usize),
}

struct Tableau {
    cols: Vec<Column>,
    /// `rows[r]` has `cols.len() + 1` entries; the last is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Column that formed the identity for row `r` in the initial basis.
    init_col: Vec<usize>,
    /// Row sign flip applied so that the right-hand side is nonnegative.
    sign: Vec<Rational>,
    /// Tableau row -> (is_equality, original index)
    origin: Vec<(bool, usize)>,
    reduced: Vec<Rational>,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        self.rows[r].last().unwrap()
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let ncols = self.cols.len();
        let mut d: Vec<Rational> = costs.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate().take(ncols) {
                let t = &self.rows[r][j];
                if !t.is_zero() {
                    *dj -= cb * t;
                }
            }
        }
        self.reduced = d;
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = self.rows[pr][pc].recip();
        for x in self.rows[pr].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = std::mem::take(&mut self.rows[pr]);
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r == pr || row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        let f = self.reduced[pc].clone();
        if !f.is_zero() {
            for (x, p) in self.reduced.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.rows[pr] = prow;
        self.basis[pr] = pc;
    }

    /// Runs Bland's rule. Returns `Some(col)` if `col` certifies unboundedness.
    fn run(&mut self, allow_artificial: bool) -> Option<usize> {
        loop {
            let entering = (0..self.cols.len()).find(|&j| {
                self.reduced[j].is_negative()
                    && (allow_artificial || !matches!(self.cols[j], Column::Artificial(_)))
            });
            let pc = entering?;
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][pc];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return Some(pc),
                Some((pr, _)) => self.pivot(pr, pc),
            }
        }
    }

    fn primal_values(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.cols.len()];
        for (r, &b) in self.basis.iter().enumerate() {
            v[b] = self.rhs(r).clone();
        }
        v
    }

    fn to_original(&self, colvals: &[Rational], n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (j, c) in self.cols.iter().enumerate() {
            if let Column::Structural(v, pos) = *c {
                if pos {
                    x[v] += &colvals[j];
                } else {
                    x[v] -= &colvals[j];
                }
            }
        }
        x
    }

    /// Multipliers for the original constraints read off the current reduced
    /// costs under the cost vector `costs`.
    fn multipliers(
        &self,
        costs: &[Rational],
        bound_rows: &[(usize, usize, Rational)],
        n_ineq: usize,
        n_eq: usize,
    ) -> (Vec<Rational>, Vec<Rational>) {
        let mut y = vec![Rational::zero(); n_ineq];
        let mut z = vec![Rational::zero(); n_eq];
        for r in 0..self.rows.len() {
            let j = self.init_col[r];
            let pi = &costs[j] - &self.reduced[j];
            let val = &self.sign[r] * pi;
            match self.origin[r] {
                (false, i) => y[i] = val,
                (true, i) => z[i] = val,
            }
        }
        for (row, col, a) in bound_rows {
            y[*row] = &self.reduced[*col] / a;
        }
        (y, z)
    }
}

/// Solves the program exactly. Deterministic: Bland's rule with ties broken by
/// the lowest column index.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.check_dims()?;
    let n = lp.num_vars();

    // Detect `x_j >= 0` rows.
    let mut bounded: Vec<Option<usize>> = vec![None; n];
    let mut is_bound_row = vec![false; lp.inequalities.len()];
    for (i, c) in lp.inequalities.iter().enumerate() {
        if !c.rhs.is_zero() {
            continue;
        }
        let mut nz = c.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero());
        if let (Some((j, a)), None) = (nz.next(), nz.next()) {
            if a.is_positive() && bounded[j].is_none() {
                bounded[j] = Some(i);
                is_bound_row[i] = true;
            }
        }
    }

    let mut cols = Vec::new();
    let mut var_cols: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, b) in bounded.iter().enumerate() {
        var_cols[j].push(cols.len());
        cols.push(Column::Structural(j, true));
        if b.is_none() {
            var_cols[j].push(cols.len());
            cols.push(Column::Structural(j, false));
        }
    }
    // A bound row `a x_j ≥ 0` has multiplier (reduced cost of x_j) / a.
    let bound_rows: Vec<(usize, usize, Rational)> = bounded
        .iter()
        .enumerate()
        .filter_map(|(j, b)| b.map(|row| (row, var_cols[j][0], lp.inequalities[row].coeffs[j].clone())))
        .collect();

    struct RowSpec<'a> {
        c: &'a Constraint,
        eq: bool,
        idx: usize,
    }
    let mut specs: Vec<RowSpec> = Vec::new();
    for (i, c) in lp.inequalities.iter().enumerate() {
        if !is_bound_row[i] {
            specs.push(RowSpec { c, eq: false, idx: i });
        }
    }
    for (i, c) in lp.equalities.iter().enumerate() {
        specs.push(RowSpec { c, eq: true, idx: i });
    }
    let m = specs.len();

    let mut slack_col = vec![None; m];
    for (r, s) in specs.iter().enumerate() {
        if !s.eq {
            slack_col[r] = Some(cols.len());
            cols.push(Column::Slack(r));
        }
    }
    // Rows whose slack can start in the basis need no artificial.
    let mut sign = Vec::with_capacity(m);
    let mut needs_art = vec![false; m];
    for (r, s) in specs.iter().enumerate() {
        let flip = if s.eq { s.c.rhs.is_negative() } else { !s.c.rhs.is_positive() };
        sign.push(if flip { -Rational::one() } else { Rational::one() });
        needs_art[r] = s.eq || !flip;
    }
    let mut art_col = vec![None; m];
    for r in 0..m {
        if needs_art[r] {
            art_col[r] = Some(cols.len());
            cols.push(Column::Artificial(r));
        }
    }
    let ncols = cols.len();

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut origin = Vec::with_capacity(m);
    for (r, s) in specs.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        for (j, col) in cols.iter().enumerate() {
            if let Column::Structural(v, pos) = *col {
                let a = &s.c.coeffs[v];
                if !a.is_zero() {
                    row[j] = if pos { a * &sign[r] } else { -(a * &sign[r]) };
                }
            }
        }
        if let Some(sc) = slack_col[r] {
            row[sc] = -sign[r].clone();
        }
        if let Some(ac) = art_col[r] {
            row[ac] = Rational::one();
        }
        row[ncols] = &s.c.rhs * &sign[r];
        rows.push(row);
        basis.push(art_col[r].or(slack_col[r]).unwrap());
        origin.push((s.eq, s.idx));
    }
    let init_col = basis.clone();

    let mut t = Tableau {
        cols,
        rows,
        basis,
        init_col,
        sign,
        origin,
        reduced: Vec::new(),
    };

    // Phase 1.
    let phase1: Vec<Rational> = t
        .cols
        .iter()
        .map(|c| if matches!(c, Column::Artificial(_)) { Rational::one() } else { Rational::zero() })
        .collect();
    t.set_costs(&phase1);
    t.run(true);
    let infeas: Rational = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| matches!(t.cols[b], Column::Artificial(_)))
        .map(|(r, _)| t.rhs(r).clone())
        .sum();
    if infeas.is_positive() {
        let (y, z) = t.multipliers(&phase1, &bound_rows, lp.inequalities.len(), lp.equalities.len());
        return Ok(LpOutcome::Infeasible {
            ineq_multipliers: y,
            eq_multipliers: z,
        });
    }

    // Drive remaining (zero-valued) artificials out of the basis where possible.
    for r in 0..m {
        if !matches!(t.cols[t.basis[r]], Column::Artificial(_)) {
            continue;
        }
        if let Some(j) = (0..ncols)
            .find(|&j| !matches!(t.cols[j], Column::Artificial(_)) && !t.rows[r][j].is_zero())
        {
            t.pivot(r, j);
        }
    }

    // Phase 2.
    let phase2: Vec<Rational> = t
        .cols
        .iter()
        .map(|c| match *c {
            Column::Structural(v, true) => lp.objective[v].clone(),
            Column::Structural(v, false) => -lp.objective[v].clone(),
            _ => Rational::zero(),
        })
        .collect();
    t.set_costs(&phase2);
    if let Some(pc) = t.run(false) {
        let vals = t.primal_values();
        let mut dir = vec![Rational::zero(); ncols];
        dir[pc] = Rational::one();
        for (r, &b) in t.basis.iter().enumerate() {
            dir[b] = -t.rows[r][pc].clone();
        }
        return Ok(LpOutcome::Unbounded {
            point: t.to_original(&vals, n),
            ray: t.to_original(&dir, n),
        });
    }
    let vals = t.primal_values();
    let x = t.to_original(&vals, n);
    let (y, z) = t.multipliers(&phase2, &bound_rows, lp.inequalities.len(), lp.equalities.len());
    let value = dot(&lp.objective, &x);
    Ok(LpOutcome::Optimal {
        x,
        ineq_duals: y,
        eq_duals: z,
        value,
    })
}

/// Re-checks every certificate property of an outcome with exact arithmetic.
pub fn verify_certificate(lp: &LinearProgram, outcome: &LpOutcome) -> std::result::Result<(), String> {
    let n = lp.num_vars();
    let feasible = |x: &[Rational]| -> std::result::Result<(), String> {
        if x.len() != n {
            return Err("wrong point length".into());
        }
        for (i, c) in lp.inequalities.iter().enumerate() {
            if dot(&c.coeffs, x) < c.rhs {
                return Err(format!("inequality {i} violated"));
            }
        }
        for (i, c) in lp.equalities.iter().enumerate() {
            if dot(&c.coeffs, x) != c.rhs {
                return Err(format!("equality {i} violated"));
            }
        }
        Ok(())
    };
    let combo = |y: &[Rational], z: &[Rational]| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (c, yi) in lp.inequalities.iter().zip(y).chain(lp.equalities.iter().zip(z)) {
            if yi.is_zero() {
                continue;
            }
            for (vj, a) in v.iter_mut().zip(&c.coeffs) {
                *vj += a * yi;
            }
        }
        v
    };
    let rhs_combo = |y: &[Rational], z: &[Rational]| -> Rational {
        lp.inequalities
            .iter()
            .zip(y)
            .chain(lp.equalities.iter().zip(z))
            .map(|(c, m)| &c.rhs * m)
            .sum()
    };
    match outcome {
        LpOutcome::Optimal {
            x,
            ineq_duals,
            eq_duals,
            value,
        } => {
            feasible(x)?;
            if ineq_duals.len() != lp.inequalities.len() || eq_duals.len() != lp.equalities.len() {
                return Err("dual length mismatch".into());
            }
            if ineq_duals.iter().any(Signed::is_negative) {
                return Err("negative inequality dual".into());
            }
            if combo(ineq_duals, eq_duals) != lp.objective {
                return Err("dual infeasible: Aᵀy + Eᵀz ≠ c".into());
            }
            for (i, (c, y)) in lp.inequalities.iter().zip(ineq_duals).enumerate() {
                if !y.is_zero() && dot(&c.coeffs, x) != c.rhs {
                    return Err(format!("complementary slackness fails at row {i}"));
                }
            }
            if &dot(&lp.objective, x) != value {
                return Err("reported value differs from c·x".into());
            }
            if rhs_combo(ineq_duals, eq_duals) != *value {
                return Err("duality gap".into());
            }
            Ok(())
        }
        LpOutcome::Unbounded { point, ray } => {
            feasible(point)?;
            for (i, c) in lp.inequalities.iter().enumerate() {
                if dot(&c.coeffs, ray).is_negative() {
                    return Err(format!("ray leaves inequality {i}"));
                }
            }
            for (i, c) in lp.equalities.iter().enumerate() {
                if !dot(&c.coeffs, ray).is_zero() {
                    return Err(format!("ray leaves equality {i}"));
                }
            }
            if !dot(&lp.objective, ray).is_negative() {
                return Err("ray does not decrease the objective".into());
            }
            Ok(())
        }
        LpOutcome::Infeasible {
            ineq_multipliers,
            eq_multipliers,
        } => {
            if ineq_multipliers.iter().any(Signed::is_negative) {
                return Err("negative Farkas multiplier".into());
            }
            if combo(ineq_multipliers, eq_multipliers).iter().any(|v| !v.is_zero()) {
                return Err("Farkas combination is not zero".into());
            }
            if !rhs_combo(ineq_multipliers, eq_multipliers).is_positive() {
                return Err("Farkas right-hand side is not positive".into());
            }
            Ok(())
        }
    }
}

/// Solves and insists on an optimum, mapping other outcomes to errors.
pub fn solve_optimal(lp: &LinearProgram) -> Result<(Vec<Rational>, Rational)> {
    match solve(lp)? {
        LpOutcome::Optimal { x, value, .. } => Ok((x, value)),
        LpOutcome::Unbounded { .. } => Err(Error::Lp("unbounded".into())),
        LpOutcome::Infeasible { .. } => Err(Error::Lp("infeasible".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn minimize_x_above_three() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![int(1)];
        lp.add_ge(vec![int(1)], int(3));
        let out = solve(&lp).unwrap();
        verify_certificate(&lp, &out).unwrap();
        match out {
            LpOutcome::Optimal { x, value, .. } => {
                assert_eq!(x, vec![int(3)]);
                assert_eq!(value, int(3));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn unbounded_ray_points_up() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![int(-1)];
        lp.add_ge(vec![int(1)], int(0));
        let out = solve(&lp).unwrap();
        verify_certificate(&lp, &out).unwrap();
        match out {
            LpOutcome::Unbounded { ray, .. } => assert_eq!(ray, vec![int(1)]),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_with_unit_farkas_multipliers() {
        let mut lp = LinearProgram::new(1);
        lp.add_ge(vec![int(1)], int(1));
        lp.add_ge(vec![int(-1)], int(0));
        let out = solve(&lp).unwrap();
        verify_certificate(&lp, &out).unwrap();
        match out {
            LpOutcome::Infeasible {
                ineq_multipliers, ..
            } => assert_eq!(ineq_multipliers, vec![int(1), int(1)]),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn equalities_and_bounds_together() {
        // min x + 2y  s.t. x + y = 4, x >= 0, y >= 0, x <= 3
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(1), int(2)];
        lp.add_eq(vec![int(1), int(1)], int(4));
        lp.add_ge(vec![int(1), int(0)], int(0));
        lp.add_ge(vec![int(0), int(1)], int(0));
        lp.add_ge(vec![int(-1), int(0)], int(-3));
        let out = solve(&lp).unwrap();
        verify_certificate(&lp, &out).unwrap();
        assert_eq!(out.optimal_value(), Some(&int(5)));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut lp = LinearProgram::new(2);
        lp.add_ge(vec![int(1)], int(0));
        assert!(matches!(solve(&lp), Err(Error::DimensionMismatch { .. })));
    }
}
