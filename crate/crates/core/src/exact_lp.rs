//! Exact rational simplex.
//!
//! Every LP in the crate goes through [`solve_lp`]. The kernel is a dense
//! two-phase tableau simplex over [`BigRational`] with Bland's rule, so it
//! terminates on degenerate problems and is deterministic: the same program
//! always produces the same basis sequence and the same optimal vertex.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::LpError;

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Relation::Ge, rhs)
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x)
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// Optional box bounds for one variable. The default is a free variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarBound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl VarBound {
    pub fn free() -> Self {
        Self::default()
    }

    pub fn nonnegative() -> Self {
        Self {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        Self {
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| value >= l)
            && self.upper.as_ref().is_none_or(|u| value <= u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

impl LinearProgram {
    /// A program over `objective.len()` free variables with no constraints.
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let bounds = vec![VarBound::free(); objective.len()];
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            bounds,
        }
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn maximize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn dimension(&self) -> usize {
        self.objective.len()
    }

    /// Make every variable nonnegative (upper bounds are kept).
    pub fn nonnegative(mut self) -> Self {
        for b in &mut self.bounds {
            b.lower = Some(Rational::zero());
        }
        self
    }

    pub fn with_bound(mut self, var: usize, bound: VarBound) -> Self {
        self.bounds[var] = bound;
        self
    }

    pub fn with_constraint(mut self, constraint: Constraint) -> Self {
        self.constraints.push(constraint);
        self
    }

    pub fn push(&mut self, constraint: Constraint) {
        self.constraints.push(constraint);
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.dimension();
        if self.bounds.len() != n {
            return Err(LpError::DimensionMismatch {
                what: "variable bounds".into(),
                expected: n,
                found: self.bounds.len(),
            });
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    what: format!("constraint {i}"),
                    expected: n,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.dimension()
            && self.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Solve `lp` exactly.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let Some(std_form) = StandardForm::build(lp) else {
        return Ok(LpOutcome::Infeasible);
    };
    let outcome = std_form.solve();
    Ok(match outcome {
        StdOutcome::Infeasible => LpOutcome::Infeasible,
        StdOutcome::Unbounded => LpOutcome::Unbounded,
        StdOutcome::Optimal(y) => {
            let point = std_form.recover(&y);
            let value = lp.objective_at(&point);
            debug_assert!(lp.is_feasible_point(&point));
            LpOutcome::Optimal { value, point }
        }
    })
}

/// Return a point satisfying every constraint and bound, or `None` if the
/// system is infeasible. The dimension is `bounds.len()`.
pub fn find_feasible(
    constraints: &[Constraint],
    bounds: &[VarBound],
) -> Result<Option<Vec<Rational>>, LpError> {
    let mut lp = LinearProgram::minimize(vec![Rational::zero(); bounds.len()]);
    lp.bounds = bounds.to_vec();
    lp.constraints = constraints.to_vec();
    Ok(match solve_lp(&lp)? {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    })
}

// ---------------------------------------------------------------------------
// Standard form: min c.y, A y = b, y >= 0, b >= 0.

#[derive(Clone, Debug)]
enum VarMap {
    /// x = lower + y[col]
    Shifted { col: usize, lower: Rational },
    /// x = upper - y[col]
    Mirrored { col: usize, upper: Rational },
    /// x = y[pos] - y[neg]
    Split { pos: usize, neg: usize },
}

struct Row {
    coeffs: Vec<Rational>,
    relation: Relation,
    rhs: Rational,
}

struct StandardForm {
    maps: Vec<VarMap>,
    /// Number of structural columns (before slacks).
    structural: usize,
    rows: Vec<Row>,
    cost: Vec<Rational>,
}

enum StdOutcome {
    Optimal(Vec<Rational>),
    Infeasible,
    Unbounded,
}

impl StandardForm {
    /// `None` when some variable has `lower > upper`.
    fn build(lp: &LinearProgram) -> Option<Self> {
        let mut maps = Vec::with_capacity(lp.dimension());
        let mut next = 0usize;
        let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
        for b in &lp.bounds {
            match (&b.lower, &b.upper) {
                (Some(l), Some(u)) => {
                    if l > u {
                        return None;
                    }
                    maps.push(VarMap::Shifted {
                        col: next,
                        lower: l.clone(),
                    });
                    bound_rows.push((next, u - l));
                    next += 1;
                }
                (Some(l), None) => {
                    maps.push(VarMap::Shifted {
                        col: next,
                        lower: l.clone(),
                    });
                    next += 1;
                }
                (None, Some(u)) => {
                    maps.push(VarMap::Mirrored {
                        col: next,
                        upper: u.clone(),
                    });
                    next += 1;
                }
                (None, None) => {
                    maps.push(VarMap::Split {
                        pos: next,
                        neg: next + 1,
                    });
                    next += 2;
                }
            }
        }
        let structural = next;

        let sign = match lp.sense {
            Sense::Minimize => Rational::one(),
            Sense::Maximize => -Rational::one(),
        };
        let mut cost = vec![Rational::zero(); structural];
        for (c, map) in lp.objective.iter().zip(&maps) {
            let c = c * &sign;
            match map {
                VarMap::Shifted { col, .. } => cost[*col] += c,
                VarMap::Mirrored { col, .. } => cost[*col] -= c,
                VarMap::Split { pos, neg } => {
                    cost[*neg] -= &c;
                    cost[*pos] += c;
                }
            }
        }

        let mut seen = HashSet::new();
        let mut rows = Vec::new();
        for c in &lp.constraints {
            if !seen.insert(c) {
                continue;
            }
            let mut coeffs = vec![Rational::zero(); structural];
            let mut rhs = c.rhs.clone();
            for (a, map) in c.coeffs.iter().zip(&maps) {
                if a.is_zero() {
                    continue;
                }
                match map {
                    VarMap::Shifted { col, lower } => {
                        coeffs[*col] += a;
                        rhs -= a * lower;
                    }
                    VarMap::Mirrored { col, upper } => {
                        coeffs[*col] -= a;
                        rhs -= a * upper;
                    }
                    VarMap::Split { pos, neg } => {
                        coeffs[*pos] += a;
                        coeffs[*neg] -= a;
                    }
                }
            }
            rows.push(Row {
                coeffs,
                relation: c.relation,
                rhs,
            });
        }
        for (col, width) in bound_rows {
            let mut coeffs = vec![Rational::zero(); structural];
            coeffs[col] = Rational::one();
            rows.push(Row {
                coeffs,
                relation: Relation::Le,
                rhs: width,
            });
        }
        Some(Self {
            maps,
            structural,
            rows,
            cost,
        })
    }

    fn recover(&self, y: &[Rational]) -> Vec<Rational> {
        self.maps
            .iter()
            .map(|m| match m {
                VarMap::Shifted { col, lower } => lower + &y[*col],
                VarMap::Mirrored { col, upper } => upper - &y[*col],
                VarMap::Split { pos, neg } => &y[*pos] - &y[*neg],
            })
            .collect()
    }

    fn solve(&self) -> StdOutcome {
        let m = self.rows.len();
        let slack_count = self
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let real_cols = self.structural + slack_count;

        // Rows with a +1 slack and nonnegative rhs start with the slack basic;
        // every other row gets an artificial.
        let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut rhs: Vec<Rational> = Vec::with_capacity(m);
        let mut basis: Vec<usize> = Vec::with_capacity(m);
        let mut needs_artificial: Vec<usize> = Vec::new();
        let mut slack_col = self.structural;
        for (i, row) in self.rows.iter().enumerate() {
            let mut coeffs = row.coeffs.clone();
            coeffs.resize(real_cols, Rational::zero());
            let mut b = row.rhs.clone();
            let mut slack = None;
            match row.relation {
                Relation::Le => {
                    coeffs[slack_col] = Rational::one();
                    slack = Some(slack_col);
                    slack_col += 1;
                }
                Relation::Ge => {
                    coeffs[slack_col] = -Rational::one();
                    slack = Some(slack_col);
                    slack_col += 1;
                }
                Relation::Eq => {}
            }
            if b.is_negative() {
                for v in &mut coeffs {
                    *v = -&*v;
                }
                b = -b;
            }
            match slack {
                Some(s) if coeffs[s].is_one() => basis.push(s),
                _ => {
                    basis.push(usize::MAX);
                    needs_artificial.push(i);
                }
            }
            tab.push(coeffs);
            rhs.push(b);
        }

        let total_cols = real_cols + needs_artificial.len();
        for row in &mut tab {
            row.resize(total_cols, Rational::zero());
        }
        for (k, &i) in needs_artificial.iter().enumerate() {
            let col = real_cols + k;
            tab[i][col] = Rational::one();
            basis[i] = col;
        }

        let mut t = Tableau {
            rows: tab,
            rhs,
            basis,
            obj: vec![Rational::zero(); total_cols],
            obj_rhs: Rational::zero(),
        };

        if !needs_artificial.is_empty() {
            // Phase 1: minimize the sum of artificials.
            let mut phase1 = vec![Rational::zero(); total_cols];
            for c in phase1.iter_mut().skip(real_cols) {
                *c = Rational::one();
            }
            t.set_objective(&phase1);
            if !t.run(total_cols) {
                unreachable!("phase 1 objective is bounded below by zero");
            }
            if !t.obj_rhs.is_zero() {
                return StdOutcome::Infeasible;
            }
            t.expel_artificials(real_cols);
            t.truncate(real_cols);
        }

        let mut cost = self.cost.clone();
        cost.resize(real_cols, Rational::zero());
        t.set_objective(&cost);
        if !t.run(real_cols) {
            return StdOutcome::Unbounded;
        }
        let mut y = vec![Rational::zero(); self.structural];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < self.structural {
                y[b] = t.rhs[i].clone();
            }
        }
        StdOutcome::Optimal(y)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs; the tableau is always in canonical form for `basis`.
    obj: Vec<Rational>,
    /// Negated objective value of the current basic solution.
    obj_rhs: Rational,
}

impl Tableau {
    fn set_objective(&mut self, cost: &[Rational]) {
        self.obj = cost.to_vec();
        self.obj_rhs = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            let cb = cb.clone();
            for (o, a) in self.obj.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *o -= &cb * a;
                }
            }
            self.obj_rhs -= &cb * &self.rhs[i];
        }
    }

    /// Bland's rule simplex over columns `0..allowed`. Returns false when
    /// the objective is unbounded below.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        if !p.is_one() {
            for v in &mut self.rows[row] {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[row] /= &p;
        }
        let nz: Vec<usize> = (0..self.rows[row].len())
            .filter(|&j| !self.rows[row][j].is_zero())
            .collect();
        let pivot_row = std::mem::take(&mut self.rows[row]);
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let f = self.rows[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = self.obj[col].clone();
        if !f.is_zero() {
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                self.obj[j] -= delta;
            }
            self.obj_rhs -= &f * &pivot_rhs;
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    /// After a zero-cost phase 1, pivot remaining (zero-level) artificials
    /// out of the basis, dropping rows that turn out to be redundant.
    fn expel_artificials(&mut self, real_cols: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < real_cols {
                i += 1;
                continue;
            }
            match (0..real_cols).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    fn truncate(&mut self, cols: usize) {
        for r in &mut self.rows {
            r.truncate(cols);
        }
        self.obj.truncate(cols);
    }
}
