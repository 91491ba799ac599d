//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::linalg::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Linear system over variables that are non-negative unless marked free,
/// with an optional objective to maximize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilitySystem {
    variables: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl FeasibilitySystem {
    pub fn new(variables: usize) -> Self {
        FeasibilitySystem { variables, free: vec![false; variables], constraints: Vec::new(), objective: None }
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> Option<&[Rational]> {
        self.objective.as_deref()
    }

    pub fn is_free(&self, var: usize) -> bool {
        self.free[var]
    }

    /// Allows `var` to take negative values.
    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.variables {
            return Err(Error::DimensionMismatch(format!(
                "constraint has {} coefficients for {} variables",
                coeffs.len(),
                self.variables
            )));
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(())
    }

    /// Bound on a single variable, `var (relation) rhs`.
    pub fn bound(&mut self, var: usize, relation: Relation, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.variables];
        coeffs[var] = Rational::one();
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> Result<()> {
        if objective.len() != self.variables {
            return Err(Error::DimensionMismatch(format!(
                "objective has {} coefficients for {} variables",
                objective.len(),
                self.variables
            )));
        }
        self.objective = Some(objective);
        Ok(())
    }

    /// Whether `point` satisfies every constraint and sign restriction.
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.variables
            && point.iter().zip(&self.free).all(|(x, &free)| free || !x.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, y) in self.obj.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Resets reduced costs for `cost` under the current basis.
    fn price(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                *o -= cb * x;
            }
        }
        self.obj = obj;
    }

    /// Runs primal simplex on columns `< limit`; `false` means unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        loop {
            let Some(c) = (0..limit).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[c];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Maximizes the objective (zero if absent) over the system.
pub fn lp_max(sys: &FeasibilitySystem) -> LpOutcome {
    // Column layout: one column per variable, an extra negative-part column
    // per free variable, then slacks, then artificials.
    let n = sys.variables;
    let mut neg_col = vec![None; n];
    let mut structural = n;
    for (k, slot) in neg_col.iter_mut().enumerate() {
        if sys.free[k] {
            *slot = Some(structural);
            structural += 1;
        }
    }
    let m = sys.constraints.len();
    let slack_count = sys.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let first_art = structural + slack_count;
    let width = first_art + m;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = structural;
    for (i, c) in sys.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); width + 1];
        let flip = c.rhs.is_negative();
        let sign = |x: &Rational| if flip { -x.clone() } else { x.clone() };
        for (k, a) in c.coeffs.iter().enumerate() {
            row[k] = sign(a);
            if let Some(nc) = neg_col[k] {
                row[nc] = -sign(a);
            }
        }
        row[width] = sign(&c.rhs);
        let relation = match (c.relation, flip) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (r, _) => r,
        };
        match relation {
            Relation::Le => {
                row[slack] = Rational::one();
                basis.push(slack);
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
                row[first_art + i] = Rational::one();
                basis.push(first_art + i);
            }
            Relation::Eq => {
                row[first_art + i] = Rational::one();
                basis.push(first_art + i);
            }
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, obj: Vec::new(), basis, width };

    // Phase one: maximize minus the sum of artificials.
    let mut cost = vec![Rational::zero(); width];
    for x in cost[first_art..].iter_mut() {
        *x = -Rational::one();
    }
    t.price(&cost);
    t.optimize(width);
    if t.obj[width].is_positive() {
        return LpOutcome::Infeasible;
    }
    // Drive artificials (all at zero) out of the basis, dropping redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= first_art {
            match (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in t.rows.iter_mut() {
        row[first_art..width].iter_mut().for_each(Rational::set_zero);
    }

    let mut cost = vec![Rational::zero(); width];
    if let Some(obj) = &sys.objective {
        for (k, c) in obj.iter().enumerate() {
            cost[k] = c.clone();
            if let Some(nc) = neg_col[k] {
                cost[nc] = -c.clone();
            }
        }
    }
    t.price(&cost);
    if !t.optimize(first_art) {
        return LpOutcome::Unbounded;
    }
    let mut values = vec![Rational::zero(); width];
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        values[b] = row[width].clone();
    }
    let point: Vec<Rational> = (0..n)
        .map(|k| match neg_col[k] {
            Some(nc) => &values[k] - &values[nc],
            None => values[k].clone(),
        })
        .collect();
    LpOutcome::Optimal { value: -t.obj[width].clone(), point }
}
