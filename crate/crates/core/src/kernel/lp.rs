//! Exact rational feasibility LP.
//!
//! The core solves `A x = b, x >= 0` with a phase-one simplex using Bland's
//! rule. Columns are kept sparse and brought into a restricted tableau on
//! demand (column generation priced by the phase-one duals), so systems
//! with thousands of variables but few rows stay cheap. Infeasibility is
//! always reported with a Farkas certificate.

use num_traits::{One, Signed, Zero};

use crate::error::{Result, TverbergError};
use crate::geom::Rational;

pub type SparseColumn = Vec<(usize, Rational)>;

/// `A x = b, x >= 0` with `A` given by sparse columns.
#[derive(Clone, Debug, Default)]
pub struct StandardForm {
    pub rows: usize,
    pub columns: Vec<SparseColumn>,
    pub rhs: Vec<Rational>,
    /// Columns placed in the initial restricted tableau.
    pub initial: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StandardOutcome {
    Feasible(Vec<Rational>),
    /// `y` with `A^T y >= 0` and `b^T y < 0`.
    Infeasible(Vec<Rational>),
}

struct Tableau {
    m: usize,
    /// Global column id of each structural tableau column. Tableau column
    /// `m + k` is `cols[k]`; columns `0..m` are the artificials.
    cols: Vec<usize>,
    in_tableau: Vec<bool>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    reduced: Vec<Rational>,
    neg_objective: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.m {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &nz {
                self.rows[i][j] -= &f * &pivot_row[j];
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.reduced[c].is_zero() {
            let f = self.reduced[c].clone();
            for &j in &nz {
                self.reduced[j] -= &f * &pivot_row[j];
            }
            self.neg_objective -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Bland's rule until the restricted phase-one problem is optimal.
    fn optimize(&mut self) {
        loop {
            let Some(c) = (0..self.reduced.len()).find(|&j| self.reduced[j].is_negative()) else {
                return;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((r, b)) => ratio < *b || (ratio == *b && self.basis[i] < self.basis[*r]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let (r, _) = best.expect("phase one is bounded below");
            self.pivot(r, c);
        }
    }

    /// Phase-one duals: artificial `i` has cost 1 and reduced cost
    /// `1 - y_i`.
    fn duals(&self) -> Vec<Rational> {
        (0..self.m).map(|i| Rational::one() - &self.reduced[i]).collect()
    }

    fn add_column(&mut self, id: usize, col: &SparseColumn, y: &[Rational]) {
        for i in 0..self.m {
            let mut v = Rational::zero();
            for (k, a) in col {
                let binv = &self.rows[i][*k];
                if !binv.is_zero() {
                    v += binv * a;
                }
            }
            self.rows[i].push(v);
        }
        let price: Rational = col.iter().map(|(k, a)| &y[*k] * a).sum();
        self.reduced.push(-price);
        self.cols.push(id);
        self.in_tableau[id] = true;
    }
}

pub fn solve_standard(sf: &StandardForm) -> StandardOutcome {
    let m = sf.rows;
    let flip: Vec<bool> = sf.rhs.iter().map(Signed::is_negative).collect();
    let oriented = |col: &SparseColumn| -> SparseColumn {
        col.iter().map(|(i, a)| (*i, if flip[*i] { -a.clone() } else { a.clone() })).collect()
    };
    let b: Vec<Rational> = sf.rhs.iter().map(Signed::abs).collect();
    let mut t = Tableau {
        m,
        cols: Vec::new(),
        in_tableau: vec![false; sf.columns.len()],
        rows: (0..m).map(|i| (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect(),
        rhs: b.clone(),
        reduced: vec![Rational::zero(); m],
        neg_objective: -b.iter().sum::<Rational>(),
        basis: (0..m).collect(),
    };
    let mut start: Vec<usize> = sf.initial.clone();
    if sf.columns.len() <= 3 * m.max(1) {
        start = (0..sf.columns.len()).collect();
    }
    let ones = vec![Rational::one(); m];
    for id in start {
        if !t.in_tableau[id] {
            t.add_column(id, &oriented(&sf.columns[id]), &ones);
        }
    }
    loop {
        t.optimize();
        let y = t.duals();
        if t.neg_objective.is_zero() {
            let mut x = vec![Rational::zero(); sf.columns.len()];
            for (i, &c) in t.basis.iter().enumerate() {
                if c >= m {
                    x[t.cols[c - m]] = t.rhs[i].clone();
                }
            }
            return StandardOutcome::Feasible(x);
        }
        let mut priced: Vec<(Rational, usize)> = sf
            .columns
            .iter()
            .enumerate()
            .filter(|(j, _)| !t.in_tableau[*j])
            .filter_map(|(j, col)| {
                let v: Rational = col.iter().map(|(i, a)| if flip[*i] { -(&y[*i] * a) } else { &y[*i] * a }).sum();
                v.is_positive().then_some((v, j))
            })
            .collect();
        if priced.is_empty() {
            let witness =
                y.iter().zip(&flip).map(|(v, &f)| if f { v.clone() } else { -v.clone() }).collect();
            return StandardOutcome::Infeasible(witness);
        }
        priced.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, j) in priced.into_iter().take(m.max(1)) {
            t.add_column(j, &oriented(&sf.columns[j]), &y);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `coeffs . x (relation) rhs` over free variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Multipliers `y` with `y_i >= 0` on `<=` rows, `y_i <= 0` on `>=` rows,
/// `sum y_i a_i = 0` and `sum y_i b_i < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarkasWitness {
    pub multipliers: Vec<Rational>,
}

impl FarkasWitness {
    pub fn certifies(&self, vars: usize, constraints: &[Constraint]) -> bool {
        if self.multipliers.len() != constraints.len() {
            return false;
        }
        let signs_ok = constraints.iter().zip(&self.multipliers).all(|(c, y)| match c.relation {
            Relation::Le => !y.is_negative(),
            Relation::Ge => !y.is_positive(),
            Relation::Eq => true,
        });
        let combo_zero = (0..vars).all(|v| {
            constraints.iter().zip(&self.multipliers).map(|(c, y)| y * &c.coeffs[v]).sum::<Rational>().is_zero()
        });
        let rhs: Rational = constraints.iter().zip(&self.multipliers).map(|(c, y)| y * &c.rhs).sum();
        signs_ok && combo_zero && rhs.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    Infeasible(FarkasWitness),
}

/// Decides feasibility of a system over `vars` free variables.
pub fn lp_feasible(vars: usize, constraints: &[Constraint]) -> Result<LpOutcome> {
    if let Some(c) = constraints.iter().find(|c| c.coeffs.len() != vars) {
        return Err(TverbergError::DimensionMismatch { expected: vars, found: c.coeffs.len() });
    }
    let m = constraints.len();
    let mut columns: Vec<SparseColumn> = Vec::with_capacity(2 * vars + m);
    for v in 0..vars {
        let plus: SparseColumn = constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.coeffs[v].is_zero())
            .map(|(i, c)| (i, c.coeffs[v].clone()))
            .collect();
        let minus = plus.iter().map(|(i, a)| (*i, -a.clone())).collect();
        columns.push(plus);
        columns.push(minus);
    }
    for (i, c) in constraints.iter().enumerate() {
        match c.relation {
            Relation::Le => columns.push(vec![(i, Rational::one())]),
            Relation::Ge => columns.push(vec![(i, -Rational::one())]),
            Relation::Eq => {}
        }
    }
    let sf = StandardForm {
        rows: m,
        columns,
        rhs: constraints.iter().map(|c| c.rhs.clone()).collect(),
        initial: (0..2 * vars).collect(),
    };
    Ok(match solve_standard(&sf) {
        StandardOutcome::Feasible(x) => {
            LpOutcome::Feasible((0..vars).map(|v| &x[2 * v] - &x[2 * v + 1]).collect())
        }
        StandardOutcome::Infeasible(y) => LpOutcome::Infeasible(FarkasWitness { multipliers: y }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn contradictory_bounds() {
        let cs = vec![
            Constraint::new(vec![int(1)], Relation::Ge, int(0)),
            Constraint::new(vec![int(1)], Relation::Le, int(-1)),
        ];
        match lp_feasible(1, &cs).unwrap() {
            LpOutcome::Infeasible(w) => assert!(w.certifies(1, &cs)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn simplex_constraint_is_feasible() {
        let cs = vec![
            Constraint::new(vec![int(1), int(1)], Relation::Eq, int(1)),
            Constraint::new(vec![int(1), int(0)], Relation::Ge, int(0)),
            Constraint::new(vec![int(0), int(1)], Relation::Ge, int(0)),
        ];
        match lp_feasible(2, &cs).unwrap() {
            LpOutcome::Feasible(x) => assert!(cs.iter().all(|c| c.holds(&x))),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_region_is_feasible() {
        let cs = vec![Constraint::new(vec![int(1), int(-1)], Relation::Ge, int(5))];
        assert!(matches!(lp_feasible(2, &cs).unwrap(), LpOutcome::Feasible(_)));
    }

    #[test]
    fn mismatched_coefficients() {
        let cs = vec![Constraint::new(vec![int(1)], Relation::Le, int(1))];
        assert!(lp_feasible(2, &cs).is_err());
    }

    #[test]
    fn column_generation_with_many_columns() {
        // x_j >= 0, sum_j j x_j = 7, sum_j x_j = 1 over 200 columns.
        let n = 200;
        let sf = StandardForm {
            rows: 2,
            columns: (0..n).map(|j| vec![(0, int(j as i64)), (1, int(1))]).collect(),
            rhs: vec![int(7), int(1)],
            initial: vec![],
        };
        match solve_standard(&sf) {
            StandardOutcome::Feasible(x) => {
                let s: Rational = x.iter().sum();
                let w: Rational = x.iter().enumerate().map(|(j, v)| v * int(j as i64)).sum();
                assert_eq!((s, w), (int(1), int(7)));
                assert!(x.iter().all(|v| !v.is_negative()));
            }
            other => panic!("{other:?}"),
        }
        let sf = StandardForm { rhs: vec![int(-3), int(1)], ..sf };
        match solve_standard(&sf) {
            StandardOutcome::Infeasible(y) => {
                let b: Rational = y[0].clone() * int(-3) + y[1].clone();
                assert!(b.is_negative());
                for col in &sf.columns {
                    let v: Rational = col.iter().map(|(i, a)| &y[*i] * a).sum();
                    assert!(!v.is_negative());
                }
            }
            other => panic!("{other:?}"),
        }
    }

    fn system_from_point() -> impl Strategy<Value = (usize, Vec<Rational>, Vec<Constraint>)> {
        (1usize..=4, 1usize..=8).prop_flat_map(|(vars, m)| {
            (
                proptest::collection::vec(-10i64..10, vars),
                proptest::collection::vec((proptest::collection::vec(-6i64..6, vars), 0u8..3, 0i64..4), m),
            )
                .prop_map(move |(x, rows)| {
                    let x: Vec<Rational> = x.into_iter().map(|v| rat(v, 3)).collect();
                    let cs = rows
                        .into_iter()
                        .map(|(a, rel, slack)| {
                            let a: Vec<Rational> = a.into_iter().map(int).collect();
                            let lhs: Rational = a.iter().zip(&x).map(|(p, q)| p * q).sum();
                            let (relation, rhs) = match rel {
                                0 => (Relation::Le, lhs + int(slack)),
                                1 => (Relation::Ge, lhs - int(slack)),
                                _ => (Relation::Eq, lhs),
                            };
                            Constraint::new(a, relation, rhs)
                        })
                        .collect();
                    (vars, x, cs)
                })
        })
    }

    proptest! {
        #[test]
        fn systems_with_known_point_are_feasible((vars, _x, cs) in system_from_point()) {
            match lp_feasible(vars, &cs).unwrap() {
                LpOutcome::Feasible(sol) => prop_assert!(cs.iter().all(|c| c.holds(&sol))),
                LpOutcome::Infeasible(_) => prop_assert!(false, "known feasible point exists"),
            }
        }

        #[test]
        fn verdicts_are_certified(vars in 1usize..=3, rows in proptest::collection::vec((proptest::collection::vec(-4i64..4, 3), 0u8..3, -5i64..5), 1..7)) {
            let cs: Vec<Constraint> = rows
                .into_iter()
                .map(|(a, rel, b)| {
                    let relation = [Relation::Le, Relation::Ge, Relation::Eq][rel as usize];
                    Constraint::new(a[..vars].iter().map(|&v| int(v)).collect(), relation, int(b))
                })
                .collect();
            match lp_feasible(vars, &cs).unwrap() {
                LpOutcome::Feasible(sol) => prop_assert!(cs.iter().all(|c| c.holds(&sol))),
                LpOutcome::Infeasible(w) => prop_assert!(w.certifies(vars, &cs)),
            }
        }
    }
}
