//! Dense two-phase simplex with primal and dual solutions.
//!
//! Entering columns follow Dantzig's rule with index tie-breaks; after a run of
//! degenerate pivots the solver switches to Bland's rule until the objective
//! moves again, so it cannot cycle. Problems whose entries are all
//! small-denominator rationals are solved in exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Auto,
    Float,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Variables are nonnegative unless marked free; optional finite upper bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<f64>,
    pub free: Vec<bool>,
    pub upper: Vec<Option<f64>>,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LpProblem {
            sense,
            objective,
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            free: vec![false; n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constraint(&mut self, row: Vec<f64>, rel: Relation, rhs: f64) -> usize {
        assert_eq!(
            row.len(),
            self.objective.len(),
            "constraint width must match the objective"
        );
        self.rows.push(row);
        self.relations.push(rel);
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn set_upper(&mut self, var: usize, bound: f64) {
        self.upper[var] = Some(bound);
    }
}

/// Duals are shadow prices: the rate of change of the optimal objective per
/// unit increase of the right-hand side (or of the upper bound).
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub duals: Vec<f64>,
    pub bound_duals: Vec<f64>,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub slackness_residual: f64,
    pub exact: bool,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn duality_gap(&self) -> f64 {
        (self.objective - self.dual_objective).abs()
    }
}

trait Num: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_zero(&self) -> bool;
    /// `a < b` beyond tolerance.
    fn less(&self, o: &Self) -> bool;
    fn clean(self) -> Self {
        self
    }
}

const PIVOT_TOL: f64 = 1e-9;

impl Num for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        *self > PIVOT_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -PIVOT_TOL
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn less(&self, o: &Self) -> bool {
        *self < *o - 1e-12 * (1.0 + o.abs())
    }
    fn clean(self) -> Self {
        if self.abs() < 1e-13 {
            0.0
        } else {
            self
        }
    }
}

impl Num for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_f64(x: f64) -> Self {
        small_rational(x).unwrap_or_else(|| BigRational::from_float(x).expect("finite"))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn less(&self, o: &Self) -> bool {
        self < o
    }
}

const MAX_DENOMINATOR: i64 = 4096;

/// `p/q` with `q <= 4096` within `1e-12` relative of `x`, if one exists.
pub fn small_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x.abs();
    for _ in 0..40 {
        let a = r.floor();
        if a > 1e13 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x.abs() - h1 as f64 / k1 as f64).abs() <= 1e-12 * x.abs().max(1.0) {
            let p = if x < 0.0 { -h1 } else { h1 };
            return Some(BigRational::new(BigInt::from(p), BigInt::from(k1)));
        }
        let frac = r - a as f64;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

pub fn lp_solve(p: &LpProblem) -> LpSolution {
    lp_solve_with(p, Arithmetic::Auto)
}

pub fn lp_solve_with(p: &LpProblem, arith: Arithmetic) -> LpSolution {
    let std = StandardForm::build(p);
    let rational = match arith {
        Arithmetic::Float => false,
        Arithmetic::Rational => true,
        Arithmetic::Auto => {
            std.rows.len() * (std.ncols + 1) <= 20_000
                && p.objective
                    .iter()
                    .chain(p.rhs.iter())
                    .chain(p.rows.iter().flatten())
                    .chain(p.upper.iter().flatten())
                    .all(|&v| small_rational(v).is_some())
        }
    };
    let raw = if rational {
        std.solve::<BigRational>()
    } else {
        std.solve::<f64>()
    };
    finish(p, &std, raw, rational)
}

/// `min c·x, A x = b, x >= 0` after slacks, free-variable splitting and sign normalisation.
struct StandardForm {
    ncols: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    /// Column equal to the unit vector of each row, used as the initial basis.
    unit: Vec<usize>,
    artificial_from: usize,
    /// `+1` or `-1`: the sign applied to each row to make its rhs nonnegative.
    sign: Vec<f64>,
    /// Structural column of each user variable and of its negative part if free.
    pos_col: Vec<usize>,
    neg_col: Vec<Option<usize>>,
    /// Internal row of each variable's upper bound.
    upper_row: Vec<Option<usize>>,
}

struct RawSolution {
    status: LpStatus,
    col_values: Vec<f64>,
    /// Reduced costs of every column at the final basis (internal min sense).
    reduced: Vec<f64>,
    pivots: usize,
}

impl StandardForm {
    fn build(p: &LpProblem) -> Self {
        let nv = p.num_vars();
        let mut pos_col = Vec::with_capacity(nv);
        let mut neg_col = Vec::with_capacity(nv);
        let mut ncols = 0;
        for j in 0..nv {
            pos_col.push(ncols);
            ncols += 1;
            if p.free[j] {
                neg_col.push(Some(ncols));
                ncols += 1;
            } else {
                neg_col.push(None);
            }
        }
        let flip = if p.sense == Sense::Maximize {
            -1.0
        } else {
            1.0
        };
        let mut struct_cost = vec![0.0; ncols];
        for j in 0..nv {
            struct_cost[pos_col[j]] = flip * p.objective[j];
            if let Some(c) = neg_col[j] {
                struct_cost[c] = -flip * p.objective[j];
            }
        }
        // Logical rows: user constraints, then upper bounds.
        let mut logical: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
        for (k, row) in p.rows.iter().enumerate() {
            let mut r = vec![0.0; ncols];
            for j in 0..nv {
                r[pos_col[j]] = row[j];
                if let Some(c) = neg_col[j] {
                    r[c] = -row[j];
                }
            }
            logical.push((r, p.relations[k], p.rhs[k]));
        }
        let mut upper_row = vec![None; nv];
        for j in 0..nv {
            if let Some(u) = p.upper[j] {
                let mut r = vec![0.0; ncols];
                r[pos_col[j]] = 1.0;
                if let Some(c) = neg_col[j] {
                    r[c] = -1.0;
                }
                upper_row[j] = Some(logical.len());
                logical.push((r, Relation::Le, u));
            }
        }
        let m = logical.len();
        let slack_count = logical.iter().filter(|l| l.1 != Relation::Eq).count();
        let mut total = ncols + slack_count;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut sign = Vec::with_capacity(m);
        let mut unit = vec![usize::MAX; m];
        let mut slack_col = ncols;
        let mut slack_of = vec![None; m];
        for (i, (r, rel, b)) in logical.iter().enumerate() {
            let s = if *b < 0.0 { -1.0 } else { 1.0 };
            sign.push(s);
            let mut row: Vec<f64> = r.iter().map(|v| s * v).collect();
            row.resize(total, 0.0);
            match rel {
                Relation::Le => {
                    row[slack_col] = s;
                    slack_of[i] = Some(slack_col);
                    slack_col += 1;
                }
                Relation::Ge => {
                    row[slack_col] = -s;
                    slack_of[i] = Some(slack_col);
                    slack_col += 1;
                }
                Relation::Eq => {}
            }
            if let Some(c) = slack_of[i] {
                if row[c] == 1.0 {
                    unit[i] = c;
                }
            }
            rows.push(row);
            rhs.push(s * b);
        }
        let artificial_from = total;
        for i in 0..m {
            if unit[i] == usize::MAX {
                unit[i] = total;
                total += 1;
            }
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row.resize(total, 0.0);
            if unit[i] >= artificial_from {
                row[unit[i]] = 1.0;
            }
        }
        let mut cost = struct_cost;
        cost.resize(total, 0.0);
        StandardForm {
            ncols: total,
            rows,
            rhs,
            cost,
            unit,
            artificial_from,
            sign,
            pos_col,
            neg_col,
            upper_row,
        }
    }

    fn solve<T: Num>(&self) -> RawSolution {
        let m = self.rows.len();
        let nc = self.ncols;
        let mut t: Vec<Vec<T>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, &b)| {
                let mut v: Vec<T> = r.iter().map(|&x| T::from_f64(x)).collect();
                v.push(T::from_f64(b));
                v
            })
            .collect();
        let mut basis = self.unit.clone();
        let mut pivots = 0usize;

        // Phase 1: minimise the sum of artificials.
        let mut obj = vec![T::zero(); nc + 1];
        for (i, row) in t.iter().enumerate() {
            if basis[i] >= self.artificial_from {
                for (o, v) in obj.iter_mut().zip(row) {
                    *o = o.sub(v);
                }
            }
        }
        for c in self.artificial_from..nc {
            obj[c] = T::zero();
        }
        let mut tab = Tableau {
            t: &mut t,
            obj: &mut obj,
            basis: &mut basis,
        };
        if let Some(st) = tab.run(nc, &mut pivots) {
            if st == LpStatus::IterationLimit {
                return RawSolution::failed(st, nc, pivots);
            }
        }
        let infeasibility = tab.obj[nc].to_f64().abs();
        let scale = self.rhs.iter().fold(1.0f64, |a, b| a.max(b.abs()));
        if infeasibility > 1e-9 * scale {
            return RawSolution::failed(LpStatus::Infeasible, nc, pivots);
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if tab.basis[r] >= self.artificial_from {
                if let Some(c) = (0..self.artificial_from).find(|&c| {
                    let v = &tab.t[r][c];
                    v.is_pos() || v.is_neg()
                }) {
                    tab.pivot(r, c);
                    pivots += 1;
                }
            }
        }

        // Phase 2 with the true costs; artificials may not re-enter.
        let mut obj2 = vec![T::zero(); nc + 1];
        for c in 0..nc {
            obj2[c] = T::from_f64(self.cost[c]);
        }
        for r in 0..m {
            let cb = T::from_f64(self.cost[tab.basis[r]]);
            if !cb.is_zero() {
                for c in 0..=nc {
                    obj2[c] = obj2[c].sub(&cb.mul(&tab.t[r][c])).clean();
                }
            }
        }
        *tab.obj = obj2;
        let status = tab
            .run(self.artificial_from, &mut pivots)
            .unwrap_or(LpStatus::Optimal);
        if status != LpStatus::Optimal {
            return RawSolution::failed(status, nc, pivots);
        }
        let mut col_values = vec![0.0; nc];
        for r in 0..m {
            col_values[tab.basis[r]] = tab.t[r][nc].to_f64();
        }
        RawSolution {
            status,
            col_values,
            reduced: tab.obj[..nc].iter().map(Num::to_f64).collect(),
            pivots,
        }
    }
}

impl RawSolution {
    fn failed(status: LpStatus, nc: usize, pivots: usize) -> Self {
        RawSolution {
            status,
            col_values: vec![0.0; nc],
            reduced: vec![0.0; nc],
            pivots,
        }
    }
}

struct Tableau<'a, T> {
    t: &'a mut Vec<Vec<T>>,
    obj: &'a mut Vec<T>,
    basis: &'a mut Vec<usize>,
}

const ITERATION_LIMIT: usize = 200_000;
const DEGENERATE_RUN: usize = 50;

impl<T: Num> Tableau<'_, T> {
    /// Runs simplex iterations with entering columns restricted to `0..allowed`.
    /// Returns `None` at optimality.
    fn run(&mut self, allowed: usize, pivots: &mut usize) -> Option<LpStatus> {
        let rhs = self.obj.len() - 1;
        let mut degenerate = 0usize;
        loop {
            if *pivots > ITERATION_LIMIT {
                return Some(LpStatus::IterationLimit);
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let mut enter = None;
            for c in 0..allowed {
                if self.obj[c].is_neg() {
                    match enter {
                        None => enter = Some(c),
                        Some(e) if !bland && self.obj[c].less(&self.obj[e]) => enter = Some(c),
                        _ => {}
                    }
                    if bland {
                        break;
                    }
                }
            }
            let Some(c) = enter else { return None };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.t.len() {
                if !self.t[r][c].is_pos() {
                    continue;
                }
                let ratio = self.t[r][rhs].div(&self.t[r][c]);
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio.less(best) || (!best.less(&ratio) && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return Some(LpStatus::Unbounded);
            };
            if ratio.is_pos() {
                degenerate = 0;
            } else {
                degenerate += 1;
            }
            self.pivot(r, c);
            *pivots += 1;
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.t[r][c].clone();
        let row: Vec<T> = self.t[r].iter().map(|v| v.div(&piv)).collect();
        for (i, other) in self.t.iter_mut().enumerate() {
            if i == r || other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for (o, v) in other.iter_mut().zip(&row) {
                if !v.is_zero() {
                    *o = o.sub(&f.mul(v)).clean();
                }
            }
            other[c] = T::zero();
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (o, v) in self.obj.iter_mut().zip(&row) {
                if !v.is_zero() {
                    *o = o.sub(&f.mul(v)).clean();
                }
            }
            self.obj[c] = T::zero();
        }
        self.t[r] = row;
        self.basis[r] = c;
    }
}

fn finish(p: &LpProblem, std: &StandardForm, raw: RawSolution, exact: bool) -> LpSolution {
    let nv = p.num_vars();
    let flip = if p.sense == Sense::Maximize {
        -1.0
    } else {
        1.0
    };
    let mut x = vec![0.0; nv];
    for j in 0..nv {
        x[j] = raw.col_values[std.pos_col[j]] - std.neg_col[j].map_or(0.0, |c| raw.col_values[c]);
    }
    let objective: f64 = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    // Internal duals y = -(reduced cost of the unit column); shadow prices flip with the sense.
    let shadow: Vec<f64> = (0..std.rows.len())
        .map(|i| flip * std.sign[i] * -raw.reduced[std.unit[i]])
        .collect();
    let duals: Vec<f64> = shadow[..p.rows.len()].to_vec();
    let bound_duals: Vec<f64> = (0..nv)
        .map(|j| std.upper_row[j].map_or(0.0, |r| shadow[r]))
        .collect();
    let mut sol = LpSolution {
        status: raw.status,
        x,
        objective,
        duals,
        bound_duals,
        dual_objective: 0.0,
        primal_residual: 0.0,
        slackness_residual: 0.0,
        exact,
        pivots: raw.pivots,
    };
    if raw.status == LpStatus::Optimal {
        fill_residuals(p, &mut sol, &raw, std);
    } else {
        sol.objective = f64::NAN;
        sol.dual_objective = f64::NAN;
    }
    sol
}

fn fill_residuals(p: &LpProblem, sol: &mut LpSolution, raw: &RawSolution, std: &StandardForm) {
    let mut primal: f64 = 0.0;
    let mut slack: f64 = 0.0;
    let mut dual_obj = 0.0;
    for (k, row) in p.rows.iter().enumerate() {
        let lhs: f64 = row.iter().zip(&sol.x).map(|(a, v)| a * v).sum();
        let gap = lhs - p.rhs[k];
        let viol = match p.relations[k] {
            Relation::Le => gap.max(0.0),
            Relation::Ge => (-gap).max(0.0),
            Relation::Eq => gap.abs(),
        };
        primal = primal.max(viol);
        slack = slack.max((sol.duals[k] * gap).abs());
        dual_obj += p.rhs[k] * sol.duals[k];
    }
    for j in 0..p.num_vars() {
        if !p.free[j] {
            primal = primal.max((-sol.x[j]).max(0.0));
            slack = slack.max((sol.x[j] * raw.reduced[std.pos_col[j]]).abs());
        }
        if let Some(u) = p.upper[j] {
            primal = primal.max((sol.x[j] - u).max(0.0));
            slack = slack.max((sol.bound_duals[j] * (sol.x[j] - u)).abs());
            dual_obj += u * sol.bound_duals[j];
        }
    }
    sol.primal_residual = primal;
    sol.slackness_residual = slack;
    sol.dual_objective = dual_obj;
}
