//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Solves `minimize c·x` subject to linear rows and `x ≥ 0`. Sized for
//! programs with at most a few thousand rows and columns.

use crate::error::{Error, Result};

/// Pivot and feasibility tolerance.
pub const LP_TOLERANCE: f64 = 1e-9;

const MAX_PIVOTS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        LinearProgram { objective, rows: Vec::new() }
    }

    pub fn add(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) {
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        let n = self.objective.len();
        if self.rows.iter().any(|(c, _, _)| c.len() != n) {
            return Err(Error::InvalidInput("constraint width differs from the objective".into()));
        }
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Original variables, then slack/surplus columns, then artificials.
    structural: usize,
    artificial_start: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.objective.len();
        let m = lp.rows.len();
        let extra = lp.rows.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let artificial_start = n + extra;
        let needs_art: Vec<bool> = lp
            .rows
            .iter()
            .map(|(_, rel, rhs)| {
                let flipped = *rhs < 0.0;
                !matches!((rel, flipped), (Relation::Le, false) | (Relation::Ge, true))
            })
            .collect();
        let width = artificial_start + needs_art.iter().filter(|&&b| b).count();
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        let mut art = artificial_start;
        for ((coeffs, rel, rhs), &artificial) in lp.rows.iter().zip(&needs_art) {
            let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
            let mut row = vec![0.0; width + 1];
            for (r, c) in row.iter_mut().zip(coeffs) {
                *r = sign * c;
            }
            row[width] = sign * rhs;
            let mut basic = None;
            if *rel != Relation::Eq {
                let s = if *rel == Relation::Le { 1.0 } else { -1.0 };
                row[slack] = sign * s;
                if !artificial {
                    basic = Some(slack);
                }
                slack += 1;
            }
            if artificial {
                row[art] = 1.0;
                basic = Some(art);
                art += 1;
            }
            rows.push(row);
            basis.push(basic.unwrap_or(0));
        }
        Tableau { rows, basis, structural: n, artificial_start, width }
    }

    fn pivot(&mut self, obj: &mut [f64], r: usize, c: usize) {
        let p = self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k != r && row[c] != 0.0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        let f = obj[c];
        if f != 0.0 {
            for (x, y) in obj.iter_mut().zip(&pivot_row) {
                *x -= f * y;
            }
            obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Minimize the reduced-cost row `obj` over columns below `limit`.
    /// Returns false if unbounded.
    fn run(&mut self, obj: &mut [f64], limit: usize) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let Some(c) = (0..limit).find(|&j| obj[j] < -LP_TOLERANCE) else {
                return Ok(true);
            };
            let mut best: Option<(f64, usize, usize)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[c] > LP_TOLERANCE {
                    let ratio = row[self.width] / row[c];
                    let better = match best {
                        None => true,
                        Some((b, _, var)) => {
                            ratio < b - LP_TOLERANCE || (ratio <= b + LP_TOLERANCE && self.basis[r] < var)
                        }
                    };
                    if better {
                        best = Some((ratio, r, self.basis[r]));
                    }
                }
            }
            match best {
                None => return Ok(false),
                Some((_, r, _)) => self.pivot(obj, r, c),
            }
        }
        Err(Error::InvalidState("simplex pivot limit reached".into()))
    }

    fn solve(mut self, objective: &[f64]) -> Result<LpOutcome> {
        let w = self.width;
        // phase 1: drive artificials to zero
        let mut obj = vec![0.0; w + 1];
        for j in self.artificial_start..w {
            obj[j] = 1.0;
        }
        for r in 0..self.rows.len() {
            if self.basis[r] >= self.artificial_start {
                for (x, y) in obj.iter_mut().zip(&self.rows[r]) {
                    *x -= y;
                }
            }
        }
        self.run(&mut obj, w)?;
        if -obj[w] > LP_TOLERANCE * (1.0 + self.rows.len() as f64) {
            return Ok(LpOutcome::Infeasible);
        }
        // move remaining artificials out of the basis, dropping redundant rows
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.artificial_start {
                match (0..self.artificial_start).find(|&j| self.rows[r][j].abs() > LP_TOLERANCE) {
                    Some(c) => self.pivot(&mut obj, r, c),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        // phase 2
        let mut obj = vec![0.0; w + 1];
        obj[..self.structural].copy_from_slice(objective);
        for r in 0..self.rows.len() {
            let cb = obj[self.basis[r]];
            if cb != 0.0 {
                let row = self.rows[r].clone();
                for (x, y) in obj.iter_mut().zip(&row) {
                    *x -= cb * y;
                }
            }
        }
        if !self.run(&mut obj, self.artificial_start)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![0.0; self.structural];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                x[b] = self.rows[r][w].max(0.0);
            }
        }
        let value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpOutcome::Optimal { x, value })
    }
}
