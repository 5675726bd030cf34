//! Dense exact simplex for `max c·x` subject to `A x ≤ b`, `x ≥ 0`, `b ≥ 0`.
//!
//! The origin is feasible, so no first phase is needed. Bland's rule keeps
//! degenerate pivots from cycling.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
    /// One multiplier per constraint row, read off the slack reduced costs.
    pub duals: Vec<Rational>,
}

/// Returns `None` when the program is unbounded.
pub(crate) fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Option<LpSolution> {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    debug_assert!(b.iter().all(|v| !v.is_negative()));

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let mut r = Vec::with_capacity(width + 1);
        r.extend(row.iter().cloned());
        r.extend((0..m).map(|k| if k == i { Rational::from_integer(1.into()) } else { Rational::zero() }));
        r.push(b[i].clone());
        rows.push(r);
    }
    let mut objective: Vec<Rational> = c.iter().map(|v| -v).collect();
    objective.extend(std::iter::repeat_n(Rational::zero(), m + 1));
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..width).find(|&j| objective[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (pivot_row, _) = leave?;
        pivot(&mut rows, &mut objective, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = rows[i][width].clone();
        }
    }
    Some(LpSolution {
        value: objective[width].clone(),
        x,
        duals: objective[n..n + m].to_vec(),
    })
}

fn pivot(rows: &mut [Vec<Rational>], objective: &mut [Rational], r: usize, col: usize) {
    let p = rows[r][col].clone();
    for v in rows[r].iter_mut() {
        if !v.is_zero() {
            *v /= &p;
        }
    }
    let pivot_row = rows[r].clone();
    let eliminate = |target: &mut [Rational]| {
        let factor = target[col].clone();
        if factor.is_zero() {
            return;
        }
        for (t, v) in target.iter_mut().zip(&pivot_row) {
            if !v.is_zero() {
                *t -= &factor * v;
            }
        }
    };
    for (i, row) in rows.iter_mut().enumerate() {
        if i != r {
            eliminate(row);
        }
    }
    eliminate(objective);
}
