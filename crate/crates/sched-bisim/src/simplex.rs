//! Exact feasibility of `A x = b, x >= 0` by phase-one simplex over rationals.
//!
//! Bland's rule is used for both the entering and the leaving variable, which rules out
//! cycling on degenerate problems. The tableau is dense; the caller keeps problems small
//! by pruning before it gets here.

use num_traits::{Signed, Zero};
use pa_core::Prob;

/// One equality constraint: sparse coefficients and right-hand side.
pub type Row = (Vec<(usize, Prob)>, Prob);

/// Returns a nonnegative solution of the system, or `None` when it is infeasible.
pub fn feasible_point(num_vars: usize, rows: &[Row]) -> Option<Vec<Prob>> {
    let m = rows.len();
    if m == 0 {
        return Some(vec![Prob::zero(); num_vars]);
    }
    let width = num_vars + m; // original columns followed by one artificial per row
    let mut tab: Vec<Vec<Prob>> = Vec::with_capacity(m);
    let mut rhs: Vec<Prob> = Vec::with_capacity(m);
    for (i, (coeffs, b)) in rows.iter().enumerate() {
        let mut row = vec![Prob::zero(); width];
        for (j, c) in coeffs {
            row[*j] += c;
        }
        let mut b = b.clone();
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        row[num_vars + i] = Prob::from_integer(1.into());
        tab.push(row);
        rhs.push(b);
    }
    let mut basis: Vec<usize> = (num_vars..width).collect();
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![Prob::zero(); width];
    let mut value = Prob::zero();
    for i in 0..m {
        for j in 0..num_vars {
            if !tab[i][j].is_zero() {
                cost[j] -= &tab[i][j];
            }
        }
        value -= &rhs[i];
    }
    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<Prob> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tab[i][enter];
            let better = match &best {
                None => true,
                Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        let Some(r) = leave else {
            // Unbounded direction; impossible for a phase-one objective bounded below by 0.
            unreachable!("phase-one simplex cannot be unbounded")
        };
        pivot(&mut tab, &mut rhs, &mut cost, &mut value, r, enter);
        basis[r] = enter;
    }
    if !value.is_zero() {
        return None;
    }
    let mut x = vec![Prob::zero(); num_vars];
    for (i, &b) in basis.iter().enumerate() {
        if b < num_vars {
            x[b] = rhs[i].clone();
        }
    }
    Some(x)
}

fn pivot(
    tab: &mut [Vec<Prob>],
    rhs: &mut [Prob],
    cost: &mut [Prob],
    value: &mut Prob,
    r: usize,
    c: usize,
) {
    let piv = tab[r][c].clone();
    let nz: Vec<usize> = (0..tab[r].len()).filter(|&j| !tab[r][j].is_zero()).collect();
    for &j in &nz {
        tab[r][j] = &tab[r][j] / &piv;
    }
    rhs[r] = &rhs[r] / &piv;
    let pivot_row: Vec<(usize, Prob)> = nz.iter().map(|&j| (j, tab[r][j].clone())).collect();
    let pivot_rhs = rhs[r].clone();
    for i in 0..tab.len() {
        if i == r || tab[i][c].is_zero() {
            continue;
        }
        let f = tab[i][c].clone();
        for (j, v) in &pivot_row {
            let delta = &f * v;
            tab[i][*j] -= delta;
        }
        rhs[i] -= &f * &pivot_rhs;
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (j, v) in &pivot_row {
            cost[*j] -= &f * v;
        }
        *value -= &f * &pivot_rhs;
    }
}
