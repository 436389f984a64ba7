//! Exact cone membership by phase-I simplex.
//!
//! Decides whether `target = sum_j t_j g_j` has a solution with `t >= 0`.
//! Pivoting follows Bland's rule, so the method terminates without any
//! perturbation and stays in exact rationals throughout.

use num_traits::{Signed, Zero};

use crate::rational::Q;

/// `true` iff `target` lies in the closed cone spanned by `gens`.
///
/// All vectors must share one length. The empty cone contains only zero.
pub fn cone_contains(gens: &[Vec<Q>], target: &[Q]) -> bool {
    let rows = target.len();
    let cols = gens.len();
    assert!(gens.iter().all(|g| g.len() == rows), "generator length mismatch");
    if target.iter().all(Zero::is_zero) {
        return true;
    }
    if cols == 0 {
        return false;
    }

    // Tableau: `rows` constraint rows over `cols` structural and `rows`
    // artificial columns, last column is the right-hand side.
    let width = cols + rows + 1;
    let mut tab: Vec<Vec<Q>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = target[i].is_negative();
        let mut row = vec![Q::zero(); width];
        for (j, g) in gens.iter().enumerate() {
            row[j] = if flip { -g[i] } else { g[i] };
        }
        row[cols + i] = Q::from_integer(1);
        row[width - 1] = if flip { -target[i] } else { target[i] };
        tab.push(row);
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Phase-I objective: minimise the sum of artificials. Reduced cost of a
    // column is minus the column sum over rows whose basic variable is
    // artificial; artificials themselves have cost zero while basic.
    let mut cost = vec![Q::zero(); width];
    for row in &tab {
        for j in 0..cols {
            cost[j] -= row[j];
        }
        cost[width - 1] -= row[width - 1];
    }

    loop {
        let entering = (0..cols + rows).find(|&j| cost[j].is_negative());
        let Some(e) = entering else { break };

        let mut leave: Option<(usize, Q)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[e].is_positive() {
                let ratio = row[width - 1] / row[e];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase-I is bounded below by zero, so an improving column always
        // has a positive entry.
        let (p, _) = leave.expect("phase-I simplex cannot be unbounded");

        let pivot = tab[p][e];
        for v in tab[p].iter_mut() {
            *v /= pivot;
        }
        let prow = tab[p].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != p && !row[e].is_zero() {
                let f = row[e];
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
            }
        }
        if !cost[e].is_zero() {
            let f = cost[e];
            for (v, pv) in cost.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
        }
        basis[p] = e;
    }

    // cost[rhs] holds minus the optimal artificial sum.
    cost[width - 1].is_zero()
}
