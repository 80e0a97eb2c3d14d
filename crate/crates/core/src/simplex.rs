//! Dense simplex solver for the rate-minimization programs used by the
//! capacity computations.
//!
//! The primal problem is `min sum(x)` subject to `sum_{i in B} x_i >= b_B`
//! over a family of subsets `B`, with `x >= 0` and every `b_B >= 0`. We run
//! the primal simplex method on the dual in standard form (`max b'y` subject
//! to one unit-bound row per rate variable, `y >= 0`), where the slack basis
//! is immediately feasible. Bland's smallest-index rule keeps the pivoting
//! free of cycles on the degenerate instances entropy bounds tend to
//! produce. The optimal primal rates are read off the slack columns' reduced
//! costs at termination.

const EPS: f64 = 1e-9;

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    /// Optimal value of `sum(x)`.
    pub objective: f64,
    /// One optimal vertex of the rate region.
    pub rates: Vec<f64>,
}

/// Solves `min sum(x)` s.t. `sum_{i in mask} x_i >= bound`, `x >= 0`.
///
/// `mask` bit `i` stands for variable `i + 1`. Bounds must be nonnegative,
/// which makes the primal feasible and the dual bounded.
pub(crate) fn min_sum_rates(m: usize, constraints: &[(u32, f64)]) -> LpSolution {
    let n = constraints.len();
    if n == 0 {
        return LpSolution {
            objective: 0.0,
            rates: vec![0.0; m],
        };
    }

    // Dual tableau: m rows, n dual variables + m slacks + rhs column.
    let cols = n + m + 1;
    let rhs = cols - 1;
    let mut tab = vec![vec![0.0f64; cols]; m];
    for (j, &(mask, _)) in constraints.iter().enumerate() {
        for (i, row) in tab.iter_mut().enumerate() {
            if mask & (1 << i) != 0 {
                row[j] = 1.0;
            }
        }
    }
    for (i, row) in tab.iter_mut().enumerate() {
        row[n + i] = 1.0;
        row[rhs] = 1.0;
    }

    // Reduced costs of the maximization; slacks cost 0.
    let mut reduced: Vec<f64> = constraints.iter().map(|&(_, b)| b).collect();
    reduced.extend(std::iter::repeat_n(0.0, m));

    let mut basis: Vec<usize> = (n..n + m).collect();

    // Bland: always enter the smallest improving column.
    while let Some(entering) = (0..n + m).find(|&j| reduced[j] > EPS) {
        // Ratio test; ties broken by smallest basic-variable index.
        let mut pivot_row: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for (r, row) in tab.iter().enumerate() {
            if row[entering] > EPS {
                let ratio = row[rhs] / row[entering];
                let better = ratio < best_ratio - EPS
                    || (ratio < best_ratio + EPS
                        && pivot_row.is_some_and(|pr| basis[r] < basis[pr]));
                if better || pivot_row.is_none() {
                    best_ratio = ratio.min(best_ratio);
                    pivot_row = Some(r);
                }
            }
        }
        // The dual is bounded because the primal is feasible; a missing pivot
        // row would mean an unbounded column, which the unit slack rows rule
        // out for every dual variable.
        let r = pivot_row.expect("dual of a feasible primal cannot be unbounded");

        let pivot = tab[r][entering];
        for x in tab[r].iter_mut() {
            *x /= pivot;
        }
        let pivot_row_vals = tab[r].clone();
        for (rr, row) in tab.iter_mut().enumerate() {
            if rr != r && row[entering].abs() > 0.0 {
                let factor = row[entering];
                for (x, pv) in row.iter_mut().zip(&pivot_row_vals) {
                    *x -= factor * pv;
                }
            }
        }
        let factor = reduced[entering];
        for (j, rc) in reduced.iter_mut().enumerate() {
            *rc -= factor * pivot_row_vals[j];
        }
        basis[r] = entering;
    }

    // Optimal dual objective equals the primal optimum; the primal vertex is
    // the negated reduced cost of each slack column.
    let objective: f64 = basis
        .iter()
        .zip(tab.iter())
        .map(|(&j, row)| if j < n { constraints[j].1 * row[rhs] } else { 0.0 })
        .sum();
    let rates: Vec<f64> = (0..m).map(|i| (-reduced[n + i]).max(0.0)).collect();

    LpSolution { objective, rates }
}
