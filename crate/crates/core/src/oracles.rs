//! Independent brute-force oracles and seeded instance generators for the
//! test suites.
//!
//! Everything here deliberately avoids the production code paths it is used
//! to check: the rate minimum is found by enumerating candidate vertices of
//! the polyhedron instead of running the simplex, and the common-function
//! entropy is maximized by exhaustive search over labelings instead of
//! union-find. Enabled through the `oracles` feature; not part of the public
//! API proper.

use rand::Rng;

use crate::dist::{FunctionSpec, JointDistribution, TerminalSubset};

/// Doubly symmetric binary source with crossover `delta`, plus the mod-2 sum
/// of the two bits.
pub fn dsbs(delta: f64) -> (JointDistribution, FunctionSpec) {
    let bits: Vec<String> = vec!["0".into(), "1".into()];
    let dist = JointDistribution::new(
        vec![bits.clone(), bits.clone()],
        vec![
            0.5 * (1.0 - delta),
            0.5 * delta,
            0.5 * delta,
            0.5 * (1.0 - delta),
        ],
    )
    .expect("well-formed pmf");
    let xor = FunctionSpec::new(bits, vec![0, 1, 1, 0]).expect("total table");
    (dist, xor)
}

/// Two identical uniform bits plus an independent third bit of entropy
/// `h(0.2)`, with the function selecting the third variable and the first
/// two terminals computing.
pub fn counterexample() -> (JointDistribution, FunctionSpec, TerminalSubset) {
    let bits: Vec<String> = vec!["0".into(), "1".into()];
    let dist = JointDistribution::from_entries(
        vec![bits.clone(), bits.clone(), bits.clone()],
        &[
            (vec![0, 0, 0], 0.4),
            (vec![0, 0, 1], 0.1),
            (vec![1, 1, 0], 0.4),
            (vec![1, 1, 1], 0.1),
        ],
    )
    .expect("well-formed pmf");
    let g = FunctionSpec::from_fn(&dist, bits, |c| c[2]).expect("total table");
    let a = TerminalSubset::new([1, 2]).expect("valid subset");
    (dist, g, a)
}

/// Random dense distribution over `m` variables with alphabet sizes in
/// `2..=max_symbols`; roughly a quarter of the cells are zeroed to exercise
/// partial support.
pub fn random_distribution<R: Rng>(rng: &mut R, m: usize, max_symbols: usize) -> JointDistribution {
    loop {
        let alphabets: Vec<Vec<String>> = (0..m)
            .map(|_| {
                let size = rng.random_range(2..=max_symbols);
                (0..size).map(|s| s.to_string()).collect()
            })
            .collect();
        let cells: usize = alphabets.iter().map(|a| a.len()).product();
        let mut pmf: Vec<f64> = (0..cells)
            .map(|_| {
                if rng.random::<f64>() < 0.25 {
                    0.0
                } else {
                    -(rng.random::<f64>().max(1e-12)).ln()
                }
            })
            .collect();
        let sum: f64 = pmf.iter().sum();
        if pmf.iter().filter(|p| **p > 0.0).count() < 2 || sum <= 0.0 {
            continue;
        }
        for p in &mut pmf {
            *p /= sum;
        }
        return JointDistribution::new(alphabets, pmf).expect("normalized pmf");
    }
}

/// Random total function into an output alphabet of `outputs` symbols.
pub fn random_function<R: Rng>(
    rng: &mut R,
    dist: &JointDistribution,
    outputs: usize,
) -> FunctionSpec {
    let alphabet: Vec<String> = (0..outputs).map(|s| s.to_string()).collect();
    let table: Vec<usize> = (0..dist.cell_count())
        .map(|_| rng.random_range(0..outputs))
        .collect();
    FunctionSpec::new(alphabet, table).expect("total table")
}

/// Random nonempty subset of `{1, ..., m}`.
pub fn random_nonempty_subset<R: Rng>(rng: &mut R, m: usize) -> TerminalSubset {
    loop {
        let picked: Vec<usize> = (1..=m).filter(|_| rng.random::<bool>()).collect();
        if !picked.is_empty() {
            return TerminalSubset::new(picked).expect("valid subset");
        }
    }
}

/// Brute-force minimum of `sum(x)` subject to `sum_{i in mask} x_i >= bound`
/// and `x >= 0`, by enumerating every candidate vertex: each choice of `m`
/// rows (constraints or nonnegativity bounds) is solved as a linear system
/// and kept if feasible.
pub fn brute_force_min_sum_rate(m: usize, constraints: &[(u32, f64)]) -> f64 {
    // Rows: (coefficients, rhs). Nonnegativity contributes x_i = 0 rows.
    let mut rows: Vec<(Vec<f64>, f64)> = constraints
        .iter()
        .map(|&(mask, b)| {
            let coef = (0..m)
                .map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 })
                .collect();
            (coef, b)
        })
        .collect();
    for i in 0..m {
        let mut coef = vec![0.0; m];
        coef[i] = 1.0;
        rows.push((coef, 0.0));
    }

    let mut best = f64::INFINITY;
    let mut choice: Vec<usize> = (0..m).collect();
    loop {
        if let Some(x) = solve_square(&choice.iter().map(|&r| rows[r].clone()).collect::<Vec<_>>())
        {
            let feasible = x.iter().all(|&v| v >= -1e-9)
                && constraints.iter().all(|&(mask, b)| {
                    let sum: f64 =
                        (0..m).filter(|i| mask & (1 << i) != 0).map(|i| x[i]).sum();
                    sum >= b - 1e-9
                });
            if feasible {
                best = best.min(x.iter().sum());
            }
        }
        if !next_combination(&mut choice, rows.len()) {
            break;
        }
    }
    best
}

fn next_combination(choice: &mut [usize], n: usize) -> bool {
    let k = choice.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if choice[i] < n - (k - i) {
            choice[i] += 1;
            for j in i + 1..k {
                choice[j] = choice[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_square(rows: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows
        .iter()
        .map(|(coef, b)| {
            let mut r = coef.clone();
            r.push(*b);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (row, r) in a.iter_mut().enumerate() {
            if row != col && r[col] != 0.0 {
                let factor = r[col] / pivot_row[col];
                for (x, p) in r.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= factor * p;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Exhaustive maximum entropy over all random variables that are a
/// deterministic function of every coordinate on the support.
///
/// Any such variable is induced by a labeling of the first coordinate's
/// symbols, so the search enumerates those labelings, keeps the ones that
/// are constant on every other coordinate's support slices, and maximizes
/// the pushforward entropy. Sized for a handful of symbols per variable.
pub fn exhaustive_common_function_entropy(dist: &JointDistribution) -> f64 {
    let m = dist.variable_count();
    let first_size = dist.alphabet(1).len();
    let pmf = dist.pmf();
    let cells = dist.cell_count();

    let mut support: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut coords = vec![0usize; m];
    for (cell, &p) in pmf.iter().enumerate().take(cells) {
        if p > 0.0 {
            dist.decode_cell(cell, &mut coords);
            support.push((cell, coords.clone()));
        }
    }

    let mut best = 0.0f64;
    let mut labeling = vec![0usize; first_size];
    loop {
        // Labels of every support cell, induced through the first coordinate.
        let consistent = (2..=m).all(|v| {
            let size = dist.alphabet(v).len();
            let mut seen: Vec<Option<usize>> = vec![None; size];
            support.iter().all(|(_, c)| {
                let label = labeling[c[0]];
                match seen[c[v - 1]] {
                    None => {
                        seen[c[v - 1]] = Some(label);
                        true
                    }
                    Some(prev) => prev == label,
                }
            })
        });
        if consistent {
            let mut class_mass = vec![0.0f64; first_size];
            for (cell, c) in &support {
                class_mass[labeling[c[0]]] += pmf[*cell];
            }
            let h = crate::dist::entropy_bits(&class_mass);
            if h > best {
                best = h;
            }
        }

        // Mixed-radix increment over labelings.
        let mut pos = 0;
        loop {
            if pos == first_size {
                return best;
            }
            labeling[pos] += 1;
            if labeling[pos] < first_size {
                break;
            }
            labeling[pos] = 0;
            pos += 1;
        }
    }
}
