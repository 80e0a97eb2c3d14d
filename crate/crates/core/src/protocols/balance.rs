//! Exact balanced-coloring statistic.
//!
//! For a pair `(U, V)` with a coarsening `h` of `U` into `r'` classes, a
//! coloring `phi : U -> {1..r}` is balanced when, averaged over the observed
//! `(h(U), V)` pair, the conditional color distribution is close to uniform
//! in total variation:
//!
//! `sum_{j,v} P(h=j, V=v) * sum_i | P(phi(U)=i | h=j, V=v) - 1/r |`
//!
//! Randomly chosen colorings fail the `14 * lambda` threshold with
//! probability that decays in `d / (r * r')`, where `d` caps the conditional
//! point masses. The statistic itself is an exact functional of a coloring;
//! only the colorings are sampled here.

use rand::Rng;
use serde::Serialize;

use crate::dist::JointDistribution;
use crate::{Error, Result};

use super::stream_rng;

/// Cap on the joint `(U, V)` space enumerated per coloring.
pub const MAX_BALANCE_CELLS: usize = 1_000_000;

/// Upper end of the admissible `lambda` range.
pub const MAX_LAMBDA: f64 = 2.0 / 45.0;

/// Monte Carlo summary of the balance statistic over random colorings.
#[derive(Debug, Clone, Serialize)]
pub struct BalanceCheck {
    /// Number of colors `r`.
    pub color_count: usize,
    /// Number of coarsening classes `r'`.
    pub class_count: usize,
    /// Conditional point-mass bound `d`.
    pub mass_bound: f64,
    pub lambda: f64,
    /// Failure threshold `14 * lambda`.
    pub threshold: f64,
    pub colorings: u64,
    pub seed: u64,
    /// Largest statistic observed over the sampled colorings.
    pub max_statistic: f64,
    pub mean_statistic: f64,
    /// Fraction of colorings with statistic at or above the threshold.
    pub failure_frequency: f64,
    /// Probability mass of pairs with `P(u | v) > 1/d`.
    pub hypothesis_mass: f64,
    /// Whether that mass is at most `lambda^2`, the regime the bound covers.
    pub hypothesis_holds: bool,
}

struct Group {
    mass: f64,
    members: Vec<(usize, f64)>,
}

/// Conditional groups keyed by `(class, v)`, restricted to the support.
fn build_groups(dist: &JointDistribution, coarsening: &[usize]) -> Result<Vec<Group>> {
    if dist.variable_count() != 2 {
        return Err(Error::InvalidArgument(
            "balance statistic needs a distribution over exactly (U, V)".into(),
        ));
    }
    if dist.cell_count() > MAX_BALANCE_CELLS {
        return Err(Error::ResourceCap(format!(
            "joint space {} exceeds the balance-check cap {MAX_BALANCE_CELLS}",
            dist.cell_count()
        )));
    }
    let u_size = dist.alphabet(1).len();
    let v_size = dist.alphabet(2).len();
    if coarsening.len() != u_size {
        return Err(Error::InvalidArgument(format!(
            "coarsening covers {} symbols but U has {u_size}",
            coarsening.len()
        )));
    }
    let classes = coarsening.iter().max().copied().unwrap_or(0) + 1;
    let mut groups: Vec<Group> = (0..classes * v_size)
        .map(|_| Group { mass: 0.0, members: Vec::new() })
        .collect();
    for u in 0..u_size {
        for v in 0..v_size {
            let p = dist.pmf()[u * v_size + v];
            if p > 0.0 {
                let g = &mut groups[coarsening[u] * v_size + v];
                g.mass += p;
                g.members.push((u, p));
            }
        }
    }
    groups.retain(|g| g.mass > 0.0);
    Ok(groups)
}

fn statistic_over_groups(groups: &[Group], r: usize, coloring: &[usize], bins: &mut [f64]) -> f64 {
    let uniform = 1.0 / r as f64;
    let mut total = 0.0;
    for group in groups {
        let mut touched: Vec<usize> = Vec::with_capacity(group.members.len());
        for &(u, p) in &group.members {
            let color = coloring[u];
            if bins[color] == 0.0 {
                touched.push(color);
            }
            bins[color] += p / group.mass;
        }
        let mut deviation = (r - touched.len()) as f64 * uniform;
        for &color in &touched {
            deviation += (bins[color] - uniform).abs();
            bins[color] = 0.0;
        }
        total += group.mass * deviation;
    }
    total
}

/// Exact balance statistic of one coloring of `U` under the coarsening.
///
/// `dist` is the joint of `(U, V)` in that variable order; `coarsening[u]`
/// is the class of each `U` symbol and `coloring[u]` its color in `0..r`.
pub fn balance_statistic(
    dist: &JointDistribution,
    coarsening: &[usize],
    r: usize,
    coloring: &[usize],
) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidArgument("need at least one color".into()));
    }
    let groups = build_groups(dist, coarsening)?;
    if coloring.len() != dist.alphabet(1).len() {
        return Err(Error::InvalidArgument("coloring does not cover U".into()));
    }
    if coloring.iter().any(|&c| c >= r) {
        return Err(Error::InvalidArgument("coloring uses a color out of range".into()));
    }
    let mut bins = vec![0.0f64; r];
    Ok(statistic_over_groups(&groups, r, coloring, &mut bins))
}

/// Samples uniformly random colorings and reports how often the exact
/// statistic reaches the `14 * lambda` threshold.
pub fn run_balance_check(
    dist: &JointDistribution,
    coarsening: &[usize],
    r: usize,
    mass_bound: f64,
    lambda: f64,
    colorings: u64,
    seed: u64,
) -> Result<BalanceCheck> {
    if r == 0 {
        return Err(Error::InvalidArgument("need at least one color".into()));
    }
    if !(lambda > 0.0 && lambda < MAX_LAMBDA) {
        return Err(Error::InvalidArgument(format!(
            "lambda must lie in (0, {MAX_LAMBDA:.6})"
        )));
    }
    if mass_bound <= 0.0 {
        return Err(Error::InvalidArgument("mass bound must be positive".into()));
    }
    if colorings == 0 {
        return Err(Error::InvalidArgument("need at least one coloring".into()));
    }
    let groups = build_groups(dist, coarsening)?;
    let classes = coarsening.iter().max().copied().unwrap_or(0) + 1;
    let u_size = dist.alphabet(1).len();
    let v_size = dist.alphabet(2).len();

    // Hypothesis: pairs whose conditional mass exceeds 1/d are rare.
    let v_marginal = dist.marginal(&[2]);
    let mut hypothesis_mass = 0.0;
    for u in 0..u_size {
        for (v, &pv) in v_marginal.iter().enumerate() {
            let p = dist.pmf()[u * v_size + v];
            if p > 0.0 && p / pv > 1.0 / mass_bound {
                hypothesis_mass += p;
            }
        }
    }

    let threshold = 14.0 * lambda;
    let mut bins = vec![0.0f64; r];
    let mut max_statistic = 0.0f64;
    let mut sum = 0.0f64;
    let mut failures = 0u64;
    for c in 0..colorings {
        let mut rng = stream_rng(seed, c + 1);
        let coloring: Vec<usize> = (0..u_size).map(|_| rng.random_range(0..r)).collect();
        let s = statistic_over_groups(&groups, r, &coloring, &mut bins);
        max_statistic = max_statistic.max(s);
        sum += s;
        if s >= threshold {
            failures += 1;
        }
    }

    Ok(BalanceCheck {
        color_count: r,
        class_count: classes,
        mass_bound,
        lambda,
        threshold,
        colorings,
        seed,
        max_statistic,
        mean_statistic: sum / colorings as f64,
        failure_frequency: failures as f64 / colorings as f64,
        hypothesis_mass,
        hypothesis_holds: hypothesis_mass <= lambda * lambda,
    })
}
