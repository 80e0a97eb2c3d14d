//! Communication-for-omniscience programs and the capacities built on them:
//! secret-key capacity, aided-secret-key capacity with recovery-only side
//! information, the secure-computability verdict for a function of the
//! sources, and the total-entropy decomposition of a securely computable
//! function.
//!
//! The rate region constrains every proper terminal subset `B` that does not
//! contain the secrecy-seeking set: the sum of rates in `B` must cover the
//! conditional entropy of `X_B` given everything the complement knows. With
//! recovery-only side information `Z`, the bound for `B` is the worst case
//! over helpers `j` outside `B` in the secrecy set, conditioning additionally
//! on `Z_j`. Minimizing total rate over that region and subtracting from the
//! total common randomness gives the capacity.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::dist::{FunctionSpec, JointDistribution, TerminalSubset};
use crate::mcf::mcf_all;
use crate::simplex::min_sum_rates;
use crate::{Error, Result};

/// Hard cap on the number of terminals; the constraint family is
/// exponential in `m`.
pub const MAX_TERMINALS: usize = 16;

/// Slack below which a constraint is reported as active at the optimum.
pub const ACTIVE_TOL: f64 = 1e-7;

/// Default decision tolerance for the boundary verdict.
pub const DECISION_TOL: f64 = 1e-7;

/// Per-terminal communication rates in bits per symbol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateVector(Vec<f64>);

impl RateVector {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidArgument(
                "rates must be finite and nonnegative".into(),
            ));
        }
        Ok(Self(rates))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// How a constraint bound was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintTag {
    /// Plain conditional entropy given the complement.
    Plain,
    /// Worst case attained by conditioning on the side information of this
    /// helper terminal.
    SideInformation { terminal: usize },
    /// Worst case attained by conditioning on the computed function.
    ConditionedOnFunction,
}

/// One lower bound of the rate region: `sum_{i in subset} R_i >= bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    pub subset: TerminalSubset,
    pub bound_bits: f64,
    pub tag: ConstraintTag,
}

/// The full constraint family for one omniscience program.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintSet {
    terminal_count: usize,
    constraints: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn terminal_count(&self) -> usize {
        self.terminal_count
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

/// Side information available to one terminal for key recovery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideInfo {
    /// Degenerate (constant) side information.
    Constant,
    /// A 1-based variable index of the distribution, possibly beyond the
    /// terminal variables.
    Variable(usize),
}

/// Per-terminal side-information assignment. `function_variable` marks the
/// variable that carries a computed function, so constraints it dominates
/// can be tagged accordingly.
#[derive(Debug, Clone, Default)]
pub struct SideInformation {
    pub assignments: BTreeMap<usize, SideInfo>,
    pub function_variable: Option<usize>,
}

/// A solved rate-minimization program.
#[derive(Debug, Clone, Serialize)]
pub struct RateSolution {
    /// Minimum total communication rate in bits.
    pub total_bits: f64,
    /// One optimal vertex of the region.
    pub rates: RateVector,
    /// Constraints with slack below [`ACTIVE_TOL`] at that vertex.
    pub active: Vec<Constraint>,
}

/// A capacity value with the omniscience program that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityResult {
    /// Capacity in bits: `omniscience_entropy_bits - omniscience_rate_bits`.
    pub capacity_bits: f64,
    /// Minimum total communication for omniscience, in bits.
    pub omniscience_rate_bits: f64,
    /// Total common randomness recoverable at the secrecy set, in bits.
    pub omniscience_entropy_bits: f64,
    /// Optimal rate vertex; absent for the singleton shortcut, which needs
    /// no program.
    pub rates: Option<RateVector>,
    /// Constraints tight at the optimal vertex.
    pub active_constraints: Vec<Constraint>,
}

/// Secure-computability verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    SecurelyComputable,
    NotSecurelyComputable,
    /// The function entropy equals the capacity within tolerance; neither
    /// direction is decided.
    Boundary,
}

/// Outcome of comparing the function entropy against the aided capacity.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// `H(G)` in bits.
    pub function_entropy_bits: f64,
    /// Aided capacity `C` in bits.
    pub capacity_bits: f64,
    /// `C - H(G)` in bits.
    pub margin_bits: f64,
    /// The capacity computation backing the verdict.
    pub capacity: CapacityResult,
}

/// Residual key rates and the total-entropy identity for a computed
/// function.
#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    /// Largest rate of an aided key independent of the computed function.
    pub residual_aided_capacity_bits: f64,
    /// Largest rate of a secret key for the computing set independent of the
    /// computed function.
    pub residual_sk_capacity_bits: f64,
    /// `H(X_M)` in bits.
    pub total_entropy_bits: f64,
    /// `H(X_M) - (R_CO(A) + H(G) + residual_sk_capacity)`.
    pub identity_gap_bits: f64,
    /// Whether the identity holds within 1e-9.
    pub identity_holds: bool,
    /// False when the function is not securely computable, in which case the
    /// residual rates are reported but carry no operational meaning.
    pub meaningful: bool,
    pub verdict: Verdict,
}

fn mask_of(subset: &TerminalSubset) -> u32 {
    subset.iter().fold(0u32, |m, i| m | 1 << (i - 1))
}

fn subset_from_mask(mask: u32) -> TerminalSubset {
    TerminalSubset::new((1..=32usize).filter(|i| mask & (1 << (i - 1)) != 0))
        .expect("indices are 1-based by construction")
}

/// Memoized joint entropies over variable sets of the same distribution.
struct EntropyTable<'a> {
    dist: &'a JointDistribution,
    cache: HashMap<Vec<usize>, f64>,
}

impl<'a> EntropyTable<'a> {
    fn new(dist: &'a JointDistribution) -> Self {
        Self { dist, cache: HashMap::new() }
    }

    /// `H` of the union of the masked terminals and the optional extra
    /// variable, in bits.
    fn entropy(&mut self, terminal_mask: u32, extra: Option<usize>) -> f64 {
        let mut vars: Vec<usize> =
            (1..=32usize).filter(|i| terminal_mask & (1 << (i - 1)) != 0).collect();
        if let Some(v) = extra {
            if !vars.contains(&v) {
                vars.push(v);
                vars.sort_unstable();
            }
        }
        if vars.is_empty() {
            return 0.0;
        }
        if let Some(&h) = self.cache.get(&vars) {
            return h;
        }
        let h = crate::dist::entropy_bits(&self.dist.marginal(&vars));
        self.cache.insert(vars, h);
        h
    }

    /// `H(X_B | X_C, extra)` in bits.
    fn conditional(&mut self, b_mask: u32, c_mask: u32, extra: Option<usize>) -> f64 {
        self.entropy(b_mask | c_mask, extra) - self.entropy(c_mask, extra)
    }
}

/// Builds the rate-region constraints for omniscience at `secrecy_set`.
///
/// The first `terminal_count` variables of `dist` are the terminals; any
/// further variables may only appear as side information. One constraint is
/// produced for every nonempty proper subset `B` of the terminals with
/// `secrecy_set` not contained in `B`, in ascending bitmask order.
pub fn omniscience_constraints(
    dist: &JointDistribution,
    terminal_count: usize,
    secrecy_set: &TerminalSubset,
    side_info: Option<&SideInformation>,
) -> Result<ConstraintSet> {
    let m = terminal_count;
    if m < 2 || m > dist.variable_count() {
        return Err(Error::InvalidArgument(format!(
            "terminal count {m} invalid for a {}-variable distribution",
            dist.variable_count()
        )));
    }
    if m > MAX_TERMINALS {
        return Err(Error::ResourceCap(format!(
            "constraint family is exponential in the terminal count; {m} exceeds the cap {MAX_TERMINALS}"
        )));
    }
    if secrecy_set.is_empty() {
        return Err(Error::InvalidArgument("secrecy set is empty".into()));
    }
    if secrecy_set.iter().any(|i| i > m) {
        return Err(Error::InvalidArgument(
            "secrecy set contains non-terminal indices".into(),
        ));
    }
    if let Some(side) = side_info {
        for i in secrecy_set.iter() {
            match side.assignments.get(&i) {
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "no side-information assignment for terminal {i}"
                    )))
                }
                Some(SideInfo::Variable(v)) if *v == 0 || *v > dist.variable_count() => {
                    return Err(Error::InvalidArgument(format!(
                        "side-information variable {v} out of range"
                    )))
                }
                _ => {}
            }
        }
    }

    let full: u32 = (1u32 << m) - 1;
    let a_mask = mask_of(secrecy_set);
    let mut table = EntropyTable::new(dist);
    let mut constraints = Vec::new();

    for b_mask in 1..full {
        if a_mask & !b_mask == 0 {
            continue; // secrecy set inside B
        }
        let c_mask = full & !b_mask;
        let plain = table.conditional(b_mask, c_mask, None);

        let (bound, tag) = match side_info {
            None => (plain, ConstraintTag::Plain),
            Some(side) => {
                // Helpers are the secrecy-set terminals in the complement;
                // any of them with degenerate side information already
                // attains the worst case.
                let helpers: Vec<usize> =
                    (1..=m).filter(|i| c_mask & (1 << (i - 1)) != 0 && a_mask & (1 << (i - 1)) != 0).collect();
                debug_assert!(!helpers.is_empty());
                let has_constant = helpers
                    .iter()
                    .any(|j| matches!(side.assignments.get(j), Some(SideInfo::Constant)));
                if has_constant {
                    (plain, ConstraintTag::Plain)
                } else {
                    let mut best = f64::NEG_INFINITY;
                    let mut best_tag = ConstraintTag::Plain;
                    for &j in &helpers {
                        let Some(SideInfo::Variable(v)) = side.assignments.get(&j) else {
                            unreachable!("assignments cover the secrecy set");
                        };
                        let val = table.conditional(b_mask, c_mask, Some(*v));
                        if val > best + 1e-12 {
                            best = val;
                            best_tag = if side.function_variable == Some(*v) {
                                ConstraintTag::ConditionedOnFunction
                            } else {
                                ConstraintTag::SideInformation { terminal: j }
                            };
                        }
                    }
                    (best, best_tag)
                }
            }
        };

        constraints.push(Constraint {
            subset: subset_from_mask(b_mask),
            bound_bits: bound.max(0.0),
            tag,
        });
    }

    Ok(ConstraintSet { terminal_count: m, constraints })
}

/// Minimizes the total rate over a constraint set and reports one optimal
/// vertex together with the constraints tight at it.
pub fn minimize_sum_rate(set: &ConstraintSet) -> RateSolution {
    let rows: Vec<(u32, f64)> = set
        .constraints
        .iter()
        .map(|c| (mask_of(&c.subset), c.bound_bits))
        .collect();
    let sol = min_sum_rates(set.terminal_count, &rows);
    let rates = RateVector::new(sol.rates).expect("simplex returns nonnegative rates");
    let active = set
        .constraints
        .iter()
        .filter(|c| {
            let sum: f64 = c.subset.iter().map(|i| rates.as_slice()[i - 1]).sum();
            sum - c.bound_bits < ACTIVE_TOL
        })
        .cloned()
        .collect();
    RateSolution { total_bits: sol.objective, rates, active }
}

/// Secret-key capacity of `secrecy_set`, with the omniscience program behind
/// it. A singleton secrecy set needs no communication and short-circuits to
/// its own marginal entropy.
pub fn secret_key_capacity(
    dist: &JointDistribution,
    secrecy_set: &TerminalSubset,
) -> Result<CapacityResult> {
    let m = dist.variable_count();
    if secrecy_set.is_empty() {
        return Err(Error::InvalidArgument("secrecy set is empty".into()));
    }
    if secrecy_set.iter().any(|i| i > m) {
        return Err(Error::InvalidArgument(
            "secrecy set contains out-of-range indices".into(),
        ));
    }
    let total = dist.entropy(&TerminalSubset::full(m))?;
    if secrecy_set.len() == 1 {
        let own = dist.entropy(secrecy_set)?;
        return Ok(CapacityResult {
            capacity_bits: own,
            omniscience_rate_bits: total - own,
            omniscience_entropy_bits: total,
            rates: None,
            active_constraints: Vec::new(),
        });
    }
    let set = omniscience_constraints(dist, m, secrecy_set, None)?;
    let sol = minimize_sum_rate(&set);
    Ok(CapacityResult {
        capacity_bits: total - sol.total_bits,
        omniscience_rate_bits: sol.total_bits,
        omniscience_entropy_bits: total,
        rates: Some(sol.rates),
        active_constraints: sol.active,
    })
}

/// Aided-secret-key capacity: side information assigned to each terminal in
/// the secrecy set may be used for key recovery, but not for communication.
///
/// The first `terminal_count` variables of `dist` are the terminals; side
/// information may reference any variable. The recoverable common randomness
/// is the entropy of the maximum common function of the groups
/// `(terminals, Z_i)` over the secrecy set.
pub fn aided_secret_key_capacity(
    dist: &JointDistribution,
    terminal_count: usize,
    secrecy_set: &TerminalSubset,
    side_info: &SideInformation,
) -> Result<CapacityResult> {
    if secrecy_set.len() < 2 {
        return Err(Error::InvalidArgument(
            "aided capacity needs a secrecy set of at least 2 terminals".into(),
        ));
    }
    let set = omniscience_constraints(dist, terminal_count, secrecy_set, Some(side_info))?;

    let terminals: Vec<usize> = (1..=terminal_count).collect();
    let groups: Vec<Vec<usize>> = secrecy_set
        .iter()
        .map(|i| match side_info.assignments.get(&i) {
            Some(SideInfo::Variable(v)) if !terminals.contains(v) => {
                let mut g = terminals.clone();
                g.push(*v);
                g
            }
            _ => terminals.clone(),
        })
        .collect();
    let labeling = mcf_all(dist, &groups)?;
    let common = labeling.entropy_bits();

    let sol = minimize_sum_rate(&set);
    Ok(CapacityResult {
        capacity_bits: common - sol.total_bits,
        omniscience_rate_bits: sol.total_bits,
        omniscience_entropy_bits: common,
        rates: Some(sol.rates),
        active_constraints: sol.active,
    })
}

/// The aided capacity that governs whether `g` is securely computable by
/// `computing_set`: terminals outside the computing set receive the function
/// value as recovery-only side information, everyone else receives nothing,
/// and the secrecy set is all terminals.
pub fn secure_computation_capacity(
    dist: &JointDistribution,
    g: &FunctionSpec,
    computing_set: &TerminalSubset,
) -> Result<CapacityResult> {
    let m = dist.variable_count();
    if computing_set.is_empty() {
        return Err(Error::InvalidArgument("computing set is empty".into()));
    }
    if computing_set.iter().any(|i| i > m) {
        return Err(Error::InvalidArgument(
            "computing set contains out-of-range indices".into(),
        ));
    }
    let ext = dist.adjoin_function(g)?;
    let g_var = m + 1;
    let mut assignments = BTreeMap::new();
    for i in 1..=m {
        let info = if computing_set.contains(i) {
            SideInfo::Constant
        } else {
            SideInfo::Variable(g_var)
        };
        assignments.insert(i, info);
    }
    let side = SideInformation { assignments, function_variable: Some(g_var) };
    let result =
        aided_secret_key_capacity(&ext, m, &TerminalSubset::full(m), &side)?;

    // Every group contains all the terminals, so the common function refines
    // to the support of the terminal tuple itself.
    let total = dist.entropy(&TerminalSubset::full(m))?;
    assert!(
        (result.omniscience_entropy_bits - total).abs() <= 1e-9,
        "common-function entropy must equal the joint entropy"
    );
    Ok(result)
}

/// Compares the entropy of `g` against the secure-computation capacity and
/// returns a verdict. `tolerance` guards the boundary case, where equality
/// leaves the question undecided.
pub fn decide(
    dist: &JointDistribution,
    g: &FunctionSpec,
    computing_set: &TerminalSubset,
    tolerance: f64,
) -> Result<Verdict> {
    let capacity = secure_computation_capacity(dist, g, computing_set)?;
    let ext = dist.adjoin_function(g)?;
    let g_var = TerminalSubset::new([dist.variable_count() + 1])?;
    let h_g = ext.entropy(&g_var)?;
    let margin = capacity.capacity_bits - h_g;
    let kind = if margin > tolerance {
        VerdictKind::SecurelyComputable
    } else if margin < -tolerance {
        VerdictKind::NotSecurelyComputable
    } else {
        VerdictKind::Boundary
    };
    Ok(Verdict {
        kind,
        function_entropy_bits: h_g,
        capacity_bits: capacity.capacity_bits,
        margin_bits: margin,
        capacity,
    })
}

/// Residual key rates beyond the computed function, and the decomposition of
/// the total entropy into omniscience communication, function entropy, and
/// residual key.
pub fn decompose(
    dist: &JointDistribution,
    g: &FunctionSpec,
    computing_set: &TerminalSubset,
    tolerance: f64,
) -> Result<Decomposition> {
    let verdict = decide(dist, g, computing_set, tolerance)?;
    let sk = secret_key_capacity(dist, computing_set)?;
    let h_g = verdict.function_entropy_bits;
    let residual_aided = verdict.capacity_bits - h_g;
    let residual_sk = sk.capacity_bits - h_g;
    let total = sk.omniscience_entropy_bits;
    let gap = total - (sk.omniscience_rate_bits + h_g + residual_sk);
    Ok(Decomposition {
        residual_aided_capacity_bits: residual_aided,
        residual_sk_capacity_bits: residual_sk,
        total_entropy_bits: total,
        identity_gap_bits: gap,
        identity_holds: gap.abs() <= 1e-9,
        meaningful: verdict.kind == VerdictKind::SecurelyComputable,
        verdict,
    })
}
