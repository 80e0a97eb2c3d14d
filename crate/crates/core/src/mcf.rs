//! Maximum common function (Gács–Körner common information) of variable
//! groups drawn from a joint distribution.
//!
//! For two variables, two symbols are equivalent when they are connected in
//! the bipartite support graph (an edge wherever a cell has positive
//! probability); the classes of that equivalence are the finest random
//! variable that is a deterministic function of each argument. More than two
//! groups are handled by folding pairwise, left to right. Each group may be a
//! tuple of underlying variables, and groups are allowed to share variables;
//! a group is materialized as a single product variable before folding.

use serde::Serialize;

use crate::dist::{entropy_bits, FunctionSpec, JointDistribution};
use crate::{Error, Result};

/// Equivalence-class labeling realizing the maximum common function.
///
/// Classes are numbered `1..=k`; label `0` is reserved for group symbols of
/// zero marginal probability, which carry no mass and are excluded from
/// `class_pmf`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McfLabeling {
    groups: Vec<Vec<usize>>,
    labels: Vec<Vec<usize>>,
    class_count: usize,
    class_pmf: Vec<f64>,
    #[serde(skip)]
    cell_class: Vec<usize>,
}

impl McfLabeling {
    /// Number of equivalence classes with positive probability.
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Probability of each class, indexed by `class - 1`.
    pub fn class_pmf(&self) -> &[f64] {
        &self.class_pmf
    }

    /// Entropy of the common function in bits.
    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(&self.class_pmf)
    }

    /// The argument groups, as 1-based variable indices.
    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Class label of every joint symbol of `group` (0 = off support).
    pub fn labels(&self, group: usize) -> &[usize] {
        &self.labels[group]
    }

    /// Class label at each cell of the underlying distribution
    /// (0 for zero-probability cells).
    pub fn cell_classes(&self) -> &[usize] {
        &self.cell_class
    }

    /// The common function as an adjoinable lookup table over the full cell
    /// space; output symbols are the class labels, `"0"` for off-support
    /// cells.
    pub fn class_function(&self) -> FunctionSpec {
        let outputs = (0..=self.class_count).map(|c| c.to_string()).collect();
        FunctionSpec::new(outputs, self.cell_class.clone())
            .expect("class labels are within 0..=k")
    }
}

/// Maximum common function of a two-variable distribution.
pub fn mcf_pair(dist: &JointDistribution) -> Result<McfLabeling> {
    if dist.variable_count() != 2 {
        return Err(Error::InvalidArgument(format!(
            "pairwise common function needs exactly 2 variables, got {}",
            dist.variable_count()
        )));
    }
    mcf_all(dist, &[vec![1], vec![2]])
}

/// Maximum common function of two or more variable groups, folded pairwise
/// left to right. Groups may overlap; each must be nonempty with indices in
/// range.
pub fn mcf_all(dist: &JointDistribution, groups: &[Vec<usize>]) -> Result<McfLabeling> {
    if groups.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "common function needs at least 2 groups, got {}",
            groups.len()
        )));
    }
    for (gi, group) in groups.iter().enumerate() {
        if group.is_empty() {
            return Err(Error::InvalidArgument(format!("group {gi} is empty")));
        }
        if let Some(&v) = group.iter().find(|&&v| v == 0 || v > dist.variable_count()) {
            return Err(Error::InvalidArgument(format!(
                "group {gi}: variable index {v} out of range"
            )));
        }
    }

    let cells = dist.cell_count();
    let pmf = dist.pmf();

    // Fold: `current[cell]` is the id of the common function of the groups
    // folded so far, dense in 0..current_len.
    let mut current: Vec<usize> = (0..cells)
        .map(|cell| dist.project_cell(cell, &groups[0]))
        .collect();
    let mut current_len = dist.group_size(&groups[0]);

    for group in &groups[1..] {
        let right_len = dist.group_size(group);
        let mut uf = UnionFind::new(current_len + right_len);
        for cell in 0..cells {
            if pmf[cell] > 0.0 {
                uf.union(current[cell], current_len + dist.project_cell(cell, group));
            }
        }
        // Renumber components densely by first appearance on the support.
        let mut rename = vec![usize::MAX; current_len + right_len];
        let mut next = 0usize;
        for cell in 0..cells {
            if pmf[cell] > 0.0 {
                let root = uf.find(current[cell]);
                if rename[root] == usize::MAX {
                    rename[root] = next;
                    next += 1;
                }
                current[cell] = rename[root];
            }
        }
        current_len = next;
    }

    let class_count = current_len;
    let mut class_pmf = vec![0.0; class_count];
    let mut cell_class = vec![0usize; cells];
    for cell in 0..cells {
        if pmf[cell] > 0.0 {
            class_pmf[current[cell]] += pmf[cell];
            cell_class[cell] = current[cell] + 1;
        }
    }

    // The common function is a function of each group, so every support cell
    // projecting to the same group symbol lands in the same class.
    let mut labels = Vec::with_capacity(groups.len());
    for group in groups {
        let mut group_labels = vec![0usize; dist.group_size(group)];
        for cell in 0..cells {
            if pmf[cell] > 0.0 {
                let sym = dist.project_cell(cell, group);
                let class = cell_class[cell];
                debug_assert!(
                    group_labels[sym] == 0 || group_labels[sym] == class,
                    "class label must be constant on each group symbol"
                );
                group_labels[sym] = class;
            }
        }
        labels.push(group_labels);
    }

    Ok(McfLabeling {
        groups: groups.to_vec(),
        labels,
        class_count,
        class_pmf,
        cell_class,
    })
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let mut a = self.find(a);
        let mut b = self.find(b);
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::TerminalSubset;

    fn bits(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn identical_pair_is_identity_labeling() {
        let d =
            JointDistribution::new(vec![bits(2), bits(2)], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let l = mcf_pair(&d).unwrap();
        assert_eq!(l.class_count(), 2);
        assert_eq!(l.class_pmf(), &[0.5, 0.5]);
        assert_eq!(l.labels(0), &[1, 2]);
        assert_eq!(l.labels(1), &[1, 2]);
        assert!((l.entropy_bits() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_full_support_is_trivial() {
        let d = JointDistribution::new(vec![bits(2), bits(3)], vec![1.0 / 6.0; 6]).unwrap();
        let l = mcf_pair(&d).unwrap();
        assert_eq!(l.class_count(), 1);
        assert!(l.entropy_bits().abs() < 1e-12);
    }

    #[test]
    fn two_block_support_yields_one_bit() {
        // Uniform support on {(0,0),(0,1),(1,0),(1,1),(2,2),(2,3),(3,2),(3,3)}:
        // the support graph has exactly two connected components.
        let support = [
            (0, 0),
            (0, 1),
            (1, 0),
            (1, 1),
            (2, 2),
            (2, 3),
            (3, 2),
            (3, 3),
        ];
        let entries: Vec<(Vec<usize>, f64)> = support
            .iter()
            .map(|&(q, r)| (vec![q, r], 0.125))
            .collect();
        let d = JointDistribution::from_entries(vec![bits(4), bits(4)], &entries).unwrap();
        let l = mcf_pair(&d).unwrap();
        assert_eq!(l.class_count(), 2);
        assert_eq!(l.class_pmf(), &[0.5, 0.5]);
        assert!((l.entropy_bits() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_copies_of_one_bit() {
        let mut pmf = vec![0.0; 8];
        pmf[0] = 0.5;
        pmf[7] = 0.5;
        let d = JointDistribution::new(vec![bits(2), bits(2), bits(2)], pmf).unwrap();
        let l = mcf_all(&d, &[vec![1], vec![2], vec![3]]).unwrap();
        assert!((l.entropy_bits() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_independent_variables_are_trivial() {
        let d =
            JointDistribution::new(vec![bits(2), bits(2), bits(2)], vec![0.125; 8]).unwrap();
        let l = mcf_all(&d, &[vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(l.class_count(), 1);
        assert!(l.entropy_bits().abs() < 1e-12);
    }

    #[test]
    fn overlapping_groups_refine_to_the_shared_tuple() {
        // Both groups contain the full pair, so the classes are exactly the
        // support points and the entropy is the joint entropy.
        let d = JointDistribution::new(
            vec![bits(2), bits(2)],
            vec![0.45, 0.05, 0.05, 0.45],
        )
        .unwrap();
        let l = mcf_all(&d, &[vec![1, 2], vec![1, 2]]).unwrap();
        assert_eq!(l.class_count(), 4);
        let expected = d.entropy(&TerminalSubset::full(2)).unwrap();
        assert!((l.entropy_bits() - expected).abs() < 1e-12);
        assert!((l.entropy_bits() - 1.468_995_593_589_281_2).abs() < 1e-9);
    }

    #[test]
    fn zero_probability_symbols_get_reserved_label() {
        // Symbol 2 of each variable never occurs.
        let d = JointDistribution::from_entries(
            vec![bits(3), bits(3)],
            &[(vec![0, 0], 0.5), (vec![1, 1], 0.5)],
        )
        .unwrap();
        let l = mcf_pair(&d).unwrap();
        assert_eq!(l.class_count(), 2);
        assert_eq!(l.labels(0), &[1, 2, 0]);
        assert_eq!(l.labels(1), &[1, 2, 0]);
        let total: f64 = l.class_pmf().iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn common_function_is_a_function_of_each_argument() {
        let support = [(0, 0), (0, 1), (1, 1), (2, 2), (3, 2), (3, 3)];
        let entries: Vec<(Vec<usize>, f64)> = support
            .iter()
            .enumerate()
            .map(|(i, &(q, r))| (vec![q, r], (i + 1) as f64 / 21.0))
            .collect();
        let d = JointDistribution::from_entries(vec![bits(4), bits(4)], &entries).unwrap();
        let l = mcf_pair(&d).unwrap();
        let ext = d.adjoin_function(&l.class_function()).unwrap();
        for var in [1usize, 2] {
            let h = ext
                .conditional_entropy(
                    &TerminalSubset::new([3]).unwrap(),
                    &TerminalSubset::new([var]).unwrap(),
                )
                .unwrap();
            assert!(h.abs() < 1e-12, "H(class | Q_{var}) = {h}");
        }
    }

    #[test]
    fn idempotent_on_duplicate_groups() {
        let d = JointDistribution::new(
            vec![bits(2), bits(2)],
            vec![0.4, 0.1, 0.2, 0.3],
        )
        .unwrap();
        let l = mcf_all(&d, &[vec![1], vec![1]]).unwrap();
        let expected = d.entropy(&TerminalSubset::new([1]).unwrap()).unwrap();
        assert!((l.entropy_bits() - expected).abs() < 1e-12);
    }

    #[test]
    fn fewer_than_two_groups_is_an_error() {
        let d = JointDistribution::new(vec![bits(2), bits(2)], vec![0.25; 4]).unwrap();
        assert!(mcf_all(&d, &[vec![1]]).is_err());
        assert!(mcf_all(&d, &[]).is_err());
    }
}
