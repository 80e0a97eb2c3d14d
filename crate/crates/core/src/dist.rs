//! Finite joint distributions and the entropy calculus built on them.
//!
//! A [`JointDistribution`] is a dense probability table over the product of
//! `m >= 2` symbol alphabets. Symbols are opaque strings compared by exact
//! equality; every computation runs on integer indices, row-major with the
//! last variable varying fastest. Logarithms are base 2 throughout and
//! `0 * log 0` is taken to be `0`, so all entropies are in bits.

use serde::Serialize;

use crate::{Error, Result};

/// Hard cap on the number of cells in a dense pmf table.
pub const MAX_CELLS: usize = 10_000_000;

/// Input pmfs whose total mass is further than this from 1 are rejected;
/// anything closer is normalized on load.
pub const SUM_TOLERANCE: f64 = 1e-6;

/// A sorted set of 1-based terminal indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TerminalSubset(Vec<usize>);

impl TerminalSubset {
    /// Builds a subset from any iterator of 1-based indices; duplicates are
    /// collapsed. Zero indices are rejected.
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        if v.contains(&0) {
            return Err(Error::InvalidArgument(
                "terminal indices are 1-based; got 0".into(),
            ));
        }
        v.sort_unstable();
        v.dedup();
        Ok(Self(v))
    }

    /// The empty subset.
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// The full set `{1, ..., m}`.
    pub fn full(m: usize) -> Self {
        Self((1..=m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &TerminalSubset) -> bool {
        self.0.iter().all(|i| other.contains(*i))
    }

    /// Indices in `{1, ..., m}` that are not in this subset.
    pub fn complement(&self, m: usize) -> TerminalSubset {
        Self((1..=m).filter(|i| !self.contains(*i)).collect())
    }

    pub fn union(&self, other: &TerminalSubset) -> TerminalSubset {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn intersection(&self, other: &TerminalSubset) -> TerminalSubset {
        Self(self.0.iter().copied().filter(|i| other.contains(*i)).collect())
    }

    pub fn is_disjoint_from(&self, other: &TerminalSubset) -> bool {
        self.0.iter().all(|i| !other.contains(*i))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    fn check_range(&self, m: usize) -> Result<()> {
        match self.0.last() {
            Some(&max) if max > m => Err(Error::InvalidArgument(format!(
                "terminal index {max} out of range for {m} variables"
            ))),
            _ => Ok(()),
        }
    }
}

/// A total lookup table realizing a function of all `m` variables.
///
/// The table is defined on every cell of the alphabet product, including
/// zero-probability cells, and stores indices into the output alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionSpec {
    outputs: Vec<String>,
    table: Vec<usize>,
}

impl FunctionSpec {
    /// `table[cell] = output index` for every cell of the alphabet product,
    /// in the same row-major order the distribution uses.
    pub fn new(outputs: Vec<String>, table: Vec<usize>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::InvalidInput("function: empty output alphabet".into()));
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= outputs.len()) {
            return Err(Error::InvalidInput(format!(
                "function: table entry {bad} outside the output alphabet (size {})",
                outputs.len()
            )));
        }
        Ok(Self { outputs, table })
    }

    /// Builds the table by evaluating `f` on the decoded coordinates of every
    /// cell of `dist`.
    pub fn from_fn<F>(dist: &JointDistribution, outputs: Vec<String>, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> usize,
    {
        let mut table = Vec::with_capacity(dist.cell_count());
        let mut coords = vec![0usize; dist.variable_count()];
        for cell in 0..dist.cell_count() {
            dist.decode_cell(cell, &mut coords);
            table.push(f(&coords));
        }
        Self::new(outputs, table)
    }

    pub fn output_alphabet(&self) -> &[String] {
        &self.outputs
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Output index at a given cell of the product space.
    pub fn value(&self, cell: usize) -> usize {
        self.table[cell]
    }

    fn check_total(&self, dist: &JointDistribution) -> Result<()> {
        if self.table.len() != dist.cell_count() {
            return Err(Error::InvalidArgument(format!(
                "function table has {} entries but the distribution has {} cells",
                self.table.len(),
                dist.cell_count()
            )));
        }
        Ok(())
    }
}

/// Dense joint pmf over `m >= 2` finite alphabets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution {
    alphabets: Vec<Vec<String>>,
    pmf: Vec<f64>,
    #[serde(skip)]
    strides: Vec<usize>,
}

impl JointDistribution {
    /// Validates and normalizes a dense pmf table.
    ///
    /// The table must be row-major over the alphabet product (last variable
    /// fastest), nonnegative, and sum to 1 within [`SUM_TOLERANCE`]; it is
    /// divided by its exact sum so the stored table sums to 1 within 1e-9.
    pub fn new(alphabets: Vec<Vec<String>>, mut pmf: Vec<f64>) -> Result<Self> {
        if alphabets.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "alphabets: need at least 2 variables, got {}",
                alphabets.len()
            )));
        }
        for (i, a) in alphabets.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::InvalidInput(format!("alphabets[{i}]: empty alphabet")));
            }
        }
        let cells = Self::checked_cell_count(&alphabets)?;
        if pmf.len() != cells {
            return Err(Error::InvalidInput(format!(
                "pmf: expected {cells} cells, got {}",
                pmf.len()
            )));
        }
        if let Some(p) = pmf.iter().find(|p| **p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidInput(format!("pmf: invalid probability {p}")));
        }
        let sum: f64 = pmf.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "pmf: sums to {sum}, outside tolerance {SUM_TOLERANCE} of 1"
            )));
        }
        if sum != 1.0 {
            for p in &mut pmf {
                *p /= sum;
            }
        }
        Ok(Self::assemble(alphabets, pmf))
    }

    /// Builds a distribution from sparse `(coordinates, probability)` entries;
    /// omitted cells have probability 0. Duplicate coordinates are rejected.
    pub fn from_entries(
        alphabets: Vec<Vec<String>>,
        entries: &[(Vec<usize>, f64)],
    ) -> Result<Self> {
        let cells = Self::checked_cell_count(&alphabets)?;
        let sizes: Vec<usize> = alphabets.iter().map(|a| a.len()).collect();
        let mut pmf = vec![0.0; cells];
        let mut seen = vec![false; cells];
        for (coords, p) in entries {
            if coords.len() != alphabets.len() {
                return Err(Error::InvalidInput(format!(
                    "pmf entry {coords:?}: expected {} coordinates",
                    alphabets.len()
                )));
            }
            let mut idx = 0usize;
            for (v, &c) in coords.iter().enumerate() {
                if c >= sizes[v] {
                    return Err(Error::InvalidInput(format!(
                        "pmf entry {coords:?}: coordinate {c} out of range for variable {}",
                        v + 1
                    )));
                }
                idx = idx * sizes[v] + c;
            }
            if seen[idx] {
                return Err(Error::InvalidInput(format!("pmf entry {coords:?}: duplicate cell")));
            }
            seen[idx] = true;
            pmf[idx] = *p;
        }
        Self::new(alphabets, pmf)
    }

    fn checked_cell_count(alphabets: &[Vec<String>]) -> Result<usize> {
        let mut cells = 1usize;
        for a in alphabets {
            cells = cells.saturating_mul(a.len());
            if cells > MAX_CELLS {
                return Err(Error::ResourceCap(format!(
                    "pmf table would exceed {MAX_CELLS} cells"
                )));
            }
        }
        Ok(cells)
    }

    /// Internal constructor for tables that are already validated and
    /// normalized; preserves the given values bit-exactly.
    fn assemble(alphabets: Vec<Vec<String>>, pmf: Vec<f64>) -> Self {
        let m = alphabets.len();
        let mut strides = vec![1usize; m];
        for v in (0..m.saturating_sub(1)).rev() {
            strides[v] = strides[v + 1] * alphabets[v + 1].len();
        }
        Self { alphabets, pmf, strides }
    }

    pub fn variable_count(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[Vec<String>] {
        &self.alphabets
    }

    pub fn alphabet(&self, var: usize) -> &[String] {
        &self.alphabets[var - 1]
    }

    pub fn alphabet_sizes(&self) -> Vec<usize> {
        self.alphabets.iter().map(|a| a.len()).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.pmf.len()
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Cell index of a full coordinate tuple.
    pub fn encode_cell(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.variable_count());
        coords
            .iter()
            .zip(&self.strides)
            .map(|(c, s)| c * s)
            .sum()
    }

    /// Writes the coordinates of `cell` into `coords`.
    pub fn decode_cell(&self, cell: usize, coords: &mut [usize]) {
        for (c, (stride, alphabet)) in
            coords.iter_mut().zip(self.strides.iter().zip(&self.alphabets))
        {
            *c = (cell / stride) % alphabet.len();
        }
    }

    /// Joint index of the coordinates of `cell` restricted to `vars`
    /// (1-based, in the order given), mixed-radix with the last listed
    /// variable fastest.
    pub fn project_cell(&self, cell: usize, vars: &[usize]) -> usize {
        let mut idx = 0usize;
        for &v in vars {
            let size = self.alphabets[v - 1].len();
            idx = idx * size + (cell / self.strides[v - 1]) % size;
        }
        idx
    }

    /// Number of joint symbols of the group `vars`.
    pub fn group_size(&self, vars: &[usize]) -> usize {
        vars.iter().map(|&v| self.alphabets[v - 1].len()).product()
    }

    /// Dense marginal table over `vars` (1-based, in the order given).
    pub fn marginal(&self, vars: &[usize]) -> Vec<f64> {
        let mut table = vec![0.0; self.group_size(vars)];
        for (cell, &p) in self.pmf.iter().enumerate() {
            if p > 0.0 {
                table[self.project_cell(cell, vars)] += p;
            }
        }
        table
    }

    /// Marginal entropy `H(X_B)` in bits.
    pub fn entropy(&self, b: &TerminalSubset) -> Result<f64> {
        if b.is_empty() {
            return Err(Error::InvalidArgument("entropy of an empty subset".into()));
        }
        b.check_range(self.variable_count())?;
        Ok(entropy_bits(&self.marginal(b.as_slice())))
    }

    /// Conditional entropy `H(X_B | X_C) = H(X_{B u C}) - H(X_C)` in bits.
    /// `C` may be empty; `B` and `C` must be disjoint.
    pub fn conditional_entropy(&self, b: &TerminalSubset, c: &TerminalSubset) -> Result<f64> {
        if b.is_empty() {
            return Err(Error::InvalidArgument(
                "conditional entropy of an empty subset".into(),
            ));
        }
        if !b.is_disjoint_from(c) {
            return Err(Error::InvalidArgument(
                "conditional entropy: subsets overlap".into(),
            ));
        }
        if c.is_empty() {
            return self.entropy(b);
        }
        Ok(self.entropy(&b.union(c))? - self.entropy(c)?)
    }

    /// Mutual information `I(X_B ; X_C)` in bits. `B` and `C` must be
    /// nonempty and disjoint.
    pub fn mutual_information(&self, b: &TerminalSubset, c: &TerminalSubset) -> Result<f64> {
        if b.is_empty() || c.is_empty() {
            return Err(Error::InvalidArgument(
                "mutual information needs two nonempty subsets".into(),
            ));
        }
        if !b.is_disjoint_from(c) {
            return Err(Error::InvalidArgument("mutual information: subsets overlap".into()));
        }
        Ok(self.entropy(b)? + self.entropy(c)? - self.entropy(&b.union(c))?)
    }

    /// Joint distribution of `(X_1, ..., X_m, g(X_1, ..., X_m))`.
    ///
    /// The adjoined variable is deterministic given the first `m`, so the
    /// marginal over them reproduces this table bit-exactly.
    pub fn adjoin_function(&self, g: &FunctionSpec) -> Result<JointDistribution> {
        g.check_total(self)?;
        let y = g.output_count();
        let cells = self
            .cell_count()
            .checked_mul(y)
            .filter(|&c| c <= MAX_CELLS)
            .ok_or_else(|| {
                Error::ResourceCap(format!("adjoined pmf table would exceed {MAX_CELLS} cells"))
            })?;
        let mut pmf = vec![0.0; cells];
        for (cell, &p) in self.pmf.iter().enumerate() {
            pmf[cell * y + g.value(cell)] = p;
        }
        let mut alphabets = self.alphabets.clone();
        alphabets.push(g.output_alphabet().to_vec());
        Ok(Self::assemble(alphabets, pmf))
    }
}

/// Shannon entropy of a pmf slice, in bits; zero-probability terms
/// contribute 0.
pub fn entropy_bits(pmf: &[f64]) -> f64 {
    -pmf.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// The binary entropy function `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits(&[p, 1.0 - p])
}
