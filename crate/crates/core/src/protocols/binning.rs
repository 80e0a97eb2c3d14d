//! Random-binning omniscience with exact maximum-probability decoding.
//!
//! Each terminal compresses its length-`n` sequence through a uniformly
//! random bin map of the requested rate and publishes the bin value. Every
//! terminal then searches the full product space for the most probable joint
//! sequence consistent with its own observation and all published bins;
//! terminals outside the computing set additionally know the function block
//! and discard inconsistent candidates. Exact search replaces typicality
//! decoding, which at desk scale is both stronger and parameter-free.

use rand::Rng;

use crate::capacity::RateVector;
use crate::dist::{FunctionSpec, JointDistribution, TerminalSubset};
use crate::{Error, Result};

use super::{sample_block_with_rng, stream_rng, PairCounter, SimulationReport};

/// Per-terminal bin budget cap: `n * R_i` may not exceed this many bits.
pub const MAX_BIN_BITS: f64 = 24.0;

/// Cap on the joint sequence space `|X_M|^n` enumerated by the decoder.
pub const MAX_SEQUENCE_SPACE: u128 = 10_000_000;

/// One draw of random bin maps, one per terminal.
#[derive(Debug, Clone)]
pub struct BinningScheme {
    rates: Vec<f64>,
    bin_counts: Vec<usize>,
    /// `maps[l][sequence_index] = bin`.
    maps: Vec<Vec<u32>>,
    seed: u64,
}

impl BinningScheme {
    /// Samples fresh uniform maps for the given sequence-space sizes.
    fn sample<R: Rng>(
        spaces: &[usize],
        bin_counts: &[usize],
        rates: &[f64],
        seed: u64,
        rng: &mut R,
    ) -> Self {
        let maps = spaces
            .iter()
            .zip(bin_counts)
            .map(|(&space, &bins)| {
                (0..space).map(|_| rng.random_range(0..bins as u32)).collect()
            })
            .collect();
        Self {
            rates: rates.to_vec(),
            bin_counts: bin_counts.to_vec(),
            maps,
            seed,
        }
    }

    /// Ascending sequence indices a terminal's map sends to `bin`. The bin
    /// spaces can dwarf the sequence spaces, so this scans the map instead
    /// of materializing per-bin buckets.
    fn bucket(&self, terminal: usize, bin: u32) -> Vec<u32> {
        self.maps[terminal]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == bin)
            .map(|(s, _)| s as u32)
            .collect()
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn bin_counts(&self) -> &[usize] {
        &self.bin_counts
    }

    pub fn map(&self, terminal: usize) -> &[u32] {
        &self.maps[terminal - 1]
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

fn encode_sequence(syms: &[usize], size: usize) -> usize {
    syms.iter().fold(0, |acc, &s| acc * size + s)
}

fn decode_sequence(mut idx: usize, size: usize, n: usize) -> Vec<usize> {
    let mut syms = vec![0usize; n];
    for t in (0..n).rev() {
        syms[t] = idx % size;
        idx /= size;
    }
    syms
}

/// Runs the binning protocol for `trials` independently seeded rounds and
/// reports per-terminal error frequencies plus a plug-in leakage estimate
/// between the published bin tuple and the function block.
///
/// Fresh maps are drawn every trial, matching an average over the random
/// code ensemble; `freeze_maps` pins one realization drawn from stream 0 of
/// the seed instead.
#[allow(clippy::too_many_arguments)]
pub fn run_binning(
    dist: &JointDistribution,
    g: &FunctionSpec,
    computing_set: &TerminalSubset,
    rates: &RateVector,
    n: usize,
    trials: u64,
    seed: u64,
    freeze_maps: bool,
) -> Result<SimulationReport> {
    let m = dist.variable_count();
    if n == 0 || trials == 0 {
        return Err(Error::InvalidArgument(
            "blocklength and trial count must be at least 1".into(),
        ));
    }
    if rates.len() != m {
        return Err(Error::InvalidArgument(format!(
            "expected {m} rates, got {}",
            rates.len()
        )));
    }
    if computing_set.is_empty() || computing_set.iter().any(|i| i > m) {
        return Err(Error::InvalidArgument("invalid computing set".into()));
    }
    if g.table().len() != dist.cell_count() {
        return Err(Error::InvalidArgument(
            "function table does not match the distribution".into(),
        ));
    }

    let sizes = dist.alphabet_sizes();
    let mut joint_space: u128 = 1;
    for &s in &sizes {
        joint_space = joint_space.saturating_mul((s as u128).saturating_pow(n as u32));
    }
    if joint_space > MAX_SEQUENCE_SPACE {
        return Err(Error::ResourceCap(format!(
            "joint sequence space {joint_space} exceeds the exhaustive-decoder cap {MAX_SEQUENCE_SPACE}"
        )));
    }
    let spaces: Vec<usize> = sizes.iter().map(|&s| s.pow(n as u32)).collect();

    let mut bin_counts = Vec::with_capacity(m);
    for (l, &r) in rates.as_slice().iter().enumerate() {
        let bits = n as f64 * r;
        if bits > MAX_BIN_BITS {
            return Err(Error::ResourceCap(format!(
                "terminal {}: n * R = {bits:.2} bits exceeds the bin-space cap {MAX_BIN_BITS}",
                l + 1
            )));
        }
        bin_counts.push((2f64.powf(bits).ceil() as usize).max(1));
    }

    let frozen = freeze_maps.then(|| {
        let mut rng = stream_rng(seed, 0);
        BinningScheme::sample(&spaces, &bin_counts, rates.as_slice(), seed, &mut rng)
    });

    let mut omniscience_errors = vec![0u64; m];
    let mut computation_errors = vec![0u64; m];
    let mut leakage = PairCounter::default();
    let mut coords = vec![0usize; m];

    for trial in 0..trials {
        let block = sample_block_with_rng(
            dist,
            Some(g),
            n,
            &mut stream_rng(seed, 2 * trial + 1),
        );
        let fresh;
        let scheme = match &frozen {
            Some(s) => s,
            None => {
                let mut rng = stream_rng(seed, 2 * trial + 2);
                fresh =
                    BinningScheme::sample(&spaces, &bin_counts, rates.as_slice(), seed, &mut rng);
                &fresh
            }
        };

        let own: Vec<usize> = (0..m)
            .map(|l| encode_sequence(block.sequence(l + 1), sizes[l]))
            .collect();
        let bins: Vec<u32> = (0..m).map(|l| scheme.maps[l][own[l]]).collect();
        let g_block: Vec<usize> = block.function_values().unwrap().to_vec();

        leakage.record(bins.clone(), g_block.iter().map(|&y| y as u32).collect());

        // Candidate sequences per terminal consistent with the published bin,
        // decoded to symbols once per trial.
        let candidate_ids: Vec<Vec<u32>> = (0..m).map(|l| scheme.bucket(l, bins[l])).collect();
        let candidates: Vec<Vec<Vec<usize>>> = (0..m)
            .map(|l| {
                candidate_ids[l]
                    .iter()
                    .map(|&s| decode_sequence(s as usize, sizes[l], n))
                    .collect()
            })
            .collect();

        for i in 0..m {
            let use_function = !computing_set.contains(i + 1);
            // Odometer over the other terminals' candidate lists, in
            // ascending joint-sequence order so ties resolve toward the
            // lexicographically smallest candidate.
            let others: Vec<usize> = (0..m).filter(|&l| l != i).collect();
            let mut idx = vec![0usize; others.len()];
            let mut best_logp = f64::NEG_INFINITY;
            let mut best: Option<Vec<usize>> = None;
            'outer: loop {
                let mut logp = 0.0f64;
                let mut valid = true;
                for t in 0..n {
                    for (&l, &ci) in others.iter().zip(idx.iter()) {
                        coords[l] = candidates[l][ci][t];
                    }
                    coords[i] = block.sequence(i + 1)[t];
                    let cell = dist.encode_cell(&coords);
                    let p = dist.pmf()[cell];
                    if p <= 0.0 || (use_function && g.value(cell) != g_block[t]) {
                        valid = false;
                        break;
                    }
                    logp += p.log2();
                }
                if valid && logp > best_logp {
                    best_logp = logp;
                    best = Some(
                        others
                            .iter()
                            .zip(idx.iter())
                            .map(|(&l, &ci)| candidate_ids[l][ci] as usize)
                            .collect(),
                    );
                }
                // Advance the odometer, last terminal fastest.
                let mut pos = others.len();
                loop {
                    if pos == 0 {
                        break 'outer;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < candidates[others[pos]].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }

            let decoded = best.expect("the true sequence is always a valid candidate");
            let correct = others
                .iter()
                .zip(decoded.iter())
                .all(|(&l, &s)| s == own[l]);
            if !correct {
                omniscience_errors[i] += 1;
                // Recompute the function block on the decoded tuple.
                let mut g_ok = true;
                let decoded_syms: Vec<Vec<usize>> = others
                    .iter()
                    .zip(decoded.iter())
                    .map(|(&l, &s)| decode_sequence(s, sizes[l], n))
                    .collect();
                for t in 0..n {
                    for (slot, &l) in others.iter().enumerate() {
                        coords[l] = decoded_syms[slot][t];
                    }
                    coords[i] = block.sequence(i + 1)[t];
                    if g.value(dist.encode_cell(&coords)) != g_block[t] {
                        g_ok = false;
                        break;
                    }
                }
                if !g_ok {
                    computation_errors[i] += 1;
                }
            }
        }
    }

    let trials_f = trials as f64;
    Ok(SimulationReport {
        trials,
        blocklength: n,
        seed,
        omniscience_error: omniscience_errors.iter().map(|&e| e as f64 / trials_f).collect(),
        computation_error: computation_errors.iter().map(|&e| e as f64 / trials_f).collect(),
        leakage: leakage.estimate(),
        rates_bits_per_symbol: rates.as_slice().to_vec(),
        bin_counts: bin_counts.iter().map(|&b| b as u64).collect(),
        communication_rate_bits_per_symbol: bin_counts
            .iter()
            .map(|&b| (b as f64).log2())
            .sum::<f64>()
            / n as f64,
    })
}
