//! Slepian-Wolf coset-key scheme for a doubly symmetric binary source.
//!
//! Terminal 1 observes uniform bits; terminal 2 sees them through a binary
//! symmetric crossover. Terminal 1 publishes the syndrome of its block under
//! a binary linear code. Terminal 2 adds its own syndrome to recover the
//! syndrome of the noise block and estimates the noise as the minimum-weight
//! coset leader. The location of terminal 1's block inside its coset is a
//! uniform key independent of the published syndrome; terminal 2 sends the
//! leader index of its noise estimate one-time-padded with that key, so both
//! terminals end with the same estimate while the transcript stays
//! independent of the noise block.
//!
//! Finite blocks force a framing choice for the padded message: the noise
//! estimate is always a coset leader, so its index needs `n - k` bits, of
//! which `min(k, n - k)` are encrypted with key bits (all of them whenever
//! the code rate is at least one half). The realized split is reported.

use serde::Serialize;

use crate::{Error, Result};

use super::{stream_rng, PairCounter, SimulationReport};
use rand::Rng;

/// Cap on `4^n`, the joint space enumerated by the exact secrecy check.
pub const MAX_EXACT_SPACE: u128 = 10_000_000;

/// Cap on the blocklength; scheme tables are dense over `2^n`.
pub const MAX_BLOCKLENGTH: usize = 24;

/// A binary linear code given by independent parity-check rows, with the
/// dense syndrome/coset tables the scheme needs.
#[derive(Debug, Clone, Serialize)]
pub struct LinearCodeScheme {
    blocklength: usize,
    parity_rows: Vec<u64>,
    #[serde(skip)]
    syndrome_of: Vec<u32>,
    #[serde(skip)]
    leader_of: Vec<u64>,
    #[serde(skip)]
    coset_index_of: Vec<u32>,
    #[serde(skip)]
    codewords: Vec<u64>,
}

impl LinearCodeScheme {
    /// Builds the scheme tables from `n - k` parity-check rows over `n`-bit
    /// blocks. Rows must be linearly independent, which makes the pair
    /// (syndrome, coset index) a bijection of the block space.
    pub fn new(blocklength: usize, parity_rows: Vec<u64>) -> Result<Self> {
        if blocklength == 0 || blocklength > MAX_BLOCKLENGTH {
            return Err(Error::ResourceCap(format!(
                "blocklength must be in 1..={MAX_BLOCKLENGTH}"
            )));
        }
        let mask = (1u64 << blocklength) - 1;
        if parity_rows.is_empty() || parity_rows.len() >= blocklength {
            return Err(Error::InvalidArgument(
                "need between 1 and blocklength-1 parity rows".into(),
            ));
        }
        if parity_rows.iter().any(|&r| r & !mask != 0 || r == 0) {
            return Err(Error::InvalidArgument(
                "parity rows must be nonzero and fit the blocklength".into(),
            ));
        }
        // Row independence via elimination over GF(2), keyed by pivot bit.
        let mut basis: Vec<(u32, u64)> = Vec::new();
        for &row in &parity_rows {
            let mut r = row;
            while r != 0 {
                let msb = 63 - r.leading_zeros();
                match basis.iter().find(|(p, _)| *p == msb) {
                    Some(&(_, b)) => r ^= b,
                    None => break,
                }
            }
            if r == 0 {
                return Err(Error::InvalidArgument(
                    "parity rows are linearly dependent".into(),
                ));
            }
            basis.push((63 - r.leading_zeros(), r));
        }

        let n = blocklength;
        let checks = parity_rows.len();
        let space = 1usize << n;
        let mut syndrome_of = vec![0u32; space];
        for x in 0..space as u64 {
            let mut s = 0u32;
            for (j, &row) in parity_rows.iter().enumerate() {
                s |= ((x & row).count_ones() & 1) << j;
            }
            syndrome_of[x as usize] = s;
        }

        // Minimum-weight leader per coset, lexicographically smallest on ties.
        let mut leader_of = vec![u64::MAX; 1 << checks];
        for x in 0..space as u64 {
            let s = syndrome_of[x as usize] as usize;
            let current = leader_of[s];
            if current == u64::MAX
                || (x.count_ones(), x) < (current.count_ones(), current)
            {
                leader_of[s] = x;
            }
        }

        let codewords: Vec<u64> =
            (0..space as u64).filter(|&x| syndrome_of[x as usize] == 0).collect();
        if codewords.len() != 1usize << (n - checks) {
            return Err(Error::InvalidArgument(
                "parity rows do not define a code of the expected dimension".into(),
            ));
        }
        let mut coset_index_of = vec![0u32; space];
        for x in 0..space as u64 {
            let c = x ^ leader_of[syndrome_of[x as usize] as usize];
            let idx = codewords.binary_search(&c).expect("x xor leader is a codeword");
            coset_index_of[x as usize] = idx as u32;
        }

        Ok(Self {
            blocklength,
            parity_rows,
            syndrome_of,
            leader_of,
            coset_index_of,
            codewords,
        })
    }

    /// The perfect single-error-correcting code on 7-bit blocks: parity-check
    /// columns are the numbers 1..=7, so every weight-one error has a
    /// distinct syndrome.
    pub fn hamming_7_4() -> Self {
        let rows = (0..3)
            .map(|bit| {
                (1u64..=7)
                    .filter(|j| j & (1 << bit) != 0)
                    .fold(0u64, |m, j| m | 1 << (j - 1))
            })
            .collect();
        Self::new(7, rows).expect("the classic parity rows are independent")
    }

    pub fn blocklength(&self) -> usize {
        self.blocklength
    }

    pub fn parity_rows(&self) -> &[u64] {
        &self.parity_rows
    }

    /// Number of syndrome bits, `n - k`.
    pub fn check_bits(&self) -> usize {
        self.parity_rows.len()
    }

    /// Code dimension `k`: the coset-index (key) length in bits.
    pub fn dimension(&self) -> usize {
        self.blocklength - self.parity_rows.len()
    }

    pub fn syndrome(&self, x: u64) -> u32 {
        self.syndrome_of[x as usize]
    }

    /// Minimum-weight representative of the coset with this syndrome.
    pub fn leader(&self, syndrome: u32) -> u64 {
        self.leader_of[syndrome as usize]
    }

    /// Index of `x` inside its coset (position of the codeword it differs
    /// from the leader by).
    pub fn coset_index(&self, x: u64) -> u32 {
        self.coset_index_of[x as usize]
    }

    /// Inverse of `x -> (syndrome, coset_index)`.
    pub fn reconstruct(&self, syndrome: u32, coset_index: u32) -> u64 {
        self.leader_of[syndrome as usize] ^ self.codewords[coset_index as usize]
    }
}

/// Simulation outcome of the coset-key scheme plus its framing contract.
#[derive(Debug, Clone, Serialize)]
pub struct CosetSchemeReport {
    pub report: SimulationReport,
    pub crossover: f64,
    /// Bits of the padded message: the leader index of the noise estimate.
    pub message_bits: usize,
    /// Bits of key material available per block.
    pub key_bits: usize,
    /// Message bits actually one-time-padded, `min(key_bits, message_bits)`.
    pub encrypted_bits: usize,
    /// `encrypted_bits / message_bits`.
    pub encrypted_fraction: f64,
}

/// Runs the coset-key scheme over `trials` seeded rounds.
///
/// The block source is the uniform-input crossover channel; `n` must match
/// the code blocklength.
pub fn run_example1(
    crossover: f64,
    code: &LinearCodeScheme,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<CosetSchemeReport> {
    if !(0.0..0.5).contains(&crossover) {
        return Err(Error::InvalidArgument(
            "crossover probability must lie in [0, 0.5)".into(),
        ));
    }
    if n != code.blocklength() {
        return Err(Error::InvalidArgument(format!(
            "blocklength {n} does not match the code blocklength {}",
            code.blocklength()
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trial count must be at least 1".into()));
    }

    let mask = (1u64 << n) - 1;
    let message_bits = code.check_bits();
    let key_bits = code.dimension();
    let encrypted_bits = key_bits.min(message_bits);
    let pad_mask = (1u32 << encrypted_bits) - 1;

    let mut errors = 0u64;
    let mut leakage = PairCounter::default();
    for trial in 0..trials {
        let mut rng = stream_rng(seed, trial + 1);
        let x1: u64 = rng.random::<u64>() & mask;
        let mut noise = 0u64;
        for t in 0..n {
            if rng.random::<f64>() < crossover {
                noise |= 1 << t;
            }
        }
        let x2 = x1 ^ noise;

        let f1 = code.syndrome(x1);
        // Terminal 2: syndrome of the noise block, then its leader estimate.
        let noise_syndrome = f1 ^ code.syndrome(x2);
        let estimate = code.leader(noise_syndrome);

        let key = code.coset_index(x1);
        debug_assert_eq!(code.reconstruct(f1, key), x1);
        // The leader index is its syndrome; pad as many of its bits as the
        // key covers.
        let f2 = noise_syndrome ^ (key & pad_mask);

        // Terminal 1 decrypts with its key and recovers the same estimate.
        let recovered = code.leader(f2 ^ (key & pad_mask));
        debug_assert_eq!(recovered, estimate);

        if estimate != noise {
            errors += 1;
        }
        leakage.record(
            vec![f1, f2],
            noise.to_le_bytes().iter().map(|&b| b as u32).collect(),
        );
    }

    let error = errors as f64 / trials as f64;
    let rate = 2.0 * message_bits as f64 / n as f64;
    Ok(CosetSchemeReport {
        report: SimulationReport {
            trials,
            blocklength: n,
            seed,
            omniscience_error: vec![error, error],
            computation_error: vec![error, error],
            leakage: leakage.estimate(),
            rates_bits_per_symbol: vec![message_bits as f64 / n as f64; 2],
            bin_counts: vec![1u64 << message_bits; 2],
            communication_rate_bits_per_symbol: rate,
        },
        crossover,
        message_bits,
        key_bits,
        encrypted_bits,
        encrypted_fraction: encrypted_bits as f64 / message_bits as f64,
    })
}

/// Exact mutual informations of the scheme, by exhaustive enumeration of
/// every (block, noise) pair under the source weights.
#[derive(Debug, Clone, Serialize)]
pub struct ExactSecrecy {
    /// `I(key ; published syndrome)` in bits.
    pub key_syndrome_mi_bits: f64,
    /// `I(noise block ; published syndrome)` in bits.
    pub function_syndrome_mi_bits: f64,
    /// Number of (block, noise) pairs enumerated.
    pub pairs: u64,
}

/// Enumerates all `4^n` source pairs exactly. The published syndrome is a
/// deterministic function of the uniform block, so both informations vanish
/// identically; the enumeration verifies that instead of assuming it.
pub fn exact_coset_secrecy(crossover: f64, code: &LinearCodeScheme) -> Result<ExactSecrecy> {
    if !(0.0..0.5).contains(&crossover) {
        return Err(Error::InvalidArgument(
            "crossover probability must lie in [0, 0.5)".into(),
        ));
    }
    let n = code.blocklength();
    if (4u128).saturating_pow(n as u32) > MAX_EXACT_SPACE {
        return Err(Error::ResourceCap(format!(
            "4^{n} source pairs exceed the exact-enumeration cap {MAX_EXACT_SPACE}"
        )));
    }
    let space = 1usize << n;
    let checks = code.check_bits();
    let dim = code.dimension();
    let uniform = 1.0 / space as f64;

    // Noise-weight probabilities; 0^0 = 1 covers the noiseless edge.
    let weight_prob: Vec<f64> = (0..=n)
        .map(|w| crossover.powi(w as i32) * (1.0 - crossover).powi((n - w) as i32))
        .collect();

    let mut key_syndrome = vec![vec![0.0f64; 1 << checks]; 1 << dim];
    let mut noise_syndrome = vec![vec![0.0f64; 1 << checks]; space];
    for x1 in 0..space as u64 {
        let f1 = code.syndrome(x1) as usize;
        let key = code.coset_index(x1) as usize;
        key_syndrome[key][f1] += uniform;
        for noise in 0..space as u64 {
            let p = uniform * weight_prob[noise.count_ones() as usize];
            if p > 0.0 {
                noise_syndrome[noise as usize][f1] += p;
            }
        }
    }

    Ok(ExactSecrecy {
        key_syndrome_mi_bits: table_mi(&key_syndrome),
        function_syndrome_mi_bits: table_mi(&noise_syndrome),
        pairs: (space * space) as u64,
    })
}

fn table_mi(joint: &[Vec<f64>]) -> f64 {
    let rows = joint.len();
    let cols = joint[0].len();
    let row_sum: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let col_sum: Vec<f64> = (0..cols)
        .map(|c| joint.iter().map(|r| r[c]).sum())
        .collect();
    let mut mi = 0.0;
    for r in 0..rows {
        for c in 0..cols {
            let p = joint[r][c];
            if p > 0.0 {
                mi += p * (p / (row_sum[r] * col_sum[c])).log2();
            }
        }
    }
    mi
}
