//! Generator for the online-auction family: `m - 1` independent bidders
//! place uniform bids in `{1, ..., k}`, and the last terminal (the server)
//! observes the full bid vector. Two functions of interest come with it:
//! the highest bid and the winner's index under a deterministic tie-break.

use clap::ValueEnum;

use crate::problem::{RawCell, RawEntry, RawFunction, RawProblem};
use crate::{CliError, CliResult};

/// Cap on the number of bid vectors.
pub const MAX_BID_VECTORS: u128 = 1_000_000;

/// Cap on the cells of the emitted (total) function tables, which span
/// bidder tuples times bid vectors.
pub const MAX_TABLE_CELLS: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreak {
    /// The winner is the lowest-indexed bidder with the maximal bid.
    Lowest,
    /// The winner is the highest-indexed bidder with the maximal bid.
    Highest,
}

/// Builds the auction problem file with both the `max` and `argmax`
/// function tables and the bidders as the default computing set.
pub fn generate_auction(m: usize, k: usize, tie_break: TieBreak) -> CliResult<RawProblem> {
    if m < 3 || k < 2 {
        return Err(CliError::Input(
            "the auction needs m >= 3 terminals and k >= 2 bids".into(),
        ));
    }
    let bidders = m - 1;
    let vectors = (k as u128).checked_pow(bidders as u32).unwrap_or(u128::MAX);
    if vectors > MAX_BID_VECTORS {
        return Err(CliError::Resource(format!(
            "k^(m-1) = {vectors} bid vectors exceed the cap {MAX_BID_VECTORS}"
        )));
    }
    if vectors * vectors > MAX_TABLE_CELLS {
        return Err(CliError::Resource(format!(
            "the total function tables would need {} cells, over the cap {MAX_TABLE_CELLS}",
            vectors * vectors
        )));
    }
    let vectors = vectors as usize;

    let bid_symbols: Vec<String> = (1..=k).map(|b| b.to_string()).collect();
    let decode_vector = |v: usize| -> Vec<usize> {
        let mut bids = vec![0usize; bidders];
        let mut rest = v;
        for b in (0..bidders).rev() {
            bids[b] = rest % k;
            rest /= k;
        }
        bids
    };
    let vector_symbol = |bids: &[usize]| -> String {
        bids.iter()
            .map(|&b| (b + 1).to_string())
            .collect::<Vec<_>>()
            .join("-")
    };

    let mut alphabets: Vec<Vec<String>> = vec![bid_symbols.clone(); bidders];
    alphabets.push((0..vectors).map(|v| vector_symbol(&decode_vector(v))).collect());

    let p = 1.0 / vectors as f64;
    let pmf: Vec<RawEntry> = (0..vectors)
        .map(|v| {
            let bids = decode_vector(v);
            let mut x: Vec<String> =
                bids.iter().map(|&b| bid_symbols[b].clone()).collect();
            x.push(vector_symbol(&bids));
            RawEntry { x, p }
        })
        .collect();

    // Total tables: every (bidder tuple, vector) cell, incl. inconsistent
    // zero-probability ones; the functions read the bidder coordinates.
    let mut max_table = Vec::with_capacity(vectors * vectors);
    let mut argmax_table = Vec::with_capacity(vectors * vectors);
    for bid_tuple in 0..vectors {
        let bids = decode_vector(bid_tuple);
        let best = bids.iter().copied().max().unwrap();
        let winner = match tie_break {
            TieBreak::Lowest => bids.iter().position(|&b| b == best).unwrap(),
            TieBreak::Highest => bids.iter().rposition(|&b| b == best).unwrap(),
        };
        for v in 0..vectors {
            let mut x: Vec<String> =
                bids.iter().map(|&b| bid_symbols[b].clone()).collect();
            x.push(vector_symbol(&decode_vector(v)));
            max_table.push(RawCell { x: x.clone(), y: bid_symbols[best].clone() });
            argmax_table.push(RawCell { x, y: (winner + 1).to_string() });
        }
    }

    let functions = [
        (
            "max".to_string(),
            RawFunction { outputs: bid_symbols, table: max_table },
        ),
        (
            "argmax".to_string(),
            RawFunction {
                outputs: (1..=bidders).map(|i| i.to_string()).collect(),
                table: argmax_table,
            },
        ),
    ]
    .into_iter()
    .collect();

    Ok(RawProblem {
        alphabets,
        pmf,
        function: None,
        functions: Some(functions),
        computing_set: Some((1..=bidders).collect()),
        secrecy_set: None,
        terminals: None,
        side_info: None,
    })
}
