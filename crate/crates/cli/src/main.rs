use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use omnicap_cli::auction::{generate_auction, TieBreak};
use omnicap_cli::output::emit;
use omnicap_cli::problem::{parse_problem, ProblemFile};
use omnicap_cli::{CliError, CliResult};
use omnicap_core::capacity::{
    aided_secret_key_capacity, decide, decompose, secret_key_capacity,
    secure_computation_capacity, CapacityResult, RateVector,
};
use omnicap_core::dist::{JointDistribution, TerminalSubset};
use omnicap_core::mcf::mcf_all;
use omnicap_core::protocols::{
    exact_coset_secrecy, run_balance_check, run_binning, run_example1, LinearCodeScheme,
};

#[derive(Parser)]
#[command(
    name = "omnicap",
    version,
    about = "Secret-key capacities and secure-computability decisions for finite multiterminal sources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Marginal or conditional entropy, or mutual information, in bits.
    Entropy {
        file: PathBuf,
        /// Terminal subset, e.g. --set 1,2.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
        /// Condition on this subset instead of reporting the marginal.
        #[arg(long, value_delimiter = ',', conflicts_with = "mi_with")]
        given: Option<Vec<usize>>,
        /// Mutual information with this subset.
        #[arg(long, value_delimiter = ',')]
        mi_with: Option<Vec<usize>>,
    },
    /// Maximum common function of variable groups.
    Mcf {
        file: PathBuf,
        /// Groups as semicolon-separated variable lists, e.g. "1,2;3";
        /// defaults to one group per variable.
        #[arg(long)]
        groups: Option<String>,
    },
    /// Secret-key style capacities.
    Capacity {
        #[command(subcommand)]
        kind: CapacityCommand,
    },
    /// Is the function securely computable by the computing set?
    Decide {
        file: PathBuf,
        /// Computing set; defaults to the file's computing_set.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        /// Function name when the file has several.
        #[arg(long)]
        function: Option<String>,
        /// Margin below which the verdict is Boundary.
        #[arg(long, default_value_t = 1e-7)]
        tolerance: f64,
    },
    /// Residual key rates and the total-entropy identity.
    Decompose {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        #[arg(long)]
        function: Option<String>,
        #[arg(long, default_value_t = 1e-7)]
        tolerance: f64,
    },
    /// Monte Carlo random-binning omniscience with leakage estimation.
    SimulateBinning {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        #[arg(long)]
        function: Option<String>,
        /// Per-terminal rates in bits per symbol, e.g. --rates 0.62,0.62.
        #[arg(long, value_delimiter = ',', conflicts_with = "margin")]
        rates: Option<Vec<f64>>,
        /// Use the optimal omniscience rates plus this margin per terminal.
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Freeze one draw of bin maps instead of resampling per trial.
        #[arg(long)]
        freeze_bins: bool,
    },
    /// The Slepian-Wolf coset-key scheme on a doubly symmetric binary
    /// source, with exact secrecy checks when the space is enumerable.
    SimulateExample1 {
        /// Crossover probability of the source.
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Built-in code name; currently "hamming74".
        #[arg(long, default_value = "hamming74", conflicts_with = "parity_rows")]
        code: String,
        /// Custom parity rows as comma-separated bit strings, e.g.
        /// "1010101,1100110,1111000".
        #[arg(long)]
        parity_rows: Option<String>,
        /// Blocklength; must match the code.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 10000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Balanced-coloring statistic over random colorings.
    BalanceCheck {
        /// Two-variable problem file for (U, V); omit for a synthetic
        /// uniform U with constant V.
        file: Option<PathBuf>,
        /// Size of the synthetic uniform U.
        #[arg(long, conflicts_with = "file")]
        u_size: Option<usize>,
        /// Number of colors.
        #[arg(long, required = true)]
        r: usize,
        /// Coarsening classes; symbol u goes to class (u mod r').
        #[arg(long, default_value_t = 1)]
        r_prime: usize,
        /// Conditional point-mass bound; defaults to the largest value the
        /// distribution satisfies with zero exception mass.
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, required = true)]
        lambda: f64,
        #[arg(long, default_value_t = 200)]
        colorings: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit the auction problem file on standard output.
    GenAuction {
        /// Terminal count (m - 1 bidders plus the server).
        #[arg(long, required = true)]
        m: usize,
        /// Number of possible bids.
        #[arg(long, required = true)]
        k: usize,
        #[arg(long, value_enum, default_value_t = TieBreak::Lowest)]
        tie_break: TieBreak,
    },
}

#[derive(Subcommand)]
enum CapacityCommand {
    /// Secret-key capacity of a secrecy set.
    Sk {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
    /// Aided-secret-key capacity using the file's side_info assignment.
    Ask {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
    /// The aided capacity governing secure computation of a function.
    Sc {
        file: PathBuf,
        /// Computing set; defaults to the file's computing_set.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        #[arg(long)]
        function: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => {
            emit(value);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> CliResult<Value> {
    match command {
        Command::Entropy { file, set, given, mi_with } => {
            let p = load(&file)?;
            let b = subset(&set, "set")?;
            let (kind, value) = if let Some(c) = &given {
                let c = subset(c, "given")?;
                ("conditional", p.dist.conditional_entropy(&b, &c)?)
            } else if let Some(c) = &mi_with {
                let c = subset(c, "mi-with")?;
                ("mutual_information", p.dist.mutual_information(&b, &c)?)
            } else {
                ("marginal", p.dist.entropy(&b)?)
            };
            Ok(json!({
                "command": "entropy",
                "kind": kind,
                "set": set,
                "given": given,
                "mi_with": mi_with,
                "value_bits": value,
            }))
        }

        Command::Mcf { file, groups } => {
            let p = load(&file)?;
            let groups: Vec<Vec<usize>> = match groups {
                Some(text) => parse_groups(&text)?,
                None => (1..=p.dist.variable_count()).map(|v| vec![v]).collect(),
            };
            let labeling = mcf_all(&p.dist, &groups)?;
            Ok(json!({
                "command": "mcf",
                "groups": groups,
                "class_count": labeling.class_count(),
                "entropy_bits": labeling.entropy_bits(),
                "class_pmf": labeling.class_pmf(),
                "labels": (0..groups.len()).map(|g| labeling.labels(g).to_vec()).collect::<Vec<_>>(),
            }))
        }

        Command::Capacity { kind } => match kind {
            CapacityCommand::Sk { file, set } => {
                let p = load(&file)?;
                let aprime = pick_set(set.as_deref(), p.secrecy_set.as_ref(), "secrecy set")?;
                warn_if_large(p.terminal_count);
                let dist = terminal_distribution(&p)?;
                let result = secret_key_capacity(&dist, &aprime)?;
                Ok(capacity_json("sk", &aprime, &result))
            }
            CapacityCommand::Ask { file, set } => {
                let p = load(&file)?;
                let aprime = pick_set(set.as_deref(), p.secrecy_set.as_ref(), "secrecy set")?;
                warn_if_large(p.terminal_count);
                let side = p.side_info.clone().ok_or_else(|| {
                    CliError::Input("capacity ask needs a side_info assignment in the file".into())
                })?;
                let result =
                    aided_secret_key_capacity(&p.dist, p.terminal_count, &aprime, &side)?;
                Ok(capacity_json("ask", &aprime, &result))
            }
            CapacityCommand::Sc { file, set, function } => {
                let p = load(&file)?;
                p.require_pure_terminals("capacity sc")?;
                let a = pick_set(set.as_deref(), p.computing_set.as_ref(), "computing set")?;
                warn_if_large(p.terminal_count);
                let g = p.select_function(function.as_deref())?;
                let result = secure_computation_capacity(&p.dist, g, &a)?;
                Ok(capacity_json("sc", &a, &result))
            }
        },

        Command::Decide { file, set, function, tolerance } => {
            let p = load(&file)?;
            p.require_pure_terminals("decide")?;
            let a = pick_set(set.as_deref(), p.computing_set.as_ref(), "computing set")?;
            warn_if_large(p.terminal_count);
            let g = p.select_function(function.as_deref())?;
            let verdict = decide(&p.dist, g, &a, tolerance)?;
            Ok(json!({
                "command": "decide",
                "computing_set": a.as_slice(),
                "tolerance": tolerance,
                "verdict": verdict.kind,
                "H_G": verdict.function_entropy_bits,
                "C": verdict.capacity_bits,
                "margin_bits": verdict.margin_bits,
                "capacity": verdict.capacity,
            }))
        }

        Command::Decompose { file, set, function, tolerance } => {
            let p = load(&file)?;
            p.require_pure_terminals("decompose")?;
            let a = pick_set(set.as_deref(), p.computing_set.as_ref(), "computing set")?;
            warn_if_large(p.terminal_count);
            let g = p.select_function(function.as_deref())?;
            let d = decompose(&p.dist, g, &a, tolerance)?;
            Ok(json!({
                "command": "decompose",
                "computing_set": a.as_slice(),
                "tolerance": tolerance,
                "verdict": d.verdict.kind,
                "H_G": d.verdict.function_entropy_bits,
                "C": d.verdict.capacity_bits,
                "residual_aided_capacity_bits": d.residual_aided_capacity_bits,
                "residual_sk_capacity_bits": d.residual_sk_capacity_bits,
                "total_entropy_bits": d.total_entropy_bits,
                "identity_gap_bits": d.identity_gap_bits,
                "identity_holds": d.identity_holds,
                "meaningful": d.meaningful,
            }))
        }

        Command::SimulateBinning {
            file,
            set,
            function,
            rates,
            margin,
            n,
            trials,
            seed,
            freeze_bins,
        } => {
            let p = load(&file)?;
            p.require_pure_terminals("simulate-binning")?;
            let a = pick_set(set.as_deref(), p.computing_set.as_ref(), "computing set")?;
            let g = p.select_function(function.as_deref())?;
            let m = p.dist.variable_count();
            let rates = match (rates, margin) {
                (Some(r), None) => RateVector::new(r)?,
                (None, margin) => {
                    let margin = margin.unwrap_or(0.0);
                    let optimal = secure_computation_capacity(&p.dist, g, &a)?
                        .rates
                        .expect("full secrecy set always solves the program");
                    RateVector::new(
                        optimal.as_slice().iter().map(|r| r + margin).collect(),
                    )?
                }
                (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
            };
            if rates.len() != m {
                return Err(CliError::Input(format!("expected {m} rates")));
            }
            let report = run_binning(&p.dist, g, &a, &rates, n, trials, seed, freeze_bins)?;
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["command"] = json!("simulate-binning");
            value["computing_set"] = json!(a.as_slice());
            value["freeze_bins"] = json!(freeze_bins);
            Ok(value)
        }

        Command::SimulateExample1 { delta, code, parity_rows, n, trials, seed } => {
            let scheme = match parity_rows {
                Some(text) => LinearCodeScheme::new(
                    parse_parity_blocklength(&text)?,
                    parse_parity_rows(&text)?,
                )?,
                None => match code.as_str() {
                    "hamming74" => LinearCodeScheme::hamming_7_4(),
                    other => {
                        return Err(CliError::Input(format!(
                            "unknown code \"{other}\"; use hamming74 or --parity-rows"
                        )))
                    }
                },
            };
            let n = n.unwrap_or_else(|| scheme.blocklength());
            let report = run_example1(delta, &scheme, n, trials, seed)?;
            let exact = exact_coset_secrecy(delta, &scheme).ok();
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["command"] = json!("simulate-example1");
            value["exact"] = match exact {
                Some(e) => serde_json::to_value(&e).expect("exact secrecy serializes"),
                None => Value::Null,
            };
            Ok(value)
        }

        Command::BalanceCheck { file, u_size, r, r_prime, d, lambda, colorings, seed } => {
            if r_prime == 0 {
                return Err(CliError::Input("r-prime must be at least 1".into()));
            }
            let dist = match (&file, u_size) {
                (Some(path), None) => {
                    let p = load(path)?;
                    if p.dist.variable_count() != 2 {
                        return Err(CliError::Input(
                            "balance-check needs a two-variable (U, V) file".into(),
                        ));
                    }
                    p.dist
                }
                (None, Some(size)) => {
                    if size == 0 {
                        return Err(CliError::Input("u-size must be positive".into()));
                    }
                    JointDistribution::new(
                        vec![
                            (0..size).map(|u| u.to_string()).collect(),
                            vec!["v".to_string()],
                        ],
                        vec![1.0 / size as f64; size],
                    )?
                }
                _ => {
                    return Err(CliError::Input(
                        "give either a problem file or --u-size".into(),
                    ))
                }
            };
            let u_count = dist.alphabet(1).len();
            let coarsening: Vec<usize> = (0..u_count).map(|u| u % r_prime).collect();
            let mass_bound = match d {
                Some(d) => d,
                None => {
                    // Largest d with zero exception mass.
                    let v_marginal = dist.marginal(&[2]);
                    let v_size = dist.alphabet(2).len();
                    let max_cond = (0..dist.cell_count())
                        .filter(|&c| dist.pmf()[c] > 0.0)
                        .map(|c| dist.pmf()[c] / v_marginal[c % v_size])
                        .fold(0.0f64, f64::max);
                    1.0 / max_cond
                }
            };
            let check =
                run_balance_check(&dist, &coarsening, r, mass_bound, lambda, colorings, seed)?;
            let mut value = serde_json::to_value(&check).expect("check serializes");
            value["command"] = json!("balance-check");
            Ok(value)
        }

        Command::GenAuction { m, k, tie_break } => {
            let raw = generate_auction(m, k, tie_break)?;
            Ok(serde_json::to_value(&raw).expect("problem serializes"))
        }
    }
}

fn load(path: &Path) -> CliResult<ProblemFile> {
    parse_problem(path)
}

/// Restricts the file's distribution to its terminal variables,
/// marginalizing any side-information variables out.
fn terminal_distribution(p: &ProblemFile) -> CliResult<JointDistribution> {
    if p.terminal_count == p.dist.variable_count() {
        return Ok(p.dist.clone());
    }
    let vars: Vec<usize> = (1..=p.terminal_count).collect();
    let table = p.dist.marginal(&vars);
    let alphabets: Vec<Vec<String>> =
        vars.iter().map(|&v| p.dist.alphabet(v).to_vec()).collect();
    JointDistribution::new(alphabets, table).map_err(CliError::from)
}

fn subset(indices: &[usize], name: &str) -> CliResult<TerminalSubset> {
    TerminalSubset::new(indices.iter().copied())
        .map_err(|e| CliError::Input(format!("--{name}: {e}")))
}

fn pick_set(
    flag: Option<&[usize]>,
    file_default: Option<&TerminalSubset>,
    what: &str,
) -> CliResult<TerminalSubset> {
    match (flag, file_default) {
        (Some(indices), _) => subset(indices, "set"),
        (None, Some(set)) => Ok(set.clone()),
        (None, None) => Err(CliError::Input(format!(
            "no {what}: pass --set or put it in the file"
        ))),
    }
}

fn warn_if_large(m: usize) {
    if m >= 12 {
        eprintln!(
            "warning: {m} terminals means roughly 2^{m} rate constraints; this may take a while"
        );
    }
}

fn capacity_json(kind: &str, set: &TerminalSubset, result: &CapacityResult) -> Value {
    let mut value = serde_json::to_value(result).expect("capacity serializes");
    value["command"] = json!("capacity");
    value["kind"] = json!(kind);
    value["set"] = json!(set.as_slice());
    value
}

fn parse_groups(text: &str) -> CliResult<Vec<Vec<usize>>> {
    text.split(';')
        .map(|group| {
            group
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::Input(format!("--groups: bad index \"{v}\"")))
                })
                .collect()
        })
        .collect()
}

fn parse_parity_blocklength(text: &str) -> CliResult<usize> {
    let first = text
        .split(',')
        .next()
        .ok_or_else(|| CliError::Input("--parity-rows: empty".into()))?;
    Ok(first.trim().len())
}

fn parse_parity_rows(text: &str) -> CliResult<Vec<u64>> {
    text.split(',')
        .map(|row| {
            let row = row.trim();
            u64::from_str_radix(row, 2)
                .map_err(|_| CliError::Input(format!("--parity-rows: \"{row}\" is not binary")))
        })
        .collect()
}
