//! The JSON problem-file format and its validation.
//!
//! A problem file carries a joint distribution as sparse `(symbols,
//! probability)` entries (omitted cells are zero), optionally one or more
//! function tables, optional default computing/secrecy sets, and an optional
//! side-information assignment for aided-key problems:
//!
//! ```json
//! {
//!   "alphabets": [["0", "1"], ["0", "1"]],
//!   "pmf": [
//!     {"x": ["0", "0"], "p": 0.45},
//!     {"x": ["1", "1"], "p": 0.45},
//!     {"x": ["0", "1"], "p": 0.05},
//!     {"x": ["1", "0"], "p": 0.05}
//!   ],
//!   "function": {
//!     "outputs": ["0", "1"],
//!     "table": [
//!       {"x": ["0", "0"], "y": "0"}, {"x": ["0", "1"], "y": "1"},
//!       {"x": ["1", "0"], "y": "1"}, {"x": ["1", "1"], "y": "0"}
//!     ]
//!   },
//!   "computing_set": [1, 2]
//! }
//! ```
//!
//! `functions` names several tables at once; `terminals` caps how many
//! leading variables are terminals (the rest may only serve as side
//! information referenced by `side_info`). Terminal indices are 1-based
//! everywhere.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use omnicap_core::capacity::{SideInfo, SideInformation};
use omnicap_core::dist::{FunctionSpec, JointDistribution, TerminalSubset};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawEntry {
    pub x: Vec<String>,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCell {
    pub x: Vec<String>,
    pub y: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawFunction {
    pub outputs: Vec<String>,
    pub table: Vec<RawCell>,
}

/// The problem file exactly as serialized.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawProblem {
    pub alphabets: Vec<Vec<String>>,
    pub pmf: Vec<RawEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<RawFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<BTreeMap<String, RawFunction>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub computing_set: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secrecy_set: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminals: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_info: Option<BTreeMap<String, Option<usize>>>,
}

/// A parsed and fully validated problem.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub dist: JointDistribution,
    /// Named function tables; a bare `function` entry is named `"function"`.
    pub functions: BTreeMap<String, FunctionSpec>,
    pub computing_set: Option<TerminalSubset>,
    pub secrecy_set: Option<TerminalSubset>,
    /// Leading variables that are terminals; the rest are side-information
    /// variables.
    pub terminal_count: usize,
    /// Recovery-only side information per terminal, when given.
    pub side_info: Option<SideInformation>,
}

impl ProblemFile {
    /// The function selected by `--function`, or the only one in the file.
    pub fn select_function(&self, name: Option<&str>) -> CliResult<&FunctionSpec> {
        match name {
            Some(name) => self.functions.get(name).ok_or_else(|| {
                CliError::Input(format!(
                    "function \"{name}\" not in the file; available: {}",
                    self.functions.keys().cloned().collect::<Vec<_>>().join(", ")
                ))
            }),
            None => {
                if self.functions.len() == 1 {
                    Ok(self.functions.values().next().unwrap())
                } else if self.functions.is_empty() {
                    Err(CliError::Input("the file carries no function table".into()))
                } else {
                    Err(CliError::Input(format!(
                        "several functions in the file; pick one with --function ({})",
                        self.functions.keys().cloned().collect::<Vec<_>>().join(", ")
                    )))
                }
            }
        }
    }

    /// Errors out when the file carries side-information variables, which
    /// only aided-key queries understand.
    pub fn require_pure_terminals(&self, command: &str) -> CliResult<()> {
        if self.terminal_count != self.dist.variable_count() {
            return Err(CliError::Input(format!(
                "{command} expects every variable to be a terminal; this file marks only {} of {} as terminals",
                self.terminal_count,
                self.dist.variable_count()
            )));
        }
        Ok(())
    }
}

pub fn parse_problem(path: &Path) -> CliResult<ProblemFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let raw: RawProblem = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: malformed JSON: {e}", path.display())))?;
    validate_problem(raw)
}

pub fn validate_problem(raw: RawProblem) -> CliResult<ProblemFile> {
    let symbol_index: Vec<BTreeMap<&str, usize>> = raw
        .alphabets
        .iter()
        .map(|a| {
            a.iter()
                .enumerate()
                .map(|(i, s)| (s.as_str(), i))
                .collect()
        })
        .collect();
    for (v, (alphabet, index)) in raw.alphabets.iter().zip(&symbol_index).enumerate() {
        if index.len() != alphabet.len() {
            return Err(CliError::Input(format!(
                "alphabets[{v}]: duplicate symbols"
            )));
        }
    }

    let m_vars = raw.alphabets.len();
    let coords_of = |entry: &[String], field: &str| -> CliResult<Vec<usize>> {
        if entry.len() != m_vars {
            return Err(CliError::Input(format!(
                "{field}: expected {m_vars} symbols, got {}",
                entry.len()
            )));
        }
        entry
            .iter()
            .enumerate()
            .map(|(v, s)| {
                symbol_index[v].get(s.as_str()).copied().ok_or_else(|| {
                    CliError::Input(format!(
                        "{field}: unknown symbol \"{s}\" for variable {}",
                        v + 1
                    ))
                })
            })
            .collect()
    };

    let mut entries = Vec::with_capacity(raw.pmf.len());
    for (i, e) in raw.pmf.iter().enumerate() {
        entries.push((coords_of(&e.x, &format!("pmf[{i}].x"))?, e.p));
    }
    let dist = JointDistribution::from_entries(raw.alphabets.clone(), &entries)
        .map_err(CliError::from)?;

    let mut functions = BTreeMap::new();
    let mut named: Vec<(String, RawFunction)> = Vec::new();
    if let Some(f) = raw.function {
        named.push(("function".to_string(), f));
    }
    if let Some(map) = raw.functions {
        for (name, f) in map {
            if name == "function" || named.iter().any(|(n, _)| *n == name) {
                return Err(CliError::Input(format!("functions: duplicate name \"{name}\"")));
            }
            named.push((name, f));
        }
    }
    for (name, f) in named {
        let field = format!("functions.{name}");
        let out_index: BTreeMap<&str, usize> = f
            .outputs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if out_index.len() != f.outputs.len() {
            return Err(CliError::Input(format!("{field}.outputs: duplicate symbols")));
        }
        let mut table: Vec<Option<usize>> = vec![None; dist.cell_count()];
        for (i, cell) in f.table.iter().enumerate() {
            let coords = coords_of(&cell.x, &format!("{field}.table[{i}].x"))?;
            let y = out_index.get(cell.y.as_str()).copied().ok_or_else(|| {
                CliError::Input(format!(
                    "{field}.table[{i}].y: \"{}\" is not in outputs",
                    cell.y
                ))
            })?;
            let idx = dist.encode_cell(&coords);
            if table[idx].is_some() {
                return Err(CliError::Input(format!(
                    "{field}.table[{i}]: duplicate entry for {:?}",
                    cell.x
                )));
            }
            table[idx] = Some(y);
        }
        let table: Vec<usize> = table
            .into_iter()
            .enumerate()
            .map(|(cell, y)| {
                y.ok_or_else(|| {
                    let mut coords = vec![0usize; m_vars];
                    dist.decode_cell(cell, &mut coords);
                    let symbols: Vec<&str> = coords
                        .iter()
                        .enumerate()
                        .map(|(v, &c)| raw.alphabets[v][c].as_str())
                        .collect();
                    CliError::Input(format!(
                        "{field}.table: missing entry for cell {symbols:?} (tables must be total)"
                    ))
                })
            })
            .collect::<CliResult<_>>()?;
        functions.insert(
            name,
            FunctionSpec::new(f.outputs, table).map_err(CliError::from)?,
        );
    }

    let terminal_count = raw.terminals.unwrap_or(m_vars);
    if terminal_count < 2 || terminal_count > m_vars {
        return Err(CliError::Input(format!(
            "terminals: must be between 2 and the variable count {m_vars}"
        )));
    }

    let parse_set = |name: &str, set: &[usize]| -> CliResult<TerminalSubset> {
        let sub = TerminalSubset::new(set.iter().copied())
            .map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        if sub.is_empty() || sub.iter().any(|i| i > terminal_count) {
            return Err(CliError::Input(format!(
                "{name}: indices must be 1..={terminal_count} and nonempty"
            )));
        }
        Ok(sub)
    };
    let computing_set = raw
        .computing_set
        .as_deref()
        .map(|s| parse_set("computing_set", s))
        .transpose()?;
    let secrecy_set = raw
        .secrecy_set
        .as_deref()
        .map(|s| parse_set("secrecy_set", s))
        .transpose()?;

    let side_info = raw
        .side_info
        .map(|map| -> CliResult<SideInformation> {
            let mut assignments = BTreeMap::new();
            for (key, value) in map {
                let terminal: usize = key.parse().map_err(|_| {
                    CliError::Input(format!("side_info: key \"{key}\" is not a terminal index"))
                })?;
                if terminal == 0 || terminal > terminal_count {
                    return Err(CliError::Input(format!(
                        "side_info: terminal {terminal} out of range 1..={terminal_count}"
                    )));
                }
                let info = match value {
                    None => SideInfo::Constant,
                    Some(v) => {
                        if v == 0 || v > m_vars {
                            return Err(CliError::Input(format!(
                                "side_info.{terminal}: variable {v} out of range 1..={m_vars}"
                            )));
                        }
                        SideInfo::Variable(v)
                    }
                };
                assignments.insert(terminal, info);
            }
            Ok(SideInformation { assignments, function_variable: None })
        })
        .transpose()?;

    Ok(ProblemFile {
        dist,
        functions,
        computing_set,
        secrecy_set,
        terminal_count,
        side_info,
    })
}
