//! JSON machine definition files.
//!
//! ```json
//! {
//!   "kind": "quantum",
//!   "states": ["upper", "lower"],
//!   "alphabet": ["0", "1"],
//!   "unitary": [[{"re": 0.7071067811865476, "im": 0.0}, …], …],
//!   "projectors": {"0": [0], "1": [1]}
//! }
//! ```
//!
//! Classical files carry either `"symbol_matrices"` (symbol → real matrix)
//! or `"transition"` plus `"projectors"`. Matrices are row-major.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::alphabet::Alphabet;
use crate::machines::{ClassicalGenerator, Machine, QuantumGenerator};
use crate::matrix::{ComplexSquareMatrix, RealSquareMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexEntry {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MachineFile {
    Quantum {
        states: Vec<String>,
        alphabet: Vec<String>,
        unitary: Vec<Vec<ComplexEntry>>,
        projectors: BTreeMap<String, Vec<usize>>,
    },
    Classical {
        states: Vec<String>,
        alphabet: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol_matrices: Option<BTreeMap<String, Vec<Vec<f64>>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        transition: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        projectors: Option<BTreeMap<String, Vec<usize>>>,
    },
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Reorders a symbol-keyed map into alphabet order, rejecting missing or
/// extra symbols.
fn by_symbol<T: Clone>(map: &BTreeMap<String, T>, alphabet: &Alphabet, field: &str) -> Result<Vec<T>, CliError> {
    if let Some(extra) = map.keys().find(|k| alphabet.index_of(k).is_err()) {
        return Err(invalid(format!("{field}: symbol `{extra}` is not in the alphabet")));
    }
    alphabet
        .symbols()
        .iter()
        .map(|s| {
            map.get(s)
                .cloned()
                .ok_or_else(|| invalid(format!("{field}: no entry for symbol `{s}`")))
        })
        .collect()
}

fn real_matrix(rows: Vec<Vec<f64>>, field: &str) -> Result<RealSquareMatrix, CliError> {
    RealSquareMatrix::from_rows(rows).map_err(|e| invalid(format!("{field}: {e}")))
}

impl MachineFile {
    pub fn into_machine(self) -> Result<Machine, CliError> {
        match self {
            MachineFile::Quantum {
                states,
                alphabet,
                unitary,
                projectors,
            } => {
                let alphabet = Alphabet::new(alphabet).map_err(|e| invalid(format!("alphabet: {e}")))?;
                let rows = unitary
                    .into_iter()
                    .map(|r| r.into_iter().map(|z| Complex64::new(z.re, z.im)).collect())
                    .collect();
                let u = ComplexSquareMatrix::from_rows(rows).map_err(|e| invalid(format!("unitary: {e}")))?;
                let blocks = by_symbol(&projectors, &alphabet, "projectors")?;
                QuantumGenerator::new(states, alphabet, u, blocks)
                    .map(Machine::Quantum)
                    .map_err(|e| invalid(e.to_string()))
            }
            MachineFile::Classical {
                states,
                alphabet,
                symbol_matrices,
                transition,
                projectors,
            } => {
                let alphabet = Alphabet::new(alphabet).map_err(|e| invalid(format!("alphabet: {e}")))?;
                let g = match (symbol_matrices, transition, projectors) {
                    (Some(ms), None, None) => {
                        let ms = by_symbol(&ms, &alphabet, "symbol_matrices")?
                            .into_iter()
                            .map(|m| real_matrix(m, "symbol_matrices"))
                            .collect::<Result<Vec<_>, _>>()?;
                        ClassicalGenerator::from_symbol_matrices(states, alphabet, ms)
                    }
                    (None, Some(t), Some(p)) => {
                        let t = real_matrix(t, "transition")?;
                        let blocks = by_symbol(&p, &alphabet, "projectors")?;
                        ClassicalGenerator::from_factorization(states, alphabet, t, blocks)
                    }
                    _ => {
                        return Err(invalid(
                            "classical machines need either `symbol_matrices` or both \
                             `transition` and `projectors`",
                        ))
                    }
                };
                g.map(Machine::Classical).map_err(|e| invalid(e.to_string()))
            }
        }
    }

    pub fn from_machine(machine: &Machine) -> Self {
        let symbols = machine.alphabet().symbols().to_vec();
        let keyed = |blocks: &[Vec<usize>]| -> BTreeMap<String, Vec<usize>> {
            symbols.iter().cloned().zip(blocks.iter().cloned()).collect()
        };
        let rows = |m: &RealSquareMatrix| -> Vec<Vec<f64>> { m.rows().map(<[f64]>::to_vec).collect() };
        match machine {
            Machine::Quantum(q) => MachineFile::Quantum {
                states: q.states().to_vec(),
                alphabet: symbols.clone(),
                unitary: q
                    .unitary()
                    .rows()
                    .map(|r| r.iter().map(|z| ComplexEntry { re: z.re, im: z.im }).collect())
                    .collect(),
                projectors: keyed(q.partition().blocks()),
            },
            Machine::Classical(g) => match g.partition() {
                Some(p) => MachineFile::Classical {
                    states: g.states().to_vec(),
                    alphabet: symbols.clone(),
                    symbol_matrices: None,
                    transition: Some(rows(g.transition())),
                    projectors: Some(keyed(p.blocks())),
                },
                None => MachineFile::Classical {
                    states: g.states().to_vec(),
                    alphabet: symbols.clone(),
                    symbol_matrices: Some(
                        symbols
                            .iter()
                            .cloned()
                            .zip(g.symbol_matrices().iter().map(rows))
                            .collect(),
                    ),
                    transition: None,
                    projectors: None,
                },
            },
        }
    }
}

/// Parses and validates a machine definition.
pub fn parse_machine(text: &str) -> Result<Machine, CliError> {
    let file: MachineFile = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_machine()
}

pub fn serialize_machine(machine: &Machine) -> String {
    let mut s = serde_json::to_string_pretty(&MachineFile::from_machine(machine))
        .expect("machine files always serialize");
    s.push('\n');
    s
}
