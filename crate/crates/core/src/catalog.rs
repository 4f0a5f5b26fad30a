//! Built-in example machines.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::machines::{classical_analog, ClassicalGenerator, Machine, QuantumGenerator};
use crate::matrix::{ComplexSquareMatrix, RealSquareMatrix};

/// The three binary period-5 templates distinct up to rotation and 0↔1.
pub const PERIOD5_TEMPLATES: [&str; 3] = ["10000", "11000", "10101"];

/// Default phase parameter of the kicked top.
pub const DEFAULT_KICK_PHASE: f64 = 0.5;

/// Target state of each row of the period-5 permutation.
const PERIOD5_TARGETS: [usize; 5] = [2, 3, 1, 4, 0];

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 6] = [
    "beam-splitter",
    "kicked-top",
    "period5-10000",
    "period5-11000",
    "period5-10101",
    "fair-coin-1state",
];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn two_state_names() -> Vec<String> {
    vec!["upper".into(), "lower".into()]
}

/// Photon in a loop of beam splitters: Hadamard evolution, complete
/// measurement of the path.
pub fn beam_splitter() -> QuantumGenerator {
    let u = ComplexSquareMatrix::from_rows(vec![
        vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)],
        vec![c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)],
    ])
    .unwrap();
    QuantumGenerator::new(two_state_names(), Alphabet::binary(), u, vec![vec![0], vec![1]]).unwrap()
}

/// Spin-1/2 kicked top, `U = R · e^{-ik} I` with `R` a quarter-turn rotation.
pub fn kicked_top(phase: f64) -> QuantumGenerator {
    let rotation = ComplexSquareMatrix::from_rows(vec![
        vec![c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)],
        vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)],
    ])
    .unwrap();
    let kick = Complex64::from_polar(1.0, -phase);
    let u = rotation.mul(&ComplexSquareMatrix::diagonal(&[kick, kick]));
    QuantumGenerator::new(
        vec!["up".into(), "down".into()],
        Alphabet::binary(),
        u,
        vec![vec![0], vec![1]],
    )
    .unwrap()
}

/// The period-5 permutation shared by all period-5 processes.
pub fn period5_permutation() -> ComplexSquareMatrix {
    let mut m = ComplexSquareMatrix::zeros(5);
    for (i, &j) in PERIOD5_TARGETS.iter().enumerate() {
        m[(i, j)] = c(1.0);
    }
    m
}

/// Period-5 process emitting `template` repeatedly from state 0.
///
/// Starting in state 0 the permutation visits states 2, 1, 3, 4, 0; the
/// k-th visited state is assigned the k-th template symbol.
pub fn period5_from_template(template: &str) -> Result<QuantumGenerator> {
    let bits: Vec<char> = template.chars().collect();
    if bits.len() != 5 || bits.iter().any(|&b| b != '0' && b != '1') {
        return Err(Error::InvalidMachine(format!(
            "period-5 template must be five binary digits, got `{template}`"
        )));
    }
    let mut blocks = vec![Vec::new(), Vec::new()];
    let mut state = 0;
    for &b in &bits {
        state = PERIOD5_TARGETS[state];
        blocks[(b == '1') as usize].push(state);
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    QuantumGenerator::with_default_states(Alphabet::binary(), period5_permutation(), blocks)
}

/// Built-in period-5 machine; panics on a malformed template.
pub fn period5(template: &str) -> QuantumGenerator {
    period5_from_template(template).expect("valid period-5 template")
}

/// One-state fair coin, `T(0) = T(1) = (1/2)`.
pub fn fair_coin_one_state() -> ClassicalGenerator {
    let half = RealSquareMatrix::from_rows(vec![vec![0.5]]).unwrap();
    ClassicalGenerator::from_symbol_matrices(vec!["s".into()], Alphabet::binary(), vec![half.clone(), half])
        .unwrap()
}

/// Looks up a built-in by name. `phase` applies to the kicked top; `analog`
/// requests the classical analog of a quantum built-in.
pub fn by_name(name: &str, phase: f64, analog: bool) -> Result<Machine> {
    let quantum = match name {
        "beam-splitter" => beam_splitter(),
        "kicked-top" => kicked_top(phase),
        "fair-coin-1state" => {
            if analog {
                return Err(Error::InvalidConfig(
                    "`fair-coin-1state` is already classical".into(),
                ));
            }
            return Ok(Machine::Classical(fair_coin_one_state()));
        }
        other => match other.strip_prefix("period5-") {
            Some(t) if PERIOD5_TEMPLATES.contains(&t) => period5(t),
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "unknown built-in `{name}`; expected one of {}",
                    NAMES.join(", ")
                )))
            }
        },
    };
    Ok(if analog {
        Machine::Classical(classical_analog(&quantum))
    } else {
        Machine::Quantum(quantum)
    })
}
