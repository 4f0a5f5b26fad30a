//! Periodic measurement protocols and language enumeration.
//!
//! With period `p` the machine evolves `p` times between measurements and
//! the first measurement happens after the first `p` steps. Unmeasured steps
//! emit nothing, so every measurement contributes exactly one symbol.
//!
//! Quantum: `⟨ψ'| ∝ ⟨ψ| U^p P(y)`. Classical: `⟨π'| ∝ ⟨π| T^{p-1} T(y)`,
//! which equals `⟨π| T^p P(y)` for factorized machines.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::alphabet::Word;
use crate::error::{Error, Result};
use crate::languages::StochasticLanguage;
use crate::machines::{
    apply_and_measure, ClassicalGenerator, Distribution, Machine, Partition, QuantumGenerator,
    QuantumState, Step,
};
use crate::matrix::{ComplexSquareMatrix, RealSquareMatrix, TolerancePolicy};

/// Initial condition of an enumeration.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Computational basis state `i`.
    Basis(usize),
    /// Uniform superposition (quantum) or uniform distribution (classical).
    Uniform,
    /// Explicit quantum amplitudes; normalized on use.
    Amplitudes(Vec<Complex64>),
    /// Weights over basis states. For classical machines this is `⟨π0|`;
    /// for quantum machines it is the incoherent ensemble of basis states,
    /// whose language is the weighted mixture of the basis-state languages.
    Distribution(Vec<f64>),
}

impl InitialState {
    /// Uniform incoherent ensemble over `members` of a `dim`-state machine.
    pub fn mixture_of(members: &[usize], dim: usize) -> Self {
        let mut w = vec![0.0; dim];
        for &i in members {
            w[i] = 1.0;
        }
        InitialState::Distribution(w)
    }

    /// Parses `basis:<i>`, `uniform` or `mixture:<i>,<j>,…`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("unrecognized initial state `{text}`"));
        if text == "uniform" {
            return Ok(InitialState::Uniform);
        }
        if let Some(i) = text.strip_prefix("basis:") {
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            return Ok(InitialState::Basis(i));
        }
        if let Some(list) = text.strip_prefix("mixture:") {
            let members = list
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            if let Some(&index) = members.iter().find(|&&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index, dim });
            }
            return Ok(InitialState::mixture_of(&members, dim));
        }
        Err(bad())
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Basis(i) => write!(f, "basis:{i}"),
            InitialState::Uniform => write!(f, "uniform"),
            InitialState::Amplitudes(_) => write!(f, "explicit"),
            InitialState::Distribution(w) => {
                let support: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
                let first = support.first().map(|&i| w[i]);
                if support.iter().all(|&i| Some(w[i]) == first) {
                    let list: Vec<String> = support.iter().map(|i| i.to_string()).collect();
                    write!(f, "mixture:{}", list.join(","))
                } else {
                    write!(f, "distribution:{w:?}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementProtocol {
    period: usize,
    initial: InitialState,
}

impl MeasurementProtocol {
    pub fn new(period: usize, initial: InitialState) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidConfig("measurement period must be at least 1".into()));
        }
        Ok(MeasurementProtocol { period, initial })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn initial(&self) -> &InitialState {
        &self.initial
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationConfig {
    pub max_length: usize,
    pub prune_threshold: f64,
}

impl EnumerationConfig {
    pub fn new(max_length: usize) -> Self {
        EnumerationConfig {
            max_length,
            prune_threshold: TolerancePolicy::default().prune,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_length == 0 {
            return Err(Error::InvalidConfig("max length must be at least 1".into()));
        }
        if !(self.prune_threshold > 0.0 && self.prune_threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "prune threshold must lie in (0, 1), got {}",
                self.prune_threshold
            )));
        }
        Ok(())
    }
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self::new(8)
    }
}

fn check_period(period: usize) -> Result<()> {
    if period == 0 {
        return Err(Error::InvalidConfig("measurement period must be at least 1".into()));
    }
    Ok(())
}

/// `⟨ψ| U^p P(y)`, renormalized when the outcome is possible.
pub fn measured_step_quantum(
    q: &QuantumGenerator,
    psi: &QuantumState,
    period: usize,
    symbol: usize,
) -> Result<Step<QuantumState>> {
    check_period(period)?;
    q.check_symbol(symbol)?;
    let evolution = q.unitary().pow(period as u64);
    apply_and_measure(&evolution, q.partition(), psi, symbol, TolerancePolicy::default().prune)
}

/// `⟨π| T^{p-1} T(y)`, renormalized when the outcome is possible.
pub fn measured_step_classical(
    g: &ClassicalGenerator,
    pi: &Distribution,
    period: usize,
    symbol: usize,
) -> Result<Step<Distribution>> {
    check_period(period)?;
    g.check_symbol(symbol)?;
    let m = classical_period_matrix(g, period, symbol);
    classical_step(&m, pi, TolerancePolicy::default().prune)
}

fn classical_period_matrix(g: &ClassicalGenerator, period: usize, symbol: usize) -> RealSquareMatrix {
    g.transition()
        .pow(period as u64 - 1)
        .mul(g.symbol_matrix(symbol))
}

fn classical_step(m: &RealSquareMatrix, pi: &Distribution, prune: f64) -> Result<Step<Distribution>> {
    let v = m.left_apply(pi.probabilities())?;
    let probability: f64 = v.iter().sum();
    let state = if probability > prune {
        Some(Distribution::new(v)?)
    } else {
        None
    };
    Ok(Step { state, probability })
}

/// Breadth-first walk of the outcome tree, keeping every word of length
/// `1..=max_length` whose probability exceeds the pruning threshold.
pub fn enumerate_language(
    machine: &Machine,
    protocol: &MeasurementProtocol,
    cfg: &EnumerationConfig,
) -> Result<StochasticLanguage> {
    cfg.validate()?;
    match machine {
        Machine::Quantum(q) => enumerate_quantum(q, protocol, cfg),
        Machine::Classical(g) => enumerate_classical(g, protocol, cfg),
    }
}

fn enumerate_quantum(
    q: &QuantumGenerator,
    protocol: &MeasurementProtocol,
    cfg: &EnumerationConfig,
) -> Result<StochasticLanguage> {
    let evolution = q.unitary().pow(protocol.period() as u64);
    let dim = q.dim();
    let start = match protocol.initial() {
        InitialState::Basis(i) => QuantumState::basis(dim, *i)?,
        InitialState::Uniform => QuantumState::uniform(dim),
        InitialState::Amplitudes(a) => {
            if a.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
            QuantumState::new(a.clone())?
        }
        InitialState::Distribution(w) => {
            let weights = Distribution::new(check_len(w.clone(), dim)?)?;
            let parts = weights
                .probabilities()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(i, &p)| {
                    let psi = QuantumState::basis(dim, i)?;
                    let words = walk_quantum(&evolution, q.partition(), psi, cfg)?;
                    let lang = StochasticLanguage::new(q.alphabet().clone(), cfg.max_length, words)?;
                    Ok((p, lang))
                })
                .collect::<Result<Vec<_>>>()?;
            return StochasticLanguage::mixture(&parts, cfg.prune_threshold);
        }
    };
    let words = walk_quantum(&evolution, q.partition(), start, cfg)?;
    StochasticLanguage::new(q.alphabet().clone(), cfg.max_length, words)
}

fn check_len(w: Vec<f64>, dim: usize) -> Result<Vec<f64>> {
    if w.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: w.len(),
        });
    }
    Ok(w)
}

fn walk_quantum(
    evolution: &ComplexSquareMatrix,
    partition: &Partition,
    start: QuantumState,
    cfg: &EnumerationConfig,
) -> Result<BTreeMap<Word, f64>> {
    let symbols = partition.blocks().len();
    walk(start, cfg, symbols, |psi, y| {
        apply_and_measure(evolution, partition, psi, y, cfg.prune_threshold)
    })
}

fn enumerate_classical(
    g: &ClassicalGenerator,
    protocol: &MeasurementProtocol,
    cfg: &EnumerationConfig,
) -> Result<StochasticLanguage> {
    let dim = g.dim();
    let start = match protocol.initial() {
        InitialState::Basis(i) => Distribution::basis(dim, *i)?,
        InitialState::Uniform => Distribution::uniform(dim),
        InitialState::Distribution(w) => Distribution::new(check_len(w.clone(), dim)?)?,
        InitialState::Amplitudes(_) => {
            return Err(Error::KindMismatch("an amplitude initial state"))
        }
    };
    let matrices: Vec<RealSquareMatrix> = (0..g.alphabet().len())
        .map(|y| classical_period_matrix(g, protocol.period(), y))
        .collect();
    let words = walk(start, cfg, matrices.len(), |pi, y| {
        classical_step(&matrices[y], pi, cfg.prune_threshold)
    })?;
    StochasticLanguage::new(g.alphabet().clone(), cfg.max_length, words)
}

fn walk<S>(
    start: S,
    cfg: &EnumerationConfig,
    symbols: usize,
    step: impl Fn(&S, usize) -> Result<Step<S>>,
) -> Result<BTreeMap<Word, f64>> {
    let mut words = BTreeMap::new();
    let mut frontier = vec![(Word::empty(), start, 1.0)];
    for _ in 0..cfg.max_length {
        let mut next = Vec::with_capacity(frontier.len() * symbols);
        for (word, state, prob) in &frontier {
            for y in 0..symbols {
                let outcome = step(state, y)?;
                let p = prob * outcome.probability;
                if let (Some(s), true) = (outcome.state, p > cfg.prune_threshold) {
                    let w = word.extended(y);
                    words.insert(w.clone(), p);
                    next.push((w, s, p));
                }
            }
        }
        frontier = next;
    }
    Ok(words)
}
