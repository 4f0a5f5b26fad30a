//! Classical and quantum finite-state generators.
//!
//! Both kinds use the row-vector convention: a state `⟨ψ|` evolves as
//! `⟨ψ| U P(y)`, so the symbol transition matrix of a quantum generator is
//! `U · P(y)`. Outcome projectors are diagonal 0/1 matrices determined by a
//! partition of the internal states, one block per symbol.

use num_complex::Complex64;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::matrix::{
    classify_real, unitarity_defect, validate_projector, ComplexSquareMatrix, RealSquareMatrix,
    Scalar, TolerancePolicy,
};

/// Normalized pure state `⟨ψ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// Normalizes `amplitudes` to unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("state has no components".into()));
        }
        if amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector cannot be normalized".into()));
        }
        Ok(QuantumState {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { amplitudes: v })
    }

    /// Equal-amplitude superposition of every basis state.
    pub fn uniform(dim: usize) -> Self {
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        QuantumState {
            amplitudes: vec![a; dim],
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Born-rule probabilities `|ψ_i|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Normalized probability distribution `⟨π|` over classical states.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probabilities: Vec<f64>,
}

impl Distribution {
    /// Normalizes `weights` to sum to one. Components must be non-negative.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidState("distribution has no components".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidState(format!("invalid weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            return Err(Error::InvalidState("all weights are zero".into()));
        }
        Ok(Distribution {
            probabilities: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut v = vec![0.0; dim];
        v[index] = 1.0;
        Ok(Distribution { probabilities: v })
    }

    pub fn uniform(dim: usize) -> Self {
        Distribution {
            probabilities: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn dim(&self) -> usize {
        self.probabilities.len()
    }
}

/// Result of one measured step: the outcome probability and, when that
/// probability exceeds the pruning threshold, the collapsed and renormalized
/// state.
#[derive(Debug, Clone, PartialEq)]
pub struct Step<S> {
    pub state: Option<S>,
    pub probability: f64,
}

/// Which outcome subspace each state belongs to, one block per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    owner: Vec<usize>,
}

impl Partition {
    /// Validates that `blocks` are disjoint, in range, and cover `0..dim`.
    pub fn new(blocks: Vec<Vec<usize>>, dim: usize, alphabet: &Alphabet) -> Result<Self> {
        if blocks.len() != alphabet.len() {
            return Err(Error::InvalidMachine(format!(
                "{} outcome subspaces for an alphabet of {} symbols",
                blocks.len(),
                alphabet.len()
            )));
        }
        let mut owner: Vec<Option<usize>> = vec![None; dim];
        for (y, block) in blocks.iter().enumerate() {
            for &index in block {
                if index >= dim {
                    return Err(Error::IndexOutOfRange { index, dim });
                }
                match owner[index] {
                    Some(prev) if prev != y => {
                        return Err(Error::OverlappingSubspaces {
                            index,
                            first: alphabet.symbol(prev).to_string(),
                            second: alphabet.symbol(y).to_string(),
                        })
                    }
                    _ => owner[index] = Some(y),
                }
            }
        }
        let owner = owner
            .into_iter()
            .enumerate()
            .map(|(i, o)| o.ok_or(Error::IncompleteCover(i)))
            .collect::<Result<Vec<_>>>()?;
        let blocks = (0..alphabet.len())
            .map(|y| (0..dim).filter(|&i| owner[i] == y).collect())
            .collect();
        Ok(Partition { blocks, owner })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Symbol whose subspace contains state `index`.
    pub fn owner(&self, index: usize) -> usize {
        self.owner[index]
    }

    pub fn dim(&self) -> usize {
        self.owner.len()
    }

    /// Zeroes every component of `v` outside the subspace of `symbol`,
    /// i.e. `v · P(symbol)` for a diagonal 0/1 projector.
    pub fn project<T: Scalar>(&self, v: &mut [T], symbol: usize) {
        for (x, &o) in v.iter_mut().zip(&self.owner) {
            if o != symbol {
                *x = T::zero();
            }
        }
    }

    pub fn projector<T: Scalar>(&self, symbol: usize) -> crate::matrix::SquareMatrix<T> {
        let diag: Vec<T> = self
            .owner
            .iter()
            .map(|&o| if o == symbol { T::one() } else { T::zero() })
            .collect();
        crate::matrix::SquareMatrix::diagonal(&diag)
    }
}

/// Diagonal projectors `P(y)` for a state partition given as
/// `(symbol, state indices)` pairs.
pub fn build_projectors(
    partition: &[(&str, Vec<usize>)],
    dim: usize,
) -> Result<Vec<(String, ComplexSquareMatrix)>> {
    let alphabet = Alphabet::new(partition.iter().map(|(s, _)| *s))?;
    let blocks = partition.iter().map(|(_, b)| b.clone()).collect();
    let partition = Partition::new(blocks, dim, &alphabet)?;
    Ok(alphabet
        .symbols()
        .iter()
        .enumerate()
        .map(|(y, s)| (s.clone(), partition.projector(y)))
        .collect())
}

fn default_state_names(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("q{i}")).collect()
}

fn check_state_names(states: &[String], dim: usize) -> Result<()> {
    if states.len() != dim {
        return Err(Error::InvalidMachine(format!(
            "{} state names for a {dim}-dimensional machine",
            states.len()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGenerator {
    states: Vec<String>,
    alphabet: Alphabet,
    unitary: ComplexSquareMatrix,
    partition: Partition,
}

impl QuantumGenerator {
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        unitary: ComplexSquareMatrix,
        blocks: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let tol = TolerancePolicy::default().structural;
        let dim = unitary.dim();
        check_state_names(&states, dim)?;
        if let Some(defect) = unitarity_defect(&unitary, tol) {
            return Err(Error::NotUnitary(defect));
        }
        let partition = Partition::new(blocks, dim, &alphabet)?;
        debug_assert!((0..alphabet.len())
            .all(|y| validate_projector(&partition.projector::<Complex64>(y), tol)));
        Ok(QuantumGenerator {
            states,
            alphabet,
            unitary,
            partition,
        })
    }

    /// Generator with states named `q0, q1, …`.
    pub fn with_default_states(
        alphabet: Alphabet,
        unitary: ComplexSquareMatrix,
        blocks: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let states = default_state_names(unitary.dim());
        Self::new(states, alphabet, unitary, blocks)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn unitary(&self) -> &ComplexSquareMatrix {
        &self.unitary
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    pub fn projector(&self, symbol: usize) -> ComplexSquareMatrix {
        self.partition.projector(symbol)
    }

    /// `U · P(y)`.
    pub fn transition_matrix(&self, symbol: usize) -> ComplexSquareMatrix {
        self.unitary.mul(&self.projector(symbol))
    }

    /// Same machine with `U` multiplied by a global phase `e^{iφ}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let mut q = self.clone();
        q.unitary = self.unitary.scale(Complex64::from_polar(1.0, phi));
        q
    }

    pub(crate) fn check_symbol(&self, symbol: usize) -> Result<()> {
        check_symbol(&self.alphabet, symbol)
    }
}

fn check_symbol(alphabet: &Alphabet, symbol: usize) -> Result<()> {
    if symbol >= alphabet.len() {
        return Err(Error::UnknownSymbol(format!("#{symbol}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalGenerator {
    states: Vec<String>,
    alphabet: Alphabet,
    symbol_matrices: Vec<RealSquareMatrix>,
    transition: RealSquareMatrix,
    partition: Option<Partition>,
}

impl ClassicalGenerator {
    /// Generator given directly by its symbol-labeled matrices `T(y)`.
    pub fn from_symbol_matrices(
        states: Vec<String>,
        alphabet: Alphabet,
        symbol_matrices: Vec<RealSquareMatrix>,
    ) -> Result<Self> {
        let tol = TolerancePolicy::default().structural;
        if symbol_matrices.len() != alphabet.len() {
            return Err(Error::InvalidMachine(format!(
                "{} symbol matrices for an alphabet of {} symbols",
                symbol_matrices.len(),
                alphabet.len()
            )));
        }
        let dim = symbol_matrices[0].dim();
        check_state_names(&states, dim)?;
        for (y, m) in symbol_matrices.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
            for (i, row) in m.rows().enumerate() {
                if let Some((j, v)) = row
                    .iter()
                    .enumerate()
                    .find(|(_, &v)| v < -tol || v > 1.0 + tol)
                {
                    return Err(Error::InvalidMachine(format!(
                        "entry ({i}, {j}) of T({}) is {v}, outside [0, 1]",
                        alphabet.symbol(y)
                    )));
                }
            }
        }
        let transition = symbol_matrices[1..]
            .iter()
            .fold(symbol_matrices[0].clone(), |acc, m| acc.add(m));
        for (i, row) in transition.rows().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::InvalidMachine(format!(
                    "row {i} of the symbol matrices sums to {sum}, expected 1"
                )));
            }
        }
        debug_assert!(classify_real(&transition, tol).stochastic);
        Ok(ClassicalGenerator {
            states,
            alphabet,
            symbol_matrices,
            transition,
            partition: None,
        })
    }

    /// Generator in factorized form `T(y) = T · P(y)`.
    pub fn from_factorization(
        states: Vec<String>,
        alphabet: Alphabet,
        transition: RealSquareMatrix,
        blocks: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let partition = Partition::new(blocks, transition.dim(), &alphabet)?;
        let symbol_matrices = (0..alphabet.len())
            .map(|y| transition.mul(&partition.projector(y)))
            .collect();
        let mut g = Self::from_symbol_matrices(states, alphabet, symbol_matrices)?;
        g.partition = Some(partition);
        Ok(g)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbol_matrix(&self, symbol: usize) -> &RealSquareMatrix {
        &self.symbol_matrices[symbol]
    }

    pub fn symbol_matrices(&self) -> &[RealSquareMatrix] {
        &self.symbol_matrices
    }

    /// State-to-state matrix `T = Σ_y T(y)`.
    pub fn transition(&self) -> &RealSquareMatrix {
        &self.transition
    }

    /// The outcome partition when the machine is in factorized form.
    pub fn partition(&self) -> Option<&Partition> {
        self.partition.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.transition.dim()
    }

    pub(crate) fn check_symbol(&self, symbol: usize) -> Result<()> {
        check_symbol(&self.alphabet, symbol)
    }
}

/// Either kind of generator.
#[derive(Debug, Clone, PartialEq)]
pub enum Machine {
    Quantum(QuantumGenerator),
    Classical(ClassicalGenerator),
}

impl Machine {
    pub fn dim(&self) -> usize {
        match self {
            Machine::Quantum(q) => q.dim(),
            Machine::Classical(g) => g.dim(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Machine::Quantum(q) => q.alphabet(),
            Machine::Classical(g) => g.alphabet(),
        }
    }

    pub fn states(&self) -> &[String] {
        match self {
            Machine::Quantum(q) => q.states(),
            Machine::Classical(g) => g.states(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Quantum(_) => "quantum",
            Machine::Classical(_) => "classical",
        }
    }

    pub fn is_deterministic(&self) -> bool {
        match self {
            Machine::Quantum(q) => is_deterministic_quantum(q),
            Machine::Classical(g) => is_deterministic_classical(g),
        }
    }
}

impl From<QuantumGenerator> for Machine {
    fn from(q: QuantumGenerator) -> Self {
        Machine::Quantum(q)
    }
}

impl From<ClassicalGenerator> for Machine {
    fn from(g: ClassicalGenerator) -> Self {
        Machine::Classical(g)
    }
}

fn at_most_one_per_row<T: Scalar>(m: &crate::matrix::SquareMatrix<T>, tol: f64) -> bool {
    m.rows()
        .all(|row| row.iter().filter(|x| x.norm_sqr().sqrt() > tol).count() <= 1)
}

pub fn is_deterministic_quantum(q: &QuantumGenerator) -> bool {
    let tol = TolerancePolicy::default().structural;
    (0..q.alphabet().len()).all(|y| at_most_one_per_row(&q.transition_matrix(y), tol))
}

pub fn is_deterministic_classical(g: &ClassicalGenerator) -> bool {
    let tol = TolerancePolicy::default().structural;
    g.symbol_matrices()
        .iter()
        .all(|m| at_most_one_per_row(m, tol))
}

/// Classical generator with `T_ij = |U_ij|²` and the same outcome projectors.
pub fn classical_analog(q: &QuantumGenerator) -> ClassicalGenerator {
    ClassicalGenerator::from_factorization(
        q.states().to_vec(),
        q.alphabet().clone(),
        q.unitary().modulus_squared(),
        q.partition().blocks().to_vec(),
    )
    .expect("squared moduli of a unitary form a doubly stochastic matrix")
}

/// One unmeasured-then-measured step `⟨ψ| U P(y)`.
pub fn step_quantum(
    q: &QuantumGenerator,
    psi: &QuantumState,
    symbol: usize,
) -> Result<Step<QuantumState>> {
    apply_and_measure(q.unitary(), q.partition(), psi, symbol, TolerancePolicy::default().prune)
}

pub(crate) fn apply_and_measure(
    evolution: &ComplexSquareMatrix,
    partition: &Partition,
    psi: &QuantumState,
    symbol: usize,
    prune: f64,
) -> Result<Step<QuantumState>> {
    if symbol >= partition.blocks().len() {
        return Err(Error::UnknownSymbol(format!("#{symbol}")));
    }
    let mut v = evolution.left_apply(psi.amplitudes())?;
    partition.project(&mut v, symbol);
    let probability: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    let state = if probability > prune {
        let norm = probability.sqrt();
        Some(QuantumState {
            amplitudes: v.into_iter().map(|a| a / norm).collect(),
        })
    } else {
        None
    };
    Ok(Step { state, probability })
}

/// `‖ψ0 · Π (U P(y_i))‖²`, without intermediate renormalization.
pub fn word_probability_quantum(q: &QuantumGenerator, psi0: &QuantumState, word: &Word) -> Result<f64> {
    if psi0.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            found: psi0.dim(),
        });
    }
    let mut v = psi0.amplitudes().to_vec();
    for &y in word.symbols() {
        q.check_symbol(y)?;
        v = q.unitary().left_apply(&v)?;
        q.partition().project(&mut v, y);
    }
    Ok(v.iter().map(|a| a.norm_sqr()).sum())
}

/// `⟨π0| Π T(y_i) |η⟩` with every state accepting.
pub fn word_probability_classical(
    g: &ClassicalGenerator,
    pi0: &Distribution,
    word: &Word,
) -> Result<f64> {
    if pi0.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: pi0.dim(),
        });
    }
    let mut v = pi0.probabilities().to_vec();
    for &y in word.symbols() {
        g.check_symbol(y)?;
        v = g.symbol_matrix(y).left_apply(&v)?;
    }
    Ok(v.iter().sum())
}
