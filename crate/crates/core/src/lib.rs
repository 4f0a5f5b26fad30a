//! Quantum and classical finite-state generators observed under periodic
//! measurement.
//!
//! A generator emits a symbol every time it is measured. Measuring only
//! every `p` time steps changes the stochastic language that is observed,
//! and for quantum machines it can change it a lot. This crate enumerates
//! those languages to a finite word length, pools equal languages across a
//! range of periods, and reports the *language diversity*: `log2` of the
//! number of distinct languages.
//!
//! ```
//! use langdiv::{catalog, diversity::{sweep, SweepConfig}, Machine};
//!
//! let machine = Machine::from(catalog::beam_splitter());
//! let report = sweep(&machine, &SweepConfig::default()).unwrap();
//! assert_eq!(report.class_count(), 3);
//! ```
//!
//! Modules:
//! - [`matrix`]: small dense real/complex matrices and structural predicates.
//! - [`machines`]: generator definitions, single steps, word probabilities,
//!   and the classical analog of a quantum generator.
//! - [`protocol`]: measured evolution at period `p` and language enumeration.
//! - [`languages`]: stochastic/formal languages, similarity, periods, keys.
//! - [`diversity`]: sweeps, diversity values, pseudo-periods and bounds.
//! - [`cli`]: machine files, reports and the command-line front end.

pub mod alphabet;
pub mod catalog;
pub mod cli;
pub mod diversity;
pub mod error;
pub mod languages;
pub mod machines;
pub mod matrix;
pub mod protocol;

pub use alphabet::{Alphabet, Word};
pub use error::{Error, Result};
pub use languages::{FormalLanguage, StochasticLanguage};
pub use machines::{ClassicalGenerator, Distribution, Machine, QuantumGenerator, QuantumState};
pub use matrix::{ComplexSquareMatrix, RealSquareMatrix, TolerancePolicy};
pub use protocol::{EnumerationConfig, InitialState, MeasurementProtocol};
