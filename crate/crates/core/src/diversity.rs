//! Language diversity sweeps.
//!
//! A sweep enumerates the language generated at every measurement period in
//! a range, for every initial state of an ensemble, and pools the results
//! into classes of equal languages. The diversity is `log2` of the number of
//! classes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::languages::{
    canonical_key, delta_similar, support, FormalLanguage, LanguageKey, StochasticLanguage,
};
use crate::machines::Machine;
use crate::matrix::{validate_unitary, ComplexSquareMatrix, RealSquareMatrix, TolerancePolicy};
use crate::protocol::{enumerate_language, EnumerationConfig, InitialState, MeasurementProtocol};

/// Which initial states a sweep visits at each period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ensemble {
    /// Every computational basis state.
    Basis,
    /// The uniform superposition (quantum) or distribution (classical).
    Uniform,
    /// `Basis` followed by `Uniform`.
    BasisAndUniform,
    /// The uniform incoherent ensemble over all states, split into one
    /// ensemble per closed communicating class whenever the period-`p`
    /// transition graph has more than one.
    Components,
}

impl Ensemble {
    pub const ALL: [Ensemble; 4] = [
        Ensemble::Basis,
        Ensemble::Uniform,
        Ensemble::BasisAndUniform,
        Ensemble::Components,
    ];
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ensemble::Basis => "basis",
            Ensemble::Uniform => "uniform",
            Ensemble::BasisAndUniform => "basis+uniform",
            Ensemble::Components => "components",
        })
    }
}

impl FromStr for Ensemble {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basis" => Ok(Ensemble::Basis),
            "uniform" => Ok(Ensemble::Uniform),
            "basis+uniform" | "basis_and_uniform" => Ok(Ensemble::BasisAndUniform),
            "components" => Ok(Ensemble::Components),
            _ => Err(Error::InvalidConfig(format!("unknown ensemble `{s}`"))),
        }
    }
}

/// How languages are pooled into classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dedup {
    /// Equality of [`canonical_key`]s.
    CanonicalKey,
    /// First existing class whose representative is δ-similar.
    DeltaSimilar(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub first_period: usize,
    pub last_period: usize,
    pub ensemble: Ensemble,
    pub max_length: usize,
    pub dedup: Dedup,
    pub prune_threshold: f64,
    pub max_pseudo_period: usize,
    pub pseudo_period_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let tol = TolerancePolicy::default();
        SweepConfig {
            first_period: 1,
            last_period: 20,
            ensemble: Ensemble::Basis,
            max_length: 8,
            dedup: Dedup::CanonicalKey,
            prune_threshold: tol.prune,
            max_pseudo_period: 64,
            pseudo_period_tol: 1e-9,
        }
    }
}

impl SweepConfig {
    pub fn with_ensemble(ensemble: Ensemble) -> Self {
        SweepConfig {
            ensemble,
            ..Default::default()
        }
    }

    pub fn periods(&self) -> std::ops::RangeInclusive<usize> {
        self.first_period..=self.last_period
    }
}

/// One enumerated (period, initial state) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub period: usize,
    pub initial: InitialState,
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanguageClass {
    pub key: LanguageKey,
    pub language: StochasticLanguage,
    /// Period and initial state that first produced the class.
    pub first_period: usize,
    pub first_initial: InitialState,
    /// Every period at which some initial state produced the class.
    pub periods: Vec<usize>,
    /// Index into [`DiversityReport::supports`].
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Strictly periodic evolution with period `N`.
    Periodic(usize),
    /// Evolution returning to the identity up to phase after `k` steps.
    Pseudo(usize),
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Periodic(n) => write!(f, "periodic(N={n})"),
            BoundKind::Pseudo(k) => write!(f, "pseudo-periodic(k={k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub kind: BoundKind,
    pub value: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    pub config: SweepConfig,
    pub entries: Vec<SweepEntry>,
    pub classes: Vec<LanguageClass>,
    pub supports: Vec<FormalLanguage>,
    pub stochastic_diversity: f64,
    pub formal_diversity: f64,
    pub pseudo_period: Option<usize>,
    pub bounds: Vec<BoundCheck>,
    pub warnings: Vec<String>,
}

impl DiversityReport {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn support_count(&self) -> usize {
        self.supports.len()
    }
}

pub fn language_diversity(report: &DiversityReport) -> f64 {
    (report.classes.len() as f64).log2()
}

pub fn formal_diversity(report: &DiversityReport) -> f64 {
    (report.supports.len() as f64).log2()
}

/// `log2(|Y| + m(m-1))` for period or pseudo-period `m`.
pub fn diversity_bound(kind: BoundKind, alphabet_size: usize) -> f64 {
    let m = match kind {
        BoundKind::Periodic(n) | BoundKind::Pseudo(n) => n as f64,
    };
    (alphabet_size as f64 + m * (m - 1.0)).log2()
}

/// Smallest `k ≤ k_max` with `U^k` within `tol` of `e^{iφ} I`, the phase
/// taken from the largest diagonal entry of `U^k`.
pub fn pseudo_period(u: &ComplexSquareMatrix, k_max: usize, tol: f64) -> Result<Option<usize>> {
    if !validate_unitary(u, TolerancePolicy::default().structural) {
        return Err(Error::NotUnitary("pseudo-period needs a unitary matrix".into()));
    }
    let n = u.dim();
    let mut power = ComplexSquareMatrix::identity(n);
    for k in 1..=k_max {
        power = power.mul(u);
        let phase = (0..n)
            .map(|i| power[(i, i)])
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .map(|d| Complex64::from_polar(1.0, d.arg()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let target = ComplexSquareMatrix::identity(n).scale(phase);
        if power.max_deviation(&target) <= tol {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Closed communicating classes of the graph with an edge `i → j` wherever
/// `weights[(i, j)] > tol`, each sorted, in order of their smallest state.
pub fn closed_classes(weights: &RealSquareMatrix, tol: f64) -> Vec<Vec<usize>> {
    let n = weights.dim();
    let mut graph = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..n).map(|i| graph.add_node(i)).collect();
    for i in 0..n {
        for j in 0..n {
            if weights[(i, j)] > tol {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let sccs = tarjan_scc(&graph);
    let mut component = vec![0; n];
    for (c, scc) in sccs.iter().enumerate() {
        for node in scc {
            component[graph[*node]] = c;
        }
    }
    let mut closed: Vec<Vec<usize>> = sccs
        .iter()
        .enumerate()
        .filter(|(c, scc)| {
            scc.iter().all(|&node| {
                graph
                    .neighbors(node)
                    .all(|next| component[graph[next]] == *c)
            })
        })
        .map(|(_, scc)| {
            let mut states: Vec<usize> = scc.iter().map(|&node| graph[node]).collect();
            states.sort_unstable();
            states
        })
        .collect();
    closed.sort();
    closed
}

/// Transition weights of one measurement period: `|U^p|²` or `T^p`.
fn period_weights(machine: &Machine, period: usize) -> RealSquareMatrix {
    match machine {
        Machine::Quantum(q) => q.unitary().pow(period as u64).modulus_squared(),
        Machine::Classical(g) => g.transition().pow(period as u64),
    }
}

/// The evolution operator as a complex matrix, when it is unitary.
fn unitary_evolution(machine: &Machine) -> Option<ComplexSquareMatrix> {
    match machine {
        Machine::Quantum(q) => Some(q.unitary().clone()),
        Machine::Classical(g) => {
            let t = ComplexSquareMatrix::from_real(g.transition());
            validate_unitary(&t, TolerancePolicy::default().structural).then_some(t)
        }
    }
}

fn initial_states(machine: &Machine, ensemble: Ensemble, period: usize) -> Vec<InitialState> {
    let dim = machine.dim();
    let basis = || (0..dim).map(InitialState::Basis);
    match ensemble {
        Ensemble::Basis => basis().collect(),
        Ensemble::Uniform => vec![InitialState::Uniform],
        Ensemble::BasisAndUniform => basis().chain([InitialState::Uniform]).collect(),
        Ensemble::Components => {
            let tol = TolerancePolicy::default().structural;
            let classes = closed_classes(&period_weights(machine, period), tol);
            if classes.len() > 1 {
                classes
                    .iter()
                    .map(|c| InitialState::mixture_of(c, dim))
                    .collect()
            } else {
                let all: Vec<usize> = (0..dim).collect();
                vec![InitialState::mixture_of(&all, dim)]
            }
        }
    }
}

pub fn sweep(machine: &Machine, cfg: &SweepConfig) -> Result<DiversityReport> {
    if cfg.first_period == 0 {
        return Err(Error::InvalidConfig("periods start at 1".into()));
    }
    if cfg.last_period < cfg.first_period {
        return Err(Error::EmptySweep);
    }
    let enumeration = EnumerationConfig {
        max_length: cfg.max_length,
        prune_threshold: cfg.prune_threshold,
    };
    enumeration.validate()?;

    let cells: Vec<(usize, InitialState)> = cfg
        .periods()
        .flat_map(|p| {
            initial_states(machine, cfg.ensemble, p)
                .into_iter()
                .map(move |s| (p, s))
        })
        .collect();

    // ordered collect keeps the reduction independent of scheduling
    let languages: Vec<StochasticLanguage> = cells
        .par_iter()
        .map(|(p, initial)| {
            let protocol = MeasurementProtocol::new(*p, initial.clone())?;
            enumerate_language(machine, &protocol, &enumeration)
        })
        .collect::<Result<_>>()?;

    let mut classes: Vec<LanguageClass> = Vec::new();
    let mut supports: Vec<FormalLanguage> = Vec::new();
    let mut by_key: HashMap<LanguageKey, usize> = HashMap::new();
    let mut entries = Vec::with_capacity(cells.len());
    for ((period, initial), language) in cells.into_iter().zip(languages) {
        let key = canonical_key(&language);
        let found = match cfg.dedup {
            Dedup::CanonicalKey => by_key.get(&key).copied(),
            Dedup::DeltaSimilar(delta) => classes
                .iter()
                .position(|c| delta_similar(&c.language, &language, delta).unwrap_or(false)),
        };
        let class = match found {
            Some(c) => {
                if classes[c].periods.last() != Some(&period) {
                    classes[c].periods.push(period);
                }
                c
            }
            None => {
                let supp = support(&language);
                let support_index = match supports.iter().position(|s| *s == supp) {
                    Some(i) => i,
                    None => {
                        supports.push(supp);
                        supports.len() - 1
                    }
                };
                by_key.insert(key.clone(), classes.len());
                classes.push(LanguageClass {
                    key,
                    language,
                    first_period: period,
                    first_initial: initial.clone(),
                    periods: vec![period],
                    support: support_index,
                });
                classes.len() - 1
            }
        };
        entries.push(SweepEntry {
            period,
            initial,
            class,
        });
    }

    let mut warnings = Vec::new();
    let evolution = unitary_evolution(machine);
    let pseudo = match &evolution {
        Some(u) => pseudo_period(u, cfg.max_pseudo_period, cfg.pseudo_period_tol)?,
        None => None,
    };
    if evolution.is_some() && pseudo.is_none() {
        warnings.push(format!(
            "no pseudo-period detected within k ≤ {}",
            cfg.max_pseudo_period
        ));
    }
    if cfg.ensemble == Ensemble::Components {
        if let Machine::Quantum(q) = machine {
            if !q.unitary().is_permutation(TolerancePolicy::default().structural) {
                warnings.push(
                    "components ensemble on a non-permutation quantum machine: closed classes \
                     are taken from |U^p|² and each class is an incoherent uniform ensemble"
                        .into(),
                );
            }
        }
    }

    let stochastic_diversity = (classes.len() as f64).log2();
    let formal_diversity = (supports.len() as f64).log2();
    let permutation = evolution
        .as_ref()
        .is_some_and(|u| u.is_permutation(TolerancePolicy::default().structural));
    let bounds = pseudo
        .map(|k| {
            let kind = if permutation {
                BoundKind::Periodic(k)
            } else {
                BoundKind::Pseudo(k)
            };
            let value = diversity_bound(kind, machine.alphabet().len());
            BoundCheck {
                kind,
                value,
                satisfied: stochastic_diversity <= value + 1e-12,
            }
        })
        .into_iter()
        .collect();

    Ok(DiversityReport {
        config: cfg.clone(),
        entries,
        classes,
        supports,
        stochastic_diversity,
        formal_diversity,
        pseudo_period: pseudo,
        bounds,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::machines::classical_analog;

    fn run(machine: impl Into<Machine>, ensemble: Ensemble) -> DiversityReport {
        sweep(&machine.into(), &SweepConfig::with_ensemble(ensemble)).unwrap()
    }

    #[test]
    fn beam_splitter_sweeps() {
        let r = run(catalog::beam_splitter(), Ensemble::Basis);
        assert_eq!(r.class_count(), 3);
        assert!((language_diversity(&r) - 3f64.log2()).abs() <= 1e-12);
        assert_eq!(r.pseudo_period, Some(2));
        assert_eq!(r.bounds[0].kind, BoundKind::Pseudo(2));
        assert!(r.bounds[0].satisfied);

        let r = run(classical_analog(&catalog::beam_splitter()), Ensemble::Basis);
        assert_eq!(r.class_count(), 1);
        assert_eq!(language_diversity(&r), 0.0);
    }

    #[test]
    fn kicked_top_counts() {
        let r = run(catalog::kicked_top(0.5), Ensemble::Basis);
        assert_eq!(r.class_count(), 5);
        // the two alternating languages start with different symbols
        assert_eq!(r.support_count(), 5);
        assert!(formal_diversity(&r) <= language_diversity(&r));
        assert_eq!(run(catalog::kicked_top(0.5), Ensemble::Components).class_count(), 4);
        assert_eq!(run(catalog::kicked_top(0.5), Ensemble::Uniform).class_count(), 4);
    }

    #[test]
    fn period5_components() {
        let expected = [("10000", 3), ("11000", 4), ("10101", 4)];
        for (t, n) in expected {
            let r = run(catalog::period5(t), Ensemble::Components);
            assert_eq!(r.class_count(), n, "{t}");
            assert_eq!(r.support_count(), n, "{t}");
            assert_eq!(r.bounds[0].kind, BoundKind::Periodic(5));
        }
        let r = run(catalog::period5("11000"), Ensemble::Components);
        assert!((formal_diversity(&r) - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn bounds() {
        assert_eq!(diversity_bound(BoundKind::Pseudo(2), 2), 2.0);
        assert!((diversity_bound(BoundKind::Periodic(5), 2) - 22f64.log2()).abs() <= 1e-12);
        assert_eq!(diversity_bound(BoundKind::Periodic(1), 1), 0.0);
    }

    #[test]
    fn pseudo_periods() {
        let h = catalog::beam_splitter().unitary().clone();
        assert_eq!(pseudo_period(&h, 64, 1e-9).unwrap(), Some(2));
        assert_eq!(pseudo_period(&catalog::period5_permutation(), 64, 1e-9).unwrap(), Some(5));
        for phase in [0.0, 0.5, 1.3, 2.9] {
            let u = catalog::kicked_top(phase).unitary().clone();
            assert_eq!(pseudo_period(&u, 64, 1e-9).unwrap(), Some(4));
        }
        let irrational = ComplexSquareMatrix::diagonal(&[
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, 2f64.sqrt()),
        ]);
        assert_eq!(pseudo_period(&irrational, 16, 1e-9).unwrap(), None);
        assert!(pseudo_period(&ComplexSquareMatrix::zeros(2), 4, 1e-9).is_err());
    }

    #[test]
    fn closed_class_detection() {
        let id = RealSquareMatrix::identity(3);
        assert_eq!(closed_classes(&id, 1e-9), vec![vec![0], vec![1], vec![2]]);
        let half = RealSquareMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert_eq!(closed_classes(&half, 1e-9), vec![vec![0, 1]]);
        // 0 is transient and drains into the closed pair {1, 2}
        let drain = RealSquareMatrix::from_rows(vec![
            vec![0.5, 0.5, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(closed_classes(&drain, 1e-9), vec![vec![1, 2]]);
    }

    #[test]
    fn empty_and_invalid_ranges() {
        let m = Machine::from(catalog::beam_splitter());
        let cfg = SweepConfig {
            first_period: 5,
            last_period: 4,
            ..Default::default()
        };
        assert_eq!(sweep(&m, &cfg), Err(Error::EmptySweep));
        let cfg = SweepConfig {
            first_period: 0,
            ..Default::default()
        };
        assert!(sweep(&m, &cfg).is_err());
    }

    #[test]
    fn delta_dedup_matches_keys_on_examples() {
        for machine in [Machine::from(catalog::kicked_top(1.3)), Machine::from(catalog::period5("10101"))] {
            let keyed = sweep(&machine, &SweepConfig::default()).unwrap();
            let cfg = SweepConfig {
                dedup: Dedup::DeltaSimilar(1e-9),
                ..Default::default()
            };
            let similar = sweep(&machine, &cfg).unwrap();
            assert_eq!(keyed.class_count(), similar.class_count());
        }
    }

    #[test]
    fn ensemble_names_round_trip() {
        for e in Ensemble::ALL {
            assert_eq!(e.to_string().parse::<Ensemble>().unwrap(), e);
        }
        assert!("nope".parse::<Ensemble>().is_err());
    }
}
