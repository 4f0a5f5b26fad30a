//! Table and JSON rendering. Everything here is a pure function of its
//! inputs so identical runs print identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::diversity::{Dedup, DiversityReport, Ensemble, LanguageClass};
use crate::languages::{describe_support, support, StochasticLanguage};
use crate::machines::Machine;
use crate::protocol::InitialState;

#[derive(Serialize)]
struct WordJson {
    w: String,
    p: f64,
}

#[derive(Serialize)]
struct LanguageJson {
    alphabet: Vec<String>,
    max_length: usize,
    period: usize,
    initial: String,
    words: Vec<WordJson>,
}

fn words_json(lang: &StochasticLanguage) -> Vec<WordJson> {
    lang.printed_words()
        .into_iter()
        .map(|(w, p)| WordJson { w, p })
        .collect()
}

fn support_label(lang: &StochasticLanguage) -> String {
    describe_support(&support(lang)).unwrap_or_else(|| "irregular".into())
}

pub fn language_json(lang: &StochasticLanguage, period: usize, initial: &InitialState) -> String {
    let doc = LanguageJson {
        alphabet: lang.alphabet().symbols().to_vec(),
        max_length: lang.max_length(),
        period,
        initial: initial.to_string(),
        words: words_json(lang),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn language_table(lang: &StochasticLanguage, period: usize, initial: &InitialState) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# period {period}, initial {initial}, max length {}, alphabet {{{}}}",
        lang.max_length(),
        lang.alphabet().symbols().join(",")
    )
    .unwrap();
    writeln!(out, "# support: {}", support_label(lang)).unwrap();
    let width = lang.max_length().max(4);
    writeln!(out, "{:>3}  {:<width$}  probability", "L", "word").unwrap();
    for (w, p) in lang.printed_words() {
        let len = lang.alphabet().parse_word(&w).map(|w| w.len()).unwrap_or(0);
        writeln!(out, "{len:>3}  {w:<width$}  {p:.12}").unwrap();
    }
    out
}

fn dedup_label(d: Dedup) -> String {
    match d {
        Dedup::CanonicalKey => "canonical-key".into(),
        Dedup::DeltaSimilar(delta) => format!("delta-similar({delta:e})"),
    }
}

/// Period residues modulo the pseudo-period, e.g. `p ≡ 1,3 (mod 4)`.
fn residues(class: &LanguageClass, modulus: Option<usize>) -> String {
    match modulus {
        Some(k) if k > 1 => {
            let set: BTreeSet<usize> = class.periods.iter().map(|p| p % k).collect();
            let list: Vec<String> = set.iter().map(|r| r.to_string()).collect();
            format!("p ≡ {} (mod {k})", list.join(","))
        }
        _ => {
            let list: Vec<String> = class.periods.iter().map(|p| p.to_string()).collect();
            format!("p ∈ {{{}}}", list.join(","))
        }
    }
}

/// Short probability summary of a class at its longest word length.
fn probability_summary(lang: &StochasticLanguage) -> String {
    let longest: Vec<f64> = lang
        .words_of_length(lang.max_length())
        .map(|(_, &p)| p)
        .collect();
    let Some(first) = longest.first() else {
        return "empty".into();
    };
    if longest.iter().all(|p| (p - first).abs() <= 1e-9) {
        format!("{} word{} of length {}, each {:.6}", longest.len(), if longest.len() == 1 { "" } else { "s" }, lang.max_length(), first)
    } else {
        format!("{} words of length {}, non-uniform", longest.len(), lang.max_length())
    }
}

pub fn diversity_table(machine: &Machine, report: &DiversityReport) -> String {
    let mut out = String::new();
    let cfg = &report.config;
    writeln!(
        out,
        "# {} machine, {} states, alphabet {{{}}}",
        machine.kind(),
        machine.dim(),
        machine.alphabet().symbols().join(",")
    )
    .unwrap();
    writeln!(
        out,
        "# periods {}..{}, ensemble {}, max length {}, dedup {}",
        cfg.first_period,
        cfg.last_period,
        cfg.ensemble,
        cfg.max_length,
        dedup_label(cfg.dedup)
    )
    .unwrap();
    writeln!(out, "{:>5}  {:<20}  {:<22}  language", "class", "periods", "support").unwrap();
    for (i, class) in report.classes.iter().enumerate() {
        writeln!(
            out,
            "{:>5}  {:<20}  {:<22}  {}",
            i,
            residues(class, report.pseudo_period),
            support_label(&class.language),
            probability_summary(&class.language)
        )
        .unwrap();
    }
    writeln!(
        out,
        "stochastic classes: {}  D_stoch = {:.6}",
        report.class_count(),
        report.stochastic_diversity
    )
    .unwrap();
    writeln!(
        out,
        "formal classes:     {}  D_formal = {:.6}",
        report.support_count(),
        report.formal_diversity
    )
    .unwrap();
    match report.pseudo_period {
        Some(k) => writeln!(out, "pseudo-period: {k}").unwrap(),
        None => writeln!(out, "pseudo-period: not detected within k ≤ {}", cfg.max_pseudo_period).unwrap(),
    }
    for b in &report.bounds {
        writeln!(
            out,
            "bound {}: D_stoch ≤ {:.6} … {}",
            b.kind,
            b.value,
            if b.satisfied { "holds" } else { "VIOLATED" }
        )
        .unwrap();
    }
    for w in &report.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    out
}

#[derive(Serialize)]
struct ClassJson {
    index: usize,
    first_period: usize,
    first_initial: String,
    periods: Vec<usize>,
    support: usize,
    support_label: String,
    words: Vec<WordJson>,
}

#[derive(Serialize)]
struct EntryJson {
    period: usize,
    initial: String,
    class: usize,
}

#[derive(Serialize)]
struct BoundJson {
    kind: String,
    value: f64,
    satisfied: bool,
}

#[derive(Serialize)]
struct DiversityJson {
    kind: &'static str,
    alphabet: Vec<String>,
    periods: [usize; 2],
    ensemble: String,
    max_length: usize,
    dedup: String,
    stochastic_classes: usize,
    formal_classes: usize,
    d_stoch: f64,
    d_formal: f64,
    pseudo_period: Option<usize>,
    bounds: Vec<BoundJson>,
    classes: Vec<ClassJson>,
    entries: Vec<EntryJson>,
    warnings: Vec<String>,
}

pub fn diversity_json(machine: &Machine, report: &DiversityReport) -> String {
    let cfg = &report.config;
    let doc = DiversityJson {
        kind: machine.kind(),
        alphabet: machine.alphabet().symbols().to_vec(),
        periods: [cfg.first_period, cfg.last_period],
        ensemble: cfg.ensemble.to_string(),
        max_length: cfg.max_length,
        dedup: dedup_label(cfg.dedup),
        stochastic_classes: report.class_count(),
        formal_classes: report.support_count(),
        d_stoch: report.stochastic_diversity,
        d_formal: report.formal_diversity,
        pseudo_period: report.pseudo_period,
        bounds: report
            .bounds
            .iter()
            .map(|b| BoundJson {
                kind: b.kind.to_string(),
                value: b.value,
                satisfied: b.satisfied,
            })
            .collect(),
        classes: report
            .classes
            .iter()
            .enumerate()
            .map(|(index, c)| ClassJson {
                index,
                first_period: c.first_period,
                first_initial: c.first_initial.to_string(),
                periods: c.periods.clone(),
                support: c.support,
                support_label: support_label(&c.language),
                words: words_json(&c.language),
            })
            .collect(),
        entries: report
            .entries
            .iter()
            .map(|e| EntryJson {
                period: e.period,
                initial: e.initial.to_string(),
                class: e.class,
            })
            .collect(),
        warnings: report.warnings.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Everything the `report` subcommand prints: the selected ensemble in full,
/// class counts under every ensemble, and the classical analog's diversity
/// for quantum machines.
pub struct FullReport<'a> {
    pub machine: &'a Machine,
    pub main: &'a DiversityReport,
    pub per_ensemble: Vec<(Ensemble, &'a DiversityReport)>,
    pub analog: Option<&'a DiversityReport>,
}

pub fn full_report_table(r: &FullReport<'_>) -> String {
    let mut out = String::new();
    writeln!(out, "== machine").unwrap();
    writeln!(out, "kind: {}", r.machine.kind()).unwrap();
    writeln!(out, "states: {}", r.machine.states().join(", ")).unwrap();
    writeln!(out, "alphabet: {{{}}}", r.machine.alphabet().symbols().join(",")).unwrap();
    writeln!(
        out,
        "deterministic: {}",
        if r.machine.is_deterministic() { "yes" } else { "no" }
    )
    .unwrap();
    writeln!(out).unwrap();
    writeln!(out, "== languages ({} ensemble)", r.main.config.ensemble).unwrap();
    out.push_str(&diversity_table(r.machine, r.main));
    writeln!(out).unwrap();
    writeln!(out, "== class counts by ensemble").unwrap();
    writeln!(out, "{:<14}  {:>8}  {:>8}  {:>9}  {:>9}", "ensemble", "classes", "supports", "D_stoch", "D_formal").unwrap();
    for (e, rep) in &r.per_ensemble {
        writeln!(
            out,
            "{:<14}  {:>8}  {:>8}  {:>9.6}  {:>9.6}",
            e.to_string(),
            rep.class_count(),
            rep.support_count(),
            rep.stochastic_diversity,
            rep.formal_diversity
        )
        .unwrap();
    }
    if let Some(analog) = r.analog {
        writeln!(out).unwrap();
        writeln!(out, "== classical analog ({} ensemble)", analog.config.ensemble).unwrap();
        writeln!(
            out,
            "classes: {}  D_stoch = {:.6}  (quantum D_stoch = {:.6}, quantum ≥ classical: {})",
            analog.class_count(),
            analog.stochastic_diversity,
            r.main.stochastic_diversity,
            if r.main.stochastic_diversity + 1e-12 >= analog.stochastic_diversity { "yes" } else { "no" }
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    writeln!(
        out,
        "note: languages are truncated at length {}; class membership is relative to that horizon.",
        r.main.config.max_length
    )
    .unwrap();
    writeln!(
        out,
        "note: period residues above come from direct evaluation of the measured evolution."
    )
    .unwrap();
    out
}

#[derive(Serialize)]
struct EnsembleCountJson {
    ensemble: String,
    stochastic_classes: usize,
    formal_classes: usize,
    d_stoch: f64,
    d_formal: f64,
}

pub fn full_report_json(r: &FullReport<'_>) -> String {
    let main: serde_json::Value =
        serde_json::from_str(&diversity_json(r.machine, r.main)).expect("own output parses");
    let counts: Vec<EnsembleCountJson> = r
        .per_ensemble
        .iter()
        .map(|(e, rep)| EnsembleCountJson {
            ensemble: e.to_string(),
            stochastic_classes: rep.class_count(),
            formal_classes: rep.support_count(),
            d_stoch: rep.stochastic_diversity,
            d_formal: rep.formal_diversity,
        })
        .collect();
    let analog = r.analog.map(|a| {
        serde_json::json!({
            "ensemble": a.config.ensemble.to_string(),
            "stochastic_classes": a.class_count(),
            "d_stoch": a.stochastic_diversity,
        })
    });
    let doc = serde_json::json!({
        "machine": {
            "kind": r.machine.kind(),
            "states": r.machine.states(),
            "alphabet": r.machine.alphabet().symbols(),
            "deterministic": r.machine.is_deterministic(),
        },
        "diversity": main,
        "ensembles": counts,
        "classical_analog": analog,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}
