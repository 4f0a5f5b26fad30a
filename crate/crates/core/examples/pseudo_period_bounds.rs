//! Pseudo-periods of the built-in unitaries and the diversity bounds they
//! imply.

use langdiv::catalog;
use langdiv::diversity::{pseudo_period, sweep, Ensemble, SweepConfig};
use langdiv::{Machine, QuantumGenerator};

fn main() -> langdiv::Result<()> {
    let machines: Vec<(&str, QuantumGenerator, Ensemble)> = vec![
        ("beam-splitter", catalog::beam_splitter(), Ensemble::Basis),
        ("kicked-top", catalog::kicked_top(0.5), Ensemble::Basis),
        ("period5-11000", catalog::period5("11000"), Ensemble::Components),
    ];
    for (name, q, ensemble) in machines {
        let k = pseudo_period(q.unitary(), 64, 1e-9)?;
        let report = sweep(&Machine::from(q), &SweepConfig::with_ensemble(ensemble))?;
        println!("{name}: pseudo-period {k:?}, D = {:.4}", report.stochastic_diversity);
        for b in &report.bounds {
            println!("    {}: D ≤ {:.4} ({})", b.kind, b.value, if b.satisfied { "holds" } else { "violated" });
        }
    }
    Ok(())
}
