//! Period-5 processes: the quantum machine and its classical analog give the
//! same languages, period by period.

use langdiv::catalog;
use langdiv::diversity::{sweep, Ensemble, SweepConfig};
use langdiv::languages::{describe_support, support};
use langdiv::machines::classical_analog;
use langdiv::Machine;

fn main() -> langdiv::Result<()> {
    let cfg = SweepConfig::with_ensemble(Ensemble::Components);
    for template in catalog::PERIOD5_TEMPLATES {
        let q = catalog::period5(template);
        let quantum = sweep(&Machine::from(q.clone()), &cfg)?;
        let classical = sweep(&Machine::Classical(classical_analog(&q)), &cfg)?;
        println!(
            "{template}: {} quantum classes, {} classical, D = {:.4}",
            quantum.class_count(),
            classical.class_count(),
            quantum.stochastic_diversity
        );
        for class in &quantum.classes {
            let label = describe_support(&support(&class.language)).unwrap_or_default();
            println!("    {label:<18} first at p = {}", class.first_period);
        }
    }
    Ok(())
}
