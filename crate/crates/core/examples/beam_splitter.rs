//! Languages of a photon in a beam-splitter loop, measured every `p` steps.

use langdiv::catalog;
use langdiv::diversity::{sweep, SweepConfig};
use langdiv::languages::{describe_support, support};
use langdiv::Machine;

fn main() -> langdiv::Result<()> {
    let machine = Machine::from(catalog::beam_splitter());
    let report = sweep(&machine, &SweepConfig::default())?;

    for (i, class) in report.classes.iter().enumerate() {
        let label = describe_support(&support(&class.language)).unwrap_or_else(|| "irregular".into());
        println!("class {i}: {label:<8} periods {:?}", class.periods);
    }
    println!(
        "{} classes, language diversity {:.6}",
        report.class_count(),
        report.stochastic_diversity
    );
    Ok(())
}
