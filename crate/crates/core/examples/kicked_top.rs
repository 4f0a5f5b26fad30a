//! Spin-1/2 kicked top: class counts under each initial-state ensemble, for
//! a few kick phases.

use langdiv::catalog;
use langdiv::diversity::{sweep, Ensemble, SweepConfig};
use langdiv::Machine;

fn main() -> langdiv::Result<()> {
    for phase in [0.0, 0.5, 1.3] {
        let machine = Machine::from(catalog::kicked_top(phase));
        let counts: Vec<String> = Ensemble::ALL
            .iter()
            .map(|&e| sweep(&machine, &SweepConfig::with_ensemble(e)).map(|r| format!("{e}={}", r.class_count())))
            .collect::<langdiv::Result<_>>()?;
        println!("phase {phase}: {}", counts.join("  "));
    }
    Ok(())
}
