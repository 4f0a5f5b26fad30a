//! A quantum generator against its classical analog: equal at period 1,
//! different once measurements are spaced out.

use langdiv::catalog;
use langdiv::languages::max_word_difference;
use langdiv::machines::classical_analog;
use langdiv::protocol::enumerate_language;
use langdiv::{EnumerationConfig, InitialState, Machine, MeasurementProtocol};

fn main() -> langdiv::Result<()> {
    let q = catalog::kicked_top(0.5);
    let quantum = Machine::from(q.clone());
    let classical = Machine::Classical(classical_analog(&q));
    let cfg = EnumerationConfig::new(6);

    for period in 1..=4 {
        let protocol = MeasurementProtocol::new(period, InitialState::Basis(0))?;
        let a = enumerate_language(&quantum, &protocol, &cfg)?;
        let b = enumerate_language(&classical, &protocol, &cfg)?;
        println!("p = {period}: max word difference {:.3e}", max_word_difference(&a, &b)?);
    }
    Ok(())
}
