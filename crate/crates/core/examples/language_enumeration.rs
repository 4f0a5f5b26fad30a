//! Enumerates one stochastic language and checks its normalization.

use langdiv::catalog;
use langdiv::languages::detect_period;
use langdiv::protocol::enumerate_language;
use langdiv::{EnumerationConfig, InitialState, Machine, MeasurementProtocol};

fn main() -> langdiv::Result<()> {
    let machine = Machine::from(catalog::period5("10101"));
    let protocol = MeasurementProtocol::new(1, InitialState::Uniform)?;
    let lang = enumerate_language(&machine, &protocol, &EnumerationConfig::new(6))?;

    for (word, p) in lang.printed_words().into_iter().filter(|(w, _)| w.len() >= 5) {
        println!("{word:<6} {p:.6}");
    }
    println!("normalization error {:.1e}", lang.normalization_error());
    println!("detected period {:?}", detect_period(&lang));
    Ok(())
}
