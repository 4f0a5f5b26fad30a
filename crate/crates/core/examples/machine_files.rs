//! Builds a machine by hand, writes it in the JSON file format and reads it
//! back.

use langdiv::cli::{parse_machine, serialize_machine};
use langdiv::{Alphabet, ComplexSquareMatrix, Machine, QuantumGenerator};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    // phase-shifted three-cycle, measured as "a" on state 0 and "b" elsewhere
    let u = ComplexSquareMatrix::from_rows(vec![
        vec![zero, i, zero],
        vec![zero, zero, -i],
        vec![Complex64::new(1.0, 0.0), zero, zero],
    ])?;
    let alphabet = Alphabet::new(["a", "b"])?;
    let q = QuantumGenerator::with_default_states(alphabet, u, vec![vec![0], vec![1, 2]])?;

    let text = serialize_machine(&Machine::from(q.clone()));
    print!("{text}");
    let back = parse_machine(&text)?;
    assert_eq!(back, Machine::from(q));
    println!("round trip ok");
    Ok(())
}
