//! Decodes the syndrome of a random error and checks the result against
//! exhaustive coset enumeration.
//!
//! cargo run --release --example decode -- [distance] [p] [seed]

use colorsat::decoder::decode_oracle;
use colorsat::{BitVec, ColorCode, Decoder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> colorsat::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(7, |s| s.parse().expect("distance"));
    let p: f64 = args.next().map_or(0.1, |s| s.parse().expect("error rate"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let code = ColorCode::triangular(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let error = BitVec::from_indices(code.n_qubits(), (0..code.n_qubits()).filter(|_| rng.gen_bool(p)));
    let syndrome = code.syndrome(&error)?;

    let result = Decoder::new(&code).decode(&syndrome, None)?;
    let residual = error.xor(&result.estimate)?;
    println!("error     {error} (weight {})", error.weight());
    println!("syndrome  {syndrome}");
    println!(
        "estimate  {} (weight {}, {:?}, {:?})",
        result.estimate, result.weight, result.status, result.solve_time
    );
    println!("logical error: {}", code.is_logical_error(&residual)?);

    if code.n_qubits() - code.n_faces() <= colorsat::code::ENUMERATION_LIMIT {
        let oracle = decode_oracle(&code, &syndrome)?;
        println!("oracle    {oracle} (weight {})", oracle.weight());
    }
    Ok(())
}
