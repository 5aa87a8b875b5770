//! Code distance from the solver: the lightest operator that commutes with
//! every check and flips the logical qubit.
//!
//! cargo run --release --example distance -- [max distance]

use std::time::Instant;

use colorsat::decoder::estimate_distance;
use colorsat::ColorCode;

fn main() -> colorsat::Result<()> {
    let max: usize = std::env::args().nth(1).map_or(11, |s| s.parse().expect("distance"));
    for d in (3..=max).step_by(2) {
        let code = ColorCode::triangular(d)?;
        let start = Instant::now();
        let found = estimate_distance(&code, None)?;
        println!("d = {d:>2}: solver distance {found:?} in {:?}", start.elapsed());
    }
    Ok(())
}
