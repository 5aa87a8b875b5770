//! Logical error rate of the exact decoder under bit-flip noise.
//!
//! cargo run --release --example simulate -- [distance] [p] [samples]

use std::time::Instant;

use colorsat::sim::{run_batch, BatchConfig};
use colorsat::{ColorCode, NoiseModel};

fn main() -> colorsat::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(5, |s| s.parse().expect("distance"));
    let p: f64 = args.next().map_or(0.08, |s| s.parse().expect("error rate"));
    let samples: u64 = args.next().map_or(2000, |s| s.parse().expect("samples"));

    let code = ColorCode::triangular(d)?;
    let start = Instant::now();
    let record = run_batch(&code, NoiseModel::BitFlip { p }, &BatchConfig::new(samples, 7))?;
    println!(
        "d={d} p={p}: {} / {} logical errors, LER {:.4} ± {:.4}, {:.1} µs per decode, {:.2?} wall",
        record.logical_errors,
        record.samples,
        record.ler,
        record.ler_stderr,
        record.mean_decode_us,
        start.elapsed()
    );
    Ok(())
}
