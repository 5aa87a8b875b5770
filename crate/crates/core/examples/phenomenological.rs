//! Repeated noisy syndrome measurements: the decoder runs on a stack of
//! lattices joined by time-like switches.
//!
//! cargo run --release --example phenomenological -- [distance] [rounds]

use colorsat::sim::{run_batch, BatchConfig};
use colorsat::{ColorCode, LightsOutInstance, NoiseModel};

fn main() -> colorsat::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(3, |s| s.parse().expect("distance"));
    let rounds: usize = args.next().map_or(d, |s| s.parse().expect("rounds"));
    let code = ColorCode::triangular(d)?;
    let stack = LightsOutInstance::build_stack(&code, rounds)?;
    println!("{rounds} rounds: {} switches, {} lights", stack.n_switches(), stack.n_lights());

    for p in [0.005, 0.01, 0.02, 0.03] {
        let noise = NoiseModel::Phenomenological { p, q: p, rounds };
        let r = run_batch(&code, noise, &BatchConfig::new(5000, 5))?;
        println!(
            "p = q = {p:.3}: LER {:.4} ± {:.4}, non-converged {}, {:.1} µs per decode",
            r.ler, r.ler_stderr, r.non_converged, r.mean_decode_us
        );
    }
    Ok(())
}
