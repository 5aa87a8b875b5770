//! Sweeps distances 3 to 7 around the threshold and fits the finite-size
//! scaling ansatz.
//!
//! cargo run --release --example threshold -- [samples]

use colorsat::analysis::{empirical_crossing, fit_threshold};
use colorsat::sim::{run_batch, write_csv, BatchConfig};
use colorsat::{ColorCode, NoiseModel};

fn main() -> colorsat::Result<()> {
    let samples: u64 = std::env::args().nth(1).map_or(4000, |s| s.parse().expect("samples"));
    let mut records = Vec::new();
    for d in [3, 5, 7] {
        let code = ColorCode::triangular(d)?;
        for k in 0..=8 {
            let p = 0.06 + 0.01 * f64::from(k);
            let config = BatchConfig::new(samples, 3);
            records.push(run_batch(&code, NoiseModel::BitFlip { p }, &config)?);
        }
    }
    for r in &records {
        println!("d={} p={:.2} ler={:.4} ± {:.4}", r.distance, r.p, r.ler, r.ler_stderr);
    }
    write_csv(&records, "threshold.csv")?;
    let fit = fit_threshold(&records)?;
    println!("crossing bracket {:?}", empirical_crossing(&records));
    println!(
        "p_th = {:.4}, nu = {:.2} from {} points (written to threshold.csv)",
        fit.p_th, fit.nu, fit.n_points
    );
    Ok(())
}
