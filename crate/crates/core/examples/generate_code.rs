//! Builds a triangular color code and prints its check matrix and JSON form.
//!
//! cargo run --example generate_code -- [distance]

use colorsat::ColorCode;

fn main() -> colorsat::Result<()> {
    let d: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("distance"));
    let code = ColorCode::triangular(d)?;
    println!("d = {d}: {} qubits, {} faces, rank {}", code.n_qubits(), code.n_faces(), code.echelon().rank());
    for face in code.faces() {
        let color = face.color.map_or("-".to_string(), |c| format!("{c:?}"));
        println!("{:>6} {}  {:?}", color, code.check_matrix().row(face.index), face.qubits);
    }
    println!("logical {}", code.logical());
    if d <= 5 {
        println!("{}", code.to_json()?);
    }
    Ok(())
}
