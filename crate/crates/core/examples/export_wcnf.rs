//! Writes a decoding instance as WCNF for an external MaxSAT solver and, if
//! a model file is given, reads the solver's answer back.
//!
//! cargo run --example export_wcnf -- out.wcnf [model.txt]
//!
//! For example with python-sat installed: `rc2.py -vv out.wcnf > model.txt`.

use colorsat::maxsat::WcnfDialect;
use colorsat::{BitVec, ColorCode, Decoder};

fn main() -> colorsat::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "d5.wcnf".into());
    let code = ColorCode::triangular(5)?;
    let error = BitVec::from_indices(code.n_qubits(), [2, 9, 14]);
    let syndrome = code.syndrome(&error)?;

    let mut decoder = Decoder::new(&code);
    decoder.instance().export_wcnf(&syndrome, &out, WcnfDialect::Modern)?;
    let internal = decoder.decode(&syndrome, None)?;
    println!("wrote {out} for syndrome {syndrome}; internal optimum {}", internal.weight);

    if let Some(model) = args.next() {
        let mut instance = decoder.instance().clone();
        instance.set_syndrome(&syndrome)?;
        let external = instance.import_model(&model)?;
        println!(
            "external model: cost {}, switches {}",
            external.objective,
            external.switches(code.n_qubits())
        );
    }
    Ok(())
}
