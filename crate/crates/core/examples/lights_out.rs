//! The classic 3×3 LightsOut puzzle solved as a minimum-weight MaxSAT problem.
//!
//! cargo run --example lights_out -- [lit cell]

use colorsat::{BitVec, LightsOutInstance, MaxSatInstance, SolveOutcome};

fn show(lights: &BitVec) {
    for row in 0..3 {
        let cells: String = (0..3).map(|c| if lights.get(3 * row + c) { '#' } else { '.' }).collect();
        println!("  {cells}");
    }
}

fn main() -> colorsat::Result<()> {
    let lit: usize = std::env::args().nth(1).map_or(1, |s| s.parse().expect("cell index 0..9"));
    let puzzle = LightsOutInstance::classic_square(3, 3, BitVec::unit(9, lit))?;
    println!("initial lights:");
    show(puzzle.init());

    let instance = MaxSatInstance::encode(&puzzle);
    println!(
        "{} XOR constraints over {} switches and {} helpers",
        instance.hard().len(),
        instance.n_switches(),
        instance.n_helpers()
    );
    let SolveOutcome::Optimal(assignment) = instance.solve(None) else {
        return Err(colorsat::Error::Unsatisfiable);
    };
    let presses = assignment.switches(puzzle.n_switches());
    println!("press {:?} ({} moves)", presses.iter_ones().collect::<Vec<_>>(), assignment.objective);

    let mut state = puzzle.init().clone();
    for switch in presses.iter_ones() {
        state = puzzle.with_init(state)?.lights_after(&BitVec::unit(9, switch))?;
        println!("after pressing {switch}:");
        show(&state);
    }
    Ok(())
}
