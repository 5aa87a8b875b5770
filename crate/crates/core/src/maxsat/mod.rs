//! MaxSAT formulation of the LightsOut variant.
//!
//! Every light's parity constraint `⊕ switches = init` is split into a chain
//! of XOR constraints of arity at most three using `m - 1` helper variables
//! for a light with `m` switches:
//!
//! ```text
//! s1 ⊕ h1       = a        (anchor)
//! h_i           = s_{i+1} ⊕ h_{i+1}    for i = 1 .. m-2
//! h_{m-1}       = s_m
//! ```
//!
//! XOR-ing the chain telescopes back to `s1 ⊕ … ⊕ sm = a`. The value `a` is a
//! dedicated assumption variable per light that appears only in the anchor,
//! so a new syndrome is loaded by fixing assumption values; no constraint is
//! rebuilt. The soft part is one unit-weight clause `¬s` per switch.
//!
//! Variable layout: switches first, then helpers, then one assumption
//! variable per light.

mod solver;
mod wcnf;

use std::time::Duration;

use crate::error::{check_len, Result};
use crate::gf2::BitVec;
use crate::lightsout::LightsOutInstance;

pub use wcnf::WcnfDialect;

/// `⊕ vars = parity` over at most three variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XorConstraint {
    vars: Vec<usize>,
    parity: bool,
}

impl XorConstraint {
    fn new(vars: Vec<usize>, parity: bool) -> Self {
        debug_assert!((1..=3).contains(&vars.len()));
        Self { vars, parity }
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn parity(&self) -> bool {
        self.parity
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn is_satisfied(&self, values: &BitVec) -> bool {
        self.vars.iter().fold(false, |acc, &v| acc ^ values.get(v)) == self.parity
    }
}

/// Soft clause `¬var` with its weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SoftClause {
    pub var: usize,
    pub weight: u32,
}

/// A full variable assignment and the weight of the violated soft clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub values: BitVec,
    pub objective: usize,
}

impl Assignment {
    /// Projection onto the first `n_switches` variables.
    pub fn switches(&self, n_switches: usize) -> BitVec {
        BitVec::from_indices(n_switches, (0..n_switches).filter(|&v| self.values.get(v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Satisfies every hard constraint with provably minimum objective.
    Optimal(Assignment),
    /// The deadline passed before optimality was proven.
    NonConverged,
    /// The hard constraints admit no assignment for the current syndrome.
    Unsatisfiable,
}

#[derive(Clone, Debug)]
pub struct MaxSatInstance {
    n_switches: usize,
    n_helpers: usize,
    hard: Vec<XorConstraint>,
    soft: Vec<SoftClause>,
    /// Index into `hard` of each light's anchor constraint.
    light_anchor: Vec<usize>,
    /// Switch variables of each light, in chain order.
    light_switches: Vec<Vec<usize>>,
    assumptions: BitVec,
    index: solver::SearchIndex,
}

impl MaxSatInstance {
    /// Chain-encodes every light of `puzzle` and loads its initial
    /// configuration as the syndrome.
    pub fn encode(puzzle: &LightsOutInstance) -> Self {
        let n_switches = puzzle.n_switches();
        let n_lights = puzzle.n_lights();
        let n_helpers: usize = puzzle.toggles().iter().map(|t| t.len().saturating_sub(1)).sum();
        let assumption_base = n_switches + n_helpers;

        let mut hard = Vec::new();
        let mut light_anchor = Vec::with_capacity(n_lights);
        let mut next_helper = n_switches;
        for (light, switches) in puzzle.toggles().iter().enumerate() {
            let anchor = assumption_base + light;
            light_anchor.push(hard.len());
            match switches.as_slice() {
                // Nothing can toggle this light: its assumption must be off.
                [] => hard.push(XorConstraint::new(vec![anchor], false)),
                [only] => hard.push(XorConstraint::new(vec![*only, anchor], false)),
                [first, rest @ ..] => {
                    let helpers: Vec<usize> = (next_helper..next_helper + rest.len()).collect();
                    next_helper += rest.len();
                    hard.push(XorConstraint::new(vec![*first, helpers[0], anchor], false));
                    for (i, &s) in rest[..rest.len() - 1].iter().enumerate() {
                        hard.push(XorConstraint::new(vec![helpers[i], s, helpers[i + 1]], false));
                    }
                    hard.push(XorConstraint::new(vec![helpers[rest.len() - 1], rest[rest.len() - 1]], false));
                }
            }
        }
        let soft = (0..n_switches).map(|var| SoftClause { var, weight: 1 }).collect();
        let light_switches = puzzle.toggles().to_vec();
        let index =
            solver::SearchIndex::new(n_switches + n_helpers + n_lights, &hard, &light_switches, n_switches);
        Self {
            n_switches,
            n_helpers,
            hard,
            soft,
            light_anchor,
            light_switches,
            assumptions: puzzle.init().clone(),
            index,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_switches + self.n_helpers + self.n_lights()
    }

    pub fn n_switches(&self) -> usize {
        self.n_switches
    }

    pub fn n_helpers(&self) -> usize {
        self.n_helpers
    }

    pub fn n_lights(&self) -> usize {
        self.light_anchor.len()
    }

    pub fn hard(&self) -> &[XorConstraint] {
        &self.hard
    }

    pub fn soft(&self) -> &[SoftClause] {
        &self.soft
    }

    pub fn light_anchor(&self) -> &[usize] {
        &self.light_anchor
    }

    pub fn light_switches(&self) -> &[Vec<usize>] {
        &self.light_switches
    }

    pub fn assumption_var(&self, light: usize) -> usize {
        self.n_switches + self.n_helpers + light
    }

    /// Current syndrome, one bit per light.
    pub fn syndrome(&self) -> &BitVec {
        &self.assumptions
    }

    /// Effective right-hand side of a light's anchor under the current
    /// syndrome.
    pub fn anchor_parity(&self, light: usize) -> bool {
        self.assumptions.get(light)
    }

    /// Loads a new syndrome by fixing the assumption variables. The hard
    /// constraints are not touched.
    pub fn set_syndrome(&mut self, syndrome: &BitVec) -> Result<()> {
        check_len("syndrome", self.n_lights(), syndrome.len())?;
        self.assumptions.clone_from(syndrome);
        Ok(())
    }

    /// Checks a full assignment against the hard constraints, with the
    /// assumption variables required to match the syndrome.
    pub fn first_violated(&self, values: &BitVec) -> Option<usize> {
        if let Some(light) =
            (0..self.n_lights()).find(|&l| values.get(self.assumption_var(l)) != self.assumptions.get(l))
        {
            return Some(self.light_anchor[light]);
        }
        self.hard.iter().position(|c| !c.is_satisfied(values))
    }

    pub fn objective(&self, values: &BitVec) -> usize {
        self.soft.iter().filter(|s| values.get(s.var)).map(|s| s.weight as usize).sum()
    }

    /// Exact minimum-weight solve. `timeout` of `None` means no deadline.
    pub fn solve(&self, timeout: Option<Duration>) -> SolveOutcome {
        solver::solve(self, timeout)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::ColorCode;

    fn d3_instance(s: &str) -> MaxSatInstance {
        let code = ColorCode::triangular(3).unwrap();
        let puzzle = LightsOutInstance::from_color_code(&code, &s.parse().unwrap()).unwrap();
        MaxSatInstance::encode(&puzzle)
    }

    /// Minimum weight over all switch patterns that turn every light off.
    fn brute_force_min(puzzle: &LightsOutInstance) -> Option<usize> {
        let n = puzzle.n_switches();
        (0u64..1 << n)
            .filter(|mask| {
                let x = BitVec::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
                puzzle.is_solution(&x).unwrap()
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
    }

    #[test]
    fn chain_sizes() {
        let six = LightsOutInstance::new(6, vec![(0..6).collect()], BitVec::zeros(1)).unwrap();
        let inst = MaxSatInstance::encode(&six);
        assert_eq!(inst.n_helpers(), 5);
        assert_eq!(inst.hard().len(), 6);

        let four = LightsOutInstance::new(4, vec![(0..4).collect()], BitVec::zeros(1)).unwrap();
        let inst = MaxSatInstance::encode(&four);
        assert_eq!(inst.n_helpers(), 3);
        assert_eq!(inst.hard().len(), 4);
        assert!(inst.hard().iter().all(|c| (1..=3).contains(&c.arity())));

        let d3 = d3_instance("000");
        assert_eq!(d3.soft().len(), 7);
        assert!(d3.soft().iter().all(|s| s.weight == 1));
        assert_eq!(d3.n_vars(), 7 + 9 + 3);
    }

    #[test]
    fn only_anchors_reference_assumptions() {
        let inst = d3_instance("101");
        for (ci, c) in inst.hard().iter().enumerate() {
            let uses_assumption = c.vars().iter().any(|&v| v >= inst.n_switches() + inst.n_helpers());
            assert_eq!(uses_assumption, inst.light_anchor().contains(&ci));
        }
        for var in 0..inst.n_switches() {
            assert!(inst.hard().iter().any(|c| c.vars().contains(&var)));
        }
    }

    #[test]
    fn chain_telescopes_to_parity_constraint() {
        // Any assignment satisfying the chain for one light has switch
        // parity equal to the anchor; check exhaustively for m = 1..=6.
        for m in 1..=6usize {
            for init in [false, true] {
                let puzzle =
                    LightsOutInstance::new(m, vec![(0..m).collect()], BitVec::from_bools(&[init])).unwrap();
                let inst = MaxSatInstance::encode(&puzzle);
                let n = inst.n_vars();
                let mut satisfying = 0;
                for mask in 0u64..1 << n {
                    let values = BitVec::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
                    if inst.first_violated(&values).is_none() {
                        satisfying += 1;
                        let parity = (0..m).fold(false, |acc, v| acc ^ values.get(v));
                        assert_eq!(parity, init);
                    }
                }
                // Helpers are functionally determined by the switches.
                assert_eq!(satisfying, 1 << (m - 1));
            }
        }
    }

    #[test]
    fn set_syndrome_only_moves_assumptions() {
        let mut inst = d3_instance("000");
        let hard_before = inst.hard().to_vec();
        let s1: BitVec = "100".parse().unwrap();
        let s2: BitVec = "011".parse().unwrap();
        inst.set_syndrome(&s1).unwrap();
        let once = inst.clone();
        inst.set_syndrome(&s1).unwrap();
        assert_eq!(inst.syndrome(), once.syndrome());
        inst.set_syndrome(&s2).unwrap();
        inst.set_syndrome(&s1).unwrap();
        assert_eq!(inst.syndrome(), once.syndrome());
        assert_eq!(inst.hard(), &hard_before[..]);
        assert_eq!((0..3).filter(|&l| inst.anchor_parity(l)).count(), 1);
        assert!(inst.set_syndrome(&BitVec::zeros(2)).is_err());
    }

    #[test]
    fn solve_examples_against_brute_force() {
        let code = ColorCode::triangular(3).unwrap();
        for s in ["100", "000", "111", "110", "011", "101"] {
            let puzzle = LightsOutInstance::from_color_code(&code, &s.parse().unwrap()).unwrap();
            let expected = brute_force_min(&puzzle).unwrap();
            let SolveOutcome::Optimal(a) = MaxSatInstance::encode(&puzzle).solve(None) else {
                panic!("expected optimal for {s}");
            };
            assert_eq!(a.objective, expected, "syndrome {s}");
            assert!(puzzle.is_solution(&a.switches(7)).unwrap());
        }
        let SolveOutcome::Optimal(a) = d3_instance("100").solve(None) else { panic!() };
        assert_eq!(a.switches(7), BitVec::unit(7, 0));
        let SolveOutcome::Optimal(a) = d3_instance("111").solve(None) else { panic!() };
        assert_eq!(a.switches(7), BitVec::unit(7, 6));
        let SolveOutcome::Optimal(a) = d3_instance("000").solve(None) else { panic!() };
        assert_eq!(a.objective, 0);
        assert!(a.values.is_zero());
    }

    #[test]
    fn unsatisfiable_syndromes_are_reported() {
        let dead = LightsOutInstance::new(1, vec![vec![], vec![0]], "10".parse().unwrap()).unwrap();
        assert_eq!(MaxSatInstance::encode(&dead).solve(None), SolveOutcome::Unsatisfiable);
        let clash = LightsOutInstance::new(1, vec![vec![0], vec![0]], "10".parse().unwrap()).unwrap();
        assert_eq!(MaxSatInstance::encode(&clash).solve(None), SolveOutcome::Unsatisfiable);
    }

    #[test]
    fn zero_timeout_does_not_converge_on_hard_instances() {
        let code = ColorCode::triangular(9).unwrap();
        let mut e = BitVec::zeros(code.n_qubits());
        for q in (0..code.n_qubits()).step_by(4) {
            e.set(q, true);
        }
        let puzzle = LightsOutInstance::from_color_code(&code, &code.syndrome(&e).unwrap()).unwrap();
        let inst = MaxSatInstance::encode(&puzzle);
        assert_eq!(inst.solve(Some(Duration::ZERO)), SolveOutcome::NonConverged);
    }
}
