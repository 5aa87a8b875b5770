//! Exact solver for chained-XOR instances with unit soft weights.
//!
//! Iterative weight bounding: for `w = lb, lb + 1, …` run a DPLL search for
//! an assignment of the hard constraints with at most `w` true switches and
//! stop at the first `w` that succeeds. A Gaussian-elimination solution gives
//! both a consistency check and an upper bound, so the loop always ends.
//!
//! Propagation is XOR unit propagation: a constraint with one unassigned
//! variable forces it, one with none must hold. Along a helper chain this is
//! equivalent to propagating the light's full parity constraint. Branching
//! picks a light whose assigned switches have the wrong parity (a "lit"
//! light) and tries its first free switch on, then off. Any set of lit lights
//! with pairwise disjoint free switches needs one extra true switch each,
//! which gives the pruning bound.

use std::time::{Duration, Instant};

use crate::gf2::BitVec;
use crate::lightsout::LightsOutInstance;

use super::{Assignment, MaxSatInstance, SolveOutcome, XorConstraint};

const UNASSIGNED: u8 = 2;
const DEADLINE_CHECK_INTERVAL: u64 = 128;

/// Occurrence lists precomputed once per encoded instance.
#[derive(Clone, Debug)]
pub(crate) struct SearchIndex {
    /// Constraint variables, flattened; `cons_vars[3c..3c + arity[c]]`.
    cons_vars: Vec<u32>,
    cons_arity: Vec<u8>,
    cons_parity: Vec<bool>,
    occ_start: Vec<u32>,
    occ: Vec<u32>,
    switch_light_start: Vec<u32>,
    switch_lights: Vec<u32>,
}

impl SearchIndex {
    pub(crate) fn new(
        n_vars: usize,
        hard: &[XorConstraint],
        light_switches: &[Vec<usize>],
        n_switches: usize,
    ) -> Self {
        let mut cons_vars = vec![0u32; 3 * hard.len()];
        let mut cons_arity = Vec::with_capacity(hard.len());
        let mut cons_parity = Vec::with_capacity(hard.len());
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n_vars];
        for (c, con) in hard.iter().enumerate() {
            for (k, &v) in con.vars().iter().enumerate() {
                cons_vars[3 * c + k] = v as u32;
                lists[v].push(c as u32);
            }
            cons_arity.push(con.arity() as u8);
            cons_parity.push(con.parity());
        }
        let (occ_start, occ) = flatten(&lists);
        let mut per_switch: Vec<Vec<u32>> = vec![Vec::new(); n_switches];
        for (light, switches) in light_switches.iter().enumerate() {
            for &s in switches {
                per_switch[s].push(light as u32);
            }
        }
        let (switch_light_start, switch_lights) = flatten(&per_switch);
        Self { cons_vars, cons_arity, cons_parity, occ_start, occ, switch_light_start, switch_lights }
    }
}

fn flatten(lists: &[Vec<u32>]) -> (Vec<u32>, Vec<u32>) {
    let mut start = Vec::with_capacity(lists.len() + 1);
    let mut flat = Vec::new();
    start.push(0);
    for l in lists {
        flat.extend_from_slice(l);
        start.push(flat.len() as u32);
    }
    (start, flat)
}

enum Status {
    Found,
    Exhausted,
    TimedOut,
}

struct Search<'a> {
    inst: &'a MaxSatInstance,
    idx: &'a SearchIndex,
    value: Vec<u8>,
    trail: Vec<u32>,
    qhead: usize,
    light_odd: Vec<bool>,
    light_free: Vec<u32>,
    true_switches: usize,
    budget: usize,
    mark: Vec<u32>,
    epoch: u32,
    nodes: u64,
    deadline: Option<Instant>,
}

impl<'a> Search<'a> {
    fn new(inst: &'a MaxSatInstance, deadline: Option<Instant>) -> Self {
        let light_free = inst.light_switches.iter().map(|s| s.len() as u32).collect();
        Self {
            inst,
            idx: &inst.index,
            value: vec![UNASSIGNED; inst.n_vars()],
            trail: Vec::with_capacity(inst.n_vars()),
            qhead: 0,
            light_odd: (0..inst.n_lights()).map(|l| inst.assumptions.get(l)).collect(),
            light_free,
            true_switches: 0,
            budget: 0,
            mark: vec![0; inst.n_switches],
            epoch: 0,
            nodes: 0,
            deadline,
        }
    }

    fn is_switch(&self, var: usize) -> bool {
        var < self.inst.n_switches
    }

    fn switch_lights(&self, var: usize) -> &'a [u32] {
        let idx = self.idx;
        &idx.switch_lights[idx.switch_light_start[var] as usize..idx.switch_light_start[var + 1] as usize]
    }

    fn push(&mut self, var: usize, val: bool) {
        self.value[var] = val as u8;
        self.trail.push(var as u32);
        if self.is_switch(var) {
            for &l in self.switch_lights(var) {
                self.light_free[l as usize] -= 1;
                self.light_odd[l as usize] ^= val;
            }
            self.true_switches += val as usize;
        }
    }

    /// Assigns and propagates; `false` on conflict. The caller undoes.
    fn assign(&mut self, var: usize, val: bool) -> bool {
        self.push(var, val);
        self.propagate()
    }

    fn propagate(&mut self) -> bool {
        let idx = self.idx;
        while self.qhead < self.trail.len() {
            let var = self.trail[self.qhead] as usize;
            self.qhead += 1;
            for &c in &idx.occ[idx.occ_start[var] as usize..idx.occ_start[var + 1] as usize] {
                let c = c as usize;
                let vars = &idx.cons_vars[3 * c..3 * c + idx.cons_arity[c] as usize];
                let mut parity = idx.cons_parity[c];
                let mut free = None;
                let mut n_free = 0;
                for &v in vars {
                    match self.value[v as usize] {
                        UNASSIGNED => {
                            n_free += 1;
                            free = Some(v as usize);
                        }
                        x => parity ^= x == 1,
                    }
                }
                match (n_free, free) {
                    (0, _) if parity => return false,
                    (1, Some(v)) => self.push(v, parity),
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let var = self.trail.pop().unwrap() as usize;
            let val = self.value[var] == 1;
            self.value[var] = UNASSIGNED;
            if self.is_switch(var) {
                for &l in self.switch_lights(var) {
                    self.light_free[l as usize] += 1;
                    self.light_odd[l as usize] ^= val;
                }
                self.true_switches -= val as usize;
            }
        }
        self.qhead = self.qhead.min(len);
    }

    /// Greedy packing of lit lights with disjoint free switches, and the lit
    /// light with the fewest free switches.
    fn bound_and_branch_light(&mut self) -> (usize, Option<usize>) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.fill(0);
            self.epoch = 1;
        }
        let mut packed = 0;
        let mut branch: Option<usize> = None;
        for l in 0..self.light_odd.len() {
            if !self.light_odd[l] {
                continue;
            }
            let free = self.light_free[l];
            if branch.is_none_or(|b| free < self.light_free[b]) {
                branch = Some(l);
            }
            let switches = &self.inst.light_switches[l];
            let disjoint =
                switches.iter().all(|&s| self.value[s] != UNASSIGNED || self.mark[s] != self.epoch);
            if disjoint {
                packed += 1;
                for &s in switches {
                    if self.value[s] == UNASSIGNED {
                        self.mark[s] = self.epoch;
                    }
                }
            }
        }
        (packed, branch)
    }

    fn timed_out(&mut self) -> bool {
        self.nodes += 1;
        match self.deadline {
            Some(d) if self.nodes % DEADLINE_CHECK_INTERVAL == 1 => Instant::now() >= d,
            _ => false,
        }
    }

    fn dfs(&mut self) -> Status {
        if self.timed_out() {
            return Status::TimedOut;
        }
        if self.true_switches > self.budget {
            return Status::Exhausted;
        }
        let (lower, branch) = self.bound_and_branch_light();
        if self.true_switches + lower > self.budget {
            return Status::Exhausted;
        }
        let Some(light) = branch else {
            return self.complete_with_zeros();
        };
        let var = *self.inst.light_switches[light]
            .iter()
            .find(|&&s| self.value[s] == UNASSIGNED)
            .expect("propagation leaves no lit light without free switches");
        let save = self.trail.len();
        for val in [true, false] {
            if self.assign(var, val) {
                match self.dfs() {
                    Status::Exhausted => {}
                    other => return other,
                }
            }
            self.undo(save);
        }
        Status::Exhausted
    }

    /// No light is lit: turning every free switch off satisfies all parity
    /// constraints, and propagation fixes the helpers.
    fn complete_with_zeros(&mut self) -> Status {
        let save = self.trail.len();
        for s in 0..self.inst.n_switches {
            if self.value[s] == UNASSIGNED && !self.assign(s, false) {
                self.undo(save);
                return Status::Exhausted;
            }
        }
        Status::Found
    }

    fn assignment(&self) -> Assignment {
        let n = self.inst.n_vars();
        let values = BitVec::from_indices(n, (0..n).filter(|&v| self.value[v] == 1));
        let objective = self.inst.objective(&values);
        Assignment { values, objective }
    }
}

pub(super) fn solve(inst: &MaxSatInstance, timeout: Option<Duration>) -> SolveOutcome {
    let deadline = timeout.map(|t| Instant::now() + t);
    // Consistency and an upper bound from Gaussian elimination.
    let puzzle =
        LightsOutInstance::new(inst.n_switches, inst.light_switches.clone(), inst.assumptions.clone())
            .expect("encoded from a valid puzzle");
    let Some(particular) = puzzle.solve_any() else {
        return SolveOutcome::Unsatisfiable;
    };
    let upper = particular.weight();

    let mut search = Search::new(inst, deadline);
    for light in 0..inst.n_lights() {
        let var = inst.assumption_var(light);
        if search.value[var] == UNASSIGNED {
            search.push(var, inst.assumptions.get(light));
        }
    }
    if !search.propagate() {
        return SolveOutcome::Unsatisfiable;
    }
    let root = search.trail.len();
    let (lower, _) = search.bound_and_branch_light();
    for budget in (search.true_switches + lower)..=upper {
        search.budget = budget;
        match search.dfs() {
            Status::Found => {
                let assignment = search.assignment();
                debug_assert!(inst.first_violated(&assignment.values).is_none());
                return SolveOutcome::Optimal(assignment);
            }
            Status::TimedOut => return SolveOutcome::NonConverged,
            Status::Exhausted => search.undo(root),
        }
    }
    unreachable!("the elimination solution has weight {upper} and fits the last budget")
}
