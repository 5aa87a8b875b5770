//! Syndrome in, minimum-weight estimate out.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::code::{ColorCode, ENUMERATION_LIMIT};
use crate::error::{check_len, Error, Result};
use crate::gf2::BitVec;
use crate::lightsout::LightsOutInstance;
use crate::maxsat::{MaxSatInstance, SolveOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeStatus {
    Optimal,
    NonConverged,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    /// Minimum-weight estimate when `status` is optimal, all zeros otherwise.
    pub estimate: BitVec,
    pub weight: usize,
    pub status: DecodeStatus,
    /// Time spent inside the MaxSAT solver only.
    pub solve_time: Duration,
}

/// A decoder with the MaxSAT instance encoded once; each call only swaps the
/// syndrome in. Clone one per worker thread.
#[derive(Clone, Debug)]
pub struct Decoder {
    n_qubits: usize,
    instance: MaxSatInstance,
}

impl Decoder {
    pub fn new(code: &ColorCode) -> Self {
        let puzzle = LightsOutInstance::from_color_code(code, &BitVec::zeros(code.n_faces()))
            .expect("syndrome length matches the face count");
        Self { n_qubits: code.n_qubits(), instance: MaxSatInstance::encode(&puzzle) }
    }

    pub fn instance(&self) -> &MaxSatInstance {
        &self.instance
    }

    pub fn decode(&mut self, syndrome: &BitVec, timeout: Option<Duration>) -> Result<DecodeResult> {
        self.instance.set_syndrome(syndrome)?;
        let start = Instant::now();
        let outcome = self.instance.solve(timeout);
        let solve_time = start.elapsed();
        match outcome {
            SolveOutcome::Optimal(a) => Ok(DecodeResult {
                estimate: a.switches(self.n_qubits),
                weight: a.objective,
                status: DecodeStatus::Optimal,
                solve_time,
            }),
            SolveOutcome::NonConverged => Ok(DecodeResult {
                estimate: BitVec::zeros(self.n_qubits),
                weight: 0,
                status: DecodeStatus::NonConverged,
                solve_time,
            }),
            SolveOutcome::Unsatisfiable => Err(Error::Unsatisfiable),
        }
    }
}

/// One-shot decode. Prefer [`Decoder`] when decoding many syndromes.
pub fn decode(code: &ColorCode, syndrome: &BitVec, timeout: Option<Duration>) -> Result<DecodeResult> {
    check_len("syndrome", code.n_faces(), syndrome.len())?;
    Decoder::new(code).decode(syndrome, timeout)
}

/// Minimum-weight solution of `H·x = s` by enumerating the whole coset
/// `x0 + ker H`. Ties go to the lexicographically smallest vector (bit 0
/// read first).
pub fn decode_oracle(code: &ColorCode, syndrome: &BitVec) -> Result<BitVec> {
    check_len("syndrome", code.n_faces(), syndrome.len())?;
    let echelon = code.echelon();
    let basis = echelon.nullspace_basis();
    if basis.len() > ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit { dimension: basis.len(), limit: ENUMERATION_LIMIT });
    }
    let mut current = echelon.solve(syndrome)?.ok_or(Error::Unsatisfiable)?;
    let mut best = current.clone();
    let mut best_weight = best.weight();
    for step in 1u64..(1u64 << basis.len()) {
        current.xor_assign(&basis[step.trailing_zeros() as usize]);
        let w = current.weight();
        if w < best_weight || (w == best_weight && current.lex_cmp(&best) == Ordering::Less) {
            best.clone_from(&current);
            best_weight = w;
        }
    }
    Ok(best)
}

/// Minimum weight of an `r` with `H·r = 0` and odd overlap with the stored
/// logical operator, i.e. the lightest nontrivial logical operator. `None`
/// if the solver hit the timeout.
pub fn estimate_distance(code: &ColorCode, timeout: Option<Duration>) -> Result<Option<usize>> {
    let mut toggles: Vec<Vec<usize>> = code.faces().iter().map(|f| f.qubits.clone()).collect();
    toggles.push(code.logical().iter_ones().collect());
    let mut init = BitVec::zeros(toggles.len());
    init.set(toggles.len() - 1, true);
    let puzzle = LightsOutInstance::new(code.n_qubits(), toggles, init)?;
    match MaxSatInstance::encode(&puzzle).solve(timeout) {
        SolveOutcome::Optimal(a) => Ok(Some(a.objective)),
        SolveOutcome::NonConverged => Ok(None),
        SolveOutcome::Unsatisfiable => Err(Error::Unsatisfiable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> ColorCode {
        ColorCode::triangular(3).unwrap()
    }

    #[test]
    fn decode_examples() {
        let code = d3();
        let r = decode(&code, &"100".parse().unwrap(), None).unwrap();
        assert_eq!(r.status, DecodeStatus::Optimal);
        assert_eq!(r.weight, 1);
        assert_eq!(r.estimate, BitVec::unit(7, 0));

        let r = decode(&code, &BitVec::zeros(3), None).unwrap();
        assert_eq!(r.weight, 0);
        assert!(r.estimate.is_zero());

        let r = decode(&code, &"110".parse().unwrap(), None).unwrap();
        assert_eq!(r.weight, 1);
        assert_eq!(r.estimate, BitVec::unit(7, 3));

        assert!(decode(&code, &BitVec::zeros(4), None).is_err());
    }

    #[test]
    fn oracle_examples() {
        let code = d3();
        assert_eq!(decode_oracle(&code, &"100".parse().unwrap()).unwrap(), BitVec::unit(7, 0));
        assert!(decode_oracle(&code, &BitVec::zeros(3)).unwrap().is_zero());
        // Every d = 3 syndrome is fixed by a single qubit.
        for mask in 0..8u32 {
            let s = BitVec::from_indices(3, (0..3).filter(|i| mask >> i & 1 == 1));
            let est = decode_oracle(&code, &s).unwrap();
            assert_eq!(code.syndrome(&est).unwrap(), s);
            assert_eq!(est.weight(), usize::from(mask != 0));
        }
        let big = ColorCode::triangular(11).unwrap();
        assert!(matches!(
            decode_oracle(&big, &BitVec::zeros(big.n_faces())),
            Err(Error::EnumerationLimit { .. })
        ));
    }

    #[test]
    fn timeout_yields_all_zeros() {
        let code = ColorCode::triangular(7).unwrap();
        let mut e = BitVec::zeros(code.n_qubits());
        for q in [1, 5, 9, 20, 30] {
            e.set(q, true);
        }
        let r = Decoder::new(&code).decode(&code.syndrome(&e).unwrap(), Some(Duration::ZERO)).unwrap();
        assert_eq!(r.status, DecodeStatus::NonConverged);
        assert!(r.estimate.is_zero());
    }

    #[test]
    fn distance_estimates() {
        for d in [3, 5, 7] {
            let code = ColorCode::triangular(d).unwrap();
            assert_eq!(estimate_distance(&code, None).unwrap(), Some(d));
        }
    }
}
