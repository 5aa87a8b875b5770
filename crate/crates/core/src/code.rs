//! Triangular 6.6.6 color codes.
//!
//! The lattice is built on a triangular point set with rows `0..=L`,
//! `L = 3(d-1)/2`, where row `i` holds positions `0..=i`. Points with
//! `(i + j) % 3 == 2` are hexagon centers (faces); every other point is a
//! qubit. A face acts on the qubits among its six lattice neighbours that lie
//! inside the triangle, giving weight-6 checks in the bulk and weight-4
//! checks on the boundary.
//!
//! Index order:
//! - qubits: the three corners (apex, bottom-left, bottom-right), then the
//!   remaining boundary qubits in a walk down the left side, along the
//!   bottom and back up the right side, then interior qubits row by row;
//! - faces: row by row, left to right.
//!
//! With this ordering the `d = 3` parity-check matrix is exactly
//! `[[1,0,0,1,0,1,1],[0,1,0,1,1,0,1],[0,0,1,0,1,1,1]]`, with faces blue,
//! green, red.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMatrix, BitVec, EchelonForm};

/// Largest nullspace dimension that brute-force enumeration will accept.
pub const ENUMERATION_LIMIT: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    fn from_row(row: usize) -> Self {
        match row % 3 {
            1 => Color::Blue,
            2 => Color::Green,
            _ => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        })
    }
}

/// A check of the code. `color` is absent for codes imported from a bare
/// parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<Color>,
    pub qubits: Vec<usize>,
}

/// A self-dual CSS code given by a single parity-check matrix, with lattice
/// metadata when it was generated here.
#[derive(Clone, Debug)]
pub struct ColorCode {
    distance: usize,
    faces: Vec<Face>,
    h: BitMatrix,
    logical: BitVec,
    qubit_coords: Vec<(usize, usize)>,
    echelon: EchelonForm,
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    distance: usize,
    n_qubits: usize,
    #[serde(default)]
    faces: Vec<Face>,
    #[serde(rename = "H")]
    h: Vec<String>,
    logical: String,
}

impl ColorCode {
    /// Builds the triangular color code of odd distance `d >= 3`.
    pub fn triangular(d: usize) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidDistance(d));
        }
        let side = 3 * (d - 1) / 2;
        let is_face = |i: usize, j: usize| (i + j) % 3 == 2;

        let mut coords: Vec<(usize, usize)> = vec![(0, 0), (side, 0), (side, side)];
        let boundary = (1..side)
            .map(|i| (i, 0))
            .chain((1..side).map(|j| (side, j)))
            .chain((1..side).rev().map(|i| (i, i)));
        coords.extend(boundary.filter(|&(i, j)| !is_face(i, j)));
        for i in 2..side {
            coords.extend((1..i).map(|j| (i, j)).filter(|&(i, j)| !is_face(i, j)));
        }

        let mut index_of = vec![vec![usize::MAX; side + 1]; side + 1];
        for (q, &(i, j)) in coords.iter().enumerate() {
            index_of[i][j] = q;
        }

        let mut faces = Vec::new();
        for i in 0..=side {
            for j in (0..=i).filter(|&j| is_face(i, j)) {
                let (i, j) = (i as isize, j as isize);
                let mut qubits: Vec<usize> = [(0, -1), (0, 1), (-1, -1), (-1, 0), (1, 0), (1, 1)]
                    .iter()
                    .map(|(di, dj)| (i + di, j + dj))
                    .filter(|&(a, b)| a >= 0 && b >= 0 && b <= a && a <= side as isize)
                    .map(|(a, b)| index_of[a as usize][b as usize])
                    .collect();
                qubits.sort_unstable();
                faces.push(Face { index: faces.len(), color: Some(Color::from_row(i as usize)), qubits });
            }
        }

        let n = coords.len();
        let rows = faces.iter().map(|f| BitVec::from_indices(n, f.qubits.iter().copied())).collect();
        let h = BitMatrix::from_rows(n, rows)?;
        // String along the left side of the triangle.
        let logical =
            BitVec::from_indices(n, coords.iter().enumerate().filter(|(_, &(_, j))| j == 0).map(|(q, _)| q));
        let echelon = EchelonForm::new(&h);
        Ok(Self { distance: d, faces, h, logical, qubit_coords: coords, echelon })
    }

    /// Wraps an arbitrary parity-check matrix. Faces are derived from the
    /// rows and carry no color.
    pub fn from_check_matrix(distance: usize, h: BitMatrix, logical: BitVec) -> Result<Self> {
        check_len("logical operator", h.n_cols(), logical.len())?;
        let faces = h
            .rows()
            .iter()
            .enumerate()
            .map(|(index, r)| Face { index, color: None, qubits: r.iter_ones().collect() })
            .collect();
        let echelon = EchelonForm::new(&h);
        Ok(Self { distance, faces, h, logical, qubit_coords: Vec::new(), echelon })
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn n_qubits(&self) -> usize {
        self.h.n_cols()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn check_matrix(&self) -> &BitMatrix {
        &self.h
    }

    pub fn logical(&self) -> &BitVec {
        &self.logical
    }

    /// `(row, position-in-row)` of each qubit; empty for imported codes.
    pub fn qubit_coords(&self) -> &[(usize, usize)] {
        &self.qubit_coords
    }

    pub fn echelon(&self) -> &EchelonForm {
        &self.echelon
    }

    /// Number of faces each qubit belongs to.
    pub fn qubit_valence(&self) -> Vec<usize> {
        let mut valence = vec![0; self.n_qubits()];
        for f in &self.faces {
            for &q in &f.qubits {
                valence[q] += 1;
            }
        }
        valence
    }

    pub fn syndrome(&self, error: &BitVec) -> Result<BitVec> {
        self.h.mul_vec(error)
    }

    /// Whether a zero-syndrome residual acts nontrivially on the encoded
    /// information.
    pub fn is_logical_error(&self, residual: &BitVec) -> Result<bool> {
        if !self.syndrome(residual)?.is_zero() {
            return Err(Error::ResidualNotInKernel);
        }
        Ok(!self.echelon.in_rowspace(residual)?)
    }

    /// Minimum weight of a kernel element outside the rowspace, by
    /// exhaustive enumeration of the kernel.
    pub fn distance_bruteforce(&self) -> Result<usize> {
        let basis = self.echelon.nullspace_basis();
        if basis.len() > ENUMERATION_LIMIT {
            return Err(Error::EnumerationLimit { dimension: basis.len(), limit: ENUMERATION_LIMIT });
        }
        // Rowspace remainders are linear, so they can be Gray-coded alongside
        // the kernel element itself.
        let remainders = basis.iter().map(|v| self.echelon.remainder(v)).collect::<Result<Vec<_>>>()?;
        let mut current = BitVec::zeros(self.n_qubits());
        let mut remainder = BitVec::zeros(self.n_qubits());
        let mut best = usize::MAX;
        for step in 1u64..(1u64 << basis.len()) {
            let bit = step.trailing_zeros() as usize;
            current.xor_assign(&basis[bit]);
            remainder.xor_assign(&remainders[bit]);
            if !remainder.is_zero() {
                best = best.min(current.weight());
            }
        }
        if best == usize::MAX {
            return Err(Error::InvalidArgument("code has no nontrivial logical operator".into()));
        }
        Ok(best)
    }

    pub fn to_json(&self) -> Result<String> {
        let json = CodeJson {
            distance: self.distance,
            n_qubits: self.n_qubits(),
            faces: self.faces.clone(),
            h: self.h.rows().iter().map(BitVec::to_string).collect(),
            logical: self.logical.to_string(),
        };
        Ok(serde_json::to_string_pretty(&json)?)
    }

    /// Parses the JSON interchange format written by [`ColorCode::to_json`].
    /// The `H` rows are authoritative; a `faces` list, when present, must
    /// agree with them.
    pub fn from_json(text: &str) -> Result<Self> {
        let json: CodeJson = serde_json::from_str(text)?;
        let rows = json.h.iter().map(|r| r.parse()).collect::<Result<Vec<BitVec>>>()?;
        let h = BitMatrix::from_rows(json.n_qubits, rows)?;
        let logical: BitVec = json.logical.parse()?;
        let mut code = Self::from_check_matrix(json.distance, h, logical)?;
        if !json.faces.is_empty() {
            check_len("face list", code.faces.len(), json.faces.len())?;
            for (derived, given) in code.faces.iter_mut().zip(json.faces) {
                let mut qubits = given.qubits.clone();
                qubits.sort_unstable();
                if given.index != derived.index || qubits != derived.qubits {
                    return Err(Error::Parse(format!(
                        "face {} does not match row {} of H",
                        given.index, derived.index
                    )));
                }
                derived.color = given.color;
            }
        }
        Ok(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_three_matches_reference_matrix() {
        let code = ColorCode::triangular(3).unwrap();
        let expected =
            BitMatrix::from_dense(&[&[1, 0, 0, 1, 0, 1, 1], &[0, 1, 0, 1, 1, 0, 1], &[0, 0, 1, 0, 1, 1, 1]])
                .unwrap();
        assert_eq!(code.check_matrix(), &expected);
        let colors: Vec<_> = code.faces().iter().map(|f| f.color.unwrap()).collect();
        assert_eq!(colors, vec![Color::Blue, Color::Green, Color::Red]);
        assert_eq!(code.qubit_coords()[0], (0, 0));
        assert_eq!(code.logical().to_string(), "1101000");
    }

    #[test]
    fn rejects_bad_distances() {
        for d in [0, 1, 2, 4, 10] {
            assert!(matches!(ColorCode::triangular(d), Err(Error::InvalidDistance(_))));
        }
    }

    #[test]
    fn parameter_identities() {
        for d in (3..=21).step_by(2) {
            let code = ColorCode::triangular(d).unwrap();
            let n = (3 * d * d + 1) / 4;
            assert_eq!(code.n_qubits(), n, "d={d}");
            assert_eq!(code.n_faces(), (n - 1) / 2, "d={d}");
            assert_eq!(code.check_matrix().rank(), code.n_faces(), "d={d}");
        }
        assert_eq!(ColorCode::triangular(5).unwrap().n_faces(), 9);
        assert_eq!(ColorCode::triangular(21).unwrap().n_qubits(), 331);
    }

    #[test]
    fn structural_invariants() {
        for d in (3..=15).step_by(2) {
            let code = ColorCode::triangular(d).unwrap();
            let h = code.check_matrix();
            for f in code.faces() {
                assert!(matches!(f.qubits.len(), 4 | 6), "d={d} face {}", f.index);
            }
            assert!(h.mul_vec(code.logical()).unwrap().is_zero());
            assert!(!h.in_rowspace(code.logical()).unwrap());
            assert_eq!(code.logical().weight(), d);

            // Same-colored faces are disjoint.
            for a in code.faces() {
                for b in code.faces().iter().filter(|b| b.index > a.index) {
                    if a.color == b.color {
                        assert!(a.qubits.iter().all(|q| !b.qubits.contains(q)));
                    }
                }
            }

            // Valence: corners 1, other boundary qubits 2, interior 3.
            let side = 3 * (d - 1) / 2;
            let valence = code.qubit_valence();
            for (q, &(i, j)) in code.qubit_coords().iter().enumerate() {
                let corner = (i, j) == (0, 0) || (i == side && (j == 0 || j == side));
                let edge = j == 0 || i == side || i == j;
                let expected = if corner {
                    1
                } else if edge {
                    2
                } else {
                    3
                };
                assert_eq!(valence[q], expected, "d={d} qubit {q} at {:?}", (i, j));
            }
        }
    }

    #[test]
    fn syndrome_examples() {
        let code = ColorCode::triangular(3).unwrap();
        assert_eq!(code.syndrome(&BitVec::unit(7, 0)).unwrap().to_string(), "100");
        assert_eq!(code.syndrome(&BitVec::unit(7, 6)).unwrap().to_string(), "111");
        assert!(code.syndrome(&BitVec::zeros(7)).unwrap().is_zero());
        assert!(code.syndrome(&BitVec::zeros(6)).is_err());
    }

    #[test]
    fn logical_error_classification() {
        let code = ColorCode::triangular(3).unwrap();
        assert!(!code.is_logical_error(&BitVec::zeros(7)).unwrap());
        assert!(code.is_logical_error(&"1101000".parse().unwrap()).unwrap());
        assert!(!code.is_logical_error(code.check_matrix().row(0)).unwrap());
        assert!(matches!(code.is_logical_error(&BitVec::unit(7, 0)), Err(Error::ResidualNotInKernel)));
    }

    #[test]
    fn bruteforce_distance() {
        for d in [3, 5, 7] {
            let code = ColorCode::triangular(d).unwrap();
            assert_eq!(code.distance_bruteforce().unwrap(), d);
        }
        let big = ColorCode::triangular(11).unwrap();
        assert!(matches!(big.distance_bruteforce(), Err(Error::EnumerationLimit { .. })));
    }

    #[test]
    fn json_round_trip() {
        let code = ColorCode::triangular(5).unwrap();
        let text = code.to_json().unwrap();
        let back = ColorCode::from_json(&text).unwrap();
        assert_eq!(back.check_matrix(), code.check_matrix());
        assert_eq!(back.logical(), code.logical());
        assert_eq!(back.faces(), code.faces());
        assert_eq!(back.distance(), 5);
    }

    #[test]
    fn json_without_faces_is_accepted() {
        let text = r#"{"distance":3,"n_qubits":7,"H":["1001011","0101101","0010111"],"logical":"1101000"}"#;
        let code = ColorCode::from_json(text).unwrap();
        assert_eq!(code.n_faces(), 3);
        assert_eq!(code.faces()[0].qubits, vec![0, 3, 5, 6]);
        assert_eq!(code.faces()[0].color, None);
    }
}
