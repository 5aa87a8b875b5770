//! LightsOut incidence structures.
//!
//! An instance is a set of lights, each toggled by a list of switches, plus
//! an initial light configuration. Toggling is XOR, so a switch pressed twice
//! is a no-op and the order of presses never matters: the final light state
//! is `init ⊕ A·x` for the light/switch incidence matrix `A` and the switch
//! set `x`.
//!
//! Three families are provided: the classic square-grid puzzle, the color
//! code variant (qubits are switches, faces are lights) and a time-stacked
//! variant for repeated noisy syndrome measurements.

use std::fmt;
use std::str::FromStr;

use crate::code::ColorCode;
use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Lights stored light-major: `toggles[l]` lists the switches that toggle
/// light `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LightsOutInstance {
    n_switches: usize,
    toggles: Vec<Vec<usize>>,
    init: BitVec,
}

/// A set of pressed switches that turns every light off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub switches: BitVec,
}

impl SolutionSet {
    pub fn weight(&self) -> usize {
        self.switches.weight()
    }
}

impl LightsOutInstance {
    pub fn new(n_switches: usize, toggles: Vec<Vec<usize>>, init: BitVec) -> Result<Self> {
        check_len("initial light configuration", toggles.len(), init.len())?;
        for (light, list) in toggles.iter().enumerate() {
            let mut seen = vec![false; n_switches];
            for &s in list {
                if s >= n_switches {
                    return Err(Error::InvalidArgument(format!(
                        "light {light} references switch {s} but there are only {n_switches}"
                    )));
                }
                if std::mem::replace(&mut seen[s], true) {
                    return Err(Error::InvalidArgument(format!("light {light} lists switch {s} twice")));
                }
            }
        }
        Ok(Self { n_switches, toggles, init })
    }

    /// Color code variant: one switch per qubit, one light per face, lit
    /// where the syndrome is 1.
    pub fn from_color_code(code: &ColorCode, syndrome: &BitVec) -> Result<Self> {
        check_len("syndrome", code.n_faces(), syndrome.len())?;
        let toggles = code.faces().iter().map(|f| f.qubits.clone()).collect();
        Self::new(code.n_qubits(), toggles, syndrome.clone())
    }

    /// Classic `rows × cols` puzzle: each cell is both a switch and a light,
    /// and a switch toggles its own cell plus its von Neumann neighbours.
    pub fn classic_square(rows: usize, cols: usize, init: BitVec) -> Result<Self> {
        check_len("initial light configuration", rows * cols, init.len())?;
        let mut toggles = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let mut cell = Vec::with_capacity(5);
                if r > 0 {
                    cell.push((r - 1) * cols + c);
                }
                if c > 0 {
                    cell.push(r * cols + c - 1);
                }
                cell.push(r * cols + c);
                if c + 1 < cols {
                    cell.push(r * cols + c + 1);
                }
                if r + 1 < rows {
                    cell.push((r + 1) * cols + c);
                }
                toggles.push(cell);
            }
        }
        Self::new(rows * cols, toggles, init)
    }

    /// Time-stacked puzzle for `rounds` syndrome measurement rounds, with all
    /// lights initially off.
    ///
    /// Light `(f, t)` is the detector comparing round `t` with round `t - 1`
    /// (round `-1` reads all zeros). Data switch `(q, t)` is a flip of qubit
    /// `q` arriving just before round `t`: every later round sees it, so after
    /// differencing it only toggles the lights `(f, t)` of faces containing
    /// `q`. Time-like switch `(f, t)`, for `t < rounds - 1`, is a faulty
    /// outcome of face `f` in round `t` and toggles `(f, t)` and `(f, t + 1)`.
    /// The last round is taken to be noiseless, so it has no time-like
    /// switches above it.
    ///
    /// Indexing: light `(f, t)` is `t·F + f`; data switch `(q, t)` is
    /// `t·Q + q`; time-like switch `(f, t)` is `rounds·Q + t·F + f`.
    pub fn build_stack(code: &ColorCode, rounds: usize) -> Result<Self> {
        if rounds < 1 {
            return Err(Error::InvalidArgument("rounds must be at least 1".into()));
        }
        let (n_faces, n_qubits) = (code.n_faces(), code.n_qubits());
        let data_switches = n_qubits * rounds;
        let mut toggles = Vec::with_capacity(n_faces * rounds);
        for t in 0..rounds {
            for face in code.faces() {
                let mut list: Vec<usize> = face.qubits.iter().map(|&q| t * n_qubits + q).collect();
                if t > 0 {
                    list.push(data_switches + (t - 1) * n_faces + face.index);
                }
                if t + 1 < rounds {
                    list.push(data_switches + t * n_faces + face.index);
                }
                toggles.push(list);
            }
        }
        let n_switches = data_switches + n_faces * (rounds - 1);
        Self::new(n_switches, toggles, BitVec::zeros(n_faces * rounds))
    }

    pub fn n_switches(&self) -> usize {
        self.n_switches
    }

    pub fn n_lights(&self) -> usize {
        self.toggles.len()
    }

    pub fn toggles(&self) -> &[Vec<usize>] {
        &self.toggles
    }

    pub fn init(&self) -> &BitVec {
        &self.init
    }

    pub fn set_init(&mut self, init: BitVec) -> Result<()> {
        check_len("initial light configuration", self.n_lights(), init.len())?;
        self.init = init;
        Ok(())
    }

    pub fn with_init(&self, init: BitVec) -> Result<Self> {
        let mut out = self.clone();
        out.set_init(init)?;
        Ok(out)
    }

    /// Switch-major view: the lights each switch toggles.
    pub fn switch_lights(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_switches];
        for (light, list) in self.toggles.iter().enumerate() {
            for &s in list {
                out[s].push(light);
            }
        }
        out
    }

    /// Incidence matrix with one row per light and one column per switch.
    pub fn incidence(&self) -> BitMatrix {
        let rows = self
            .toggles
            .iter()
            .map(|list| BitVec::from_indices(self.n_switches, list.iter().copied()))
            .collect();
        BitMatrix::from_rows(self.n_switches, rows).expect("rows built with n_switches columns")
    }

    /// Light state after pressing `switches`, starting from `init`.
    pub fn lights_after(&self, switches: &BitVec) -> Result<BitVec> {
        check_len("switch set", self.n_switches, switches.len())?;
        let mut state = self.init.clone();
        for (light, list) in self.toggles.iter().enumerate() {
            if list.iter().fold(false, |acc, &s| acc ^ switches.get(s)) {
                state.flip(light);
            }
        }
        Ok(state)
    }

    pub fn is_solution(&self, switches: &BitVec) -> Result<bool> {
        Ok(self.lights_after(switches)?.is_zero())
    }

    /// Some solution by Gaussian elimination; not necessarily minimal.
    pub fn solve_any(&self) -> Option<SolutionSet> {
        self.incidence()
            .solve(&self.init)
            .expect("init length is checked on construction")
            .map(|switches| SolutionSet { switches })
    }
}

/// Fixture format: a `switches lights` header, one line of switch indices per
/// light, then the initial configuration as a bit string.
impl fmt::Display for LightsOutInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n_switches, self.n_lights())?;
        for list in &self.toggles {
            let parts: Vec<String> = list.iter().map(usize::to_string).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        writeln!(f, "{}", self.init)
    }
}

impl FromStr for LightsOutInstance {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header token {t:?}"))))
            .collect::<Result<_>>()?;
        let [n_switches, n_lights] = nums[..] else {
            return Err(Error::Parse(format!("header must be `switches lights`, got {header:?}")));
        };
        let mut toggles = Vec::with_capacity(n_lights);
        for light in 0..n_lights {
            let line =
                lines.next().ok_or_else(|| Error::Parse(format!("missing toggle line for light {light}")))?;
            let list = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad switch index {t:?}"))))
                .collect::<Result<Vec<usize>>>()?;
            toggles.push(list);
        }
        let init: BitVec = lines.next().unwrap_or("").parse()?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after init line".into()));
        }
        Self::new(n_switches, toggles, init)
    }
}
