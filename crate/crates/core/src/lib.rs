//! Exact minimum-weight decoding of triangular color codes.
//!
//! Decoding is phrased as a LightsOut variant (qubits are switches, checks
//! are lights, the syndrome is the initial light configuration) and solved
//! as a weighted partial MaxSAT problem whose hard part is a set of chained
//! XOR constraints. Around the decoder sit a Monte-Carlo harness for logical
//! error rates and a finite-size-scaling threshold fit.

pub mod analysis;
pub mod cli;
pub mod code;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod lightsout;
pub mod maxsat;
pub mod sim;

pub use code::{Color, ColorCode, Face};
pub use decoder::{DecodeResult, DecodeStatus, Decoder};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVec, EchelonForm};
pub use lightsout::{LightsOutInstance, SolutionSet};
pub use maxsat::{MaxSatInstance, SolveOutcome};
pub use sim::{NoiseModel, SimRecord};
