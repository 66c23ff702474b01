//! Detection of quantum computing patterns in OpenQASM 2.0 circuits.
//!
//! The pipeline is: [`qasm`] parses and elaborates source text into a
//! [`circuit::Circuit`]; [`sim`] produces the per-instruction state trace;
//! [`detect`] runs the state-based and circuit-based pattern detectors;
//! [`bench`] scores detectors against labelled corpora and measures runtime.

pub mod bench;
pub mod circuit;
pub mod cli;
pub mod detect;
pub mod numerics;
pub mod qasm;
pub mod sim;
