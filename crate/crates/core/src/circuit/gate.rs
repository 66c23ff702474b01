//! The fixed gate set every elaborated circuit is expressed in.

use std::fmt;

use serde::{Serialize, Serializer};

/// A gate of the elaborated base set: `u` and `cx` plus the standard-library
/// names that are kept as tagged instructions instead of being expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    U,
    CX,
    Id,
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    RX,
    RY,
    RZ,
    CZ,
    CY,
    CH,
    CP,
    CRZ,
    CU3,
    Swap,
    CCX,
}

impl Gate {
    pub const ALL: [Gate; 22] = [
        Gate::U,
        Gate::CX,
        Gate::Id,
        Gate::H,
        Gate::X,
        Gate::Y,
        Gate::Z,
        Gate::S,
        Gate::Sdg,
        Gate::T,
        Gate::Tdg,
        Gate::RX,
        Gate::RY,
        Gate::RZ,
        Gate::CZ,
        Gate::CY,
        Gate::CH,
        Gate::CP,
        Gate::CRZ,
        Gate::CU3,
        Gate::Swap,
        Gate::CCX,
    ];

    /// Canonical lower-case name, as written back to OpenQASM.
    pub fn name(self) -> &'static str {
        match self {
            Gate::U => "u",
            Gate::CX => "cx",
            Gate::Id => "id",
            Gate::H => "h",
            Gate::X => "x",
            Gate::Y => "y",
            Gate::Z => "z",
            Gate::S => "s",
            Gate::Sdg => "sdg",
            Gate::T => "t",
            Gate::Tdg => "tdg",
            Gate::RX => "rx",
            Gate::RY => "ry",
            Gate::RZ => "rz",
            Gate::CZ => "cz",
            Gate::CY => "cy",
            Gate::CH => "ch",
            Gate::CP => "cp",
            Gate::CRZ => "crz",
            Gate::CU3 => "cu3",
            Gate::Swap => "swap",
            Gate::CCX => "ccx",
        }
    }

    /// Resolves a source-level name to a tagged gate. `U`/`CX` are the
    /// language builtins; `cu1` is an alias of `cp`.
    pub fn from_name(name: &str) -> Option<Gate> {
        let gate = match name {
            "u" | "U" => Gate::U,
            "cx" | "CX" => Gate::CX,
            "id" => Gate::Id,
            "h" => Gate::H,
            "x" => Gate::X,
            "y" => Gate::Y,
            "z" => Gate::Z,
            "s" => Gate::S,
            "sdg" => Gate::Sdg,
            "t" => Gate::T,
            "tdg" => Gate::Tdg,
            "rx" => Gate::RX,
            "ry" => Gate::RY,
            "rz" => Gate::RZ,
            "cz" => Gate::CZ,
            "cy" => Gate::CY,
            "ch" => Gate::CH,
            "cp" | "cu1" => Gate::CP,
            "crz" => Gate::CRZ,
            "cu3" => Gate::CU3,
            "swap" => Gate::Swap,
            "ccx" => Gate::CCX,
            _ => return None,
        };
        Some(gate)
    }

    pub fn num_qubits(self) -> usize {
        match self {
            Gate::CX | Gate::CZ | Gate::CY | Gate::CH | Gate::CP | Gate::CRZ | Gate::CU3 | Gate::Swap => 2,
            Gate::CCX => 3,
            _ => 1,
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            Gate::U | Gate::CU3 => 3,
            Gate::RX | Gate::RY | Gate::RZ | Gate::CP | Gate::CRZ => 1,
            _ => 0,
        }
    }

    /// Number of leading operands that act as controls.
    pub fn num_controls(self) -> usize {
        match self {
            Gate::CX | Gate::CZ | Gate::CY | Gate::CH | Gate::CP | Gate::CRZ | Gate::CU3 => 1,
            Gate::CCX => 2,
            _ => 0,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, Gate::RX | Gate::RY | Gate::RZ)
    }

    /// Controlled-phase family used by QFT blocks.
    pub fn is_controlled_phase(self) -> bool {
        matches!(self, Gate::CP | Gate::CRZ)
    }

    /// The structural inverse: the gate and parameter vector whose unitary is
    /// the adjoint of `self(params)`.
    pub fn inverse(self, params: &[f64]) -> (Gate, Vec<f64>) {
        match self {
            Gate::S => (Gate::Sdg, vec![]),
            Gate::Sdg => (Gate::S, vec![]),
            Gate::T => (Gate::Tdg, vec![]),
            Gate::Tdg => (Gate::T, vec![]),
            Gate::RX | Gate::RY | Gate::RZ | Gate::CP | Gate::CRZ => (self, vec![-params[0]]),
            Gate::U | Gate::CU3 => (self, vec![-params[0], -params[2], -params[1]]),
            _ => (self, params.to_vec()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Gate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}
