//! OpenQASM 2.0 frontend: lexing, parsing with name resolution, and macro
//! elaboration into a [`Circuit`] over the tagged base gate set.
//!
//! The standard library `qelib1.inc` is compiled in. Its gate names are
//! accepted even without an explicit include.

pub mod ast;
mod elaborate;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError};
pub use ast::Program;
pub use elaborate::elaborate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QasmError {
    #[error("{loc}: syntax error: {message}")]
    Syntax { loc: Location, message: String },
    #[error("{loc}: unsupported OpenQASM version `{found}` (expected 2.0)")]
    Version { loc: Location, found: String },
    #[error("{loc}: unsupported: {what}")]
    Unsupported { loc: Location, what: String },
    #[error("{loc}: undeclared {kind} `{name}`")]
    Undeclared {
        loc: Location,
        kind: &'static str,
        name: String,
    },
    #[error("{loc}: `{name}` is already declared")]
    Redeclared { loc: Location, name: String },
    #[error("{loc}: index {index} out of range for `{name}` of size {size}")]
    IndexOutOfRange {
        loc: Location,
        name: String,
        index: usize,
        size: usize,
    },
    #[error("{loc}: opaque gate `{name}` has no definition to expand")]
    OpaqueInvocation { loc: Location, name: String },
    #[error("{loc}: gate `{name}` takes {expected} parameter(s), got {got}")]
    ParamCount {
        loc: Location,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("{loc}: gate `{name}` takes {expected} qubit(s), got {got}")]
    QubitCount {
        loc: Location,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("{loc}: register arguments have different sizes")]
    BroadcastMismatch { loc: Location },
    #[error("{loc}: {source}")]
    Circuit {
        loc: Location,
        #[source]
        source: CircuitError,
    },
}

impl QasmError {
    pub fn location(&self) -> Location {
        match self {
            QasmError::Syntax { loc, .. }
            | QasmError::Version { loc, .. }
            | QasmError::Unsupported { loc, .. }
            | QasmError::Undeclared { loc, .. }
            | QasmError::Redeclared { loc, .. }
            | QasmError::IndexOutOfRange { loc, .. }
            | QasmError::OpaqueInvocation { loc, .. }
            | QasmError::ParamCount { loc, .. }
            | QasmError::QubitCount { loc, .. }
            | QasmError::BroadcastMismatch { loc }
            | QasmError::Circuit { loc, .. } => *loc,
        }
    }
}

mod qelib1 {
    use std::collections::HashMap;
    use std::sync::OnceLock;

    use super::ast::GateMacro;
    use super::parser::Parser;

    const SOURCE: &str = include_str!("qelib1.inc");

    fn library() -> &'static (Vec<String>, HashMap<String, GateMacro>) {
        static LIB: OnceLock<(Vec<String>, HashMap<String, GateMacro>)> = OnceLock::new();
        LIB.get_or_init(|| {
            let macros = Parser::new(SOURCE, false)
                .and_then(|p| p.parse_library())
                .expect("builtin qelib1 parses");
            let names = macros.iter().map(|m| m.name.clone()).collect();
            let map = macros.into_iter().map(|m| (m.name.clone(), m)).collect();
            (names, map)
        })
    }

    pub fn names() -> impl Iterator<Item = &'static str> {
        library().0.iter().map(String::as_str)
    }

    pub fn macros() -> &'static HashMap<String, GateMacro> {
        &library().1
    }
}

/// Parses source text into a syntax tree.
pub fn parse(source: &str) -> Result<Program, QasmError> {
    parser::Parser::new(source, true)?.parse_program()
}

/// Parses and elaborates in one step.
pub fn parse_circuit(source: &str) -> Result<Circuit, QasmError> {
    elaborate(&parse(source)?)
}
