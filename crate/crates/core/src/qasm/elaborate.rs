//! Macro expansion from a [`Program`] down to the tagged base gate set.

use std::collections::HashMap;

use super::ast::*;
use super::{qelib1, Location, QasmError};
use crate::circuit::{Circuit, Gate, Guard, Instruction, Op};

enum Resolved<'a> {
    Tagged(Gate),
    Macro(&'a GateMacro, bool),
    Opaque,
}

struct Expander<'a> {
    user: HashMap<&'a str, &'a GateMacro>,
    opaque: Vec<&'a str>,
    library: &'static HashMap<String, GateMacro>,
    circuit: Circuit,
}

impl<'a> Expander<'a> {
    fn resolve(&self, name: &str, in_library: bool) -> Option<Resolved<'a>> {
        if !in_library {
            if let Some(def) = self.user.get(name) {
                return Some(Resolved::Macro(def, false));
            }
            if self.opaque.contains(&name) {
                return Some(Resolved::Opaque);
            }
        }
        if let Some(gate) = Gate::from_name(name) {
            return Some(Resolved::Tagged(gate));
        }
        self.library.get(name).map(|def| Resolved::Macro(def, true))
    }

    fn push(&mut self, instruction: Instruction, loc: Location) -> Result<(), QasmError> {
        self.circuit
            .push(instruction)
            .map(|_| ())
            .map_err(|source| QasmError::Circuit { loc, source })
    }

    fn expand(
        &mut self,
        name: &str,
        params: &[f64],
        qubits: &[usize],
        guard: &Option<Guard>,
        loc: Location,
        in_library: bool,
    ) -> Result<(), QasmError> {
        let resolved = self.resolve(name, in_library).ok_or_else(|| QasmError::Undeclared {
            loc,
            kind: "gate",
            name: name.to_string(),
        })?;
        let (expected_params, expected_qubits) = match &resolved {
            Resolved::Tagged(g) => (g.num_params(), g.num_qubits()),
            Resolved::Macro(def, _) => (def.params.len(), def.qubits.len()),
            Resolved::Opaque => {
                return Err(QasmError::OpaqueInvocation {
                    loc,
                    name: name.to_string(),
                })
            }
        };
        if params.len() != expected_params {
            return Err(QasmError::ParamCount {
                loc,
                name: name.to_string(),
                expected: expected_params,
                got: params.len(),
            });
        }
        if qubits.len() != expected_qubits {
            return Err(QasmError::QubitCount {
                loc,
                name: name.to_string(),
                expected: expected_qubits,
                got: qubits.len(),
            });
        }
        match resolved {
            Resolved::Tagged(gate) => {
                let mut inst = Instruction::gate(gate, params.to_vec(), qubits.to_vec());
                inst.guard = guard.clone();
                self.push(inst, loc)
            }
            Resolved::Macro(def, library) => {
                let bind = |formal: &String| -> usize {
                    let pos = def
                        .qubits
                        .iter()
                        .position(|q| q == formal)
                        .expect("formal checked at parse");
                    qubits[pos]
                };
                for stmt in &def.body {
                    match stmt {
                        BodyStatement::Call {
                            name: callee,
                            params: exprs,
                            qubits: formals,
                            ..
                        } => {
                            let values: Vec<f64> = exprs.iter().map(|e| e.eval(&def.params, params)).collect();
                            let actual: Vec<usize> = formals.iter().map(bind).collect();
                            self.expand(callee, &values, &actual, guard, loc, library)?;
                        }
                        BodyStatement::Barrier { qubits: formals, .. } => {
                            if guard.is_none() {
                                let mut actual: Vec<usize> = Vec::new();
                                for q in formals.iter().map(bind) {
                                    if !actual.contains(&q) {
                                        actual.push(q);
                                    }
                                }
                                self.push(Instruction::barrier(actual), loc)?;
                            }
                        }
                    }
                }
                Ok(())
            }
            Resolved::Opaque => unreachable!(),
        }
    }

    fn qubits_of(&self, arg: &Argument) -> Result<Vec<usize>, QasmError> {
        let reg = self.circuit.qreg(&arg.name).ok_or_else(|| QasmError::Undeclared {
            loc: arg.loc,
            kind: "quantum register",
            name: arg.name.clone(),
        })?;
        Self::indices(reg.start, reg.size, arg)
    }

    fn clbits_of(&self, arg: &Argument) -> Result<Vec<usize>, QasmError> {
        let reg = self.circuit.creg(&arg.name).ok_or_else(|| QasmError::Undeclared {
            loc: arg.loc,
            kind: "classical register",
            name: arg.name.clone(),
        })?;
        Self::indices(reg.start, reg.size, arg)
    }

    fn indices(start: usize, size: usize, arg: &Argument) -> Result<Vec<usize>, QasmError> {
        match arg.index {
            Some(i) if i < size => Ok(vec![start + i]),
            Some(i) => Err(QasmError::IndexOutOfRange {
                loc: arg.loc,
                name: arg.name.clone(),
                index: i,
                size,
            }),
            None => Ok((start..start + size).collect()),
        }
    }
}

/// Expands `args` (each a single qubit or a whole register) into per-call
/// operand lists. Whole registers must agree in size.
fn broadcast(args: &[(Vec<usize>, bool)], loc: Location) -> Result<Vec<Vec<usize>>, QasmError> {
    let mut width: Option<usize> = None;
    for (qubits, whole) in args {
        if *whole {
            match width {
                None => width = Some(qubits.len()),
                Some(w) if w != qubits.len() => return Err(QasmError::BroadcastMismatch { loc }),
                _ => {}
            }
        }
    }
    let Some(width) = width else {
        return Ok(vec![args.iter().map(|(q, _)| q[0]).collect()]);
    };
    Ok((0..width)
        .map(|i| args.iter().map(|(q, whole)| if *whole { q[i] } else { q[0] }).collect())
        .collect())
}

/// Inlines every gate macro and flattens qubits to global indices.
pub fn elaborate(program: &Program) -> Result<Circuit, QasmError> {
    let mut expander = Expander {
        user: HashMap::new(),
        opaque: Vec::new(),
        library: qelib1::macros(),
        circuit: Circuit::default(),
    };
    for decl in &program.declarations {
        match decl {
            Declaration::QReg { name, size, .. } => {
                expander.circuit.add_qreg(name, *size);
            }
            Declaration::CReg { name, size, .. } => {
                expander.circuit.add_creg(name, *size);
            }
            Declaration::Gate(def) => {
                for stmt in &def.body {
                    if let BodyStatement::Call { name, loc, .. } = stmt {
                        if name == &def.name || expander.resolve(name, false).is_none() {
                            return Err(QasmError::Undeclared {
                                loc: *loc,
                                kind: "gate",
                                name: name.clone(),
                            });
                        }
                    }
                }
                expander.user.insert(def.name.as_str(), def);
            }
            Declaration::Opaque { name, .. } => expander.opaque.push(name.as_str()),
        }
    }

    for stmt in &program.statements {
        let loc = stmt.loc;
        let guard = match &stmt.guard {
            Some(cond) => {
                if expander.circuit.creg(&cond.register).is_none() {
                    return Err(QasmError::Undeclared {
                        loc,
                        kind: "classical register",
                        name: cond.register.clone(),
                    });
                }
                Some(Guard {
                    register: cond.register.clone(),
                    value: cond.value,
                })
            }
            None => None,
        };
        match &stmt.kind {
            StatementKind::Call { name, params, args } => {
                let values: Vec<f64> = params.iter().map(|e| e.eval(&[], &[])).collect();
                let resolved: Vec<(Vec<usize>, bool)> = args
                    .iter()
                    .map(|a| Ok((expander.qubits_of(a)?, a.index.is_none())))
                    .collect::<Result<_, QasmError>>()?;
                for operands in broadcast(&resolved, loc)? {
                    expander.expand(name, &values, &operands, &guard, loc, false)?;
                }
            }
            StatementKind::Measure { qubit, target } => {
                let qubits = expander.qubits_of(qubit)?;
                let clbits = expander.clbits_of(target)?;
                if qubits.len() != clbits.len() {
                    return Err(QasmError::BroadcastMismatch { loc });
                }
                for (q, c) in qubits.into_iter().zip(clbits) {
                    let mut inst = Instruction::measure(q, c);
                    inst.guard = guard.clone();
                    expander.push(inst, loc)?;
                }
            }
            StatementKind::Reset(arg) => {
                if guard.is_some() {
                    return Err(QasmError::Unsupported {
                        loc,
                        what: "conditioned reset".into(),
                    });
                }
                for q in expander.qubits_of(arg)? {
                    expander.push(Instruction::reset(q), loc)?;
                }
            }
            StatementKind::Barrier(args) => {
                let mut qubits = Vec::new();
                for arg in args {
                    for q in expander.qubits_of(arg)? {
                        if !qubits.contains(&q) {
                            qubits.push(q);
                        }
                    }
                }
                expander.push(
                    Instruction {
                        op: Op::Barrier,
                        qubits,
                        guard: None,
                    },
                    loc,
                )?;
            }
        }
    }
    Ok(expander.circuit)
}
