//! Syntax tree for OpenQASM 2.0 programs, with a printer that re-parses to
//! the same tree.

use std::fmt;

use super::Location;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

/// Real-valued parameter expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    /// Formal parameter of the enclosing gate definition.
    Param(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates with formal parameters bound positionally.
    pub fn eval(&self, names: &[String], values: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Pi => std::f64::consts::PI,
            Expr::Param(name) => names
                .iter()
                .position(|n| n == name)
                .map(|i| values[i])
                .unwrap_or(f64::NAN),
            Expr::Neg(e) => -e.eval(names, values),
            Expr::Bin(op, l, r) => {
                let (l, r) = (l.eval(names, values), r.eval(names, values));
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => l / r,
                    BinOp::Pow => l.powf(r),
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(names, values)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Param(name) => f.write_str(name),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Bin(op, l, r) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({l}{sym}{r})")
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

/// `name` or `name[index]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Argument {
    pub name: String,
    pub index: Option<usize>,
    pub loc: Location,
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}[{i}]", self.name),
            None => f.write_str(&self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BodyStatement {
    Call {
        name: String,
        params: Vec<Expr>,
        qubits: Vec<String>,
        loc: Location,
    },
    Barrier {
        qubits: Vec<String>,
        loc: Location,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateMacro {
    pub name: String,
    pub params: Vec<String>,
    pub qubits: Vec<String>,
    pub body: Vec<BodyStatement>,
    pub loc: Location,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Declaration {
    QReg {
        name: String,
        size: usize,
        loc: Location,
    },
    CReg {
        name: String,
        size: usize,
        loc: Location,
    },
    Gate(GateMacro),
    Opaque {
        name: String,
        params: Vec<String>,
        qubits: Vec<String>,
        loc: Location,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub register: String,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    Call {
        name: String,
        params: Vec<Expr>,
        args: Vec<Argument>,
    },
    Measure {
        qubit: Argument,
        target: Argument,
    },
    Reset(Argument),
    Barrier(Vec<Argument>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub kind: StatementKind,
    pub guard: Option<Condition>,
    pub loc: Location,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub version: String,
    pub includes: Vec<String>,
    pub declarations: Vec<Declaration>,
    pub statements: Vec<Statement>,
}

impl Program {
    pub fn qregs(&self) -> impl Iterator<Item = (&str, usize)> {
        self.declarations.iter().filter_map(|d| match d {
            Declaration::QReg { name, size, .. } => Some((name.as_str(), *size)),
            _ => None,
        })
    }

    pub fn cregs(&self) -> impl Iterator<Item = (&str, usize)> {
        self.declarations.iter().filter_map(|d| match d {
            Declaration::CReg { name, size, .. } => Some((name.as_str(), *size)),
            _ => None,
        })
    }

    pub fn gate_macros(&self) -> impl Iterator<Item = &GateMacro> {
        self.declarations.iter().filter_map(|d| match d {
            Declaration::Gate(g) => Some(g),
            _ => None,
        })
    }
}

fn write_params(f: &mut fmt::Formatter<'_>, params: &[Expr]) -> fmt::Result {
    if params.is_empty() {
        return Ok(());
    }
    let parts: Vec<String> = params.iter().map(|p| p.to_string()).collect();
    write!(f, "({})", parts.join(","))
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OPENQASM {};", self.version)?;
        for inc in &self.includes {
            writeln!(f, "include \"{inc}\";")?;
        }
        for decl in &self.declarations {
            match decl {
                Declaration::QReg { name, size, .. } => writeln!(f, "qreg {name}[{size}];")?,
                Declaration::CReg { name, size, .. } => writeln!(f, "creg {name}[{size}];")?,
                Declaration::Opaque {
                    name, params, qubits, ..
                } => {
                    write!(f, "opaque {name}")?;
                    if !params.is_empty() {
                        write!(f, "({})", params.join(","))?;
                    }
                    writeln!(f, " {};", qubits.join(","))?;
                }
                Declaration::Gate(g) => {
                    write!(f, "gate {}", g.name)?;
                    if !g.params.is_empty() {
                        write!(f, "({})", g.params.join(","))?;
                    }
                    write!(f, " {} {{", g.qubits.join(","))?;
                    for stmt in &g.body {
                        match stmt {
                            BodyStatement::Call {
                                name, params, qubits, ..
                            } => {
                                write!(f, " {name}")?;
                                write_params(f, params)?;
                                write!(f, " {};", qubits.join(","))?;
                            }
                            BodyStatement::Barrier { qubits, .. } => {
                                write!(f, " barrier {};", qubits.join(","))?;
                            }
                        }
                    }
                    writeln!(f, " }}")?;
                }
            }
        }
        for stmt in &self.statements {
            if let Some(cond) = &stmt.guard {
                write!(f, "if({}=={}) ", cond.register, cond.value)?;
            }
            match &stmt.kind {
                StatementKind::Call { name, params, args } => {
                    write!(f, "{name}")?;
                    write_params(f, params)?;
                    let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                    writeln!(f, " {};", args.join(","))?;
                }
                StatementKind::Measure { qubit, target } => writeln!(f, "measure {qubit} -> {target};")?,
                StatementKind::Reset(arg) => writeln!(f, "reset {arg};")?,
                StatementKind::Barrier(args) => {
                    let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                    writeln!(f, "barrier {};", args.join(","))?;
                }
            }
        }
        Ok(())
    }
}
