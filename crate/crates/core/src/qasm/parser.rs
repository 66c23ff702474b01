//! Recursive-descent parser. Name resolution happens here: registers, gate
//! names and gate-local identifiers must be declared before use, and register
//! indices must be in bounds.

use std::collections::HashMap;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::{qelib1, Location, QasmError};

#[derive(Debug, Clone, Copy)]
struct GateSig {
    /// Standard-library name that has not been brought in by an explicit
    /// include; a user definition may shadow it.
    implicit: bool,
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    qregs: HashMap<String, usize>,
    cregs: HashMap<String, usize>,
    gates: HashMap<String, GateSig>,
}

const RESERVED: &[&str] = &[
    "OPENQASM", "include", "qreg", "creg", "gate", "opaque", "measure", "reset", "barrier", "if", "pi",
];

impl Parser {
    pub(crate) fn new(source: &str, implicit_stdlib: bool) -> Result<Self, QasmError> {
        let mut gates = HashMap::new();
        for name in ["U", "CX"] {
            gates.insert(name.to_string(), GateSig { implicit: false });
        }
        if implicit_stdlib {
            for name in qelib1::names() {
                gates.insert(name.to_string(), GateSig { implicit: true });
            }
        }
        Ok(Parser {
            tokens: tokenize(source)?,
            pos: 0,
            qregs: HashMap::new(),
            cregs: HashMap::new(),
            gates,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_kind(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn next(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn syntax<T>(&self, loc: Location, message: impl Into<String>) -> Result<T, QasmError> {
        Err(QasmError::Syntax {
            loc,
            message: message.into(),
        })
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, QasmError> {
        let tok = self.next();
        if tok.kind == kind {
            Ok(tok)
        } else {
            self.syntax(
                tok.loc,
                format!("expected {}, found {}", kind.describe(), tok.kind.describe()),
            )
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == kind {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Location), QasmError> {
        let tok = self.next();
        match tok.kind {
            TokenKind::Ident(name) if !RESERVED.contains(&name.as_str()) => Ok((name, tok.loc)),
            other => self.syntax(tok.loc, format!("expected identifier, found {}", other.describe())),
        }
    }

    fn integer(&mut self) -> Result<(usize, Location), QasmError> {
        let tok = self.next();
        match tok.kind {
            TokenKind::Number {
                integer: true, text, ..
            } => match text.parse::<usize>() {
                Ok(v) => Ok((v, tok.loc)),
                Err(_) => self.syntax(tok.loc, format!("integer `{text}` out of range")),
            },
            other => self.syntax(tok.loc, format!("expected integer, found {}", other.describe())),
        }
    }

    fn keyword(&self) -> Option<&str> {
        match self.peek_kind() {
            TokenKind::Ident(name) => Some(name.as_str()),
            _ => None,
        }
    }

    pub(crate) fn parse_program(mut self) -> Result<Program, QasmError> {
        let head = self.next();
        if head.kind != TokenKind::Ident("OPENQASM".into()) {
            return self.syntax(head.loc, "program must start with `OPENQASM 2.0;`");
        }
        let version_tok = self.next();
        let version = match &version_tok.kind {
            TokenKind::Number { text, .. } => text.clone(),
            other => return self.syntax(version_tok.loc, format!("expected version, found {}", other.describe())),
        };
        if version != "2.0" {
            return Err(QasmError::Version {
                loc: version_tok.loc,
                found: version,
            });
        }
        self.expect(TokenKind::Semi)?;
        let mut program = Program {
            version,
            includes: Vec::new(),
            declarations: Vec::new(),
            statements: Vec::new(),
        };
        self.parse_body(&mut program)?;
        Ok(program)
    }

    /// Parses a sequence of gate definitions only (used for the builtin
    /// standard library).
    pub(crate) fn parse_library(mut self) -> Result<Vec<GateMacro>, QasmError> {
        let mut program = Program {
            version: "2.0".into(),
            includes: Vec::new(),
            declarations: Vec::new(),
            statements: Vec::new(),
        };
        self.parse_body(&mut program)?;
        Ok(program.gate_macros().cloned().collect())
    }

    fn parse_body(&mut self, program: &mut Program) -> Result<(), QasmError> {
        loop {
            let loc = self.peek().loc;
            match self.keyword() {
                None if *self.peek_kind() == TokenKind::Eof => return Ok(()),
                Some("OPENQASM") => return self.syntax(loc, "duplicate version statement"),
                Some("include") => {
                    self.next();
                    let tok = self.next();
                    let path = match tok.kind {
                        TokenKind::Str(s) => s,
                        other => {
                            return self.syntax(tok.loc, format!("expected include path, found {}", other.describe()))
                        }
                    };
                    self.expect(TokenKind::Semi)?;
                    if path != "qelib1.inc" {
                        return Err(QasmError::Unsupported {
                            loc,
                            what: format!("include \"{path}\" (only \"qelib1.inc\" is available)"),
                        });
                    }
                    for name in qelib1::names() {
                        self.gates.insert(name.to_string(), GateSig { implicit: false });
                    }
                    program.includes.push(path);
                }
                Some("qreg") | Some("creg") => {
                    let quantum = self.keyword() == Some("qreg");
                    self.next();
                    let (name, name_loc) = self.ident()?;
                    self.expect(TokenKind::LBracket)?;
                    let (size, _) = self.integer()?;
                    self.expect(TokenKind::RBracket)?;
                    self.expect(TokenKind::Semi)?;
                    if self.qregs.contains_key(&name) || self.cregs.contains_key(&name) {
                        return Err(QasmError::Redeclared { loc: name_loc, name });
                    }
                    if quantum {
                        self.qregs.insert(name.clone(), size);
                        program.declarations.push(Declaration::QReg { name, size, loc });
                    } else {
                        self.cregs.insert(name.clone(), size);
                        program.declarations.push(Declaration::CReg { name, size, loc });
                    }
                }
                Some("gate") => {
                    self.next();
                    let def = self.parse_gate_definition(loc)?;
                    program.declarations.push(Declaration::Gate(def));
                }
                Some("opaque") => {
                    self.next();
                    let (name, name_loc) = self.ident()?;
                    let params = if self.eat(&TokenKind::LParen) {
                        self.ident_list(TokenKind::RParen)?
                    } else {
                        Vec::new()
                    };
                    let mut qubits = Vec::new();
                    loop {
                        let (q, q_loc) = self.ident()?;
                        if qubits.contains(&q) {
                            return Err(QasmError::Redeclared { loc: q_loc, name: q });
                        }
                        qubits.push(q);
                        match self.peek_kind() {
                            TokenKind::LBrace => {
                                return Err(QasmError::Unsupported {
                                    loc,
                                    what: format!("opaque gate `{name}` with a body"),
                                })
                            }
                            TokenKind::Comma => {
                                self.next();
                            }
                            _ => {
                                self.expect(TokenKind::Semi)?;
                                break;
                            }
                        }
                    }
                    self.declare_gate(&name, name_loc)?;
                    program.declarations.push(Declaration::Opaque {
                        name,
                        params,
                        qubits,
                        loc,
                    });
                }
                Some("if") => {
                    self.next();
                    self.expect(TokenKind::LParen)?;
                    let (register, reg_loc) = self.ident()?;
                    if !self.cregs.contains_key(&register) {
                        return Err(QasmError::Undeclared {
                            loc: reg_loc,
                            kind: "classical register",
                            name: register,
                        });
                    }
                    self.expect(TokenKind::EqEq)?;
                    let (value, _) = self.integer()?;
                    self.expect(TokenKind::RParen)?;
                    let mut stmt = self.parse_quantum_op()?;
                    if matches!(stmt.kind, StatementKind::Barrier(_)) {
                        return self.syntax(stmt.loc, "barrier cannot be conditioned");
                    }
                    stmt.guard = Some(Condition {
                        register,
                        value: value as u64,
                    });
                    stmt.loc = loc;
                    program.statements.push(stmt);
                }
                Some(_) => {
                    let stmt = self.parse_quantum_op()?;
                    program.statements.push(stmt);
                }
                None => {
                    let tok = self.next();
                    return self.syntax(tok.loc, format!("unexpected {}", tok.kind.describe()));
                }
            }
        }
    }

    fn declare_gate(&mut self, name: &str, loc: Location) -> Result<(), QasmError> {
        if let Some(sig) = self.gates.get(name) {
            if !sig.implicit {
                return Err(QasmError::Redeclared {
                    loc,
                    name: name.to_string(),
                });
            }
        }
        self.gates.insert(name.to_string(), GateSig { implicit: false });
        Ok(())
    }

    fn ident_list(&mut self, terminator: TokenKind) -> Result<Vec<String>, QasmError> {
        let mut names = Vec::new();
        if self.eat(&terminator) {
            return Ok(names);
        }
        loop {
            let (name, loc) = self.ident()?;
            if names.contains(&name) {
                return Err(QasmError::Redeclared { loc, name });
            }
            names.push(name);
            if self.eat(&terminator) {
                return Ok(names);
            }
            self.expect(TokenKind::Comma)?;
        }
    }

    /// Parses everything after the `gate` keyword.
    fn parse_gate_definition(&mut self, loc: Location) -> Result<GateMacro, QasmError> {
        let (name, name_loc) = self.ident()?;
        let params = if self.eat(&TokenKind::LParen) {
            self.ident_list(TokenKind::RParen)?
        } else {
            Vec::new()
        };
        let qubits = self.ident_list(TokenKind::LBrace)?;
        if qubits.is_empty() {
            return self.syntax(name_loc, format!("gate `{name}` has no qubit arguments"));
        }
        let mut body = Vec::new();
        while !self.eat(&TokenKind::RBrace) {
            let stmt_loc = self.peek().loc;
            let (callee, callee_loc) = match self.next().kind {
                TokenKind::Ident(n) => (n, stmt_loc),
                other => return self.syntax(stmt_loc, format!("expected gate call, found {}", other.describe())),
            };
            if callee == "barrier" {
                let args = self.ident_list(TokenKind::Semi)?;
                self.check_formals(&args, &qubits, stmt_loc)?;
                body.push(BodyStatement::Barrier {
                    qubits: args,
                    loc: stmt_loc,
                });
                continue;
            }
            if RESERVED.contains(&callee.as_str()) {
                return Err(QasmError::Unsupported {
                    loc: stmt_loc,
                    what: format!("`{callee}` inside a gate body"),
                });
            }
            if callee == name || !self.gates.contains_key(&callee) {
                return Err(QasmError::Undeclared {
                    loc: callee_loc,
                    kind: "gate",
                    name: callee,
                });
            }
            let call_params = if self.eat(&TokenKind::LParen) {
                self.expr_list(Some(&params))?
            } else {
                Vec::new()
            };
            let args = self.ident_list(TokenKind::Semi)?;
            self.check_formals(&args, &qubits, stmt_loc)?;
            body.push(BodyStatement::Call {
                name: callee,
                params: call_params,
                qubits: args,
                loc: stmt_loc,
            });
        }
        self.declare_gate(&name, name_loc)?;
        Ok(GateMacro {
            name,
            params,
            qubits,
            body,
            loc,
        })
    }

    fn check_formals(&self, args: &[String], formals: &[String], loc: Location) -> Result<(), QasmError> {
        for a in args {
            if !formals.contains(a) {
                return Err(QasmError::Undeclared {
                    loc,
                    kind: "gate argument",
                    name: a.clone(),
                });
            }
        }
        Ok(())
    }

    fn expr_list(&mut self, formals: Option<&[String]>) -> Result<Vec<Expr>, QasmError> {
        let mut exprs = Vec::new();
        if self.eat(&TokenKind::RParen) {
            return Ok(exprs);
        }
        loop {
            exprs.push(self.expr(formals)?);
            if self.eat(&TokenKind::RParen) {
                return Ok(exprs);
            }
            self.expect(TokenKind::Comma)?;
        }
    }

    fn expr(&mut self, formals: Option<&[String]>) -> Result<Expr, QasmError> {
        let mut lhs = self.term(formals)?;
        loop {
            let op = match self.peek_kind() {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term(formals)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self, formals: Option<&[String]>) -> Result<Expr, QasmError> {
        let mut lhs = self.unary(formals)?;
        loop {
            let op = match self.peek_kind() {
                TokenKind::Star => BinOp::Mul,
                TokenKind::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary(formals)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self, formals: Option<&[String]>) -> Result<Expr, QasmError> {
        if self.eat(&TokenKind::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary(formals)?)));
        }
        if self.eat(&TokenKind::Plus) {
            return self.unary(formals);
        }
        self.power(formals)
    }

    fn power(&mut self, formals: Option<&[String]>) -> Result<Expr, QasmError> {
        let base = self.atom(formals)?;
        if self.eat(&TokenKind::Caret) {
            let exponent = self.unary(formals)?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self, formals: Option<&[String]>) -> Result<Expr, QasmError> {
        let tok = self.next();
        match tok.kind {
            TokenKind::Number { value, .. } => Ok(Expr::Num(value)),
            TokenKind::LParen => {
                let e = self.expr(formals)?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident(name) if name == "pi" => Ok(Expr::Pi),
            TokenKind::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    self.expect(TokenKind::LParen)?;
                    let arg = self.expr(formals)?;
                    self.expect(TokenKind::RParen)?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                match formals {
                    Some(f) if f.contains(&name) => Ok(Expr::Param(name)),
                    _ => Err(QasmError::Undeclared {
                        loc: tok.loc,
                        kind: "parameter",
                        name,
                    }),
                }
            }
            other => self.syntax(tok.loc, format!("expected expression, found {}", other.describe())),
        }
    }

    fn argument(&mut self, classical: bool) -> Result<Argument, QasmError> {
        let (name, loc) = self.ident()?;
        let (table, kind) = if classical {
            (&self.cregs, "classical register")
        } else {
            (&self.qregs, "quantum register")
        };
        let Some(&size) = table.get(&name) else {
            return Err(QasmError::Undeclared { loc, kind, name });
        };
        let index = if self.eat(&TokenKind::LBracket) {
            let (i, i_loc) = self.integer()?;
            self.expect(TokenKind::RBracket)?;
            if i >= size {
                return Err(QasmError::IndexOutOfRange {
                    loc: i_loc,
                    name,
                    index: i,
                    size,
                });
            }
            Some(i)
        } else {
            None
        };
        Ok(Argument { name, index, loc })
    }

    fn argument_list(&mut self) -> Result<Vec<Argument>, QasmError> {
        let mut args = vec![self.argument(false)?];
        while self.eat(&TokenKind::Comma) {
            args.push(self.argument(false)?);
        }
        self.expect(TokenKind::Semi)?;
        Ok(args)
    }

    fn parse_quantum_op(&mut self) -> Result<Statement, QasmError> {
        let loc = self.peek().loc;
        let (name, name_loc) = match self.next().kind {
            TokenKind::Ident(n) => (n, loc),
            other => return self.syntax(loc, format!("expected statement, found {}", other.describe())),
        };
        let kind = match name.as_str() {
            "measure" => {
                let qubit = self.argument(false)?;
                self.expect(TokenKind::Arrow)?;
                let target = self.argument(true)?;
                self.expect(TokenKind::Semi)?;
                StatementKind::Measure { qubit, target }
            }
            "reset" => {
                let arg = self.argument(false)?;
                self.expect(TokenKind::Semi)?;
                StatementKind::Reset(arg)
            }
            "barrier" => StatementKind::Barrier(self.argument_list()?),
            other if RESERVED.contains(&other) => {
                return self.syntax(name_loc, format!("unexpected keyword `{other}`"))
            }
            _ => {
                if !self.gates.contains_key(&name) {
                    return Err(QasmError::Undeclared {
                        loc: name_loc,
                        kind: "gate",
                        name,
                    });
                }
                let params = if self.eat(&TokenKind::LParen) {
                    self.expr_list(None)?
                } else {
                    Vec::new()
                };
                let args = self.argument_list()?;
                StatementKind::Call { name, params, args }
            }
        };
        Ok(Statement { kind, guard: None, loc })
    }
}
