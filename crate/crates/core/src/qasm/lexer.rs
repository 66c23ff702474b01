use super::{Location, QasmError};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    /// Numeric literal; `text` is kept verbatim for the version check.
    Number {
        text: String,
        value: f64,
        integer: bool,
    },
    Str(String),
    Semi,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Arrow,
    EqEq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Number { text, .. } => format!("number `{text}`"),
            TokenKind::Str(s) => format!("string \"{s}\""),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::EqEq => "`==`".into(),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Slash => "`/`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub loc: Location,
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let loc = Location { line, col };
        if c.is_whitespace() {
            advance!();
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
            continue;
        }
        let single = match c {
            ';' => Some(TokenKind::Semi),
            ',' => Some(TokenKind::Comma),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            '+' => Some(TokenKind::Plus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            '^' => Some(TokenKind::Caret),
            _ => None,
        };
        if let Some(kind) = single {
            advance!();
            tokens.push(Token { kind, loc });
            continue;
        }
        match c {
            '-' => {
                advance!();
                if i < chars.len() && chars[i] == '>' {
                    advance!();
                    tokens.push(Token {
                        kind: TokenKind::Arrow,
                        loc,
                    });
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Minus,
                        loc,
                    });
                }
            }
            '=' => {
                advance!();
                if i < chars.len() && chars[i] == '=' {
                    advance!();
                    tokens.push(Token {
                        kind: TokenKind::EqEq,
                        loc,
                    });
                } else {
                    return Err(QasmError::Syntax {
                        loc,
                        message: "expected `==`".into(),
                    });
                }
            }
            '"' => {
                advance!();
                let start = i;
                while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                    advance!();
                }
                if i >= chars.len() || chars[i] != '"' {
                    return Err(QasmError::Syntax {
                        loc,
                        message: "unterminated string".into(),
                    });
                }
                let text: String = chars[start..i].iter().collect();
                advance!();
                tokens.push(Token {
                    kind: TokenKind::Str(text),
                    loc,
                });
            }
            c if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                let start = i;
                let mut integer = true;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance!();
                }
                if i < chars.len() && chars[i] == '.' {
                    integer = false;
                    advance!();
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        advance!();
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        integer = false;
                        while i < j {
                            advance!();
                        }
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            advance!();
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value = text.parse::<f64>().map_err(|_| QasmError::Syntax {
                    loc,
                    message: format!("malformed number `{text}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Number { text, value, integer },
                    loc,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    advance!();
                }
                let text: String = chars[start..i].iter().collect();
                tokens.push(Token {
                    kind: TokenKind::Ident(text),
                    loc,
                });
            }
            other => {
                return Err(QasmError::Syntax {
                    loc,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        loc: Location { line, col },
    });
    Ok(tokens)
}
