use crate::error::{Error, Result};
use crate::tropical::TimeValue;

use super::ast::{BinOp, Expr};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(u64),
    Inf,
    Op(BinOp),
    LParen,
    RParen,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Token::Op(BinOp::Add))),
            b'^' => out.push((start, Token::Op(BinOp::Max))),
            b'*' => out.push((start, Token::Op(BinOp::Mul))),
            b'(' => out.push((start, Token::LParen)),
            b')' => out.push((start, Token::RParen)),
            b'-' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    out.push((start, Token::Op(BinOp::Inhibit)));
                    i += 1;
                } else {
                    return Err(syntax(start, "expected '-|'"));
                }
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value = src[start..i]
                    .parse()
                    .map_err(|_| syntax(start, "integer literal too large"))?;
                out.push((start, Token::Int(value)));
                continue;
            }
            b'a'..=b'z' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &src[start..i];
                out.push((
                    start,
                    if word == "inf" {
                        Token::Inf
                    } else {
                        Token::Ident(word.to_string())
                    },
                ));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character {ch:?}")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.offset();
        let tok = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        match tok {
            Some(Token::Ident(name)) => Ok(Expr::Var(name)),
            Some(Token::Int(v)) => Ok(Expr::Const(TimeValue::Finite(v))),
            Some(Token::Inf) => Ok(Expr::Const(TimeValue::Infinity)),
            Some(Token::LParen) => {
                let inner = self.expr(1)?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(syntax(self.offset(), "expected ')'")),
                }
            }
            Some(_) => Err(syntax(at, "expected an operand")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }

    // precedence climbing; every operator is left-associative
    fn expr(&mut self, min_prec: u8) -> Result<Expr> {
        let mut lhs = self.primary()?;
        while let Some(Token::Op(op)) = self.peek() {
            let op = *op;
            if op.precedence() < min_prec {
                break;
            }
            self.pos += 1;
            let rhs = self.expr(op.precedence() + 1)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }
}

/// Parse an expression.
///
/// `+` is min, `^` is max, `*` is delay (tropical product) and `a -| b`
/// lets `a` inhibit `b`. `*` binds tightest, `-|` loosest; all operators
/// associate to the left.
pub fn parse(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr(1)?;
    if p.pos < p.tokens.len() {
        return Err(syntax(p.offset(), "unexpected token"));
    }
    Ok(e)
}
