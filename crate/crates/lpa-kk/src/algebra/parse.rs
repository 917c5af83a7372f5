//! Expression parser for path-algebra elements.
//!
//! Grammar: sums and differences of products; products by juxtaposition or
//! `.`; postfix `*` is the involution; parentheses group; integer literals
//! are scalar multiples of the unit. Identifiers resolve to vertices,
//! named edges, or `q_<vertex>`.

use num_bigint::BigInt;
use num_traits::One;

use super::{AlgebraElement, AlgebraError, Mode};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Dot,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, AlgebraError> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((pos, Token::Plus)),
            '-' => out.push((pos, Token::Minus)),
            '*' => out.push((pos, Token::Star)),
            '.' => out.push((pos, Token::Dot)),
            '(' => out.push((pos, Token::LParen)),
            ')' => out.push((pos, Token::RParen)),
            _ if c.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    i += 1;
                }
                out.push((pos, Token::Int(s.parse().expect("digits"))));
                continue;
            }
            _ if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    i += 1;
                }
                out.push((pos, Token::Ident(s)));
                continue;
            }
            _ => {
                return Err(AlgebraError::Syntax {
                    pos,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Vertex, edge, or `q_<vertex>` name -> element.
pub fn resolve_identifier(
    g: &Graph,
    name: &str,
    mode: Mode,
) -> Result<AlgebraElement, AlgebraError> {
    if let Some(v) = g.vertex_index(name) {
        return Ok(AlgebraElement::vertex(g, v, mode));
    }
    if let Some(e) = g.edge_by_name(name) {
        return Ok(AlgebraElement::edge(g, e, mode));
    }
    if let Some(rest) = name.strip_prefix("q_") {
        if let Some(v) = g.vertex_index(rest) {
            if g.is_infinite_emitter(v) {
                return Err(AlgebraError::QAtInfiniteEmitter(rest.to_string()));
            }
            return AlgebraElement::q_v(g, v, mode);
        }
    }
    Err(AlgebraError::UnknownIdentifier(name.to_string()))
}

struct Parser<'a> {
    g: &'a Graph,
    mode: Mode,
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).map(|(_, t)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<AlgebraElement, AlgebraError> {
        let mut negate = false;
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            negate = true;
        } else if matches!(self.peek(), Some(Token::Plus)) {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(&BigInt::from(-1));
        }
        while let Some(t) = self.peek() {
            let sign = match t {
                Token::Plus => BigInt::one(),
                Token::Minus => BigInt::from(-1),
                _ => break,
            };
            self.bump();
            let rhs = self.term()?.scale(&sign);
            acc = acc.add(self.g, &rhs)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<AlgebraElement, AlgebraError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Dot) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.multiply(self.g, &rhs)?;
                }
                Some(Token::Ident(_)) | Some(Token::Int(_)) | Some(Token::LParen) => {
                    let rhs = self.factor()?;
                    acc = acc.multiply(self.g, &rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<AlgebraElement, AlgebraError> {
        let mut el = self.primary()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.bump();
            el = el.star(self.g);
        }
        Ok(el)
    }

    fn primary(&mut self) -> Result<AlgebraElement, AlgebraError> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                self.bump();
                resolve_identifier(self.g, &name, self.mode)
            }
            Some(Token::Int(n)) => {
                self.bump();
                Ok(AlgebraElement::unit(self.g, self.mode).scale(&n))
            }
            Some(Token::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if matches!(self.peek(), Some(Token::RParen)) {
                    self.bump();
                    Ok(inner)
                } else {
                    self.err("expected `)`")
                }
            }
            Some(_) => self.err("expected an identifier, number, or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_element(g: &Graph, input: &str, mode: Mode) -> Result<AlgebraElement, AlgebraError> {
    let tokens = tokenize(input)?;
    let mut p = Parser { g, mode, tokens, at: 0, end: input.len() };
    let el = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(el)
}
