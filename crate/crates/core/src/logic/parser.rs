//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula := quant | impl
//! quant   := ("exists" | "forall") var "." formula
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := neg ("&" neg)*
//! neg     := "!" neg | atom
//! atom    := "E(" var "," var ")" | var "=" var | ident "(" var ")"
//!          | "dist(" var "," var ")" ("<=" | ">") nat | "true" | "false"
//!          | "(" formula ")"
//! ```
//!
//! A quantifier is also accepted in operand position; its body then extends
//! as far to the right as possible.

use thiserror::Error;

use super::Formula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unbound variable {0}")]
    Unbound(String),
}

const RESERVED: [&str; 6] = ["exists", "forall", "true", "false", "dist", "E"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    LParen,
    RParen,
    Comma,
    Dot,
    Amp,
    Pipe,
    Bang,
    Arrow,
    Equals,
    Le,
    Gt,
}

fn describe(t: Option<&(Tok, usize)>) -> String {
    match t {
        None => "end of input".into(),
        Some((Tok::Ident(s), _)) => format!("identifier `{s}`"),
        Some((Tok::Nat(n), _)) => format!("number {n}"),
        Some((t, _)) => format!("{t:?}"),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let two = |s: &str| text[pos..].starts_with(s);
        let tok = if c.is_ascii_alphabetic() {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            out.push((Tok::Ident(text[start..pos].to_string()), start));
            continue;
        } else if c.is_ascii_digit() {
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let n = text[start..pos].parse().map_err(|_| ParseError::Syntax {
                position: start,
                message: "number too large".into(),
            })?;
            out.push((Tok::Nat(n), start));
            continue;
        } else if two("->") {
            pos += 2;
            Tok::Arrow
        } else if two("<=") {
            pos += 2;
            Tok::Le
        } else {
            pos += 1;
            match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b'&' => Tok::Amp,
                b'|' => Tok::Pipe,
                b'!' => Tok::Bang,
                b'=' => Tok::Equals,
                b'>' => Tok::Gt,
                _ => {
                    return Err(ParseError::Syntax {
                        position: start,
                        message: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                    })
                }
            }
        };
        out.push((tok, start));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.position(),
            message: format!("expected {expected}, found {}", describe(self.toks.get(self.at))),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn var(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.error("variable"),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.keyword("exists") || self.keyword("forall") {
            let universal = self.keyword("forall");
            self.at += 1;
            let v = self.var()?;
            self.expect(Tok::Dot, "`.` after quantified variable")?;
            let body = self.formula()?;
            return Ok(if universal {
                Formula::forall(&v, body)
            } else {
                Formula::exists(&v, body)
            });
        }
        self.implication()
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = if self.keyword("exists") || self.keyword("forall") {
                self.formula()?
            } else {
                self.implication()?
            };
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(&Tok::Pipe) {
            parts.push(self.conjunction()?);
        }
        Ok(Formula::or(parts))
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.negation()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.negation()?);
        }
        Ok(Formula::and(parts))
    }

    fn negation(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Bang) {
            return Ok(self.negation()?.not());
        }
        if self.keyword("exists") || self.keyword("forall") {
            return self.formula();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(word)) => match word.as_str() {
                "true" => {
                    self.at += 1;
                    Ok(Formula::True)
                }
                "false" => {
                    self.at += 1;
                    Ok(Formula::False)
                }
                "E" => {
                    self.at += 1;
                    let (a, b) = self.var_pair()?;
                    Ok(Formula::Edge(a, b))
                }
                "dist" => {
                    self.at += 1;
                    let (a, b) = self.var_pair()?;
                    let le = if self.eat(&Tok::Le) {
                        true
                    } else if self.eat(&Tok::Gt) {
                        false
                    } else {
                        return self.error("`<=` or `>` after dist(..)");
                    };
                    let c = match self.peek() {
                        Some(Tok::Nat(c)) => *c,
                        _ => return self.error("distance bound"),
                    };
                    self.at += 1;
                    Ok(if le {
                        Formula::DistLe(a, b, c)
                    } else {
                        Formula::DistGt(a, b, c)
                    })
                }
                "exists" | "forall" => self.error("atom"),
                _ => {
                    if self.peek2() == Some(&Tok::LParen) {
                        self.at += 2;
                        let v = self.var()?;
                        self.expect(Tok::RParen, "`)` after color argument")?;
                        Ok(Formula::Color(word, v))
                    } else {
                        let a = self.var()?;
                        self.expect(Tok::Equals, "`=` or `(`")?;
                        let b = self.var()?;
                        Ok(Formula::Eq(a, b))
                    }
                }
            },
            _ => self.error("atom"),
        }
    }

    fn var_pair(&mut self) -> Result<(String, String), ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let a = self.var()?;
        self.expect(Tok::Comma, "`,`")?;
        let b = self.var()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((a, b))
    }
}

/// Parses a formula; its free variables are whatever remains unbound.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return p.error("end of input");
    }
    Ok(f)
}

/// Parses a formula whose free variables must be among `free`.
pub fn parse_formula_with_free(text: &str, free: &[&str]) -> Result<Formula, ParseError> {
    let f = parse_formula(text)?;
    if let Some(v) = f.free_vars().into_iter().find(|v| !free.contains(&v.as_str())) {
        return Err(ParseError::Unbound(v));
    }
    Ok(f)
}
