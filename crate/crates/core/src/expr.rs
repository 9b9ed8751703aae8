//! Text syntax for elements of `F_q(t)` and for places.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/')? power)*        juxtaposition multiplies
//! power  := unary ('^' ['-'] integer)?
//! unary  := '-' unary | atom
//! atom   := 't' | 'g' | integer | '(' expr ')'
//! ```
//!
//! `g` is the fixed generator of `F_q` over `F_2` (equal to 1 when `q = 2`),
//! integers are read modulo 2 and `-` coincides with `+`. The printed form of
//! every element parses back to the same element.

use crate::error::{Error, Result};
use crate::funcfield::{Place, RatFunc};
use crate::gf2k::Gf2k;
use crate::polyring::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    T,
    G,
    Num(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn describe(tok: Option<&(usize, Tok)>) -> String {
    match tok {
        None => "end of input".into(),
        Some((_, t)) => match t {
            Tok::T => "'t'".into(),
            Tok::G => "'g'".into(),
            Tok::Num(n) => format!("integer {n}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        },
    }
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        let tok = match ch {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&(_, d)) = chars.peek() {
                    let Some(v) = d.to_digit(10) else { break };
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(v as u64))
                        .ok_or(Error::Parse {
                            position: pos,
                            message: "integer literal too large".into(),
                        })?;
                    chars.next();
                }
                out.push((pos, Tok::Num(n)));
                continue;
            }
            't' => Tok::T,
            'g' => Tok::G,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("unexpected character {other:?}; expected one of t g 0-9 + - * / ^ ( )"),
                })
            }
        };
        chars.next();
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    field: Gf2k,
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            position: self.offset(),
            message: format!("expected {expected}, found {}", describe(self.toks.get(self.pos))),
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        if matches!(self.peek(), Some(Tok::Plus | Tok::Minus)) {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        while matches!(self.peek(), Some(Tok::Plus | Tok::Minus)) {
            self.pos += 1;
            acc = &acc + &self.term()?;
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::T | Tok::G | Tok::Num(_) | Tok::LParen))
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.power()?;
                    acc = acc.div(&rhs).map_err(|_| Error::Parse {
                        position: at,
                        message: "division by zero".into(),
                    })?;
                }
                _ if self.starts_atom() => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.unary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.pos += 1;
        }
        let negative = self.peek() == Some(&Tok::Minus);
        if negative {
            self.pos += 1;
        }
        let at = self.offset();
        let Some(Tok::Num(e)) = self.peek().cloned() else {
            return Err(self.error("an integer exponent"));
        };
        self.pos += 1;
        if paren {
            if self.peek() != Some(&Tok::RParen) {
                return Err(self.error("')'"));
            }
            self.pos += 1;
        }
        let e = i64::try_from(e).map_err(|_| Error::Parse {
            position: at,
            message: "exponent too large".into(),
        })?;
        base.pow(if negative { -e } else { e }).map_err(|_| Error::Parse {
            position: at,
            message: "negative power of zero".into(),
        })
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<RatFunc> {
        let f = self.field;
        let out = match self.peek() {
            Some(Tok::T) => RatFunc::t(f),
            Some(Tok::G) => RatFunc::constant(f, f.generator()),
            Some(Tok::Num(n)) => {
                if n % 2 == 0 {
                    RatFunc::zero(f)
                } else {
                    RatFunc::one(f)
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("')'"));
                }
                self.pos += 1;
                return Ok(inner);
            }
            _ => return Err(self.error("'t', 'g', an integer or '('")),
        };
        self.pos += 1;
        Ok(out)
    }
}

pub fn parse_ratfunc(field: Gf2k, input: &str) -> Result<RatFunc> {
    let toks = tokenize(input)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            position: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        field,
        toks: &toks,
        pos: 0,
        end: input.len(),
    };
    let value = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.error("an operator or end of input"));
    }
    Ok(value)
}

pub fn parse_poly(field: Gf2k, input: &str) -> Result<Poly> {
    let u = parse_ratfunc(field, input)?;
    if !u.is_polynomial() {
        return Err(Error::Parse {
            position: 0,
            message: format!("expected a polynomial, found {u}"),
        });
    }
    Ok(u.num().clone())
}

/// `inf`, or `π:<poly>` / `pi:<poly>` / `<poly>` for a monic irreducible.
pub fn parse_place(field: Gf2k, input: &str) -> Result<Place> {
    let s = input.trim();
    if matches!(s, "inf" | "infinity" | "∞") {
        return Ok(Place::Infinity);
    }
    let (offset, body) = if let Some(rest) = s.strip_prefix("π:") {
        (s.len() - rest.len(), rest)
    } else if let Some(rest) = s.strip_prefix("pi:") {
        (3, rest)
    } else {
        (0, s)
    };
    let p = parse_poly(field, body).map_err(|e| match e {
        Error::Parse { position, message } => Error::Parse {
            position: position + offset,
            message,
        },
        other => other,
    })?;
    Place::finite(p)
}
