//! Divisor expressions such as `3H-E`, `1/2 E + H` or `-2*d`.
//!
//! ```text
//! expr     := ['-' | '+'] term (('+' | '-') term)*
//! term     := rational ['*'] name | rational | name
//! rational := int ['/' int]
//! ```

use num_traits::{One, Signed, Zero};

use super::GeometrySpec;
use crate::error::{Error, Result};
use crate::lattice::{parse_rat, DivClass, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Whether `s` is a legal basis or prime name.
pub fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_name_start) && chars.all(is_name_char)
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(t) = single {
            out.push((off, t));
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            out.push((off, Tok::Int(chars[start..i].iter().map(|p| p.1).collect())));
        } else if is_name_start(c) {
            while i < chars.len() && is_name_char(chars[i].1) {
                i += 1;
            }
            out.push((off, Tok::Name(chars[start..i].iter().map(|p| p.1).collect())));
        } else {
            return Err(Error::UnexpectedToken { found: c.to_string(), offset: off });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn unexpected(&self) -> Error {
        match self.toks.get(self.pos) {
            Some((off, t)) => Error::UnexpectedToken { found: describe(t), offset: *off },
            None => Error::UnexpectedToken { found: "end of input".into(), offset: self.text.len() },
        }
    }

    /// `int ['/' int]`, already positioned on the integer.
    fn rational(&mut self, num: String) -> Result<Rat> {
        self.pos += 1;
        if self.peek() != Some(&Tok::Slash) {
            return parse_rat(&num);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Tok::Int(den)) => {
                self.pos += 1;
                parse_rat(&format!("{num}/{den}"))
            }
            _ => Err(Error::MalformedRational(format!("{num}/"))),
        }
    }

    fn term(&mut self) -> Result<(Rat, Option<String>)> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                let coeff = self.rational(n)?;
                let starred = self.peek() == Some(&Tok::Star);
                if starred {
                    self.pos += 1;
                }
                match self.peek().cloned() {
                    Some(Tok::Name(name)) => {
                        self.pos += 1;
                        Ok((coeff, Some(name)))
                    }
                    _ if starred => Err(self.unexpected()),
                    _ => Ok((coeff, None)),
                }
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                Ok((Rat::one(), Some(name)))
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(s) | Tok::Name(s) => s.clone(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Slash => "/".into(),
    }
}

/// Parses a divisor expression into lattice coordinates.
pub fn parse_divisor(text: &str, spec: &GeometrySpec) -> Result<DivClass> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::EmptyExpression);
    }
    let mut p = Parser { toks, pos: 0, text };
    let mut acc = DivClass::zero(spec.lattice().rank());
    let mut sign = Rat::one();
    match p.peek() {
        Some(Tok::Minus) => {
            sign = -Rat::one();
            p.pos += 1;
        }
        Some(Tok::Plus) => p.pos += 1,
        _ => {}
    }
    loop {
        let (coeff, name) = p.term()?;
        let coeff = coeff * &sign;
        match name {
            Some(name) => {
                let v = spec.resolve_name(&name).ok_or(Error::UnknownName(name))?;
                acc = acc.add_scaled(&coeff, &v);
            }
            None if coeff.is_zero() => {}
            None => {
                // a bare nonzero number has no class
                return Err(Error::UnexpectedToken {
                    found: coeff.to_string(),
                    offset: p.toks.get(p.pos.saturating_sub(1)).map_or(0, |t| t.0),
                });
            }
        }
        match p.peek() {
            None => return Ok(acc),
            Some(Tok::Plus) => sign = Rat::one(),
            Some(Tok::Minus) => sign = -Rat::one(),
            Some(_) => return Err(p.unexpected()),
        }
        p.pos += 1;
    }
}

/// Writes a class in the basis names, e.g. `3*H-2*d`; the zero class is `0`.
pub fn format_divisor(d: &DivClass, basis: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in d.coords().iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let a = c.abs();
        if !a.is_one() {
            out.push_str(&a.to_string());
            out.push('*');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
