//! Text syntax for formulas.
//!
//! ```text
//! formula  := "true" | "false" | IDENT
//!           | "not" "(" formula ")"
//!           | ("and" | "or") "(" formula ("," formula)* ")"
//!           | "implies" "(" formula "," formula ")"
//!           | ("G" | "F" | "O" | "H") [interval] "(" formula ")"
//!           | ("U" | "S") [interval] "(" formula "," formula ")"
//! interval := "[" NAT "," (NAT | "K") "]"
//! IDENT    := [A-Za-z_][A-Za-z0-9_.-]*   (keywords excluded)
//! ```
//!
//! A missing interval means the full horizon `[0, K]`; `K` as upper bound
//! means "until the end of the trace". `and`/`or` fold to the left and
//! `false` is `not(true)`. `Display` on [`Formula`] produces this syntax.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stl::formula::{Formula, Interval, Predicate};

const KEYWORDS: &[&str] = &["true", "false", "not", "and", "or", "implies", "G", "F", "O", "H", "U", "S"];

/// Named predicates available to the parser.
#[derive(Clone, Debug)]
pub struct PredicateRegistry<F> {
    map: HashMap<String, Predicate<F>>,
}

impl<F> Default for PredicateRegistry<F> {
    fn default() -> Self {
        Self { map: HashMap::new() }
    }
}

impl<F: Real> PredicateRegistry<F> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `p` under its own id, replacing any previous entry.
    pub fn insert(&mut self, p: Predicate<F>) {
        self.map.insert(p.id().to_string(), p);
    }

    pub fn get(&self, id: &str) -> Option<&Predicate<F>> {
        self.map.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.map.contains_key(id)
    }

    /// Sorted ids, for error messages.
    pub fn ids(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.map.keys().map(String::as_str).collect();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl<F: Real> FromIterator<Predicate<F>> for PredicateRegistry<F> {
    fn from_iter<I: IntoIterator<Item = Predicate<F>>>(iter: I) -> Self {
        let mut r = Self::new();
        for p in iter {
            r.insert(p);
        }
        r
    }
}

/// Parses `src`, resolving identifiers in `registry`.
pub fn parse_formula<F: Real>(src: &str, registry: &PredicateRegistry<F>) -> Result<Formula<F>> {
    parse_formula_with(src, |id| registry.get(id).cloned())
}

/// Parses `src`, resolving identifiers with `resolve`.
pub fn parse_formula_with<F: Real>(
    src: &str,
    resolve: impl FnMut(&str) -> Option<Predicate<F>>,
) -> Result<Formula<F>> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0, resolve };
    let f = p.formula()?;
    match p.peek() {
        Tok { kind: Kind::Eof, .. } => Ok(f),
        t => Err(t.error("trailing input after formula")),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Ident(String),
    Nat(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: Kind,
    line: usize,
    col: usize,
}

impl Tok {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let single = match c {
            '(' => Some(Kind::LParen),
            ')' => Some(Kind::RParen),
            '[' => Some(Kind::LBracket),
            ']' => Some(Kind::RBracket),
            ',' => Some(Kind::Comma),
            _ => None,
        };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
        } else if c.is_whitespace() {
            col += 1;
            i += 1;
        } else if let Some(kind) = single {
            out.push(Tok { kind, line: tl, col: tc });
            col += 1;
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse::<usize>()
                .map_err(|_| Error::Parse { line: tl, col: tc, msg: format!("integer `{text}` out of range") })?;
            col += i - start;
            out.push(Tok { kind: Kind::Nat(n), line: tl, col: tc });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '.' | '-')) {
                i += 1;
            }
            col += i - start;
            out.push(Tok { kind: Kind::Ident(chars[start..i].iter().collect()), line: tl, col: tc });
        } else {
            return Err(Error::Parse { line: tl, col: tc, msg: format!("unexpected character `{c}`") });
        }
    }
    out.push(Tok { kind: Kind::Eof, line, col });
    Ok(out)
}

struct Parser<R> {
    tokens: Vec<Tok>,
    pos: usize,
    resolve: R,
}

impl<R> Parser<R> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Tok {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: Kind, what: &str) -> Result<Tok> {
        let t = self.next();
        if t.kind == kind {
            Ok(t)
        } else {
            Err(t.error(format!("expected {what}")))
        }
    }

    fn interval(&mut self) -> Result<Option<Interval>> {
        if self.peek().kind != Kind::LBracket {
            return Ok(None);
        }
        let open = self.next();
        let lo = match self.next() {
            Tok { kind: Kind::Nat(n), .. } => n,
            t => return Err(t.error("expected interval lower bound")),
        };
        self.expect(Kind::Comma, "`,` in interval")?;
        let hi = match self.next() {
            Tok { kind: Kind::Nat(n), .. } => n,
            Tok { kind: Kind::Ident(s), .. } if s == "K" => usize::MAX,
            t => return Err(t.error("expected interval upper bound or `K`")),
        };
        self.expect(Kind::RBracket, "`]`")?;
        Interval::new(lo, hi)
            .map(Some)
            .ok_or_else(|| open.error(format!("interval lower bound {lo} exceeds upper bound {hi}")))
    }
}

impl<F: Real, R: FnMut(&str) -> Option<Predicate<F>>> Parser<R> {
    fn formula(&mut self) -> Result<Formula<F>> {
        let t = self.next();
        let name = match &t.kind {
            Kind::Ident(s) => s.clone(),
            Kind::Eof => return Err(t.error("unexpected end of input")),
            _ => return Err(t.error("expected a formula")),
        };
        match name.as_str() {
            "true" => Ok(Formula::True),
            "false" => Ok(Formula::falsum()),
            "not" => {
                let mut args = self.args(1, Some(1))?;
                Ok(args.remove(0).not())
            }
            "and" => Ok(Formula::and_all(self.args(1, None)?)),
            "or" => Ok(Formula::or_all(self.args(1, None)?)),
            "implies" => {
                let mut args = self.args(2, Some(2))?;
                let b = args.pop().unwrap();
                Ok(args.pop().unwrap().implies(b))
            }
            "G" | "F" | "O" | "H" => {
                let i = self.interval()?;
                let a = self.args(1, Some(1))?.remove(0);
                Ok(match name.as_str() {
                    "G" => Formula::globally(i, a),
                    "F" => Formula::eventually(i, a),
                    "O" => Formula::once(i, a),
                    _ => Formula::historically(i, a),
                })
            }
            "U" | "S" => {
                let i = self.interval()?;
                let mut args = self.args(2, Some(2))?;
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                Ok(if name == "U" { a.until(i, b) } else { a.since(i, b) })
            }
            id => (self.resolve)(id).map(Formula::Predicate).ok_or_else(|| t.error(format!("unknown predicate `{id}`"))),
        }
    }

    fn args(&mut self, min: usize, max: Option<usize>) -> Result<Vec<Formula<F>>> {
        let open = self.expect(Kind::LParen, "`(`")?;
        let mut out = vec![self.formula()?];
        while self.peek().kind == Kind::Comma {
            self.next();
            out.push(self.formula()?);
        }
        self.expect(Kind::RParen, "`)` or `,`")?;
        if out.len() < min || max.is_some_and(|m| out.len() > m) {
            return Err(open.error(format!("wrong number of operands: {}", out.len())));
        }
        Ok(out)
    }
}

/// True if `id` is a valid predicate identifier (not a keyword).
pub fn is_valid_identifier(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')) && !KEYWORDS.contains(&id)
}
