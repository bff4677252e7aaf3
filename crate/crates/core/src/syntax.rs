//! Textual formula grammar.
//!
//! Atoms are lowercase identifiers, optionally applied to a parenthesised
//! argument list; `at(truck,depot)` is normalised to `at_truck_depot`.
//! Hyphens inside identifiers are normalised to underscores. Operators, from
//! tightest to loosest binding:
//!
//! | level | operators                      | associativity |
//! |-------|--------------------------------|---------------|
//! | 1     | `!`, `X`, `WX`, `F`, `G`       | prefix        |
//! | 2     | `U`                            | right         |
//! | 3     | `&`                            | n-ary         |
//! | 4     | `\|`                           | n-ary         |
//! | 5     | `->`                           | right         |
//!
//! The same grammar covers propositional formulas (goals, preconditions);
//! temporal operators are rejected when a propositional formula is expected.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {pos}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

/// Name-level formula tree produced by the parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Syntax {
    True,
    False,
    Atom { name: String, pos: usize },
    Not(Box<Syntax>),
    And(Vec<Syntax>),
    Or(Vec<Syntax>),
    Implies(Box<Syntax>, Box<Syntax>),
    Next(Box<Syntax>, usize),
    WeakNext(Box<Syntax>, usize),
    Until(Box<Syntax>, Box<Syntax>, usize),
    Eventually(Box<Syntax>, usize),
    Globally(Box<Syntax>, usize),
}

impl Syntax {
    pub fn atom(name: impl Into<String>) -> Self {
        Syntax::Atom {
            name: name.into(),
            pos: 0,
        }
    }

    pub fn children(&self) -> Vec<&Syntax> {
        match self {
            Syntax::True | Syntax::False | Syntax::Atom { .. } => vec![],
            Syntax::Not(a)
            | Syntax::Next(a, _)
            | Syntax::WeakNext(a, _)
            | Syntax::Eventually(a, _)
            | Syntax::Globally(a, _) => vec![a],
            Syntax::And(xs) | Syntax::Or(xs) => xs.iter().collect(),
            Syntax::Implies(a, b) | Syntax::Until(a, b, _) => vec![a, b],
        }
    }

    /// Position of the first temporal operator, if any.
    pub fn first_temporal(&self) -> Option<usize> {
        match self {
            Syntax::True | Syntax::False | Syntax::Atom { .. } => None,
            Syntax::Not(a) => a.first_temporal(),
            Syntax::And(xs) | Syntax::Or(xs) => xs.iter().find_map(Syntax::first_temporal),
            Syntax::Implies(a, b) => a.first_temporal().or_else(|| b.first_temporal()),
            Syntax::Next(_, p)
            | Syntax::WeakNext(_, p)
            | Syntax::Until(_, _, p)
            | Syntax::Eventually(_, p)
            | Syntax::Globally(_, p) => Some(*p),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Syntax::True | Syntax::False | Syntax::Atom { .. } => 0,
            Syntax::Not(_)
            | Syntax::Next(..)
            | Syntax::WeakNext(..)
            | Syntax::Eventually(..)
            | Syntax::Globally(..) => 1,
            Syntax::Until(..) => 2,
            Syntax::And(_) => 3,
            Syntax::Or(_) => 4,
            Syntax::Implies(..) => 5,
        }
    }
}

/// Normalises `pred(a,b)` style atoms to `pred_a_b`.
pub fn normalize_atom(text: &str) -> Result<String, ParseError> {
    let mut lexer = Lexer::new(text);
    let tokens = lexer.tokenize()?;
    let mut parser = Parser { tokens, at: 0 };
    let pos = parser.peek_pos();
    let name = match parser.next() {
        Some(Token::Ident(name)) => parser.atom_args(name)?,
        _ => return Err(ParseError::new(pos, "expected an atom")),
    };
    if parser.at != parser.tokens.len() {
        return Err(ParseError::new(parser.peek_pos(), "trailing input after atom"));
    }
    Ok(name)
}

pub fn parse(text: &str) -> Result<Syntax, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser { tokens, at: 0 };
    if parser.tokens.is_empty() {
        return Err(ParseError::new(0, "empty formula"));
    }
    let formula = parser.implication()?;
    if parser.at != parser.tokens.len() {
        return Err(ParseError::new(parser.peek_pos(), "unexpected trailing input"));
    }
    Ok(formula)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    WeakNext,
    Until,
    Eventually,
    Globally,
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    at: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            src: text.as_bytes(),
            at: 0,
        }
    }

    fn tokenize(&mut self) -> Result<Vec<(Token, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.at < self.src.len() {
            let c = self.src[self.at];
            let start = self.at;
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.at += 1;
                    continue;
                }
                b'(' => self.single(&mut out, Token::LParen),
                b')' => self.single(&mut out, Token::RParen),
                b',' => self.single(&mut out, Token::Comma),
                b'!' => self.single(&mut out, Token::Not),
                b'&' => self.single(&mut out, Token::And),
                b'|' => self.single(&mut out, Token::Or),
                b'-' => {
                    if self.src.get(self.at + 1) == Some(&b'>') {
                        self.at += 2;
                        out.push((Token::Implies, start));
                    } else {
                        return Err(ParseError::new(start, "expected '->'"));
                    }
                }
                b'A'..=b'Z' => {
                    while self.at < self.src.len() && self.src[self.at].is_ascii_uppercase() {
                        self.at += 1;
                    }
                    let word = std::str::from_utf8(&self.src[start..self.at]).unwrap();
                    let tok = match word {
                        "X" => Token::Next,
                        "WX" => Token::WeakNext,
                        "U" => Token::Until,
                        "F" => Token::Eventually,
                        "G" => Token::Globally,
                        _ => {
                            return Err(ParseError::new(
                                start,
                                format!("unknown operator '{word}'"),
                            ))
                        }
                    };
                    out.push((tok, start));
                }
                b'a'..=b'z' | b'_' | b'0'..=b'9' => {
                    let ident = self.ident();
                    let tok = match ident.as_str() {
                        "true" => Token::True,
                        "false" => Token::False,
                        _ => Token::Ident(ident),
                    };
                    out.push((tok, start));
                }
                _ => {
                    return Err(ParseError::new(
                        start,
                        format!("unexpected character '{}'", c as char),
                    ))
                }
            }
        }
        Ok(out)
    }

    fn single(&mut self, out: &mut Vec<(Token, usize)>, tok: Token) {
        out.push((tok, self.at));
        self.at += 1;
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while self.at < self.src.len() {
            let c = self.src[self.at];
            let inner_hyphen = c == b'-'
                && !s.is_empty()
                && matches!(self.src.get(self.at + 1), Some(n) if n.is_ascii_lowercase() || n.is_ascii_digit());
            if c.is_ascii_lowercase() || c.is_ascii_digit() || c == b'_' {
                s.push(c as char);
            } else if inner_hyphen {
                s.push('_');
            } else {
                break;
            }
            self.at += 1;
        }
        s
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(t, _)| t)
    }

    fn peek_pos(&self) -> usize {
        self.tokens
            .get(self.at)
            .map(|(_, p)| *p)
            .or_else(|| self.tokens.last().map(|(_, p)| *p + 1))
            .unwrap_or(0)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<(), ParseError> {
        let pos = self.peek_pos();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => Err(ParseError::new(pos, format!("expected {what}"))),
        }
    }

    fn implication(&mut self) -> Result<Syntax, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Implies) {
            self.at += 1;
            let rhs = self.implication()?;
            return Ok(Syntax::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Syntax, ParseError> {
        let mut items = vec![self.conjunction()?];
        while self.peek() == Some(&Token::Or) {
            self.at += 1;
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Syntax::Or(items)
        })
    }

    fn conjunction(&mut self) -> Result<Syntax, ParseError> {
        let mut items = vec![self.until()?];
        while self.peek() == Some(&Token::And) {
            self.at += 1;
            items.push(self.until()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Syntax::And(items)
        })
    }

    fn until(&mut self) -> Result<Syntax, ParseError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Token::Until) {
            let pos = self.peek_pos();
            self.at += 1;
            let rhs = self.until()?;
            return Ok(Syntax::Until(Box::new(lhs), Box::new(rhs), pos));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Syntax, ParseError> {
        let pos = self.peek_pos();
        let wrap: fn(Box<Syntax>, usize) -> Syntax = match self.peek() {
            Some(Token::Not) => |f, _| Syntax::Not(f),
            Some(Token::Next) => Syntax::Next,
            Some(Token::WeakNext) => Syntax::WeakNext,
            Some(Token::Eventually) => Syntax::Eventually,
            Some(Token::Globally) => Syntax::Globally,
            _ => return self.primary(),
        };
        self.at += 1;
        let inner = self.unary()?;
        Ok(wrap(Box::new(inner), pos))
    }

    fn primary(&mut self) -> Result<Syntax, ParseError> {
        let pos = self.peek_pos();
        match self.next() {
            Some(Token::True) => Ok(Syntax::True),
            Some(Token::False) => Ok(Syntax::False),
            Some(Token::Ident(name)) => {
                let name = self.atom_args(name)?;
                Ok(Syntax::Atom { name, pos })
            }
            Some(Token::LParen) => {
                let inner = self.implication()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Some(_) => Err(ParseError::new(pos, "expected an atom, constant or '('")),
            None => Err(ParseError::new(pos, "unexpected end of input")),
        }
    }

    /// Consumes an optional `(arg, ...)` list after an identifier.
    fn atom_args(&mut self, mut name: String) -> Result<String, ParseError> {
        if self.peek() != Some(&Token::LParen) {
            return Ok(name);
        }
        // only an argument list if the parenthesis is followed by ident [,)]
        let is_args = matches!(
            (self.tokens.get(self.at + 1), self.tokens.get(self.at + 2)),
            (Some((Token::Ident(_), _)), Some((Token::Comma | Token::RParen, _)))
        );
        if !is_args {
            return Err(ParseError::new(
                self.peek_pos(),
                "expected an argument list after atom name",
            ));
        }
        self.at += 1;
        loop {
            let pos = self.peek_pos();
            match self.next() {
                Some(Token::Ident(arg)) => {
                    name.push('_');
                    name.push_str(&arg);
                }
                _ => return Err(ParseError::new(pos, "expected an argument")),
            }
            let pos = self.peek_pos();
            match self.next() {
                Some(Token::Comma) => continue,
                Some(Token::RParen) => break,
                _ => return Err(ParseError::new(pos, "expected ',' or ')'")),
            }
        }
        Ok(name)
    }
}

impl fmt::Display for Syntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, c: &Syntax, max_level: u8| -> fmt::Result {
            if c.level() <= max_level {
                write!(f, "{c}")
            } else {
                write!(f, "({c})")
            }
        };
        match self {
            Syntax::True => write!(f, "true"),
            Syntax::False => write!(f, "false"),
            Syntax::Atom { name, .. } => write!(f, "{name}"),
            Syntax::Not(a) => {
                write!(f, "!")?;
                child(f, a, 1)
            }
            Syntax::Next(a, _) => {
                write!(f, "X ")?;
                child(f, a, 1)
            }
            Syntax::WeakNext(a, _) => {
                write!(f, "WX ")?;
                child(f, a, 1)
            }
            Syntax::Eventually(a, _) => {
                write!(f, "F ")?;
                child(f, a, 1)
            }
            Syntax::Globally(a, _) => {
                write!(f, "G ")?;
                child(f, a, 1)
            }
            Syntax::Until(a, b, _) => {
                child(f, a, 1)?;
                write!(f, " U ")?;
                child(f, b, 2)
            }
            Syntax::And(xs) | Syntax::Or(xs) => {
                let (sep, max) = if matches!(self, Syntax::And(_)) {
                    (" & ", 2)
                } else {
                    (" | ", 3)
                };
                if xs.is_empty() {
                    return write!(f, "{}", if max == 2 { "true" } else { "false" });
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    child(f, x, max)?;
                }
                Ok(())
            }
            Syntax::Implies(a, b) => {
                child(f, a, 4)?;
                write!(f, " -> ")?;
                child(f, b, 5)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip(s: Syntax) -> Syntax {
        // positions are irrelevant for structural comparisons
        match s {
            Syntax::Atom { name, .. } => Syntax::atom(name),
            Syntax::Not(a) => Syntax::Not(Box::new(strip(*a))),
            Syntax::And(xs) => Syntax::And(xs.into_iter().map(strip).collect()),
            Syntax::Or(xs) => Syntax::Or(xs.into_iter().map(strip).collect()),
            Syntax::Implies(a, b) => Syntax::Implies(Box::new(strip(*a)), Box::new(strip(*b))),
            Syntax::Next(a, _) => Syntax::Next(Box::new(strip(*a)), 0),
            Syntax::WeakNext(a, _) => Syntax::WeakNext(Box::new(strip(*a)), 0),
            Syntax::Until(a, b, _) => Syntax::Until(Box::new(strip(*a)), Box::new(strip(*b)), 0),
            Syntax::Eventually(a, _) => Syntax::Eventually(Box::new(strip(*a)), 0),
            Syntax::Globally(a, _) => Syntax::Globally(Box::new(strip(*a)), 0),
            other => other,
        }
    }

    #[test]
    fn eventually_atom() {
        let s = strip(parse("F at_truck_depot").unwrap());
        assert_eq!(s, Syntax::Eventually(Box::new(Syntax::atom("at_truck_depot")), 0));
    }

    #[test]
    fn globally_implies_next() {
        let s = strip(parse("G (p -> X q)").unwrap());
        let expected = Syntax::Globally(
            Box::new(Syntax::Implies(
                Box::new(Syntax::atom("p")),
                Box::new(Syntax::Next(Box::new(Syntax::atom("q")), 0)),
            )),
            0,
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn atoms_with_arguments_are_normalised() {
        let s = strip(parse("at(truck, coffee-shop)").unwrap());
        assert_eq!(s, Syntax::atom("at_truck_coffee_shop"));
        assert_eq!(normalize_atom("link(depot,butchery)").unwrap(), "link_depot_butchery");
    }

    #[test]
    fn precedence_and_associativity() {
        let s = strip(parse("a | b & c -> d U e U f").unwrap());
        assert_eq!(s.to_string(), "a | b & c -> d U e U f");
        match s {
            Syntax::Implies(l, r) => {
                assert!(matches!(*l, Syntax::Or(_)));
                match *r {
                    Syntax::Until(_, rr, _) => assert!(matches!(*rr, Syntax::Until(..))),
                    other => panic!("{other:?}"),
                }
            }
            other => panic!("{other:?}"),
        }
        let s = strip(parse("!a U b").unwrap());
        assert!(matches!(s, Syntax::Until(..)));
    }

    #[test]
    fn printer_round_trips() {
        for text in [
            "G (at(truck,coffee_shop) -> X at(truck,butchery)) & (!at(truck,butchery) U at(truck,coffee_shop))",
            "(a -> b) -> c",
            "a & (b & c)",
            "X (a U b) U c",
            "!(a | b) & WX false",
            "F G !p",
        ] {
            let s = strip(parse(text).unwrap());
            let printed = s.to_string();
            assert_eq!(strip(parse(&printed).unwrap()), s, "{text} -> {printed}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("a & (b | ").unwrap_err();
        assert_eq!(e.pos, 8);
        let e = parse("a & Q").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse("a b").unwrap_err();
        assert_eq!(e.pos, 2);
        assert!(parse("").is_err());
        assert!(parse("a - b").is_err());
    }

    #[test]
    fn temporal_positions() {
        assert_eq!(parse("a & b").unwrap().first_temporal(), None);
        assert_eq!(parse("a & X b").unwrap().first_temporal(), Some(4));
    }
}
