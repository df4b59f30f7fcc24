//! Text parsers for field and algebra descriptors, scalars, polynomials and
//! rational functions in the variable `x`.

use std::fmt;

use gwdeg_core::etale::{Algebra, EtaleAlgebra};
use gwdeg_core::{FieldSpec, Polynomial, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;

const MAX_INPUT: usize = 100_000;
const MAX_DEPTH: usize = 100;
const MAX_EXPONENT: u32 = 256;
const MAX_LITERAL_DIGITS: usize = 2_000;
/// Bound on the bit size of a coefficient produced by `^`.
const MAX_POWER_BITS: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    /// Byte offset into the input, when the error has a location.
    pub position: Option<usize>,
}

impl ParseError {
    fn at(position: usize, message: impl Into<String>) -> Self {
        ParseError { message: message.into(), position: Some(position) }
    }

    fn new(message: impl Into<String>) -> Self {
        ParseError { message: message.into(), position: None }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some(p) => write!(f, "{} at column {}", self.message, p + 1),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

pub type ParseResult<T> = Result<T, ParseError>;

/// `QQ`, `GF:p`, `RR` or `CC`.
pub fn parse_field(text: &str) -> ParseResult<FieldSpec> {
    let t = text.trim();
    match t {
        "QQ" => Ok(FieldSpec::Rationals),
        "RR" => Ok(FieldSpec::FormalReal),
        "CC" => Ok(FieldSpec::FormalComplex),
        _ => {
            let Some(p) = t.strip_prefix("GF:") else {
                return Err(ParseError::new(format!("unknown field '{t}' (expected QQ, GF:p, RR or CC)")));
            };
            let p: u64 = p.trim().parse().map_err(|_| ParseError::new(format!("bad prime in '{t}'")))?;
            FieldSpec::prime(p).map_err(|e| ParseError::new(e.to_string()))
        }
    }
}

/// `BASE[x]/(f1)x(f2)x...`; `×` is accepted as the separator too.
pub fn parse_algebra(text: &str) -> ParseResult<Algebra> {
    let t = text.trim();
    let Some(open) = t.find("[x]/") else {
        return Err(ParseError::new("algebra descriptor must look like BASE[x]/(f1)x(f2)"));
    };
    let field = parse_field(&t[..open])?;
    let body_start = open + 4;
    let mut factors = Vec::new();
    let bytes: Vec<char> = t[body_start..].chars().collect();
    let mut offsets = Vec::with_capacity(bytes.len());
    let mut acc = body_start;
    for c in &bytes {
        offsets.push(acc);
        acc += c.len_utf8();
    }
    let mut i = 0;
    loop {
        while i < bytes.len() && bytes[i].is_whitespace() {
            i += 1;
        }
        if i >= bytes.len() || bytes[i] != '(' {
            let pos = offsets.get(i).copied().unwrap_or(t.len());
            return Err(ParseError::at(pos, "expected '(' starting a factor"));
        }
        let start = i + 1;
        let mut depth = 1usize;
        i += 1;
        while i < bytes.len() && depth > 0 {
            match bytes[i] {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            i += 1;
        }
        if depth > 0 {
            return Err(ParseError::at(t.len(), "unbalanced parentheses in algebra descriptor"));
        }
        let inner: String = bytes[start..i - 1].iter().collect();
        let f = parse_polynomial(&inner, field).map_err(|e| ParseError {
            message: format!("factor {}: {}", factors.len() + 1, e.message),
            position: e.position.map(|p| offsets[start] + p),
        })?;
        factors.push(f);
        while i < bytes.len() && bytes[i].is_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        if bytes[i] == 'x' || bytes[i] == '×' || bytes[i] == '*' {
            i += 1;
        } else {
            return Err(ParseError::at(offsets[i], "expected 'x' between factors"));
        }
    }
    EtaleAlgebra::new(field, factors).map_err(|e| ParseError::new(e.to_string()))
}

/// A constant expression such as `-3`, `5/7` or `2^10`.
pub fn parse_scalar(text: &str, field: FieldSpec) -> ParseResult<Scalar> {
    let p = parse_polynomial(text, field)?;
    if p.degree().unwrap_or(0) > 0 {
        return Err(ParseError::new(format!("'{}' is not a constant", text.trim())));
    }
    Ok(p.coeff(0))
}

/// Comma-separated constants.
pub fn parse_scalar_list(text: &str, field: FieldSpec) -> ParseResult<Vec<Scalar>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|s| parse_scalar(s, field)).collect()
}

pub fn parse_polynomial(text: &str, field: FieldSpec) -> ParseResult<Polynomial> {
    let (num, den) = Parser::new(text, field, false)?.parse()?;
    let inv = den.coeff(0).inv().expect("constant divisors are checked while parsing");
    Ok(num.scale(&inv))
}

/// A rational function `num / den`, returned unreduced.
pub fn parse_rational_function(text: &str, field: FieldSpec) -> ParseResult<(Polynomial, Polynomial)> {
    Parser::new(text, field, true)?.parse()
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> ParseResult<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                chars.next();
            }
            if digits.len() > MAX_LITERAL_DIGITS {
                return Err(ParseError::at(pos, "numeric literal is too long"));
            }
            if let Some(&(dot, '.')) = chars.peek() {
                return Err(ParseError::at(dot, "decimal literals are not exact; write a fraction a/b"));
            }
            out.push((Token::Num(digits.parse().expect("ascii digits")), pos));
            continue;
        }
        let tok = match c {
            'x' | 'X' => Token::X,
            '+' => Token::Plus,
            '-' | '−' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            c if c.is_alphabetic() || c == '_' => {
                return Err(ParseError::at(pos, format!("unknown symbol '{c}'")));
            }
            c => return Err(ParseError::at(pos, format!("unexpected character '{c}'"))),
        };
        out.push((tok, pos));
        chars.next();
    }
    Ok(out)
}

type Frac = (Polynomial, Polynomial);

fn coefficient_bits(p: &Polynomial) -> u64 {
    p.coeffs()
        .iter()
        .map(|c| {
            let q = c.to_rational_lift();
            q.numer().bits().max(q.denom().bits())
        })
        .max()
        .unwrap_or(0)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    idx: usize,
    end: usize,
    field: FieldSpec,
    rational: bool,
    depth: usize,
}

impl Parser {
    fn new(text: &str, field: FieldSpec, rational: bool) -> ParseResult<Self> {
        if text.len() > MAX_INPUT {
            return Err(ParseError::new("input is too long"));
        }
        Ok(Parser { tokens: tokenize(text)?, idx: 0, end: text.len(), field, rational, depth: 0 })
    }

    fn parse(mut self) -> ParseResult<Frac> {
        if self.tokens.is_empty() {
            return Err(ParseError::at(0, "empty expression"));
        }
        let v = self.expr()?;
        if let Some((_, pos)) = self.tokens.get(self.idx) {
            return Err(ParseError::at(*pos, "unexpected trailing input"));
        }
        Ok(v)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.idx).map_or(self.end, |(_, p)| *p)
    }

    fn enter(&mut self) -> ParseResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::at(self.pos(), "expression is nested too deeply"));
        }
        Ok(())
    }

    fn checked(&self, v: Frac, pos: usize) -> ParseResult<Frac> {
        for p in [&v.0, &v.1] {
            p.check_degree().map_err(|e| ParseError::at(pos, e.to_string()))?;
        }
        Ok(v)
    }

    fn expr(&mut self) -> ParseResult<Frac> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek().cloned() {
            if op != Token::Plus && op != Token::Minus {
                break;
            }
            let pos = self.pos();
            self.idx += 1;
            let rhs = self.term()?;
            let num_l = &acc.0 * &rhs.1;
            let num_r = &rhs.0 * &acc.1;
            let num = if op == Token::Plus { &num_l + &num_r } else { &num_l - &num_r };
            acc = self.checked((num, &acc.1 * &rhs.1), pos)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> ParseResult<Frac> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Some(Token::Star) => {
                    self.idx += 1;
                    let rhs = self.unary()?;
                    acc = self.checked((&acc.0 * &rhs.0, &acc.1 * &rhs.1), pos)?;
                }
                Some(Token::Slash) => {
                    self.idx += 1;
                    let rhs = self.unary()?;
                    if rhs.0.is_zero() {
                        return Err(ParseError::at(pos, "division by zero"));
                    }
                    if !self.rational && rhs.0.degree() != Some(0) {
                        return Err(ParseError::at(pos, "division by a non-constant expression"));
                    }
                    acc = self.checked((&acc.0 * &rhs.1, &acc.1 * &rhs.0), pos)?;
                }
                // implicit product: `2x`, `3(x+1)`, `(x-1)(x+1)`
                Some(Token::X) | Some(Token::LParen) => {
                    let rhs = self.power()?;
                    acc = self.checked((&acc.0 * &rhs.0, &acc.1 * &rhs.1), pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> ParseResult<Frac> {
        match self.peek() {
            Some(Token::Minus) => {
                self.enter()?;
                self.idx += 1;
                let (n, d) = self.unary()?;
                self.depth -= 1;
                Ok((-&n, d))
            }
            Some(Token::Plus) => {
                self.enter()?;
                self.idx += 1;
                let v = self.unary()?;
                self.depth -= 1;
                Ok(v)
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> ParseResult<Frac> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        let pos = self.pos();
        self.idx += 1;
        let exp = match self.tokens.get(self.idx) {
            Some((Token::Num(n), _)) => n.clone(),
            _ => return Err(ParseError::at(self.pos(), "exponent must be a non-negative integer literal")),
        };
        self.idx += 1;
        let exp: u32 = match u32::try_from(exp) {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return Err(ParseError::at(pos, format!("exponent exceeds {MAX_EXPONENT}"))),
        };
        let deg = base.0.degree().unwrap_or(0).max(base.1.degree().unwrap_or(0));
        if deg as u64 * exp as u64 > gwdeg_core::poly::MAX_DEGREE as u64 {
            return Err(ParseError::at(pos, format!("degree exceeds {}", gwdeg_core::poly::MAX_DEGREE)));
        }
        let bits = coefficient_bits(&base.0).max(coefficient_bits(&base.1));
        if bits.saturating_mul(exp as u64) > MAX_POWER_BITS {
            return Err(ParseError::at(pos, "power is too large"));
        }
        self.checked((base.0.pow(exp), base.1.pow(exp)), pos)
    }

    fn atom(&mut self) -> ParseResult<Frac> {
        let one = Polynomial::one(self.field);
        let pos = self.pos();
        match self.tokens.get(self.idx).cloned() {
            Some((Token::Num(n), _)) => {
                self.idx += 1;
                let q = BigRational::from_integer(n);
                let s = Scalar::from_rational(self.field, &q).map_err(|e| ParseError::at(pos, e.to_string()))?;
                Ok((Polynomial::constant(s), one))
            }
            Some((Token::X, _)) => {
                self.idx += 1;
                Ok((Polynomial::x(self.field), one))
            }
            Some((Token::LParen, _)) => {
                self.enter()?;
                self.idx += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(ParseError::at(self.pos(), "expected ')'"));
                }
                self.idx += 1;
                self.depth -= 1;
                Ok(v)
            }
            Some(_) => Err(ParseError::at(pos, "expected a number, 'x' or '('")),
            None => Err(ParseError::at(pos, "unexpected end of input")),
        }
    }
}
