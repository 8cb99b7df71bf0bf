//! Polynomial system files.
//!
//! ```text
//! # comment
//! p=7 prec=6 vars=x,y
//! x^2 - 2
//! y - x
//! 3*7^2*x*y + 7^-1
//! ```
//!
//! Polynomials use `+ - * ^` and parentheses over integer constants and the
//! declared variables. A constant raised to a negative power is allowed, so
//! `u*p^v` coefficients can be written directly (the literal `p` stands for
//! the prime unless it is declared as a variable).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::padic::{check_prime, Padic};

/// A parsed system file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFile {
    pub prime: u64,
    pub precision: i64,
    pub variables: Vec<String>,
    pub polynomials: Vec<MultiPoly>,
}

pub fn parse_system_file(text: &str) -> Result<SystemFile> {
    parse_system_file_at(text, None)
}

/// Like [`parse_system_file`], but coefficients are read at `precision`
/// instead of the header's value when one is given.
pub fn parse_system_file_at(text: &str, precision: Option<i64>) -> Result<SystemFile> {
    if let Some(n) = precision.filter(|&n| n < 1) {
        return Err(Error::Domain(format!("precision must be ≥ 1, got {n}")));
    }
    let mut header: Option<(u64, i64, Vec<String>)> = None;
    let mut polynomials = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some((prime, precision, vars)) = &header else {
            let (p, n, vars) = parse_header(line, line_no)?;
            header = Some((p, precision.unwrap_or(n), vars));
            continue;
        };
        if line.trim_start().starts_with("basis:") {
            return Err(Error::Unsupported(format!(
                "line {line_no}: Gröbner basis input is not implemented"
            )));
        }
        let exact = Parser::new(line, line_no, vars, *prime).parse_line()?;
        let poly = to_padic(exact, *prime, vars.len(), *precision);
        if poly.is_zero() {
            return Err(Error::parse(line_no, 1, "polynomial vanishes at the declared precision"));
        }
        polynomials.push(poly);
    }
    let Some((prime, precision, variables)) = header else {
        return Err(Error::parse(1, 1, "missing header `p=<prime> prec=<N> vars=<names>`"));
    };
    if polynomials.is_empty() {
        return Err(Error::parse(text.lines().count().max(1), 1, "no polynomials"));
    }
    Ok(SystemFile {
        prime,
        precision,
        variables,
        polynomials,
    })
}

fn parse_header(line: &str, line_no: usize) -> Result<(u64, i64, Vec<String>)> {
    let (mut prime, mut prec, mut vars) = (None, None, None);
    for token in line.split_whitespace() {
        let column = token.as_ptr() as usize - line.as_ptr() as usize + 1;
        let Some((key, value)) = token.split_once('=') else {
            return Err(Error::parse(line_no, column, format!("expected key=value, got `{token}`")));
        };
        let bad = |what: &str| Error::parse(line_no, column + key.len() + 1, format!("invalid {what} `{value}`"));
        match key {
            "p" => {
                let p: u64 = value.parse().map_err(|_| bad("prime"))?;
                check_prime(p).map_err(|_| bad("prime"))?;
                prime = Some(p);
            }
            "prec" => {
                let n: i64 = value.parse().map_err(|_| bad("precision"))?;
                if n < 1 {
                    return Err(bad("precision"));
                }
                prec = Some(n);
            }
            "vars" => {
                let names: Vec<String> = value.split(',').map(str::to_string).collect();
                let valid = |s: &String| {
                    let mut c = s.chars();
                    c.next().is_some_and(|h| h.is_ascii_alphabetic() || h == '_')
                        && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
                };
                if names.is_empty() || !names.iter().all(valid) {
                    return Err(bad("variable list"));
                }
                let mut sorted = names.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != names.len() {
                    return Err(bad("variable list (duplicate name)"));
                }
                vars = Some(names);
            }
            _ => return Err(Error::parse(line_no, column, format!("unknown header key `{key}`"))),
        }
    }
    match (prime, prec, vars) {
        (Some(p), Some(n), Some(v)) => Ok((p, n, v)),
        _ => Err(Error::parse(line_no, 1, "header needs p=, prec= and vars=")),
    }
}

type Exact = BTreeMap<Monomial, BigRational>;

fn to_padic(exact: Exact, p: u64, nvars: usize, prec: i64) -> MultiPoly {
    let terms = exact
        .into_iter()
        .map(|(m, c)| (m, rational_to_padic(&c, p, prec)))
        .collect::<Vec<_>>();
    MultiPoly::from_terms(p, nvars, terms).expect("monomials built with the declared arity")
}

/// `c + O(p^prec)` for an exact rational `c`.
pub(crate) fn rational_to_padic(c: &BigRational, p: u64, prec: i64) -> Padic {
    let pb = BigInt::from(p);
    let mut den = c.denom().clone();
    let mut k = 0i64;
    while den.is_multiple_of(&pb) {
        den /= &pb;
        k += 1;
    }
    let num = Padic::from_bigint(p, c.numer(), prec + k);
    let den = Padic::from_bigint(p, &den, prec + k);
    num.checked_div(&den)
        .expect("denominator is a unit")
        .shift(-k)
        .truncate(prec)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    vars: &'a [String],
    prime: u64,
    lex_error: Option<Error>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, line: usize, vars: &'a [String], prime: u64) -> Self {
        let mut toks = Vec::new();
        let mut lex_error = None;
        let chars: Vec<(usize, char)> = src.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (off, ch) = chars[i];
            let col = src[..off].chars().count() + 1;
            if ch.is_whitespace() {
                i += 1;
            } else if ch.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|c| c.1).collect();
                toks.push((Tok::Num(s.parse().expect("digits")), col));
            } else if ch.is_ascii_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().map(|c| c.1).collect()), col));
            } else if "+-*^()".contains(ch) {
                toks.push((Tok::Op(ch), col));
                i += 1;
            } else {
                lex_error.get_or_insert_with(|| Error::parse(line, col, format!("unexpected character `{ch}`")));
                i += 1;
            }
        }
        Parser {
            toks,
            pos: 0,
            line,
            end_col: src.chars().count() + 1,
            vars,
            prime,
            lex_error,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_line(mut self) -> Result<Exact> {
        if let Some(e) = self.lex_error.take() {
            return Err(e);
        }
        let e = self.expr()?;
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Exact> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = add(acc, t, false);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = add(acc, t, true);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Exact> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            let f = self.unary()?;
            acc = mul(&acc, &f);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Exact> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(add(Exact::new(), inner, true));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Exact> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let col = self.col();
        let Some(Tok::Num(e)) = self.peek().cloned() else {
            return Err(self.err("expected an integer exponent"));
        };
        self.pos += 1;
        let e: u32 = e
            .try_into()
            .ok()
            .filter(|&e: &u32| e <= 4096)
            .ok_or_else(|| Error::parse(self.line, col, "exponent too large"))?;
        if negative {
            let c = constant_value(&base, self.vars.len())
                .filter(|c| !c.is_zero())
                .ok_or_else(|| Error::parse(self.line, col, "negative powers need a nonzero constant base"))?;
            let inv = num_traits::pow(c.recip(), e as usize);
            return Ok(constant(inv, self.vars.len()));
        }
        let mut acc = constant(BigRational::one(), self.vars.len());
        for _ in 0..e {
            acc = mul(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Exact> {
        let n = self.vars.len();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(constant(BigRational::from_integer(v), n))
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    self.pos += 1;
                    Ok(BTreeMap::from([(Monomial::var(i, n), BigRational::one())]))
                } else if name == "p" {
                    self.pos += 1;
                    Ok(constant(BigRational::from_integer(BigInt::from(self.prime)), n))
                } else {
                    Err(self.err(format!("unknown variable `{name}`")))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of line")),
        }
    }
}

fn constant(c: BigRational, nvars: usize) -> Exact {
    if c.is_zero() {
        Exact::new()
    } else {
        BTreeMap::from([(Monomial::one(nvars), c)])
    }
}

fn constant_value(e: &Exact, nvars: usize) -> Option<BigRational> {
    match e.len() {
        0 => Some(BigRational::zero()),
        1 => e.get(&Monomial::one(nvars)).cloned(),
        _ => None,
    }
}

fn add(mut a: Exact, b: Exact, negate: bool) -> Exact {
    for (m, c) in b {
        let c = if negate { -c } else { c };
        let s = a.remove(&m).map_or(c.clone(), |old| old + c);
        if !s.is_zero() {
            a.insert(m, s);
        }
    }
    a
}

fn mul(a: &Exact, b: &Exact) -> Exact {
    let mut out = Exact::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.mul(mb);
            let s = out.remove(&m).map_or_else(|| ca * cb, |old| old + ca * cb);
            if !s.is_zero() {
                out.insert(m, s);
            }
        }
    }
    out
}

/// Writes a system file that [`parse_system_file`] reads back to the same
/// polynomials. Coefficients are written as balanced integers times powers
/// of the prime.
pub fn write_system_file(prime: u64, precision: i64, variables: &[String], polys: &[MultiPoly]) -> String {
    let mut out = format!("p={prime} prec={precision} vars={}\n", variables.join(","));
    for f in polys {
        let terms: Vec<String> = f
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(m, c)| {
                let v = c.valuation();
                let unit = c.shift(-v).to_bigint_balanced().unwrap_or_default();
                let mut s = if unit.is_negative() {
                    format!("({unit})")
                } else {
                    unit.to_string()
                };
                if v != 0 {
                    s.push_str(&format!("*{prime}^{v}"));
                }
                if m.degree() > 0 {
                    s.push('*');
                    s.push_str(&m.render(variables));
                }
                s
            })
            .collect();
        out.push_str(&terms.join(" + "));
        out.push('\n');
    }
    out
}
