//! Text forms: digit expansion `d0 + d1*p + d2*p^2 + O(p^N)` and compact
//! `u*p^v + O(p^N)`. The parser accepts both (and any sum of such terms).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{check_prime, pow_p, signed_scaled, Padic};
use crate::error::{Error, Result};

fn power_term(coeff: &str, p: u64, k: i64) -> String {
    match k {
        0 => coeff.to_string(),
        1 => format!("{coeff}*{p}"),
        _ => format!("{coeff}*{p}^{k}"),
    }
}

pub(super) fn digit_expansion(a: &Padic) -> String {
    let p = a.prime();
    let mut terms: Vec<String> = a
        .digits()
        .iter()
        .enumerate()
        .filter(|(_, d)| **d != 0)
        .map(|(i, d)| power_term(&d.to_string(), p, a.valuation() + i as i64))
        .collect();
    terms.push(format!("O({p}^{})", a.precision()));
    terms.join(" + ")
}

pub(super) fn compact(a: &Padic) -> String {
    let p = a.prime();
    if a.is_zero() {
        format!("O({p}^{})", a.precision())
    } else {
        format!("{}*{p}^{} + O({p}^{})", a.unit(), a.valuation(), a.precision())
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn sint(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let v: i64 = self
            .uint()?
            .try_into()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn small_uint(&mut self) -> Result<u64> {
        self.uint()?
            .try_into()
            .map_err(|_| self.err("integer out of range"))
    }
}

struct Term {
    negative: bool,
    coeff: BigInt,
    base: Option<u64>,
    exp: i64,
}

pub(super) fn parse(text: &str) -> Result<Padic> {
    let mut c = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut terms = Vec::new();
    let mut cap: Option<(u64, i64)> = None;
    let mut first = true;
    loop {
        let negative = if first {
            c.eat(b'-')
        } else if c.eat(b'+') {
            false
        } else if c.eat(b'-') {
            true
        } else if c.peek().is_none() {
            break;
        } else {
            return Err(c.err("expected '+' or '-'"));
        };
        first = false;
        if c.eat(b'O') {
            if cap.is_some() {
                return Err(c.err("more than one O(...) term"));
            }
            c.expect(b'(')?;
            let p = c.small_uint()?;
            let n = if c.eat(b'^') { c.sint()? } else { 1 };
            c.expect(b')')?;
            cap = Some((p, n));
            continue;
        }
        let lead = c.uint()?;
        let term = if c.eat(b'*') {
            let base = c.small_uint()?;
            let exp = if c.eat(b'^') { c.sint()? } else { 1 };
            Term {
                negative,
                coeff: lead,
                base: Some(base),
                exp,
            }
        } else if c.eat(b'^') {
            let base: u64 = lead
                .try_into()
                .map_err(|_| c.err("base out of range"))?;
            Term {
                negative,
                coeff: BigInt::one(),
                base: Some(base),
                exp: c.sint()?,
            }
        } else {
            Term {
                negative,
                coeff: lead,
                base: None,
                exp: 0,
            }
        };
        terms.push(term);
    }
    let (p, n) = cap.ok_or_else(|| c.err("missing O(p^N) term"))?;
    check_prime(p)?;
    if let Some(t) = terms.iter().find(|t| t.base.is_some_and(|b| b != p)) {
        return Err(c.err(&format!(
            "term base {} does not match the prime {p}",
            t.base.unwrap_or(0)
        )));
    }
    let Some(kmin) = terms.iter().map(|t| t.exp).min() else {
        return Ok(Padic::zero(p, n));
    };
    let mut total = BigInt::zero();
    for t in &terms {
        let scaled = &t.coeff * BigInt::from(pow_p(p, t.exp - kmin));
        if t.negative {
            total -= scaled;
        } else {
            total += scaled;
        }
    }
    Ok(signed_scaled(p, &total, kmin, n))
}
