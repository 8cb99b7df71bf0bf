use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::Padic;

/// Exponent vector of a monomial, ordered graded-lexicographically:
/// lower total degree first, and within a degree `x_1` before `x_2`
/// (so `1 < x < y < x² < xy < y²`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Renders the monomial with the given variable names, `1` for the
    /// constant monomial.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `nvars` variables of degree at most `d`, ascending.
pub fn monomials_up_to(nvars: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut e = vec![0u32; nvars];
        exps_of_degree(&mut e, 0, deg, &mut out);
    }
    out.sort();
    out
}

fn exps_of_degree(e: &mut Vec<u32>, i: usize, left: usize, out: &mut Vec<Monomial>) {
    if e.is_empty() {
        if left == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if i + 1 == e.len() {
        e[i] = left as u32;
        out.push(Monomial(e.clone()));
        return;
    }
    for k in (0..=left).rev() {
        e[i] = k as u32;
        exps_of_degree(e, i + 1, left - k, out);
    }
    e[i] = 0;
}

/// A sparse polynomial in `Q_p[x_1, …, x_n]`. Coefficients that vanish at
/// their precision are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    prime: u64,
    nvars: usize,
    terms: BTreeMap<Monomial, Padic>,
}

impl MultiPoly {
    pub fn zero(prime: u64, nvars: usize) -> Self {
        MultiPoly {
            prime,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        prime: u64,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Padic)>,
    ) -> Result<Self> {
        let mut out = MultiPoly::zero(prime, nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::Dimension(format!(
                    "monomial in {} variables for a polynomial in {nvars}",
                    m.nvars()
                )));
            }
            if c.prime() != prime {
                return Err(Error::PrimeMismatch(prime, c.prime()));
            }
            let sum = match out.terms.remove(&m) {
                Some(old) => old + c,
                None => c,
            };
            if !sum.is_zero() {
                out.terms.insert(m, sum);
            }
        }
        Ok(out)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Padic)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Padic> {
        self.terms.get(m)
    }

    /// Smallest absolute precision among the coefficients.
    pub fn precision(&self) -> i64 {
        self.terms.values().map(Padic::precision).min().unwrap_or(i64::MAX)
    }

    pub fn eval(&self, point: &[Padic]) -> Result<Padic> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let prec = point
            .iter()
            .map(Padic::precision)
            .chain(std::iter::once(self.precision()))
            .min()
            .unwrap_or(i64::MAX)
            .min(i64::MAX / 4);
        let mut acc = Padic::zero(self.prime, prec);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = t.checked_mul(&x.pow(e as i64)?)?;
                }
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Infix rendering with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let coeff = c.to_compact_string();
                if m.degree() == 0 {
                    format!("({coeff})")
                } else {
                    format!("({coeff})*{}", m.render(names))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}
