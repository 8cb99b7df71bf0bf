use super::{add_mod, inv_mod, mul_mod, sub_mod, ResidueElem};

/// A polynomial over F_p, coefficients stored lowest degree first.
///
/// The coefficient list is kept trimmed, so the leading coefficient is
/// non-zero unless the polynomial is zero (empty list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePoly {
    prime: u64,
    coeffs: Vec<u64>,
}

impl ResiduePoly {
    pub fn new(prime: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % prime).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ResiduePoly { prime, coeffs }
    }

    pub fn zero(prime: u64) -> Self {
        ResiduePoly {
            prime,
            coeffs: Vec::new(),
        }
    }

    pub fn one(prime: u64) -> Self {
        Self::new(prime, vec![1])
    }

    /// `x - c`.
    pub fn linear(prime: u64, c: u64) -> Self {
        Self::new(prime, vec![sub_mod(0, c, prime), 1])
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(prime: u64, roots: &[u64]) -> Self {
        roots
            .iter()
            .fold(Self::one(prime), |acc, r| acc.mul(&Self::linear(prime, *r)))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.prime;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, c| add_mod(mul_mod(acc, x, p), *c, p))
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prime;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                add_mod(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                    p,
                )
            })
            .collect();
        Self::new(p, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prime;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                sub_mod(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                    p,
                )
            })
            .collect();
        Self::new(p, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prime;
        if self.is_zero() || other.is_zero() {
            return Self::zero(p);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = add_mod(c[i + j], mul_mod(*a, *b, p), p);
            }
        }
        Self::new(p, c)
    }

    pub fn scale(&self, s: u64) -> Self {
        let p = self.prime;
        Self::new(p, self.coeffs.iter().map(|c| mul_mod(*c, s, p)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.prime))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let p = self.prime;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv_lead = inv_mod(divisor.leading(), p);
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (Self::zero(p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv_lead, p);
            quot[k] = c;
            if c != 0 {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = sub_mod(rem[k + j], mul_mod(c, *d, p), p);
                }
            }
        }
        rem.truncate(dd);
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.prime;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| mul_mod(*c, i as u64 % p, p))
            .collect();
        Self::new(p, c)
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.prime).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    pub fn is_square_free(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// `Some(λ)` iff `self = c * (x - λ)^n` with `n = deg self ≥ 1`.
    pub fn is_pure_power(&self) -> Option<ResidueElem> {
        let n = self.degree()?;
        if n == 0 {
            return None;
        }
        match linear_roots_with_multiplicity(self).as_slice() {
            [(lambda, m)] if *m == n => Some(*lambda),
            _ => None,
        }
    }
}

/// Roots of a split, square-free polynomial (equal-degree splitting).
fn split_roots(g: &ResiduePoly, out: &mut Vec<u64>) {
    let p = g.prime();
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            let g = g.monic();
            out.push(sub_mod(0, g.coeffs()[0], p));
            return;
        }
        _ => {}
    }
    if p == 2 {
        out.extend((0..2).filter(|x| g.eval(*x) == 0));
        return;
    }
    let e = (p - 1) / 2;
    for a in 0..p {
        let shifted = ResiduePoly::new(p, vec![a, 1]);
        let h = shifted.pow_mod(e, g).sub(&ResiduePoly::one(p));
        let w = g.gcd(&h);
        let dw = w.degree().unwrap_or(0);
        if dw > 0 && Some(dw) < g.degree() {
            split_roots(&w, out);
            split_roots(&g.div_rem(&w).0, out);
            return;
        }
    }
    // Unreachable for square-free split input; keep a total fallback.
    out.extend((0..p).filter(|x| g.eval(*x) == 0));
}

/// All roots of `f` in F_p with their exact multiplicities, ascending.
///
/// The split part `gcd(f, x^p - x)` is isolated first, so the cost is
/// polynomial in `log p` rather than linear in `p`.
pub fn linear_roots_with_multiplicity(f: &ResiduePoly) -> Vec<(ResidueElem, usize)> {
    let p = f.prime();
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let f = f.monic();
    let x = ResiduePoly::new(p, vec![0, 1]);
    let xp = x.pow_mod(p, &f);
    let g = f.gcd(&xp.sub(&x.rem(&f)));
    let mut roots = Vec::new();
    split_roots(&g, &mut roots);
    roots.sort_unstable();
    roots.dedup();
    roots
        .into_iter()
        .map(|r| {
            let lin = ResiduePoly::linear(p, r);
            let mut m = 0;
            let mut cur = f.clone();
            loop {
                let (q, rem) = cur.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                m += 1;
                cur = q;
            }
            (ResidueElem::new(p, r), m)
        })
        .collect()
}
