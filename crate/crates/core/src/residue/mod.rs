//! Arithmetic, polynomials and linear algebra over the residue field F_p.
//!
//! Everything here is exact and cheap; it seeds the iterative p-adic
//! algorithms with eigenvalue guesses and multiplicities.

mod matrix;
mod poly;

pub use matrix::ResidueMatrix;
pub use poly::{linear_roots_with_multiplicity, ResiduePoly};

/// An element of F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct ResidueElem {
    prime: u64,
    value: u64,
}

impl ResidueElem {
    pub fn new(prime: u64, value: u64) -> Self {
        ResidueElem {
            prime,
            value: value % prime,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn value(&self) -> u64 {
        self.value
    }
}

impl std::fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}", self.value, self.prime)
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - (b % p) as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a non-zero residue (Fermat).
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks), if any.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
        .expect("a non-residue exists for odd p");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tonelli_shanks_matches_scan() {
        for p in [3u64, 5, 7, 11, 13, 17, 97, 101] {
            for a in 0..p {
                let scan = (0..p).find(|x| mul_mod(*x, *x, p) == a);
                match sqrt_mod_p(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a, "p={p} a={a}"),
                    None => assert!(scan.is_none(), "p={p} a={a}"),
                }
            }
        }
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(sub_mod(2, 5, 7), 4);
        assert_eq!(mul_mod(inv_mod(3, 7), 3, 7), 1);
        assert_eq!(pow_mod(3, 6, 7), 1);
    }
}
