//! Capped-precision ("zealous") arithmetic in Q_p.
//!
//! A [`Padic`] stores `a = u * p^v + O(p^N)` with `p ∤ u` and
//! `0 < u < p^(N - v)`. An inexact zero has no unit part and its valuation is
//! defined to be its absolute precision `N`, so `valuation()` is always a
//! valid lower bound for the true valuation.
//!
//! Precision rules:
//! - `+`/`-` keep the minimum absolute precision of the operands,
//! - `*`/`/` keep the minimum relative precision of the operands,
//! - multiplication by the exact scalar `p^k` ([`Padic::shift`]) moves both
//!   valuation and absolute precision by `k`.

mod text;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::residue::{self, ResidueElem};

/// `p^k` as a big natural number. `k` must be non-negative.
pub(crate) fn pow_p(p: u64, k: i64) -> BigUint {
    debug_assert!(k >= 0, "negative exponent {k}");
    num_traits::pow(BigUint::from(p), k as usize)
}

/// Splits `x = p^k * y` with `p ∤ y`. `x` must be non-zero.
fn split_p(mut x: BigUint, p: u64) -> (i64, BigUint) {
    let pb = BigUint::from(p);
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return (k, x);
        }
        x = q;
        k += 1;
    }
}

/// Small-prime check used to validate user input.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Largest prime the residue-field arithmetic accepts (products fit in `u128`
/// with plenty of room, and `u64` storage of residues is exact).
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// Validates a user-supplied prime.
pub fn check_prime(p: u64) -> Result<()> {
    if p <= MAX_PRIME && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// An element of Q_p known modulo `p^N`.
///
/// `PartialEq` compares representations (valuation, unit digits and
/// precision), not values. Use [`Padic::indistinguishable`] to ask whether
/// two values agree at their common precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Padic {
    prime: u64,
    valuation: i64,
    unit: BigUint,
    precision: i64,
}

impl Padic {
    /// The inexact zero `O(p^precision)`.
    pub fn zero(prime: u64, precision: i64) -> Self {
        Padic {
            prime,
            valuation: precision,
            unit: BigUint::zero(),
            precision,
        }
    }

    pub fn one(prime: u64, precision: i64) -> Self {
        Self::from_i64(prime, 1, precision)
    }

    pub fn from_i64(prime: u64, value: i64, precision: i64) -> Self {
        Self::from_bigint(prime, &BigInt::from(value), precision)
    }

    /// `value + O(p^precision)`.
    pub fn from_bigint(prime: u64, value: &BigInt, precision: i64) -> Self {
        Self::from_scaled(prime, value, 0, precision)
    }

    /// `value * p^shift + O(p^precision)`.
    pub fn from_scaled(prime: u64, value: &BigInt, shift: i64, precision: i64) -> Self {
        if value.is_zero() {
            return Self::zero(prime, precision);
        }
        let (k, u) = split_p(value.magnitude().clone(), prime);
        let valuation = k + shift;
        if valuation >= precision {
            return Self::zero(prime, precision);
        }
        let modulus = pow_p(prime, precision - valuation);
        let mut unit = u % &modulus;
        if value.sign() == Sign::Minus {
            unit = &modulus - unit;
        }
        Padic {
            prime,
            valuation,
            unit,
            precision,
        }
    }

    /// Builds `unit * p^valuation + O(p^precision)`, normalizing `unit`.
    pub fn from_parts(prime: u64, valuation: i64, unit: BigUint, precision: i64) -> Self {
        Self::from_scaled(prime, &BigInt::from(unit), valuation, precision)
    }

    /// Interprets a residue `c ∈ {0, …, p-1}` as an element of Z_p.
    pub fn lift_residue(c: ResidueElem, precision: i64) -> Self {
        Self::from_i64(c.prime(), c.value() as i64, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Valuation; equal to the absolute precision for an inexact zero.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Unit digits `u` (zero for an inexact zero).
    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// Absolute precision `N`.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Relative precision `N - v`; zero exactly for inexact zeros.
    pub fn relative_precision(&self) -> i64 {
        self.precision - self.valuation
    }

    /// True when the value is indistinguishable from zero at its precision.
    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.valuation >= 0
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.valuation == 0
    }

    fn check_prime(&self, other: &Padic) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        }
    }

    /// Same representative, new absolute precision. Lowering truncates;
    /// raising pads with zero digits, i.e. declares the representative exact
    /// to `precision`.
    pub fn with_precision(&self, precision: i64) -> Padic {
        if self.is_zero() || self.valuation >= precision {
            return Padic::zero(self.prime, precision);
        }
        let unit = if precision < self.precision {
            &self.unit % pow_p(self.prime, precision - self.valuation)
        } else {
            self.unit.clone()
        };
        Padic {
            prime: self.prime,
            valuation: self.valuation,
            unit,
            precision,
        }
    }

    /// Caps the absolute precision at `precision` (never raises it).
    pub fn truncate(&self, precision: i64) -> Padic {
        if precision < self.precision {
            self.with_precision(precision)
        } else {
            self.clone()
        }
    }

    /// Multiplication by the exact scalar `p^k`.
    pub fn shift(&self, k: i64) -> Padic {
        Padic {
            prime: self.prime,
            valuation: self.valuation + k,
            unit: self.unit.clone(),
            precision: self.precision + k,
        }
    }

    pub fn checked_add(&self, other: &Padic) -> Result<Padic> {
        self.check_prime(other)?;
        let p = self.prime;
        let precision = self.precision.min(other.precision);
        let terms: Vec<&Padic> = [self, other]
            .into_iter()
            .filter(|x| !x.is_zero() && x.valuation < precision)
            .collect();
        let Some(vmin) = terms.iter().map(|x| x.valuation).min() else {
            return Ok(Padic::zero(p, precision));
        };
        let modulus = pow_p(p, precision - vmin);
        let mut sum = BigUint::zero();
        for t in &terms {
            sum += &t.unit * pow_p(p, t.valuation - vmin);
        }
        let sum = sum % &modulus;
        if sum.is_zero() {
            return Ok(Padic::zero(p, precision));
        }
        let (k, unit) = split_p(sum, p);
        Ok(Padic {
            prime: p,
            valuation: vmin + k,
            unit,
            precision,
        })
    }

    pub fn checked_sub(&self, other: &Padic) -> Result<Padic> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = pow_p(self.prime, self.relative_precision());
        Padic {
            prime: self.prime,
            valuation: self.valuation,
            unit: modulus - &self.unit,
            precision: self.precision,
        }
    }

    pub fn checked_mul(&self, other: &Padic) -> Result<Padic> {
        self.check_prime(other)?;
        let valuation = self.valuation + other.valuation;
        let rel = self.relative_precision().min(other.relative_precision());
        if rel <= 0 {
            return Ok(Padic::zero(self.prime, valuation));
        }
        let unit = (&self.unit * &other.unit) % pow_p(self.prime, rel);
        Ok(Padic {
            prime: self.prime,
            valuation,
            unit,
            precision: valuation + rel,
        })
    }

    pub fn checked_div(&self, other: &Padic) -> Result<Padic> {
        self.check_prime(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero {
                precision: other.precision,
            });
        }
        let valuation = self.valuation - other.valuation;
        if self.is_zero() {
            return Ok(Padic::zero(self.prime, valuation));
        }
        let rel = self.relative_precision().min(other.relative_precision());
        let modulus = pow_p(self.prime, rel);
        let inv = (&other.unit % &modulus)
            .modinv(&modulus)
            .expect("unit part is coprime to p");
        let unit = (&self.unit * inv) % modulus;
        Ok(Padic {
            prime: self.prime,
            valuation,
            unit,
            precision: valuation + rel,
        })
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<Padic> {
        Padic::one(self.prime, self.relative_precision().max(1)).checked_div(self)
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i64) -> Result<Padic> {
        if e == 0 {
            return Ok(Padic::one(self.prime, self.precision.max(1)));
        }
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// `|a|_p` as the exponent `e` with `|a|_p = p^e`; `None` for an inexact
    /// zero (whose norm is only bounded by `p^-N`).
    pub fn norm_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(-self.valuation)
        }
    }

    /// The residue `a mod p` of an integral element.
    pub fn reduce_mod_p(&self) -> Result<ResidueElem> {
        if self.valuation < 0 {
            return Err(Error::Domain(format!(
                "cannot reduce an element of valuation {} mod p",
                self.valuation
            )));
        }
        if self.precision < 1 {
            return Err(Error::Domain(
                "element is not known modulo p (absolute precision < 1)".into(),
            ));
        }
        if self.valuation > 0 || self.is_zero() {
            return Ok(ResidueElem::new(self.prime, 0));
        }
        let r = (&self.unit % self.prime).to_u64().expect("residue fits");
        Ok(ResidueElem::new(self.prime, r))
    }

    /// The representative `u * p^v` of a non-negative-valuation element as an
    /// integer in `[0, p^N)`.
    pub fn to_biguint(&self) -> Option<BigUint> {
        if self.valuation < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(BigUint::zero());
        }
        Some(&self.unit * pow_p(self.prime, self.valuation))
    }

    /// The representative as a signed integer in `(-p^N/2, p^N/2]`.
    pub fn to_bigint_balanced(&self) -> Option<BigInt> {
        let r = BigInt::from(self.to_biguint()?);
        if self.precision <= 0 {
            return Some(r);
        }
        let m = BigInt::from(pow_p(self.prime, self.precision));
        if &r * 2 > m {
            Some(r - m)
        } else {
            Some(r)
        }
    }

    /// Base-p digits of the representative, least significant first,
    /// starting at position `valuation()` and running to `precision() - 1`.
    pub fn digits(&self) -> Vec<u64> {
        let len = self.relative_precision().max(0) as usize;
        let mut out = Vec::with_capacity(len);
        let pb = BigUint::from(self.prime);
        let mut u = self.unit.clone();
        for _ in 0..len {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u64().unwrap_or(0));
            u = q;
        }
        out
    }

    /// Whether `self - other` is an inexact zero at the common precision.
    pub fn indistinguishable(&self, other: &Padic) -> bool {
        match self.checked_sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Square root by Hensel lifting (odd `p`).
    ///
    /// The result has the relative precision of `self`; among the two roots
    /// the one whose leading digit lies in `1..=(p-1)/2` is returned.
    pub fn sqrt(&self) -> Result<Padic> {
        let p = self.prime;
        if p == 2 {
            return Err(Error::Domain("square roots require an odd prime".into()));
        }
        if self.is_zero() {
            return Ok(Padic::zero(p, self.precision.div_euclid(2)));
        }
        if self.valuation.rem_euclid(2) != 0 {
            return Err(Error::Domain(format!(
                "odd valuation {} has no square root in Q_p",
                self.valuation
            )));
        }
        let rel = self.relative_precision();
        let unit_res = (&self.unit % p).to_u64().expect("residue fits");
        let r0 = residue::sqrt_mod_p(unit_res, p).ok_or_else(|| {
            Error::Domain(format!("{unit_res} is not a square modulo {p}"))
        })?;
        let r0 = if r0 <= (p - 1) / 2 { r0 } else { p - r0 };

        // Newton on s^2 = u over Z/p^rel; the derivative 2s is a unit.
        let modulus = pow_p(p, rel);
        let u = &self.unit % &modulus;
        let two = BigUint::from(2u32);
        let mut s = BigUint::from(r0);
        let mut known = 1;
        while known < rel {
            known = (2 * known).min(rel);
            let m = pow_p(p, known);
            let s2 = (&s * &s) % &m;
            let inv = ((&two * &s) % &m).modinv(&m).expect("2s is a unit");
            // s <- s - (s^2 - u) / (2s)
            let diff = (&m + &s2 - (&u % &m)) % &m;
            s = (&m + &s - (diff * inv) % &m) % &m;
        }
        let s = s % &modulus;
        let valuation = self.valuation / 2;
        Ok(Padic {
            prime: p,
            valuation,
            unit: s,
            precision: valuation + rel,
        })
    }

    /// Compact rendering `u*p^v + O(p^N)`.
    pub fn to_compact_string(&self) -> String {
        text::compact(self)
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::digit_expansion(self))
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::compact(self))
    }
}

impl std::str::FromStr for Padic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        text::parse(s)
    }
}

impl serde::Serialize for Padic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Padic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// Operator sugar. Mixing primes is a programming error here; use the
// `checked_*` methods where that can legitimately happen.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Padic> for &Padic {
            type Output = Padic;
            fn $method(self, rhs: &Padic) -> Padic {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<Padic> for Padic {
            type Output = Padic;
            fn $method(self, rhs: Padic) -> Padic {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Padic> for Padic {
            type Output = Padic;
            fn $method(self, rhs: &Padic) -> Padic {
                (&self).$method(rhs)
            }
        }
        impl $trait<Padic> for &Padic {
            type Output = Padic;
            fn $method(self, rhs: Padic) -> Padic {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_ref()
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_ref()
    }
}

/// Helper used by parsers: `value * p^shift` where `value` may be negative.
pub(crate) fn signed_scaled(prime: u64, value: &BigInt, shift: i64, precision: i64) -> Padic {
    if value.is_negative() {
        -Padic::from_scaled(prime, &value.abs(), shift, precision)
    } else {
        Padic::from_scaled(prime, value, shift, precision)
    }
}
