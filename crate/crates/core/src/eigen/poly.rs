//! Univariate polynomials over Q_p: the division-free characteristic
//! polynomial, Newton polygons and root finding.

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::PadicMatrix;
use crate::padic::Padic;
use crate::residue::{linear_roots_with_multiplicity, ResiduePoly};

/// Polynomial with p-adic coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicPoly {
    prime: u64,
    coeffs: Vec<Padic>,
}

impl PadicPoly {
    pub fn new(prime: u64, coeffs: Vec<Padic>) -> Self {
        PadicPoly { prime, coeffs }
    }

    /// `prod (x - r)` with every factor known to `O(p^precision)`.
    pub fn from_roots(prime: u64, roots: &[Padic], precision: i64) -> Self {
        let mut acc = PadicPoly::new(prime, vec![Padic::one(prime, precision)]);
        for r in roots {
            let lin = PadicPoly::new(prime, vec![-r, Padic::one(prime, precision)]);
            acc = acc.mul(&lin);
        }
        acc
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    /// Index of the last coefficient that is not an inexact zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Padic) -> Padic {
        let mut it = self.coeffs.iter().rev();
        let Some(first) = it.next() else {
            return Padic::zero(self.prime, x.precision());
        };
        it.fold(first.clone(), |acc, c| &(&acc * x) + c)
    }

    pub fn derivative(&self) -> Self {
        let p = self.prime;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Padic::from_i64(p, i as i64, c.precision().max(1) + 64))
            .collect();
        PadicPoly::new(p, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return PadicPoly::new(self.prime, Vec::new());
        }
        let mut out: Vec<Option<Padic>> = vec![None; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = a * b;
                out[i + j] = Some(match out[i + j].take() {
                    None => t,
                    Some(s) => s + t,
                });
            }
        }
        PadicPoly::new(self.prime, out.into_iter().map(Option::unwrap).collect())
    }

    /// `g(z) = f(r + z)`.
    pub fn taylor_shift(&self, r: &Padic) -> Self {
        // Horner in the polynomial ring: g = (...(c_n (z + r) + c_{n-1})(z + r) ...).
        let mut acc: Vec<Padic> = Vec::new();
        for c in self.coeffs.iter().rev() {
            let mut next = vec![c.clone()];
            next.extend(acc.iter().cloned());
            for (k, a) in acc.iter().enumerate() {
                next[k] = &next[k] + &(a * r);
            }
            acc = next;
        }
        PadicPoly::new(self.prime, acc)
    }

    /// `f(p^t w)` as a polynomial in `w`.
    pub fn scale_variable(&self, t: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.shift(t * i as i64))
            .collect();
        PadicPoly::new(self.prime, coeffs)
    }

    /// Minimum coefficient valuation, an inexact zero counting as its
    /// precision.
    pub fn content_valuation(&self) -> Option<i64> {
        self.coeffs.iter().map(Padic::valuation).min()
    }

    /// Divides out `p^(content valuation)`.
    pub fn primitive_part(&self) -> Self {
        let c = self.content_valuation().unwrap_or(0);
        PadicPoly::new(self.prime, self.coeffs.iter().map(|x| x.shift(-c)).collect())
    }

    pub fn flat_precision(&self) -> i64 {
        self.coeffs.iter().map(Padic::precision).min().unwrap_or(i64::MAX)
    }

    /// Reduction mod p of an integral polynomial; coefficients not known
    /// mod p are read as zero.
    pub fn residue(&self) -> ResiduePoly {
        let p = self.prime;
        let c = self
            .coeffs
            .iter()
            .map(|x| x.reduce_mod_p().map(|r| r.value()).unwrap_or(0))
            .collect();
        ResiduePoly::new(p, c)
    }
}

/// Characteristic polynomial `det(xI - A)` by Berkowitz's algorithm, which
/// uses only ring operations.
pub fn berkowitz_charpoly(a: &PadicMatrix) -> Result<PadicPoly> {
    if !a.is_square() {
        return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let p = a.prime();
    let n = a.rows();
    let prec = a.flat_precision().min(i64::MAX / 4);
    let one = Padic::one(p, prec);
    // Coefficients, highest degree first.
    let mut poly = vec![one.clone()];
    for r in 1..=n {
        let k = r - 1;
        let a_rr = a.get(k, k);
        // toeplitz column: [1, -a_rr, -R C, -R M C, ...]
        let mut t = Vec::with_capacity(r + 1);
        t.push(one.clone());
        t.push(-a_rr);
        let mut mc: Vec<Padic> = (0..k).map(|i| a.get(i, k).clone()).collect();
        for _ in 0..k {
            let rc = (0..k)
                .map(|j| a.get(k, j) * &mc[j])
                .reduce(|x, y| x + y)
                .expect("k > 0");
            t.push(-rc);
            mc = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| a.get(i, j) * &mc[j])
                        .reduce(|x, y| x + y)
                        .expect("k > 0")
                })
                .collect();
        }
        let mut next = Vec::with_capacity(r + 1);
        for i in 0..=r {
            let mut acc = Padic::zero(p, prec);
            for (j, c) in poly.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    acc = acc + &t[i - j] * c;
                }
            }
            next.push(acc);
        }
        poly = next;
    }
    poly.reverse();
    Ok(PadicPoly::new(p, poly))
}

/// A segment of a lower convex hull between abscissae `start < end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSegment {
    pub start: usize,
    pub end: usize,
    pub slope: Ratio<i64>,
}

impl NewtonSegment {
    pub fn length(&self) -> usize {
        self.end - self.start
    }
}

/// Lower convex hull of the points `(i, v_i)`; `None` entries are skipped.
pub fn newton_polygon(points: &[Option<i64>]) -> Vec<NewtonSegment> {
    let pts: Vec<(i64, i64)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i as i64, v)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above the segment a -> pt
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| NewtonSegment {
            start: w[0].0 as usize,
            end: w[1].0 as usize,
            slope: Ratio::new(w[1].1 - w[0].1, w[1].0 - w[0].0),
        })
        .collect()
}

/// A root in Q_p with its multiplicity and certified absolute precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRoot {
    pub value: Padic,
    pub multiplicity: usize,
    pub precision: i64,
}

/// Recursion cap for the multiple-root refinement.
const MAX_DEPTH: usize = 256;

/// Roots of `f` in Q_p.
///
/// Root valuations come from the Newton polygon of `f`. Within a valuation
/// class, simple residue roots are Hensel lifted; a multiple residue root
/// `r` is refined through the Newton polygon of `f(r + z)`. Roots that only
/// live in a ramified or unramified extension are skipped. Clusters that
/// cannot be separated at the available precision are returned once, with
/// the cluster size as multiplicity.
pub fn qp_poly_roots(f: &PadicPoly) -> Vec<PolyRoot> {
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let trimmed = PadicPoly::new(f.prime(), f.coeffs()[..=deg].to_vec());
    let mut out = Vec::new();
    cluster_roots(&trimmed, deg, &Padic::zero(f.prime(), trimmed.flat_precision()), 0, &mut out);
    out.sort_by(|a, b| {
        (a.value.valuation(), a.value.digits()).cmp(&(b.value.valuation(), b.value.digits()))
    });
    out
}

/// Roots `base + z` of `h(z)` with `z` in the valuation classes described
/// by the Newton polygon on the coefficients `0..=m` of `h`.
fn cluster_roots(h: &PadicPoly, m: usize, base: &Padic, depth: usize, out: &mut Vec<PolyRoot>) {
    let points: Vec<Option<i64>> = h.coeffs()[..=m].iter().map(|c| Some(c.valuation())).collect();
    for seg in newton_polygon(&points) {
        let t = -seg.slope;
        let left = &h.coeffs()[seg.start];
        if seg.start == 0 && left.is_zero() {
            // The constant term is not known: the cluster is only bounded.
            let prec = ceil_ratio(t).min(h.flat_precision());
            out.push(PolyRoot {
                value: base.truncate(prec),
                multiplicity: seg.length(),
                precision: prec,
            });
            continue;
        }
        if !t.is_integer() {
            continue;
        }
        let t = t.to_integer();
        let k = h.scale_variable(t).primitive_part();
        let mut sub = Vec::new();
        unit_roots(&k, depth, &mut sub);
        for r in sub {
            let z = r.value.shift(t);
            let precision = r.precision + t;
            let value = (base.with_precision(precision) + z).truncate(precision);
            out.push(PolyRoot {
                value,
                multiplicity: r.multiplicity,
                precision,
            });
        }
    }
}

/// Unit roots of a primitive polynomial `k` (content valuation zero).
fn unit_roots(k: &PadicPoly, depth: usize, out: &mut Vec<PolyRoot>) {
    let flat = k.flat_precision();
    if flat <= 0 {
        return;
    }
    let residue = k.residue();
    for (r, m) in linear_roots_with_multiplicity(&residue) {
        if r.value() == 0 {
            continue;
        }
        let r0 = Padic::lift_residue(r, flat);
        if m == 1 {
            out.push(hensel_lift(k, r0));
            continue;
        }
        if depth >= MAX_DEPTH {
            out.push(PolyRoot {
                value: r0.truncate(1),
                multiplicity: m,
                precision: 1,
            });
            continue;
        }
        cluster_roots(&k.taylor_shift(&r0), m, &r0, depth + 1, out);
    }
}

/// Newton iteration on a simple residue root.
fn hensel_lift(k: &PadicPoly, r0: Padic) -> PolyRoot {
    let flat = k.flat_precision();
    let dk = k.derivative();
    let mut x = r0;
    let mut known = 1;
    while known < flat {
        let fx = k.eval(&x);
        let dfx = dk.eval(&x);
        let Ok(step) = fx.checked_div(&dfx) else {
            break;
        };
        x = (&x - &step).with_precision(flat);
        known = (2 * known).min(flat);
    }
    PolyRoot {
        value: x.truncate(flat),
        multiplicity: 1,
        precision: flat,
    }
}

fn ceil_ratio(r: Ratio<i64>) -> i64 {
    r.ceil().to_integer()
}

/// Exact integer characteristic polynomial, used where coefficients must
/// be known exactly (tests and the bench harness).
pub fn integer_charpoly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut poly = vec![BigInt::from(1)];
    for r in 1..=n {
        let k = r - 1;
        let mut t = vec![BigInt::from(1), -a[k][k].clone()];
        let mut mc: Vec<BigInt> = (0..k).map(|i| a[i][k].clone()).collect();
        for _ in 0..k {
            let rc: BigInt = (0..k).map(|j| &a[k][j] * &mc[j]).sum();
            t.push(-rc);
            mc = (0..k)
                .map(|i| (0..k).map(|j| &a[i][j] * &mc[j]).sum())
                .collect();
        }
        let mut next = vec![BigInt::from(0); r + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, c) in poly.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot += &t[i - j] * c;
                }
            }
        }
        poly = next;
    }
    poly.reverse();
    poly
}
