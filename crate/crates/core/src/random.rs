//! Seeded generators for test, benchmark and demo instances.
//!
//! Everything takes a caller-supplied RNG so runs are reproducible. Exact
//! integer constructions are returned alongside the p-adic data so callers
//! can check results against the known answer.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::PadicMatrix;
use crate::padic::{pow_p, Padic};
use crate::solver::{Monomial, MultiPoly};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// A uniformly random element of `Z_p / p^N`, known to `O(p^N)`.
pub fn integral<R: Rng + ?Sized>(rng: &mut R, p: u64, prec: i64) -> Padic {
    let mut acc = BigUint::zero();
    let mut scale = BigUint::one();
    for _ in 0..prec {
        acc += &scale * rng.gen_range(0..p);
        scale *= p;
    }
    Padic::from_bigint(p, &BigInt::from(acc), prec)
}

/// A random unit of `Z_p` known to `O(p^N)`.
pub fn unit<R: Rng + ?Sized>(rng: &mut R, p: u64, prec: i64) -> Padic {
    let low = rng.gen_range(1..p);
    let high = integral(rng, p, (prec - 1).max(0));
    let v = BigInt::from(low) + BigInt::from(high.to_biguint().unwrap_or_default()) * BigInt::from(p);
    Padic::from_bigint(p, &v, prec)
}

/// An `n × m` matrix with uniformly random entries in `Z_p / p^N`.
pub fn integral_matrix<R: Rng + ?Sized>(rng: &mut R, p: u64, n: usize, m: usize, prec: i64) -> PadicMatrix {
    PadicMatrix::from_fn(p, n, m, |_, _| integral(rng, p, prec))
}

/// An integer matrix with entries drawn from `-bound..=bound`.
pub fn integer_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, bound: i64) -> IntMatrix {
    (0..n)
        .map(|_| (0..m).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
        .collect()
}

pub fn to_padic_matrix(p: u64, prec: i64, a: &IntMatrix) -> PadicMatrix {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    PadicMatrix::from_fn(p, rows, cols, |i, j| Padic::from_bigint(p, &a[i][j], prec))
}

pub fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn int_identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// An integer matrix `U` with `det U = ±1` and its exact inverse, built from
/// `steps` random elementary operations with multipliers in `-bound..=bound`.
pub fn unimodular<R: Rng + ?Sized>(rng: &mut R, n: usize, steps: usize, bound: i64) -> (IntMatrix, IntMatrix) {
    let mut u = int_identity(n);
    let mut inv = int_identity(n);
    if n < 2 {
        return (u, inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        if rng.gen_bool(0.2) {
            u.swap(i, j);
            for row in &mut inv {
                row.swap(i, j);
            }
            continue;
        }
        let f = BigInt::from(rng.gen_range(-bound..=bound));
        // row_i(U) += f row_j(U); col_j(U⁻¹) -= f col_i(U⁻¹)
        let src = u[j].clone();
        for (t, s) in u[i].iter_mut().zip(&src) {
            *t += &f * s;
        }
        for row in &mut inv {
            let s = row[i].clone();
            row[j] -= &f * s;
        }
    }
    (u, inv)
}

/// An integer matrix with a square-free, fully split residue
/// characteristic polynomial: `U T U⁻¹` with `T` upper triangular whose
/// diagonal holds `n` integers with distinct residues mod `p` (`n ≤ p`).
/// Returns the matrix and its eigenvalues.
pub fn split_matrix<R: Rng + ?Sized>(rng: &mut R, p: u64, n: usize) -> Result<(IntMatrix, Vec<BigInt>)> {
    if n as u64 > p {
        return Err(Error::Domain(format!("need n ≤ p for distinct residues (n = {n}, p = {p})")));
    }
    let mut residues: Vec<u64> = (0..p).collect();
    residues.shuffle(rng);
    let lift = (p as i64).min(50);
    let eig: Vec<BigInt> = residues[..n]
        .iter()
        .map(|&r| BigInt::from(r) + BigInt::from(p) * BigInt::from(rng.gen_range(-lift..=lift)))
        .collect();
    let mut t = int_identity(n);
    for (i, row) in t.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = if i == j {
                eig[i].clone()
            } else if j > i {
                BigInt::from(rng.gen_range(-3i64..=3))
            } else {
                BigInt::zero()
            };
        }
    }
    let (u, inv) = unimodular(rng, n, 3 * n, 2);
    Ok((int_mul(&int_mul(&u, &t), &inv), eig))
}

/// A vector admissible for a Householder reflection: its minimal valuation
/// is attained at exactly one coordinate, and not at the first.
pub fn householder_vector<R: Rng + ?Sized>(rng: &mut R, p: u64, n: usize, prec: i64) -> Vec<Padic> {
    assert!(n >= 2, "need at least two coordinates");
    let k = rng.gen_range(1..n);
    let r = rng.gen_range(0..3i64);
    (0..n)
        .map(|i| {
            if i == k {
                unit(rng, p, prec).shift(r)
            } else {
                let extra = rng.gen_range(1..4i64);
                integral(rng, p, prec).shift(r + extra).truncate(prec + r)
            }
        })
        .collect()
}

/// A zero-dimensional system with known, well-separated solutions.
#[derive(Clone, Debug)]
pub struct ConstructedSystem {
    pub polynomials: Vec<MultiPoly>,
    /// The solutions, each coordinate known to `O(p^N)`.
    pub points: Vec<Vec<Padic>>,
}

/// Builds `f_i = Π_k ℓ_{i,k}` from random affine linear forms with integer
/// coefficients, `degrees[i]` factors for equation `i`. The solutions are
/// the `Π d_i` intersection points of one form from each equation.
///
/// Forms are resampled until every intersection has a unit determinant,
/// the points are distinct mod `p`, and no form vanishes mod `p` at a point
/// it does not pass through. Together these give a unit Jacobian at every
/// solution and no solutions at infinity.
pub fn line_arrangement<R: Rng + ?Sized>(rng: &mut R, p: u64, degrees: &[usize], prec: i64) -> Result<ConstructedSystem> {
    let n = degrees.len();
    if n == 0 || degrees.contains(&0) {
        return Err(Error::Domain("need at least one equation of positive degree".into()));
    }
    let bound = (p as i64 - 1).clamp(1, 9);
    for _ in 0..10_000 {
        let forms: Vec<Vec<Vec<i64>>> = degrees
            .iter()
            .map(|&d| {
                (0..d)
                    .map(|_| (0..=n).map(|_| rng.gen_range(-bound..=bound)).collect())
                    .collect()
            })
            .collect();
        if let Some(points) = arrangement_points(&forms, p) {
            let polynomials = forms
                .iter()
                .map(|fs| product_of_forms(p, n, fs, prec))
                .collect::<Result<Vec<_>>>()?;
            let points = points
                .iter()
                .map(|pt| pt.iter().map(|c| crate::solver::rational_to_padic(c, p, prec)).collect())
                .collect();
            return Ok(ConstructedSystem { polynomials, points });
        }
    }
    Err(Error::Invariant("could not sample a generic line arrangement".into()))
}

/// Form `[a_1, …, a_n, c]` means `a·x + c`.
fn eval_form(form: &[i64], x: &[BigRational]) -> BigRational {
    let n = x.len();
    let mut acc = BigRational::from_integer(form[n].into());
    for (a, xi) in form[..n].iter().zip(x) {
        acc += BigRational::from_integer((*a).into()) * xi;
    }
    acc
}

fn unit_mod_p(r: &BigRational, p: u64) -> bool {
    let pb = BigInt::from(p);
    !(r.numer() % &pb).is_zero() && !(r.denom() % &pb).is_zero()
}

fn arrangement_points(forms: &[Vec<Vec<i64>>], p: u64) -> Option<Vec<Vec<BigRational>>> {
    let n = forms.len();
    let mut choice = vec![0usize; n];
    let mut points = Vec::new();
    loop {
        let rows: Vec<&Vec<i64>> = (0..n).map(|i| &forms[i][choice[i]]).collect();
        let pt = solve_rational(&rows, p)?;
        for (i, fs) in forms.iter().enumerate() {
            for (k, f) in fs.iter().enumerate() {
                if k != choice[i] && !unit_mod_p(&eval_form(f, &pt), p) {
                    return None;
                }
            }
        }
        points.push(pt);
        let mut i = 0;
        loop {
            if i == n {
                return distinct_mod_p(&points, p).then_some(points);
            }
            choice[i] += 1;
            if choice[i] < forms[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn distinct_mod_p(points: &[Vec<BigRational>], p: u64) -> bool {
    let pb = BigInt::from(p);
    let reduce = |r: &BigRational| -> BigInt {
        let d = r.denom().modinv(&pb).expect("unit denominator");
        (r.numer() * d).mod_floor(&pb)
    };
    let mut seen: Vec<Vec<BigInt>> = points.iter().map(|pt| pt.iter().map(reduce).collect()).collect();
    seen.sort();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// Solves `a·x + c = 0` for the chosen forms by Cramer's rule, requiring
/// a determinant that is a unit mod `p`.
fn solve_rational(rows: &[&Vec<i64>], p: u64) -> Option<Vec<BigRational>> {
    let n = rows.len();
    let a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r[..n].iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect();
    let b: Vec<BigRational> = rows.iter().map(|r| BigRational::from_integer((-r[n]).into())).collect();
    let det = rational_det(a.clone());
    if det.is_zero() || !unit_mod_p(&det, p) {
        return None;
    }
    Some(
        (0..n)
            .map(|j| {
                let mut aj = a.clone();
                for i in 0..n {
                    aj[i][j] = b[i].clone();
                }
                rational_det(aj) / &det
            })
            .collect(),
    )
}

fn rational_det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det *= &pv;
        for i in c + 1..n {
            let f = &a[i][c] / &pv;
            for j in c..n {
                let s = &f * &a[c][j];
                a[i][j] -= s;
            }
        }
    }
    det
}

fn product_of_forms(p: u64, n: usize, forms: &[Vec<i64>], prec: i64) -> Result<MultiPoly> {
    let mut acc: Vec<(Monomial, BigInt)> = vec![(Monomial::one(n), BigInt::one())];
    for f in forms {
        let mut next: Vec<(Monomial, BigInt)> = Vec::new();
        for (m, c) in &acc {
            for (k, &a) in f.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mono = if k < n { m.mul(&Monomial::var(k, n)) } else { m.clone() };
                next.push((mono, c * a));
            }
        }
        acc = next;
    }
    MultiPoly::from_terms(p, n, acc.into_iter().map(|(m, c)| (m, Padic::from_bigint(p, &c, prec))))
}

/// `p^k` as a big integer, for callers building exact test data.
pub fn prime_power(p: u64, k: u32) -> BigInt {
    BigInt::from(pow_p(p, k as i64))
}

/// Smallest absolute value representative, for compact printing.
pub fn balanced(x: &BigInt, modulus: &BigInt) -> BigInt {
    let r = x.mod_floor(modulus);
    if (&r * 2u32) > *modulus {
        r - modulus
    } else {
        r
    }
}
