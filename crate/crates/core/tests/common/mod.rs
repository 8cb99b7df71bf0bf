//! Exact integer oracles shared by the integration tests. Nothing here
//! calls into the library's own linear algebra.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// p-adic valuation of a non-zero integer.
pub fn val(x: &BigInt, p: u64) -> i64 {
    assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut k = 0;
    while x.is_multiple_of(&pb) {
        x /= &pb;
        k += 1;
    }
    k
}

/// Characteristic polynomial `det(xI - A)`, coefficients low to high,
/// by Faddeev–LeVerrier (all divisions are exact over Z).
pub fn charpoly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.len();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am = mul(a, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let (q, r) = (-tr).div_rem(&BigInt::from(k));
        assert!(r.is_zero(), "Faddeev–LeVerrier division is exact");
        c[n - k] = q;
    }
    c
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..inner).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

/// Valuations of the roots of `f` (low to high coefficients, `f(0) ≠ 0`)
/// read off the lower convex hull of `(i, v_p(c_i))`, ascending.
pub fn newton_slopes(f: &[BigInt], p: u64) -> Vec<Ratio<i64>> {
    let pts: Vec<(i64, i64)> = f
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, val(c, p)))
        .collect();
    assert_eq!(pts[0].0, 0, "zero constant term");
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &q in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or above the segment a–q
            if (b.1 - a.1) * (q.0 - a.0) >= (q.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = b.0 - a.0;
        let root_val = Ratio::new(a.1 - b.1, len);
        out.extend(std::iter::repeat_n(root_val, len as usize));
    }
    out.sort();
    out
}

/// Bareiss determinant.
pub fn det(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(i, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Valuations of the non-zero Smith invariants over Z_(p), from the
/// determinantal divisors `d_k = gcd of k×k minors`.
pub fn smith_valuations(a: &IntMatrix, p: u64) -> Vec<i64> {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 0;
    for k in 1..=n.min(m) {
        let mut best: Option<i64> = None;
        for rows in combinations(n, k) {
            for cols in combinations(m, k) {
                let minor: IntMatrix = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect();
                let d = det(&minor);
                if !d.is_zero() {
                    let v = val(&d, p);
                    best = Some(best.map_or(v, |b: i64| b.min(v)));
                }
            }
        }
        let Some(dk) = best else { break };
        out.push(dk - prev);
        prev = dk;
    }
    out
}

pub fn eval_mod(f: &[BigInt], x: &BigInt, modulus: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = (acc * x + c).mod_floor(modulus);
    }
    acc
}

/// Roots of `f` in `Z/p^n` that are simple modulo `p`, by Newton lifting.
pub fn hensel_roots(f: &[BigInt], p: u64, n: u32) -> Vec<BigInt> {
    let pb = BigInt::from(p);
    let modulus = num_traits::pow(pb.clone(), n as usize);
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut out = Vec::new();
    for r in 0..p {
        let mut x = BigInt::from(r);
        if !eval_mod(f, &x, &pb).is_zero() || eval_mod(&df, &x, &pb).is_zero() {
            continue;
        }
        for _ in 0..=n.ilog2() + 1 {
            let fx = eval_mod(f, &x, &modulus);
            let dfx = eval_mod(&df, &x, &modulus);
            let inv = dfx.modinv(&modulus).expect("unit derivative");
            x = (x - fx * inv).mod_floor(&modulus);
        }
        assert!(eval_mod(f, &x, &modulus).is_zero());
        out.push(x);
    }
    out
}

/// Rank of a matrix over F_p by plain Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = BigInt::from(m[rank][c]).modinv(&BigInt::from(p)).unwrap();
        let inv: u64 = inv.try_into().unwrap();
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = (m[i][c] as u128 * inv as u128 % p as u128) as u64;
                for j in 0..cols {
                    let s = (f as u128 * m[rank][j] as u128 % p as u128) as u64;
                    m[i][j] = (m[i][j] + p - s) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn is_negative(x: &BigInt) -> bool {
    x.is_negative()
}

#[test]
fn oracle_self_checks() {
    // (x - 1)(x - 2) for diag(1, 2)
    assert_eq!(charpoly(&int(&[vec![1, 0], vec![0, 2]])), int(&[vec![2, -3, 1]])[0]);
    assert_eq!(det(&int(&[vec![2, 1], vec![7, 3]])), BigInt::from(-1));
    // x^2 - 7 over Q_7: two roots of valuation 1/2
    assert_eq!(newton_slopes(&int(&[vec![-7, 0, 1]])[0], 7), vec![Ratio::new(1, 2); 2]);
    assert_eq!(smith_valuations(&int(&[vec![7, 0], vec![0, 49]]), 7), vec![1, 2]);
    assert_eq!(smith_valuations(&int(&[vec![2, 4], vec![6, 8]]), 2), vec![1, 2]);
    assert_eq!(hensel_roots(&int(&[vec![-2, 0, 1]])[0], 7, 1).len(), 2);
    assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 7), 1);
}
