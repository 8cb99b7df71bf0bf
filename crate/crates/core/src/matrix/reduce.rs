//! Householder reflections and Hessenberg reduction.

use super::{lifted_quotient, PadicMatrix};
use crate::error::{Error, Result};
use crate::padic::Padic;

/// A reflection `H = I - 2 v vᵀ / (vᵀ v)` with `H x = α e_1`.
#[derive(Clone, Debug)]
pub struct Householder {
    pub h: PadicMatrix,
    pub alpha: Padic,
}

/// Householder reflection sending `x` to `α e_1` with `α² = xᵀx`.
///
/// `x` must have exactly one coordinate of minimal valuation and that
/// coordinate must not be the first one; `p` must be odd. All arithmetic
/// treats the representative of `x` as exact and the result is valid
/// modulo `p^N`, `N` the minimum precision of `x`.
pub fn householder(x: &[Padic]) -> Result<Householder> {
    let Some(first) = x.first() else {
        return Err(Error::Dimension("householder of an empty vector".into()));
    };
    let p = first.prime();
    if p == 2 {
        return Err(Error::Domain("householder reflections need an odd prime".into()));
    }
    let n = x.len();
    let prec = x.iter().map(Padic::precision).min().expect("non-empty");
    let nonzero: Vec<(usize, i64)> = x
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| (i, e.valuation()))
        .collect();
    let Some(r) = nonzero.iter().map(|(_, v)| *v).min() else {
        return Err(Error::Domain("householder of a zero vector".into()));
    };
    let minimal: Vec<usize> = nonzero
        .iter()
        .filter(|(_, v)| *v == r)
        .map(|(i, _)| *i)
        .collect();
    if minimal.len() != 1 || minimal[0] == 0 {
        return Err(Error::Domain(
            "householder needs a unique minimal-valuation coordinate other than the first".into(),
        ));
    }

    let exact: Vec<Padic> = x.iter().map(|e| e.with_precision(prec + r)).collect();
    let norm2 = exact
        .iter()
        .map(|e| e * e)
        .reduce(|a, b| a + b)
        .expect("non-empty");
    let alpha = norm2.sqrt()?;
    let v: Vec<Padic> = exact
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let d = if i == 0 { e - &alpha } else { e.clone() };
            d.shift(-r).truncate(prec)
        })
        .collect();
    let vtv = v.iter().map(|e| e * e).reduce(|a, b| a + b).expect("non-empty");
    let c = (Padic::from_i64(p, 2, prec) / vtv).with_precision(prec);
    let h = PadicMatrix::from_fn(p, n, n, |i, j| {
        let delta = if i == j {
            Padic::one(p, prec)
        } else {
            Padic::zero(p, prec)
        };
        (delta - &c * &(&v[i] * &v[j])).truncate(prec)
    });
    Ok(Householder {
        h,
        alpha: alpha.truncate(prec),
    })
}

impl PadicMatrix {
    /// Upper Hessenberg form by norm-pivoted row operations.
    ///
    /// Returns `(B, V)` with `A V = V B` modulo `p^N`, `V ∈ GL_n(Z_p)`.
    pub fn hessenberg(&self) -> Result<(PadicMatrix, PadicMatrix)> {
        let (mut b, mut v, prec) = self.hessenberg_setup()?;
        let p = self.prime();
        let n = self.rows();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = first_min_below(&b, j) else {
                continue;
            };
            b.swap_rows(piv, j + 1);
            b.swap_cols(piv, j + 1);
            v.swap_cols(piv, j + 1);
            let pivot = b.get(j + 1, j).clone();
            for k in j + 2..n {
                if b.get(k, j).is_zero() {
                    continue;
                }
                let l = lifted_quotient(b.get(k, j), &pivot, prec)?;
                b.row_axpy(k, j + 1, &-&l, j + 1);
                b.set(k, j, Padic::zero(p, prec));
                b.col_axpy(j + 1, k, &l, n);
                v.col_axpy(j + 1, k, &l, n);
            }
        }
        Ok((b.truncate(prec), v.truncate(prec)))
    }

    /// Upper Hessenberg form by Householder reflections.
    ///
    /// Each subcolumn is first brought into admissible shape by a swap and
    /// row operations, then reflected onto its first coordinate.
    pub fn hessenberg_householder(&self) -> Result<(PadicMatrix, PadicMatrix)> {
        if self.prime() == 2 {
            return Err(Error::Domain("householder reflections need an odd prime".into()));
        }
        let (mut b, mut v, prec) = self.hessenberg_setup()?;
        let p = self.prime();
        let n = self.rows();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = first_min_below(&b, j) else {
                continue;
            };
            b.swap_rows(piv, j + 2);
            b.swap_cols(piv, j + 2);
            v.swap_cols(piv, j + 2);
            let pivot = b.get(j + 2, j).clone();
            let r = pivot.valuation();
            for k in (j + 1..n).filter(|&k| k != j + 2) {
                let e = b.get(k, j);
                if e.is_zero() || e.valuation() > r {
                    continue;
                }
                let l = lifted_quotient(e, &pivot, prec)?;
                b.row_axpy(k, j + 2, &-&l, j);
                b.col_axpy(j + 2, k, &l, n);
                v.col_axpy(j + 2, k, &l, n);
            }
            let x: Vec<Padic> = (j + 1..n).map(|k| b.get(k, j).clone()).collect();
            let refl = householder(&x)?;
            let m = n - j - 1;
            let mut full = PadicMatrix::identity(p, n, prec);
            full.set_block(j + 1, j + 1, &refl.h);
            b = &(&full * &b) * &full;
            v = &v * &full;
            b.set(j + 1, j, refl.alpha.clone());
            for k in j + 2..j + 1 + m {
                b.set(k, j, Padic::zero(p, prec));
            }
            b = b.truncate(prec);
            v = v.truncate(prec);
        }
        Ok((b.truncate(prec), v.truncate(prec)))
    }

    fn hessenberg_setup(&self) -> Result<(PadicMatrix, PadicMatrix, i64)> {
        if !self.is_square() {
            return Err(Error::Dimension("Hessenberg form of a non-square matrix".into()));
        }
        if !self.is_integral() {
            return Err(Error::Domain("Hessenberg reduction expects integral entries".into()));
        }
        let prec = self.flat_precision().min(i64::MAX / 4);
        Ok((
            self.truncate(prec),
            PadicMatrix::identity(self.prime(), self.rows(), prec),
            prec,
        ))
    }
}

/// First row `i > j` holding a minimal-valuation entry of column `j`.
fn first_min_below(b: &PadicMatrix, j: usize) -> Option<usize> {
    let mut best: Option<(i64, usize)> = None;
    for i in j + 1..b.rows() {
        let x = b.get(i, j);
        if !x.is_zero() && best.is_none_or(|(v, _)| x.valuation() < v) {
            best = Some((x.valuation(), i));
        }
    }
    best.map(|(_, i)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec7(vals: &[i64], n: i64) -> Vec<Padic> {
        vals.iter().map(|v| Padic::from_i64(7, *v, n)).collect()
    }

    #[test]
    fn two_by_two_reflection() {
        let x = vec7(&[0, 3], 8);
        let h = householder(&x).unwrap();
        assert_eq!(h.alpha, Padic::from_i64(7, 3, 8));
        let expect = PadicMatrix::from_i64(7, 8, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!((&h.h - &expect).min_valuation() >= 8);
    }

    #[test]
    fn reflection_identities() {
        let x = vec7(&[7, 2, 14, 49], 10);
        let h = householder(&x).unwrap();
        let id = PadicMatrix::identity(7, 4, 10);
        assert!((&(&h.h * &h.h) - &id).min_valuation() >= 10);
        let hx = &h.h * &PadicMatrix::column(7, x);
        let mut ae1 = PadicMatrix::zeros(7, 4, 1, 10);
        ae1.set(0, 0, h.alpha.clone());
        assert!((&hx - &ae1).min_valuation() >= 10);
        assert_eq!(h.alpha.valuation(), 0);
    }

    #[test]
    fn rejects_inadmissible() {
        assert!(householder(&vec7(&[1, 7], 5)).is_err());
        assert!(householder(&vec7(&[7, 1, 1], 5)).is_err());
    }

    #[test]
    fn hessenberg_leaves_hessenberg_input() {
        let a = PadicMatrix::from_i64(7, 6, &[vec![1, 2, 3], vec![4, 5, 6], vec![0, 7, 8]]).unwrap();
        let (b, v) = a.hessenberg().unwrap();
        assert_eq!(b, a);
        assert_eq!(v, PadicMatrix::identity(7, 3, 6));
    }

    #[test]
    fn both_variants_reduce() {
        let a = PadicMatrix::from_i64(
            7,
            12,
            &[
                vec![3, 1, 4, 1, 5],
                vec![9, 2, 6, 5, 3],
                vec![5, 8, 9, 7, 9],
                vec![3, 2, 3, 8, 4],
                vec![6, 2, 6, 4, 3],
            ],
        )
        .unwrap();
        for (b, v) in [a.hessenberg().unwrap(), a.hessenberg_householder().unwrap()] {
            assert!(b.is_hessenberg());
            assert!((&(&a * &v) - &(&v * &b)).min_valuation() >= 12);
            assert_eq!(v.det().unwrap().valuation(), 0);
        }
    }
}
