//! Norm-pivoted elimination: QR (Hermite normalized), column-pivoted QR,
//! SVD / Smith form, nullspace, solves, inverse and determinant.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::{lifted_quotient, PadicMatrix};
use crate::error::{Error, Result};
use crate::padic::{pow_p, Padic};

/// `A = Q R` with `Q ∈ GL_n(Z_p)` and `R` in Hermite normal form.
#[derive(Clone, Debug)]
pub struct Qr {
    pub q: PadicMatrix,
    pub r: PadicMatrix,
    /// Row `k` of `P A` is row `row_permutation[k]` of `A`.
    pub row_permutation: Vec<usize>,
    /// `(row, column)` of each pivot of `R`, in order.
    pub pivots: Vec<(usize, usize)>,
}

/// `A P = Q R` where column `k` of `A P` is column `column_permutation[k]`
/// of `A`. Equivalently `A = Q R P'` with `P' = Pᵀ`.
#[derive(Clone, Debug)]
pub struct ColumnPivotedQr {
    pub q: PadicMatrix,
    pub r: PadicMatrix,
    pub row_permutation: Vec<usize>,
    pub column_permutation: Vec<usize>,
    /// Number of pivots that are not inexact zeros.
    pub rank: usize,
}

impl ColumnPivotedQr {
    /// The matrix `P'` with `A = Q R P'`.
    pub fn permutation_matrix(&self) -> PadicMatrix {
        let m = self.column_permutation.len();
        let n = self.r.flat_precision().min(self.q.flat_precision());
        let p = self.q.prime();
        let mut pm = PadicMatrix::zeros(p, m, m, n);
        for (k, &c) in self.column_permutation.iter().enumerate() {
            pm.set(k, c, Padic::one(p, n));
        }
        pm
    }

    /// Pivot valuations along the diagonal of `R` (the precision for zero
    /// pivots).
    pub fn pivot_valuations(&self) -> Vec<i64> {
        self.r.diagonal().iter().map(Padic::valuation).collect()
    }
}

/// `A = U Σ Vᵀ` with `U, V ∈ GL(Z_p)` and `Σ` diagonal with entries `p^k`
/// sorted by ascending valuation. Zero singular values come last.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: PadicMatrix,
    pub sigma: Vec<Padic>,
    pub v: PadicMatrix,
    /// `(Vᵀ)⁻¹`, whose trailing columns span the kernel of `A`.
    pub v_inv_t: PadicMatrix,
    pub rank: usize,
}

impl Svd {
    /// `Σ` as an `n × m` matrix.
    pub fn sigma_matrix(&self) -> PadicMatrix {
        let (n, m) = (self.u.rows(), self.v.rows());
        let prec = self
            .sigma
            .iter()
            .map(Padic::precision)
            .min()
            .unwrap_or_else(|| self.u.flat_precision());
        let mut s = PadicMatrix::zeros(self.u.prime(), n, m, prec);
        for (i, x) in self.sigma.iter().enumerate() {
            s.set(i, i, x.clone());
        }
        s
    }

    /// Valuations of the non-zero singular values (the Smith invariants).
    pub fn invariant_valuations(&self) -> Vec<i64> {
        self.sigma[..self.rank].iter().map(Padic::valuation).collect()
    }

    pub fn reconstruct(&self) -> PadicMatrix {
        &(&self.u * &self.sigma_matrix()) * &self.v.transpose()
    }

    /// Kernel basis: the columns `k ≥ rank` of `(Vᵀ)⁻¹`, i.e. the directions
    /// `Vᵀ` maps onto the vanishing singular values.
    pub fn kernel(&self) -> PadicMatrix {
        let cols: Vec<usize> = (self.rank..self.v_inv_t.cols()).collect();
        self.v_inv_t.select_columns(&cols)
    }
}

struct Elimination {
    q: PadicMatrix,
    r: PadicMatrix,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    pivots: Vec<(usize, usize)>,
}

fn first_min_in_column(r: &PadicMatrix, from: usize, c: usize) -> Option<usize> {
    let mut best: Option<(i64, usize)> = None;
    for i in from..r.rows() {
        let x = r.get(i, c);
        if !x.is_zero() && best.is_none_or(|(v, _)| x.valuation() < v) {
            best = Some((x.valuation(), i));
        }
    }
    best.map(|(_, i)| i)
}

fn first_min_in_block(r: &PadicMatrix, k: usize, c: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i64, usize, usize)> = None;
    for i in k..r.rows() {
        for j in c..r.cols() {
            let x = r.get(i, j);
            if !x.is_zero() && best.is_none_or(|(v, _, _)| x.valuation() < v) {
                best = Some((x.valuation(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Norm-pivoted elimination to Hermite normal form, tracking `Q` so that
/// `A P = Q R` holds exactly in `Z/p^N` after every step.
fn hermite_elimination(a: &PadicMatrix, full_pivot: bool) -> Result<Elimination> {
    if !a.is_integral() {
        return Err(Error::Domain(
            "QR requires integral entries; rescale by p^(-min valuation) first".into(),
        ));
    }
    let (n, m) = (a.rows(), a.cols());
    let p = a.prime();
    let prec = a.flat_precision().min(i64::MAX / 4);
    let mut r = a.truncate(prec);
    let mut q = PadicMatrix::identity(p, n, prec);
    let mut row_perm: Vec<usize> = (0..n).collect();
    let mut col_perm: Vec<usize> = (0..m).collect();
    let mut pivots = Vec::new();
    let (mut k, mut c) = (0, 0);
    while k < n && c < m {
        let i = if full_pivot {
            let Some((i, j)) = first_min_in_block(&r, k, c) else {
                break;
            };
            r.swap_cols(c, j);
            col_perm.swap(c, j);
            i
        } else {
            let Some(i) = first_min_in_column(&r, k, c) else {
                c += 1;
                continue;
            };
            i
        };
        r.swap_rows(k, i);
        q.swap_cols(k, i);
        row_perm.swap(k, i);

        let pivot = r.get(k, c).clone();
        for i in k + 1..n {
            if r.get(i, c).is_zero() {
                continue;
            }
            let l = lifted_quotient(r.get(i, c), &pivot, prec)?;
            r.row_axpy(i, k, &-&l, c + 1);
            r.set(i, c, Padic::zero(p, prec));
            q.col_axpy(k, i, &l, n);
        }

        // Make the pivot an exact power of p.
        let v = pivot.valuation();
        let unit = Padic::from_parts(p, 0, pivot.unit().clone(), prec);
        let unit_inv = unit.inverse()?.with_precision(prec);
        r.scale_row(k, &unit_inv);
        r.set(k, c, Padic::from_scaled(p, &BigInt::from(1), v, prec));
        q.scale_col(k, &unit);

        // Reduce the entries above the pivot into [0, p^v).
        let modulus = pow_p(p, v);
        for i in 0..k {
            let e = r.get(i, c).to_biguint().unwrap_or_default();
            let (quot, rem): (BigUint, BigUint) = e.div_rem(&modulus);
            if quot.is_zero() {
                continue;
            }
            let f = Padic::from_bigint(p, &BigInt::from(quot), prec);
            r.row_axpy(i, k, &-&f, c + 1);
            r.set(i, c, Padic::from_bigint(p, &BigInt::from(rem), prec));
            q.col_axpy(k, i, &f, n);
        }

        pivots.push((k, c));
        k += 1;
        c += 1;
    }
    Ok(Elimination {
        q: q.truncate(prec),
        r: r.truncate(prec),
        row_perm,
        col_perm,
        pivots,
    })
}

impl PadicMatrix {
    /// QR factorization by norm-pivoted PLU, with `R` in Hermite form.
    pub fn qr(&self) -> Result<Qr> {
        let e = hermite_elimination(self, false)?;
        Ok(Qr {
            q: e.q,
            r: e.r,
            row_permutation: e.row_perm,
            pivots: e.pivots,
        })
    }

    /// QR with full pivoting: each pivot is the first entry of minimal
    /// valuation in the remaining submatrix (row-major scan).
    pub fn qr_column_pivoted(&self) -> Result<ColumnPivotedQr> {
        let e = hermite_elimination(self, true)?;
        Ok(ColumnPivotedQr {
            q: e.q,
            r: e.r,
            row_permutation: e.row_perm,
            column_permutation: e.col_perm,
            rank: e.pivots.len(),
        })
    }

    /// Singular value decomposition over Z_p. Non-integral input is scaled
    /// by `p^(-min valuation)` internally and the scale returned on `Σ`.
    pub fn svd(&self) -> Result<Svd> {
        let p = self.prime();
        let (n, m) = (self.rows(), self.cols());
        let scale = self
            .entries()
            .iter()
            .filter(|x| !x.is_zero())
            .map(Padic::valuation)
            .min()
            .unwrap_or(0)
            .min(0);
        let a = self.shift(-scale);
        let e = hermite_elimination(&a, true)?;
        let prec = e.r.flat_precision().min(e.q.flat_precision());
        let rank = e.pivots.len();
        let mut r = e.r;
        let mut h = PadicMatrix::identity(p, m, prec);
        let mut g = PadicMatrix::identity(p, m, prec);
        for i in 0..rank {
            let pivot = r.get(i, i).clone();
            for j in i + 1..m {
                if r.get(i, j).is_zero() {
                    continue;
                }
                let f = lifted_quotient(r.get(i, j), &pivot, prec)?;
                r.set(i, j, Padic::zero(p, prec));
                h.row_axpy(i, j, &f, 0);
                g.col_axpy(j, i, &-&f, m);
            }
        }
        let mut v = PadicMatrix::zeros(p, m, m, prec);
        let mut v_inv_t = PadicMatrix::zeros(p, m, m, prec);
        for (k, &c) in e.col_perm.iter().enumerate() {
            for t in 0..m {
                v.set(c, t, h.get(t, k).clone());
                v_inv_t.set(c, t, g.get(k, t).clone());
            }
        }
        let sigma = (0..n.min(m))
            .map(|i| {
                if i < rank {
                    r.get(i, i).shift(scale)
                } else {
                    Padic::zero(p, prec).shift(scale)
                }
            })
            .collect();
        Ok(Svd {
            u: e.q,
            sigma,
            v: v.truncate(prec),
            v_inv_t: v_inv_t.truncate(prec),
            rank,
        })
    }

    /// Basis (as columns) of the kernel modulo `p^N`, `N` the flat
    /// precision: the singular directions whose singular value vanishes.
    pub fn nullspace(&self) -> Result<PadicMatrix> {
        Ok(self.svd()?.kernel())
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.svd()?.rank)
    }

    /// `κ(A) = ‖A‖·‖A⁻¹‖` as the exponent `e` with `κ = p^e`; `None` when `A`
    /// is singular at working precision.
    pub fn condition_number(&self) -> Result<Option<i64>> {
        if !self.is_square() {
            return Err(Error::Dimension("condition number of a non-square matrix".into()));
        }
        let svd = self.svd()?;
        if svd.rank < self.rows() {
            return Ok(None);
        }
        let vals: Vec<i64> = svd.sigma.iter().map(Padic::valuation).collect();
        match (vals.iter().min(), vals.iter().max()) {
            (Some(lo), Some(hi)) => Ok(Some(hi - lo)),
            _ => Ok(Some(0)),
        }
    }

    /// Solves `self · X = b` for a full-column-rank `self`.
    ///
    /// Rows left over after elimination must vanish at the working
    /// precision, otherwise the system is reported inconsistent. Dividing by
    /// a non-unit pivot costs its valuation in absolute precision.
    pub fn solve(&self, b: &PadicMatrix) -> Result<PadicMatrix> {
        if self.rows() != b.rows() {
            return Err(Error::Dimension(format!(
                "solve with {} equations but right-hand side has {} rows",
                self.rows(),
                b.rows()
            )));
        }
        if self.prime() != b.prime() {
            return Err(Error::PrimeMismatch(self.prime(), b.prime()));
        }
        let (n, k) = (self.rows(), self.cols());
        if k > n {
            return Err(Error::Dimension(format!(
                "underdetermined system ({n} equations, {k} unknowns)"
            )));
        }
        let p = self.prime();
        let prec = self.flat_precision().min(b.flat_precision()).min(i64::MAX / 4);
        let mut v = self.truncate(prec);
        let mut rhs = b.truncate(prec);
        for c in 0..k {
            let Some(i) = first_min_in_column(&v, c, c) else {
                return Err(Error::Singular {
                    index: c,
                    valuation: prec,
                });
            };
            v.swap_rows(c, i);
            rhs.swap_rows(c, i);
            let pivot = v.get(c, c).clone();
            for i in c + 1..n {
                if v.get(i, c).is_zero() {
                    continue;
                }
                let l = -lifted_quotient(v.get(i, c), &pivot, prec)?;
                v.row_axpy(i, c, &l, c + 1);
                v.set(i, c, Padic::zero(p, prec));
                rhs.row_axpy(i, c, &l, 0);
            }
        }
        let leftover = rhs.submatrix(k, n, 0, rhs.cols()).min_valuation();
        if leftover < prec {
            return Err(Error::Inconsistent {
                valuation: leftover,
            });
        }
        let mut x = PadicMatrix::zeros(p, k, rhs.cols(), prec);
        for c in (0..k).rev() {
            for t in 0..rhs.cols() {
                let mut acc = rhs.get(c, t).clone();
                for j in c + 1..k {
                    acc = acc - v.get(c, j) * x.get(j, t);
                }
                x.set(c, t, acc.checked_div(v.get(c, c))?.truncate(prec));
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<PadicMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let prec = self.flat_precision().min(i64::MAX / 4);
        self.solve(&PadicMatrix::identity(self.prime(), self.rows(), prec))
    }

    /// Determinant by norm-pivoted elimination; an inexact zero when a
    /// pivot vanishes at working precision.
    pub fn det(&self) -> Result<Padic> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let p = self.prime();
        let n = self.rows();
        let prec = self.flat_precision().min(i64::MAX / 4);
        if n == 0 {
            return Ok(Padic::one(p, prec));
        }
        let mut a = self.truncate(prec);
        let mut det = Padic::one(p, prec);
        for c in 0..n {
            let Some(i) = first_min_in_column(&a, c, c) else {
                return Ok(Padic::zero(p, prec));
            };
            if i != c {
                a.swap_rows(c, i);
                det = -det;
            }
            let pivot = a.get(c, c).clone();
            for i in c + 1..n {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let l = -lifted_quotient(a.get(i, c), &pivot, prec)?;
                a.row_axpy(i, c, &l, c + 1);
                a.set(i, c, Padic::zero(p, prec));
            }
            det = det * pivot;
        }
        Ok(det)
    }
}
