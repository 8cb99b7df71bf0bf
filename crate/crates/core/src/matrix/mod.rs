//! Dense matrices over Q_p.
//!
//! The flat precision of a matrix is the minimum absolute precision over its
//! entries. Factorizations work at that flat precision: every elimination
//! multiplier is computed once by division and then treated as exact to the
//! working precision, so the transforms they build are exact unimodular
//! matrices over `Z/p^N` and reconstruction identities hold to `O(p^N)`.

mod factor;
mod reduce;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use factor::{ColumnPivotedQr, Qr, Svd};
pub use reduce::{householder, Householder};
pub use text::{parse_matrix_file, parse_matrix_file_at, write_matrix_file, MatrixFile};

use crate::error::{Error, Result};
use crate::padic::Padic;
use crate::par::{self, Exec};
use crate::residue::{ResidueElem, ResidueMatrix};

/// Work estimate (multiply-adds) above which matrix products fan out.
const PAR_MATMUL_WORK: usize = 4096;

#[derive(Clone, PartialEq, Eq)]
pub struct PadicMatrix {
    prime: u64,
    rows: usize,
    cols: usize,
    data: Vec<Padic>,
}

impl PadicMatrix {
    /// Matrix of inexact zeros `O(p^precision)`.
    pub fn zeros(prime: u64, rows: usize, cols: usize, precision: i64) -> Self {
        PadicMatrix {
            prime,
            rows,
            cols,
            data: vec![Padic::zero(prime, precision); rows * cols],
        }
    }

    pub fn identity(prime: u64, n: usize, precision: i64) -> Self {
        let mut m = Self::zeros(prime, n, n, precision);
        for i in 0..n {
            m.set(i, i, Padic::one(prime, precision));
        }
        m
    }

    pub fn from_fn(
        prime: u64,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Padic,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PadicMatrix {
            prime,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(prime: u64, rows: Vec<Vec<Padic>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        let data: Vec<Padic> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|x| x.prime() != prime) {
            return Err(Error::PrimeMismatch(prime, bad.prime()));
        }
        Ok(PadicMatrix {
            prime,
            rows: n,
            cols,
            data,
        })
    }

    /// Integer matrix with every entry known to `O(p^precision)`.
    pub fn from_i64(prime: u64, precision: i64, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            prime,
            rows.iter()
                .map(|r| r.iter().map(|v| Padic::from_i64(prime, *v, precision)).collect())
                .collect(),
        )
    }

    /// Column vector.
    pub fn column(prime: u64, entries: Vec<Padic>) -> Self {
        let rows = entries.len();
        PadicMatrix {
            prime,
            rows,
            cols: 1,
            data: entries,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Padic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Padic) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Padic] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Padic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Padic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Padic>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(&Padic) -> Padic) -> Self {
        PadicMatrix {
            prime: self.prime,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.prime, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(self.prime, r1 - r0, c1 - c0, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.prime, self.rows, cols.len(), |i, j| {
            self.get(i, cols[j]).clone()
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(self.prime, rows.len(), self.cols, |i, j| {
            self.get(rows[i], j).clone()
        })
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&PadicMatrix]) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::Dimension("empty horizontal join".into()))?;
        if blocks.iter().any(|b| b.rows != first.rows) {
            return Err(Error::Dimension("row counts differ in horizontal join".into()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Vec::with_capacity(first.rows * cols);
        for i in 0..first.rows {
            for b in blocks {
                out.extend_from_slice(b.row(i));
            }
        }
        Ok(PadicMatrix {
            prime: first.prime,
            rows: first.rows,
            cols,
            data: out,
        })
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &PadicMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Minimum absolute precision over all entries (`i64::MAX` if empty).
    pub fn flat_precision(&self) -> i64 {
        self.data.iter().map(Padic::precision).min().unwrap_or(i64::MAX)
    }

    /// Minimum entry valuation, counting an inexact zero `O(p^N)` as `N`
    /// (`i64::MAX` if empty). A residual is zero at precision `N` exactly
    /// when this is at least `N`.
    pub fn min_valuation(&self) -> i64 {
        self.data.iter().map(Padic::valuation).min().unwrap_or(i64::MAX)
    }

    /// `‖A‖ = max |a_ij|` as the exponent `e` with `‖A‖ = p^e`; `None` if
    /// every entry is an inexact zero.
    pub fn norm_exponent(&self) -> Option<i64> {
        self.data.iter().filter_map(Padic::norm_exponent).max()
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Padic::is_integral)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Padic::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_hessenberg(&self) -> bool {
        (0..self.rows).all(|i| (0..i.saturating_sub(1).min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    /// Same representatives with every entry set to absolute precision `n`.
    pub fn with_precision(&self, n: i64) -> Self {
        self.map(|x| x.with_precision(n))
    }

    /// Caps every entry at absolute precision `n`.
    pub fn truncate(&self, n: i64) -> Self {
        self.map(|x| x.truncate(n))
    }

    /// Multiplication by the exact scalar `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        self.map(|x| x.shift(k))
    }

    pub fn scale(&self, s: &Padic) -> Self {
        self.map(|x| x * s)
    }

    /// Reduction mod p of an integral matrix.
    pub fn residue(&self) -> Result<ResidueMatrix> {
        let mut r = ResidueMatrix::zeros(self.prime, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                r.set(i, j, self.get(i, j).reduce_mod_p()?.value());
            }
        }
        Ok(r)
    }

    /// Adds `c` to every diagonal entry.
    pub fn add_diagonal(&self, c: &Padic) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = out.get(i, i) + c;
            out.set(i, i, v);
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        self.zip(other, Padic::checked_add)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        self.zip(other, Padic::checked_sub)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Padic, &Padic) -> Result<Padic>) -> Result<Self> {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PadicMatrix {
            prime: self.prime,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let work = self.rows * self.cols * other.cols;
        self.mul_with(other, Exec::for_work(work, PAR_MATMUL_WORK))
    }

    /// Matrix product with an explicit execution policy.
    pub fn mul_with(&self, other: &Self, exec: Exec) -> Result<Self> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.prime;
        let rows = par::map_range(self.rows, exec, |i| {
            (0..other.cols)
                .map(|j| {
                    let mut acc: Option<Padic> = None;
                    for k in 0..self.cols {
                        let t = self.get(i, k) * other.get(k, j);
                        acc = Some(match acc {
                            None => t,
                            Some(a) => a + t,
                        });
                    }
                    acc.unwrap_or_else(|| Padic::zero(p, i64::MAX / 4))
                })
                .collect::<Vec<_>>()
        });
        Ok(PadicMatrix {
            prime: p,
            rows: self.rows,
            cols: other.cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> Vec<Padic> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Residue of the diagonal entries of an integral matrix.
    pub fn residue_diagonal(&self) -> Result<Vec<ResidueElem>> {
        self.diagonal().iter().map(Padic::reduce_mod_p).collect()
    }

    // Elementary operations used by the eliminations. All of them act in
    // place; `from` bounds the column (or row) range they touch.

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row_target += f * row_source` on columns `from..`.
    pub(crate) fn row_axpy(&mut self, target: usize, source: usize, f: &Padic, from: usize) {
        for j in from..self.cols {
            let s = self.get(source, j);
            if s.is_zero() && f.valuation() >= 0 && s.precision() >= self.get(target, j).precision() {
                continue;
            }
            let v = self.get(target, j) + &(f * s);
            self.set(target, j, v);
        }
    }

    /// `col_target += f * col_source` on rows `0..upto`.
    pub(crate) fn col_axpy(&mut self, target: usize, source: usize, f: &Padic, upto: usize) {
        for i in 0..upto.min(self.rows) {
            let s = self.get(i, source);
            if s.is_zero() && f.valuation() >= 0 && s.precision() >= self.get(i, target).precision() {
                continue;
            }
            let v = self.get(i, target) + &(f * s);
            self.set(i, target, v);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, f: &Padic) {
        for j in 0..self.cols {
            let v = self.get(i, j) * f;
            self.set(i, j, v);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, f: &Padic) {
        for i in 0..self.rows {
            let v = self.get(i, j) * f;
            self.set(i, j, v);
        }
    }
}

/// `a / b` made exact to absolute precision `n`. Elimination multipliers go
/// through here so that the transforms built from them stay exact.
pub(crate) fn lifted_quotient(a: &Padic, b: &Padic, n: i64) -> Result<Padic> {
    Ok(a.checked_div(b)?.with_precision(n))
}

#[derive(serde::Serialize, serde::Deserialize)]
struct MatrixRepr {
    prime: u64,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Padic>>,
}

impl serde::Serialize for PadicMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            prime: self.prime,
            rows: self.rows,
            cols: self.cols,
            entries: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for PadicMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("matrix shape does not match its entries"));
        }
        let data: Vec<Padic> = repr.entries.into_iter().flatten().collect();
        if data.iter().any(|x| x.prime() != repr.prime) {
            return Err(D::Error::custom("matrix entries carry a different prime"));
        }
        Ok(PadicMatrix {
            prime: repr.prime,
            rows: repr.rows,
            cols: repr.cols,
            data,
        })
    }
}

impl fmt::Debug for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PadicMatrix {}x{} over Q_{} [", self.rows, self.cols, self.prime)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Padic::to_compact_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

macro_rules! matrix_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&PadicMatrix> for &PadicMatrix {
            type Output = PadicMatrix;
            fn $method(self, rhs: &PadicMatrix) -> PadicMatrix {
                match self.$checked(rhs) {
                    Ok(m) => m,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<PadicMatrix> for PadicMatrix {
            type Output = PadicMatrix;
            fn $method(self, rhs: PadicMatrix) -> PadicMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

matrix_binop!(Add, add, checked_add);
matrix_binop!(Sub, sub, checked_sub);
matrix_binop!(Mul, mul, checked_mul);

impl Neg for &PadicMatrix {
    type Output = PadicMatrix;
    fn neg(self) -> PadicMatrix {
        self.map(|x| -x)
    }
}
