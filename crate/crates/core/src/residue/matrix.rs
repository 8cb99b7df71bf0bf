use super::{add_mod, inv_mod, mul_mod, sub_mod, ResiduePoly};
use crate::error::{Error, Result};

/// A dense matrix over F_p in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueMatrix {
    prime: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ResidueMatrix {
    pub fn zeros(prime: u64, rows: usize, cols: usize) -> Self {
        ResidueMatrix {
            prime,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(prime: u64, n: usize) -> Self {
        let mut m = Self::zeros(prime, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(prime: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(ResidueMatrix {
            prime,
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|v| v % prime).collect(),
        })
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

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.prime;
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let p = self.prime;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| add_mod(acc, mul_mod(self.get(i, j), v[j], p), p))
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.prime;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = add_mod(out.data[idx], mul_mod(a, other.get(k, j), p), p);
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Characteristic polynomial `det(xI - A)`, monic of degree n.
    ///
    /// Reduces to Hessenberg form by similarity and then runs the usual
    /// three-term style recurrence on the leading principal submatrices.
    pub fn charpoly(&self) -> Result<ResiduePoly> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "characteristic polynomial of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let p = self.prime;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
                continue;
            };
            h.swap_rows(piv, j + 1);
            h.swap_cols(piv, j + 1);
            let inv = inv_mod(h.get(j + 1, j), p);
            for k in j + 2..n {
                let u = mul_mod(h.get(k, j), inv, p);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = sub_mod(h.get(k, c), mul_mod(u, h.get(j + 1, c), p), p);
                    h.set(k, c, v);
                }
                for r in 0..n {
                    let v = add_mod(h.get(r, j + 1), mul_mod(u, h.get(r, k), p), p);
                    h.set(r, j + 1, v);
                }
            }
        }
        let mut polys = vec![ResiduePoly::one(p)];
        for m in 1..=n {
            let mut pm = ResiduePoly::linear(p, h.get(m - 1, m - 1)).mul(&polys[m - 1]);
            let mut t = 1u64;
            for i in 1..m {
                t = mul_mod(t, h.get(m - i, m - i - 1), p);
                let c = mul_mod(t, h.get(m - i - 1, m - 1), p);
                if c != 0 {
                    pm = pm.sub(&polys[m - i - 1].scale(c));
                }
            }
            polys.push(pm);
        }
        Ok(polys.pop().expect("at least the constant polynomial"))
    }

    /// Reduced row echelon form and the pivot column list.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let p = self.prime;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
                continue;
            };
            a.swap_rows(piv, r);
            let inv = inv_mod(a.get(r, c), p);
            for j in 0..a.cols {
                let v = mul_mod(a.get(r, j), inv, p);
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                let f = a.get(i, c);
                if i != r && f != 0 {
                    for j in 0..a.cols {
                        let v = sub_mod(a.get(i, j), mul_mod(f, a.get(r, j), p), p);
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column of the RREF.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.prime;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = sub_mod(0, r.get(row, f), p);
                }
                v
            })
            .collect()
    }
}
