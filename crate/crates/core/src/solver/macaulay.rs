use std::collections::HashMap;

use super::poly::{monomials_up_to, Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::matrix::PadicMatrix;
use crate::padic::Padic;
use crate::par::{self, Exec};

/// `Σ (d_i - 1) + 1`.
pub fn macaulay_degree(degrees: &[usize]) -> usize {
    degrees.iter().map(|d| d.saturating_sub(1)).sum::<usize>() + 1
}

/// The resultant map `(q_1, …, q_r) ↦ Σ q_i f_i` restricted to degree `D`.
#[derive(Clone, Debug)]
pub struct MacaulaySystem {
    pub degree: usize,
    /// Column labels: the monomials of degree at most `D`, ascending.
    pub monomials: Vec<Monomial>,
    /// Row `k` holds the coefficients of `shifts[k].1 · f_{shifts[k].0}`.
    pub matrix: PadicMatrix,
    pub shifts: Vec<(usize, Monomial)>,
}

impl MacaulaySystem {
    pub fn column_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.binary_search(m).ok()
    }
}

pub fn macaulay_matrix(polys: &[MultiPoly], degree: usize) -> Result<MacaulaySystem> {
    let first = polys
        .first()
        .ok_or_else(|| Error::Domain("empty polynomial system".into()))?;
    let (p, n) = (first.prime(), first.nvars());
    for (i, f) in polys.iter().enumerate() {
        if f.prime() != p {
            return Err(Error::PrimeMismatch(p, f.prime()));
        }
        if f.nvars() != n {
            return Err(Error::Dimension(format!("polynomial {i} has {} variables, expected {n}", f.nvars())));
        }
        if f.is_zero() {
            return Err(Error::Domain(format!("polynomial {i} is zero")));
        }
        if f.degree() > degree {
            return Err(Error::Domain(format!(
                "Macaulay degree {degree} is below the degree {} of polynomial {i}",
                f.degree()
            )));
        }
    }
    let prec = polys.iter().map(MultiPoly::precision).min().unwrap_or(i64::MAX);
    let monomials = monomials_up_to(n, degree);
    let index: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let shifts: Vec<(usize, Monomial)> = polys
        .iter()
        .enumerate()
        .flat_map(|(i, f)| monomials_up_to(n, degree - f.degree()).into_iter().map(move |q| (i, q)))
        .collect();
    let cols = monomials.len();
    let rows = par::map(&shifts, Exec::for_work(shifts.len() * cols, 1 << 14), |(i, q)| {
        let mut row = vec![Padic::zero(p, prec); cols];
        for (m, c) in polys[*i].terms() {
            row[index[&q.mul(m)]] = c.clone();
        }
        row
    });
    let matrix = PadicMatrix::from_rows(p, rows)?;
    let matrix = if shifts.is_empty() {
        PadicMatrix::zeros(p, 0, cols, prec)
    } else {
        matrix
    };
    Ok(MacaulaySystem {
        degree,
        monomials,
        matrix,
        shifts,
    })
}

/// The quotient map `V_D → V_D / (I ∩ V_D)` as a `δ × dim V_D` matrix
/// whose rows annihilate every row of the Macaulay matrix.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub pi: PadicMatrix,
    /// Rank of the Macaulay matrix at working precision.
    pub rank: usize,
    /// Valuations of singular values strictly between 0 and `N`: directions
    /// whose membership in the kernel depends on the precision.
    pub unstable_valuations: Vec<i64>,
}

impl Cokernel {
    pub fn delta(&self) -> usize {
        self.pi.rows()
    }
}

pub fn cokernel(m: &MacaulaySystem) -> Result<Cokernel> {
    let svd = m.matrix.svd()?;
    let prec = m.matrix.flat_precision();
    let unstable_valuations: Vec<i64> = svd.sigma[..svd.rank]
        .iter()
        .map(Padic::valuation)
        .filter(|&v| v > 0 && v < prec)
        .collect();
    let pi = svd.kernel().transpose();
    if pi.rows() == 0 {
        return Err(Error::NoSolutions(format!(
            "the Macaulay matrix in degree {} has full column rank, so the system has no solutions \
             (or is not zero-dimensional) at precision {prec}",
            m.degree
        )));
    }
    Ok(Cokernel {
        pi,
        rank: svd.rank,
        unstable_valuations,
    })
}

/// Monomial basis of the quotient picked by column-pivoted QR.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSelection {
    /// Column indices into the Macaulay monomial list.
    pub columns: Vec<usize>,
    pub monomials: Vec<Monomial>,
    /// Valuations of the `δ` pivots; all zero means the selected block of
    /// `π` is unimodular.
    pub pivot_valuations: Vec<i64>,
}

/// Chooses `δ` monomials of degree `< D` whose columns of `π` form the
/// best-conditioned square block found by full pivoting.
pub fn select_basis(ck: &Cokernel, m: &MacaulaySystem) -> Result<BasisSelection> {
    let delta = ck.delta();
    let candidates: Vec<usize> = (0..m.monomials.len())
        .filter(|&k| m.monomials[k].degree() < m.degree)
        .collect();
    let block = ck.pi.select_columns(&candidates);
    let qr = block.qr_column_pivoted()?;
    if qr.rank < delta {
        return Err(Error::Invariant(format!(
            "only {} of {delta} quotient directions are reached by monomials of degree below {}",
            qr.rank, m.degree
        )));
    }
    let columns: Vec<usize> = qr.column_permutation[..delta].iter().map(|&k| candidates[k]).collect();
    let pivot_valuations = qr.pivot_valuations()[..delta].to_vec();
    Ok(BasisSelection {
        monomials: columns.iter().map(|&k| m.monomials[k].clone()).collect(),
        columns,
        pivot_valuations,
    })
}

/// `[x_i]_b` for every variable: column `j` holds the `b`-coordinates of
/// `π(x_i · b_j)`.
pub fn multiplication_matrices(ck: &Cokernel, m: &MacaulaySystem, basis: &BasisSelection) -> Result<Vec<PadicMatrix>> {
    let nvars = m.monomials.first().map_or(0, Monomial::nvars);
    let pb = ck.pi.select_columns(&basis.columns);
    let delta = basis.columns.len();
    let out = par::map_range(nvars, Exec::for_work(nvars * delta * delta * delta, 512), |i| {
        let xi = Monomial::var(i, nvars);
        let targets = basis
            .monomials
            .iter()
            .map(|b| {
                m.column_of(&b.mul(&xi))
                    .ok_or_else(|| Error::Invariant("x_i·b left the Macaulay degree".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        pb.solve(&ck.pi.select_columns(&targets))
    });
    out.into_iter().collect()
}
