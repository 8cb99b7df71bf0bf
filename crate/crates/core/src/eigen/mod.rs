//! Eigenvectors and Schur forms of p-adic matrices.
//!
//! Everything here solves the backward-stable ("Version I") problem: for
//! the matrix as given, find `(λ, v)` with `‖v‖ = 1` and
//! `A v = λ v + O(p^N)`. Residual valuations are always measured, never
//! assumed.

mod classical;
mod lr;
mod poly;
mod power;

use serde::{Deserialize, Serialize};

pub use classical::classical_eigen;
pub use lr::{block_schur_form, eigenvalue_valuations, lr_step, qr_iteration, qr_iteration_with, LrOptions, LrSchedule};
pub use poly::{
    berkowitz_charpoly, integer_charpoly, newton_polygon, qp_poly_roots, NewtonSegment, PadicPoly,
    PolyRoot,
};
pub use power::power_iteration_decomposition;

use crate::error::{Error, Result};
use crate::matrix::PadicMatrix;
use crate::padic::Padic;
use crate::par::{self, Exec};
use crate::residue::{linear_roots_with_multiplicity, ResidueElem};

/// An approximate eigenpair with its measured residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: Padic,
    /// Normalized so that `‖v‖ = 1`.
    pub vector: Vec<Padic>,
    /// `min val(A v - λ v)`.
    pub residual_valuation: i64,
    /// Algebraic multiplicity attached to this eigenvalue by the solver
    /// path that produced it.
    pub multiplicity: usize,
}

/// `A V = V X + O(p^N)` for an invariant subspace that could not be split
/// further into Q_p-rational eigenvectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantBlock {
    pub x: PadicMatrix,
    pub v: PadicMatrix,
    pub residue_eigenvalue: Option<ResidueElem>,
}

impl InvariantBlock {
    pub fn dimension(&self) -> usize {
        self.x.rows()
    }
}

#[derive(Clone, Debug, Default)]
pub struct EigenDecomposition {
    pub pairs: Vec<EigenPair>,
    pub unresolved: Vec<InvariantBlock>,
    /// Number of eigenvalues (with multiplicity) not covered by `pairs`.
    pub unresolved_dimension: usize,
}

impl EigenDecomposition {
    pub fn min_residual(&self) -> Option<i64> {
        self.pairs.iter().map(|p| p.residual_valuation).min()
    }
}

/// One diagonal block of a block Schur form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurBlock {
    pub start: usize,
    pub size: usize,
    /// The residue eigenvalue when the block's residue characteristic
    /// polynomial is a power of a linear factor.
    pub residue_eigenvalue: Option<ResidueElem>,
}

/// `A V = V T + O(p^R)` with `T` block upper triangular; `R` is the
/// measured residual valuation.
#[derive(Clone, Debug)]
pub struct SchurDecomposition {
    pub t: PadicMatrix,
    pub v: PadicMatrix,
    pub blocks: Vec<SchurBlock>,
    pub residual_valuation: i64,
}

pub(crate) fn check_square(a: &PadicMatrix, what: &str) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("{what} needs a square matrix, got {}x{}", a.rows(), a.cols())))
    }
}

/// Minimum valuation over the non-zero entries, `None` if all vanish.
pub(crate) fn entry_valuation(a: &PadicMatrix) -> Option<i64> {
    a.entries().iter().filter(|x| !x.is_zero()).map(Padic::valuation).min()
}

/// Scales a vector by a power of p so that its norm is 1.
pub(crate) fn normalize(v: &[Padic]) -> Vec<Padic> {
    let k = v.iter().filter(|x| !x.is_zero()).map(Padic::valuation).min().unwrap_or(0);
    v.iter().map(|x| x.shift(-k)).collect()
}

/// `min val(A v - λ v)`.
pub fn residual_valuation(a: &PadicMatrix, value: &Padic, vector: &[Padic]) -> i64 {
    let v = PadicMatrix::column(a.prime(), vector.to_vec());
    let r = &(a * &v) - &v.scale(value);
    r.min_valuation()
}

pub(crate) fn make_pair(a: &PadicMatrix, value: Padic, vector: Vec<Padic>, multiplicity: usize) -> EigenPair {
    let vector = normalize(&vector);
    let residual_valuation = residual_valuation(a, &value, &vector);
    EigenPair {
        value,
        vector,
        residual_valuation,
        multiplicity,
    }
}

/// Eigenpairs of `A` at absolute precision `N`.
///
/// Diagonal input is answered directly. A matrix divisible by `p^ν` is
/// handled on `p^-ν A` and scaled back. Otherwise the residue
/// characteristic polynomial decides: no linear factor leaves `A` as one
/// unresolved block, a single repeated linear factor goes to
/// [`classical_eigen`], and anything else is split by
/// [`power_iteration_decomposition`] with the blocks solved recursively.
pub fn eigvecs(a: &PadicMatrix, n: i64) -> Result<EigenDecomposition> {
    check_square(a, "eigvecs")?;
    let p = a.prime();
    let dim = a.rows();
    let a = a.truncate(n);
    if dim == 0 {
        return Ok(EigenDecomposition::default());
    }
    if a.is_diagonal() {
        let pairs = (0..dim)
            .map(|i| {
                let mut e = vec![Padic::zero(p, n); dim];
                e[i] = Padic::one(p, n);
                make_pair(&a, a.get(i, i).clone(), e, 1)
            })
            .collect();
        return Ok(EigenDecomposition {
            pairs,
            ..Default::default()
        });
    }
    let nu = entry_valuation(&a).unwrap_or(0);
    if nu != 0 {
        let inner = eigvecs(&a.shift(-nu), n - nu)?;
        return Ok(rescale_decomposition(&a, inner, nu, n));
    }

    let chi = a.residue()?.charpoly()?;
    let roots = linear_roots_with_multiplicity(&chi);
    if roots.is_empty() {
        return Ok(EigenDecomposition {
            pairs: Vec::new(),
            unresolved: vec![InvariantBlock {
                x: a.clone(),
                v: PadicMatrix::identity(p, dim, n),
                residue_eigenvalue: None,
            }],
            unresolved_dimension: dim,
        });
    }
    if roots.len() == 1 && roots[0].1 == dim {
        return classical_eigen(&a, n);
    }

    let blocks = power_iteration_decomposition(&a, &roots, n)?;
    let accounted: usize = blocks.iter().map(InvariantBlock::dimension).sum();
    let parts = par::map(&blocks, Exec::for_work(dim * dim * dim, 64), |b| -> Result<EigenDecomposition> {
        if b.dimension() == 1 {
            let pair = make_pair(&a, b.x.get(0, 0).clone(), b.v.col(0), 1);
            return Ok(EigenDecomposition {
                pairs: vec![pair],
                ..Default::default()
            });
        }
        let inner = eigvecs(&b.x, n)?;
        Ok(lift_through_basis(&a, inner, &b.v))
    });
    let mut out = EigenDecomposition {
        unresolved_dimension: dim - accounted,
        ..Default::default()
    };
    for part in parts {
        let part = part?;
        out.pairs.extend(part.pairs);
        out.unresolved.extend(part.unresolved);
        out.unresolved_dimension += part.unresolved_dimension;
    }
    Ok(out)
}

/// Maps a decomposition of `X` (with `A V = V X`) back to one of `A`.
fn lift_through_basis(a: &PadicMatrix, inner: EigenDecomposition, basis: &PadicMatrix) -> EigenDecomposition {
    let p = a.prime();
    let pairs = inner
        .pairs
        .into_iter()
        .map(|pair| {
            let w = PadicMatrix::column(p, pair.vector);
            let v = (basis * &w).col(0);
            make_pair(a, pair.value, v, pair.multiplicity)
        })
        .collect();
    let unresolved = inner
        .unresolved
        .into_iter()
        .map(|b| InvariantBlock {
            v: basis * &b.v,
            ..b
        })
        .collect();
    EigenDecomposition {
        pairs,
        unresolved,
        unresolved_dimension: inner.unresolved_dimension,
    }
}

/// Undoes the `p^-ν` scaling: eigenvalues scale back by `p^ν`, vectors
/// are re-capped at the input precision `N`.
fn rescale_decomposition(a: &PadicMatrix, inner: EigenDecomposition, nu: i64, n: i64) -> EigenDecomposition {
    let pairs = inner
        .pairs
        .into_iter()
        .map(|pair| {
            let v: Vec<Padic> = pair.vector.iter().map(|x| x.with_precision(n)).collect();
            make_pair(a, pair.value.shift(nu), v, pair.multiplicity)
        })
        .collect();
    let unresolved = inner
        .unresolved
        .into_iter()
        .map(|b| InvariantBlock {
            x: b.x.shift(nu),
            v: b.v.with_precision(n),
            residue_eigenvalue: if nu > 0 {
                Some(ResidueElem::new(a.prime(), 0))
            } else {
                None
            },
        })
        .collect();
    EigenDecomposition {
        pairs,
        unresolved,
        unresolved_dimension: inner.unresolved_dimension,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, n: i64, rows: &[Vec<i64>]) -> PadicMatrix {
        PadicMatrix::from_i64(p, n, rows).unwrap()
    }

    #[test]
    fn diagonal_fast_path() {
        let a = m(7, 6, &[vec![3, 0], vec![0, 5]]);
        let d = eigvecs(&a, 6).unwrap();
        assert_eq!(d.pairs.len(), 2);
        assert_eq!(d.pairs[0].value, Padic::from_i64(7, 3, 6));
        assert!(d.pairs.iter().all(|p| p.residual_valuation >= 6));
    }

    #[test]
    fn nilpotent_residue_example() {
        let a = m(7, 6, &[vec![343, 1], vec![0, -343]]);
        let d = eigvecs(&a, 6).unwrap();
        assert_eq!(d.pairs.len(), 2);
        let pos = d
            .pairs
            .iter()
            .find(|p| p.value.indistinguishable(&Padic::from_i64(7, 343, 6)))
            .expect("p^3 is found");
        assert!(pos.residual_valuation >= 6);
        assert!(pos.vector[1].is_zero());
        assert!(pos.vector[0].is_unit());
    }

    #[test]
    fn distinct_residue_eigenvalues() {
        let a = m(7, 10, &[vec![1, 7], vec![14, 2]]);
        let d = eigvecs(&a, 10).unwrap();
        assert_eq!(d.pairs.len(), 2);
        assert!(d.pairs.iter().all(|p| p.residual_valuation >= 10));
    }

    #[test]
    fn irreducible_residue_charpoly_is_unresolved() {
        let a = m(7, 6, &[vec![0, -1], vec![1, 0]]);
        let d = eigvecs(&a, 6).unwrap();
        assert!(d.pairs.is_empty());
        assert_eq!(d.unresolved_dimension, 2);
    }

    #[test]
    fn rescaling_branch() {
        let a = m(7, 10, &[vec![1, 7], vec![14, 2]]);
        let pa = a.shift(1);
        let d = eigvecs(&pa, 10).unwrap();
        assert_eq!(d.pairs.len(), 2);
        for pair in &d.pairs {
            assert_eq!(pair.value.valuation(), 1);
            assert!(pair.residual_valuation >= 10);
        }
    }
}
