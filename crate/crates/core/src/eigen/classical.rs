use super::{
    berkowitz_charpoly, check_square, make_pair, qp_poly_roots, EigenDecomposition, InvariantBlock,
};
use crate::error::Result;
use crate::matrix::PadicMatrix;
use crate::padic::Padic;

/// Eigenpairs from the characteristic polynomial.
///
/// The representative of `A` is taken as exact to precision `N·n`, which is
/// enough headroom for the roots of an `n`-fold cluster to come out with
/// about `N` correct digits. The charpoly is computed without divisions,
/// its Q_p roots are found, and eigenvectors are read from the kernel
/// of `A - λI`: the singular directions whose singular value is at least as
/// small as the root's certified precision allows. Results are capped at
/// `N` and the residual is measured against the input, so it may come out
/// below `N` when the eigenvalues are badly conditioned.
pub fn classical_eigen(a: &PadicMatrix, n: i64) -> Result<EigenDecomposition> {
    check_square(a, "classical eigensolver")?;
    let p = a.prime();
    let dim = a.rows();
    let a = a.truncate(n);
    if dim == 0 {
        return Ok(EigenDecomposition::default());
    }
    if dim == 1 {
        let pair = make_pair(&a, a.get(0, 0).clone(), vec![Padic::one(p, n)], 1);
        return Ok(EigenDecomposition {
            pairs: vec![pair],
            ..Default::default()
        });
    }
    let work = n.saturating_mul(dim as i64).max(n);
    let exact = a.with_precision(work);
    let chi = berkowitz_charpoly(&exact)?;
    let roots = qp_poly_roots(&chi);

    let mut out = EigenDecomposition::default();
    let mut found = 0;
    for root in roots {
        let lambda = root.value.with_precision(work);
        let m = exact.add_diagonal(&-&lambda);
        let svd = m.svd()?;
        let vals: Vec<i64> = svd.sigma.iter().map(Padic::valuation).collect();
        let Some(&deepest) = vals.iter().max() else {
            continue;
        };
        let tau = deepest.min(root.precision);
        let kernel = svd.v_inv_t.clone();
        let cols: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] >= tau).collect();
        found += root.multiplicity;
        let value = root.value.truncate(n);
        for c in cols {
            let v: Vec<Padic> = super::normalize(&kernel.col(c))
                .into_iter()
                .map(|x| x.truncate(n))
                .collect();
            out.pairs.push(make_pair(&a, value.clone(), v, root.multiplicity));
        }
    }
    if found < dim {
        out.unresolved_dimension = dim - found;
        out.unresolved.push(InvariantBlock {
            x: a.clone(),
            v: PadicMatrix::identity(p, dim, n),
            residue_eigenvalue: a.residue().ok().and_then(|r| r.charpoly().ok()).and_then(|c| c.is_pure_power()),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let a = PadicMatrix::from_i64(5, 4, &[vec![7]]).unwrap();
        let d = classical_eigen(&a, 4).unwrap();
        assert_eq!(d.pairs[0].value, Padic::from_i64(5, 7, 4));
    }

    #[test]
    fn scalar_plus_small_nilpotent() {
        // 2I + 7^2 [[0,1],[0,0]]
        let a = PadicMatrix::from_i64(7, 8, &[vec![2, 49], vec![0, 2]]).unwrap();
        let d = classical_eigen(&a, 8).unwrap();
        assert!(!d.pairs.is_empty());
        for pair in &d.pairs {
            assert!(pair.value.indistinguishable(&Padic::from_i64(7, 2, 2)));
        }
        assert!(d.pairs.iter().any(|p| p.residual_valuation >= 8));
    }

    #[test]
    fn integer_eigenvalues() {
        // eigenvalues 1, 8, 15 (all ≡ 1 mod 7) with eigenvectors e1, e1+e2, e2+e3
        let a = PadicMatrix::from_i64(7, 10, &[vec![1, 7, 7], vec![0, 8, 7], vec![0, 0, 15]]).unwrap();
        let d = classical_eigen(&a, 10).unwrap();
        let mut vals: Vec<i64> = d
            .pairs
            .iter()
            .map(|p| p.value.to_bigint_balanced().unwrap().try_into().unwrap())
            .collect();
        vals.sort();
        assert_eq!(vals, vec![1, 8, 15]);
        assert!(d.pairs.iter().all(|p| p.residual_valuation >= 10));
    }
}
