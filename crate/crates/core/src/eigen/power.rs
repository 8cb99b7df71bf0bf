use super::{check_square, InvariantBlock};
use crate::error::{Error, Result};
use crate::matrix::PadicMatrix;
use crate::padic::Padic;
use crate::par::{self, Exec};
use crate::residue::ResidueElem;

/// Number of squarings so that `2^k ≥ m N`.
fn squarings(m: usize, n: i64) -> u32 {
    let target = (m as u64).saturating_mul(n.max(1) as u64);
    target.next_power_of_two().trailing_zeros()
}

/// Splits `A` into invariant subspaces, one per residue eigenvalue.
///
/// For each residue root `λ` of multiplicity `m`, `B = A - λI` is squared
/// until its exponent reaches `m N`; the kernel of that power modulo `p^N`
/// is the generalized eigenspace `V`, and `X` solves `V X = A V`. A kernel
/// whose dimension differs from `m` means the working precision ran out.
pub fn power_iteration_decomposition(
    a: &PadicMatrix,
    roots: &[(ResidueElem, usize)],
    n: i64,
) -> Result<Vec<InvariantBlock>> {
    check_square(a, "power iteration")?;
    let a = a.truncate(n);
    let dim = a.rows();
    let work = dim * dim * dim * roots.len();
    let blocks = par::map(roots, Exec::for_work(work, 256), |&(lambda, m)| {
        let shift = -Padic::lift_residue(lambda, n);
        let mut b = a.add_diagonal(&shift);
        for _ in 0..squarings(m, n) {
            b = (&b * &b).truncate(n);
        }
        let v = b.nullspace()?;
        if v.cols() != m {
            return Err(Error::Invariant(format!(
                "generalized eigenspace for residue {} has dimension {} but multiplicity {} \
                 (precision {} exhausted)",
                lambda.value(),
                v.cols(),
                m,
                n
            )));
        }
        let av = &a * &v;
        let x = v.solve(&av)?;
        Ok(InvariantBlock {
            x,
            v,
            residue_eigenvalue: Some(lambda),
        })
    });
    blocks.into_iter().collect()
}
