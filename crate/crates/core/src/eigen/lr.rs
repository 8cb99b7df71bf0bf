//! Shifted LR ("p-adic QR") iteration on Hessenberg matrices, block Schur
//! forms and eigenvalue valuations.

use num_rational::Ratio;

use super::{check_square, classical_eigen, entry_valuation, SchurBlock, SchurDecomposition};
use crate::error::Result;
use crate::matrix::{lifted_quotient, PadicMatrix};
use crate::padic::Padic;
use crate::residue::{linear_roots_with_multiplicity, ResidueElem};

/// How many LR steps each residue root gets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LrSchedule {
    /// `m·N + n - 1` steps per root of multiplicity `m`, on every window.
    Fixed,
    /// Per root `λ`, step only the windows whose residue characteristic
    /// polynomial has `λ` and some other root, until they split or
    /// `2·m·N + n - 1` steps have run.
    #[default]
    UntilSplit,
}

/// Iteration controls for [`qr_iteration_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct LrOptions {
    pub schedule: LrSchedule,
}

/// Maximal diagonal windows `[lo, hi)` separated by vanished subdiagonals.
pub(crate) fn windows(b: &PadicMatrix) -> Vec<(usize, usize)> {
    let n = b.rows();
    let mut out = Vec::new();
    let mut lo = 0;
    for j in 0..n {
        if j + 1 == n || b.get(j + 1, j).is_zero() {
            out.push((lo, j + 1));
            lo = j + 1;
        }
    }
    out
}

/// One LR step with shift `shift` on the window `[lo, hi)` of the
/// Hessenberg matrix `b`, updating `v` so that `A V = V B` is preserved.
///
/// `B - shift` is reduced to upper triangular form by adjacent row swaps
/// and eliminations (pivoting on the smaller valuation), then the inverse
/// transforms are applied on the right.
pub fn lr_step(
    b: &mut PadicMatrix,
    v: &mut PadicMatrix,
    lo: usize,
    hi: usize,
    shift: &Padic,
    n: i64,
) -> Result<()> {
    if hi <= lo + 1 {
        return Ok(());
    }
    let p = b.prime();
    let dim = b.rows();
    let neg = -shift;
    for j in lo..hi {
        let x = (b.get(j, j) + &neg).truncate(n);
        b.set(j, j, x);
    }
    let mut ops: Vec<(bool, Padic)> = Vec::with_capacity(hi - lo - 1);
    for j in lo..hi - 1 {
        let (top, bot) = (b.get(j, j), b.get(j + 1, j));
        let swap = !bot.is_zero() && (top.is_zero() || bot.valuation() < top.valuation());
        if swap {
            b.swap_rows(j, j + 1);
        }
        let l = if b.get(j + 1, j).is_zero() {
            Padic::zero(p, n)
        } else {
            lifted_quotient(b.get(j + 1, j), b.get(j, j), n)?
        };
        if !l.is_zero() {
            b.row_axpy(j + 1, j, &-&l, j + 1);
        }
        b.set(j + 1, j, Padic::zero(p, n));
        ops.push((swap, l));
    }
    for (k, (swap, l)) in ops.iter().enumerate() {
        let j = lo + k;
        if *swap {
            b.swap_cols(j, j + 1);
            v.swap_cols(j, j + 1);
        }
        if !l.is_zero() {
            b.col_axpy(j, j + 1, l, hi);
            v.col_axpy(j, j + 1, l, dim);
        }
    }
    for j in lo..hi {
        let x = (b.get(j, j) + shift).truncate(n);
        b.set(j, j, x);
    }
    Ok(())
}

/// Shifted LR iteration: Hessenberg reduction, then a sweep of shifted
/// steps per residue root `λ`, deflating eagerly.
///
/// An eigenvalue near the shift that sits above an already separated
/// neighbour first has to be swapped down: the subdiagonal between them
/// loses valuation until the two trade places, then gains one digit per
/// step. That reordering can cost up to `N` steps on top of the `m·N`
/// convergence steps, hence the budget of [`LrSchedule::UntilSplit`].
pub fn qr_iteration(a: &PadicMatrix, n: i64) -> Result<(PadicMatrix, PadicMatrix)> {
    qr_iteration_with(a, n, LrOptions::default(), &mut |_, _| {})
}

/// [`qr_iteration`] with options and an observer called after every step
/// with the step index and the current iterate.
pub fn qr_iteration_with(
    a: &PadicMatrix,
    n: i64,
    opts: LrOptions,
    observer: &mut dyn FnMut(usize, &PadicMatrix),
) -> Result<(PadicMatrix, PadicMatrix)> {
    check_square(a, "LR iteration")?;
    let (mut b, mut v) = a.truncate(n).hessenberg()?;
    let chi = b.residue()?.charpoly()?;
    let extra = b.rows().saturating_sub(1) as i64;
    let mut step = 0;
    for (lambda, m) in linear_roots_with_multiplicity(&chi) {
        let shift = Padic::lift_residue(lambda, n);
        let budget = match opts.schedule {
            LrSchedule::Fixed => (m as i64).saturating_mul(n),
            LrSchedule::UntilSplit => (2 * m as i64).saturating_mul(n),
        };
        for _ in 0..budget.saturating_add(extra) {
            let targets = match opts.schedule {
                LrSchedule::Fixed => windows(&b),
                LrSchedule::UntilSplit => mixed_windows(&b, lambda)?,
            };
            if targets.is_empty() {
                break;
            }
            for (lo, hi) in targets {
                lr_step(&mut b, &mut v, lo, hi, &shift, n)?;
            }
            step += 1;
            observer(step, &b);
        }
    }
    Ok((b, v))
}

/// Windows whose residue characteristic polynomial vanishes at `lambda`
/// and is not a power of `x - lambda`.
fn mixed_windows(b: &PadicMatrix, lambda: ResidueElem) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (lo, hi) in windows(b) {
        if hi - lo < 2 {
            continue;
        }
        let chi = b.submatrix(lo, hi, lo, hi).residue()?.charpoly()?;
        if chi.eval(lambda.value()) == 0 && chi.is_pure_power() != Some(lambda) {
            out.push((lo, hi));
        }
    }
    Ok(out)
}

/// Block Schur form `A V = V T`.
///
/// Uses LR iteration when the residue characteristic polynomial has at
/// least two distinct linear factors. Diagonal blocks whose residue
/// charpoly is `(x - λ)^m` with `m > 1` are then triangularized with
/// eigenvectors from [`classical_eigen`], one deflation at a time. Blocks
/// without Q_p eigenvectors stay as they are.
pub fn block_schur_form(a: &PadicMatrix, n: i64) -> Result<SchurDecomposition> {
    check_square(a, "block Schur form")?;
    let p = a.prime();
    let dim = a.rows();
    let a = a.truncate(n);
    let identity = PadicMatrix::identity(p, dim, n);
    if a.is_diagonal() || dim == 0 {
        return Ok(finish(&a, a.clone(), identity));
    }
    let nu = entry_valuation(&a).unwrap_or(0);
    if nu != 0 {
        let inner = block_schur_form(&a.shift(-nu), n - nu)?;
        return Ok(finish(&a, inner.t.shift(nu), inner.v.with_precision(n)));
    }
    let chi = a.residue()?.charpoly()?;
    let roots = linear_roots_with_multiplicity(&chi);
    if roots.is_empty() {
        return Ok(finish(&a, a.clone(), identity));
    }
    let (mut t, mut v) = if roots.len() > 1 {
        qr_iteration(&a, n)?
    } else {
        (a.clone(), identity)
    };
    for (lo, hi) in windows(&t) {
        if hi - lo < 2 {
            continue;
        }
        let block = t.submatrix(lo, hi, lo, hi);
        let pure = block.residue()?.charpoly()?.is_pure_power();
        if pure.is_some() {
            triangularize_block(&mut t, &mut v, lo, hi, n)?;
        }
    }
    Ok(finish(&a, t, v))
}

/// Deflates eigenvectors out of the window `[lo, hi)` one at a time.
fn triangularize_block(t: &mut PadicMatrix, v: &mut PadicMatrix, lo: usize, hi: usize, n: i64) -> Result<()> {
    let p = t.prime();
    let dim = t.rows();
    for k in lo..hi - 1 {
        let block = t.submatrix(k, hi, k, hi);
        let eig = classical_eigen(&block, n)?;
        let Some(best) = eig.pairs.iter().max_by_key(|pair| pair.residual_valuation) else {
            return Ok(());
        };
        // Complete the primitive eigenvector to a unimodular basis.
        let w = PadicMatrix::column(p, best.vector.iter().map(|x| x.with_precision(n)).collect());
        let q = w.qr()?.q;
        let mut full = PadicMatrix::identity(p, dim, n);
        full.set_block(k, k, &q);
        let inv = full.inverse()?;
        *t = (&(&inv * &*t) * &full).truncate(n);
        *v = (&*v * &full).truncate(n);
        for i in k + 1..hi {
            t.set(i, k, Padic::zero(p, n));
        }
    }
    Ok(())
}

fn finish(a: &PadicMatrix, t: PadicMatrix, v: PadicMatrix) -> SchurDecomposition {
    let residual_valuation = (&(a * &v) - &(&v * &t)).min_valuation();
    let blocks = windows(&t)
        .into_iter()
        .map(|(lo, hi)| {
            let block = t.submatrix(lo, hi, lo, hi);
            let residue_eigenvalue = block
                .residue()
                .ok()
                .and_then(|r| r.charpoly().ok())
                .and_then(|c| c.is_pure_power());
            SchurBlock {
                start: lo,
                size: hi - lo,
                residue_eigenvalue,
            }
        })
        .collect();
    SchurDecomposition {
        t,
        v,
        blocks,
        residual_valuation,
    }
}

/// Valuations of the eigenvalues of `A` (in an algebraic closure), read
/// from unshifted LR iteration: once the iterate splits into diagonal
/// windows, a window of size `k` contributes `k` copies of
/// `val(det) / k`. Works whether or not the eigenvalues lie in Q_p.
pub fn eigenvalue_valuations(a: &PadicMatrix) -> Result<Vec<Ratio<i64>>> {
    check_square(a, "eigenvalue valuations")?;
    let p = a.prime();
    let dim = a.rows();
    let nu = entry_valuation(a).unwrap_or(0);
    let a = a.shift(-nu);
    let n = a.flat_precision().min(i64::MAX / 4);
    let (mut b, mut v) = a.hessenberg()?;
    let zero = Padic::zero(p, n);
    let rounds = n.max(1) * (dim * dim.saturating_sub(1)).max(1) as i64;
    for _ in 0..rounds {
        let wins = windows(&b);
        if wins.iter().all(|(lo, hi)| hi - lo == 1) {
            break;
        }
        for (lo, hi) in wins {
            lr_step(&mut b, &mut v, lo, hi, &zero, n)?;
        }
    }
    let mut out = Vec::with_capacity(dim);
    for (lo, hi) in windows(&b) {
        let size = (hi - lo) as i64;
        let det = b.submatrix(lo, hi, lo, hi).det()?;
        let val = Ratio::new(det.valuation(), size) + Ratio::from_integer(nu);
        out.extend(std::iter::repeat_n(val, size as usize));
    }
    out.sort();
    Ok(out)
}
