//! Zero-dimensional polynomial systems over Q_p via truncated normal forms.
//!
//! The pipeline is: Macaulay matrix in degree `D`, its cokernel `π` (from
//! the p-adic SVD), a monomial basis of the quotient picked by
//! column-pivoted QR on the low-degree columns of `π`, the multiplication
//! matrices `[x_i]`, and finally one eigendecomposition of a random
//! combination `Σ c_i [x_i]` whose eigenvectors are shared by every `[x_i]`.

mod macaulay;
mod poly;
mod text;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use macaulay::{
    cokernel, macaulay_degree, macaulay_matrix, multiplication_matrices, select_basis, BasisSelection, Cokernel,
    MacaulaySystem,
};
pub use poly::{monomials_up_to, Monomial, MultiPoly};
pub use text::{parse_system_file, parse_system_file_at, write_system_file, SystemFile};

pub(crate) use text::rational_to_padic;

use crate::eigen::eigvecs;
use crate::error::{Error, Result};
use crate::matrix::PadicMatrix;
use crate::padic::Padic;
use crate::par::{self, Exec};
use crate::random;

/// Something the solver noticed that weakens the precision claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverWarning {
    /// Singular values of the Macaulay matrix with valuation in `(0, N)`:
    /// the quotient dimension depends on the working precision.
    IllConditioned { valuations: Vec<i64> },
    /// The selected quotient basis has non-unit pivots.
    DegradedBasis { pivot_valuations: Vec<i64> },
    /// Every random combination drawn had a repeated eigenvalue mod p.
    RepeatedEigenvalues { attempts: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionPoint {
    pub coordinates: Vec<Padic>,
    /// Absolute precision of each coordinate.
    pub precision: Vec<i64>,
    pub multiplicity: usize,
    /// `val f_j(point)` for each input polynomial.
    pub residuals: Vec<i64>,
    /// Minimum over `residuals`.
    pub residual_valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub prime: u64,
    pub precision: i64,
    /// Macaulay degree `D`.
    pub degree: usize,
    /// Dimension of the quotient ring, i.e. the number of solutions over
    /// the algebraic closure counted with multiplicity.
    pub delta: usize,
    pub seed: u64,
    pub basis: Vec<Monomial>,
    pub pivot_valuations: Vec<i64>,
    pub points: Vec<SolutionPoint>,
    /// Solutions (with multiplicity) whose coordinates are not in Q_p.
    pub unresolved_dimension: usize,
    pub warnings: Vec<SolverWarning>,
}

impl SolutionSet {
    pub fn has_warnings(&self) -> bool {
        !self.warnings.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub seed: u64,
    /// Overrides the default Macaulay degree `Σ (d_i - 1) + 1`.
    pub degree: Option<usize>,
    /// Extra draws of the random combination when its residue
    /// characteristic polynomial has a repeated root.
    pub retries: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            degree: None,
            retries: 3,
        }
    }
}

/// `val f_j(point)` for each polynomial.
pub fn residual_report(point: &[Padic], polys: &[MultiPoly]) -> Result<Vec<i64>> {
    polys.iter().map(|f| Ok(f.eval(point)?.valuation())).collect()
}

pub fn solve_system(polys: &[MultiPoly], seed: u64) -> Result<SolutionSet> {
    solve_system_with(
        polys,
        &SolveOptions {
            seed,
            ..Default::default()
        },
    )
}

pub fn solve_system_with(polys: &[MultiPoly], opts: &SolveOptions) -> Result<SolutionSet> {
    let first = polys
        .first()
        .ok_or_else(|| Error::Domain("empty polynomial system".into()))?;
    let p = first.prime();
    let nvars = first.nvars();
    let prec = polys.iter().map(MultiPoly::precision).min().unwrap_or(i64::MAX);
    if prec == i64::MAX {
        return Err(Error::Domain("every polynomial is zero".into()));
    }
    let degrees: Vec<usize> = polys.iter().map(MultiPoly::degree).collect();
    let degree = opts.degree.unwrap_or_else(|| macaulay_degree(&degrees));

    let system = macaulay_matrix(polys, degree)?;
    let ck = cokernel(&system)?;
    let mut warnings = Vec::new();
    if !ck.unstable_valuations.is_empty() {
        warnings.push(SolverWarning::IllConditioned {
            valuations: ck.unstable_valuations.clone(),
        });
    }
    let basis = select_basis(&ck, &system)?;
    if basis.pivot_valuations.iter().any(|&v| v > 0) {
        warnings.push(SolverWarning::DegradedBasis {
            pivot_valuations: basis.pivot_valuations.clone(),
        });
    }
    let mult = multiplication_matrices(&ck, &system, &basis)?;
    let delta = ck.delta();
    let work = mult.iter().map(PadicMatrix::flat_precision).min().unwrap_or(prec).min(prec);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let attempts = opts.retries + 1;
    let mut combo = None;
    for attempt in 0..attempts {
        let mut l = PadicMatrix::zeros(p, delta, delta, work);
        for m in &mult {
            let c = random::unit(&mut rng, p, work);
            l = &l + &m.scale(&c);
        }
        let separated = l.residue()?.charpoly()?.is_square_free();
        if separated || attempt + 1 == attempts {
            if !separated && delta > 1 {
                warnings.push(SolverWarning::RepeatedEigenvalues { attempts });
            }
            combo = Some(l);
            break;
        }
    }
    let l = combo.expect("at least one draw");
    let eig = eigvecs(&l, work)?;

    let raw = par::map(&eig.pairs, Exec::for_work(eig.pairs.len() * delta * delta * nvars, 4096), |pair| {
        let v = PadicMatrix::column(p, pair.vector.clone());
        let k = first_min_valuation(&pair.vector);
        let coordinates = mult
            .iter()
            .map(|m| {
                let mv = m * &v;
                mv.get(k, 0).checked_div(&pair.vector[k])
            })
            .collect::<Result<Vec<_>>>()?;
        let residuals = residual_report(&coordinates, polys)?;
        Ok(SolutionPoint {
            precision: coordinates.iter().map(Padic::precision).collect(),
            residual_valuation: residuals.iter().copied().min().unwrap_or(i64::MAX),
            coordinates,
            multiplicity: pair.multiplicity,
            residuals,
        })
    });
    let mut points: Vec<SolutionPoint> = Vec::new();
    for pt in raw {
        let pt = pt?;
        match points.iter_mut().find(|q| same_point(q, &pt)) {
            Some(q) if pt.residual_valuation > q.residual_valuation => *q = pt,
            Some(_) => {}
            None => points.push(pt),
        }
    }
    points.sort_by_key(|pt| pt.coordinates.iter().map(sort_key).collect::<Vec<_>>());

    Ok(SolutionSet {
        prime: p,
        precision: prec,
        degree,
        delta,
        seed: opts.seed,
        basis: basis.monomials,
        pivot_valuations: basis.pivot_valuations,
        points,
        unresolved_dimension: eig.unresolved_dimension,
        warnings,
    })
}

fn first_min_valuation(v: &[Padic]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() && (v[best].is_zero() || x.valuation() < v[best].valuation()) {
            best = i;
        }
    }
    best
}

fn same_point(a: &SolutionPoint, b: &SolutionPoint) -> bool {
    a.coordinates
        .iter()
        .zip(&b.coordinates)
        .all(|(x, y)| x.indistinguishable(y))
}

fn sort_key(x: &Padic) -> (i64, Vec<u64>) {
    if x.is_zero() {
        (i64::MAX, Vec::new())
    } else {
        (x.valuation(), x.digits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(src: &str, seed: u64) -> SolutionSet {
        let sys = parse_system_file(src).unwrap();
        solve_system(&sys.polynomials, seed).unwrap()
    }

    #[test]
    fn linear_system() {
        let s = solve("p=7 prec=6 vars=x,y\nx - 3\ny - 4\n", 1);
        assert_eq!(s.delta, 1);
        assert_eq!(s.points.len(), 1);
        let pt = &s.points[0];
        assert_eq!(pt.coordinates, vec![Padic::from_i64(7, 3, 6), Padic::from_i64(7, 4, 6)]);
        assert!(pt.residual_valuation >= 6);
    }

    #[test]
    fn square_root_of_two() {
        let s = solve("p=7 prec=6 vars=x,y\nx^2 - 2\ny - x\n", 7);
        assert_eq!(s.delta, 2);
        assert_eq!(s.points.len(), 2);
        let mut leading: Vec<u64> = s.points.iter().map(|pt| pt.coordinates[0].digits()[0]).collect();
        leading.sort();
        assert_eq!(leading, vec![3, 4]);
        for pt in &s.points {
            assert!(pt.coordinates[0].indistinguishable(&pt.coordinates[1]));
            assert!(pt.residual_valuation >= 5);
        }
    }

    #[test]
    fn no_rational_points() {
        // x^2 = 3 has no solution in Q_7
        let s = solve("p=7 prec=6 vars=x\nx^2 - 3\n", 0);
        assert_eq!(s.delta, 2);
        assert!(s.points.is_empty());
        assert_eq!(s.unresolved_dimension, 2);
    }

    #[test]
    fn seeds_agree() {
        let src = "p=11 prec=8 vars=x,y\n(x - 1)*(x - 2)\n(y - 3)*(y + x)\n";
        let a = solve(src, 1);
        let b = solve(src, 99);
        assert_eq!(a.points.len(), 4);
        for (pa, pb) in a.points.iter().zip(&b.points) {
            assert_eq!(pa.coordinates, pb.coordinates);
        }
    }

    #[test]
    fn inconsistent_is_an_error() {
        let sys = parse_system_file("p=7 prec=6 vars=x\nx - 1\nx - 2\n").unwrap();
        assert!(matches!(solve_system(&sys.polynomials, 0), Err(Error::NoSolutions(_))));
    }

    #[test]
    fn residuals_track_perturbation() {
        let sys = parse_system_file("p=5 prec=10 vars=x\nx^2 - 6\n").unwrap();
        let root = Padic::from_i64(5, 6, 10).sqrt().unwrap();
        for k in 1..8 {
            let bumped = &root + &Padic::from_i64(5, 1, 10).shift(k);
            assert_eq!(residual_report(&[bumped], &sys.polynomials).unwrap(), vec![k]);
        }
        assert!(residual_report(&[root], &sys.polynomials).unwrap()[0] >= 10);
    }
}
