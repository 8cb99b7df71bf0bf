//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed.

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_tnf::eigen::{block_schur_form, eigenvalue_valuations, eigvecs, qr_iteration_with, LrOptions};
use padic_tnf::matrix::householder;
use padic_tnf::random::{householder_vector, integral_matrix, line_arrangement, split_matrix, to_padic_matrix};
use padic_tnf::solver::{
    cokernel, macaulay_degree, macaulay_matrix, parse_system_file, solve_system, solve_system_with, SolveOptions,
};
use padic_tnf::{Padic, PadicMatrix};

use common::{binomial, charpoly, hensel_roots, newton_slopes, rank_mod_p, smith_valuations, IntMatrix};

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn residues_mod_p(m: &PadicMatrix) -> Vec<Vec<u64>> {
    let p = BigUint::from(m.prime());
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| {
                    let r = x.to_biguint().expect("integral entry") % &p;
                    u64::try_from(r).unwrap()
                })
                .collect()
        })
        .collect()
}

fn unimodular_q(q: &PadicMatrix, n: i64) -> Result<(), String> {
    ensure(q.is_integral(), || "Q has a non-integral entry".into())?;
    ensure(rank_mod_p(&residues_mod_p(q), q.prime()) == q.rows(), || {
        "det Q vanishes mod p".into()
    })?;
    let det = q.det().map_err(|e| e.to_string())?;
    ensure(det.valuation() == 0, || format!("val det Q = {}", det.valuation()))?;
    let kappa = q.condition_number().map_err(|e| e.to_string())?;
    ensure(kappa == Some(0), || format!("κ(Q) = p^{kappa:?}"))?;
    let _ = n;
    Ok(())
}

fn modulus(p: u64, n: i64) -> BigUint {
    num_traits::pow(BigUint::from(p), n as usize)
}

fn residue_of(x: &Padic, n: i64) -> BigUint {
    x.to_biguint().expect("integral") % modulus(x.prime(), n)
}

fn to_biguint_mod(x: &BigInt, m: &BigUint) -> BigUint {
    x.mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap()
}

// 1 ---------------------------------------------------------------------

fn example_matrix() -> Check {
    let p = 7u64;
    let n = 6;
    let p3 = 343i64;
    let a = PadicMatrix::from_i64(p, n, &[vec![p3, 1], vec![0, -p3]]).unwrap();
    let b = PadicMatrix::from_i64(p, n, &[vec![p3, 1], vec![p3 * p3, -p3]]).unwrap();
    let lambda = Padic::from_i64(p, p3, n);
    let mut found = Vec::new();
    for (name, m) in [("A", &a), ("B", &b)] {
        let d = eigvecs(m, n).map_err(|e| e.to_string())?;
        let pair = d
            .pairs
            .iter()
            .find(|q| q.value.indistinguishable(&lambda))
            .ok_or_else(|| format!("{name}: no eigenpair with λ = p³ among {:?}", d.pairs))?;
        ensure(pair.residual_valuation >= n, || {
            format!("{name}: residual valuation {}", pair.residual_valuation)
        })?;
        ensure(pair.vector[0].is_unit() && pair.vector[1].is_zero(), || {
            format!("{name}: v = {:?} is not a unit multiple of e_1", pair.vector)
        })?;
        found.push(pair.clone());
    }
    ensure(
        found[0].value.indistinguishable(&found[1].value)
            && found[0].vector.iter().zip(&found[1].vector).all(|(x, y)| x.indistinguishable(y)),
        || "A and B round to different answers".into(),
    )?;
    Ok(format!("λ = {}, v = e_1, residual O(7^{})", found[0].value, found[0].residual_valuation))
}

// 2 ---------------------------------------------------------------------

fn qr_contract() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 16;
    for case in 0..200 {
        let p = [7u64, 31, 97][case % 3];
        let size = rng.gen_range(3..=8);
        let a = integral_matrix(&mut rng, p, size, size, n);
        let f = a.qr().map_err(|e| e.to_string())?;
        let res = (&a - &(&f.q * &f.r)).min_valuation();
        ensure(res >= n, || format!("case {case}: A - QR has valuation {res}"))?;
        ensure(f.r.is_upper_triangular(), || format!("case {case}: R not triangular"))?;
        unimodular_q(&f.q, n).map_err(|e| format!("case {case} (QR): {e}"))?;

        let c = a.qr_column_pivoted().map_err(|e| e.to_string())?;
        let res = (&a - &(&(&c.q * &c.r) * &c.permutation_matrix())).min_valuation();
        ensure(res >= n, || format!("case {case}: A - QRP' has valuation {res}"))?;
        unimodular_q(&c.q, n).map_err(|e| format!("case {case} (pivoted QR): {e}"))?;
    }
    Ok("200 matrices, both variants".into())
}

// 3 ---------------------------------------------------------------------

fn svd_smith() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nontrivial = 0;
    for case in 0..100 {
        let p = [2u64, 3, 5, 7][case % 4];
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let a: IntMatrix = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        let x = BigInt::from(rng.gen_range(-30i64..=30));
                        if rng.gen_bool(0.4) {
                            x * BigInt::from(p.pow(rng.gen_range(1..=3)))
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        let expected = smith_valuations(&a, p);
        let svd = to_padic_matrix(p, 40, &a).svd().map_err(|e| e.to_string())?;
        let mut got = svd.invariant_valuations();
        got.sort();
        ensure(got == expected, || {
            format!("case {case} (p = {p}, {rows}x{cols}): Σ valuations {got:?}, Smith {expected:?}")
        })?;
        if expected.iter().any(|&v| v > 0) {
            nontrivial += 1;
        }
    }
    Ok(format!("100 matrices, {nontrivial} with non-unit invariants"))
}

// 4, 5 ------------------------------------------------------------------

struct SplitInstance {
    p: u64,
    a: IntMatrix,
    eigenvalues: Vec<BigInt>,
}

fn split_family() -> Vec<SplitInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..100)
        .map(|case| {
            let p = [7u64, 11, 13][case % 3];
            let n = rng.gen_range(2..=6);
            let (a, eigenvalues) = split_matrix(&mut rng, p, n).expect("n ≤ p");
            SplitInstance { p, a, eigenvalues }
        })
        .collect()
}

fn sorted(mut v: Vec<BigUint>) -> Vec<BigUint> {
    v.sort();
    v
}

fn eigensolver_oracle() -> Check {
    let n = 12;
    for (case, inst) in split_family().iter().enumerate() {
        let m = modulus(inst.p, n);
        let chi = charpoly(&inst.a);
        let hensel = sorted(hensel_roots(&chi, inst.p, n as u32).iter().map(|r| to_biguint_mod(r, &m)).collect());
        let built = sorted(inst.eigenvalues.iter().map(|r| to_biguint_mod(r, &m)).collect());
        ensure(hensel == built, || format!("case {case}: oracle disagrees with construction"))?;

        let a = to_padic_matrix(inst.p, n, &inst.a);
        let d = eigvecs(&a, n).map_err(|e| e.to_string())?;
        ensure(d.unresolved_dimension == 0, || format!("case {case}: unresolved eigenvalues"))?;
        let got = sorted(d.pairs.iter().map(|q| residue_of(&q.value, n)).collect());
        ensure(got == hensel, || format!("case {case}: eigenvalues {got:?}, oracle {hensel:?}"))?;
        for pair in &d.pairs {
            ensure(pair.residual_valuation >= n, || {
                format!("case {case}: residual valuation {}", pair.residual_valuation)
            })?;
        }
    }
    Ok("100 split matrices, p ∈ {7, 11, 13}".into())
}

fn block_schur() -> Check {
    let n = 12;
    let mut steps = 0usize;
    for (case, inst) in split_family().iter().enumerate() {
        let a = to_padic_matrix(inst.p, n, &inst.a);
        let dim = inst.a.len();

        let mut hessenberg = true;
        let (b, v) = qr_iteration_with(&a, n, LrOptions::default(), &mut |_, b| {
            steps += 1;
            hessenberg &= b.is_hessenberg();
        })
        .map_err(|e| e.to_string())?;
        ensure(hessenberg, || format!("case {case}: LR step broke Hessenberg form"))?;
        let res = (&(&a * &v) - &(&v * &b)).min_valuation();
        ensure(res >= n, || format!("case {case}: AV - VB has valuation {res}"))?;

        let s = block_schur_form(&a, n).map_err(|e| e.to_string())?;
        let res = (&(&a * &s.v) - &(&s.v * &s.t)).min_valuation();
        ensure(res >= n && s.residual_valuation >= n, || {
            format!("case {case}: AV - VT has valuation {res} (reported {})", s.residual_valuation)
        })?;
        ensure(s.t.is_upper_triangular(), || format!("case {case}: T is not upper triangular:\n{}\nA = {:?}", s.t, inst.a))?;
        ensure(s.blocks.len() == dim, || format!("case {case}: {} blocks for {dim} residue roots", s.blocks.len()))?;
        let m = modulus(inst.p, n);
        let diag = sorted(s.t.diagonal().iter().map(|x| residue_of(x, n)).collect());
        let built = sorted(inst.eigenvalues.iter().map(|r| to_biguint_mod(r, &m)).collect());
        ensure(diag == built, || format!("case {case}: diagonal of T differs from the eigenvalues"))?;
    }
    Ok(format!("100 matrices, Hessenberg checked on {steps} LR steps"))
}

// 6 ---------------------------------------------------------------------

fn householder_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..500 {
        let p = [3u64, 5, 7, 11, 31][case % 5];
        let n = rng.gen_range(2..=6);
        let x = householder_vector(&mut rng, p, n, 10);
        let prec = x.iter().map(Padic::precision).min().unwrap();
        let hh = householder(&x).map_err(|e| format!("case {case}: {e}"))?;
        let h = &hh.h;
        ensure(h.is_integral(), || format!("case {case}: H not integral"))?;
        let id = PadicMatrix::identity(p, n, prec);
        let sq = (&(h * h) - &id).min_valuation();
        ensure(sq >= prec, || format!("case {case}: H² - I has valuation {sq} < {prec}"))?;
        let hx = h * &PadicMatrix::column(p, x.clone());
        let mut target = vec![Padic::zero(p, prec); n];
        target[0] = hh.alpha.clone();
        let diff = (&hx - &PadicMatrix::column(p, target)).min_valuation();
        ensure(diff >= prec, || format!("case {case}: Hx - αe_1 has valuation {diff} < {prec}"))?;
        let norm = x.iter().map(Padic::valuation).min().unwrap();
        ensure(hh.alpha.valuation() == norm, || format!("case {case}: |α| ≠ |x|"))?;
        let xtx = x.iter().map(|c| c * c).reduce(|a, b| a + b).unwrap();
        let a2 = &hh.alpha * &hh.alpha;
        ensure((&a2 - &xtx).valuation() >= prec + norm, || format!("case {case}: α² ≠ xᵀx"))?;
    }
    Ok("500 admissible vectors".into())
}

// 7 ---------------------------------------------------------------------

fn companion(coeffs: &[i64]) -> IntMatrix {
    // monic x^n + c_{n-1} x^{n-1} + ... + c_0 with coeffs = [c_0, ..]
    let n = coeffs.len();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 1..n {
        m[i][i - 1] = BigInt::one();
    }
    for (i, c) in coeffs.iter().enumerate() {
        m[i][n - 1] = BigInt::from(-c);
    }
    m
}

fn valuation_instances() -> Vec<(u64, IntMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = vec![
        (7, companion(&[-7, 0])),
        (7, companion(&[-3, 0])),
        (5, companion(&[-5, 0, 0])),
        (3, companion(&[9, 0, 3, 0])),
    ];
    while out.len() < 100 {
        let p = [3u64, 5, 7][out.len() % 3];
        let n = rng.gen_range(2..=5);
        let a: IntMatrix = match out.len() % 4 {
            0 => {
                // Eisenstein-type companion: irreducible, roots of valuation k/n
                let k = rng.gen_range(1..=3);
                let mut c: Vec<i64> = (0..n).map(|_| p as i64 * rng.gen_range(-3..=3)).collect();
                c[0] = (p as i64).pow(k) * [1, -1, 2][rng.gen_range(0..3)];
                if k == 1 {
                    c[0] = p as i64 * rng.gen_range(1..p as i64);
                }
                companion(&c)
            }
            _ => (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let x = rng.gen_range(-9i64..=9);
                            BigInt::from(x * (p as i64).pow(rng.gen_range(0..=2)))
                        })
                        .collect()
                })
                .collect(),
        };
        if !charpoly(&a)[0].is_zero() {
            out.push((p, a));
        }
    }
    out
}

fn eigenvalue_valuation_suite() -> Check {
    let mut irreducible = 0;
    for (case, (p, a)) in valuation_instances().iter().enumerate() {
        let expected = newton_slopes(&charpoly(a), *p);
        if expected.iter().any(|r| !r.is_integer()) {
            irreducible += 1;
        }
        let m = to_padic_matrix(*p, 40, a);
        let mut got = eigenvalue_valuations(&m).map_err(|e| e.to_string())?;
        got.sort();
        ensure(got == expected, || format!("case {case} (p = {p}): got {got:?}, Newton polygon {expected:?}"))?;
    }
    Ok(format!("100 matrices, {irreducible} with fractional slopes"))
}

// 8 ---------------------------------------------------------------------

fn macaulay_exactness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut count = 0;
    for a in 1..=3usize {
        for b in 1..=3usize {
            for rep in 0..3 {
                let p = [7u64, 11, 13][rep];
                let sys = line_arrangement(&mut rng, p, &[a, b], 12).map_err(|e| e.to_string())?;
                let d = macaulay_degree(&[a, b]);
                let m = macaulay_matrix(&sys.polynomials, d).map_err(|e| e.to_string())?;
                let ck = cokernel(&m).map_err(|e| e.to_string())?;
                let dim = binomial(d + 2, 2);
                ensure(m.monomials.len() == dim, || format!("degrees ({a}, {b}): dim V_D = {}", m.monomials.len()))?;
                ensure(ck.rank + ck.delta() == dim, || {
                    format!("degrees ({a}, {b}): rank {} + δ {} ≠ {dim}", ck.rank, ck.delta())
                })?;
                ensure(ck.delta() == a * b && sys.points.len() == a * b, || {
                    format!("degrees ({a}, {b}): δ = {}, points = {}", ck.delta(), sys.points.len())
                })?;
                ensure(ck.unstable_valuations.is_empty(), || {
                    format!("degrees ({a}, {b}): unstable singular values {:?}", ck.unstable_valuations)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} systems with degrees in {{1,2,3}}²"))
}

// 9 ---------------------------------------------------------------------

fn solver_end_to_end() -> Check {
    // (a) x² - 2, y - x over Q_7
    let file = parse_system_file("p=7 prec=6 vars=x,y\nx^2 - 2\ny - x\n").map_err(|e| e.to_string())?;
    let sol = solve_system(&file.polynomials, 0).map_err(|e| e.to_string())?;
    ensure(sol.points.len() == 2, || format!("√2: {} solutions", sol.points.len()))?;
    let roots = hensel_roots(&[BigInt::from(-2), BigInt::zero(), BigInt::one()], 7, 6);
    let m = modulus(7, 6);
    let mut expected = sorted(roots.iter().map(|r| to_biguint_mod(r, &m)).collect());
    let mut got = sorted(sol.points.iter().map(|pt| residue_of(&pt.coordinates[0], 6)).collect());
    ensure(got == expected, || format!("√2: x = {got:?}, Hensel {expected:?}"))?;
    let mut leading: Vec<u64> = sol.points.iter().map(|pt| pt.coordinates[0].digits()[0]).collect();
    leading.sort();
    ensure(leading == [3, 4], || format!("√2: leading digits {leading:?}"))?;
    for pt in &sol.points {
        ensure(pt.residual_valuation >= 5, || format!("√2: residual {}", pt.residual_valuation))?;
        ensure(pt.coordinates[0].indistinguishable(&pt.coordinates[1]), || "√2: y ≠ x".into())?;
    }
    expected.clear();
    got.clear();

    // (b) constructed systems
    let n = 12i64;
    let shapes: [&[usize]; 10] = [&[4], &[8], &[2, 2], &[3, 2], &[2, 3], &[1, 3], &[2, 4], &[2, 2, 2], &[1, 2, 3], &[2, 1, 1]];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut total = 0;
    for case in 0..20 {
        let degrees = shapes[case % shapes.len()];
        let p = if degrees.len() == 1 { 11 } else { [7u64, 11][case % 2] };
        let sys = line_arrangement(&mut rng, p, degrees, n).map_err(|e| e.to_string())?;
        for pt in &sys.points {
            for f in &sys.polynomials {
                let v = f.eval(pt).map_err(|e| e.to_string())?;
                ensure(v.valuation() >= n, || format!("case {case}: construction point is off the variety"))?;
            }
        }
        let opts = SolveOptions {
            seed: case as u64,
            ..SolveOptions::default()
        };
        let sol = solve_system_with(&sys.polynomials, &opts).map_err(|e| format!("case {case}: {e}"))?;
        ensure(sol.delta == sys.points.len(), || format!("case {case}: δ = {}", sol.delta))?;
        for known in &sys.points {
            let hit = sol.points.iter().find(|pt| {
                pt.coordinates
                    .iter()
                    .zip(known)
                    .all(|(c, k)| (c - k).valuation() >= n - 3)
            });
            let pt = hit.ok_or_else(|| format!("case {case} {degrees:?}: point {known:?} not recovered"))?;
            ensure(pt.residual_valuation >= n - 3, || {
                format!("case {case}: residual valuation {}", pt.residual_valuation)
            })?;
        }
        total += sys.points.len();
    }
    Ok(format!("√2 digits match; 20 systems, {total} points recovered"))
}

// 10 --------------------------------------------------------------------

fn division_example() -> Check {
    let p = 7u64;
    let pb = BigInt::from(p);
    let a = Padic::from_bigint(p, &(BigInt::one() + num_traits::pow(pb.clone(), 99)), 100);
    let b = Padic::one(p, 100);
    let c = Padic::one(p, 100).shift(100);
    ensure(c.precision() == 200, || format!("p^100 + O(p^200) has precision {}", c.precision()))?;
    let q = (&a - &b).checked_div(&c).map_err(|e| e.to_string())?;
    let expected = Padic::from_parts(p, -1, BigUint::one(), 0);
    ensure(q.valuation() == -1 && q.precision() == 0 && q.unit() == &BigUint::one(), || {
        format!("got {q:?}")
    })?;
    ensure(q == expected, || format!("got {q:?}"))?;
    Ok(format!("{q}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("example matrix eigenpair", Duration::from_secs(1), example_matrix),
        ("QR contract", Duration::from_secs(30), qr_contract),
        ("SVD and Smith invariants", Duration::from_secs(30), svd_smith),
        ("eigenvalues against Hensel oracle", Duration::from_secs(120), eigensolver_oracle),
        ("block Schur form", Duration::from_secs(120), block_schur),
        ("Householder reflections", Duration::from_secs(10), householder_suite),
        ("eigenvalue valuations", Duration::from_secs(60), eigenvalue_valuation_suite),
        ("Macaulay rank and quotient dimension", Duration::from_secs(60), macaulay_exactness),
        ("end-to-end solver", Duration::from_secs(180), solver_end_to_end),
        ("division precision", Duration::from_secs(1), division_example),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{elapsed:.2?}] {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{elapsed:.2?}] {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
