use std::fmt::Write;

use padic_tnf::solver::SolverWarning;
use padic_tnf::{Padic, PadicMatrix};

use crate::Document;

fn vector(v: &[Padic]) -> String {
    let parts: Vec<String> = v.iter().map(Padic::to_compact_string).collect();
    format!("[{}]", parts.join(", "))
}

fn matrix(out: &mut String, name: &str, m: &PadicMatrix) {
    let _ = writeln!(out, "{name} =");
    for i in 0..m.rows() {
        let _ = writeln!(out, "  {}", vector(m.row(i)));
    }
}

fn residual(p: u64, v: i64) -> String {
    format!("O({p}^{v})")
}

pub(crate) fn human(doc: &Document) -> String {
    let mut out = String::new();
    match doc {
        Document::Solve(r) => {
            let s = &r.solution;
            let _ = writeln!(
                out,
                "Q_{} at precision {}: Macaulay degree {}, quotient dimension {}, seed {}",
                s.prime, s.precision, s.degree, s.delta, s.seed
            );
            let basis: Vec<String> = s.basis.iter().map(|m| m.render(&r.variables)).collect();
            let _ = writeln!(out, "basis {{{}}}, pivot valuations {:?}", basis.join(", "), s.pivot_valuations);
            for w in &s.warnings {
                let _ = match w {
                    SolverWarning::IllConditioned { valuations } => writeln!(
                        out,
                        "warning: singular values of valuation {valuations:?} make the quotient dimension precision dependent"
                    ),
                    SolverWarning::DegradedBasis { pivot_valuations } => {
                        writeln!(out, "warning: basis pivots have valuations {pivot_valuations:?}")
                    }
                    SolverWarning::RepeatedEigenvalues { attempts } => writeln!(
                        out,
                        "warning: {attempts} random combinations all had repeated eigenvalues mod p"
                    ),
                };
            }
            if s.points.is_empty() {
                let _ = writeln!(out, "no Q_{}-rational solutions", s.prime);
            }
            for (k, pt) in s.points.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "solution {} (multiplicity {}, residual {}):",
                    k + 1,
                    pt.multiplicity,
                    residual(s.prime, pt.residual_valuation)
                );
                for (name, x) in r.variables.iter().zip(&pt.coordinates) {
                    let _ = writeln!(out, "  {name} = {x}");
                }
            }
            if s.unresolved_dimension > 0 {
                let _ = writeln!(
                    out,
                    "{} solution(s) with coordinates outside Q_{} were dropped",
                    s.unresolved_dimension, s.prime
                );
            }
        }
        Document::Eig(r) => {
            let _ = writeln!(out, "eigenpairs over Q_{} at precision {}", r.prime, r.precision);
            for pair in &r.pairs {
                let _ = writeln!(
                    out,
                    "λ = {}  (multiplicity {}, residual {})",
                    pair.value,
                    pair.multiplicity,
                    residual(r.prime, pair.residual_valuation)
                );
                let _ = writeln!(out, "  v = {}", vector(&pair.vector));
            }
            if r.unresolved_dimension > 0 {
                let _ = writeln!(out, "{} eigenvalue(s) not resolved over Q_{}", r.unresolved_dimension, r.prime);
            }
        }
        Document::Schur(r) => {
            let _ = writeln!(
                out,
                "block Schur form over Q_{} at precision {}, residual {}",
                r.prime,
                r.precision,
                residual(r.prime, r.residual_valuation)
            );
            for b in &r.blocks {
                let _ = writeln!(
                    out,
                    "  block at {} of size {}{}",
                    b.start,
                    b.size,
                    b.residue_eigenvalue
                        .map(|l| format!(", residue eigenvalue {}", l.value()))
                        .unwrap_or_default()
                );
            }
            matrix(&mut out, "T", &r.t);
            matrix(&mut out, "V", &r.v);
        }
        Document::Qr(r) => {
            let _ = writeln!(out, "A = Q R over Q_{} at precision {}", r.prime, r.precision);
            let _ = writeln!(out, "row permutation {:?}", r.row_permutation);
            matrix(&mut out, "Q", &r.q);
            matrix(&mut out, "R", &r.r);
        }
        Document::Svd(r) => {
            let _ = writeln!(out, "A = U Σ Vᵀ over Q_{} at precision {}, rank {}", r.prime, r.precision, r.rank);
            let _ = writeln!(out, "Σ = {}", vector(&r.sigma));
            matrix(&mut out, "U", &r.u);
            matrix(&mut out, "V", &r.v);
        }
    }
    out
}
