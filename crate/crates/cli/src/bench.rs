//! Iterative-versus-classical eigensolver timing harness behind
//! `--mode bench`. Each row times one solver on one random matrix with a
//! square-free, fully split residue characteristic polynomial.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use padic_tnf::eigen::{block_schur_form, classical_eigen, eigvecs};
use padic_tnf::random::{split_matrix, to_padic_matrix};
use padic_tnf::Result;

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub prime: u64,
    pub precision: i64,
    pub sizes: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub solver: String,
    pub n: usize,
    pub prime: u64,
    pub precision: i64,
    pub sample: usize,
    pub seconds: f64,
    pub pairs: usize,
    /// Smallest residual valuation over the returned eigenpairs (or of the
    /// Schur identity).
    pub min_residual: i64,
}

pub fn run(opts: &BenchOptions) -> Result<Vec<BenchRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut rows = Vec::new();
    for &n in &opts.sizes {
        for sample in 0..opts.samples {
            let (a, _) = split_matrix(&mut rng, opts.prime, n)?;
            let a = to_padic_matrix(opts.prime, opts.precision, &a);
            let row = |solver: &str, seconds: f64, pairs: usize, min_residual: i64| BenchRow {
                solver: solver.to_string(),
                n,
                prime: opts.prime,
                precision: opts.precision,
                sample,
                seconds,
                pairs,
                min_residual,
            };

            let t = Instant::now();
            let d = eigvecs(&a, opts.precision)?;
            let dt = t.elapsed().as_secs_f64();
            rows.push(row("iterative", dt, d.pairs.len(), d.min_residual().unwrap_or(i64::MAX)));

            let t = Instant::now();
            let d = classical_eigen(&a, opts.precision)?;
            let dt = t.elapsed().as_secs_f64();
            rows.push(row("classical", dt, d.pairs.len(), d.min_residual().unwrap_or(i64::MAX)));

            let t = Instant::now();
            let s = block_schur_form(&a, opts.precision)?;
            let dt = t.elapsed().as_secs_f64();
            rows.push(row("schur", dt, s.blocks.len(), s.residual_valuation));
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> std::result::Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
