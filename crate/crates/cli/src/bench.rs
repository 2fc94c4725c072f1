//! Random point set benchmarks written as CSV rows.

use std::time::Instant;

use anyhow::{bail, Result};
use ote_core::corpus::random_points;
use ote_core::encoder::{encode_points, EncodeOptions};
use ote_decoder::Encoding;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::input::Input;
use crate::verify::{sample_triple, verify, Coverage};

/// One CSV row; columns appear in field order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: u64,
    pub mode: String,
    pub r: u64,
    pub t: u64,
    pub seed: u64,
    pub encode_ms: f64,
    pub bits_total: u64,
    /// `name=bits` pairs joined by `;`.
    pub bits_per_section: String,
    pub mean_query_steps: f64,
    pub max_query_steps: u64,
    pub queries_per_second: f64,
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub sizes: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    pub r: u64,
    pub t: Option<u64>,
    pub queries: u64,
    pub verify_samples: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { sizes: vec![256, 512, 1024], trials: 1, seed: 1, r: 4, t: None, queries: 2000, verify_samples: 2000 }
    }
}

/// Seed of the `trial`-th set of size `n`; points and cutting both use it.
pub fn row_seed(base: u64, n: u64, trial: u64) -> u64 {
    base.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (n << 20) ^ trial
}

pub fn bench_one(n: u64, seed: u64, opts: &BenchOptions) -> Result<BenchRecord> {
    if n < 8 {
        bail!("bench sizes must be at least 8, got {n}");
    }
    let points = random_points(n as usize, seed);
    let enc_opts = EncodeOptions { r: opts.r, t: opts.t, seed, ..EncodeOptions::default() };
    let start = Instant::now();
    let bytes = encode_points(&points, &enc_opts)?;
    let encode_ms = start.elapsed().as_secs_f64() * 1e3;

    let report = verify(&Input::Points(points), &bytes, Coverage::Samples { count: opts.verify_samples, seed })?;
    if !report.pass() {
        bail!("n = {n}, seed = {seed}: {} sampled triples decode wrongly", report.mismatches.len());
    }

    let enc = Encoding::parse(&bytes)?;
    let stats = enc.stats()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51);
    let triples: Vec<_> = (0..opts.queries.max(1)).map(|_| sample_triple(&mut rng, n as usize)).collect();
    let mut steps = Vec::with_capacity(triples.len());
    for &(a, b, c) in &triples {
        steps.push(enc.query_traced(a as u64, b as u64, c as u64)?.1.step_count() as u64);
    }
    let start = Instant::now();
    for &(a, b, c) in &triples {
        std::hint::black_box(enc.query(a as u64, b as u64, c as u64)?);
    }
    let secs = start.elapsed().as_secs_f64().max(1e-9);

    Ok(BenchRecord {
        n,
        mode: stats.mode.name().to_string(),
        r: stats.r,
        t: stats.t,
        seed,
        encode_ms,
        bits_total: stats.total_bits,
        bits_per_section: stats.sections.iter().map(|s| format!("{}={}", s.name, s.bits)).collect::<Vec<_>>().join(";"),
        mean_query_steps: steps.iter().sum::<u64>() as f64 / steps.len() as f64,
        max_query_steps: steps.iter().copied().max().unwrap_or(0),
        queries_per_second: triples.len() as f64 / secs,
    })
}

/// Rows ordered by size, then trial. Sizes run one after another so
/// encode times are not skewed by sharing cores.
pub fn bench(opts: &BenchOptions) -> Result<Vec<BenchRecord>> {
    let mut rows = Vec::new();
    for &n in &opts.sizes {
        for trial in 0..opts.trials {
            rows.push(bench_one(n, row_seed(opts.seed, n, trial), opts)?);
        }
    }
    Ok(rows)
}

pub fn write_csv<W: std::io::Write>(rows: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<_> = [2.0f64, 4.0, 8.0, 16.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
        assert!((loglog_slope(&pts) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_header_matches_fields() {
        let opts = BenchOptions { sizes: vec![16], queries: 50, verify_samples: 50, ..BenchOptions::default() };
        let rows = bench(&opts).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "n,mode,r,t,seed,encode_ms,bits_total,bits_per_section,mean_query_steps,max_query_steps,queries_per_second"
        );
        assert_eq!(text.lines().count(), 2);
        let again = bench(&opts).unwrap();
        assert_eq!((rows[0].bits_total, rows[0].seed), (again[0].bits_total, again[0].seed));
    }
}
