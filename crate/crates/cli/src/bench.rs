//! Seeded sweeps over the call-bound table.

use polyprobe::generate::{random_points_nd, random_polygon, Instance};
use polyprobe::geometry::Point;
use polyprobe::oracle::VertexListOracle;
use polyprobe::reconstruct::{
    reconstruct_1d, reconstruct_2d, reconstruct_nd_nf2, reconstruct_nd_nf3, reconstruct_nf1, Algorithm,
    InitializationScheme, ReconstructError, ReconstructionReport, VertexBudget,
};
use polyprobe::verify::{audit_calls, AuditRow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::ops::RangeInclusive;

/// One table row: an algorithm, a dimension, a vertex count and a budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowSpec {
    pub algorithm: Algorithm,
    pub dimension: usize,
    pub n_v: usize,
    pub budget: VertexBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowSummary {
    pub algorithm: String,
    pub dimension: usize,
    pub n_v: usize,
    pub budget: String,
    pub bound_expr: String,
    pub bound: usize,
    pub instances: usize,
    pub max_calls: usize,
    pub mean_calls: f64,
    pub exact_recovery_rate: f64,
    pub audit_pass_rate: f64,
}

/// All rows covering dimensions in `dims`.
pub fn rows(dims: RangeInclusive<usize>) -> Vec<RowSpec> {
    let mut out = Vec::new();
    let row = |algorithm, dimension, n_v, budget| RowSpec {
        algorithm,
        dimension,
        n_v,
        budget,
    };
    for n in dims {
        match n {
            0 => {}
            1 => {
                out.push(row(Algorithm::Line, 1, 1, VertexBudget::Finite(1)));
                out.push(row(Algorithm::Line, 1, 1, VertexBudget::Infinite));
                out.push(row(Algorithm::Line, 1, 2, VertexBudget::Infinite));
            }
            _ => {
                if n == 2 {
                    for n_v in 1..=8 {
                        out.push(row(Algorithm::Planar, 2, n_v, VertexBudget::Finite(n_v)));
                        out.push(row(Algorithm::Planar, 2, n_v, VertexBudget::Infinite));
                    }
                }
                out.push(row(Algorithm::SinglePoint, n, 1, VertexBudget::Finite(1)));
                for n_v in 1..=2 {
                    out.push(row(Algorithm::TwoVertex, n, n_v, VertexBudget::Finite(2)));
                }
                for n_v in 1..=3 {
                    out.push(row(Algorithm::ThreeVertex, n, n_v, VertexBudget::Finite(3)));
                }
            }
        }
    }
    out
}

/// A random hidden set matching `row`.
pub fn instance(row: &RowSpec, rng: &mut ChaCha8Rng) -> Instance {
    match row.dimension {
        1 => {
            let lo: i64 = rng.gen_range(-100..=100);
            if row.n_v == 1 {
                let p = Point::from_ints(&[lo]);
                return Instance {
                    points: vec![p.clone()],
                    vertices: vec![p],
                };
            }
            let hi = lo + rng.gen_range(1..=50);
            let mid = Point::from_ints(&[rng.gen_range(lo..=hi)]);
            let vertices = vec![Point::from_ints(&[lo]), Point::from_ints(&[hi])];
            Instance {
                points: vec![vertices[1].clone(), mid, vertices[0].clone()],
                vertices,
            }
        }
        2 if row.algorithm == Algorithm::Planar => random_polygon(rng, row.n_v),
        n => random_points_nd(rng, n, row.n_v),
    }
}

pub fn run_row(row: &RowSpec, oracle: VertexListOracle) -> Result<ReconstructionReport, ReconstructError> {
    match row.algorithm {
        Algorithm::Line => reconstruct_1d(oracle, row.budget),
        Algorithm::Planar => reconstruct_2d(oracle, row.budget, InitializationScheme::StandardTriangle),
        Algorithm::SinglePoint => reconstruct_nf1(oracle),
        Algorithm::TwoVertex => reconstruct_nd_nf2(oracle),
        Algorithm::ThreeVertex => reconstruct_nd_nf3(oracle),
    }
}

/// Per-instance seeds for row number `index`, fixed by the master seed alone.
pub fn instance_seeds(master: u64, index: usize, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index as u64);
    (0..count).map(|_| rng.gen()).collect()
}

struct Outcome {
    calls: usize,
    exact: bool,
    passed: bool,
}

/// Runs `count` instances of every row. Instances run in parallel; results
/// are merged in instance order, so the summary depends only on the seed.
pub fn run_bench(rows: &[RowSpec], count: usize, seed: u64) -> Vec<RowSummary> {
    rows.iter()
        .enumerate()
        .map(|(index, row)| {
            let audit = AuditRow::lookup(row.algorithm, row.dimension, row.n_v, row.budget)
                .expect("every generated row has a bound");
            let outcomes: Vec<Outcome> = instance_seeds(seed, index, count)
                .into_par_iter()
                .map(|s| {
                    let inst = instance(row, &mut ChaCha8Rng::seed_from_u64(s));
                    let oracle = VertexListOracle::new(inst.points).expect("nonempty instance");
                    match run_row(row, oracle) {
                        Ok(report) => Outcome {
                            calls: report.oracle_calls,
                            exact: report.vertices == inst.vertices,
                            passed: audit_calls(&report, &audit).passed(),
                        },
                        Err(_) => Outcome {
                            calls: 0,
                            exact: false,
                            passed: false,
                        },
                    }
                })
                .collect();
            let n = outcomes.len().max(1) as f64;
            RowSummary {
                algorithm: row.algorithm.tag().to_owned(),
                dimension: row.dimension,
                n_v: row.n_v,
                budget: row.budget.to_string(),
                bound_expr: audit.expr.to_string(),
                bound: audit.bound,
                instances: outcomes.len(),
                max_calls: outcomes.iter().map(|o| o.calls).max().unwrap_or(0),
                mean_calls: outcomes.iter().map(|o| o.calls as f64).sum::<f64>() / n,
                exact_recovery_rate: outcomes.iter().filter(|o| o.exact).count() as f64 / n,
                audit_pass_rate: outcomes.iter().filter(|o| o.passed).count() as f64 / n,
            }
        })
        .collect()
}

/// Fixed-width text table of a bench run.
pub fn format_table(rows: &[RowSummary]) -> String {
    let mut out = format!(
        "{:<4} {:>3} {:>3} {:>8} {:>7} {:>5} {:>5} {:>9} {:>6} {:>6}\n",
        "alg", "n", "n_v", "budget", "expr", "bound", "max", "mean", "exact", "audit"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<4} {:>3} {:>3} {:>8} {:>7} {:>5} {:>5} {:>9.3} {:>6.3} {:>6.3}\n",
            r.algorithm,
            r.dimension,
            r.n_v,
            r.budget,
            r.bound_expr,
            r.bound,
            r.max_calls,
            r.mean_calls,
            r.exact_recovery_rate,
            r.audit_pass_rate
        ));
    }
    out
}

/// Parses `a..b`, `a..=b`, `a-b` or a single dimension.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("invalid dimension range {text:?} (expected e.g. 2..8)");
    let (lo, hi) = if let Some((a, b)) = text.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = text.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = text.split_once('-') {
        (a, b)
    } else {
        (text, text)
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}
