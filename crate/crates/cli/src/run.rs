//! Algorithm selection, noisy wrapping, and the JSON run summary.

use crate::problem::{to_q, AlgorithmChoice, Q};
use polyprobe::oracle::{NoisyOracle, SupportOracle};
use polyprobe::reconstruct::{
    reconstruct_1d, reconstruct_2d_with, reconstruct_nd_nf2, reconstruct_nd_nf3, reconstruct_nf1, Algorithm,
    InitializationScheme, PlanarOptions, ReconstructError, ReconstructionReport, VertexBudget,
};
use polyprobe::verify::{audit_calls, AuditRow};
use polyprobe::Scalar;
use serde::Serialize;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => EXIT_INPUT,
            RunError::Reconstruct(e) => match e {
                ReconstructError::InconsistentOracle { .. } | ReconstructError::SingularLift(_) => EXIT_INCONSISTENT,
                ReconstructError::BudgetExhausted { .. } => EXIT_BUDGET,
                ReconstructError::Oracle(_)
                | ReconstructError::InvalidInitialization(_)
                | ReconstructError::UnsupportedDimension { .. } => EXIT_INPUT,
            },
        }
    }
}

/// Picks the procedure for a `(dimension, budget)` pair, returning the budget
/// it actually assumes. The Rⁿ procedures take their vertex bound from their
/// name, so an explicit choice of one overrides an infinite budget.
pub fn resolve_algorithm(
    choice: AlgorithmChoice,
    dimension: usize,
    budget: VertexBudget,
) -> Result<(Algorithm, VertexBudget), RunError> {
    let algorithm = match choice {
        AlgorithmChoice::Fixed(a) => a,
        AlgorithmChoice::Auto => match (dimension, budget) {
            (1, _) => Algorithm::Line,
            (2, _) => Algorithm::Planar,
            (_, VertexBudget::Finite(1)) => Algorithm::SinglePoint,
            (_, VertexBudget::Finite(2)) => Algorithm::TwoVertex,
            (_, VertexBudget::Finite(3)) => Algorithm::ThreeVertex,
            _ => {
                return Err(RunError::Input(format!(
                    "no procedure for R^{dimension} with vertex budget {budget}: recovering more than \
                     three vertices in three or more dimensions is an open problem"
                )))
            }
        },
    };
    let needed = match algorithm {
        Algorithm::Line | Algorithm::Planar => None,
        Algorithm::SinglePoint => Some(1),
        Algorithm::TwoVertex => Some(2),
        Algorithm::ThreeVertex => Some(3),
    };
    match needed {
        Some(k) if matches!(budget, VertexBudget::Finite(b) if b > k) => Err(RunError::Input(format!(
            "{algorithm} handles at most {k} vertices, but the budget is {budget}"
        ))),
        Some(k) => Ok((algorithm, VertexBudget::Finite(k))),
        None => Ok((algorithm, budget)),
    }
}

/// Runs `algorithm`, optionally through a seeded noisy wrapper.
/// `early_stop` only affects planar runs.
pub fn execute(
    oracle: Box<dyn SupportOracle + Send>,
    algorithm: Algorithm,
    budget: VertexBudget,
    init: &InitializationScheme,
    early_stop: bool,
    noise: Option<(Scalar, u64)>,
) -> Result<ReconstructionReport, RunError> {
    let oracle: Box<dyn SupportOracle + Send> = match noise {
        Some((eps, seed)) => Box::new(NoisyOracle::new(oracle, eps, seed).map_err(|e| RunError::Input(e.to_string()))?),
        None => oracle,
    };
    Ok(match algorithm {
        Algorithm::Line => reconstruct_1d(oracle, budget)?,
        Algorithm::Planar => {
            let mut opts = PlanarOptions::new(budget, init.clone());
            opts.early_stop = early_stop;
            reconstruct_2d_with(oracle, &opts)?
        }
        Algorithm::SinglePoint => reconstruct_nf1(oracle)?,
        Algorithm::TwoVertex => reconstruct_nd_nf2(oracle)?,
        Algorithm::ThreeVertex => reconstruct_nd_nf3(oracle)?,
    })
}

/// The call bound that applies to a finished run, if the table has a row.
pub fn bound_row(report: &ReconstructionReport, budget: VertexBudget, init: &InitializationScheme) -> Option<AuditRow> {
    let row = AuditRow::lookup(report.algorithm, report.dimension, report.vertices.len(), budget)?;
    Some(match (report.algorithm, init) {
        (Algorithm::Planar, InitializationScheme::CustomPositiveSpanning(d)) => row.with_initialization_size(d.len()),
        // Four initial calls are already inside 3n_v + 1 once n_v >= 2.
        (Algorithm::Planar, InitializationScheme::AxisRectangle) if report.vertices.len() == 1 => {
            row.with_initialization_size(4)
        }
        _ => row,
    })
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub algorithm: String,
    pub dimension: usize,
    pub vertices: Vec<Vec<Q>>,
    pub oracle_calls: usize,
    pub bound: Option<usize>,
    pub bound_expr: Option<String>,
    pub audit: &'static str,
}

impl RunSummary {
    pub fn new(report: &ReconstructionReport, budget: VertexBudget, init: &InitializationScheme) -> Self {
        let row = bound_row(report, budget, init);
        let audit = match &row {
            Some(r) if audit_calls(report, r).passed() => "pass",
            Some(_) => "fail",
            None => "n/a",
        };
        Self {
            algorithm: report.algorithm.tag().to_owned(),
            dimension: report.dimension,
            vertices: report.vertices.iter().map(|v| to_q(v.coords())).collect(),
            oracle_calls: report.oracle_calls,
            bound: row.as_ref().map(|r| r.bound),
            bound_expr: row.as_ref().map(|r| r.expr.to_string()),
            audit,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_dispatch() {
        let auto = AlgorithmChoice::Auto;
        let f = VertexBudget::Finite;
        assert_eq!(resolve_algorithm(auto, 1, f(5)).unwrap(), (Algorithm::Line, f(5)));
        assert_eq!(
            resolve_algorithm(auto, 2, VertexBudget::Infinite).unwrap(),
            (Algorithm::Planar, VertexBudget::Infinite)
        );
        assert_eq!(resolve_algorithm(auto, 5, f(1)).unwrap().0, Algorithm::SinglePoint);
        assert_eq!(resolve_algorithm(auto, 5, f(2)).unwrap().0, Algorithm::TwoVertex);
        assert_eq!(resolve_algorithm(auto, 5, f(3)).unwrap().0, Algorithm::ThreeVertex);
        let err = resolve_algorithm(auto, 3, f(4)).unwrap_err();
        assert!(err.to_string().contains("open problem"));
        assert_eq!(err.exit_code(), EXIT_INPUT);
        assert!(resolve_algorithm(auto, 3, VertexBudget::Infinite).is_err());
    }

    #[test]
    fn fixed_algorithm_needs_matching_budget() {
        let nf2 = AlgorithmChoice::Fixed(Algorithm::TwoVertex);
        assert!(resolve_algorithm(nf2, 4, VertexBudget::Finite(1)).is_ok());
        assert!(resolve_algorithm(nf2, 4, VertexBudget::Finite(3)).is_err());
        assert_eq!(
            resolve_algorithm(nf2, 4, VertexBudget::Infinite).unwrap(),
            (Algorithm::TwoVertex, VertexBudget::Finite(2))
        );
    }

    #[test]
    fn exit_codes() {
        let e = RunError::from(ReconstructError::BudgetExhausted { budget: 2, calls: 4 });
        assert_eq!(e.exit_code(), EXIT_BUDGET);
        let e = RunError::from(ReconstructError::InconsistentOracle {
            call: 4,
            reason: String::new(),
        });
        assert_eq!(e.exit_code(), EXIT_INCONSISTENT);
    }
}
