//! Vertex recovery from support-function probes.
//!
//! | entry point            | space | vertex bound      |
//! |------------------------|-------|-------------------|
//! | [`reconstruct_1d`]     | R¹    | any               |
//! | [`reconstruct_nf1`]    | Rⁿ    | 1                 |
//! | [`reconstruct_2d`]     | R²    | any (or infinite) |
//! | [`reconstruct_nd_nf2`] | Rⁿ    | 2                 |
//! | [`reconstruct_nd_nf3`] | Rⁿ    | 3                 |
//!
//! Every entry point counts its own oracle calls and returns a
//! [`ReconstructionReport`] with the recovered vertices in lexicographic order.

mod lifting;
mod line;
mod planar;

pub use lifting::{reconstruct_nd_nf2, reconstruct_nd_nf3};
pub use line::{reconstruct_1d, reconstruct_nf1};
pub use planar::{
    reconstruct_2d, reconstruct_2d_with, InitializationScheme, PlanarOptions, ProbeState2D,
    StepOutcome, DEFAULT_UNBOUNDED_PROBE_CAP,
};

use crate::geometry::{Direction, Point};
use crate::oracle::{CountingOracle, OracleError, SupportOracle};
use crate::scalar::Scalar;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Known upper bound on the number of hidden vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexBudget {
    Finite(usize),
    Infinite,
}

impl VertexBudget {
    pub fn finite(self) -> Option<usize> {
        match self {
            VertexBudget::Finite(k) => Some(k),
            VertexBudget::Infinite => None,
        }
    }

    /// Whether `count` vertices already exhaust the budget.
    pub fn reached(self, count: usize) -> bool {
        matches!(self, VertexBudget::Finite(k) if count >= k)
    }
}

impl fmt::Display for VertexBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexBudget::Finite(k) => write!(f, "{k}"),
            VertexBudget::Infinite => f.write_str("infinity"),
        }
    }
}

impl FromStr for VertexBudget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(VertexBudget::Infinite),
            other => match other.parse::<usize>() {
                Ok(0) => Err("vertex budget must be at least 1".into()),
                Ok(k) => Ok(VertexBudget::Finite(k)),
                Err(_) => Err(format!("invalid vertex budget {other:?}")),
            },
        }
    }
}

/// The reconstruction procedures, named by their short CLI tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// `r1`: the interval case.
    Line,
    /// `r2`: planar probing with outer/inner polygons.
    Planar,
    /// `nf1`: one vertex in Rⁿ.
    SinglePoint,
    /// `nf2`: at most two vertices in Rⁿ.
    TwoVertex,
    /// `nf3`: at most three vertices in Rⁿ.
    ThreeVertex,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Line => "r1",
            Algorithm::Planar => "r2",
            Algorithm::SinglePoint => "nf1",
            Algorithm::TwoVertex => "nf2",
            Algorithm::ThreeVertex => "nf3",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "r1" => Algorithm::Line,
            "r2" => Algorithm::Planar,
            "nf1" => Algorithm::SinglePoint,
            "nf2" => Algorithm::TwoVertex,
            "nf3" => Algorithm::ThreeVertex,
            _ => return Err(format!("unknown algorithm {s:?}")),
        })
    }
}

/// Why an oracle call was made, or what it decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Initialization probe of the outer approximation.
    Init,
    /// Coordinate bound probe (`u = D(e)`, `ℓ = -D(-e)`).
    Bound,
    /// The probed middle vertex `b` is a true vertex.
    ConfirmB,
    /// The neighbours `a` and `c` are true vertices and `b` is cut away.
    ConfirmAc,
    /// The probe line cut `b` off, creating two new candidate vertices.
    Split,
    /// Pairing probe that decides which bound goes with which endpoint.
    Pair,
    CaseI,
    /// Probe of the planar sub-problem for a two-vertex projection.
    CaseII,
    /// Height probe for a three-vertex projection.
    CaseIII,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::Init => "init",
            Branch::Bound => "bound",
            Branch::ConfirmB => "confirm-b",
            Branch::ConfirmAc => "confirm-ac",
            Branch::Split => "split",
            Branch::Pair => "pair",
            Branch::CaseI => "case-I",
            Branch::CaseII => "case-II",
            Branch::CaseIII => "case-III",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Branch::Init,
            Branch::Bound,
            Branch::ConfirmB,
            Branch::ConfirmAc,
            Branch::Split,
            Branch::Pair,
            Branch::CaseI,
            Branch::CaseII,
            Branch::CaseIII,
        ]
        .into_iter()
        .find(|b| b.tag() == s)
        .ok_or_else(|| format!("unknown branch {s:?}"))
    }
}

/// One oracle call with the state it left behind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeRecord {
    /// 1-based call number within the run.
    pub index: usize,
    pub direction: Direction,
    pub value: Scalar,
    pub branch: Branch,
    /// Candidate vertices after the call (outer polygon for planar runs,
    /// current lifted candidates otherwise). Empty while still initializing.
    pub outer: Vec<Point>,
    /// Vertices certified so far.
    pub confirmed: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionReport {
    pub algorithm: Algorithm,
    pub dimension: usize,
    /// Recovered vertex set in lexicographic order.
    pub vertices: Vec<Point>,
    pub oracle_calls: usize,
    pub trace: Vec<ProbeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("oracle inconsistent with an exact support function at call {call}: {reason}")]
    InconsistentOracle { call: usize, reason: String },
    #[error("more than {budget} vertices detected after {calls} calls: the vertex budget is too small")]
    BudgetExhausted { budget: usize, calls: usize },
    #[error("cannot lift three projected vertices: {0}")]
    SingularLift(String),
    #[error("invalid initialization: {0}")]
    InvalidInitialization(String),
    #[error("algorithm {algorithm} does not apply to dimension {dimension}")]
    UnsupportedDimension { algorithm: Algorithm, dimension: usize },
}

impl ReconstructError {
    pub(crate) fn inconsistent(call: usize, reason: impl Into<String>) -> Self {
        ReconstructError::InconsistentOracle {
            call,
            reason: reason.into(),
        }
    }

    /// Shifts call numbers of a sub-run into the caller's numbering.
    pub(crate) fn offset_calls(self, by: usize) -> Self {
        match self {
            ReconstructError::InconsistentOracle { call, reason } => {
                ReconstructError::InconsistentOracle {
                    call: call + by,
                    reason,
                }
            }
            ReconstructError::BudgetExhausted { budget, calls } => ReconstructError::BudgetExhausted {
                budget,
                calls: calls + by,
            },
            other => other,
        }
    }
}

/// Counting wrapper plus trace buffer shared by the algorithms.
pub(crate) struct Probe<O> {
    oracle: CountingOracle<O>,
    trace: Vec<ProbeRecord>,
}

impl<O: SupportOracle> Probe<O> {
    pub(crate) fn new(oracle: O) -> Self {
        Self {
            oracle: CountingOracle::new(oracle),
            trace: Vec::new(),
        }
    }

    pub(crate) fn calls(&self) -> usize {
        self.oracle.count()
    }

    pub(crate) fn dimension(&self) -> usize {
        self.oracle.dimension()
    }

    pub(crate) fn query(&mut self, d: &Direction) -> Result<Scalar, ReconstructError> {
        Ok(self.oracle.support(d)?)
    }

    /// Records the most recent call.
    pub(crate) fn record(&mut self, branch: Branch, outer: Vec<Point>, confirmed: Vec<Point>) {
        let (direction, value) = self.oracle.log().last().cloned().expect("a call was made");
        self.trace.push(ProbeRecord {
            index: self.oracle.count(),
            direction,
            value,
            branch,
            outer,
            confirmed,
        });
    }

    pub(crate) fn oracle_mut(&mut self) -> &mut CountingOracle<O> {
        &mut self.oracle
    }

    pub(crate) fn trace_mut(&mut self) -> &mut Vec<ProbeRecord> {
        &mut self.trace
    }

    pub(crate) fn push_record(&mut self, record: ProbeRecord) {
        self.trace.push(record);
    }

    pub(crate) fn finish(self, algorithm: Algorithm, mut vertices: Vec<Point>) -> ReconstructionReport {
        vertices.sort();
        vertices.dedup();
        let dimension = self.oracle.dimension();
        ReconstructionReport {
            algorithm,
            dimension,
            vertices,
            oracle_calls: self.oracle.count(),
            trace: self.trace,
        }
    }
}

pub(crate) fn require_dimension(
    algorithm: Algorithm,
    dimension: usize,
    ok: bool,
) -> Result<(), ReconstructError> {
    if ok {
        Ok(())
    } else {
        Err(ReconstructError::UnsupportedDimension {
            algorithm,
            dimension,
        })
    }
}
