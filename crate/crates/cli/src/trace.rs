//! Trace files: a run's report with one record per oracle call.

use crate::problem::{to_q, Q};
use polyprobe::geometry::{Direction, Point};
use polyprobe::oracle::SupportOracle;
use polyprobe::reconstruct::{Branch, ReconstructionReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub index: usize,
    pub direction: Vec<Q>,
    pub value: Q,
    pub branch: String,
    pub outer_vertices: Vec<Vec<Q>>,
    pub confirmed_vertices: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub algorithm: String,
    pub dimension: usize,
    pub vertices: Vec<Vec<Q>>,
    pub oracle_calls: usize,
    pub records: Vec<TraceRecord>,
}

fn points(pts: &[Point]) -> Vec<Vec<Q>> {
    pts.iter().map(|p| to_q(p.coords())).collect()
}

pub fn to_points(rows: &[Vec<Q>]) -> Vec<Point> {
    rows.iter()
        .map(|r| Point::new(r.iter().map(|q| q.0.clone()).collect()))
        .collect()
}

impl TraceFile {
    pub fn from_report(report: &ReconstructionReport) -> Self {
        Self {
            algorithm: report.algorithm.tag().to_owned(),
            dimension: report.dimension,
            vertices: points(&report.vertices),
            oracle_calls: report.oracle_calls,
            records: report
                .trace
                .iter()
                .map(|r| TraceRecord {
                    index: r.index,
                    direction: to_q(r.direction.coords()),
                    value: Q(r.value.clone()),
                    branch: r.branch.tag().to_owned(),
                    outer_vertices: points(&r.outer),
                    confirmed_vertices: points(&r.confirmed),
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let trace: Self = serde_json::from_str(text).map_err(|e| format!("malformed trace file: {e}"))?;
        for r in &trace.records {
            r.branch.parse::<Branch>()?;
            if r.direction.len() != trace.dimension {
                return Err(format!("record {} has a direction of the wrong dimension", r.index));
            }
        }
        Ok(trace)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces always serialize")
    }

    /// Re-asks every recorded direction and returns the first record whose
    /// value differs.
    pub fn replay<O: SupportOracle>(&self, oracle: &mut O) -> Result<(), String> {
        for r in &self.records {
            let d = Direction::new(r.direction.iter().map(|q| q.0.clone()).collect());
            let value = oracle.support(&d).map_err(|e| e.to_string())?;
            if value != r.value.0 {
                return Err(format!(
                    "call {} replays to {value}, trace says {}",
                    r.index, r.value.0
                ));
            }
        }
        Ok(())
    }
}
