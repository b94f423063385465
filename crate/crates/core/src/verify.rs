//! Ground-truth checks that do not go through any reconstruction algorithm:
//! vertex-set canonicalization, support equivalence, and call-count audits.

use crate::geometry::{Direction, Point};
use crate::linalg::solve_linear;
use crate::reconstruct::{Algorithm, ReconstructionReport, VertexBudget};
use crate::scalar::Scalar;
use num_traits::{One, Signed};
use std::fmt;

/// Extreme points of `conv(points)`, deduplicated and sorted lexicographically.
///
/// A point is dropped iff it is a convex combination of the others. By
/// Carathéodory it suffices to try affinely independent subsets of size at
/// most `n + 1`, each of which has unique barycentric weights.
pub fn canonical_vertices_nd(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    let dim = pts[0].dim();
    assert!(pts.iter().all(|p| p.dim() == dim), "mixed dimensions");
    let keep: Vec<bool> = (0..pts.len())
        .map(|i| {
            let others: Vec<&Point> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p)
                .collect();
            !in_hull_of(&pts[i], &others, dim)
        })
        .collect();
    pts.into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

fn in_hull_of(target: &Point, others: &[&Point], dim: usize) -> bool {
    let max_size = others.len().min(dim + 1);
    (2..=max_size).any(|size| {
        subsets(others.len(), size).any(|idx| {
            // Columns are the chosen points with a trailing 1 for the weights' sum.
            let mut rows: Vec<Vec<Scalar>> = (0..dim)
                .map(|r| idx.iter().map(|&j| others[j][r].clone()).collect())
                .collect();
            rows.push(vec![Scalar::one(); size]);
            let mut rhs: Vec<Scalar> = target.coords().to_vec();
            rhs.push(Scalar::one());
            match solve_linear(&rows, &rhs).solution() {
                Some(sol) if sol.is_unique() => sol.particular.iter().all(|w| !w.is_negative()),
                _ => false,
            }
        })
    })
}

fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = {
            let mut c = out.clone();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if c[i] < n - k + i {
                    c[i] += 1;
                    for j in i + 1..k {
                        c[j] = c[j - 1] + 1;
                    }
                    break Some(c);
                }
            }
        };
        current = next;
        Some(out)
    })
}

/// `max_{a∈A} aᵀd = max_{b∈B} bᵀd` for every listed direction.
pub fn support_equivalent(a: &[Point], b: &[Point], directions: &[Direction]) -> bool {
    let support = |set: &[Point], d: &Direction| set.iter().map(|p| d.eval(p)).max();
    directions.iter().all(|d| support(a, d) == support(b, d))
}

/// Linear bound `n_coeff·n + nv_coeff·n_v + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundExpr {
    pub n_coeff: i64,
    pub nv_coeff: i64,
    pub constant: i64,
}

impl BoundExpr {
    pub fn eval(&self, n: usize, n_v: usize) -> usize {
        let v = self.n_coeff * n as i64 + self.nv_coeff * n_v as i64 + self.constant;
        usize::try_from(v).expect("call bounds are nonnegative")
    }

    fn parse(text: &str) -> Option<Self> {
        let mut expr = BoundExpr {
            n_coeff: 0,
            nv_coeff: 0,
            constant: 0,
        };
        let normalized = text.replace('-', "+-");
        for term in normalized.split('+').filter(|t| !t.is_empty()) {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term),
            };
            let split = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
            let (digits, var) = body.split_at(split);
            let coeff = if digits.is_empty() { 1 } else { digits.parse::<i64>().ok()? } * sign;
            match var {
                "" => expr.constant += coeff,
                "n" => expr.n_coeff += coeff,
                "nv" => expr.nv_coeff += coeff,
                _ => return None,
            }
        }
        Some(expr)
    }
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (c, var) in [(self.n_coeff, "n"), (self.nv_coeff, "n_v")] {
            match c {
                0 => {}
                1 => parts.push(var.to_string()),
                _ => parts.push(format!("{c}{var}")),
            }
        }
        let mut s = parts.join(" + ");
        if self.constant != 0 || s.is_empty() {
            if s.is_empty() {
                s = self.constant.to_string();
            } else if self.constant > 0 {
                s = format!("{s} + {}", self.constant);
            } else {
                s = format!("{s} - {}", -self.constant);
            }
        }
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum BudgetRule {
    Exactly(usize),
    AtLeast(usize),
    EqualsVertexCount,
    ExceedsVertexCount,
    Any,
}

impl BudgetRule {
    fn parse(text: &str) -> Option<Self> {
        Some(match text {
            "*" => Self::Any,
            "=nv" => Self::EqualsVertexCount,
            ">nv" => Self::ExceedsVertexCount,
            _ => match text.strip_prefix(">=") {
                Some(k) => Self::AtLeast(k.parse().ok()?),
                None => Self::Exactly(text.parse().ok()?),
            },
        })
    }

    fn matches(&self, budget: VertexBudget, n_v: usize) -> bool {
        match (self, budget) {
            (Self::Any, _) => true,
            (Self::Exactly(k), VertexBudget::Finite(b)) => b == *k,
            (Self::AtLeast(k), VertexBudget::Finite(b)) => b >= *k,
            (Self::AtLeast(_), VertexBudget::Infinite) => true,
            (Self::EqualsVertexCount, VertexBudget::Finite(b)) => b == n_v,
            (Self::ExceedsVertexCount, VertexBudget::Finite(b)) => b > n_v,
            (Self::ExceedsVertexCount, VertexBudget::Infinite) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct TableRow {
    algorithm: Algorithm,
    budget: BudgetRule,
    n_v: Option<usize>,
    bound: BoundExpr,
    source: String,
}

const CALL_BOUNDS: &str = include_str!("../data/call_bounds.tsv");

fn table() -> Vec<TableRow> {
    CALL_BOUNDS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            assert_eq!(cols.len(), 5, "malformed call-bound row {line:?}");
            TableRow {
                algorithm: cols[0].parse().unwrap_or_else(|_| panic!("bad algorithm in {line:?}")),
                budget: BudgetRule::parse(cols[1]).unwrap_or_else(|| panic!("bad budget in {line:?}")),
                n_v: (cols[2] != "*")
                    .then(|| cols[2].parse().unwrap_or_else(|_| panic!("bad n_v in {line:?}"))),
                bound: BoundExpr::parse(cols[3]).unwrap_or_else(|| panic!("bad bound in {line:?}")),
                source: cols[4].to_string(),
            }
        })
        .collect()
}

/// The worst-case call count that applies to one run configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub algorithm: Algorithm,
    pub dimension: usize,
    pub n_v: usize,
    pub budget: VertexBudget,
    pub expr: BoundExpr,
    /// Extra calls allowed for initialization sets larger than three directions.
    pub init_overhead: usize,
    pub bound: usize,
    pub source: String,
}

impl AuditRow {
    /// Looks up the bound table; `None` if the configuration has no row.
    pub fn lookup(algorithm: Algorithm, dimension: usize, n_v: usize, budget: VertexBudget) -> Option<Self> {
        table()
            .into_iter()
            .find(|r| {
                r.algorithm == algorithm
                    && r.n_v.is_none_or(|k| k == n_v)
                    && r.budget.matches(budget, n_v)
            })
            .map(|r| AuditRow {
                algorithm,
                dimension,
                n_v,
                budget,
                bound: r.bound.eval(dimension, n_v),
                expr: r.bound,
                init_overhead: 0,
                source: r.source,
            })
    }

    /// Relaxes the bound for a planar run initialized with `m` directions:
    /// up to `m - 3` initialization calls may be wasted.
    pub fn with_initialization_size(mut self, m: usize) -> Self {
        let extra = m.saturating_sub(3);
        self.bound = self.bound - self.init_overhead + extra;
        self.init_overhead = extra;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditOutcome {
    Pass { calls: usize, bound: usize },
    Fail { calls: usize, bound: usize, source: String },
}

impl AuditOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AuditOutcome::Pass { .. })
    }

    pub fn bound(&self) -> usize {
        match self {
            AuditOutcome::Pass { bound, .. } | AuditOutcome::Fail { bound, .. } => *bound,
        }
    }
}

pub fn audit_calls(report: &ReconstructionReport, row: &AuditRow) -> AuditOutcome {
    audit_count(report.oracle_calls, row)
}

pub fn audit_count(calls: usize, row: &AuditRow) -> AuditOutcome {
    if calls <= row.bound {
        AuditOutcome::Pass {
            calls,
            bound: row.bound,
        }
    } else {
        AuditOutcome::Fail {
            calls,
            bound: row.bound,
            source: row.source.clone(),
        }
    }
}
