//! Problem files: the hidden polytope plus run settings, as JSON.
//!
//! Every rational is written as a JSON integer, an exact decimal, or a
//! `"p/q"` string. Nothing passes through floating point.

use polyprobe::geometry::{Direction, Point};
use polyprobe::oracle::{AffinePiece, FiniteMaxOracle, SupportOracle, VertexListOracle};
use polyprobe::reconstruct::{Algorithm, InitializationScheme, VertexBudget};
use polyprobe::scalar::{format_scalar, parse_scalar};
use polyprobe::Scalar;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// An exact rational as it appears in JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Scalar);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            let n = serde_json::Number::from_str(&format_scalar(&self.0)).map_err(serde::ser::Error::custom)?;
            n.serialize(s)
        } else {
            s.serialize_str(&format_scalar(&self.0))
        }
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => return Err(D::Error::custom(format!("expected a rational, found {other}"))),
        };
        parse_scalar(&text).map(Q).map_err(D::Error::custom)
    }
}

pub fn to_q(coords: &[Scalar]) -> Vec<Q> {
    coords.iter().cloned().map(Q).collect()
}

fn from_q(coords: &[Q]) -> Vec<Scalar> {
    coords.iter().map(|q| q.0.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Vertices,
    FiniteMax,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSpec {
    pub gradient: Vec<Q>,
    pub offset: Q,
}

/// `"auto"` or one of the algorithm tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlgorithmChoice {
    #[default]
    Auto,
    Fixed(Algorithm),
}

impl FromStr for AlgorithmChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            other => other.parse().map(Self::Fixed),
        }
    }
}

impl fmt::Display for AlgorithmChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Auto => f.write_str("auto"),
            Self::Fixed(a) => a.fmt(f),
        }
    }
}

impl Serialize for AlgorithmChoice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AlgorithmChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Integer budget or `"infinity"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetSpec(pub VertexBudget);

impl Default for BudgetSpec {
    fn default() -> Self {
        Self(VertexBudget::Infinite)
    }
}

impl Serialize for BudgetSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            VertexBudget::Finite(k) => s.serialize_u64(k as u64),
            VertexBudget::Infinite => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for BudgetSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => return Err(D::Error::custom(format!("expected a budget, found {other}"))),
        };
        text.parse().map(Self).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum InitSpec {
    #[default]
    StandardTriangle,
    AxisRectangle,
    Custom(Vec<Vec<Q>>),
}

impl InitSpec {
    pub fn scheme(&self) -> InitializationScheme {
        match self {
            Self::StandardTriangle => InitializationScheme::StandardTriangle,
            Self::AxisRectangle => InitializationScheme::AxisRectangle,
            Self::Custom(dirs) => InitializationScheme::CustomPositiveSpanning(
                dirs.iter().map(|d| Direction::new(from_q(d))).collect(),
            ),
        }
    }
}

impl FromStr for InitSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper-triangle" => Ok(Self::StandardTriangle),
            "axis-rectangle" => Ok(Self::AxisRectangle),
            other => Err(format!(
                "unknown initialization {other:?} (expected paper-triangle or axis-rectangle)"
            )),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum InitRepr {
    Named(String),
    Custom { custom: Vec<Vec<Q>> },
}

impl Serialize for InitSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::StandardTriangle => InitRepr::Named("paper-triangle".into()),
            Self::AxisRectangle => InitRepr::Named("axis-rectangle".into()),
            Self::Custom(d) => InitRepr::Custom { custom: d.clone() },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InitSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match InitRepr::deserialize(d)? {
            InitRepr::Named(name) => name.parse().map_err(D::Error::custom),
            InitRepr::Custom { custom } => Ok(Self::Custom(custom)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub kind: Kind,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceSpec>>,
    #[serde(default)]
    pub budget: BudgetSpec,
    #[serde(default)]
    pub algorithm: AlgorithmChoice,
    #[serde(default)]
    pub init: InitSpec,
}

impl ProblemSpec {
    pub fn from_points(points: &[Point], budget: VertexBudget) -> Self {
        Self {
            kind: Kind::Vertices,
            dimension: points.first().map_or(0, Point::dim),
            vertices: Some(points.iter().map(|p| to_q(p.coords())).collect()),
            anchor: None,
            pieces: None,
            budget: BudgetSpec(budget),
            algorithm: AlgorithmChoice::Auto,
            init: InitSpec::StandardTriangle,
        }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let spec: Self = serde_json::from_str(text).map_err(|e| format!("malformed problem file: {e}"))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem specs always serialize")
    }

    /// Checks that the fields match `kind` and every vector has `dimension`
    /// coordinates.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.dimension;
        if n == 0 {
            return Err("dimension must be at least 1".into());
        }
        let check = |what: &str, v: &[Q]| {
            if v.len() == n {
                Ok(())
            } else {
                Err(format!("{what} has {} coordinates, expected {n}", v.len()))
            }
        };
        match self.kind {
            Kind::Vertices => {
                let vs = self.vertices.as_ref().ok_or("kind \"vertices\" needs a \"vertices\" list")?;
                if vs.is_empty() {
                    return Err("vertex list is empty".into());
                }
                if self.anchor.is_some() || self.pieces.is_some() {
                    return Err("kind \"vertices\" does not take \"anchor\" or \"pieces\"".into());
                }
                for (i, v) in vs.iter().enumerate() {
                    check(&format!("vertex {}", i + 1), v)?;
                }
            }
            Kind::FiniteMax => {
                let anchor = self.anchor.as_ref().ok_or("kind \"finite_max\" needs an \"anchor\"")?;
                let pieces = self.pieces.as_ref().ok_or("kind \"finite_max\" needs \"pieces\"")?;
                if pieces.is_empty() {
                    return Err("piece list is empty".into());
                }
                if self.vertices.is_some() {
                    return Err("kind \"finite_max\" does not take \"vertices\"".into());
                }
                check("anchor", anchor)?;
                for (i, p) in pieces.iter().enumerate() {
                    check(&format!("gradient of piece {}", i + 1), &p.gradient)?;
                }
            }
        }
        if let InitSpec::Custom(dirs) = &self.init {
            if n != 2 {
                return Err("custom initialization applies to planar problems only".into());
            }
            for (i, d) in dirs.iter().enumerate() {
                check(&format!("initial direction {}", i + 1), d)?;
            }
        }
        Ok(())
    }

    /// The vertex list for `vertices` problems, the active gradients' extreme
    /// points for `finite_max` ones.
    pub fn hidden_points(&self) -> Vec<Point> {
        match self.kind {
            Kind::Vertices => self
                .vertices
                .iter()
                .flatten()
                .map(|v| Point::new(from_q(v)))
                .collect(),
            Kind::FiniteMax => self.finite_max().subdifferential_vertices(),
        }
    }

    fn finite_max(&self) -> FiniteMaxOracle {
        let pieces = self
            .pieces
            .iter()
            .flatten()
            .map(|p| AffinePiece::new(Point::new(from_q(&p.gradient)), p.offset.0.clone()))
            .collect();
        let anchor = Point::new(from_q(self.anchor.as_deref().unwrap_or_default()));
        FiniteMaxOracle::new(pieces, anchor).expect("validated dimensions")
    }

    /// An exact oracle for the hidden set. Call after [`Self::validate`].
    pub fn oracle(&self) -> Box<dyn SupportOracle + Send> {
        match self.kind {
            Kind::Vertices => Box::new(VertexListOracle::new(self.hidden_points()).expect("validated dimensions")),
            Kind::FiniteMax => Box::new(self.finite_max()),
        }
    }
}
