//! Exact recovery of a polytope's vertices from its support function.
//!
//! A hidden convex polytope `X = conv{v¹, …, vᵐ}` is only accessible through
//! `D(d) = max vᵀd`. The procedures in [`reconstruct`] choose directions
//! adaptively and return the vertex set using exact rational arithmetic.
//!
//! ```
//! use polyprobe::geometry::Point;
//! use polyprobe::oracle::VertexListOracle;
//! use polyprobe::reconstruct::{reconstruct_2d, InitializationScheme, VertexBudget};
//!
//! let tri: Vec<Point> = [[0, 0], [4, 0], [1, 3]].iter().map(|p| Point::from_ints(p)).collect();
//! let oracle = VertexListOracle::new(tri).unwrap();
//! let report = reconstruct_2d(oracle, VertexBudget::Finite(3), InitializationScheme::StandardTriangle).unwrap();
//! assert_eq!(report.vertices.len(), 3);
//! assert!(report.oracle_calls <= 9);
//! ```

pub mod generate;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod reconstruct;
pub mod scalar;
pub mod verify;

pub use scalar::Scalar;
