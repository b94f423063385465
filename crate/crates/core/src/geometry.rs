//! Points, probe directions, halfspaces and the planar polygon kernel.

use crate::scalar::{int, Scalar};
use num_traits::{Signed, Zero};
use std::fmt;
use std::ops::Index;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("normal vector is zero")]
    ZeroNormal,
    #[error("halfspaces do not bound a compact region (normals do not positively span the plane)")]
    Unbounded,
    #[error("halfspaces have empty intersection")]
    EmptyIntersection,
    #[error("points are degenerate: {0}")]
    DegenerateTriple(&'static str),
}

/// A position in Rⁿ (vertex, candidate vertex, subgradient).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Scalar>);

/// A probe direction or displacement in Rⁿ. Never normalized.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(Vec<Scalar>);

macro_rules! vector_common {
    ($ty:ident) => {
        impl $ty {
            pub fn new(coords: Vec<Scalar>) -> Self {
                assert!(!coords.is_empty(), "vectors have dimension >= 1");
                Self(coords)
            }

            pub fn from_ints(coords: &[i64]) -> Self {
                Self::new(coords.iter().map(|&c| int(c)).collect())
            }

            pub fn zero(dim: usize) -> Self {
                Self::new(vec![Scalar::zero(); dim])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[Scalar] {
                &self.0
            }

            pub fn into_coords(self) -> Vec<Scalar> {
                self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            /// Zero-extends (or truncates) to `dim` coordinates.
            pub fn resized(&self, dim: usize) -> Self {
                let mut coords = self.0.clone();
                coords.resize(dim, Scalar::zero());
                Self::new(coords)
            }

            pub fn set(&mut self, index: usize, value: Scalar) {
                self.0[index] = value;
            }
        }

        impl Index<usize> for $ty {
            type Output = Scalar;

            fn index(&self, index: usize) -> &Scalar {
                &self.0[index]
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, c) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    };
}

vector_common!(Point);
vector_common!(Direction);

impl Point {
    /// Displacement `self - origin`.
    pub fn minus(&self, origin: &Point) -> Direction {
        assert_eq!(self.dim(), origin.dim());
        Direction::new(self.0.iter().zip(&origin.0).map(|(a, b)| a - b).collect())
    }

    /// `self + scale * dir`.
    pub fn offset(&self, dir: &Direction, scale: &Scalar) -> Point {
        assert_eq!(self.dim(), dir.dim());
        Point::new(
            self.0
                .iter()
                .zip(dir.coords())
                .map(|(p, d)| p + scale * d)
                .collect(),
        )
    }

    pub fn as_direction(&self) -> Direction {
        Direction::new(self.0.clone())
    }
}

impl Direction {
    /// The j-th coordinate unit vector in Rⁿ (0-based `j`).
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut d = Self::zero(dim);
        d.0[j] = int(1);
        d
    }

    pub fn dot(&self, other: &Direction) -> Scalar {
        assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// `selfᵀ p`.
    pub fn eval(&self, p: &Point) -> Scalar {
        assert_eq!(self.dim(), p.dim());
        self.0.iter().zip(&p.0).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, factor: &Scalar) -> Direction {
        Direction::new(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn neg(&self) -> Direction {
        Direction::new(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Direction) -> Direction {
        assert_eq!(self.dim(), other.dim());
        Direction::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn as_point(&self) -> Point {
        Point::new(self.0.clone())
    }

    /// Quarter turn clockwise in the plane: (x, y) -> (y, -x).
    fn rotated_cw(&self) -> Direction {
        debug_assert_eq!(self.dim(), 2);
        Direction::new(vec![self.0[1].clone(), -&self.0[0]])
    }
}

/// `{ v : vᵀ normal <= offset }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: Direction,
    pub offset: Scalar,
}

/// `{ v : vᵀ normal = offset }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Direction,
    pub offset: Scalar,
}

impl Halfspace {
    pub fn new(normal: Direction, offset: Scalar) -> Self {
        debug_assert!(!normal.is_zero());
        Self { normal, offset }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.normal.eval(p) <= self.offset
    }

    pub fn boundary(&self) -> Hyperplane {
        Hyperplane::new(self.normal.clone(), self.offset.clone())
    }
}

impl Hyperplane {
    pub fn new(normal: Direction, offset: Scalar) -> Self {
        debug_assert!(!normal.is_zero());
        Self { normal, offset }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.normal.eval(p) == self.offset
    }
}

/// Outcome of intersecting two lines in the plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineIntersection {
    Point(Point),
    NoIntersection,
    Coincident,
}

/// Intersection of two lines in R² by Cramer's rule.
pub fn intersect_hyperplanes_2d(h1: &Hyperplane, h2: &Hyperplane) -> LineIntersection {
    assert!(h1.normal.dim() == 2 && h2.normal.dim() == 2);
    let (a, b) = (&h1.normal[0], &h1.normal[1]);
    let (c, d) = (&h2.normal[0], &h2.normal[1]);
    let det = a * d - b * c;
    if det.is_zero() {
        // Parallel normals: same line iff the offsets scale the same way.
        let same = if !a.is_zero() {
            &h1.offset * c == &h2.offset * a
        } else {
            &h1.offset * d == &h2.offset * b
        };
        return if same {
            LineIntersection::Coincident
        } else {
            LineIntersection::NoIntersection
        };
    }
    let x = (&h1.offset * d - b * &h2.offset) / &det;
    let y = (a * &h2.offset - &h1.offset * c) / &det;
    LineIntersection::Point(Point::new(vec![x, y]))
}

/// Twice the signed area of (o, a, b); positive for a counter-clockwise turn.
pub fn orientation(o: &Point, a: &Point, b: &Point) -> Scalar {
    let (ox, oy) = (&o[0], &o[1]);
    (&a[0] - ox) * (&b[1] - oy) - (&a[1] - oy) * (&b[0] - ox)
}

/// Planar convex polygon in canonical form: clockwise, no duplicates, no
/// collinear triples, lexicographically smallest vertex first.
///
/// Zero, one and two vertices encode the empty set, a point and a segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polygon2 {
    vertices: Vec<Point>,
}

impl Polygon2 {
    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Consecutive vertex pairs, wrapping around. A segment yields one edge.
    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        let n = self.vertices.len();
        let count = match n {
            0 | 1 => 0,
            2 => 1,
            _ => n,
        };
        (0..count).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Closed membership test.
    pub fn contains(&self, p: &Point) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                orientation(a, b, p).is_zero() && within_box(a, b, p)
            }
            _ => self
                .edges()
                .all(|(a, b)| !orientation(a, b, p).is_positive()),
        }
    }
}

fn within_box(a: &Point, b: &Point, p: &Point) -> bool {
    (0..2).all(|i| {
        let (lo, hi) = if a[i] <= b[i] { (&a[i], &b[i]) } else { (&b[i], &a[i]) };
        lo <= &p[i] && &p[i] <= hi
    })
}

/// Canonical clockwise hull of a planar point set (Andrew's monotone chain,
/// strict turns only).
pub fn convex_hull_2d(points: &[Point]) -> Polygon2 {
    let mut pts: Vec<Point> = points.to_vec();
    assert!(pts.iter().all(|p| p.dim() == 2), "convex_hull_2d needs planar points");
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return Polygon2 { vertices: pts };
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !orientation(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !orientation(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    // Counter-clockwise from the lexicographic minimum.
    let mut ccw = lower;
    ccw.extend(upper);
    if ccw.len() <= 2 {
        return Polygon2 { vertices: ccw };
    }
    let mut cw = Vec::with_capacity(ccw.len());
    cw.push(ccw[0].clone());
    cw.extend(ccw[1..].iter().rev().cloned());
    Polygon2 { vertices: cw }
}

/// Whether nonnegative combinations of the planar `normals` cover R².
pub fn positively_spans_2d(normals: &[Direction]) -> bool {
    if normals.is_empty() || normals.iter().any(Direction::is_zero) {
        return false;
    }
    // If every normal lies in a closed halfplane {x : wᵀx >= 0}, the halfplane
    // can be rotated until its boundary passes through one of the normals.
    for n in normals {
        let w = n.rotated_cw();
        for cand in [w.clone(), w.neg()] {
            if normals.iter().all(|m| !cand.dot(m).is_negative()) {
                return false;
            }
        }
    }
    true
}

/// The polygon `∩ {v : vᵀdᵢ <= Dᵢ}` cut out by planar constraints.
pub fn generated_constraint_set_2d(constraints: &[Halfspace]) -> Result<Polygon2, GeometryError> {
    if constraints.is_empty() {
        return Err(GeometryError::Unbounded);
    }
    for h in constraints {
        if h.normal.dim() != 2 {
            return Err(GeometryError::DimensionMismatch {
                expected: 2,
                found: h.normal.dim(),
            });
        }
        if h.normal.is_zero() {
            return Err(GeometryError::ZeroNormal);
        }
    }
    let normals: Vec<Direction> = constraints.iter().map(|h| h.normal.clone()).collect();
    if !positively_spans_2d(&normals) {
        return Err(GeometryError::Unbounded);
    }
    // Bounded and nonempty implies pointed, so every vertex is the meet of two
    // independent boundary lines.
    let mut candidates = Vec::new();
    for (i, hi) in constraints.iter().enumerate() {
        for hj in &constraints[i + 1..] {
            if let LineIntersection::Point(p) = intersect_hyperplanes_2d(&hi.boundary(), &hj.boundary())
            {
                if constraints.iter().all(|h| h.contains(&p)) {
                    candidates.push(p);
                }
            }
        }
    }
    if candidates.is_empty() {
        return Err(GeometryError::EmptyIntersection);
    }
    Ok(convex_hull_2d(&candidates))
}

/// Probe direction `d` with `dᵀa = dᵀc < dᵀb` for consecutive clockwise
/// vertices `a, b, c`: the quarter turn of `c - a` pointing towards `b`.
pub fn outward_probe_direction(a: &Point, b: &Point, c: &Point) -> Result<Direction, GeometryError> {
    if a == c {
        return Err(GeometryError::DegenerateTriple("a equals c"));
    }
    let chord = c.minus(a);
    let d = chord.rotated_cw();
    let lift = d.eval(b) - d.eval(a);
    let d = if lift.is_positive() {
        d
    } else if lift.is_negative() {
        d.neg()
    } else {
        return Err(GeometryError::DegenerateTriple("b lies on line(a, c)"));
    };
    debug_assert!(d.eval(a) == d.eval(c) && d.eval(a) < d.eval(b));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(&[x, y])
    }

    fn hs(nx: i64, ny: i64, off: i64) -> Halfspace {
        Halfspace::new(Direction::from_ints(&[nx, ny]), int(off))
    }

    #[test]
    fn axis_lines_meet_at_unit_corner() {
        let h1 = Hyperplane::new(Direction::from_ints(&[1, 0]), int(1));
        let h2 = Hyperplane::new(Direction::from_ints(&[0, 1]), int(1));
        assert_eq!(intersect_hyperplanes_2d(&h1, &h2), LineIntersection::Point(p(1, 1)));
    }

    #[test]
    fn parallel_and_coincident_lines() {
        let h1 = Hyperplane::new(Direction::from_ints(&[1, 0]), int(1));
        let h2 = Hyperplane::new(Direction::from_ints(&[1, 0]), int(2));
        assert_eq!(intersect_hyperplanes_2d(&h1, &h2), LineIntersection::NoIntersection);
        let h3 = Hyperplane::new(Direction::from_ints(&[-2, 0]), int(-2));
        assert_eq!(intersect_hyperplanes_2d(&h1, &h3), LineIntersection::Coincident);
        let h4 = Hyperplane::new(Direction::from_ints(&[0, 3]), int(6));
        let h5 = Hyperplane::new(Direction::from_ints(&[0, 1]), int(2));
        assert_eq!(intersect_hyperplanes_2d(&h4, &h5), LineIntersection::Coincident);
    }

    #[test]
    fn antidiagonal_meets_vertical() {
        // v1 + v2 = 0 and v1 = 3/2 solved by hand: (3/2, -3/2).
        let h1 = Hyperplane::new(Direction::from_ints(&[1, 1]), int(0));
        let h2 = Hyperplane::new(Direction::from_ints(&[1, 0]), ratio(3, 2));
        assert_eq!(
            intersect_hyperplanes_2d(&h1, &h2),
            LineIntersection::Point(Point::new(vec![ratio(3, 2), ratio(-3, 2)]))
        );
    }

    #[test]
    fn constraint_set_triangle() {
        let poly = generated_constraint_set_2d(&[hs(1, 0, 1), hs(0, 1, 1), hs(-1, -1, 0)]).unwrap();
        // Lexicographic start (-1, 1), then clockwise.
        assert_eq!(poly.vertices(), &[p(-1, 1), p(1, 1), p(1, -1)]);
    }

    #[test]
    fn constraint_set_concurrent_lines_give_point() {
        let poly = generated_constraint_set_2d(&[hs(1, 0, 3), hs(0, 1, 4), hs(-1, -1, -7)]).unwrap();
        assert_eq!(poly.vertices(), &[p(3, 4)]);
    }

    #[test]
    fn constraint_set_unbounded_and_empty() {
        assert_eq!(
            generated_constraint_set_2d(&[hs(1, 0, 1), hs(0, 1, 1)]),
            Err(GeometryError::Unbounded)
        );
        assert_eq!(
            generated_constraint_set_2d(&[hs(1, 0, 0), hs(0, 1, 0), hs(-1, -1, -1)]),
            Err(GeometryError::EmptyIntersection)
        );
    }

    #[test]
    fn constraint_set_segment() {
        let poly = generated_constraint_set_2d(&[hs(1, 0, 2), hs(-1, 0, 0), hs(0, 1, 0), hs(0, -1, 0)])
            .unwrap();
        assert_eq!(poly.vertices(), &[p(0, 0), p(2, 0)]);
    }

    #[test]
    fn probe_direction_examples() {
        let d = outward_probe_direction(&p(0, 1), &p(1, 1), &p(1, 0)).unwrap();
        assert_eq!(d, Direction::from_ints(&[1, 1]));

        // Enumerate both quarter turns of c - a; exactly one lifts b above a.
        let (a, b, c) = (p(1, 1), p(1, -1), p(-1, 1));
        let chord = c.minus(&a);
        let turns = [chord.rotated_cw(), chord.rotated_cw().neg()];
        let good: Vec<_> = turns.iter().filter(|d| d.eval(&b) > d.eval(&a)).collect();
        assert_eq!(good.len(), 1);
        let d = outward_probe_direction(&a, &b, &c).unwrap();
        assert_eq!(&d, good[0]);
        assert_eq!(d.eval(&a), d.eval(&c));

        assert_eq!(
            outward_probe_direction(&p(0, 0), &p(2, 0), &p(0, 0)),
            Err(GeometryError::DegenerateTriple("a equals c"))
        );
        assert!(outward_probe_direction(&p(0, 0), &p(1, 1), &p(2, 2)).is_err());
    }

    #[test]
    fn hull_examples() {
        assert_eq!(convex_hull_2d(&[p(0, 0)]).vertices(), &[p(0, 0)]);
        assert_eq!(convex_hull_2d(&[p(0, 0), p(1, 0), p(2, 0)]).vertices(), &[p(0, 0), p(2, 0)]);
        let hull = convex_hull_2d(&[p(0, 0), p(4, 0), p(1, 3), p(1, 1)]);
        assert_eq!(hull.vertices(), &[p(0, 0), p(1, 3), p(4, 0)]);
        // Clockwise: every consecutive triple turns right.
        let v = hull.vertices();
        for i in 0..v.len() {
            assert!(orientation(&v[i], &v[(i + 1) % 3], &v[(i + 2) % 3]).is_negative());
        }
        assert!(convex_hull_2d(&[]).is_empty());
        assert_eq!(convex_hull_2d(&[p(1, 1), p(1, 1)]).vertices(), &[p(1, 1)]);
    }

    #[test]
    fn polygon_membership() {
        let tri = convex_hull_2d(&[p(0, 0), p(4, 0), p(1, 3)]);
        assert!(tri.contains(&p(1, 1)));
        assert!(tri.contains(&p(4, 0)));
        assert!(tri.contains(&p(2, 0)));
        assert!(!tri.contains(&p(3, 3)));
        let seg = convex_hull_2d(&[p(0, 0), p(2, 2)]);
        assert!(seg.contains(&p(1, 1)));
        assert!(!seg.contains(&p(3, 3)));
        assert!(!seg.contains(&p(1, 0)));
    }

    #[test]
    fn positive_spanning() {
        let d = |x, y| Direction::from_ints(&[x, y]);
        assert!(positively_spans_2d(&[d(1, 0), d(0, 1), d(-1, -1)]));
        assert!(positively_spans_2d(&[d(1, 0), d(0, 1), d(-1, 0), d(0, -1)]));
        assert!(!positively_spans_2d(&[d(1, 0), d(0, 1)]));
        assert!(!positively_spans_2d(&[d(1, 0), d(-1, 0)]));
        assert!(!positively_spans_2d(&[d(1, 0), d(-1, 0), d(0, 1)]));
    }
}
