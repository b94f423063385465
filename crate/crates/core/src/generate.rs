//! Seeded random instances on the integer grid.

use crate::geometry::{convex_hull_2d, orientation, Point};
use crate::oracle::{AffinePiece, FiniteMaxOracle};
use crate::scalar::{int, Scalar};
use num_traits::Zero;
use rand::Rng;

/// Half-width of the coordinate grid used by the planar generator.
pub const GRID: i64 = 100;

/// A hidden point list together with its extreme points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    /// Everything the oracle sees, interior points included.
    pub points: Vec<Point>,
    /// Extreme points in lexicographic order.
    pub vertices: Vec<Point>,
}

/// A convex polygon with exactly `n_v` vertices plus a few interior points.
///
/// Vertices are rounded from random angles on a random ellipse; draws whose
/// hull loses a vertex to rounding are rejected.
pub fn random_polygon<R: Rng>(rng: &mut R, n_v: usize) -> Instance {
    assert!(n_v >= 1);
    loop {
        let mut pts: Vec<Point> = match n_v {
            1 => vec![Point::from_ints(&[rng.gen_range(-GRID..=GRID), rng.gen_range(-GRID..=GRID)])],
            _ => {
                let cx = rng.gen_range(-20.0..20.0);
                let cy = rng.gen_range(-20.0..20.0);
                let rx = rng.gen_range(5.0..80.0);
                let ry = rng.gen_range(5.0..80.0);
                let tilt: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                (0..n_v)
                    .map(|_| {
                        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                        let (x, y) = (rx * theta.cos(), ry * theta.sin());
                        let px = cx + x * tilt.cos() - y * tilt.sin();
                        let py = cy + x * tilt.sin() + y * tilt.cos();
                        Point::from_ints(&[px.round() as i64, py.round() as i64])
                    })
                    .collect()
            }
        };
        let hull = convex_hull_2d(&pts);
        if hull.len() != n_v {
            continue;
        }
        let mut vertices = hull.into_vertices();
        vertices.sort();
        // Midpoints of vertex pairs lie in the hull without being vertices
        // whenever n_v >= 2.
        if n_v >= 2 {
            for _ in 0..rng.gen_range(0..3) {
                let i = rng.gen_range(0..n_v);
                let j = (i + 1 + rng.gen_range(0..n_v - 1)) % n_v;
                let mid = Point::new(
                    vertices[i]
                        .coords()
                        .iter()
                        .zip(vertices[j].coords())
                        .map(|(a, b)| (a + b) / int(2))
                        .collect(),
                );
                pts.push(mid);
            }
        }
        return Instance { points: pts, vertices };
    }
}

/// `n_v <= 3` affinely independent points in Rⁿ.
///
/// Coordinates come from a per-axis range that is sometimes a single value,
/// so flat coordinates and degenerate projections show up often.
pub fn random_points_nd<R: Rng>(rng: &mut R, n: usize, n_v: usize) -> Instance {
    assert!((1..=3).contains(&n_v) && n >= 1);
    loop {
        let spans: Vec<i64> = (0..n)
            .map(|_| match rng.gen_range(0..4) {
                0 => 0,
                1 => 1,
                2 => 3,
                _ => 20,
            })
            .collect();
        let pts: Vec<Point> = (0..n_v)
            .map(|_| {
                let c: Vec<i64> = spans.iter().map(|&s| rng.gen_range(-s..=s)).collect();
                Point::from_ints(&c)
            })
            .collect();
        if !extreme_set(&pts) {
            continue;
        }
        let mut vertices = pts.clone();
        vertices.sort();
        return Instance { points: pts, vertices };
    }
}

/// Whether every point is extreme: distinct, and for three points non-collinear.
fn extreme_set(pts: &[Point]) -> bool {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return false;
            }
        }
    }
    if pts.len() == 3 {
        let u = pts[1].minus(&pts[0]);
        let v = pts[2].minus(&pts[0]);
        // Collinear iff every 2×2 minor of [u v] vanishes.
        let n = u.dim();
        let collinear = (0..n).all(|a| {
            (a + 1..n).all(|b| {
                let pa = Point::new(vec![u[a].clone(), u[b].clone()]);
                let pb = Point::new(vec![v[a].clone(), v[b].clone()]);
                orientation(&Point::zero(2), &pa, &pb).is_zero()
            })
        });
        return !collinear;
    }
    true
}

/// A max of affine pieces in Rⁿ with `active` pieces tied at the anchor and
/// `inactive` pieces strictly below it there.
pub fn random_finite_max<R: Rng>(rng: &mut R, n: usize, active: usize, inactive: usize) -> FiniteMaxOracle {
    assert!(active >= 1);
    let anchor: Vec<i64> = (0..n).map(|_| rng.gen_range(-10..=10)).collect();
    let anchor = Point::from_ints(&anchor);
    let top: Scalar = int(rng.gen_range(-50..=50));
    let mut pieces = Vec::with_capacity(active + inactive);
    for i in 0..active + inactive {
        let g: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
        let g = Point::from_ints(&g);
        let mut offset = &top - g.as_direction().eval(&anchor);
        if i >= active {
            offset -= int(rng.gen_range(1..=25));
        }
        pieces.push(AffinePiece::new(g, offset));
    }
    FiniteMaxOracle::new(pieces, anchor).expect("pieces share the anchor dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn polygon_has_requested_vertex_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n_v in 1..=8 {
            let inst = random_polygon(&mut rng, n_v);
            assert_eq!(inst.vertices.len(), n_v);
            assert_eq!(convex_hull_2d(&inst.points).len(), n_v);
        }
    }

    #[test]
    fn nd_points_are_extreme() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..6 {
            for n_v in 1..=3 {
                let inst = random_points_nd(&mut rng, n, n_v);
                assert_eq!(inst.vertices.len(), n_v);
                assert!(extreme_set(&inst.points));
            }
        }
    }

    #[test]
    fn finite_max_active_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_finite_max(&mut rng, 3, 4, 5);
        assert_eq!(f.active_set(), &[0, 1, 2, 3]);
    }
}
