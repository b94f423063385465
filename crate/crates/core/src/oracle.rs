//! Support-function oracles `D(d) = max_{v ∈ X} vᵀd`.
//!
//! The algorithms only ever see a [`SupportOracle`]. The concrete oracles here
//! cover an explicit hidden vertex list, the directional derivative of an
//! affine finite-max function at an anchor point (whose subdifferential is the
//! hull of the active gradients), and adapters used for auditing, for
//! perturbation experiments, and for the projection/section steps of the
//! high-dimensional algorithms.

use crate::geometry::{convex_hull_2d, Direction, Point};
use crate::scalar::{int, Scalar};
use crate::verify::canonical_vertices_nd;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("direction has dimension {found}, oracle expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("oracle needs at least one {0}")]
    Empty(&'static str),
    #[error("invalid oracle configuration: {0}")]
    Invalid(String),
}

/// Evaluates the support function of a hidden compact polytope.
///
/// Exact implementations are positively homogeneous and subadditive in `d`.
/// [`NoisyOracle`] is the only implementation that is not.
pub trait SupportOracle {
    fn dimension(&self) -> usize;

    fn support(&mut self, d: &Direction) -> Result<Scalar, OracleError>;
}

impl<O: SupportOracle + ?Sized> SupportOracle for &mut O {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn support(&mut self, d: &Direction) -> Result<Scalar, OracleError> {
        (**self).support(d)
    }
}

impl<O: SupportOracle + ?Sized> SupportOracle for Box<O> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn support(&mut self, d: &Direction) -> Result<Scalar, OracleError> {
        (**self).support(d)
    }
}

fn check_dim(expected: usize, d: &Direction) -> Result<(), OracleError> {
    if d.dim() != expected {
        return Err(OracleError::DimensionMismatch {
            expected,
            found: d.dim(),
        });
    }
    Ok(())
}

fn max_over<'a>(points: impl IntoIterator<Item = &'a Point>, d: &Direction) -> Scalar {
    points
        .into_iter()
        .map(|v| d.eval(v))
        .max()
        .expect("nonempty point set")
}

/// Oracle over an explicit hidden vertex list.
#[derive(Debug, Clone)]
pub struct VertexListOracle {
    vertices: Vec<Point>,
}

impl VertexListOracle {
    pub fn new(vertices: Vec<Point>) -> Result<Self, OracleError> {
        let Some(first) = vertices.first() else {
            return Err(OracleError::Empty("vertex"));
        };
        let dim = first.dim();
        if let Some(bad) = vertices.iter().find(|v| v.dim() != dim) {
            return Err(OracleError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }
}

impl SupportOracle for VertexListOracle {
    fn dimension(&self) -> usize {
        self.vertices[0].dim()
    }

    fn support(&mut self, d: &Direction) -> Result<Scalar, OracleError> {
        check_dim(self.dimension(), d)?;
        Ok(max_over(&self.vertices, d))
    }
}

/// Affine piece `f(x) = gradientᵀx + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePiece {
    pub gradient: Point,
    pub offset: Scalar,
}

impl AffinePiece {
    pub fn new(gradient: Point, offset: Scalar) -> Self {
        Self { gradient, offset }
    }

    pub fn value_at(&self, x: &Point) -> Scalar {
        self.gradient.as_direction().eval(x) + &self.offset
    }
}

/// Directional derivative `df(x̄; d)` of `f = max_i f_i` with affine pieces.
///
/// At the anchor the derivative is `max_{i ∈ A(x̄)} gᵢᵀd`, the support function
/// of `∂f(x̄) = conv{gᵢ : i ∈ A(x̄)}`.
#[derive(Debug, Clone)]
pub struct FiniteMaxOracle {
    pieces: Vec<AffinePiece>,
    anchor: Point,
    active: Vec<usize>,
}

impl FiniteMaxOracle {
    pub fn new(pieces: Vec<AffinePiece>, anchor: Point) -> Result<Self, OracleError> {
        if pieces.is_empty() {
            return Err(OracleError::Empty("piece"));
        }
        let dim = anchor.dim();
        if let Some(bad) = pieces.iter().find(|p| p.gradient.dim() != dim) {
            return Err(OracleError::DimensionMismatch {
                expected: dim,
                found: bad.gradient.dim(),
            });
        }
        let values: Vec<Scalar> = pieces.iter().map(|p| p.value_at(&anchor)).collect();
        let top = values.iter().max().expect("nonempty").clone();
        let active = (0..pieces.len()).filter(|&i| values[i] == top).collect();
        Ok(Self {
            pieces,
            anchor,
            active,
        })
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    /// `f(x) = max_i f_i(x)`.
    pub fn value_at(&self, x: &Point) -> Scalar {
        self.pieces.iter().map(|p| p.value_at(x)).max().expect("nonempty")
    }

    /// Zero-based indices `i` with `f_i(x̄) = f(x̄)`, ascending.
    pub fn active_set(&self) -> &[usize] {
        &self.active
    }

    pub fn active_gradients(&self) -> impl Iterator<Item = &Point> {
        self.active.iter().map(|&i| &self.pieces[i].gradient)
    }

    /// Extreme points of the subdifferential at the anchor, lexicographically
    /// ordered.
    pub fn subdifferential_vertices(&self) -> Vec<Point> {
        let grads: Vec<Point> = self.active_gradients().cloned().collect();
        if self.anchor.dim() == 2 {
            let mut v = convex_hull_2d(&grads).into_vertices();
            v.sort();
            v
        } else {
            canonical_vertices_nd(&grads)
        }
    }
}

impl SupportOracle for FiniteMaxOracle {
    fn dimension(&self) -> usize {
        self.anchor.dim()
    }

    fn support(&mut self, d: &Direction) -> Result<Scalar, OracleError> {
        check_dim(self.dimension(), d)?;
        Ok(max_over(self.active_gradients(), d))
    }
}

/// Forwards to `inner` and records every call.
#[derive(Debug, Clone)]
pub struct CountingOracle<O> {
    inner: O,
    log: Vec<(Direction, Scalar)>,
}

impl<O: SupportOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            log: Vec::new(),
        }
    }

    pub fn count(&self) -> usize {
        self.log.len()
    }

    pub fn log(&self) -> &[(Direction, Scalar)] {
        &self.log
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_parts(self) -> (O, Vec<(Direction, Scalar)>) {
        (self.inner, self.log)
    }
}

impl<O: SupportOracle> SupportOracle for CountingOracle<O> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn support(&mut self, d: &Direction) -> Result<Scalar, OracleError> {
        let value = self.inner.support(d)?;
        self.log.push((d.clone(), value.clone()));
        Ok(value)
    }
}

/// Number of grid steps on each side of zero used for perturbations.
pub const NOISE_GRID: i64 = 1000;

/// `D^ε(d) = D(d) + ξ` with `|ξ| < ε`, reproducible from a seed.
///
/// ξ is drawn uniformly from `{ε·k/NOISE_GRID : |k| < NOISE_GRID}`. Not
/// homogeneous or subadditive. With `ε = 0` it forwards exactly.
#[derive(Debug, Clone)]
pub struct NoisyOracle<O> {
    inner: O,
    epsilon: Scalar,
    rng: ChaCha8Rng,
}

impl<O: SupportOracle> NoisyOracle<O> {
    pub fn new(inner: O, epsilon: Scalar, seed: u64) -> Result<Self, OracleError> {
        if epsilon.is_negative() {
            return Err(OracleError::Invalid(format!("epsilon {epsilon} is negative")));
        }
        Ok(Self {
            inner,
            epsilon,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn epsilon(&self) -> &Scalar {
        &self.epsilon
    }
}

impl<O: SupportOracle> SupportOracle for NoisyOracle<O> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn support(&mut self, d: &Direction) -> Result<Scalar, OracleError> {
        let exact = self.inner.support(d)?;
        let k: i64 = self.rng.gen_range(-(NOISE_GRID - 1)..NOISE_GRID);
        if self.epsilon.is_zero() {
            return Ok(exact);
        }
        let xi = &self.epsilon * Scalar::new(BigInt::from(k), BigInt::from(NOISE_GRID));
        Ok(exact + xi)
    }
}

/// Support function of the projection of `X` onto its first `k` coordinates.
#[derive(Debug, Clone)]
pub struct CoordinateProjectionOracle<O> {
    inner: O,
    k: usize,
}

impl<O: SupportOracle> CoordinateProjectionOracle<O> {
    pub fn new(inner: O, k: usize) -> Result<Self, OracleError> {
        if k == 0 || k > inner.dimension() {
            return Err(OracleError::Invalid(format!(
                "cannot project R^{} onto {k} coordinates",
                inner.dimension()
            )));
        }
        Ok(Self { inner, k })
    }

    pub fn pad(&self, d: &Direction) -> Direction {
        d.resized(self.inner.dimension())
    }
}

impl<O: SupportOracle> SupportOracle for CoordinateProjectionOracle<O> {
    fn dimension(&self) -> usize {
        self.k
    }

    fn support(&mut self, d: &Direction) -> Result<Scalar, OracleError> {
        check_dim(self.k, d)?;
        let padded = self.pad(d);
        self.inner.support(&padded)
    }
}

/// Two-dimensional oracle on the plane `{x¹ + s(x² − x¹) + t·e_axis}`.
///
/// `x¹` and `x²` must vanish from coordinate `axis` onwards, so that the plane
/// contains the projection onto the first `axis + 1` coordinates of any set
/// whose projection onto the first `axis` coordinates is the segment
/// `[x¹, x²]`. Plane coordinates are `(s, t)`.
#[derive(Debug, Clone)]
pub struct PlanarSectionOracle<O> {
    inner: O,
    base: Point,
    chord: Direction,
    /// `chord / |chord|²`, so that `wᵀ(x¹ + s·chord) = wᵀx¹ + s`.
    dual_chord: Direction,
    axis: usize,
    base_shift: Scalar,
}

impl<O: SupportOracle> PlanarSectionOracle<O> {
    pub fn new(inner: O, base: Point, other: Point, axis: usize) -> Result<Self, OracleError> {
        let n = inner.dimension();
        for p in [&base, &other] {
            if p.dim() != n {
                return Err(OracleError::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
        }
        if axis >= n {
            return Err(OracleError::Invalid(format!("axis {axis} outside R^{n}")));
        }
        if base.coords()[axis..]
            .iter()
            .chain(&other.coords()[axis..])
            .any(|c| !c.is_zero())
        {
            return Err(OracleError::Invalid(
                "section points must vanish from the lifting axis onwards".into(),
            ));
        }
        let chord = other.minus(&base);
        let norm2 = chord.dot(&chord);
        if norm2.is_zero() {
            return Err(OracleError::Invalid("section points coincide".into()));
        }
        let dual_chord = chord.scaled(&(int(1) / norm2));
        let base_shift = dual_chord.eval(&base);
        Ok(Self {
            inner,
            base,
            chord,
            dual_chord,
            axis,
            base_shift,
        })
    }

    /// The Rⁿ direction probed for plane direction `(g_s, g_t)`.
    pub fn lift_direction(&self, g: &Direction) -> Direction {
        let mut d = self.dual_chord.scaled(&g[0]);
        d.set(self.axis, g[1].clone());
        d
    }

    /// `x¹ + s(x² − x¹) + t·e_axis`.
    pub fn lift_point(&self, plane: &Point) -> Point {
        let mut p = self.base.offset(&self.chord, &plane[0]);
        p.set(self.axis, plane[1].clone());
        p
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: SupportOracle> SupportOracle for PlanarSectionOracle<O> {
    fn dimension(&self) -> usize {
        2
    }

    fn support(&mut self, g: &Direction) -> Result<Scalar, OracleError> {
        check_dim(2, g)?;
        let lifted = self.lift_direction(g);
        let value = self.inner.support(&lifted)?;
        Ok(value - &g[0] * &self.base_shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn pt(c: &[i64]) -> Point {
        Point::from_ints(c)
    }

    fn dir(c: &[i64]) -> Direction {
        Direction::from_ints(c)
    }

    #[test]
    fn vertex_list_support() {
        let mut o = VertexListOracle::new(vec![pt(&[0, 0]), pt(&[4, 0]), pt(&[1, 3])]).unwrap();
        assert_eq!(o.support(&dir(&[0, 1])).unwrap(), int(3));
        let mut single = VertexListOracle::new(vec![pt(&[3, 4])]).unwrap();
        assert_eq!(single.support(&dir(&[-1, -1])).unwrap(), int(-7));
        assert_eq!(
            single.support(&dir(&[1, 0, 0])),
            Err(OracleError::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
        assert!(VertexListOracle::new(vec![]).is_err());
        assert!(VertexListOracle::new(vec![pt(&[1]), pt(&[1, 2])]).is_err());
    }

    fn piece(g: &[i64], b: i64) -> AffinePiece {
        AffinePiece::new(pt(g), int(b))
    }

    #[test]
    fn finite_max_dominant_piece() {
        // f3 = x1 + 10 dominates at the origin, so only g3 = (1, 0) is active.
        let mut o = FiniteMaxOracle::new(
            vec![piece(&[1, 0], 0), piece(&[-1, 0], 0), piece(&[1, 0], 10)],
            pt(&[0, 0]),
        )
        .unwrap();
        assert_eq!(o.active_set(), &[2]);
        assert_eq!(o.support(&dir(&[1, 0])).unwrap(), int(1));
        assert_eq!(o.support(&dir(&[-1, 0])).unwrap(), int(-1));
    }

    #[test]
    fn active_set_examples() {
        let two = vec![piece(&[1, 0], 0), piece(&[-1, 0], 0)];
        assert_eq!(FiniteMaxOracle::new(two.clone(), pt(&[0, 0])).unwrap().active_set(), &[0, 1]);
        assert_eq!(FiniteMaxOracle::new(two, pt(&[1, 0])).unwrap().active_set(), &[0]);
        // x1 + x2, 2 x1, x2 + 1 at (1, 1) all evaluate to 2.
        let three = vec![piece(&[1, 1], 0), piece(&[2, 0], 0), piece(&[0, 1], 1)];
        let o = FiniteMaxOracle::new(three, pt(&[1, 1])).unwrap();
        assert_eq!(o.active_set(), &[0, 1, 2]);
        assert_eq!(o.value_at(&pt(&[1, 1])), int(2));
    }

    #[test]
    fn subdifferential_vertices_examples() {
        let o = FiniteMaxOracle::new(vec![piece(&[1, 0], 0), piece(&[-1, 0], 0)], pt(&[0, 0])).unwrap();
        assert_eq!(o.subdifferential_vertices(), vec![pt(&[-1, 0]), pt(&[1, 0])]);
        let o = FiniteMaxOracle::new(vec![piece(&[1, 1], 0), piece(&[1, 1], 0)], pt(&[0, 0])).unwrap();
        assert_eq!(o.subdifferential_vertices(), vec![pt(&[1, 1])]);
        let o = FiniteMaxOracle::new(
            vec![piece(&[0, 0], 0), piece(&[4, 0], 0), piece(&[1, 3], 0), piece(&[1, 1], 0)],
            pt(&[0, 0]),
        )
        .unwrap();
        assert_eq!(o.subdifferential_vertices(), vec![pt(&[0, 0]), pt(&[1, 3]), pt(&[4, 0])]);
        let o = FiniteMaxOracle::new(
            vec![piece(&[0, 0, 0], 0), piece(&[2, 2, 2], 0), piece(&[1, 1, 1], 0)],
            pt(&[5, -3, -2]),
        )
        .unwrap();
        assert_eq!(o.subdifferential_vertices(), vec![pt(&[0, 0, 0]), pt(&[2, 2, 2])]);
    }

    #[test]
    fn counting_records_calls() {
        let mut o = CountingOracle::new(VertexListOracle::new(vec![pt(&[1, 2])]).unwrap());
        o.support(&dir(&[1, 0])).unwrap();
        o.support(&dir(&[0, 1])).unwrap();
        assert!(o.support(&dir(&[0])).is_err());
        assert_eq!(o.count(), 2);
        assert_eq!(o.log()[1], (dir(&[0, 1]), int(2)));
    }

    #[test]
    fn noisy_stays_within_epsilon_and_replays() {
        let inner = VertexListOracle::new(vec![pt(&[0, 0]), pt(&[3, 1])]).unwrap();
        let eps = ratio(1, 100);
        let mut a = NoisyOracle::new(inner.clone(), eps.clone(), 42).unwrap();
        let mut b = NoisyOracle::new(inner.clone(), eps.clone(), 42).unwrap();
        let mut exact = inner;
        for i in 0..200 {
            let d = dir(&[i % 7 - 3, i % 5 - 2]);
            let va = a.support(&d).unwrap();
            assert_eq!(va, b.support(&d).unwrap());
            let err = (va - exact.support(&d).unwrap()).abs();
            assert!(err < eps);
        }
        assert!(NoisyOracle::new(exact, ratio(-1, 2), 0).is_err());
    }

    #[test]
    fn projection_pads_with_zeros() {
        let inner = VertexListOracle::new(vec![pt(&[1, 2, 9]), pt(&[-3, 0, -9])]).unwrap();
        let mut proj = CoordinateProjectionOracle::new(inner, 2).unwrap();
        assert_eq!(proj.dimension(), 2);
        assert_eq!(proj.support(&dir(&[1, 1])).unwrap(), int(3));
        assert!(CoordinateProjectionOracle::new(proj.clone(), 3).is_err());
    }

    #[test]
    fn planar_section_maps_plane_coordinates() {
        // Segment x1 = (1, 0, 0) .. x2 = (3, 2, 0) lifted along the third axis.
        let hidden = vec![pt(&[1, 0, 5]), pt(&[3, 2, -1]), pt(&[2, 1, 4])];
        let inner = VertexListOracle::new(hidden.clone()).unwrap();
        let mut sec = PlanarSectionOracle::new(inner, pt(&[1, 0, 0]), pt(&[3, 2, 0]), 2).unwrap();
        // Plane coordinates of the hidden points: (0, 5), (1, -1), (1/2, 4).
        let plane = [
            Point::new(vec![int(0), int(5)]),
            Point::new(vec![int(1), int(-1)]),
            Point::new(vec![ratio(1, 2), int(4)]),
        ];
        for (h, q) in hidden.iter().zip(&plane) {
            assert_eq!(&sec.lift_point(q), h);
        }
        for g in [dir(&[1, 0]), dir(&[0, 1]), dir(&[-2, 3]), dir(&[5, -1])] {
            let expect = plane.iter().map(|q| g.eval(q)).max().unwrap();
            assert_eq!(sec.support(&g).unwrap(), expect);
        }
        let inner = VertexListOracle::new(hidden).unwrap();
        assert!(PlanarSectionOracle::new(inner.clone(), pt(&[1, 0, 0]), pt(&[1, 0, 0]), 2).is_err());
        assert!(PlanarSectionOracle::new(inner, pt(&[1, 0, 1]), pt(&[1, 2, 0]), 2).is_err());
    }
}
