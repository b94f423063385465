//! Planar probing with an outer polygon `P` and confirmed vertices `S`.
//!
//! `P` starts as the region cut out by a positively spanning set of probes.
//! Each loop probe looks at three consecutive clockwise vertices `a, b, c` of
//! `P` and asks for the support value along the normal of the chord `ac`
//! pointing at `b`. The answer either certifies `b`, certifies `a` and `c`
//! (removing `b`), or truncates `b` into two new candidates. The run stops once
//! every vertex of `P` is certified or the vertex budget is met.

use super::{
    require_dimension, Algorithm, Branch, Probe, ProbeRecord, ReconstructError, ReconstructionReport,
    VertexBudget,
};
use crate::geometry::{
    convex_hull_2d, generated_constraint_set_2d, outward_probe_direction, positively_spans_2d,
    Direction, GeometryError, Halfspace, Point, Polygon2,
};
use crate::oracle::SupportOracle;
use crate::scalar::{int, Scalar};
use num_traits::{One, Signed};

/// Call cap when no finite vertex budget bounds the run.
pub const DEFAULT_UNBOUNDED_PROBE_CAP: usize = 1024;

/// How the first outer polygon is obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitializationScheme {
    /// `{e₁, e₂, −e₁−e₂}`, three calls.
    StandardTriangle,
    /// `{e₁, e₂, −e₁, −e₂}`, four calls.
    AxisRectangle,
    /// Any positively spanning set of `m >= 3` directions, `m` calls.
    CustomPositiveSpanning(Vec<Direction>),
    /// Constraints already known to be tight support lines; no calls.
    PreProbed(Vec<Halfspace>),
}

impl InitializationScheme {
    fn directions(&self) -> Vec<Direction> {
        let d = Direction::from_ints;
        match self {
            Self::StandardTriangle => vec![d(&[1, 0]), d(&[0, 1]), d(&[-1, -1])],
            Self::AxisRectangle => vec![d(&[1, 0]), d(&[0, 1]), d(&[-1, 0]), d(&[0, -1])],
            Self::CustomPositiveSpanning(dirs) => dirs.clone(),
            Self::PreProbed(_) => Vec::new(),
        }
    }

    /// Number of constraints the initial polygon is built from.
    pub fn size(&self) -> usize {
        match self {
            Self::PreProbed(h) => h.len(),
            other => other.directions().len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarOptions {
    pub budget: VertexBudget,
    pub init: InitializationScheme,
    /// Certify the last vertex without a call when the polygon pins it down.
    pub early_stop: bool,
    /// Positive factor applied to every probe direction.
    pub probe_scale: Scalar,
    /// Overrides the derived call cap.
    pub max_calls: Option<usize>,
}

impl PlanarOptions {
    pub fn new(budget: VertexBudget, init: InitializationScheme) -> Self {
        Self {
            budget,
            init,
            early_stop: true,
            probe_scale: Scalar::one(),
            max_calls: None,
        }
    }

    /// Hard limit on oracle calls. With a finite budget `k` and `m` initial
    /// constraints an exact oracle never needs more than `3k + 1 + (m − 3)`,
    /// minus the constraints that were supplied pre-probed.
    pub fn call_cap(&self) -> usize {
        if let Some(cap) = self.max_calls {
            return cap;
        }
        match self.budget {
            VertexBudget::Finite(k) => {
                let m = self.init.size();
                let prepaid = if matches!(self.init, InitializationScheme::PreProbed(_)) { m } else { 0 };
                (3 * k + 1 + m.saturating_sub(3)).saturating_sub(prepaid)
            }
            VertexBudget::Infinite => DEFAULT_UNBOUNDED_PROBE_CAP,
        }
    }
}

/// What one call to [`ProbeState2D::step`] did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Probed {
        direction: Direction,
        value: Scalar,
        branch: Branch,
    },
    /// The last vertex was pinned down by two uncertified edges; no call made.
    EarlyStop { vertex: Point },
    Finished,
}

/// Outer polygon `P`, certified vertices `S`, and every constraint generated.
///
/// `outer` is clockwise and starts at the current anchor `a`, so the next
/// probe looks at `outer[0], outer[1], outer[2]`.
#[derive(Debug, Clone)]
pub struct ProbeState2D {
    outer: Vec<Point>,
    confirmed: Vec<Point>,
    history: Vec<Halfspace>,
    /// For each constraint, a vertex of `P` on its line.
    witness: Vec<Point>,
    budget: VertexBudget,
    early_stop: bool,
    probe_scale: Scalar,
    calls: usize,
    call_cap: usize,
}

impl ProbeState2D {
    /// Probes the initialization directions and builds `P`.
    pub fn initialize<O: SupportOracle>(oracle: &mut O, opts: &PlanarOptions) -> Result<Self, ReconstructError> {
        if !opts.probe_scale.is_positive() {
            return Err(ReconstructError::InvalidInitialization(
                "probe scale must be positive".into(),
            ));
        }
        let mut history = match &opts.init {
            InitializationScheme::PreProbed(hs) => hs.clone(),
            scheme => {
                let dirs = scheme.directions();
                if dirs.len() < 3 || dirs.iter().any(|d| d.dim() != 2) || !positively_spans_2d(&dirs) {
                    return Err(ReconstructError::InvalidInitialization(
                        "initial directions must be planar and positively span the plane".into(),
                    ));
                }
                let mut hs = Vec::with_capacity(dirs.len());
                for (i, d) in dirs.iter().enumerate() {
                    let d = d.scaled(&opts.probe_scale);
                    let value = oracle.support(&d).map_err(|e| {
                        ReconstructError::from(e).offset_calls(i)
                    })?;
                    hs.push(Halfspace::new(d, value));
                }
                hs
            }
        };
        let calls = opts.init.directions().len();
        let outer = match generated_constraint_set_2d(&history) {
            Ok(poly) => poly.into_vertices(),
            Err(GeometryError::EmptyIntersection) => {
                return Err(ReconstructError::inconsistent(
                    calls,
                    "initial constraints have empty intersection",
                ))
            }
            Err(e) => return Err(ReconstructError::InvalidInitialization(e.to_string())),
        };
        history.shrink_to_fit();
        let mut state = Self {
            confirmed: Vec::new(),
            outer,
            history,
            witness: Vec::new(),
            budget: opts.budget,
            early_stop: opts.early_stop,
            probe_scale: opts.probe_scale.clone(),
            calls,
            call_cap: opts.call_cap(),
        };
        state.check_tangency(calls, None)?;
        // A point or segment is certified outright: every endpoint of a
        // degenerate P lies on a support line that meets it in that endpoint.
        if state.outer.len() <= 2 {
            state.confirmed = state.outer.clone();
            if let Some(k) = state.budget.finite() {
                if state.confirmed.len() > k {
                    return Err(ReconstructError::BudgetExhausted {
                        budget: k,
                        calls: state.calls,
                    });
                }
            }
        }
        Ok(state)
    }

    pub fn outer(&self) -> &[Point] {
        &self.outer
    }

    /// `P` in canonical form.
    pub fn outer_polygon(&self) -> Polygon2 {
        convex_hull_2d(&self.outer)
    }

    pub fn confirmed(&self) -> &[Point] {
        &self.confirmed
    }

    pub fn history(&self) -> &[Halfspace] {
        &self.history
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    pub fn is_finished(&self) -> bool {
        // S ⊆ P_v always holds, so equal sizes mean equal sets.
        self.budget.reached(self.confirmed.len()) || self.confirmed.len() == self.outer.len()
    }

    /// Certified vertices in lexicographic order.
    pub fn result(&self) -> Vec<Point> {
        let mut v = self.confirmed.clone();
        v.sort();
        v
    }

    fn is_confirmed(&self, p: &Point) -> bool {
        self.confirmed.contains(p)
    }

    fn confirm(&mut self, p: &Point) {
        if !self.is_confirmed(p) {
            self.confirmed.push(p.clone());
        }
    }

    pub fn step<O: SupportOracle>(&mut self, oracle: &mut O) -> Result<StepOutcome, ReconstructError> {
        if self.is_finished() {
            return Ok(StepOutcome::Finished);
        }
        let n = self.outer.len();
        debug_assert!(n >= 3, "a non-degenerate outer polygon has three vertices");
        // A certified b would only be certified again; move past it for free.
        let mut turns = 0;
        while self.is_confirmed(&self.outer[1]) {
            self.outer.rotate_left(1);
            turns += 1;
            assert!(turns <= n, "some vertex of P is uncertified");
        }
        if self.early_stop {
            if let Some(vertex) = self.pinned_last_vertex()? {
                self.confirm(&vertex);
                return Ok(StepOutcome::EarlyStop { vertex });
            }
        }
        if self.calls >= self.call_cap {
            return Err(ReconstructError::inconsistent(
                self.calls,
                format!(
                    "hard cap of {} calls reached with {} of {} outer vertices certified",
                    self.call_cap,
                    self.confirmed.len(),
                    n
                ),
            ));
        }

        let (a, b, c) = (self.outer[0].clone(), self.outer[1].clone(), self.outer[2 % n].clone());
        let d = outward_probe_direction(&a, &b, &c)
            .map_err(|e| ReconstructError::inconsistent(self.calls, format!("outer polygon degenerate: {e}")))?
            .scaled(&self.probe_scale);
        let value = oracle
            .support(&d)
            .map_err(|e| ReconstructError::from(e).offset_calls(self.calls))?;
        self.calls += 1;
        let call = self.calls;

        let (da, db) = (d.eval(&a), d.eval(&b));
        let label = self.history.len() + 1;
        if value > db {
            return Err(ReconstructError::inconsistent(
                call,
                format!(
                    "sandwich violated by constraint #{label} ({d}ᵀv <= {value}): the value exceeds dᵀb = {db}, \
                     so the hidden set would leave the outer polygon at b = {b}"
                ),
            ));
        }
        if value < da {
            return Err(ReconstructError::inconsistent(
                call,
                format!(
                    "sandwich violated by constraint #{label} ({d}ᵀv <= {value}): the value is below dᵀa = {da}, \
                     cutting off both a = {a} and c = {c}; no branch applies"
                ),
            ));
        }
        if let Some(s) = self.confirmed.iter().find(|s| d.eval(s) > value) {
            return Err(ReconstructError::inconsistent(
                call,
                format!("sandwich violated by constraint #{label} ({d}ᵀv <= {value}): it cuts off certified vertex {s}"),
            ));
        }
        self.history.push(Halfspace::new(d.clone(), value.clone()));
        self.witness.push(b.clone());

        let (branch, removed) = if value == db {
            self.confirm(&b);
            self.outer.rotate_left(1);
            (Branch::ConfirmB, None)
        } else if value == da {
            self.confirm(&a);
            self.confirm(&c);
            self.outer.remove(1);
            self.outer.rotate_left(1);
            *self.witness.last_mut().expect("just pushed") = a.clone();
            (Branch::ConfirmAc, Some(b))
        } else {
            let gap = &db - &da;
            let b_new = a.offset(&b.minus(&a), &((&value - &da) / &gap));
            let c_new = b.offset(&c.minus(&b), &((&db - &value) / &gap));
            debug_assert!(b_new != c_new);
            debug_assert!(d.eval(&b_new) == value && d.eval(&c_new) == value);
            *self.witness.last_mut().expect("just pushed") = b_new.clone();
            self.outer.splice(1..2, [b_new, c_new]);
            (Branch::Split, Some(b))
        };
        self.check_tangency(call, removed.as_ref())?;
        Ok(StepOutcome::Probed {
            direction: d,
            value,
            branch,
        })
    }

    /// Every generated line touches the hidden set, which lies inside `P`, so
    /// it must still touch `P`. New vertices lie on old edges, so only lines
    /// whose witness vertex was `removed` can have lost contact.
    fn check_tangency(&mut self, call: usize, removed: Option<&Point>) -> Result<(), ReconstructError> {
        if self.witness.len() < self.history.len() {
            self.witness = self.history.iter().map(|_| self.outer[0].clone()).collect();
            return self.refresh_witnesses(call, |_| true);
        }
        match removed {
            Some(r) => {
                let r = r.clone();
                self.refresh_witnesses(call, |w| *w == r)
            }
            None => Ok(()),
        }
    }

    fn refresh_witnesses(&mut self, call: usize, stale: impl Fn(&Point) -> bool) -> Result<(), ReconstructError> {
        for (j, h) in self.history.iter().enumerate() {
            if !stale(&self.witness[j]) {
                continue;
            }
            let (reach, at) = self
                .outer
                .iter()
                .map(|v| (h.normal.eval(v), v))
                .max_by(|x, y| x.0.cmp(&y.0))
                .expect("nonempty outer polygon");
            if reach != h.offset {
                return Err(ReconstructError::inconsistent(
                    call,
                    format!(
                        "sandwich violated: constraint #{} ({}ᵀv <= {}) no longer touches the outer polygon (max {})",
                        j + 1,
                        h.normal,
                        h.offset,
                        reach
                    ),
                ));
            }
            self.witness[j] = at.clone();
        }
        Ok(())
    }

    /// With one vertex left to find, every edge of `P` whose endpoints are both
    /// uncertified carries that vertex. Two such edges pin it at their shared
    /// endpoint; any other pattern needs more vertices than the budget allows.
    fn pinned_last_vertex(&self) -> Result<Option<Point>, ReconstructError> {
        let Some(k) = self.budget.finite() else {
            return Ok(None);
        };
        if self.confirmed.len() + 1 != k {
            return Ok(None);
        }
        let n = self.outer.len();
        let open: Vec<usize> = (0..n)
            .filter(|&i| !self.is_confirmed(&self.outer[i]) && !self.is_confirmed(&self.outer[(i + 1) % n]))
            .collect();
        match open.as_slice() {
            [] | [_] => Ok(None),
            &[i, j] if (i + 1) % n == j => Ok(Some(self.outer[j].clone())),
            &[i, j] if (j + 1) % n == i => Ok(Some(self.outer[i].clone())),
            _ => Err(ReconstructError::BudgetExhausted {
                budget: k,
                calls: self.calls,
            }),
        }
    }
}

pub(crate) struct PlanarEvent {
    pub branch: Branch,
    pub outer: Vec<Point>,
    pub confirmed: Vec<Point>,
}

pub(crate) struct PlanarRun {
    pub vertices: Vec<Point>,
    /// One entry per oracle call, in call order.
    pub events: Vec<PlanarEvent>,
}

pub(crate) fn run_planar<O: SupportOracle>(oracle: &mut O, opts: &PlanarOptions) -> Result<PlanarRun, ReconstructError> {
    let mut state = ProbeState2D::initialize(oracle, opts)?;
    let init_calls = state.calls();
    let mut events: Vec<PlanarEvent> = (0..init_calls)
        .map(|i| {
            let last = i + 1 == init_calls;
            PlanarEvent {
                branch: Branch::Init,
                outer: if last { state.outer.clone() } else { Vec::new() },
                confirmed: if last { state.confirmed.clone() } else { Vec::new() },
            }
        })
        .collect();
    loop {
        match state.step(oracle)? {
            StepOutcome::Probed { branch, .. } => events.push(PlanarEvent {
                branch,
                outer: state.outer.clone(),
                confirmed: state.confirmed.clone(),
            }),
            StepOutcome::EarlyStop { .. } => {}
            StepOutcome::Finished => break,
        }
    }
    Ok(PlanarRun {
        vertices: state.result(),
        events,
    })
}

/// Recovers the vertex set of a planar polytope.
pub fn reconstruct_2d<O: SupportOracle>(
    oracle: O,
    budget: VertexBudget,
    init: InitializationScheme,
) -> Result<ReconstructionReport, ReconstructError> {
    reconstruct_2d_with(oracle, &PlanarOptions::new(budget, init))
}

pub fn reconstruct_2d_with<O: SupportOracle>(
    oracle: O,
    opts: &PlanarOptions,
) -> Result<ReconstructionReport, ReconstructError> {
    require_dimension(Algorithm::Planar, oracle.dimension(), oracle.dimension() == 2)?;
    let mut probe = Probe::new(oracle);
    let run = run_planar(probe.oracle_mut(), opts)?;
    let log = probe.oracle_mut().log().to_vec();
    debug_assert_eq!(log.len(), run.events.len());
    for (i, (event, (direction, value))) in run.events.into_iter().zip(log).enumerate() {
        probe.push_record(ProbeRecord {
            index: i + 1,
            direction,
            value,
            branch: event.branch,
            outer: event.outer,
            confirmed: event.confirmed,
        });
    }
    Ok(probe.finish(Algorithm::Planar, run.vertices))
}

/// `[s >= 0, s <= 1, t <= hi, t >= lo]` for the section rectangle.
pub(crate) fn section_rectangle(lo: &Scalar, hi: &Scalar) -> Vec<Halfspace> {
    let d = Direction::from_ints;
    vec![
        Halfspace::new(d(&[-1, 0]), int(0)),
        Halfspace::new(d(&[1, 0]), int(1)),
        Halfspace::new(d(&[0, 1]), hi.clone()),
        Halfspace::new(d(&[0, -1]), -lo),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::VertexListOracle;
    use crate::scalar::ratio;

    fn oracle(pts: &[[i64; 2]]) -> VertexListOracle {
        VertexListOracle::new(pts.iter().map(|p| Point::from_ints(p)).collect()).unwrap()
    }

    fn pts(p: &[[i64; 2]]) -> Vec<Point> {
        let mut v: Vec<Point> = p.iter().map(|c| Point::from_ints(c)).collect();
        v.sort();
        v
    }

    #[test]
    fn triangle_with_exact_budget() {
        let tri = [[0, 0], [4, 0], [1, 3]];
        let r = reconstruct_2d(oracle(&tri), VertexBudget::Finite(3), InitializationScheme::StandardTriangle).unwrap();
        assert_eq!(r.vertices, pts(&tri));
        assert!(r.oracle_calls <= 9, "{}", r.oracle_calls);
        assert_eq!(r.trace.len(), r.oracle_calls);
    }

    #[test]
    fn singleton_terminates_at_initialization() {
        let r = reconstruct_2d(oracle(&[[3, 4]]), VertexBudget::Infinite, InitializationScheme::StandardTriangle)
            .unwrap();
        assert_eq!(r.vertices, pts(&[[3, 4]]));
        assert_eq!(r.oracle_calls, 3);
        assert!(r.trace.iter().all(|t| t.branch == Branch::Init));
    }

    #[test]
    fn segment_with_budget_two_uses_at_most_five_calls() {
        let seg = [[0, 0], [2, 1]];
        let r = reconstruct_2d(oracle(&seg), VertexBudget::Finite(2), InitializationScheme::StandardTriangle).unwrap();
        assert_eq!(r.vertices, pts(&seg));
        assert!(r.oracle_calls <= 5, "{}", r.oracle_calls);
    }

    #[test]
    fn axis_rectangle_singleton_uses_four_calls() {
        let r = reconstruct_2d(oracle(&[[-2, 5]]), VertexBudget::Infinite, InitializationScheme::AxisRectangle)
            .unwrap();
        assert_eq!(r.oracle_calls, 4);
        assert_eq!(r.vertices, pts(&[[-2, 5]]));
    }

    #[test]
    fn axis_aligned_segment_is_certified_at_initialization() {
        let seg = [[-1, 2], [3, 2]];
        let r = reconstruct_2d(oracle(&seg), VertexBudget::Infinite, InitializationScheme::AxisRectangle).unwrap();
        assert_eq!(r.vertices, pts(&seg));
        assert_eq!(r.oracle_calls, 4);
    }

    #[test]
    fn rejects_non_spanning_initialization() {
        let init = InitializationScheme::CustomPositiveSpanning(vec![
            Direction::from_ints(&[1, 0]),
            Direction::from_ints(&[0, 1]),
            Direction::from_ints(&[1, 1]),
        ]);
        assert!(matches!(
            reconstruct_2d(oracle(&[[0, 0]]), VertexBudget::Infinite, init),
            Err(ReconstructError::InvalidInitialization(_))
        ));
    }

    #[test]
    fn state_matches_constraint_set_after_every_step() {
        let hidden = [[0, 0], [5, 1], [6, 4], [2, 6], [-1, 3]];
        let mut o = oracle(&hidden);
        let opts = PlanarOptions::new(VertexBudget::Infinite, InitializationScheme::StandardTriangle);
        let mut state = ProbeState2D::initialize(&mut o, &opts).unwrap();
        let truth = pts(&hidden);
        loop {
            assert_eq!(state.outer_polygon(), generated_constraint_set_2d(state.history()).unwrap());
            assert_eq!(state.outer_polygon().len(), state.outer().len());
            for v in &truth {
                assert!(state.history().iter().all(|h| h.contains(v)));
            }
            for s in state.confirmed() {
                assert!(truth.contains(s));
                assert!(state.outer().contains(s));
            }
            if state.step(&mut o).unwrap() == StepOutcome::Finished {
                break;
            }
        }
        assert_eq!(state.result(), truth);
    }

    #[test]
    fn scaled_probes_change_nothing() {
        let hidden = [[0, 0], [7, 2], [3, 5], [-2, 4]];
        for budget in [VertexBudget::Finite(4), VertexBudget::Infinite] {
            let base = reconstruct_2d(oracle(&hidden), budget, InitializationScheme::StandardTriangle).unwrap();
            let mut opts = PlanarOptions::new(budget, InitializationScheme::StandardTriangle);
            opts.probe_scale = ratio(7, 3);
            let scaled = reconstruct_2d_with(oracle(&hidden), &opts).unwrap();
            assert_eq!(base.vertices, scaled.vertices);
            assert_eq!(base.oracle_calls, scaled.oracle_calls);
            for (x, y) in base.trace.iter().zip(&scaled.trace) {
                assert_eq!(x.branch, y.branch);
                assert_eq!(x.direction.scaled(&ratio(7, 3)), y.direction);
                assert_eq!(x.outer, y.outer);
            }
        }
    }

    #[test]
    fn unit_budget_on_a_polygon_is_rejected() {
        let quad = [[0, 0], [4, 0], [4, 4], [0, 4]];
        let err = reconstruct_2d(oracle(&quad), VertexBudget::Finite(1), InitializationScheme::StandardTriangle);
        assert!(
            matches!(err, Err(ReconstructError::BudgetExhausted { .. })),
            "{err:?}"
        );
    }

    #[test]
    fn pre_probed_rectangle_costs_nothing() {
        let rect = section_rectangle(&int(-1), &int(2));
        let hidden = [[0, -1], [1, 2]];
        let opts = PlanarOptions::new(VertexBudget::Finite(3), InitializationScheme::PreProbed(rect));
        let r = reconstruct_2d_with(oracle(&hidden), &opts).unwrap();
        assert_eq!(r.vertices, pts(&hidden));
        assert!(r.oracle_calls <= 3, "{}", r.oracle_calls);
    }
}
