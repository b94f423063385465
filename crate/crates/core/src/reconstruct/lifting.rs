//! Recovery in Rⁿ for at most two or three vertices.

use super::planar::{run_planar, section_rectangle, PlanarEvent};
use super::{
    require_dimension, Algorithm, Branch, InitializationScheme, PlanarOptions, Probe, ProbeRecord,
    ReconstructError, ReconstructionReport, VertexBudget,
};
use crate::geometry::{Direction, Point};
use crate::linalg::solve_linear;
use crate::oracle::{CoordinateProjectionOracle, PlanarSectionOracle, SupportOracle};
use crate::scalar::{int, zero, Scalar};

/// Upper and lower bounds `(u, ℓ)` on coordinate `j`, two calls.
fn coordinate_bounds<O: SupportOracle>(
    probe: &mut Probe<O>,
    j: usize,
    branch: Branch,
    current: &[Point],
) -> Result<(Scalar, Scalar), ReconstructError> {
    let n = probe.dimension();
    let upper = probe.query(&Direction::unit(n, j))?;
    probe.record(branch, current.to_vec(), current.to_vec());
    let lower = -probe.query(&Direction::unit(n, j).neg())?;
    probe.record(branch, current.to_vec(), current.to_vec());
    if lower > upper {
        return Err(ReconstructError::inconsistent(
            probe.calls(),
            format!("coordinate {} has lower bound {lower} above upper bound {upper}", j + 1),
        ));
    }
    Ok((upper, lower))
}

/// Recovers at most two vertices with `3n − 1` calls.
///
/// The bounding box is probed first. Its two corners `ℓ` and `u` agree with
/// the hidden endpoints along some pivot coordinate; one extra call per
/// remaining non-flat coordinate decides whether that coordinate is swapped.
pub fn reconstruct_nd_nf2<O: SupportOracle>(oracle: O) -> Result<ReconstructionReport, ReconstructError> {
    let n = oracle.dimension();
    require_dimension(Algorithm::TwoVertex, n, n >= 1)?;
    let mut probe = Probe::new(oracle);
    let mut upper = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(n);
    for j in 0..n {
        let (u, l) = coordinate_bounds(&mut probe, j, Branch::Init, &[])?;
        upper.push(u);
        lower.push(l);
    }
    let Some(pivot) = (0..n).find(|&j| lower[j] < upper[j]) else {
        let p = Point::new(upper);
        if let Some(last) = probe_last(&mut probe) {
            last.outer = vec![p.clone()];
            last.confirmed = vec![p.clone()];
        }
        return Ok(probe.finish(Algorithm::TwoVertex, vec![p]));
    };

    let mut a = Point::new(lower.clone());
    let mut b = Point::new(upper.clone());
    let width_p = &upper[pivot] - &lower[pivot];
    for i in (0..n).filter(|&i| i != pivot && lower[i] < upper[i]) {
        let width_i = &upper[i] - &lower[i];
        let mut d = Direction::zero(n);
        d.set(pivot, -(&width_i / &width_p));
        d.set(i, int(1));
        let value = probe.query(&d)?;
        let base = d.eval(&a);
        if value < base {
            return Err(ReconstructError::inconsistent(
                probe.calls(),
                format!("D{d} = {value} is below dᵀa = {base}"),
            ));
        }
        if value > base {
            if value != &base + &width_i {
                return Err(ReconstructError::inconsistent(
                    probe.calls(),
                    format!("D{d} = {value} matches neither endpoint pairing ({base} or {})", &base + &width_i),
                ));
            }
            let (ai, bi) = (a[i].clone(), b[i].clone());
            a.set(i, bi);
            b.set(i, ai);
        }
        probe.record(Branch::Pair, vec![a.clone(), b.clone()], Vec::new());
    }
    let vertices = vec![a, b];
    if let Some(last) = probe_last(&mut probe) {
        last.outer = vertices.clone();
        last.confirmed = vertices.clone();
    }
    Ok(probe.finish(Algorithm::TwoVertex, vertices))
}

fn probe_last<O: SupportOracle>(probe: &mut Probe<O>) -> Option<&mut ProbeRecord> {
    probe.trace_mut().last_mut()
}

/// Recovers at most three vertices with `5n − 1` calls.
///
/// The planar projection onto the first two coordinates is recovered first.
/// Each further coordinate is then lifted: one projected vertex splits into a
/// vertical segment, two span a plane section solved as a planar problem, and
/// three sit on the vertical edges of a prism where one call per edge pins the
/// height.
pub fn reconstruct_nd_nf3<O: SupportOracle>(oracle: O) -> Result<ReconstructionReport, ReconstructError> {
    let n = oracle.dimension();
    require_dimension(Algorithm::ThreeVertex, n, n >= 2)?;
    let mut probe = Probe::new(oracle);
    let planar_opts = PlanarOptions::new(VertexBudget::Finite(3), InitializationScheme::StandardTriangle);

    let run = {
        let mut projected = CoordinateProjectionOracle::new(probe.oracle_mut(), 2)?;
        run_planar(&mut projected, &planar_opts)?
    };
    let mut points: Vec<Point> = run.vertices.iter().map(|v| v.resized(n)).collect();
    record_sub_run(&mut probe, 0, run.events, None, |p| p.resized(n));

    for k in 2..n {
        let (upper, lower) = coordinate_bounds(&mut probe, k, Branch::Bound, &points)?;
        if lower == upper {
            for p in &mut points {
                p.set(k, lower.clone());
            }
            continue;
        }
        match points.len() {
            1 => {
                let mut top = points[0].clone();
                top.set(k, upper);
                points[0].set(k, lower);
                points.push(top);
                let m = probe.trace_mut().len();
                for r in &mut probe.trace_mut()[m - 2..] {
                    r.branch = Branch::CaseI;
                }
            }
            2 => points = lift_section(&mut probe, &points, k, &lower, &upper, &planar_opts)?,
            3 => lift_prism(&mut probe, &mut points, k, &lower, &upper)?,
            m => unreachable!("{m} vertices after a budget-3 planar run"),
        }
        if let Some(last) = probe_last(&mut probe) {
            last.outer = points.clone();
            last.confirmed = points.clone();
        }
    }
    Ok(probe.finish(Algorithm::ThreeVertex, points))
}

/// Two projected vertices: solve the planar section through them.
fn lift_section<O: SupportOracle>(
    probe: &mut Probe<O>,
    points: &[Point],
    k: usize,
    lower: &Scalar,
    upper: &Scalar,
    planar_opts: &PlanarOptions,
) -> Result<Vec<Point>, ReconstructError> {
    let offset = probe.calls();
    let opts = PlanarOptions {
        init: InitializationScheme::PreProbed(section_rectangle(lower, upper)),
        ..planar_opts.clone()
    };
    let mut section = PlanarSectionOracle::new(probe.oracle_mut(), points[0].clone(), points[1].clone(), k)?;
    let run = run_planar(&mut section, &opts).map_err(|e| e.offset_calls(offset))?;
    let lifted: Vec<Point> = run.vertices.iter().map(|v| section.lift_point(v)).collect();
    let events: Vec<PlanarEvent> = run
        .events
        .into_iter()
        .map(|e| PlanarEvent {
            branch: e.branch,
            outer: e.outer.iter().map(|v| section.lift_point(v)).collect(),
            confirmed: e.confirmed.iter().map(|v| section.lift_point(v)).collect(),
        })
        .collect();
    drop(section);
    record_sub_run(probe, offset, events, Some(Branch::CaseII), Point::clone);
    Ok(lifted)
}

/// Three projected vertices: one call per vertex reads its height.
fn lift_prism<O: SupportOracle>(
    probe: &mut Probe<O>,
    points: &mut [Point],
    k: usize,
    lower: &Scalar,
    upper: &Scalar,
) -> Result<(), ReconstructError> {
    let n = probe.dimension();
    let width = upper - lower;
    let mut heights = Vec::with_capacity(3);
    for j in 0..3 {
        // dᵀ(xⁱ − xʲ + (u − ℓ)e_k) = [i = j] over the first k + 1 coordinates.
        let rows: Vec<Vec<Scalar>> = points
            .iter()
            .map(|xi| {
                let mut row: Vec<Scalar> = xi.minus(&points[j]).coords()[..=k].to_vec();
                row[k] += &width;
                row
            })
            .collect();
        let rhs: Vec<Scalar> = (0..3).map(|i| if i == j { int(1) } else { zero() }).collect();
        let solution = solve_linear(&rows, &rhs).solution().ok_or_else(|| {
            ReconstructError::SingularLift(format!(
                "no probe separates vertex {} from the other two at coordinate {}",
                points[j],
                k + 1
            ))
        })?;
        let d = Direction::new(solution.particular).resized(n);
        let value = probe.query(&d)?;
        let mut floor = points[j].clone();
        floor.set(k, lower.clone());
        let r = value - d.eval(&floor);
        if r < zero() || r > int(1) {
            return Err(ReconstructError::inconsistent(
                probe.calls(),
                format!("height ratio {r} for vertex {} lies outside [0, 1]", points[j]),
            ));
        }
        heights.push(lower + r * &width);
        let partial: Vec<Point> = points
            .iter()
            .zip(&heights)
            .map(|(p, h)| {
                let mut q = p.clone();
                q.set(k, h.clone());
                q
            })
            .collect();
        probe.record(Branch::CaseIII, points.to_vec(), partial);
    }
    for (p, h) in points.iter_mut().zip(heights) {
        p.set(k, h);
    }
    Ok(())
}

/// Appends records for calls made by a planar sub-run, which start after call
/// number `offset` of the enclosing probe.
fn record_sub_run<O: SupportOracle>(
    probe: &mut Probe<O>,
    offset: usize,
    events: Vec<PlanarEvent>,
    branch: Option<Branch>,
    lift: impl Fn(&Point) -> Point,
) {
    let log = probe.oracle_mut().log()[offset..].to_vec();
    debug_assert_eq!(log.len(), events.len());
    for (i, (event, (direction, value))) in events.into_iter().zip(log).enumerate() {
        probe.push_record(ProbeRecord {
            index: offset + i + 1,
            direction,
            value,
            branch: branch.unwrap_or(event.branch),
            outer: event.outer.iter().map(&lift).collect(),
            confirmed: event.confirmed.iter().map(&lift).collect(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::VertexListOracle;

    fn oracle(pts: &[&[i64]]) -> VertexListOracle {
        VertexListOracle::new(pts.iter().map(|p| Point::from_ints(p)).collect()).unwrap()
    }

    fn sorted(pts: &[&[i64]]) -> Vec<Point> {
        let mut v: Vec<Point> = pts.iter().map(|p| Point::from_ints(p)).collect();
        v.sort();
        v
    }

    #[test]
    fn nf2_no_swap() {
        let x: [&[i64]; 2] = [&[0, 0, 0], &[1, 2, 3]];
        let r = reconstruct_nd_nf2(oracle(&x)).unwrap();
        assert_eq!(r.vertices, sorted(&x));
        assert_eq!(r.oracle_calls, 8);
        assert_eq!(r.trace[6].direction, Direction::from_ints(&[-2, 1, 0]));
        assert_eq!(r.trace[7].direction, Direction::from_ints(&[-3, 0, 1]));
    }

    #[test]
    fn nf2_one_swap() {
        let x: [&[i64]; 2] = [&[0, 2, 0], &[1, 0, 3]];
        let r = reconstruct_nd_nf2(oracle(&x)).unwrap();
        assert_eq!(r.vertices, sorted(&x));
        assert_eq!(r.oracle_calls, 8);
        assert_eq!(r.trace[6].value, int(2));
    }

    #[test]
    fn nf2_singleton() {
        let r = reconstruct_nd_nf2(oracle(&[&[7, 7]])).unwrap();
        assert_eq!(r.vertices, sorted(&[&[7, 7]]));
        assert_eq!(r.oracle_calls, 4);
    }

    #[test]
    fn nf2_pivot_not_first_coordinate() {
        let x: [&[i64]; 2] = [&[5, 0, 4, 1], &[5, 3, 1, 1]];
        let r = reconstruct_nd_nf2(oracle(&x)).unwrap();
        assert_eq!(r.vertices, sorted(&x));
        assert_eq!(r.oracle_calls, 8 + 1);
    }

    #[test]
    fn nf3_case_three() {
        let x: [&[i64]; 3] = [&[0, 0, 0], &[1, 0, 1], &[0, 1, 2]];
        let r = reconstruct_nd_nf3(oracle(&x)).unwrap();
        assert_eq!(r.vertices, sorted(&x));
        assert!(r.oracle_calls <= 14, "{}", r.oracle_calls);
        assert_eq!(r.trace.iter().filter(|t| t.branch == Branch::CaseIII).count(), 3);
    }

    #[test]
    fn nf3_singleton_in_r4() {
        let r = reconstruct_nd_nf3(oracle(&[&[1, 2, 3, 4]])).unwrap();
        assert_eq!(r.vertices, sorted(&[&[1, 2, 3, 4]]));
        assert_eq!(r.oracle_calls, 7);
    }

    #[test]
    fn nf3_flat_coordinate() {
        let x: [&[i64]; 2] = [&[0, 0, 0], &[1, 1, 0]];
        let r = reconstruct_nd_nf3(oracle(&x)).unwrap();
        assert_eq!(r.vertices, sorted(&x));
        assert!(r.oracle_calls <= 12, "{}", r.oracle_calls);
    }

    #[test]
    fn nf3_case_one_and_two() {
        // Projection is a point, then a vertical segment, then a triangle.
        let x: [&[i64]; 3] = [&[1, 1, 0, 2], &[1, 1, 3, 2], &[1, 1, 1, 5]];
        let r = reconstruct_nd_nf3(oracle(&x)).unwrap();
        assert_eq!(r.vertices, sorted(&x));
        assert!(r.oracle_calls <= 5 * 4 - 1, "{}", r.oracle_calls);
        assert!(r.trace.iter().any(|t| t.branch == Branch::CaseI));
        assert!(r.trace.iter().any(|t| t.branch == Branch::CaseII));
    }

    #[test]
    fn nf3_trace_indices_are_sequential() {
        let x: [&[i64]; 3] = [&[0, 3, 1, 2], &[2, 0, 0, 0], &[2, 0, 4, 1]];
        let r = reconstruct_nd_nf3(oracle(&x)).unwrap();
        assert_eq!(r.vertices, sorted(&x));
        assert_eq!(r.trace.len(), r.oracle_calls);
        for (i, t) in r.trace.iter().enumerate() {
            assert_eq!(t.index, i + 1);
        }
    }
}
