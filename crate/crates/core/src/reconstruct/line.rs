use super::{require_dimension, Algorithm, Branch, Probe, ReconstructError, ReconstructionReport, VertexBudget};
use crate::geometry::{Direction, Point};
use crate::oracle::SupportOracle;

/// Recovers a point or interval in R¹ with one or two calls.
pub fn reconstruct_1d<O: SupportOracle>(
    oracle: O,
    budget: VertexBudget,
) -> Result<ReconstructionReport, ReconstructError> {
    require_dimension(Algorithm::Line, oracle.dimension(), oracle.dimension() == 1)?;
    let mut probe = Probe::new(oracle);
    let hi = probe.query(&Direction::from_ints(&[1]))?;
    let top = Point::new(vec![hi.clone()]);
    if budget == VertexBudget::Finite(1) {
        probe.record(Branch::Init, vec![top.clone()], vec![top.clone()]);
        return Ok(probe.finish(Algorithm::Line, vec![top]));
    }
    probe.record(Branch::Init, Vec::new(), Vec::new());
    let lo = -probe.query(&Direction::from_ints(&[-1]))?;
    if lo > hi {
        return Err(ReconstructError::inconsistent(
            2,
            format!("interval lower end {lo} exceeds upper end {hi}"),
        ));
    }
    let vertices = if lo == hi {
        vec![top]
    } else {
        vec![Point::new(vec![lo]), top]
    };
    probe.record(Branch::Init, vertices.clone(), vertices.clone());
    Ok(probe.finish(Algorithm::Line, vertices))
}

/// Reads off the single vertex `(D(e₁), …, D(eₙ))` with exactly `n` calls.
///
/// The caller guarantees the hidden set is a single point.
pub fn reconstruct_nf1<O: SupportOracle>(oracle: O) -> Result<ReconstructionReport, ReconstructError> {
    let n = oracle.dimension();
    let mut probe = Probe::new(oracle);
    let mut coords = Vec::with_capacity(n);
    for j in 0..n {
        coords.push(probe.query(&Direction::unit(n, j))?);
        let partial = Point::new(coords.clone()).resized(n);
        if j + 1 == n {
            probe.record(Branch::Init, vec![partial.clone()], vec![partial]);
        } else {
            probe.record(Branch::Init, Vec::new(), Vec::new());
        }
    }
    Ok(probe.finish(Algorithm::SinglePoint, vec![Point::new(coords)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::VertexListOracle;

    fn line(xs: &[i64]) -> VertexListOracle {
        VertexListOracle::new(xs.iter().map(|&x| Point::from_ints(&[x])).collect()).unwrap()
    }

    #[test]
    fn point_with_unit_budget() {
        let r = reconstruct_1d(line(&[5]), VertexBudget::Finite(1)).unwrap();
        assert_eq!(r.vertices, vec![Point::from_ints(&[5])]);
        assert_eq!(r.oracle_calls, 1);
    }

    #[test]
    fn interval_unbounded_budget() {
        let r = reconstruct_1d(line(&[2, 7, 4]), VertexBudget::Infinite).unwrap();
        assert_eq!(r.vertices, vec![Point::from_ints(&[2]), Point::from_ints(&[7])]);
        assert_eq!(r.oracle_calls, 2);
        assert_eq!(r.trace[0].value, crate::scalar::int(7));
        assert_eq!(r.trace[1].value, crate::scalar::int(-2));
    }

    #[test]
    fn degenerate_interval() {
        let r = reconstruct_1d(line(&[5]), VertexBudget::Infinite).unwrap();
        assert_eq!(r.vertices, vec![Point::from_ints(&[5])]);
        assert_eq!(r.oracle_calls, 2);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let o = VertexListOracle::new(vec![Point::from_ints(&[1, 2])]).unwrap();
        assert!(matches!(
            reconstruct_1d(o, VertexBudget::Infinite),
            Err(ReconstructError::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn single_point_in_rn() {
        for coords in [vec![3, 4], vec![-1, 0, 2], vec![0; 6]] {
            let o = VertexListOracle::new(vec![Point::from_ints(&coords)]).unwrap();
            let r = reconstruct_nf1(o).unwrap();
            assert_eq!(r.vertices, vec![Point::from_ints(&coords)]);
            assert_eq!(r.oracle_calls, coords.len());
        }
    }
}
