//! Dense Gauss-Jordan elimination over the rationals.

use crate::scalar::Scalar;
use num_traits::{One, Zero};

/// General solution `particular + span(null_basis)` of `A x = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    /// Solution with every free variable set to zero.
    pub particular: Vec<Scalar>,
    pub null_basis: Vec<Vec<Scalar>>,
}

impl LinearSolution {
    pub fn is_unique(&self) -> bool {
        self.null_basis.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSystem {
    Solved(LinearSolution),
    Infeasible,
}

impl LinearSystem {
    pub fn solution(self) -> Option<LinearSolution> {
        match self {
            LinearSystem::Solved(s) => Some(s),
            LinearSystem::Infeasible => None,
        }
    }
}

/// Solves `A x = rhs` exactly. `a` is row-major with `rhs.len()` rows of equal
/// width.
pub fn solve_linear(a: &[Vec<Scalar>], rhs: &[Scalar]) -> LinearSystem {
    assert_eq!(a.len(), rhs.len(), "row count mismatch");
    assert!(!a.is_empty(), "at least one equation");
    let cols = a[0].len();
    assert!(cols >= 1 && a.iter().all(|r| r.len() == cols), "ragged matrix");

    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Scalar::one() / &m[row][col];
        for v in m[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=cols {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }

    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return LinearSystem::Infeasible;
    }

    let mut particular = vec![Scalar::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = m[r][cols].clone();
    }
    let null_basis = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut z = vec![Scalar::zero(); cols];
            z[free] = Scalar::one();
            for (r, &c) in pivots.iter().enumerate() {
                z[c] = -&m[r][free];
            }
            z
        })
        .collect();
    LinearSystem::Solved(LinearSolution {
        particular,
        null_basis,
    })
}

/// `A x`.
pub fn mat_vec(a: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn identity_system() {
        let a = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])];
        let sol = solve_linear(&a, &ints(&[1, 2, 3])).solution().unwrap();
        assert_eq!(sol.particular, ints(&[1, 2, 3]));
        assert!(sol.is_unique());
    }

    #[test]
    fn underdetermined_single_row() {
        let sol = solve_linear(&[ints(&[1, 1])], &ints(&[2])).solution().unwrap();
        assert_eq!(sol.particular, ints(&[2, 0]));
        assert_eq!(sol.null_basis, vec![ints(&[-1, 1])]);
    }

    #[test]
    fn contradictory_rows() {
        let a = vec![ints(&[1, 0]), ints(&[1, 0])];
        assert_eq!(solve_linear(&a, &ints(&[0, 1])), LinearSystem::Infeasible);
    }

    #[test]
    fn redundant_rows_are_consistent() {
        let a = vec![ints(&[1, 2]), ints(&[2, 4]), ints(&[0, 1])];
        let sol = solve_linear(&a, &ints(&[5, 10, 2])).solution().unwrap();
        assert_eq!(sol.particular, ints(&[1, 2]));
        assert!(sol.is_unique());
    }

    #[test]
    fn zero_matrix() {
        let a = vec![ints(&[0, 0])];
        let sol = solve_linear(&a, &ints(&[0])).solution().unwrap();
        assert_eq!(sol.particular, ints(&[0, 0]));
        assert_eq!(sol.null_basis.len(), 2);
        assert_eq!(solve_linear(&a, &ints(&[1])), LinearSystem::Infeasible);
    }
}
