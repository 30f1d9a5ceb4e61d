//! Exact linear programming: two-phase simplex with Bland's rule.
//!
//! All arithmetic is rational, so feasibility answers are exact, and both
//! outcomes return checkable evidence: a feasible point, or a Farkas
//! functional `y` with `y^T A <= 0` and `y^T b > 0` proving that
//! `Ax = b, x >= 0` has no solution. Every certificate is re-verified
//! against the original data before it is returned.

use super::linalg::{dot, mat_vec};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Outcome of an exact feasibility solve for `Ax = b, x >= 0`.
#[derive(Debug, Clone)]
pub enum Feasibility {
    /// A point satisfying all constraints.
    Feasible(Vec<BigRational>),
    /// A Farkas functional `y` with `y^T A <= 0` and `y^T b > 0`.
    Infeasible(Vec<BigRational>),
}

/// Outcome of an exact maximization of `c^T x` over `Ax = b, x >= 0`.
#[derive(Debug, Clone)]
pub enum Optimum {
    /// An optimal point and its objective value.
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    /// The objective is unbounded above on the feasible region.
    Unbounded,
    /// The constraints are infeasible, with a Farkas functional.
    Infeasible(Vec<BigRational>),
}

struct Tableau {
    /// Constraint rows, kept with nonnegative right-hand sides.
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    /// Basic variable of each row.
    basis: Vec<usize>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn ncols(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.a[row][col].recip();
        for x in &mut self.a[row] {
            *x = &*x * &inv;
        }
        self.b[row] = &self.b[row] * &inv;
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let factor = self.a[i][col].clone();
            for j in 0..self.ncols() {
                let delta = &factor * &self.a[row][j];
                self.a[i][j] = &self.a[i][j] - delta;
            }
            let delta = &factor * &self.b[row];
            self.b[i] = &self.b[i] - delta;
        }
        self.basis[row] = col;
    }

    /// Reduced cost of column `j` under objective `c` (minimization).
    fn reduced_cost(&self, c: &[BigRational], j: usize) -> BigRational {
        let mut cost = c[j].clone();
        for (i, &bi) in self.basis.iter().enumerate() {
            if !c[bi].is_zero() {
                cost -= &c[bi] * &self.a[i][j];
            }
        }
        cost
    }

    /// Runs minimizing simplex iterations with Bland's anti-cycling rule.
    fn simplex_min(&mut self, c: &[BigRational]) -> Step {
        loop {
            // Bland: entering column is the smallest index with a negative
            // reduced cost.
            let entering = (0..self.ncols())
                .find(|&j| !self.basis.contains(&j) && self.reduced_cost(c, j).is_negative());
            let Some(col) = entering else {
                return Step::Optimal;
            };
            // Bland: among minimum-ratio rows, leave with the smallest
            // basis index.
            let mut best: Option<(BigRational, usize)> = None;
            for i in 0..self.a.len() {
                if self.a[i][col].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][col];
                    let better = match &best {
                        None => true,
                        Some((r, row)) => {
                            ratio < *r || (ratio == *r && self.basis[i] < self.basis[*row])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            let Some((_, row)) = best else {
                return Step::Unbounded;
            };
            self.pivot(row, col);
        }
    }

    fn solution(&self, nvars: usize) -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); nvars];
        for (i, &bi) in self.basis.iter().enumerate() {
            if bi < nvars {
                x[bi] = self.b[i].clone();
            }
        }
        x
    }
}

/// Result of phase 1: a feasible tableau restricted to the original
/// columns, or a Farkas functional for the (sign-normalized) rows.
enum Phase1 {
    Feasible(Tableau),
    Infeasible(Vec<BigRational>),
}

fn phase1(a: &[Vec<BigRational>], b: &[BigRational]) -> Phase1 {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // Normalize to b >= 0 and append one artificial column per row.
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (row, bi) in a.iter().zip(b) {
        if bi.is_negative() {
            rows.push(row.iter().map(|x| -x.clone()).collect::<Vec<_>>());
            rhs.push(-bi.clone());
        } else {
            rows.push(row.clone());
            rhs.push(bi.clone());
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        for j in 0..m {
            row.push(if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
    }
    let mut t = Tableau {
        a: rows,
        b: rhs,
        basis: (n..n + m).collect(),
    };
    let mut c = vec![BigRational::zero(); n + m];
    for cj in c.iter_mut().skip(n) {
        *cj = BigRational::one();
    }
    match t.simplex_min(&c) {
        Step::Unbounded => unreachable!("phase-1 objective is bounded below by zero"),
        Step::Optimal => {}
    }
    let objective: BigRational = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bi)| bi >= n)
        .map(|(i, _)| t.b[i].clone())
        .sum();
    if objective.is_positive() {
        // Farkas functional from the final reduced costs of the artificial
        // columns: y_i = 1 - cbar_{n+i}.
        let y: Vec<BigRational> = (0..m)
            .map(|i| BigRational::one() - t.reduced_cost(&c, n + i))
            .collect();
        return Phase1::Infeasible(y);
    }
    // Drive any degenerate artificial variables out of the basis.
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| !t.a[i][j].is_zero()) {
                t.pivot(i, col);
            }
        }
    }
    // Drop rows still led by an artificial variable (they are identically
    // zero on the original columns) and cut the artificial columns off.
    let keep: Vec<usize> = (0..m).filter(|&i| t.basis[i] < n).collect();
    let a2: Vec<Vec<BigRational>> = keep.iter().map(|&i| t.a[i][..n].to_vec()).collect();
    let b2: Vec<BigRational> = keep.iter().map(|&i| t.b[i].clone()).collect();
    let basis2: Vec<usize> = keep.iter().map(|&i| t.basis[i]).collect();
    Phase1::Feasible(Tableau {
        a: a2,
        b: b2,
        basis: basis2,
    })
}

/// Maps a Farkas functional for the sign-normalized rows back to the
/// original rows and verifies it.
fn verified_farkas(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    y_norm: Vec<BigRational>,
) -> Vec<BigRational> {
    let y: Vec<BigRational> = y_norm
        .into_iter()
        .zip(b)
        .map(|(yi, bi)| if bi.is_negative() { -yi } else { yi })
        .collect();
    let n = a.first().map_or(0, Vec::len);
    for j in 0..n {
        let col_dot: BigRational = a.iter().zip(&y).map(|(row, yi)| &row[j] * yi).sum();
        assert!(
            !col_dot.is_positive(),
            "Farkas functional fails on column {j}"
        );
    }
    assert!(
        dot(&y, b).is_positive(),
        "Farkas functional fails on the right-hand side"
    );
    y
}

fn assert_feasible_point(a: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) {
    assert!(
        x.iter().all(|v| !v.is_negative()),
        "solver returned a negative coordinate"
    );
    assert_eq!(mat_vec(a, x), b, "solver returned an infeasible point");
}

/// Decides feasibility of `Ax = b, x >= 0` exactly.
pub fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> Feasibility {
    match phase1(a, b) {
        Phase1::Infeasible(y) => Feasibility::Infeasible(verified_farkas(a, b, y)),
        Phase1::Feasible(t) => {
            let x = t.solution(a.first().map_or(0, Vec::len));
            assert_feasible_point(a, b, &x);
            Feasibility::Feasible(x)
        }
    }
}

/// Maximizes `c^T x` over `Ax = b, x >= 0` exactly.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> Optimum {
    let n = a.first().map_or(0, Vec::len);
    assert_eq!(c.len(), n, "objective length mismatch");
    match phase1(a, b) {
        Phase1::Infeasible(y) => Optimum::Infeasible(verified_farkas(a, b, y)),
        Phase1::Feasible(mut t) => {
            // Maximize c by minimizing -c.
            let neg_c: Vec<BigRational> = c.iter().map(|x| -x.clone()).collect();
            match t.simplex_min(&neg_c) {
                Step::Unbounded => Optimum::Unbounded,
                Step::Optimal => {
                    let x = t.solution(n);
                    assert_feasible_point(a, b, &x);
                    let value = dot(c, &x);
                    Optimum::Optimal { x, value }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn feasible_system_returns_a_point() {
        // x1 + x2 = 2, x1 - x2 = 0 -> (1, 1).
        let a = vec![
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(1, 1), rat(-1, 1)],
        ];
        let b = vec![rat(2, 1), rat(0, 1)];
        match feasible(&a, &b) {
            Feasibility::Feasible(x) => assert_eq!(x, vec![rat(1, 1), rat(1, 1)]),
            Feasibility::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn infeasible_system_returns_verified_farkas() {
        // x1 + x2 = -1 has no nonnegative solution.
        let a = vec![vec![rat(1, 1), rat(1, 1)]];
        let b = vec![rat(-1, 1)];
        match feasible(&a, &b) {
            Feasibility::Infeasible(y) => {
                // y^T b > 0 and y^T A <= 0 are asserted inside; sanity-check
                // the sign here as well.
                assert!((&y[0] * &b[0]).is_positive());
            }
            Feasibility::Feasible(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn maximization_finds_the_vertex() {
        // max x2 s.t. x1 + x2 + s = 3, x2 <= 2 (x2 + s2 = 2).
        let a = vec![
            vec![rat(1, 1), rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 1)],
        ];
        let b = vec![rat(3, 1), rat(2, 1)];
        let c = vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)];
        match maximize(&a, &b, &c) {
            Optimum::Optimal { value, .. } => assert_eq!(value, rat(2, 1)),
            _ => panic!("expected an optimum"),
        }
    }

    #[test]
    fn unbounded_objective_is_detected() {
        // max x1 s.t. x1 - x2 = 0: the ray (t, t) is feasible for all t.
        let a = vec![vec![rat(1, 1), rat(-1, 1)]];
        let b = vec![rat(0, 1)];
        let c = vec![rat(1, 1), rat(0, 1)];
        assert!(matches!(maximize(&a, &b, &c), Optimum::Unbounded));
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        // Duplicate constraint rows leave a degenerate artificial basis.
        let a = vec![
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(1, 1), rat(1, 1)],
        ];
        let b = vec![rat(1, 1), rat(1, 1)];
        match feasible(&a, &b) {
            Feasibility::Feasible(x) => {
                assert_eq!(&x[0] + &x[1], rat(1, 1));
            }
            Feasibility::Infeasible(_) => panic!("expected feasible"),
        }
    }
}
