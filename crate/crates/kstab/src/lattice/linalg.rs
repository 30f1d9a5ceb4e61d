//! Exact linear algebra over the rationals.
//!
//! Gaussian elimination with exact pivots: rank, nullspace bases, and
//! particular solutions of linear systems. Matrices are small (intersection
//! lattices of rank at most 8), so dense row reduction is the right tool.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Row-reduces a copy of `m` (rows of equal length), returning the reduced
/// matrix and the pivot column of each pivot row.
fn row_reduce(m: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in &mut a[r] {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..cols {
                    let delta = &factor * &a[r][j];
                    a[i][j] = &a[i][j] - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (a, pivots)
}

/// The rank of a rational matrix.
pub fn rank(m: &[Vec<BigRational>]) -> usize {
    row_reduce(m).1.len()
}

/// A basis of the right nullspace `{ x : m x = 0 }`.
pub fn kernel_basis(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let cols = m.first().map_or(0, Vec::len);
    let (reduced, pivots) = row_reduce(m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -reduced[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// One solution of `m x = rhs`, or `None` when the system is inconsistent.
pub fn solve(m: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(m.len(), rhs.len(), "matrix and right-hand side disagree");
    let cols = m.first().map_or(0, Vec::len);
    let augmented: Vec<Vec<BigRational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (reduced, pivots) = row_reduce(&augmented);
    // A pivot in the appended column marks an inconsistent row.
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = reduced[row][cols].clone();
    }
    Some(x)
}

/// The determinant of a square rational matrix, by Gaussian elimination.
pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] * &inv;
            for j in c..n {
                let delta = &factor * &a[c][j];
                a[i][j] = &a[i][j] - delta;
            }
        }
    }
    det
}

/// Matrix-vector product.
pub fn mat_vec(m: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Dot product.
pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn kernel_of_a_dependent_family() {
        // Rows: (1, 1, -1, -1) has kernel of dimension 3.
        let m = vec![vec![rat(1, 1), rat(1, 1), rat(-1, 1), rat(-1, 1)]];
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 3);
        for v in &basis {
            assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = vec![
            vec![rat(2, 1), rat(1, 1)],
            vec![rat(1, 1), rat(-1, 1)],
        ];
        let x = solve(&m, &[rat(5, 1), rat(1, 1)]).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(1, 1)]);
        let singular = vec![
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(2, 1), rat(2, 1)],
        ];
        assert!(solve(&singular, &[rat(1, 1), rat(3, 1)]).is_none());
        assert!(solve(&singular, &[rat(1, 1), rat(2, 1)]).is_some());
    }

    #[test]
    fn rank_counts_pivots() {
        let m = vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
        ];
        assert_eq!(rank(&m), 2);
    }
}
