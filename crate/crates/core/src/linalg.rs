//! Exact Gaussian elimination on small dense rational matrices.

use num_traits::Zero;

use crate::rational::{self, Rational};

pub type Matrix = Vec<Vec<Rational>>;

fn bit_size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Row in `from..` whose entry in `col` is nonzero with the smallest
/// numerator-plus-denominator bit size; ties go to the lowest row.
fn choose_pivot(m: &Matrix, col: usize, from: usize) -> Option<usize> {
    (from..m.len()).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| (bit_size(&m[i][col]), i))
}

/// Reduced row echelon form in place; returns the pivot columns.
fn row_reduce(m: &mut Matrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = choose_pivot(m, c, r) else {
            continue;
        };
        m.swap(r, p);
        let inv = rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut work = m.clone();
    row_reduce(&mut work, cols).len()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { rational::one() } else { rational::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `m x = b` for square nonsingular `m`.
pub fn solve(m: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    if b.len() != n || m.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).filter(|&k| !row[k].is_zero()).fold(rational::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { rational::one() } else { rational::zero() }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn inverse_of_unit_triangular() {
        let a = m(&[&[1, -1], &[0, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, m(&[&[1, 1], &[0, 1]]));
        assert_eq!(mul(&a, &inv), identity(2));
    }

    #[test]
    fn singular_and_rank() {
        let a = m(&[&[1, 1], &[0, 0]]);
        assert!(inverse(&a).is_none());
        assert_eq!(rank(&a), 1);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), 2);
        assert_eq!(rank(&vec![]), 0);
    }

    #[test]
    fn solve_rational_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(1), int(2)]).unwrap();
        assert_eq!(x, vec![ratio(1, 5), ratio(3, 5)]);
    }
}
