//! Dense exact linear algebra over the rationals.
//!
//! Matrices are row-major `Vec<Vec<Rat>>`; sizes here never exceed the
//! Picard rank plus a handful of slack columns, so plain Gaussian
//! elimination is all that is needed.

#![allow(clippy::needless_range_loop)]

use num_traits::{One, Signed, Zero};

use super::{Inertia, Rat};

/// Solves `m · x = rhs` for square nonsingular `m`; `None` if singular.
pub fn solve(m: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    assert_eq!(rhs.len(), n, "right-hand side length");
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            assert_eq!(row.len(), n, "solve needs a square matrix");
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut().skip(col) {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(a: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut a = rows.to_vec();
    row_reduce(&mut a).len()
}

/// Basis of `{x : rows · x = 0}` in `dim` unknowns.
pub fn nullspace(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut a = rows.to_vec();
    let pivots = row_reduce(&mut a);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); dim];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

/// Inertia of a symmetric matrix by congruence (symmetric elimination).
///
/// When every remaining diagonal entry vanishes but an off-diagonal `a_ij`
/// does not, row/column `j` is added to row/column `i`, which makes the
/// new diagonal entry `2 a_ij` nonzero.
pub(crate) fn congruence_inertia(sym: &[Vec<Rat>]) -> Inertia {
    let mut a = sym.to_vec();
    let mut inertia = Inertia::default();
    let mut active: Vec<usize> = (0..a.len()).collect();

    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                let pair = active
                    .iter()
                    .find_map(|&i| active.iter().copied().find(|&j| j != i && !a[i][j].is_zero()).map(|j| (i, j)));
                let Some((i, j)) = pair else {
                    inertia.zero += active.len();
                    break;
                };
                let n = a.len();
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };

        let d = a[pivot][pivot].clone();
        if d.is_positive() {
            inertia.pos += 1;
        } else {
            inertia.neg += 1;
        }
        active.retain(|&k| k != pivot);
        for &r in &active {
            if a[r][pivot].is_zero() {
                continue;
            }
            let f = &a[r][pivot] / &d;
            for &c in &active {
                let delta = &f * &a[pivot][c];
                a[r][c] -= delta;
            }
        }
    }
    inertia
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()
    }

    #[test]
    fn solve_small_system() {
        let x = solve(&m(&[&[2, 1], &[1, 3]]), &[rat(3, 1), rat(5, 1)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[rat(1, 1), rat(2, 1)]).is_none());
    }

    #[test]
    fn determinant_and_rank() {
        assert_eq!(determinant(&m(&[&[0, 1, 1], &[1, -2, 0], &[1, 0, -2]])), rat(4, 1));
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 0]])), 2);
        let ns = nullspace(&m(&[&[1, 1, 0]]), 3);
        assert_eq!(ns.len(), 2);
    }

    #[test]
    fn inertia_with_zero_diagonal() {
        let h = congruence_inertia(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!((h.pos, h.neg, h.zero), (1, 1, 0));
        let h = congruence_inertia(&m(&[&[0, 0], &[0, 0]]));
        assert_eq!((h.pos, h.neg, h.zero), (0, 0, 2));
        let h = congruence_inertia(&m(&[&[1, 1], &[1, 1]]));
        assert_eq!((h.pos, h.neg, h.zero), (1, 0, 1));
    }
}
