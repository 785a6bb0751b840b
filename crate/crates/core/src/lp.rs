//! Exact two-phase simplex over the rationals.
//!
//! Problems are in standard form: maximize `c·x` subject to `A·x = b`,
//! `x ≥ 0`. Bland's rule is used for both pivot choices, which rules out
//! cycling; sizes in this crate are tiny, so a dense tableau is fine.

use num_traits::{One, Signed, Zero};

use crate::lattice::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// Constraint rows; the last entry of each is the right-hand side.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry is minus the current objective value.
    cost: Vec<Rat>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
        self.basis[r] = c;
    }

    /// Runs to optimality over columns `< limit`; `false` if unbounded.
    fn run(&mut self, limit: usize) -> bool {
        loop {
            let Some(c) = (0..limit).find(|&j| self.cost[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn value(&self) -> Rat {
        -self.cost[self.width].clone()
    }

    fn point(&self, n: usize) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); n];
        for (row, &j) in self.rows.iter().zip(&self.basis) {
            if j < n {
                x[j] = row[self.width].clone();
            }
        }
        x
    }
}

/// Maximizes `c·x` over `{x ≥ 0 : A·x = b}`.
pub fn maximize(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m, "right-hand side length");
    assert!(a.iter().all(|r| r.len() == n), "constraint width");

    // phase 1: artificials n..n+m, maximize −Σ artificials
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Rat> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
        r.push(if flip { -bi } else { bi.clone() });
        rows.push(r);
    }
    let mut cost = vec![Rat::zero(); width + 1];
    for r in &rows {
        for j in 0..n {
            cost[j] += &r[j];
        }
        cost[width] += &r[width];
    }
    let mut t = Tableau { rows, basis: (n..width).collect(), cost, width };
    t.run(width);
    if !t.value().is_zero() {
        return LpOutcome::Infeasible;
    }

    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase 2
    let mut cost = vec![Rat::zero(); width + 1];
    cost[..n].clone_from_slice(c);
    for (row, &j) in t.rows.iter().zip(&t.basis) {
        if !c[j].is_zero() {
            for (v, r) in cost.iter_mut().zip(row) {
                *v -= &c[j] * r;
            }
        }
    }
    t.cost = cost;
    if !t.run(n) {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal { value: t.value(), point: t.point(n) }
}

/// Some `x ≥ 0` with `A·x = b`, if one exists.
pub fn find_feasible(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.first().map_or(0, Vec::len);
    match maximize(&vec![Rat::zero(); n], a, b) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

/// Nonnegative coefficients `λ` with `Σ λ_j·g_j = target`, if any.
pub fn conic_combination(generators: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    if generators.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    find_feasible(&columns(generators, target.len()), target)
}

/// Transposes a list of generators into constraint rows.
pub(crate) fn columns(generators: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    (0..dim).map(|i| generators.iter().map(|g| g[i].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{linalg, rat};
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()
    }

    fn vecr(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    /// Best objective over all basic feasible solutions; `None` if there
    /// are none. Assumes `A` has full row rank.
    fn brute_force(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> Option<Rat> {
        let n = c.len();
        let m = a.len();
        let mut best: Option<Rat> = None;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != m {
                continue;
            }
            let cols: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
            let sq: Vec<Vec<Rat>> = a.iter().map(|r| cols.iter().map(|&j| r[j].clone()).collect()).collect();
            let Some(xb) = linalg::solve(&sq, b) else { continue };
            if xb.iter().any(Signed::is_negative) {
                continue;
            }
            let v: Rat = cols.iter().zip(&xb).map(|(&j, x)| &c[j] * x).sum();
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
        best
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 (slacks s1..s3)
        let a = ints(&[&[1, 0, 1, 0, 0], &[0, 2, 0, 1, 0], &[3, 2, 0, 0, 1]]);
        let out = maximize(&vecr(&[3, 5, 0, 0, 0]), &a, &vecr(&[4, 12, 18]));
        let LpOutcome::Optimal { value, point } = out else { panic!("{out:?}") };
        assert_eq!(value, rat(36, 1));
        assert_eq!(&point[..2], &vecr(&[2, 6])[..]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = ints(&[&[1, 1]]);
        assert_eq!(maximize(&vecr(&[0, 0]), &a, &vecr(&[-1])), LpOutcome::Infeasible);
        let a = ints(&[&[1, -1]]);
        assert_eq!(maximize(&vecr(&[1, 0]), &a, &vecr(&[1])), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = ints(&[&[1, 1, 0], &[2, 2, 0], &[0, 0, 1]]);
        let out = maximize(&vecr(&[1, 2, 0]), &a, &vecr(&[1, 2, 3]));
        assert_eq!(out, LpOutcome::Optimal { value: rat(2, 1), point: vecr(&[0, 1, 3]) });
    }

    #[test]
    fn cone_membership() {
        // Hilb² effective generators 2δ and H − δ
        let gens = ints(&[&[0, 2], &[1, -1]]);
        assert!(conic_combination(&gens, &vecr(&[1, -1])).is_some());
        assert!(conic_combination(&gens, &vecr(&[1, -2])).is_none());
        assert!(conic_combination(&gens, &vecr(&[0, 0])).is_some());
        assert!(conic_combination(&[], &vecr(&[0, 0])).is_some());
    }

    proptest! {
        #[test]
        fn agrees_with_vertex_enumeration(
            a in prop::collection::vec(prop::collection::vec(-4i64..5, 4), 2),
            b in prop::collection::vec(-6i64..7, 2),
            c in prop::collection::vec(-5i64..6, 4),
        ) {
            // bound the region with Σx + s = 10 so the optimum is finite
            let mut rows: Vec<Vec<Rat>> = a.iter().map(|r| { let mut v = vecr(r); v.push(rat(0, 1)); v }).collect();
            rows.push(vecr(&[1, 1, 1, 1, 1]));
            let mut rhs = vecr(&b);
            rhs.push(rat(10, 1));
            prop_assume!(linalg::rank(&rows) == rows.len());
            let mut cost = vecr(&c);
            cost.push(rat(0, 1));
            let expected = brute_force(&cost, &rows, &rhs);
            match maximize(&cost, &rows, &rhs) {
                LpOutcome::Optimal { value, point } => {
                    prop_assert_eq!(Some(value.clone()), expected);
                    prop_assert!(point.iter().all(|x| !x.is_negative()));
                    for (row, bi) in rows.iter().zip(&rhs) {
                        let lhs: Rat = row.iter().zip(&point).map(|(p, q)| p * q).sum();
                        prop_assert_eq!(&lhs, bi);
                    }
                    let v: Rat = cost.iter().zip(&point).map(|(p, q)| p * q).sum();
                    prop_assert_eq!(v, value);
                }
                LpOutcome::Infeasible => prop_assert_eq!(expected, None),
                LpOutcome::Unbounded => prop_assert!(false, "bounded region reported unbounded"),
            }
        }
    }
}
