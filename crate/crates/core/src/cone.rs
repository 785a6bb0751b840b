//! Polyhedral cones by the double description method.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::lattice::{linalg, DivClass, Rat};
use crate::lp;

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: Vec<Rat>) -> Vec<Rat> {
    DivClass::new(v).primitive().into_coords()
}

/// Extreme rays of `{x ∈ Q^dim : a·x ≥ 0 for every row a}`, as primitive
/// integral vectors in a deterministic order.
///
/// Returns `None` when the cone is not pointed (the rows do not span).
pub fn extreme_rays(constraints: &[Vec<Rat>], dim: usize) -> Option<Vec<Vec<Rat>>> {
    let rows: Vec<Vec<Rat>> = constraints.iter().filter(|r| r.iter().any(|v| !v.is_zero())).cloned().collect();

    // seed with `dim` independent rows: the cone they cut out is simplicial
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<Rat>> = chosen.iter().map(|&k| rows[k].clone()).collect();
        trial.push(rows[i].clone());
        if linalg::rank(&trial) == trial.len() {
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    if chosen.len() < dim {
        return None;
    }
    let basis: Vec<Vec<Rat>> = chosen.iter().map(|&k| rows[k].clone()).collect();
    let mut rays: Vec<Vec<Rat>> = (0..dim)
        .map(|k| {
            let e: Vec<Rat> = (0..dim).map(|i| if i == k { Rat::one() } else { Rat::zero() }).collect();
            primitive(linalg::solve(&basis, &e).expect("independent rows"))
        })
        .collect();

    let mut processed: Vec<usize> = chosen.clone();
    for (i, row) in rows.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let values: Vec<Rat> = rays.iter().map(|r| dot(row, r)).collect();
        let (mut pos, mut zero, mut neg) = (Vec::new(), Vec::new(), Vec::new());
        for (k, v) in values.iter().enumerate() {
            match v.cmp(&Rat::zero()) {
                std::cmp::Ordering::Greater => pos.push(k),
                std::cmp::Ordering::Equal => zero.push(k),
                std::cmp::Ordering::Less => neg.push(k),
            }
        }
        if neg.is_empty() {
            processed.push(i);
            continue;
        }
        let tight = |r: &Vec<Rat>| -> BTreeSet<usize> {
            processed.iter().copied().filter(|&k| dot(&rows[k], r).is_zero()).collect()
        };
        let tight_sets: Vec<BTreeSet<usize>> = rays.iter().map(tight).collect();

        let mut next: Vec<Vec<Rat>> = pos.iter().chain(&zero).map(|&k| rays[k].clone()).collect();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<Vec<Rat>> =
                    tight_sets[p].intersection(&tight_sets[n]).map(|&k| rows[k].clone()).collect();
                if common.len() + 2 < dim || linalg::rank(&common) != dim - 2 {
                    continue;
                }
                let (vp, vn) = (&values[p], &values[n]);
                let ray: Vec<Rat> = rays[n].iter().zip(&rays[p]).map(|(xn, xp)| vp * xn - vn * xp).collect();
                next.push(primitive(ray));
            }
        }
        rays = next;
        processed.push(i);
    }

    let unique: BTreeSet<Vec<Rat>> = rays.into_iter().collect();
    Some(unique.into_iter().collect())
}

/// Inequalities `f·x ≥ 0` cutting out the cone spanned by `generators`,
/// one per facet. `None` unless the cone is full-dimensional.
pub fn facets_of_span(generators: &[Vec<Rat>], dim: usize) -> Option<Vec<Vec<Rat>>> {
    extreme_rays(generators, dim)
}

/// Whether the cone spanned by `generators` contains no line, i.e. `0` is
/// not a convex combination of the nonzero generators.
pub fn span_is_pointed(generators: &[Vec<Rat>], dim: usize) -> bool {
    let nonzero: Vec<&Vec<Rat>> = generators.iter().filter(|g| g.iter().any(|v| !v.is_zero())).collect();
    if nonzero.is_empty() {
        return true;
    }
    let mut a = lp::columns(&nonzero.iter().map(|g| (*g).clone()).collect::<Vec<_>>(), dim);
    a.push(vec![Rat::one(); nonzero.len()]);
    let mut b = vec![Rat::zero(); dim];
    b.push(Rat::one());
    lp::find_feasible(&a, &b).is_none()
}

/// Whether every generator satisfies every inequality.
pub fn satisfies_all(inequalities: &[Vec<Rat>], x: &[Rat]) -> bool {
    inequalities.iter().all(|f| !dot(f, x).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()
    }

    /// Every ray arises as the one-dimensional solution space of some
    /// `dim − 1` tight constraints; test both signs against all rows.
    fn brute_force_rays(rows: &[Vec<Rat>], dim: usize) -> BTreeSet<Vec<Rat>> {
        let mut out = BTreeSet::new();
        let m = rows.len();
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != dim - 1 {
                continue;
            }
            let sub: Vec<Vec<Rat>> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| rows[i].clone()).collect();
            let ns = linalg::nullspace(&sub, dim);
            if ns.len() != 1 {
                continue;
            }
            for sign in [1, -1] {
                let v: Vec<Rat> = ns[0].iter().map(|x| x * rat(sign, 1)).collect();
                if satisfies_all(rows, &v) {
                    out.insert(primitive(v));
                }
            }
        }
        out
    }

    #[test]
    fn orthant_and_square_cone() {
        let rays = extreme_rays(&ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), 3).unwrap();
        assert_eq!(rays.len(), 3);
        // cone over a square: x ± y ≤ z, x ± ... four facets, four rays
        let sq = ints(&[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1]]);
        let rays: BTreeSet<_> = extreme_rays(&sq, 3).unwrap().into_iter().collect();
        let expected: BTreeSet<_> = ints(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]).into_iter().collect();
        assert_eq!(rays, expected);
    }

    #[test]
    fn non_pointed_is_rejected() {
        assert!(extreme_rays(&ints(&[&[1, 0, 0], &[0, 1, 0]]), 3).is_none());
        assert!(span_is_pointed(&ints(&[&[0, 2], &[1, -1]]), 2));
        assert!(!span_is_pointed(&ints(&[&[1, 0], &[-1, 0], &[0, 1]]), 2));
    }

    #[test]
    fn hilb2_movable_cone() {
        // Eff = cone(2δ, H − δ); Mov adds q(·, 2δ) ≥ 0 and q(·, H − δ) ≥ 0
        let facets = facets_of_span(&ints(&[&[0, 2], &[1, -1]]), 2).unwrap();
        let mut rows = facets.clone();
        rows.extend(ints(&[&[0, -4], &[2, 2]]));
        let rays: BTreeSet<_> = extreme_rays(&rows, 2).unwrap().into_iter().collect();
        let expected: BTreeSet<_> = ints(&[&[1, 0], &[1, -1]]).into_iter().collect();
        assert_eq!(rays, expected);
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(extra in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 0..5)) {
            // x, y, z ≥ 0 keeps the cone pointed
            let mut rows = ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
            rows.extend(extra.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect::<Vec<_>>()));
            let rows: Vec<Vec<Rat>> = rows.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect();
            let dd: BTreeSet<_> = extreme_rays(&rows, 3).unwrap().into_iter().collect();
            prop_assert_eq!(dd, brute_force_rays(&rows, 3));
        }

        #[test]
        fn facets_contain_generators(gens in prop::collection::vec(prop::collection::vec(0i64..4, 3), 3..6)) {
            let gens: Vec<Vec<Rat>> = gens.iter().map(|g| g.iter().map(|&v| rat(v, 1)).collect()).collect();
            prop_assume!(linalg::rank(&gens) == 3);
            let facets = facets_of_span(&gens, 3).unwrap();
            for g in &gens {
                prop_assert!(satisfies_all(&facets, g));
            }
            // each facet is tight on at least two independent generators
            for f in &facets {
                let tight: Vec<Vec<Rat>> = gens.iter().filter(|g| dot(f, g).is_zero()).cloned().collect();
                prop_assert_eq!(linalg::rank(&tight), 2);
            }
        }
    }
}
