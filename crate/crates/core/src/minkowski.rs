//! Chamber enumeration, Minkowski bases `Ω(E)` and the recursive
//! decomposition of positive parts over them.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{ConeMode, GeometrySpec};
use crate::lattice::{linalg, DivClass, Rat, Surd};
use crate::polygon::{self, ConvexPolygon, NOPolygon};
use crate::zariski::{self, ChamberId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Chamber(ChamberId),
    IsotropicRay,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Chamber(c) => write!(f, "chamber {c}"),
            Provenance::IsotropicRay => f.write_str("isotropic ray"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiBasisElement {
    /// Primitive integral class.
    pub class: DivClass,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiTerm {
    pub coeff: Rat,
    pub element: MinkowskiBasisElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiDecomposition {
    pub prime: String,
    pub terms: Vec<MinkowskiTerm>,
    /// Coefficient of `E` in the negative part of the input.
    pub nu: Rat,
}

impl MinkowskiDecomposition {
    /// `Σ coeff·class`, which is the positive part of the input.
    pub fn sum(&self, rank: usize) -> DivClass {
        self.terms.iter().fold(DivClass::zero(rank), |acc, t| acc.add_scaled(&t.coeff, &t.element.class))
    }

    /// `⊕ coeff·Δ_E(ω)`, carrying the input's `ν`.
    pub fn polygon_sum(&self, spec: &GeometrySpec) -> Result<NOPolygon> {
        let mut acc = NOPolygon::new(ConvexPolygon::origin(), Rat::zero(), Surd::zero());
        for t in &self.terms {
            let p = polygon::polygon(spec, &t.element.class, &self.prime)?;
            acc = polygon::polygon_minkowski_sum(&acc, &polygon::polygon_scale(&t.coeff, &p)?)?;
        }
        let mu = acc.mu() + &Surd::from(&self.nu);
        Ok(NOPolygon::new(acc.shape().clone(), self.nu.clone(), mu))
    }
}

fn require_polyhedral(spec: &GeometrySpec) -> Result<()> {
    match spec.mode() {
        ConeMode::Polyhedral => Ok(()),
        ConeMode::Round => Err(Error::WrongMode("polyhedral")),
    }
}

fn require_non_exceptional(spec: &GeometrySpec, prime: &str) -> Result<usize> {
    let p = spec.prime(prime)?;
    if p.exceptional {
        return Err(Error::ExceptionalPrime(prime.to_string()));
    }
    Ok(spec.primes().iter().position(|q| q.name == prime).expect("checked"))
}

/// Every set of exceptional primes with negative definite Gram matrix,
/// ordered by size and then by name.
pub fn enumerate_chambers(spec: &GeometrySpec) -> Result<Vec<ChamberId>> {
    require_polyhedral(spec)?;
    let exc: Vec<_> = spec.exceptional_primes().collect();
    if exc.len() > 24 {
        return Err(Error::IterationCap(1 << 24));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << exc.len()) {
        let members: Vec<_> = (0..exc.len()).filter(|k| mask & (1 << k) != 0).map(|k| exc[k]).collect();
        let classes: Vec<&DivClass> = members.iter().map(|p| &p.class).collect();
        if spec.lattice().is_negative_definite(&classes) {
            out.push(members.iter().map(|p| p.name.clone()).collect::<ChamberId>());
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// The primitive class `E + Σ x_i E_i` orthogonal to every `E_i` in the
/// chamber.
pub fn chamber_generator(spec: &GeometrySpec, chamber: &ChamberId, prime: &str) -> Result<MinkowskiBasisElement> {
    require_non_exceptional(spec, prime)?;
    if chamber.contains(prime) {
        return Err(Error::PrimeInChamber(prime.to_string()));
    }
    let e = &spec.prime(prime)?.class;
    let lat = spec.lattice();
    let idx = zariski::indices(spec, chamber)?;
    let members: Vec<&DivClass> = idx.iter().map(|&i| &spec.primes()[i].class).collect();
    if !lat.is_negative_definite(&members) {
        return Err(Error::NotNegativeDefinite(chamber.names().collect::<Vec<_>>().join(", ")));
    }
    let gram = lat.gram_of(&members);
    let rhs: Vec<Rat> = members.iter().map(|c| -lat.form(e, c)).collect();
    let x = linalg::solve(&gram, &rhs).expect("negative definite systems are regular");
    if let Some(k) = x.iter().position(Signed::is_negative) {
        return Err(Error::InconsistentCatalog(format!(
            "chamber generator of {chamber} has negative coefficient on {}",
            spec.primes()[idx[k]].name
        )));
    }
    let mut d = e.clone();
    for (xi, c) in x.iter().zip(&members) {
        d = d.add_scaled(xi, c);
    }
    Ok(MinkowskiBasisElement { class: d.primitive(), provenance: Provenance::Chamber(chamber.clone()) })
}

/// Primitive generators of the extreme rays of `Mov(X)` with `q = 0`.
pub fn isotropic_extremal_rays(spec: &GeometrySpec) -> Result<Vec<MinkowskiBasisElement>> {
    require_polyhedral(spec)?;
    let rays = spec.mov_rays().expect("polyhedral mode has movable rays");
    Ok(rays
        .iter()
        .filter(|r| spec.lattice().square(r).is_zero())
        .map(|r| MinkowskiBasisElement { class: r.primitive(), provenance: Provenance::IsotropicRay })
        .collect())
}

/// `Ω(E)`: chamber generators followed by isotropic rays, keeping the first
/// occurrence of each primitive class.
pub fn minkowski_basis(spec: &GeometrySpec, prime: &str) -> Result<Vec<MinkowskiBasisElement>> {
    require_polyhedral(spec)?;
    require_non_exceptional(spec, prime)?;
    let mut out: Vec<MinkowskiBasisElement> = Vec::new();
    let mut seen = BTreeSet::new();
    let chambers = enumerate_chambers(spec)?;
    let generators = chambers.iter().map(|c| chamber_generator(spec, c, prime));
    for el in generators.collect::<Result<Vec<_>>>()?.into_iter().chain(isotropic_extremal_rays(spec)?) {
        if seen.insert(el.class.clone()) {
            out.push(el);
        }
    }
    Ok(out)
}

/// Decomposes `P(D)` over `Ω(E)` by repeatedly subtracting the largest
/// movable multiple of the generator of the current chamber.
pub fn minkowski_decompose(spec: &GeometrySpec, d: &DivClass, prime: &str) -> Result<MinkowskiDecomposition> {
    require_polyhedral(spec)?;
    require_non_exceptional(spec, prime)?;
    let basis = minkowski_basis(spec, prime)?;
    let lat = spec.lattice();
    let z = zariski::decompose(spec, d)?;
    let nu = z.coefficient(prime);
    let mut cur = z.positive;
    let mut terms: Vec<MinkowskiTerm> = Vec::new();
    let mut push = |coeff: Rat, class: &DivClass| {
        let element = basis
            .iter()
            .find(|b| b.class == *class)
            .cloned()
            .ok_or_else(|| Error::InconsistentCatalog(format!("{class} is missing from the basis")))?;
        match terms.iter_mut().find(|t| t.element == element) {
            Some(t) => t.coeff += coeff,
            None => terms.push(MinkowskiTerm { coeff, element }),
        }
        Ok::<(), Error>(())
    };

    let cap = spec.primes().len() + 2;
    let mut steps = 0;
    while !cur.is_zero() {
        steps += 1;
        if steps > cap {
            return Err(Error::IterationCap(cap));
        }
        if lat.square(&cur).is_zero() {
            let hit = basis
                .iter()
                .filter(|b| lat.square(&b.class).is_zero())
                .find_map(|b| cur.ratio_to(&b.class).filter(Signed::is_positive).map(|k| (k, b.class.clone())));
            let (k, class) =
                hit.ok_or_else(|| Error::InconsistentCatalog(format!("isotropic class {cur} is not a basis ray")))?;
            push(k, &class)?;
            break;
        }
        let null = zariski::null_set(spec, &cur)?;
        let chamber: ChamberId =
            null.iter().filter(|n| spec.prime(n).map(|p| p.exceptional).unwrap_or(false)).cloned().collect();
        let gen = chamber_generator(spec, &chamber, prime)?.class;
        let prime_exit = spec
            .primes()
            .iter()
            .filter_map(|q| {
                let g = lat.form(&gen, &q.class);
                g.is_positive().then(|| lat.form(&cur, &q.class) / g)
            })
            .min();
        let lp_exit = spec.lp_threshold(&cur, &gen)?;
        let tau = match prime_exit {
            Some(p) => p.min(lp_exit),
            None => lp_exit,
        };
        if !tau.is_positive() {
            return Err(Error::InconsistentCatalog(format!("no movable room along {gen} from {cur}")));
        }
        let next = cur.add_scaled(&-tau.clone(), &gen);
        if lat.square(&next).is_negative() {
            return Err(Error::InconsistentCatalog(format!("{next} left the positive cone")));
        }
        if !next.is_zero() && !lat.square(&next).is_zero() {
            let grown = zariski::null_set(spec, &next)?;
            if !(null.is_subset(&grown) && grown.len() > null.len()) {
                return Err(Error::InconsistentCatalog(format!("null set did not grow at {next}")));
            }
        }
        push(tau, &gen)?;
        cur = next;
    }
    Ok(MinkowskiDecomposition { prime: prime.to_string(), terms, nu })
}

/// A class on the common wall of chamber `inner` and chamber `outer`,
/// where `outer` adds one prime to `inner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub inner: ChamberId,
    pub outer: ChamberId,
    pub class: DivClass,
}

/// Walls between chambers differing by one prime that meet the big cone.
/// The wall class is the sum of the movable rays orthogonal to `outer`
/// plus the primes of `inner`.
pub fn chamber_walls(spec: &GeometrySpec) -> Result<Vec<Wall>> {
    let chambers = enumerate_chambers(spec)?;
    let rays = spec.mov_rays().expect("polyhedral mode has movable rays");
    let lat = spec.lattice();
    let mut out = Vec::new();
    for outer in &chambers {
        for inner in chambers.iter().filter(|c| c.len() + 1 == outer.len() && c.is_subset(outer)) {
            let members = zariski::indices(spec, outer)?;
            let mut p = DivClass::zero(spec.rank());
            for r in rays {
                if members.iter().all(|&i| lat.form(r, &spec.primes()[i].class).is_zero()) {
                    p = &p + r;
                }
            }
            if !lat.square(&p).is_positive() {
                continue;
            }
            for i in zariski::indices(spec, inner)? {
                p = &p + &spec.primes()[i].class;
            }
            out.push(Wall { inner: inner.clone(), outer: outer.clone(), class: p });
        }
    }
    Ok(out)
}

/// Both chamber formulas for the restricted volume along `prime`,
/// evaluated at the wall class.
pub fn wall_values(spec: &GeometrySpec, wall: &Wall, prime: &str) -> Result<(Rat, Rat)> {
    let e = &spec.prime(prime)?.class;
    let f = |c: &ChamberId| -> Result<Rat> {
        let p = zariski::chamber_positive_part(spec, c, &wall.class)?;
        Ok(zariski::restricted_volume_formula(spec, &p, e))
    };
    Ok((f(&wall.inner)?, f(&wall.outer)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use crate::testutil::{big_class, class, fixture};
    use proptest::prelude::*;

    fn chamber(names: &[&str]) -> ChamberId {
        names.iter().copied().collect()
    }

    #[test]
    fn chamber_counts() {
        let g = fixture("hilb2");
        assert_eq!(enumerate_chambers(&g).unwrap(), vec![chamber(&[]), chamber(&["E"])]);
        assert_eq!(enumerate_chambers(&fixture("rank3")).unwrap().len(), 5);
        assert_eq!(enumerate_chambers(&fixture("rank4")).unwrap().len(), 12);
        assert_eq!(enumerate_chambers(&fixture("k3-deg2")).unwrap(), vec![chamber(&[])]);
        assert_eq!(enumerate_chambers(&fixture("round")), Err(Error::WrongMode("polyhedral")));
        // A and B in rank3 are orthogonal (-2)-curves
        let all = enumerate_chambers(&fixture("rank3")).unwrap();
        for c in [chamber(&[]), chamber(&["A"]), chamber(&["B"]), chamber(&["A", "B"])] {
            assert!(all.contains(&c));
        }
    }

    #[test]
    fn hilb2_basis() {
        let g = fixture("hilb2");
        let gen = chamber_generator(&g, &chamber(&["E"]), "E'").unwrap();
        assert_eq!(gen.class, class(&g, "H"));
        assert_eq!(chamber_generator(&g, &chamber(&[]), "E'").unwrap().class, class(&g, "E'"));
        assert_eq!(chamber_generator(&g, &chamber(&["E"]), "E"), Err(Error::ExceptionalPrime("E".into())));
        let iso = isotropic_extremal_rays(&g).unwrap();
        assert_eq!(iso.len(), 1);
        assert_eq!(iso[0].class, class(&g, "H-d"));
        let basis = minkowski_basis(&g, "E'").unwrap();
        let classes: Vec<DivClass> = basis.iter().map(|b| b.class.clone()).collect();
        assert_eq!(classes, vec![class(&g, "H-d"), class(&g, "H")]);
        assert_eq!(basis[0].provenance, Provenance::Chamber(chamber(&[])));
    }

    #[test]
    fn hilb2_decomposition() {
        let g = fixture("hilb2");
        let d = class(&g, "3H-E");
        let m = minkowski_decompose(&g, &d, "E'").unwrap();
        let got: Vec<(Rat, DivClass)> = m.terms.iter().map(|t| (t.coeff.clone(), t.element.class.clone())).collect();
        assert_eq!(got, vec![(rat(2, 1), class(&g, "H-d")), (rat(1, 1), class(&g, "H"))]);
        assert_eq!(m.nu, rat(0, 1));
        assert_eq!(m.polygon_sum(&g).unwrap(), polygon::polygon(&g, &d, "E'").unwrap());

        let iso = minkowski_decompose(&g, &class(&g, "5/2H-5/2d"), "E'").unwrap();
        assert_eq!(iso.terms.len(), 1);
        assert_eq!(iso.terms[0].coeff, rat(5, 2));

        let shifted = minkowski_decompose(&g, &class(&g, "3H+E"), "E'").unwrap();
        assert_eq!(shifted.sum(2), class(&g, "3H"));
        assert_eq!(minkowski_decompose(&g, &d, "E"), Err(Error::ExceptionalPrime("E".into())));
    }

    #[test]
    fn walls_are_continuous() {
        for name in ["hilb2", "rank3", "rank4", "k3-rank3-truncated", "hilb2-curve"] {
            let g = fixture(name);
            let walls = chamber_walls(&g).unwrap();
            assert!(!walls.is_empty(), "{name}");
            for w in &walls {
                assert_eq!(zariski::chamber_id(&g, &w.class).unwrap(), w.inner, "{name}");
                for p in g.primes().iter().filter(|p| !w.outer.contains(&p.name)) {
                    let (a, b) = wall_values(&g, w, &p.name).unwrap();
                    assert_eq!(a, b, "{name} {} {}", w.inner, w.outer);
                }
            }
        }
        let g = fixture("rank3");
        assert_eq!(chamber_walls(&g).unwrap().len(), 5);
    }

    const POLY: [&str; 3] = ["hilb2", "rank3", "rank4"];

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn decomposition_reconstructs(which in 0usize..3, w in prop::collection::vec(0u8..5, 5)) {
            let g = fixture(POLY[which]);
            let prime = g.primes().iter().find(|p| !p.exceptional).unwrap().name.clone();
            let d = big_class(&g, &w);
            let m = minkowski_decompose(&g, &d, &prime).unwrap();
            prop_assert_eq!(m.sum(g.rank()), zariski::positive_part(&g, &d).unwrap());
            prop_assert!(m.terms.iter().all(|t| t.coeff.is_positive()));
            let target = polygon::polygon(&g, &d, &prime).unwrap();
            prop_assert_eq!(m.polygon_sum(&g).unwrap(), target);
        }

        #[test]
        fn basis_is_sound(which in 0usize..3) {
            let g = fixture(POLY[which]);
            for prime in g.primes().iter().filter(|p| !p.exceptional) {
                let basis = minkowski_basis(&g, &prime.name).unwrap();
                let bound = enumerate_chambers(&g).unwrap().len() + isotropic_extremal_rays(&g).unwrap().len();
                prop_assert!(basis.len() <= bound);
                for b in &basis {
                    prop_assert!(g.is_movable(&b.class));
                    prop_assert!(b.class.is_integral());
                    if let Provenance::Chamber(c) = &b.provenance {
                        for n in c.names() {
                            prop_assert!(g.lattice().form(&b.class, &g.prime(n).unwrap().class).is_zero());
                        }
                    }
                }
            }
        }
    }
}
