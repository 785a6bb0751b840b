//! Divisorial Zariski decompositions, chambers and volumes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::GeometrySpec;
use crate::lattice::{linalg, DivClass, Rat};

/// `D = P + N` with `P` movable and `N` an effective combination of primes
/// with negative definite Gram matrix, orthogonal to `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: DivClass,
    /// Prime name → coefficient, only positive coefficients listed.
    pub negative: BTreeMap<String, Rat>,
}

impl ZariskiDecomposition {
    pub fn coefficient(&self, prime: &str) -> Rat {
        self.negative.get(prime).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> ChamberId {
        ChamberId(self.negative.keys().cloned().collect())
    }

    pub fn negative_class(&self, spec: &GeometrySpec) -> DivClass {
        let mut n = DivClass::zero(spec.rank());
        for (name, c) in &self.negative {
            let p = spec.prime(name).expect("decomposition over this catalog");
            n = n.add_scaled(c, &p.class);
        }
        n
    }
}

/// A chamber, named by the primes in the negative support.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberId(pub BTreeSet<String>);

impl ChamberId {
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &ChamberId) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Display for ChamberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(n)?;
        }
        f.write_str("}")
    }
}

impl<S: Into<String>> FromIterator<S> for ChamberId {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        ChamberId(iter.into_iter().map(Into::into).collect())
    }
}

/// Divisorial base loci of a big class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseLoci {
    pub b_minus: BTreeSet<String>,
    pub b_plus: BTreeSet<String>,
}

/// The decomposition of `base + t·slope` for `t` slightly larger than `t0`,
/// where it is affine in `t`.
#[derive(Debug, Clone)]
pub(crate) struct Germ {
    /// Catalog indices of the negative support, ascending.
    pub chamber: Vec<usize>,
    /// `P(t) = p0 + t·p1`.
    pub p0: DivClass,
    pub p1: DivClass,
    /// `x_i(t) = x0_i + t·x1_i` for the primes in `chamber`.
    pub x0: Vec<Rat>,
    pub x1: Vec<Rat>,
}

impl Germ {
    pub fn chamber_id(&self, spec: &GeometrySpec) -> ChamberId {
        self.chamber.iter().map(|&i| spec.primes()[i].name.clone()).collect()
    }
}

/// Sign of `f0 + t·f1` on `(t0, t0 + ε)`, as the pair (value at `t0`, slope).
fn germ_negative(f0: &Rat, f1: &Rat, t0: &Rat) -> bool {
    let v = f0 + t0 * f1;
    v.is_negative() || (v.is_zero() && f1.is_negative())
}

fn names(spec: &GeometrySpec, idx: &[usize]) -> String {
    idx.iter().map(|&i| spec.primes()[i].name.as_str()).collect::<Vec<_>>().join(", ")
}

/// Projection onto `S^⊥` along span(S): returns `(P, x)` with
/// `D = P + Σ x_i·E_i` and `pair(P, E_i) = 0`.
pub(crate) fn project(spec: &GeometrySpec, chamber: &[usize], d: &DivClass) -> Result<(DivClass, Vec<Rat>)> {
    let lat = spec.lattice();
    let classes: Vec<&DivClass> = chamber.iter().map(|&i| &spec.primes()[i].class).collect();
    let gram = lat.gram_of(&classes);
    let rhs: Vec<Rat> = classes.iter().map(|e| lat.form(d, e)).collect();
    let x = linalg::solve(&gram, &rhs).ok_or_else(|| Error::NotNegativeDefinite(names(spec, chamber)))?;
    let mut p = d.clone();
    for (c, e) in x.iter().zip(&classes) {
        p = p.add_scaled(&-c.clone(), e);
    }
    Ok((p, x))
}

/// Batch Zariski-Fujita iteration along a line, evaluated just right of `t0`.
pub(crate) fn germ(spec: &GeometrySpec, base: &DivClass, slope: &DivClass, t0: &Rat) -> Result<Germ> {
    let lat = spec.lattice();
    let primes = spec.primes();
    let mut chamber: Vec<usize> = Vec::new();
    for _ in 0..=primes.len() {
        let classes: Vec<&DivClass> = chamber.iter().map(|&i| &primes[i].class).collect();
        if !lat.is_negative_definite(&classes) {
            return Err(Error::NotNegativeDefinite(names(spec, &chamber)));
        }
        let (p0, x0) = project(spec, &chamber, base)?;
        let (p1, x1) = project(spec, &chamber, slope)?;
        if let Some(k) = (0..chamber.len()).find(|&k| germ_negative(&x0[k], &x1[k], t0)) {
            return Err(Error::InconsistentCatalog(format!(
                "negative coefficient for {} in the Zariski iteration",
                primes[chamber[k]].name
            )));
        }
        let violating: Vec<usize> = (0..primes.len())
            .filter(|i| !chamber.contains(i))
            .filter(|&i| germ_negative(&lat.form(&p0, &primes[i].class), &lat.form(&p1, &primes[i].class), t0))
            .collect();
        if violating.is_empty() {
            return Ok(Germ { chamber, p0, p1, x0, x1 });
        }
        if let Some(&i) = violating.iter().find(|&&i| !primes[i].exceptional) {
            return Err(Error::InconsistentCatalog(format!(
                "non-exceptional prime {} pairs negatively with a positive part",
                primes[i].name
            )));
        }
        chamber.extend(violating);
        chamber.sort_unstable();
    }
    Err(Error::IterationCap(primes.len() + 1))
}

fn require_psef(spec: &GeometrySpec, d: &DivClass) -> Result<()> {
    spec.check_class(d)?;
    if spec.is_pseudo_effective(d) {
        Ok(())
    } else {
        Err(Error::NotPseudoEffective)
    }
}

fn from_germ(spec: &GeometrySpec, g: &Germ) -> ZariskiDecomposition {
    let negative = g
        .chamber
        .iter()
        .zip(&g.x0)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&i, c)| (spec.primes()[i].name.clone(), c.clone()))
        .collect();
    ZariskiDecomposition { positive: g.p0.clone(), negative }
}

pub fn decompose(spec: &GeometrySpec, d: &DivClass) -> Result<ZariskiDecomposition> {
    require_psef(spec, d)?;
    let g = germ(spec, d, &DivClass::zero(spec.rank()), &Rat::zero())?;
    Ok(from_germ(spec, &g))
}

pub fn positive_part(spec: &GeometrySpec, d: &DivClass) -> Result<DivClass> {
    decompose(spec, d).map(|z| z.positive)
}

/// Whether a pseudo-effective class is big, i.e. `q(P(D)) > 0`.
pub fn is_big(spec: &GeometrySpec, d: &DivClass) -> Result<bool> {
    let p = positive_part(spec, d)?;
    Ok(spec.lattice().square(&p).is_positive())
}

/// Primes orthogonal to a movable class.
pub fn null_set(spec: &GeometrySpec, p: &DivClass) -> Result<BTreeSet<String>> {
    spec.check_class(p)?;
    if !spec.is_movable(p) {
        return Err(Error::NotMovable);
    }
    Ok(spec.primes().iter().filter(|q| spec.lattice().form(p, &q.class).is_zero()).map(|q| q.name.clone()).collect())
}

fn big_decomposition(spec: &GeometrySpec, d: &DivClass) -> Result<ZariskiDecomposition> {
    let z = decompose(spec, d)?;
    if !spec.lattice().square(&z.positive).is_positive() {
        return Err(Error::NotBig);
    }
    Ok(z)
}

pub fn chamber_id(spec: &GeometrySpec, d: &DivClass) -> Result<ChamberId> {
    big_decomposition(spec, d).map(|z| z.support())
}

pub fn divisorial_base_loci(spec: &GeometrySpec, d: &DivClass) -> Result<BaseLoci> {
    let z = big_decomposition(spec, d)?;
    let null = null_set(spec, &z.positive)?;
    let b_plus = spec.exceptional_primes().filter(|p| null.contains(&p.name)).map(|p| p.name.clone()).collect();
    Ok(BaseLoci { b_minus: z.negative.keys().cloned().collect(), b_plus })
}

/// `c_X · q(P(D))^n`.
pub fn volume(spec: &GeometrySpec, d: &DivClass) -> Result<Rat> {
    let p = positive_part(spec, d)?;
    Ok(spec.lattice().fujiki_volume(&p))
}

/// `c_X · q(P)^{n-1} · pair(P, E)` for a class `P`.
pub fn restricted_volume_formula(spec: &GeometrySpec, p: &DivClass, e: &DivClass) -> Rat {
    let lat = spec.lattice();
    lat.fujiki() * num_traits::pow(lat.square(p), lat.half_dim() as usize - 1) * lat.form(p, e)
}

/// Restricted volume of a big class to a prime outside its augmented base locus.
pub fn restricted_volume(spec: &GeometrySpec, d: &DivClass, prime: &str) -> Result<Rat> {
    let e = spec.prime(prime)?;
    let loci = divisorial_base_loci(spec, d)?;
    if loci.b_plus.contains(prime) {
        return Err(Error::InAugmentedBaseLocus(prime.to_string()));
    }
    let p = positive_part(spec, d)?;
    Ok(restricted_volume_formula(spec, &p, &e.class))
}

/// The linear formula `D ↦ projection of D onto S^⊥` valid on the chamber of
/// `S`, evaluated at any class.
pub fn chamber_positive_part(spec: &GeometrySpec, chamber: &ChamberId, d: &DivClass) -> Result<DivClass> {
    let idx = indices(spec, chamber)?;
    project(spec, &idx, d).map(|(p, _)| p)
}

pub(crate) fn indices(spec: &GeometrySpec, chamber: &ChamberId) -> Result<Vec<usize>> {
    let mut idx = chamber
        .names()
        .map(|n| spec.primes().iter().position(|p| p.name == n).ok_or_else(|| Error::UnknownPrime(n.to_string())))
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    Ok(idx)
}
