//! Geometries: a BBF lattice, a catalog of prime divisors and cone data.

mod expr;
mod file;

use std::collections::HashSet;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::cone;
use crate::error::{Error, Result};
use crate::lattice::{BbfLattice, DivClass, Rat};
use crate::lp::{self, LpOutcome};

pub use expr::{format_divisor, is_valid_name, parse_divisor};

/// How the pseudo-effective cone is described.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeMode {
    /// Eff is spanned by finitely many listed generators.
    Polyhedral,
    /// Eff is the closure of the positive cone component containing `ample`.
    Round,
}

impl ConeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ConeMode::Polyhedral => "polyhedral",
            ConeMode::Round => "round",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDivisor {
    pub name: String,
    pub class: DivClass,
    pub exceptional: bool,
}

#[derive(Debug, Clone)]
struct Cones {
    eff_facets: Vec<Vec<Rat>>,
    mov_rays: Vec<DivClass>,
}

/// A validated geometry. The prime catalog is taken to be complete.
#[derive(Debug, Clone)]
pub struct GeometrySpec {
    name: String,
    basis: Vec<String>,
    lattice: BbfLattice,
    primes: Vec<PrimeDivisor>,
    mode: ConeMode,
    effective_generators: Vec<DivClass>,
    ample: Option<DivClass>,
    cones: Option<Cones>,
}

impl PartialEq for GeometrySpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.basis == other.basis
            && self.lattice == other.lattice
            && self.primes == other.primes
            && self.mode == other.mode
            && self.effective_generators == other.effective_generators
            && self.ample == other.ample
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGeometry(msg.into())
}

impl GeometrySpec {
    pub fn new(
        name: String,
        basis: Vec<String>,
        lattice: BbfLattice,
        primes: Vec<PrimeDivisor>,
        mode: ConeMode,
        effective_generators: Vec<DivClass>,
        ample: Option<DivClass>,
    ) -> Result<Self> {
        let rank = lattice.rank();
        if basis.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: basis.len() });
        }
        let mut seen = HashSet::new();
        for n in basis.iter().chain(primes.iter().map(|p| &p.name)) {
            if !is_valid_name(n) {
                return Err(invalid(format!("{n:?} is not a valid name")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let check_rank = |c: &DivClass| {
            if c.rank() == rank {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: rank, found: c.rank() })
            }
        };
        for p in &primes {
            check_rank(&p.class)?;
            if p.class.is_zero() {
                return Err(invalid(format!("prime {} has the zero class", p.name)));
            }
            let q = lattice.square(&p.class);
            if p.exceptional != q.is_negative() {
                return Err(Error::ExceptionalFlagMismatch {
                    name: p.name.clone(),
                    flag: p.exceptional,
                    square: q.to_string(),
                });
            }
        }
        for (i, p) in primes.iter().enumerate() {
            for q in &primes[i + 1..] {
                if lattice.form(&p.class, &q.class).is_negative() {
                    return Err(invalid(format!("distinct primes {} and {} pair negatively", p.name, q.name)));
                }
            }
        }

        let cones = match mode {
            ConeMode::Round => {
                if let Some(p) = primes.iter().find(|p| p.exceptional) {
                    return Err(Error::ExceptionalInRoundMode(p.name.clone()));
                }
                if !effective_generators.is_empty() {
                    return Err(invalid("effective_generators only apply in polyhedral mode"));
                }
                let a = ample.as_ref().ok_or_else(|| invalid("round mode needs an ample class"))?;
                check_rank(a)?;
                if !lattice.square(a).is_positive() {
                    return Err(invalid("ample class must have positive square"));
                }
                None
            }
            ConeMode::Polyhedral => {
                if ample.is_some() {
                    return Err(invalid("ample only applies in round mode"));
                }
                if effective_generators.is_empty() {
                    return Err(invalid("polyhedral mode needs effective generators"));
                }
                for g in &effective_generators {
                    check_rank(g)?;
                }
                let gens: Vec<Vec<Rat>> = effective_generators.iter().map(|g| g.coords().to_vec()).collect();
                if !cone::span_is_pointed(&gens, rank) {
                    return Err(invalid("effective cone contains a line"));
                }
                let eff_facets = cone::facets_of_span(&gens, rank)
                    .ok_or_else(|| invalid("effective cone is not full-dimensional"))?;
                let mut rows = eff_facets.clone();
                for p in &primes {
                    rows.push(gram_times(&lattice, &p.class));
                }
                let mov_rays = cone::extreme_rays(&rows, rank)
                    .expect("subcone of a pointed cone is pointed")
                    .into_iter()
                    .map(DivClass::new)
                    .collect();
                Some(Cones { eff_facets, mov_rays })
            }
        };

        let spec = GeometrySpec { name, basis, lattice, primes, mode, effective_generators, ample, cones };
        for p in &spec.primes {
            if !spec.is_pseudo_effective(&p.class) {
                return Err(invalid(format!("prime {} is not pseudo-effective", p.name)));
            }
        }
        Ok(spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn lattice(&self) -> &BbfLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn primes(&self) -> &[PrimeDivisor] {
        &self.primes
    }

    pub fn mode(&self) -> ConeMode {
        self.mode
    }

    pub fn effective_generators(&self) -> &[DivClass] {
        &self.effective_generators
    }

    pub fn ample(&self) -> Option<&DivClass> {
        self.ample.as_ref()
    }

    pub fn prime(&self, name: &str) -> Result<&PrimeDivisor> {
        self.primes.iter().find(|p| p.name == name).ok_or_else(|| Error::UnknownPrime(name.to_string()))
    }

    pub fn exceptional_primes(&self) -> impl Iterator<Item = &PrimeDivisor> {
        self.primes.iter().filter(|p| p.exceptional)
    }

    pub(crate) fn resolve_name(&self, name: &str) -> Option<DivClass> {
        if let Some(i) = self.basis.iter().position(|b| b == name) {
            return Some(DivClass::unit(self.rank(), i));
        }
        self.primes.iter().find(|p| p.name == name).map(|p| p.class.clone())
    }

    pub fn parse_divisor(&self, text: &str) -> Result<DivClass> {
        parse_divisor(text, self)
    }

    pub fn format_divisor(&self, d: &DivClass) -> String {
        format_divisor(d, &self.basis)
    }

    pub(crate) fn check_class(&self, d: &DivClass) -> Result<()> {
        if d.rank() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: d.rank() });
        }
        Ok(())
    }

    /// Membership in the pseudo-effective cone.
    pub fn is_pseudo_effective(&self, d: &DivClass) -> bool {
        if d.rank() != self.rank() {
            return false;
        }
        match (&self.cones, &self.ample) {
            (Some(c), _) => cone::satisfies_all(&c.eff_facets, d.coords()),
            (None, Some(a)) => !self.lattice.square(d).is_negative() && !self.lattice.form(d, a).is_negative(),
            (None, None) => unreachable!("validated geometry has cone data"),
        }
    }

    /// Exact LP certificate for polyhedral pseudo-effectivity: nonnegative
    /// weights on the effective generators summing to `d`.
    pub fn effective_certificate(&self, d: &DivClass) -> Option<Vec<Rat>> {
        let gens: Vec<Vec<Rat>> = self.effective_generators.iter().map(|g| g.coords().to_vec()).collect();
        lp::conic_combination(&gens, d.coords())
    }

    /// `pair(d, P) ≥ 0` for every catalog prime.
    pub fn is_nef_on_primes(&self, d: &DivClass) -> bool {
        self.primes.iter().all(|p| !self.lattice.form(d, &p.class).is_negative())
    }

    pub fn is_movable(&self, d: &DivClass) -> bool {
        self.is_pseudo_effective(d) && self.is_nef_on_primes(d)
    }

    /// Inequalities `f·x ≥ 0` describing Eff (polyhedral mode only).
    pub fn eff_facets(&self) -> Option<&[Vec<Rat>]> {
        self.cones.as_ref().map(|c| c.eff_facets.as_slice())
    }

    /// Primitive generators of the extreme rays of Mov (polyhedral mode only).
    pub fn mov_rays(&self) -> Option<&[DivClass]> {
        self.cones.as_ref().map(|c| c.mov_rays.as_slice())
    }

    /// Largest `t ≥ 0` with `d − t·dir` in Eff, by exact LP (polyhedral mode).
    pub fn lp_threshold(&self, d: &DivClass, dir: &DivClass) -> Result<Rat> {
        if self.mode != ConeMode::Polyhedral {
            return Err(Error::WrongMode("polyhedral"));
        }
        self.check_class(d)?;
        self.check_class(dir)?;
        // Σ λ_j G_j + t·dir = d, maximize t
        let k = self.effective_generators.len();
        let mut gens: Vec<Vec<Rat>> = self.effective_generators.iter().map(|g| g.coords().to_vec()).collect();
        gens.push(dir.coords().to_vec());
        let a = lp::columns(&gens, self.rank());
        let mut c = vec![Rat::zero(); k + 1];
        c[k] = Rat::from_integer(1.into());
        match lp::maximize(&c, &a, d.coords()) {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Infeasible => Err(Error::NotPseudoEffective),
            LpOutcome::Unbounded => Err(Error::InconsistentCatalog("pseudo-effective threshold is unbounded".into())),
        }
    }

    /// The same geometry with its prime catalog reordered by `order`.
    pub fn with_prime_order(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.primes.len(), "permutation length");
        let mut out = self.clone();
        out.primes = order.iter().map(|&i| self.primes[i].clone()).collect();
        out
    }

    /// The same geometry with one more prime, revalidated.
    pub fn with_extra_prime(&self, prime: PrimeDivisor) -> Result<Self> {
        let mut primes = self.primes.clone();
        primes.push(prime);
        GeometrySpec::new(
            self.name.clone(),
            self.basis.clone(),
            self.lattice.clone(),
            primes,
            self.mode,
            self.effective_generators.clone(),
            self.ample.clone(),
        )
    }

    /// Serializes to the TOML geometry format.
    pub fn to_toml(&self) -> String {
        file::to_toml(self)
    }
}

/// The linear form `x ↦ pair(x, c)` as a coordinate vector.
pub(crate) fn gram_times(lattice: &BbfLattice, c: &DivClass) -> Vec<Rat> {
    lattice.gram().iter().map(|row| row.iter().zip(c.coords()).map(|(g, x)| g * x).sum()).collect()
}

impl FromStr for GeometrySpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        file::parse(text)
    }
}

/// Parses and validates a geometry document.
pub fn parse_geometry(text: &str) -> Result<GeometrySpec> {
    file::parse(text)
}
