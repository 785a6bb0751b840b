//! Pseudo-effective thresholds and chamber walks along `D − t·E`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{ConeMode, GeometrySpec};
use crate::lattice::{real_roots, DivClass, Rat, Surd};
use crate::zariski::{self, ChamberId};

/// One linear piece of the walk: on `[t_start, t_end]` the positive part is
/// `P(D_t) = base + t·slope` and the negative support is `chamber`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub t_start: Rat,
    pub t_end: Surd,
    pub chamber: ChamberId,
    pub base: DivClass,
    pub slope: DivClass,
}

impl Segment {
    pub fn positive_at(&self, t: &Rat) -> DivClass {
        self.base.add_scaled(t, &self.slope)
    }
}

/// The walk of `D − νE − t·E` for `t ∈ [0, μ_E(D) − ν]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakpointTrace {
    pub prime: String,
    /// Coefficient of `E` in `N(D)`.
    pub nu: Rat,
    /// `μ_E(D) − ν`.
    pub width: Surd,
    pub segments: Vec<Segment>,
}

impl BreakpointTrace {
    /// Interior breakpoints, all rational.
    pub fn breakpoints(&self) -> Vec<Rat> {
        self.segments.iter().skip(1).map(|s| s.t_start.clone()).collect()
    }

    /// `pair(P(D_t), E)` along the walk, for `t` in the walk's range.
    pub fn upper(&self, spec: &GeometrySpec, t: &Surd) -> Option<Surd> {
        let e = &spec.prime(&self.prime).ok()?.class;
        let seg = self.segments.iter().find(|s| *t >= s.t_start && *t <= s.t_end)?;
        let lat = spec.lattice();
        Some(&Surd::from(lat.form(&seg.base, e)) + &(t * &Surd::from(lat.form(&seg.slope, e))))
    }
}

fn prime_index(spec: &GeometrySpec, name: &str) -> Result<usize> {
    spec.prime(name)?;
    Ok(spec.primes().iter().position(|p| p.name == name).expect("checked"))
}

/// Largest `t` with `d − t·e` in the closed positive cone, for `d` in it.
fn round_threshold(spec: &GeometrySpec, d: &DivClass, e: &DivClass) -> Result<Surd> {
    let lat = spec.lattice();
    if d.is_zero() {
        return Ok(Surd::zero());
    }
    let (qd, qde, qe) = (lat.square(d), lat.form(d, e), lat.square(e));
    if let Some(lambda) = d.ratio_to(e) {
        return Ok(Surd::from(lambda.max(Rat::zero())));
    }
    if qe.is_zero() {
        if !qde.is_positive() {
            return Err(Error::InconsistentCatalog("isotropic prime orthogonal to a positive class".into()));
        }
        return Ok(Surd::from(qd / (Rat::from_integer(2.into()) * qde)));
    }
    // q(d − t e) = qe·t² − 2·qde·t + qd; the sheet is left at the first root
    let two = Rat::from_integer(2.into());
    let roots = real_roots(&qe, &-(two * qde), &qd)?;
    roots
        .into_iter()
        .find(|r| !r.is_negative())
        .ok_or_else(|| Error::InconsistentCatalog("positive cone threshold has no root".into()))
}

/// `μ_E(D)`: the largest `t` with `D − tE` pseudo-effective.
pub fn mu_threshold(spec: &GeometrySpec, d: &DivClass, prime: &str) -> Result<Surd> {
    let e = &spec.prime(prime)?.class;
    spec.check_class(d)?;
    if !spec.is_pseudo_effective(d) {
        return Err(Error::NotPseudoEffective);
    }
    match spec.mode() {
        ConeMode::Polyhedral => spec.lp_threshold(d, e).map(Surd::from),
        ConeMode::Round => round_threshold(spec, d, e),
    }
}

/// Walks `D0 − t·E` from `t = 0` to `width`, where `D0` is pseudo-effective
/// with `E` outside its negative support.
fn walk(spec: &GeometrySpec, d0: &DivClass, e_idx: usize, width: &Surd) -> Result<Vec<Segment>> {
    let primes = spec.primes();
    let lat = spec.lattice();
    let e = &primes[e_idx].class;
    let minus_e = -e;
    let mut segments: Vec<Segment> = Vec::new();
    let mut t = Rat::zero();
    let mut previous: Vec<usize> = Vec::new();
    while *width > t {
        if segments.len() > primes.len() {
            return Err(Error::IterationCap(primes.len() + 1));
        }
        let g = zariski::germ(spec, d0, &minus_e, &t)?;
        if g.chamber.contains(&e_idx) {
            return Err(Error::InconsistentCatalog(format!("{} entered its own walk", primes[e_idx].name)));
        }
        if !previous.iter().all(|i| g.chamber.contains(i)) {
            return Err(Error::InconsistentCatalog("a prime left the negative support during a walk".into()));
        }
        if g.x1.iter().any(Signed::is_negative) {
            return Err(Error::InconsistentCatalog("negative part decreases along a walk".into()));
        }
        let wall = primes
            .iter()
            .enumerate()
            .filter(|(i, q)| q.exceptional && !g.chamber.contains(i))
            .filter_map(|(_, q)| {
                let h1 = lat.form(&g.p1, &q.class);
                h1.is_negative().then(|| -lat.form(&g.p0, &q.class) / h1)
            })
            .min();
        let chamber = g.chamber_id(spec);
        match wall {
            Some(w) if *width > w => {
                segments.push(Segment { t_start: t, t_end: Surd::from(&w), chamber, base: g.p0, slope: g.p1 });
                t = w;
            }
            _ => {
                segments.push(Segment { t_start: t, t_end: width.clone(), chamber, base: g.p0, slope: g.p1 });
                break;
            }
        }
        previous = g.chamber;
    }
    Ok(segments)
}

/// For a big start, `q(P)` must stay positive before `width` and vanish there.
fn check_volume_profile(spec: &GeometrySpec, segments: &[Segment]) -> Result<()> {
    let lat = spec.lattice();
    let bad = |msg: &str| Err(Error::InconsistentCatalog(msg.to_string()));
    for (k, s) in segments.iter().enumerate() {
        let (a, b, c) =
            (lat.square(&s.slope), Rat::from_integer(2.into()) * lat.form(&s.base, &s.slope), lat.square(&s.base));
        let roots = match real_roots(&a, &b, &c) {
            Ok(r) => r,
            Err(_) => return bad("volume vanishes identically on a walk segment"),
        };
        let start = Surd::from(&s.t_start);
        if roots.iter().any(|r| *r > start && *r < s.t_end) {
            return bad("volume vanishes before the pseudo-effective threshold");
        }
        let last = k + 1 == segments.len();
        let at_end = &(&(&Surd::from(a) * &s.t_end) + &Surd::from(b)) * &s.t_end + Surd::from(c);
        match (last, at_end.signum()) {
            (true, std::cmp::Ordering::Equal) | (false, std::cmp::Ordering::Greater) => {}
            (true, _) => return bad("volume does not vanish at the pseudo-effective threshold"),
            (false, _) => return bad("volume vanishes at an interior breakpoint"),
        }
    }
    Ok(())
}

/// ν, `D − νE` and the walk of a pseudo-effective class.
pub(crate) fn trace(spec: &GeometrySpec, d: &DivClass, prime: &str) -> Result<(BreakpointTrace, DivClass)> {
    let e_idx = prime_index(spec, prime)?;
    let e = spec.primes()[e_idx].class.clone();
    let z = zariski::decompose(spec, d)?;
    let nu = z.coefficient(prime);
    let d0 = d.add_scaled(&-nu.clone(), &e);
    let width = match spec.mode() {
        ConeMode::Polyhedral => Surd::from(spec.lp_threshold(&d0, &e)?),
        ConeMode::Round => round_threshold(spec, &d0, &e)?,
    };
    let segments = walk(spec, &d0, e_idx, &width)?;
    let big = spec.lattice().square(&z.positive).is_positive();
    if big {
        check_volume_profile(spec, &segments)?;
    }
    Ok((BreakpointTrace { prime: prime.to_string(), nu, width, segments }, d0))
}

/// The chamber walk of a big class.
pub fn chamber_walk(spec: &GeometrySpec, d: &DivClass, prime: &str) -> Result<BreakpointTrace> {
    if !zariski::is_big(spec, d)? {
        return Err(Error::NotBig);
    }
    trace(spec, d, prime).map(|(t, _)| t)
}
