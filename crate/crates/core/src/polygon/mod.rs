//! Newton-Okounkov-type polygons `Δ_E(D) = {0 ≤ t ≤ μ, 0 ≤ y ≤ pair(P(D − tE), E)}`
//! and the global cone they fit into.

mod shape;
mod walk;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{ConeMode, GeometrySpec, PrimeDivisor};
use crate::lattice::{DivClass, Rat, Surd};
use crate::zariski;

pub use shape::{ConvexPolygon, Point};
pub use walk::{chamber_walk, mu_threshold, BreakpointTrace, Segment};

/// A polygon in normalized coordinates (`t` measured from `ν`), together
/// with `ν = ν_E(D)` and the threshold `μ = μ_E(D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NOPolygon {
    shape: ConvexPolygon,
    nu: Rat,
    mu: Surd,
}

impl NOPolygon {
    pub fn new(shape: ConvexPolygon, nu: Rat, mu: Surd) -> Self {
        NOPolygon { shape, nu, mu }
    }

    pub fn shape(&self) -> &ConvexPolygon {
        &self.shape
    }

    pub fn vertices(&self) -> &[Point] {
        self.shape.vertices()
    }

    pub fn nu(&self) -> &Rat {
        &self.nu
    }

    /// `μ_E(D)`, in the original (un-normalized) `t` coordinate.
    pub fn mu(&self) -> &Surd {
        &self.mu
    }

    pub fn area(&self) -> Surd {
        self.shape.area()
    }

    /// The polygon translated to the original coordinates, `t ∈ [ν, μ]`.
    pub fn placed(&self) -> ConvexPolygon {
        self.shape.translate(&(Surd::from(&self.nu), Surd::zero())).expect("rational translation keeps the radicand")
    }
}

pub fn polygon_area(p: &NOPolygon) -> Surd {
    p.area()
}

pub fn polygon_minkowski_sum(p: &NOPolygon, q: &NOPolygon) -> Result<NOPolygon> {
    let shape = p.shape.minkowski_sum(&q.shape)?;
    shape::common_radicand([&p.mu, &q.mu])?;
    Ok(NOPolygon { shape, nu: &p.nu + &q.nu, mu: &p.mu + &q.mu })
}

pub fn polygon_scale(lambda: &Rat, p: &NOPolygon) -> Result<NOPolygon> {
    let shape = p.shape.scale(lambda)?;
    Ok(NOPolygon { shape, nu: &p.nu * lambda, mu: &p.mu * &Surd::from(lambda) })
}

/// Whether `q ⊆ p`, in normalized coordinates.
pub fn polygon_contains(p: &NOPolygon, q: &NOPolygon) -> Result<bool> {
    p.shape.contains(&q.shape)
}

/// Vertices from a walk: the lower edge, the right edge at the threshold and
/// the concave upper chain back to `t = 0`.
fn assemble(spec: &GeometrySpec, trace: &BreakpointTrace, d0: &DivClass) -> Result<ConvexPolygon> {
    let lat = spec.lattice();
    let e = &spec.prime(&trace.prime)?.class;
    let zero = Surd::zero();
    let mut pts: Vec<Point> = vec![(zero.clone(), zero.clone()), (trace.width.clone(), zero.clone())];
    if trace.segments.is_empty() {
        let p = zariski::positive_part(spec, d0)?;
        pts.push((zero.clone(), Surd::from(lat.form(&p, e))));
    } else {
        let last = trace.segments.last().expect("nonempty");
        let top = trace.upper(spec, &last.t_end).expect("endpoint of the walk");
        pts.push((trace.width.clone(), top));
        for s in trace.segments.iter().rev() {
            let y = lat.form(&s.positive_at(&s.t_start), e);
            pts.push((Surd::from(&s.t_start), Surd::from(y)));
        }
    }
    ConvexPolygon::from_ccw(pts)
}

/// `Δ_E(D)` with its walk, for pseudo-effective `D`.
pub fn polygon_with_trace(spec: &GeometrySpec, d: &DivClass, prime: &str) -> Result<(NOPolygon, BreakpointTrace)> {
    let (trace, d0) = walk::trace(spec, d, prime)?;
    let shape = assemble(spec, &trace, &d0)?;
    let mu = &Surd::from(&trace.nu) + &trace.width;
    Ok((NOPolygon { shape, nu: trace.nu.clone(), mu }, trace))
}

pub fn polygon(spec: &GeometrySpec, d: &DivClass, prime: &str) -> Result<NOPolygon> {
    polygon_with_trace(spec, d, prime).map(|(p, _)| p)
}

/// A point `(ζ, t, y)` of `N¹(X) × R²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConePoint {
    pub zeta: DivClass,
    pub t: Surd,
    pub y: Surd,
}

impl ConePoint {
    pub fn new(zeta: DivClass, t: impl Into<Surd>, y: impl Into<Surd>) -> Self {
        ConePoint { zeta, t: t.into(), y: y.into() }
    }

    /// Coordinates in `Q^{ρ+2}` when `t` and `y` are rational.
    pub fn to_rational(&self) -> Option<Vec<Rat>> {
        let mut v = self.zeta.coords().to_vec();
        v.push(self.t.to_rational()?);
        v.push(self.y.to_rational()?);
        Some(v)
    }
}

/// `ν_E(ζ) ≤ t ≤ μ_E(ζ)` and `0 ≤ y ≤ pair(P(ζ − tE), E)`.
pub fn cone_contains(spec: &GeometrySpec, prime: &str, pt: &ConePoint) -> Result<bool> {
    spec.prime(prime)?;
    let (p, trace) = polygon_with_trace(spec, &pt.zeta, prime)?;
    let nu = Surd::from(p.nu());
    if pt.t < nu || pt.t > *p.mu() || pt.y.is_negative() {
        return Ok(false);
    }
    let s = &pt.t - &nu;
    let top = if trace.segments.is_empty() {
        // the whole walk is the point t = ν
        let (_, d0) = walk::trace(spec, &pt.zeta, prime)?;
        let e = &spec.prime(prime)?.class;
        Surd::from(spec.lattice().form(&zariski::positive_part(spec, &d0)?, e))
    } else {
        trace.upper(spec, &s).expect("t within the walk")
    };
    Ok(pt.y <= top)
}

/// Generators `(D_i, 0, pair(P(D_i), E))`, `(D_i, 0, 0)` and `(E, 1, 0)` of
/// the global cone, where `D_i` runs over the extreme rays of the movable
/// cone and the exceptional primes; duplicates up to positive scaling are
/// dropped.
pub fn cone_generators(spec: &GeometrySpec, prime: &str) -> Result<Vec<ConePoint>> {
    let e = spec.prime(prime)?.class.clone();
    let mov = spec.mov_rays().ok_or(Error::WrongMode("polyhedral"))?;
    let lat = spec.lattice();
    let mut ds: Vec<DivClass> = mov.to_vec();
    ds.extend(spec.exceptional_primes().map(|p| p.class.clone()));

    let mut points = Vec::new();
    for d in &ds {
        let p = zariski::positive_part(spec, d)?;
        points.push(ConePoint::new(d.clone(), Rat::zero(), lat.form(&p, &e)));
    }
    for d in &ds {
        points.push(ConePoint::new(d.clone(), Rat::zero(), Rat::zero()));
    }
    points.push(ConePoint::new(e, Rat::one(), Rat::zero()));

    let mut seen = BTreeSet::new();
    points.retain(|p| {
        let v = DivClass::new(p.to_rational().expect("rational generators"));
        seen.insert(v.primitive())
    });
    Ok(points)
}

/// For big rational `D`: the synthetic prime class `k·P(D)`, with `k` the
/// least positive integer making it integral, and its polygon, the
/// triangle `(0,0), (1/k,0), (0, k·q(P))`.
pub fn simplex_flag(spec: &GeometrySpec, d: &DivClass) -> Result<(DivClass, NOPolygon)> {
    let p = zariski::positive_part(spec, d)?;
    let q = spec.lattice().square(&p);
    if !q.is_positive() {
        return Err(Error::NotBig);
    }
    let k = Rat::from_integer(p.denominator());
    let e = p.scale(&k);
    let width = k.recip();
    let shape = ConvexPolygon::from_ccw(vec![
        (Surd::zero(), Surd::zero()),
        (Surd::from(&width), Surd::zero()),
        (Surd::zero(), Surd::from(&k * &q)),
    ])?;
    Ok((e, NOPolygon { shape, nu: Rat::zero(), mu: Surd::from(width) }))
}

/// The geometry extended by a non-exceptional prime `name` of class `class`.
pub fn with_synthetic_prime(spec: &GeometrySpec, name: &str, class: DivClass) -> Result<GeometrySpec> {
    let exceptional = spec.lattice().square(&class).is_negative();
    spec.with_extra_prime(PrimeDivisor { name: name.to_string(), class, exceptional })
}

/// Whether the upper boundary of a walk is concave: segment slopes of
/// `t ↦ pair(P(D_t), E)` never increase.
pub fn upper_boundary_is_concave(spec: &GeometrySpec, trace: &BreakpointTrace) -> Result<bool> {
    let e = &spec.prime(&trace.prime)?.class;
    let slopes: Vec<Rat> = trace.segments.iter().map(|s| spec.lattice().form(&s.slope, e)).collect();
    Ok(slopes.windows(2).all(|w| w[1] <= w[0]))
}

/// Only the last walk endpoint may be irrational.
pub fn breakpoints_rational(trace: &BreakpointTrace) -> bool {
    let n = trace.segments.len();
    trace.segments.iter().take(n.saturating_sub(1)).all(|s| s.t_end.is_rational())
}

pub fn mode_allows_cone(spec: &GeometrySpec) -> bool {
    spec.mode() == ConeMode::Polyhedral
}
