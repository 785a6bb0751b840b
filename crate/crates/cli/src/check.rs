//! The randomized invariant suite behind `okounkov check`.

use std::collections::BTreeMap;

use num_traits::{Pow, Signed};
use okounkov_core::error::Result;
use okounkov_core::geometry::{ConeMode, GeometrySpec};
use okounkov_core::lattice::{DivClass, Rat};
use okounkov_core::minkowski::minkowski_decompose;
use okounkov_core::polygon::{chamber_walk, polygon, upper_boundary_is_concave};
use okounkov_core::zariski;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const PROPERTIES: [&str; 10] = [
    "area-identity",
    "volume-chain",
    "chamber-nesting",
    "concavity",
    "superadditivity",
    "log-concavity",
    "translation",
    "idempotence",
    "permutation-invariance",
    "minkowski-reconstruction",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub sample: usize,
    pub property: &'static str,
    pub witness: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckSummary {
    pub samples: usize,
    pub tallies: BTreeMap<&'static str, Tally>,
    pub failures: Vec<Failure>,
}

impl CheckSummary {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// A big class drawn from `rng`: a small nonnegative integer combination of
/// the effective generators (polyhedral) or an ample multiple plus a small
/// integral shift inside the positive cone (round).
fn draw_big(spec: &GeometrySpec, rng: &mut ChaCha8Rng) -> DivClass {
    let lat = spec.lattice();
    let big = |d: &DivClass| zariski::is_big(spec, d).unwrap_or(false);
    match spec.mode() {
        ConeMode::Polyhedral => {
            let gens = spec.effective_generators();
            for _ in 0..32 {
                let mut d = DivClass::zero(spec.rank());
                for g in gens {
                    let w: i64 = rng.random_range(0..=3);
                    d = d.add_scaled(&Rat::from_integer(w.into()), g);
                }
                if big(&d) {
                    return d;
                }
            }
            // interior of the effective cone
            gens.iter().fold(DivClass::zero(spec.rank()), |acc, g| &acc + g)
        }
        ConeMode::Round => {
            let a = spec.ample().expect("round geometries carry an ample class");
            for _ in 0..32 {
                let k: i64 = rng.random_range(1..=4);
                let shift: Vec<i64> = (0..spec.rank()).map(|_| rng.random_range(-3..=3)).collect();
                let d = &a.scale(&Rat::from_integer(k.into())) + &DivClass::from_ints(&shift);
                if lat.square(&d).is_positive() && lat.form(&d, a).is_positive() {
                    return d;
                }
            }
            a.clone()
        }
    }
}

/// The two classes of sample `index`.
pub fn sample_pair(spec: &GeometrySpec, seed: u64, index: usize) -> (DivClass, DivClass) {
    let mut rng = rng_for(seed, index);
    let a = draw_big(spec, &mut rng);
    let b = draw_big(spec, &mut rng);
    (a, b)
}

type Outcome = (&'static str, String, std::result::Result<(), String>);

fn verdict(ok: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn flatten(r: Result<std::result::Result<(), String>>) -> std::result::Result<(), String> {
    r.unwrap_or_else(|e| Err(format!("error {}: {e}", e.code())))
}

fn prime_checks(spec: &GeometrySpec, d: &DivClass, d2: &DivClass, prime: &str, out: &mut Vec<Outcome>) {
    let lat = spec.lattice();
    let witness = format!("{} along {prime}", spec.format_divisor(d));
    let mut push = |name: &'static str, r: Result<std::result::Result<(), String>>| {
        out.push((name, witness.clone(), flatten(r)));
    };

    push(
        "area-identity",
        (|| {
            let area = polygon(spec, d, prime)?.area();
            let half = lat.square(&zariski::positive_part(spec, d)?) / Rat::from_integer(2.into());
            Ok(verdict(area == half, || format!("area {area} but q(P)/2 = {half}")))
        })(),
    );

    push(
        "volume-chain",
        (|| {
            let area = polygon(spec, d, prime)?.area();
            let Some(area) = area.to_rational() else {
                return Ok(Err(format!("irrational area {area}")));
            };
            let n = lat.half_dim() as usize;
            let c = lat.fujiki().clone();
            let two_n = Rat::from_integer(2.into()).pow(n);
            let lhs = two_n * &c * Pow::pow(&area, n);
            let q = lat.square(&zariski::positive_part(spec, d)?);
            let mid = &c * Pow::pow(&q, n);
            let vol = zariski::volume(spec, d)?;
            Ok(verdict(lhs == mid && mid == vol, || format!("{lhs} / {mid} / {vol}")))
        })(),
    );

    let walk = chamber_walk(spec, d, prime);
    push(
        "chamber-nesting",
        walk.clone().map(|w| {
            let ok = w.segments.windows(2).all(|s| s[0].chamber.is_subset(&s[1].chamber));
            verdict(ok, || "a prime left the negative support".into())
        }),
    );
    push(
        "concavity",
        walk.and_then(|w| Ok(verdict(upper_boundary_is_concave(spec, &w)?, || "slopes increase".into()))),
    );

    push(
        "superadditivity",
        (|| {
            let (p1, p2, p12) = (polygon(spec, d, prime)?, polygon(spec, d2, prime)?, polygon(spec, &(d + d2), prime)?);
            let inner = p1.placed().minkowski_sum(&p2.placed())?;
            Ok(verdict(p12.placed().contains(&inner)?, || {
                format!("sum with {} not contained", spec.format_divisor(d2))
            }))
        })(),
    );

    push(
        "translation",
        (|| {
            let z = zariski::decompose(spec, d)?;
            let (p, q) = (polygon(spec, d, prime)?, polygon(spec, &z.positive, prime)?);
            let ok = p.vertices() == q.vertices() && *p.nu() == z.coefficient(prime);
            Ok(verdict(ok, || format!("nu {} against coefficient {}", p.nu(), z.coefficient(prime))))
        })(),
    );

    if spec.mode() == ConeMode::Polyhedral && !spec.prime(prime).map(|p| p.exceptional).unwrap_or(true) {
        push(
            "minkowski-reconstruction",
            (|| {
                let m = minkowski_decompose(spec, d, prime)?;
                let p = zariski::positive_part(spec, d)?;
                let ok = m.sum(spec.rank()) == p && m.polygon_sum(spec)? == polygon(spec, d, prime)?;
                Ok(verdict(ok, || "decomposition does not reassemble".into()))
            })(),
        );
    }
}

fn class_checks(spec: &GeometrySpec, d: &DivClass, d2: &DivClass, out: &mut Vec<Outcome>) {
    let lat = spec.lattice();
    let witness = spec.format_divisor(d);
    let mut push = |name: &'static str, r: Result<std::result::Result<(), String>>| {
        out.push((name, witness.clone(), flatten(r)));
    };

    push(
        "log-concavity",
        (|| {
            let vol = |x: &DivClass| -> Result<Rat> { Ok(lat.square(&zariski::positive_part(spec, x)?)) };
            let (a, b, c) = (vol(d)?, vol(d2)?, vol(&(d + d2))?);
            let gap = &c - &a - &b;
            let four = Rat::from_integer(4.into());
            let ok = !gap.is_negative() && &gap * &gap >= four * &a * &b;
            Ok(verdict(ok, || format!("q values {a}, {b}, {c}")))
        })(),
    );

    push(
        "idempotence",
        (|| {
            let z = zariski::decompose(spec, d)?;
            let again = zariski::decompose(spec, &z.positive)?;
            Ok(verdict(again.positive == z.positive && again.negative.is_empty(), || "P(P(D)) differs".into()))
        })(),
    );

    push(
        "permutation-invariance",
        (|| {
            let z = zariski::decompose(spec, d)?;
            let n = spec.primes().len();
            let orders: [Vec<usize>; 2] = [(0..n).rev().collect(), (0..n).map(|i| (i + 1) % n).collect()];
            for order in &orders {
                if zariski::decompose(&spec.with_prime_order(order), d)? != z {
                    return Ok(Err(format!("prime order {order:?} changes the result")));
                }
            }
            Ok(Ok(()))
        })(),
    );
}

fn run_sample(spec: &GeometrySpec, seed: u64, index: usize) -> Vec<Outcome> {
    let (d, d2) = sample_pair(spec, seed, index);
    let mut out = Vec::new();
    class_checks(spec, &d, &d2, &mut out);
    for p in spec.primes() {
        prime_checks(spec, &d, &d2, &p.name, &mut out);
    }
    out
}

/// Runs every property on `samples` seeded classes; samples are evaluated
/// in parallel and aggregated by index.
pub fn run_check(spec: &GeometrySpec, samples: usize, seed: u64) -> CheckSummary {
    let results: Vec<Vec<Outcome>> = (0..samples).into_par_iter().map(|i| run_sample(spec, seed, i)).collect();
    let mut tallies: BTreeMap<&'static str, Tally> = PROPERTIES.iter().map(|p| (*p, Tally::default())).collect();
    let mut failures = Vec::new();
    for (sample, outcomes) in results.into_iter().enumerate() {
        for (property, witness, r) in outcomes {
            let t = tallies.get_mut(property).expect("known property");
            t.total += 1;
            match r {
                Ok(()) => t.passed += 1,
                Err(detail) => failures.push(Failure { sample, property, witness, detail }),
            }
        }
    }
    CheckSummary { samples, tallies, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> GeometrySpec {
        let path = format!("{}/../../fixtures/{name}.geom", env!("CARGO_MANIFEST_DIR"));
        crate::load_geometry(std::path::Path::new(&path)).unwrap()
    }

    #[test]
    fn samples_are_big_and_reproducible() {
        for name in ["hilb2", "rank4", "round"] {
            let g = fixture(name);
            for i in 0..20 {
                let (a, b) = sample_pair(&g, 11, i);
                assert!(zariski::is_big(&g, &a).unwrap() && zariski::is_big(&g, &b).unwrap());
                assert_eq!(sample_pair(&g, 11, i), (a, b));
            }
            assert_ne!(sample_pair(&g, 11, 0), sample_pair(&g, 12, 0));
        }
    }

    #[test]
    fn tallies_count_every_prime() {
        let g = fixture("hilb2");
        let s = run_check(&g, 5, 1);
        assert!(s.all_passed());
        assert_eq!(s.tallies["area-identity"].total, 10);
        assert_eq!(s.tallies["minkowski-reconstruction"].total, 5);
        assert_eq!(s.tallies["log-concavity"].total, 5);
    }
}
