use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use clap::Subcommand;
use num_traits::Pow;
use okounkov_core::geometry::GeometrySpec;
use okounkov_core::lattice::{DivClass, Rat, Surd};
use okounkov_core::minkowski::{self, MinkowskiBasisElement};
use okounkov_core::polygon::{self, ConePoint, Point};
use okounkov_core::zariski;
use serde_json::{json, Value};

use crate::check::{self, PROPERTIES};
use crate::error::CliError;
use crate::report::Report;
use crate::svg;

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Divisorial Zariski decomposition, base loci and volume.
    Decompose { divisor: String },
    /// The polygon of a class along a prime, with its chamber walk.
    Polygon { divisor: String, prime: String },
    /// Volume of a class; with a prime, also the area/volume chain.
    Volume { divisor: String, prime: Option<String> },
    /// Restricted volume along a prime.
    RestrictedVolume { divisor: String, prime: String },
    /// Decomposition of the positive part over the Minkowski basis.
    Minkowski { divisor: String, prime: String },
    /// The Minkowski basis attached to a non-exceptional prime.
    MinkowskiBasis { prime: String },
    /// Chambers and restricted-volume continuity across their walls.
    Chambers,
    /// Generators of the global cone for a prime.
    ConeGenerators { prime: String },
    /// Randomized invariant suite.
    Check,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Polygon { .. } => "polygon",
            Command::Volume { .. } => "volume",
            Command::RestrictedVolume { .. } => "restricted-volume",
            Command::Minkowski { .. } => "minkowski",
            Command::MinkowskiBasis { .. } => "minkowski-basis",
            Command::Chambers => "chambers",
            Command::ConeGenerators { .. } => "cone-generators",
            Command::Check => "check",
        }
    }
}

pub struct Options<'a> {
    pub svg: Option<&'a Path>,
    pub samples: usize,
    pub seed: u64,
}

fn point(p: &Point) -> Value {
    json!([p.0.to_string(), p.1.to_string()])
}

fn points(ps: &[Point]) -> Vec<Value> {
    ps.iter().map(point).collect()
}

fn show_points(ps: &[Point]) -> String {
    ps.iter().map(|(x, y)| format!("({x}, {y})")).collect::<Vec<_>>().join(", ")
}

fn names(set: impl IntoIterator<Item = impl ToString>) -> Vec<String> {
    set.into_iter().map(|s| s.to_string()).collect()
}

fn braces(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// `coeff*class`, parenthesizing compound expressions.
fn term(spec: &GeometrySpec, coeff: &Rat, class: &DivClass) -> String {
    let e = spec.format_divisor(class);
    let compound = e.starts_with('-') || e[1..].contains(['+', '-', '*']);
    if compound {
        format!("{coeff}*({e})")
    } else {
        format!("{coeff}*{e}")
    }
}

fn element_json(spec: &GeometrySpec, el: &MinkowskiBasisElement) -> Value {
    json!({"class": spec.format_divisor(&el.class), "provenance": el.provenance.to_string()})
}

pub fn execute(spec: &GeometrySpec, cmd: &Command, opts: &Options) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut r = Report::new(cmd.name(), spec.name());
    match cmd {
        Command::Decompose { divisor } => {
            r = r.input("divisor", divisor);
            let d = spec.parse_divisor(divisor)?;
            let z = zariski::decompose(spec, &d)?;
            r.field("positive", spec.format_divisor(&z.positive));
            let neg: BTreeMap<String, String> = z.negative.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
            r.line(format!("negative: {}", braces(&neg.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>())));
            r.set("negative", json!(neg));
            let q = spec.lattice().square(&z.positive);
            r.field("q_positive", &q);
            let big = zariski::is_big(spec, &d)?;
            r.field("big", big);
            if big {
                let c = names(zariski::chamber_id(spec, &d)?.names());
                r.line(format!("chamber: {}", braces(&c)));
                r.set("chamber", json!(c));
            } else {
                r.line("chamber: none (not big)");
                r.set("chamber", Value::Null);
            }
            let loci = zariski::divisorial_base_loci(spec, &d)?;
            let (bm, bp) = (names(&loci.b_minus), names(&loci.b_plus));
            r.line(format!("b_minus: {}", braces(&bm)));
            r.line(format!("b_plus: {}", braces(&bp)));
            r.set("b_minus", json!(bm));
            r.set("b_plus", json!(bp));
            r.field("volume", zariski::volume(spec, &d)?);
        }
        Command::Polygon { divisor, prime } => {
            r = r.input("divisor", divisor).input("prime", prime);
            let d = spec.parse_divisor(divisor)?;
            let (p, trace) = polygon::polygon_with_trace(spec, &d, prime)?;
            r.line(format!("vertices: {}", show_points(p.vertices())));
            r.set("vertices", points(p.vertices()));
            r.set("placed_vertices", points(p.placed().vertices()));
            r.field("nu", p.nu());
            r.field("mu", p.mu());
            r.field("area", p.area());
            let half = spec.lattice().square(&zariski::positive_part(spec, &d)?) / Rat::from_integer(2.into());
            r.field("half_q_positive", &half);
            let ok = p.area() == half;
            r.field("area_identity", pass(ok));
            if !ok {
                r.fail();
            }
            let segs: Vec<Value> = trace
                .segments
                .iter()
                .map(|s| {
                    let start = &Surd::from(p.nu()) + &Surd::from(&s.t_start);
                    let end = &Surd::from(p.nu()) + &s.t_end;
                    r.line(format!("segment [{start}, {end}] chamber {}", s.chamber));
                    json!({"from": start.to_string(), "to": end.to_string(), "chamber": names(s.chamber.names())})
                })
                .collect();
            r.set("segments", segs);
            if let Some(path) = opts.svg {
                let caption = format!("{divisor} along {prime} ({})", spec.name());
                std::fs::write(path, svg::polygon_svg(&p.placed(), &caption))
                    .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
                r.line(format!("svg: {}", path.display()));
            }
        }
        Command::Volume { divisor, prime } => {
            r = r.input("divisor", divisor);
            let d = spec.parse_divisor(divisor)?;
            let lat = spec.lattice();
            let vol = zariski::volume(spec, &d)?;
            let q = lat.square(&zariski::positive_part(spec, &d)?);
            r.field("volume", &vol);
            r.field("q_positive", &q);
            r.field("fujiki", lat.fujiki());
            r.field("half_dim", lat.half_dim());
            if let Some(prime) = prime {
                r = r.input("prime", prime);
                let area = polygon::polygon(spec, &d, prime)?.area();
                r.field("area", &area);
                let n = lat.half_dim() as usize;
                let c = lat.fujiki();
                let via_area = area.to_rational().map(|a| Rat::from_integer(2.into()).pow(n) * c * Pow::pow(&a, n));
                let via_q = c * Pow::pow(&q, n);
                let ok = via_area.as_ref() == Some(&via_q) && via_q == vol;
                r.field(
                    "chain",
                    format!(
                        "2^n*c*area^n = {}, c*q^n = {via_q}, volume = {vol}",
                        via_area.map(|v| v.to_string()).unwrap_or_else(|| "irrational".into())
                    ),
                );
                r.field("chain_verdict", pass(ok));
                if !ok {
                    r.fail();
                }
            }
        }
        Command::RestrictedVolume { divisor, prime } => {
            r = r.input("divisor", divisor).input("prime", prime);
            let d = spec.parse_divisor(divisor)?;
            r.field("restricted_volume", zariski::restricted_volume(spec, &d, prime)?);
        }
        Command::Minkowski { divisor, prime } => {
            r = r.input("divisor", divisor).input("prime", prime);
            let d = spec.parse_divisor(divisor)?;
            let m = minkowski::minkowski_decompose(spec, &d, prime)?;
            let shown: Vec<String> = m.terms.iter().map(|t| term(spec, &t.coeff, &t.element.class)).collect();
            r.field("decomposition", if shown.is_empty() { "0".to_string() } else { shown.join(" + ") });
            r.field("nu", &m.nu);
            let terms: Vec<Value> = m
                .terms
                .iter()
                .map(|t| {
                    let mut v = element_json(spec, &t.element);
                    v["coeff"] = json!(t.coeff.to_string());
                    v
                })
                .collect();
            r.set("terms", terms);
            let target = polygon::polygon(spec, &d, prime)?;
            let sum_ok = m.sum(spec.rank()) == zariski::positive_part(spec, &d)?;
            let poly_ok = m.polygon_sum(spec)? == target;
            r.field("reconstruction", pass(sum_ok));
            r.field("polygon_sum", pass(poly_ok));
            if !(sum_ok && poly_ok) {
                r.fail();
            }
        }
        Command::MinkowskiBasis { prime } => {
            r = r.input("prime", prime);
            let basis = minkowski::minkowski_basis(spec, prime)?;
            for el in &basis {
                r.line(format!("{} ({})", spec.format_divisor(&el.class), el.provenance));
            }
            r.set("elements", basis.iter().map(|el| element_json(spec, el)).collect::<Vec<_>>());
        }
        Command::Chambers => {
            let chambers = minkowski::enumerate_chambers(spec)?;
            let shown: Vec<Vec<String>> = chambers.iter().map(|c| names(c.names())).collect();
            r.line(format!(
                "chambers ({}): {}",
                shown.len(),
                shown.iter().map(|c| braces(c)).collect::<Vec<_>>().join(" ")
            ));
            r.set("chambers", json!(shown));
            let mut walls = Vec::new();
            let mut all_ok = true;
            for w in minkowski::chamber_walls(spec)? {
                let mut checks = Vec::new();
                for p in spec.primes().iter().filter(|p| !w.outer.contains(&p.name)) {
                    let (a, b) = minkowski::wall_values(spec, &w, &p.name)?;
                    all_ok &= a == b;
                    checks.push(
                        json!({"prime": p.name, "inner": a.to_string(), "outer": b.to_string(), "agree": a == b}),
                    );
                }
                r.line(format!(
                    "wall {} | {} at {}: {} primes checked",
                    w.inner,
                    w.outer,
                    spec.format_divisor(&w.class),
                    checks.len()
                ));
                walls.push(json!({
                    "inner": names(w.inner.names()),
                    "outer": names(w.outer.names()),
                    "class": spec.format_divisor(&w.class),
                    "checks": checks,
                }));
            }
            r.set("walls", walls);
            r.field("continuity", pass(all_ok));
            if !all_ok {
                r.fail();
            }
        }
        Command::ConeGenerators { prime } => {
            r = r.input("prime", prime);
            let gens = polygon::cone_generators(spec, prime)?;
            let show = |g: &ConePoint| format!("({}, {}, {})", spec.format_divisor(&g.zeta), g.t, g.y);
            for g in &gens {
                r.line(show(g));
            }
            let v: Vec<Value> = gens
                .iter()
                .map(|g| json!({"class": spec.format_divisor(&g.zeta), "t": g.t.to_string(), "y": g.y.to_string()}))
                .collect();
            r.set("generators", v);
        }
        Command::Check => {
            r = r.input("samples", opts.samples.to_string()).input("seed", opts.seed.to_string());
            let summary = check::run_check(spec, opts.samples, opts.seed);
            let mut tallies = serde_json::Map::new();
            for p in PROPERTIES {
                let t = &summary.tallies[p];
                let ok = t.passed == t.total;
                r.line(format!("{p:<26} {:>5}/{:<5} {}", t.passed, t.total, pass(ok)));
                tallies.insert(p.to_string(), json!({"passed": t.passed, "total": t.total, "verdict": pass(ok)}));
            }
            r.set("properties", Value::Object(tallies));
            let failures: Vec<Value> = summary
                .failures
                .iter()
                .map(|f| {
                    r.line(format!("FAIL {} sample {}: {} ({})", f.property, f.sample, f.witness, f.detail));
                    json!({"property": f.property, "sample": f.sample, "witness": f.witness, "detail": f.detail})
                })
                .collect();
            r.set("failures", failures);
            if !summary.all_passed() {
                r.fail();
            }
        }
    }
    r.elapsed = Some(start.elapsed());
    Ok(r)
}
