//! The TOML geometry document.
//!
//! ```toml
//! name = "hilb2"
//! half_dim = 2
//! fujiki = "3"
//! basis = ["H", "d"]
//! gram = [[2, 0], [0, -2]]
//! mode = "polyhedral"
//! effective_generators = [[0, 2], [1, -1]]
//!
//! [[primes]]
//! name = "E"
//! class = [0, 2]
//! exceptional = true
//! ```
//!
//! Rationals may be written as integers or as strings `"p/q"`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{ConeMode, GeometrySpec, PrimeDivisor};
use crate::error::{Error, Result};
use crate::lattice::{parse_rat, BbfLattice, DivClass, Rat};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Text(String),
}

impl RatRepr {
    fn to_rat(&self) -> Result<Rat> {
        match self {
            RatRepr::Int(v) => Ok(Rat::from_integer(BigInt::from(*v))),
            RatRepr::Text(s) => parse_rat(s),
        }
    }

    fn from_rat(r: &Rat) -> Self {
        match r.is_integer().then(|| r.to_integer().to_i64()).flatten() {
            Some(v) => RatRepr::Int(v),
            None => RatRepr::Text(r.to_string()),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimeRecord {
    name: String,
    class: Vec<RatRepr>,
    exceptional: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    name: String,
    half_dim: u32,
    fujiki: RatRepr,
    basis: Vec<String>,
    gram: Vec<Vec<RatRepr>>,
    mode: ConeMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    effective_generators: Vec<Vec<RatRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ample: Option<Vec<RatRepr>>,
    #[serde(default)]
    primes: Vec<PrimeRecord>,
}

fn vector(v: &[RatRepr]) -> Result<DivClass> {
    v.iter().map(RatRepr::to_rat).collect::<Result<Vec<_>>>().map(DivClass::new)
}

fn reprs(d: &DivClass) -> Vec<RatRepr> {
    d.coords().iter().map(RatRepr::from_rat).collect()
}

pub(super) fn parse(text: &str) -> Result<GeometrySpec> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Document(e.message().to_string()))?;
    let gram: Vec<Vec<Rat>> =
        doc.gram.iter().map(|row| row.iter().map(RatRepr::to_rat).collect()).collect::<Result<_>>()?;
    let lattice = BbfLattice::new(gram, doc.fujiki.to_rat()?, doc.half_dim)?;
    let primes = doc
        .primes
        .iter()
        .map(|p| Ok(PrimeDivisor { name: p.name.clone(), class: vector(&p.class)?, exceptional: p.exceptional }))
        .collect::<Result<Vec<_>>>()?;
    let gens = doc.effective_generators.iter().map(|g| vector(g)).collect::<Result<Vec<_>>>()?;
    let ample = doc.ample.as_deref().map(vector).transpose()?;
    GeometrySpec::new(doc.name, doc.basis, lattice, primes, doc.mode, gens, ample)
}

pub(super) fn to_toml(spec: &GeometrySpec) -> String {
    let doc = Document {
        name: spec.name.clone(),
        half_dim: spec.lattice.half_dim(),
        fujiki: RatRepr::Text(spec.lattice.fujiki().to_string()),
        basis: spec.basis.clone(),
        gram: spec.lattice.gram().iter().map(|row| row.iter().map(RatRepr::from_rat).collect()).collect(),
        mode: spec.mode,
        effective_generators: spec.effective_generators.iter().map(reprs).collect(),
        ample: spec.ample.as_ref().map(reprs),
        primes: spec
            .primes
            .iter()
            .map(|p| PrimeRecord { name: p.name.clone(), class: reprs(&p.class), exceptional: p.exceptional })
            .collect(),
    };
    toml::to_string(&doc).expect("geometry documents always serialize")
}
