use crate::geometry::{parse_geometry, GeometrySpec};
use crate::lattice::{rat, DivClass};

pub fn fixture(name: &str) -> GeometrySpec {
    let path = format!("{}/../../fixtures/{name}.geom", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_geometry(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn class(spec: &GeometrySpec, expr: &str) -> DivClass {
    spec.parse_divisor(expr).unwrap_or_else(|e| panic!("{expr}: {e}"))
}

/// `Σ (w_i / 2)·g_i` over the effective generators.
pub fn effective_combination(spec: &GeometrySpec, weights: &[u8]) -> DivClass {
    let mut d = DivClass::zero(spec.rank());
    for (w, g) in weights.iter().zip(spec.effective_generators()) {
        d = d.add_scaled(&rat(*w as i64, 2), g);
    }
    d
}

/// A big class: an effective combination plus the sum of the movable rays
/// (polyhedral) or a multiple of the ample class plus a nonnegative
/// combination of basis classes (round, where the basis lies in the positive cone).
pub fn big_class(spec: &GeometrySpec, weights: &[u8]) -> DivClass {
    match spec.mov_rays() {
        Some(rays) => {
            let mut d = effective_combination(spec, weights);
            for r in rays {
                d = &d + r;
            }
            d
        }
        None => {
            let a = spec.ample().expect("round mode has an ample class");
            let mut d = a.scale(&rat(4 + weights.first().copied().unwrap_or(0) as i64, 1));
            for (i, w) in weights.iter().skip(1).enumerate().take(spec.rank()) {
                let shift = DivClass::unit(spec.rank(), i).scale(&rat(*w as i64, 3));
                d = &d + &shift;
            }
            d
        }
    }
}
