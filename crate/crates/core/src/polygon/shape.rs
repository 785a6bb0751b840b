//! Exact convex polygons with quadratic-surd coordinates.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{Rat, Surd};

pub type Point = (Surd, Surd);

fn sub(a: &Point, b: &Point) -> Point {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn add(a: &Point, b: &Point) -> Point {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn cross(a: &Point, b: &Point) -> Surd {
    &(&a.0 * &b.1) - &(&a.1 * &b.0)
}

fn dot(a: &Point, b: &Point) -> Surd {
    &(&a.0 * &b.0) + &(&a.1 * &b.1)
}

/// Sign of `(b − a) × (c − a)`.
fn turn(a: &Point, b: &Point, c: &Point) -> Ordering {
    cross(&sub(b, a), &sub(c, a)).signum()
}

/// Ordering of edge directions by polar angle in `[0, 2π)`.
fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    let half = |v: &Point| {
        let upper = v.1.is_positive() || (v.1.is_zero() && v.0.is_positive());
        if upper {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| cross(b, a).signum())
}

/// The single nonzero radicand among `values`, or an error if two differ.
pub(crate) fn common_radicand<'a>(values: impl IntoIterator<Item = &'a Surd>) -> Result<Option<BigInt>> {
    let mut found: Option<BigInt> = None;
    for v in values {
        if v.is_rational() {
            continue;
        }
        match &found {
            None => found = Some(v.radicand().clone()),
            Some(d) if d == v.radicand() => {}
            Some(d) => return Err(Error::MixedRadicands(d.to_string(), v.radicand().to_string())),
        }
    }
    Ok(found)
}

/// A convex polygon, possibly degenerate (a segment or a point), with
/// vertices counterclockwise from the lowest, then leftmost, vertex and no
/// repeated or collinear vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Normalizes the boundary of a convex polygon given counterclockwise.
    pub fn from_ccw(points: Vec<Point>) -> Result<Self> {
        common_radicand(points.iter().flat_map(|p| [&p.0, &p.1]))?;
        let mut pts: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        if pts.is_empty() {
            return Err(Error::InvalidGeometry("polygon without vertices".into()));
        }
        let n = pts.len();
        let degenerate =
            n <= 2 || (0..n).all(|i| turn(&pts[i], &pts[(i + 1) % n], &pts[(i + 2) % n]) == Ordering::Equal);
        let mut vertices = if degenerate {
            let lo = pts.iter().min_by(|a, b| key(a, b)).unwrap().clone();
            let hi = pts.iter().max_by(|a, b| key(a, b)).unwrap().clone();
            if lo == hi {
                vec![lo]
            } else {
                vec![lo, hi]
            }
        } else {
            let mut v = pts;
            loop {
                let n = v.len();
                let flat = (0..n).find(|&i| turn(&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]) == Ordering::Equal);
                match flat {
                    Some(i) => {
                        v.remove(i);
                    }
                    None => break v,
                }
            }
        };
        let start = (0..vertices.len()).min_by(|&a, &b| key(&vertices[a], &vertices[b])).unwrap();
        vertices.rotate_left(start);
        Ok(ConvexPolygon { vertices })
    }

    pub fn point(p: Point) -> Self {
        ConvexPolygon { vertices: vec![p] }
    }

    pub fn origin() -> Self {
        Self::point((Surd::zero(), Surd::zero()))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn radicand(&self) -> Option<BigInt> {
        common_radicand(self.vertices.iter().flat_map(|p| [&p.0, &p.1])).expect("validated on construction")
    }

    fn check_compatible(&self, other: &ConvexPolygon) -> Result<()> {
        common_radicand(self.vertices.iter().chain(&other.vertices).flat_map(|p| [&p.0, &p.1])).map(|_| ())
    }

    /// Exact shoelace area.
    pub fn area(&self) -> Surd {
        let n = self.vertices.len();
        if n < 3 {
            return Surd::zero();
        }
        let mut twice = Surd::zero();
        for i in 0..n {
            twice = &twice + &cross(&self.vertices[i], &self.vertices[(i + 1) % n]);
        }
        &twice * &Surd::rational(Rat::new(1.into(), 2.into()))
    }

    pub fn translate(&self, by: &Point) -> Result<Self> {
        common_radicand(self.vertices.iter().flat_map(|p| [&p.0, &p.1]).chain([&by.0, &by.1]))?;
        Ok(ConvexPolygon { vertices: self.vertices.iter().map(|p| add(p, by)).collect() })
    }

    /// `λ·P` for `λ ≥ 0`; `0·P` is the origin.
    pub fn scale(&self, lambda: &Rat) -> Result<Self> {
        if lambda < &Rat::zero() {
            return Err(Error::NegativeScale(lambda.to_string()));
        }
        if lambda.is_zero() {
            return Ok(Self::origin());
        }
        let l = Surd::rational(lambda.clone());
        Ok(ConvexPolygon { vertices: self.vertices.iter().map(|(x, y)| (x * &l, y * &l)).collect() })
    }

    fn edges(&self) -> Vec<Point> {
        let n = self.vertices.len();
        if n == 1 {
            return Vec::new();
        }
        (0..n).map(|i| sub(&self.vertices[(i + 1) % n], &self.vertices[i])).collect()
    }

    /// Minkowski sum by merging edge sequences sorted by angle.
    pub fn minkowski_sum(&self, other: &ConvexPolygon) -> Result<Self> {
        self.check_compatible(other)?;
        let (ea, eb) = (self.edges(), other.edges());
        let mut merged = Vec::with_capacity(ea.len() + eb.len());
        let (mut i, mut j) = (0, 0);
        while i < ea.len() || j < eb.len() {
            let take_a = j == eb.len() || (i < ea.len() && angle_cmp(&ea[i], &eb[j]) != Ordering::Greater);
            if take_a {
                merged.push(ea[i].clone());
                i += 1;
            } else {
                merged.push(eb[j].clone());
                j += 1;
            }
        }
        let mut cur = add(&self.vertices[0], &other.vertices[0]);
        let mut pts = vec![cur.clone()];
        for e in &merged {
            cur = add(&cur, e);
            pts.push(cur.clone());
        }
        ConvexPolygon::from_ccw(pts)
    }

    /// Whether `x` lies in the closed polygon.
    pub fn contains_point(&self, x: &Point) -> Result<bool> {
        common_radicand(self.vertices.iter().flat_map(|p| [&p.0, &p.1]).chain([&x.0, &x.1]))?;
        let v = &self.vertices;
        Ok(match v.len() {
            1 => &v[0] == x,
            2 => {
                let (a, b) = (&v[0], &v[1]);
                let ab = sub(b, a);
                turn(a, b, x) == Ordering::Equal
                    && !dot(&sub(x, a), &ab).is_negative()
                    && !dot(&sub(x, b), &sub(a, b)).is_negative()
            }
            n => (0..n).all(|i| turn(&v[i], &v[(i + 1) % n], x) != Ordering::Less),
        })
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &ConvexPolygon) -> Result<bool> {
        self.check_compatible(other)?;
        for p in &other.vertices {
            if !self.contains_point(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn key(a: &Point, b: &Point) -> Ordering {
    a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0))
}

impl fmt::Debug for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, y)) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> Point {
        (Surd::from(x), Surd::from(y))
    }

    fn poly(pts: &[(i64, i64)]) -> ConvexPolygon {
        ConvexPolygon::from_ccw(pts.iter().map(|&(x, y)| p(x, y)).collect()).unwrap()
    }

    /// Andrew's monotone chain over exact rationals, counterclockwise.
    fn hull(mut pts: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            return pts;
        }
        let cr = |o: &(Rat, Rat), a: &(Rat, Rat), b: &(Rat, Rat)| {
            (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
        };
        let mut lower: Vec<(Rat, Rat)> = Vec::new();
        for q in &pts {
            while lower.len() >= 2 && cr(&lower[lower.len() - 2], &lower[lower.len() - 1], q) <= Rat::zero() {
                lower.pop();
            }
            lower.push(q.clone());
        }
        let mut upper: Vec<(Rat, Rat)> = Vec::new();
        for q in pts.iter().rev() {
            while upper.len() >= 2 && cr(&upper[upper.len() - 2], &upper[upper.len() - 1], q) <= Rat::zero() {
                upper.pop();
            }
            upper.push(q.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        lower
    }

    fn to_poly(pts: Vec<(Rat, Rat)>) -> ConvexPolygon {
        ConvexPolygon::from_ccw(pts.into_iter().map(|(x, y)| (Surd::from(x), Surd::from(y))).collect()).unwrap()
    }

    #[test]
    fn normalization() {
        let t = poly(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (0, 0)]);
        assert_eq!(t, poly(&[(0, 0), (2, 0), (2, 2), (0, 2)]));
        let rotated = poly(&[(2, 2), (0, 2), (0, 0), (2, 0)]);
        assert_eq!(rotated.vertices()[0], p(0, 0));
        let seg = poly(&[(0, 0), (3, 0), (3, 0), (1, 0)]);
        assert_eq!(seg, poly(&[(0, 0), (3, 0)]));
        assert!(seg.is_segment());
        assert!(poly(&[(1, 1), (1, 1)]).is_point());
    }

    #[test]
    fn trapezium_from_segment_and_triangle() {
        let seg = poly(&[(0, 0), (2, 0)]);
        let tri = poly(&[(0, 0), (1, 0), (0, 2)]);
        let sum = seg.minkowski_sum(&tri).unwrap();
        assert_eq!(sum, poly(&[(0, 0), (3, 0), (2, 2), (0, 2)]));
        assert_eq!(sum.area(), Surd::from(5));
        assert_eq!(tri.minkowski_sum(&ConvexPolygon::origin()).unwrap(), tri);
        assert_eq!(tri.scale(&rat(2, 1)).unwrap().area(), &tri.area() * &Surd::from(4));
        assert!(tri.scale(&rat(0, 1)).unwrap().is_point());
        assert!(tri.scale(&rat(-1, 1)).is_err());
    }

    #[test]
    fn surd_quadrilateral_area() {
        // (0,0), (2−√3, 0), (2−√3, 2√3), (0, 4)
        let mu: Surd = "2-sqrt(3)".parse().unwrap();
        let top: Surd = "2*sqrt(3)".parse().unwrap();
        let q = ConvexPolygon::from_ccw(vec![
            (Surd::zero(), Surd::zero()),
            (mu.clone(), Surd::zero()),
            (mu, top),
            (Surd::zero(), Surd::from(4)),
        ])
        .unwrap();
        assert_eq!(q.area(), Surd::from(1));
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        let a = ConvexPolygon::point(("sqrt(2)".parse().unwrap(), Surd::zero()));
        let b = ConvexPolygon::point(("sqrt(3)".parse().unwrap(), Surd::zero()));
        assert!(matches!(a.minkowski_sum(&b), Err(Error::MixedRadicands(..))));
    }

    #[test]
    fn containment() {
        let tri = poly(&[(0, 0), (4, 0), (0, 4)]);
        assert!(tri.contains(&poly(&[(1, 1), (2, 1), (1, 2)])).unwrap());
        assert!(!tri.contains(&poly(&[(1, 1), (3, 3)])).unwrap());
        let seg = poly(&[(0, 0), (2, 0)]);
        assert!(seg.contains_point(&p(1, 0)).unwrap());
        assert!(!seg.contains_point(&p(3, 0)).unwrap());
        assert!(!seg.contains_point(&p(1, 1)).unwrap());
    }

    fn rat_points() -> impl Strategy<Value = Vec<(Rat, Rat)>> {
        prop::collection::vec((-6i64..7, -6i64..7, 1i64..3), 1..7)
            .prop_map(|v| v.into_iter().map(|(x, y, d)| (rat(x, d), rat(y, d))).collect())
    }

    proptest! {
        #[test]
        fn sum_matches_hull_of_pairwise_sums(a in rat_points(), b in rat_points(), k in 0i64..4) {
            let (pa, pb) = (to_poly(hull(a.clone())), to_poly(hull(b.clone())));
            let sums: Vec<(Rat, Rat)> = hull(a.clone()).iter()
                .flat_map(|x| hull(b.clone()).into_iter().map(move |y| (&x.0 + &y.0, &x.1 + &y.1)))
                .collect();
            let expected = to_poly(hull(sums));
            let sum = pa.minkowski_sum(&pb).unwrap();
            prop_assert_eq!(&sum, &expected);
            prop_assert!(sum.contains(&pa.translate(&pb.vertices()[0].clone()).unwrap()).unwrap());
            // area of a sum is at least the sum of areas
            prop_assert!(sum.area() >= &pa.area() + &pb.area());
            // scaling is homogeneous of degree 2 in area
            let s = pa.scale(&rat(k, 1)).unwrap();
            prop_assert_eq!(s.area(), &pa.area() * &Surd::from(k * k));
        }
    }
}
