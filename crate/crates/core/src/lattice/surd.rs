//! Real quadratic surds `a + b·√d` with rational `a`, `b` and square-free `d`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{parse_rat, Rat};
use crate::error::{Error, Result};

/// An element of `Q(√d)` for a single square-free `d`.
///
/// Canonical form: `b = 0` implies `d = 0`, otherwise `d ≥ 2` is
/// square-free. Equality and hashing are therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rat,
    b: Rat,
    d: BigInt,
}

impl Surd {
    /// `a + b·√d` for any `d ≥ 0`; square factors of `d` are pulled into `b`.
    pub fn new(a: Rat, b: Rat, d: BigInt) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::MalformedSurd(format!("negative radicand {d}")));
        }
        let (s, f) = square_free_decompose(d.magnitude());
        Ok(Self::canonical(a, b * Rat::from_integer(BigInt::from(s)), BigInt::from(f)))
    }

    fn canonical(a: Rat, b: Rat, d: BigInt) -> Self {
        if b.is_zero() || d.is_zero() {
            Surd { a, b: Rat::zero(), d: BigInt::zero() }
        } else if d.is_one() {
            Surd { a: a + b, b: Rat::zero(), d: BigInt::zero() }
        } else {
            Surd { a, b, d }
        }
    }

    pub fn rational(a: Rat) -> Self {
        Surd { a, b: Rat::zero(), d: BigInt::zero() }
    }

    pub fn zero() -> Self {
        Self::rational(Rat::zero())
    }

    /// `√r` for `r ≥ 0`.
    pub fn sqrt(r: &Rat) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::MalformedSurd(format!("sqrt of negative {r}")));
        }
        // √(p/q) = √(p·q) / q
        let pq = (r.numer() * r.denom()).magnitude().clone();
        let (s, f) = square_free_decompose(&pq);
        let coeff = Rat::new(BigInt::from(s), r.denom().clone());
        Ok(Self::canonical(Rat::zero(), coeff, BigInt::from(f)))
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn irrational_coeff(&self) -> &Rat {
        &self.b
    }

    /// The square-free radicand, `0` for rational values.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rat> {
        self.is_rational().then(|| self.a.clone())
    }

    /// Whether both values live in a common `Q(√d)`.
    pub fn compatible(&self, other: &Surd) -> bool {
        self.is_rational() || other.is_rational() || self.d == other.d
    }

    fn common_radicand(&self, other: &Surd) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert!(self.d == other.d, "surd arithmetic mixes sqrt({}) and sqrt({})", self.d, other.d);
                self.d.clone()
            }
        }
    }

    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b, &self.d)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Surd {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        // (a + b√d)⁻¹ = (a − b√d) / (a² − b²d); the norm vanishes only at 0
        let norm = &self.a * &self.a - &self.b * &self.b * Rat::from_integer(self.d.clone());
        Some(Self::canonical(&self.a / &norm, -(&self.b / &norm), self.d.clone()))
    }

    /// Display-only floating approximation.
    pub fn to_f64(&self) -> f64 {
        let a = rat_to_f64(&self.a);
        if self.is_rational() {
            return a;
        }
        a + rat_to_f64(&self.b) * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn min(self, other: Surd) -> Surd {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Surd) -> Surd {
        if other > self {
            other
        } else {
            self
        }
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Writes `n = s²·f` with `f` square-free.
///
/// Trial division runs only up to the cube root of the unfactored part;
/// what remains then has at most two prime factors, so it is either a
/// prime square or already square-free.
pub(crate) fn square_free_decompose(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut f = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p * &p <= rest {
        let mut count = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        if count > 0 {
            s *= p.pow(count / 2);
            if count % 2 == 1 {
                f *= &p;
            }
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            s *= r;
        } else {
            f *= rest;
        }
    }
    (s, f)
}

/// Sign of `p + q·√d`.
fn sign_of(p: &Rat, q: &Rat, d: &BigInt) -> Ordering {
    if q.is_zero() || d.is_zero() {
        return p.cmp(&Rat::zero());
    }
    let sp = p.cmp(&Rat::zero());
    let sq = q.cmp(&Rat::zero());
    match (sp, sq) {
        (Ordering::Equal, s) => s,
        (s, t) if s == t => s,
        _ => {
            // opposite signs: compare p² with q²·d
            let lhs = p * p;
            let rhs = q * q * Rat::from_integer(d.clone());
            match lhs.cmp(&rhs) {
                Ordering::Equal => Ordering::Equal,
                c if sp == Ordering::Greater => c,
                c => c.reverse(),
            }
        }
    }
}

/// Sign of `x + y·√d + z·√f`, for possibly different radicands.
fn sign_of_two(x: &Rat, y: &Rat, d: &BigInt, z: &Rat, f: &BigInt) -> Ordering {
    if z.is_zero() || f.is_zero() {
        return sign_of(x, y, d);
    }
    if y.is_zero() || d.is_zero() {
        return sign_of(x, z, f);
    }
    if d == f {
        return sign_of(x, &(y + z), d);
    }
    let su = sign_of(x, y, d);
    let sz = z.cmp(&Rat::zero());
    match (su, sz) {
        (Ordering::Equal, s) => s,
        (s, t) if s == t => s,
        _ => {
            // u = x + y√d against −z√f: compare u² with z²f
            let dr = Rat::from_integer(d.clone());
            let fr = Rat::from_integer(f.clone());
            let p = x * x + y * y * &dr - z * z * fr;
            let q = Rat::from_integer(BigInt::from(2)) * x * y;
            match sign_of(&p, &q, d) {
                Ordering::Equal => Ordering::Equal,
                c if su == Ordering::Greater => c,
                c => c.reverse(),
            }
        }
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_of_two(&(&self.a - &other.a), &self.b, &self.d, &-other.b.clone(), &other.d)
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rat> for Surd {
    fn from(r: Rat) -> Self {
        Surd::rational(r)
    }
}

impl From<&Rat> for Surd {
    fn from(r: &Rat) -> Self {
        Surd::rational(r.clone())
    }
}

impl From<i64> for Surd {
    fn from(v: i64) -> Self {
        Surd::rational(Rat::from_integer(BigInt::from(v)))
    }
}

impl PartialEq<Rat> for Surd {
    fn eq(&self, other: &Rat) -> bool {
        self.is_rational() && &self.a == other
    }
}

impl PartialOrd<Rat> for Surd {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(sign_of(&(&self.a - other), &self.b, &self.d))
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl<'b> Add<&'b Surd> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &'b Surd) -> Surd {
        let d = self.common_radicand(rhs);
        Surd::canonical(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'b> Sub<&'b Surd> for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &'b Surd) -> Surd {
        let d = self.common_radicand(rhs);
        Surd::canonical(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'b> Mul<&'b Surd> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &'b Surd) -> Surd {
        let d = self.common_radicand(rhs);
        let dr = Rat::from_integer(d.clone());
        Surd::canonical(&self.a * &rhs.a + &self.b * &rhs.b * dr, &self.a * &rhs.b + &self.b * &rhs.a, d)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'b> Div<&'b Surd> for &Surd {
    type Output = Surd;
    fn div(self, rhs: &'b Surd) -> Surd {
        self * &rhs.recip().expect("division of a surd by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: &'a Surd) -> Surd { (&self).$m(rhs) }
        }
        impl<'a> $tr<Surd> for &'a Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd { self.$m(&rhs) }
        }
        impl<'a> $tr<&'a Rat> for &'a Surd {
            type Output = Surd;
            fn $m(self, rhs: &'a Rat) -> Surd { self.$m(&Surd::from(rhs)) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for Surd {
    /// `a`, `b*sqrt(d)` or `a+b*sqrt(d)`, with unit coefficients elided:
    /// `2-sqrt(3)`, `1/2+3/4*sqrt(5)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let mut out = String::new();
        if !self.a.is_zero() {
            out.push_str(&self.a.to_string());
            if self.b.is_positive() {
                out.push('+');
            }
        }
        if self.b == -Rat::one() {
            out.push('-');
        } else if !self.b.is_one() {
            out.push_str(&self.b.to_string());
            out.push('*');
        }
        out.push_str(&format!("sqrt({})", self.d));
        f.write_str(&out)
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

impl FromStr for Surd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::MalformedSurd(s.to_string());
        let Some(open) = compact.find("sqrt(") else {
            return parse_rat(&compact).map(Surd::rational).map_err(|_| bad());
        };
        let inner = compact[open + 5..].strip_suffix(')').ok_or_else(bad)?;
        let d: BigInt = inner.parse().map_err(|_| bad())?;
        let prefix = compact[..open].strip_suffix('*').unwrap_or(&compact[..open]);

        let split = prefix.char_indices().filter(|&(i, c)| i > 0 && (c == '+' || c == '-')).map(|(i, _)| i).next_back();
        let (a_str, b_str) = match split {
            Some(i) => (&prefix[..i], &prefix[i..]),
            None => ("", prefix),
        };
        let a = if a_str.is_empty() { Rat::zero() } else { parse_rat(a_str).map_err(|_| bad())? };
        let b = match b_str {
            "" | "+" => Rat::one(),
            "-" => -Rat::one(),
            other => parse_rat(other.strip_prefix('+').unwrap_or(other)).map_err(|_| bad())?,
        };
        Surd::new(a, b, d)
    }
}

/// All real roots of `a·t² + b·t + c`, ascending. A linear polynomial
/// (`a = 0`) has at most one root; a nonzero constant has none.
pub fn real_roots(a: &Rat, b: &Rat, c: &Rat) -> Result<Vec<Surd>> {
    if a.is_zero() {
        if b.is_zero() {
            return if c.is_zero() { Err(Error::ZeroPolynomial) } else { Ok(vec![]) };
        }
        return Ok(vec![Surd::rational(-(c / b))]);
    }
    let four = Rat::from_integer(BigInt::from(4));
    let disc = b * b - four * a * c;
    if disc.is_negative() {
        return Ok(vec![]);
    }
    let two_a = Surd::rational(a * Rat::from_integer(BigInt::from(2)));
    let minus_b = Surd::rational(-b.clone());
    if disc.is_zero() {
        return Ok(vec![&minus_b / &two_a]);
    }
    let root = Surd::sqrt(&disc)?;
    let mut roots = vec![&(&minus_b - &root) / &two_a, &(&minus_b + &root) / &two_a];
    roots.sort();
    Ok(roots)
}

/// Smallest root strictly greater than zero of `a·t² + b·t + c`.
pub fn smallest_positive_root(a: &Rat, b: &Rat, c: &Rat) -> Result<Option<Surd>> {
    Ok(real_roots(a, b, c)?.into_iter().find(Surd::is_positive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    fn s(a: i64, b: i64, d: i64) -> Surd {
        Surd::new(rat(a, 1), rat(b, 1), BigInt::from(d)).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(s(1, 1, 4), Surd::from(3));
        assert_eq!(s(0, 1, 12), s(0, 2, 3));
        assert!(s(5, 0, 7).is_rational());
        assert_eq!(s(5, 0, 7).radicand(), &BigInt::zero());
        assert_eq!(Surd::sqrt(&rat(3, 4)).unwrap(), Surd::new(rat(0, 1), rat(1, 2), BigInt::from(3)).unwrap());
    }

    #[test]
    fn square_free_parts() {
        let sf = |n: u64| {
            let (s, f) = square_free_decompose(&BigUint::from(n));
            (s.to_u64().unwrap(), f.to_u64().unwrap())
        };
        assert_eq!(sf(12), (2, 3));
        assert_eq!(sf(49), (7, 1));
        assert_eq!(sf(2 * 3 * 5 * 7), (1, 210));
        assert_eq!(sf(1_000_003 * 1_000_003), (1_000_003, 1));
        assert_eq!(sf(72), (6, 2));
    }

    #[test]
    fn ordering_near_zero() {
        // 2 − √3 ≈ 0.268
        let x = s(2, -1, 3);
        assert!(x.is_positive());
        assert!(x < Surd::from(1));
        assert!(x > Surd::rational(rat(1, 4)));
        // 7 − 4√3 ≈ 0.0718 > 0
        assert!(s(7, -4, 3).is_positive());
        assert_eq!(s(0, 0, 3).signum(), Ordering::Equal);
    }

    #[test]
    fn ordering_across_radicands() {
        // √2 + √3 ≈ 3.146 > π-ish rational 3.14
        let r2 = s(0, 1, 2);
        let r3 = s(0, 1, 3);
        assert!(r3 > r2);
        assert!(Surd::from(3) < s(0, 1, 10));
        // 5√2 ≈ 7.071 vs 4√3 ≈ 6.928
        assert!(s(0, 5, 2) > s(0, 4, 3));
        assert!(s(1, 1, 2) < s(0, 3, 3) - Surd::rational(rat(1, 2)));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(s(2, -1, 3).to_string(), "2-sqrt(3)");
        assert_eq!(s(0, 2, 3).to_string(), "2*sqrt(3)");
        assert_eq!(s(0, -1, 5).to_string(), "-sqrt(5)");
        let half = Surd::new(rat(1, 2), rat(3, 4), BigInt::from(5)).unwrap();
        assert_eq!(half.to_string(), "1/2+3/4*sqrt(5)");
        for text in ["2-sqrt(3)", "2*sqrt(3)", "-sqrt(5)", "1/2+3/4*sqrt(5)", "-1-2*sqrt(2)", "7/3"] {
            let v: Surd = text.parse().unwrap();
            assert_eq!(v.to_string(), text);
        }
        assert!("2+sqrt(x)".parse::<Surd>().is_err());
    }

    #[test]
    fn quadratic_roots() {
        let r = smallest_positive_root(&rat(2, 1), &rat(-8, 1), &rat(2, 1)).unwrap();
        assert_eq!(r, Some(s(2, -1, 3)));
        let r = smallest_positive_root(&rat(-8, 1), &rat(0, 1), &rat(2, 1)).unwrap();
        assert_eq!(r, Some(Surd::rational(rat(1, 2))));
        assert_eq!(smallest_positive_root(&rat(1, 1), &rat(0, 1), &rat(1, 1)).unwrap(), None);
        assert_eq!(
            smallest_positive_root(&rat(0, 1), &rat(2, 1), &rat(-1, 1)).unwrap(),
            Some(Surd::rational(rat(1, 2)))
        );
        assert_eq!(smallest_positive_root(&rat(0, 1), &rat(0, 1), &rat(0, 1)), Err(Error::ZeroPolynomial));
        assert_eq!(smallest_positive_root(&rat(0, 1), &rat(0, 1), &rat(3, 1)).unwrap(), None);
    }

    #[test]
    fn field_operations() {
        let x = s(2, -1, 3);
        let y = s(1, 5, 3);
        assert_eq!(&(&x + &y) - &y, x);
        assert_eq!(&x * &x.recip().unwrap(), Surd::from(1));
        assert_eq!(&x * &s(2, 1, 3), Surd::from(1));
        assert_eq!(&x / &x, Surd::from(1));
    }

    #[test]
    #[should_panic(expected = "mixes")]
    fn mixing_radicands_panics() {
        let _ = s(0, 1, 2) + s(0, 1, 3);
    }
}
