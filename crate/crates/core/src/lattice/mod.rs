//! Rational scalars, divisor classes and the Beauville-Bogomolov-Fujiki lattice.

pub mod linalg;
mod surd;

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use surd::{real_roots, smallest_positive_root, Surd};

pub type Rat = BigRational;

/// Shorthand for `n/d`; panics on `d = 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `p/q`, with optional leading sign.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let bad = || Error::MalformedRational(text.to_string());
    let t = text.trim();
    let digits = |s: &str| {
        let body = s.strip_prefix(['+', '-']).unwrap_or(s);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    if !digits(num) || !den.bytes().all(|b| b.is_ascii_digit()) || den.is_empty() {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Counts of positive, negative and zero eigenvalue signs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.pos, self.neg, self.zero)
    }
}

/// Inertia of a symmetric rational matrix.
#[allow(clippy::needless_range_loop)]
pub fn signature(gram: &[Vec<Rat>]) -> Result<Inertia> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(Error::NonSquareGram);
    }
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(Error::NonSymmetricGram);
            }
        }
    }
    Ok(linalg::congruence_inertia(gram))
}

/// Negative definiteness of a symmetric matrix; the empty matrix qualifies.
pub fn matrix_is_negative_definite(m: &[Vec<Rat>]) -> bool {
    m.is_empty() || signature(m).is_ok_and(|s| s.neg == m.len())
}

/// A class in `N¹(X)_Q`, as coordinates in the lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivClass(Vec<Rat>);

impl DivClass {
    pub fn new(coords: Vec<Rat>) -> Self {
        DivClass(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivClass(coords.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        DivClass(vec![Rat::zero(); rank])
    }

    /// The `i`-th basis vector.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![Rat::zero(); rank];
        v[i] = Rat::one();
        DivClass(v)
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }

    pub fn scale(&self, k: &Rat) -> DivClass {
        DivClass(self.0.iter().map(|c| c * k).collect())
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, k: &Rat, other: &DivClass) -> DivClass {
        assert_eq!(self.rank(), other.rank(), "class rank mismatch");
        DivClass(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// The unique primitive integral vector on the ray through `self`;
    /// zero stays zero.
    pub fn primitive(&self) -> DivClass {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.denominator();
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &den).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        DivClass(ints.into_iter().map(|v| Rat::from_integer(v / &g)).collect())
    }

    /// `Some(r)` with `self = r·other`, when such an `r` exists.
    pub fn ratio_to(&self, other: &DivClass) -> Option<Rat> {
        if other.is_zero() {
            return self.is_zero().then(Rat::zero);
        }
        let i = other.0.iter().position(|c| !c.is_zero())?;
        let r = &self.0[i] / &other.0[i];
        (other.scale(&r) == *self).then_some(r)
    }

    /// Positive multiple of `other`.
    pub fn is_positive_multiple_of(&self, other: &DivClass) -> bool {
        self.ratio_to(other).is_some_and(|r| r.is_positive())
    }
}

impl fmt::Debug for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl<'a> Add<&'a DivClass> for &'a DivClass {
    type Output = DivClass;
    fn add(self, rhs: &'a DivClass) -> DivClass {
        self.add_scaled(&Rat::one(), rhs)
    }
}

impl<'a> Sub<&'a DivClass> for &'a DivClass {
    type Output = DivClass;
    fn sub(self, rhs: &'a DivClass) -> DivClass {
        self.add_scaled(&-Rat::one(), rhs)
    }
}

impl Add for DivClass {
    type Output = DivClass;
    fn add(self, rhs: DivClass) -> DivClass {
        &self + &rhs
    }
}

impl Sub for DivClass {
    type Output = DivClass;
    fn sub(self, rhs: DivClass) -> DivClass {
        &self - &rhs
    }
}

impl Neg for &DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        DivClass(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        -&self
    }
}

impl AddAssign<&DivClass> for DivClass {
    fn add_assign(&mut self, rhs: &DivClass) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&DivClass> for DivClass {
    fn sub_assign(&mut self, rhs: &DivClass) {
        *self = &*self - rhs;
    }
}

/// Gram matrix of the BBF form on `N¹(X)`, with Fujiki constant and
/// half-dimension `n` (so `dim X = 2n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BbfLattice {
    gram: Vec<Vec<Rat>>,
    fujiki: Rat,
    half_dim: u32,
}

impl BbfLattice {
    /// Validates symmetry and hyperbolic signature `(1, ρ−1, 0)`.
    pub fn new(gram: Vec<Vec<Rat>>, fujiki: Rat, half_dim: u32) -> Result<Self> {
        if gram.is_empty() {
            return Err(Error::InvalidGeometry("lattice of rank 0".into()));
        }
        let s = signature(&gram)?;
        let rho = gram.len();
        if s.pos != 1 || s.neg != rho - 1 || s.zero != 0 {
            return Err(Error::BadSignature { pos: s.pos, neg: s.neg, zero: s.zero, expected_neg: rho - 1 });
        }
        if !fujiki.is_positive() {
            return Err(Error::InvalidGeometry(format!("Fujiki constant {fujiki} is not positive")));
        }
        if half_dim == 0 {
            return Err(Error::InvalidGeometry("half_dim must be at least 1".into()));
        }
        Ok(BbfLattice { gram, fujiki, half_dim })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Rat>] {
        &self.gram
    }

    pub fn fujiki(&self) -> &Rat {
        &self.fujiki
    }

    pub fn half_dim(&self) -> u32 {
        self.half_dim
    }

    fn check(&self, a: &DivClass) -> Result<()> {
        if a.rank() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: a.rank() });
        }
        Ok(())
    }

    /// `aᵀ·G·b`.
    pub fn pair(&self, a: &DivClass, b: &DivClass) -> Result<Rat> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.form(a, b))
    }

    /// As [`pair`](Self::pair), panicking on a rank mismatch.
    pub fn form(&self, a: &DivClass, b: &DivClass) -> Rat {
        assert!(a.rank() == self.rank() && b.rank() == self.rank(), "class rank mismatch");
        let mut acc = Rat::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if !bj.is_zero() {
                    acc += ai * &self.gram[i][j] * bj;
                }
            }
        }
        acc
    }

    pub fn square(&self, a: &DivClass) -> Rat {
        self.form(a, a)
    }

    pub fn signature(&self) -> Inertia {
        linalg::congruence_inertia(&self.gram)
    }

    pub fn gram_of(&self, classes: &[&DivClass]) -> Vec<Vec<Rat>> {
        classes.iter().map(|a| classes.iter().map(|b| self.form(a, b)).collect()).collect()
    }

    pub fn is_negative_definite(&self, classes: &[&DivClass]) -> bool {
        matrix_is_negative_definite(&self.gram_of(classes))
    }

    /// `c_X · q(a)^n`.
    pub fn fujiki_volume(&self, a: &DivClass) -> Rat {
        &self.fujiki * num_traits::pow(self.square(a), self.half_dim as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(v: &[i64]) -> Vec<Vec<Rat>> {
        (0..v.len()).map(|i| (0..v.len()).map(|j| if i == j { rat(v[i], 1) } else { rat(0, 1) }).collect()).collect()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()
    }

    fn hilb2() -> BbfLattice {
        BbfLattice::new(diag(&[2, -2]), rat(3, 1), 2).unwrap()
    }

    /// `(−1)^k · det(leading k×k) > 0` for every `k`.
    fn sylvester_negative_definite(m: &[Vec<Rat>]) -> bool {
        (1..=m.len()).all(|k| {
            let minor: Vec<Vec<Rat>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            let det = linalg::determinant(&minor);
            if k % 2 == 0 {
                det.is_positive()
            } else {
                det.is_negative()
            }
        })
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("7").unwrap(), rat(7, 1));
        for bad in ["", "1/0", "a", "1/-2", "1.5", "--1", "/2"] {
            assert!(parse_rat(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn hilb2_pairings() {
        let l = hilb2();
        let h = DivClass::from_ints(&[1, 0]);
        let e = DivClass::from_ints(&[0, 2]);
        assert_eq!(l.square(&h), rat(2, 1));
        assert_eq!(l.square(&e), rat(-8, 1));
        assert_eq!(l.pair(&DivClass::zero(2), &e).unwrap(), rat(0, 1));
        assert_eq!(l.pair(&h, &DivClass::from_ints(&[1])), Err(Error::DimensionMismatch { expected: 2, found: 1 }));
        assert_eq!(l.fujiki_volume(&h), rat(12, 1));
    }

    #[test]
    fn signatures() {
        let s = signature(&diag(&[2, -2])).unwrap();
        assert_eq!((s.pos, s.neg, s.zero), (1, 1, 0));
        let s = signature(&diag(&[2])).unwrap();
        assert_eq!((s.pos, s.neg, s.zero), (1, 0, 0));
        let k3 = ints(&[&[0, 1, 1], &[1, -2, 0], &[1, 0, -2]]);
        let s = signature(&k3).unwrap();
        assert_eq!((s.pos, s.neg, s.zero), (1, 2, 0));
        assert_eq!(signature(&ints(&[&[1, 2], &[3, 1]])), Err(Error::NonSymmetricGram));
        assert!(matches!(BbfLattice::new(diag(&[-2]), rat(1, 1), 1), Err(Error::BadSignature { .. })));
    }

    #[test]
    fn characteristic_polynomial_oracle_for_k3() {
        // det(M − λI) = −λ³ − 4λ² − 2λ + 4: one sign change in p(λ), two in p(−λ)
        let k3 = ints(&[&[0, 1, 1], &[1, -2, 0], &[1, 0, -2]]);
        let coeffs = [-1i64, -4, -2, 4];
        let changes = |c: &[i64]| c.windows(2).filter(|w| w[0] * w[1] < 0).count();
        let neg: Vec<i64> = coeffs.iter().enumerate().map(|(i, &c)| if (3 - i) % 2 == 1 { -c } else { c }).collect();
        assert_eq!(linalg::determinant(&k3), rat(4, 1));
        let s = signature(&k3).unwrap();
        assert_eq!((changes(&coeffs), changes(&neg)), (s.pos, s.neg));
    }

    #[test]
    fn negative_definite_subsets() {
        let l = hilb2();
        let e = DivClass::from_ints(&[0, 2]);
        let h = DivClass::from_ints(&[1, 0]);
        assert!(l.is_negative_definite(&[&e]));
        assert!(!l.is_negative_definite(&[&h]));
        assert!(l.is_negative_definite(&[]));
    }

    #[test]
    fn negative_definite_matches_minors_on_rank4_subsets() {
        let l = BbfLattice::new(diag(&[2, -2, -2, -2]), rat(1, 1), 1).unwrap();
        let primes = [
            DivClass::from_ints(&[0, 1, 0, 0]),
            DivClass::from_ints(&[0, 0, 1, 0]),
            DivClass::from_ints(&[0, 0, 0, 1]),
            DivClass::from_ints(&[1, -1, -1, -1]),
            DivClass::from_ints(&[1, 0, 0, 0]),
            DivClass::from_ints(&[1, -1, 0, 0]),
        ];
        for mask in 0u32..(1 << primes.len()) {
            let sub: Vec<&DivClass> = (0..primes.len()).filter(|i| mask & (1 << i) != 0).map(|i| &primes[i]).collect();
            let g = l.gram_of(&sub);
            assert_eq!(l.is_negative_definite(&sub), g.is_empty() || sylvester_negative_definite(&g), "mask {mask}");
        }
    }

    #[test]
    fn primitive_and_ratio() {
        let v = DivClass::new(vec![rat(2, 3), rat(-4, 3)]);
        assert_eq!(v.primitive(), DivClass::from_ints(&[1, -2]));
        assert_eq!(v.ratio_to(&DivClass::from_ints(&[1, -2])), Some(rat(2, 3)));
        assert_eq!(v.ratio_to(&DivClass::from_ints(&[1, 2])), None);
        assert!(!v.scale(&rat(-1, 1)).is_positive_multiple_of(&v));
    }

    fn small_class() -> impl Strategy<Value = DivClass> {
        prop::collection::vec((-20i64..20, 1i64..6), 3)
            .prop_map(|v| DivClass::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn pair_is_symmetric_and_bilinear(a in small_class(), b in small_class(), c in small_class(), k in -5i64..5) {
            let l = BbfLattice::new(ints(&[&[0, 1, 1], &[1, -2, 0], &[1, 0, -2]]), rat(1, 1), 1).unwrap();
            prop_assert_eq!(l.form(&a, &b), l.form(&b, &a));
            let k = rat(k, 1);
            prop_assert_eq!(l.form(&a.add_scaled(&k, &b), &c), l.form(&a, &c) + &k * l.form(&b, &c));
        }

        #[test]
        fn negated_definite_block_is_positive(v in prop::collection::vec(1i64..9, 1..5)) {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            let m = diag(&neg);
            let flipped: Vec<Vec<Rat>> = m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
            prop_assert_eq!(signature(&flipped).unwrap().pos, v.len());
            prop_assert!(matrix_is_negative_definite(&m));
        }
    }
}
