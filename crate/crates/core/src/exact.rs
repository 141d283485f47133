//! Exact arithmetic kernel.
//!
//! Every quantity in the crate is either an arbitrary-precision integer or a
//! [`Rational`] kept in lowest terms. Nothing is ever rounded.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Exact fraction with an arbitrary-precision numerator and a positive
/// denominator, always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}`")]
    Integer(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Rational {
    /// Builds `numer / denom`. Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn frac(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    /// Integer power; negative exponents divide.
    pub fn pow(&self, exp: i64) -> Self {
        let magnitude = exp.unsigned_abs();
        let mut acc = BigRational::one();
        let mut base = self.0.clone();
        let mut e = magnitude;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if exp < 0 {
            Rational(acc).recip()
        } else {
            Rational(acc)
        }
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    /// Lossy view for logging and asymptotic displays only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_integer(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p` or `p/q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|_| ParseRationalError::Integer(t.to_string()));
        match s.split_once('/') {
            None => Ok(Rational::from_integer(parse(s)?)),
            Some((p, q)) => {
                let q = parse(q)?;
                if q.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(s.to_string()));
                }
                Ok(Rational::new(parse(p)?, q))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

/// Fractional part `q - floor(q)`.
pub fn frac(q: &Rational) -> Rational {
    q.frac()
}

/// gcd of every value yielded; the gcd of nothing is 0.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Exact quotient `numer / denom`, or `None` when `denom` does not divide.
pub fn exact_div(numer: &BigInt, denom: &BigInt) -> Option<BigInt> {
    if denom.is_zero() {
        return None;
    }
    let (q, r) = numer.div_rem(denom);
    r.is_zero().then_some(q)
}

fn sylvester_cache() -> &'static RwLock<Vec<BigInt>> {
    static CACHE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![BigInt::from(2)]))
}

/// The `k`-th term of Sylvester's sequence: `s_0 = 2`, `s_{k+1} = s_0⋯s_k + 1`.
///
/// Terms are memoized process-wide. Cached entries are only ever appended,
/// so a value once read never changes.
pub fn sylvester(k: usize) -> BigInt {
    {
        let cache = sylvester_cache().read().expect("sylvester cache poisoned");
        if let Some(v) = cache.get(k) {
            return v.clone();
        }
    }
    let mut cache = sylvester_cache().write().expect("sylvester cache poisoned");
    while cache.len() <= k {
        // s_{k+1} - 1 = s_k (s_k - 1), so the running product is never needed.
        let last = cache.last().expect("cache starts non-empty").clone();
        let next = &last * (&last - 1) + 1;
        cache.push(next);
    }
    cache[k].clone()
}

/// `1/s_0 + ⋯ + 1/s_n`.
pub fn sylvester_prefix_sum(n: usize) -> Rational {
    (0..=n).map(|i| Rational::new(1, sylvester(i))).sum()
}

/// Machine-word view of a non-negative integer.
pub fn to_u64(value: &BigInt) -> Option<u64> {
    value.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sylvester_terms() {
        assert_eq!(sylvester(0), BigInt::from(2));
        let first: Vec<BigInt> = (0..5).map(sylvester).collect();
        let expect: Vec<BigInt> = [2, 3, 7, 43, 1807].into_iter().map(BigInt::from).collect();
        assert_eq!(first, expect);
        // 2·3·7·43·1807 + 1
        let product: BigInt = [2u64, 3, 7, 43, 1807].iter().map(|&x| BigInt::from(x)).product();
        assert_eq!(product.clone() + 1, BigInt::from(3263443));
        assert_eq!(sylvester(5), BigInt::from(3263443));
    }

    #[test]
    fn sylvester_matches_product_recurrence() {
        let mut product = BigInt::one();
        for k in 0..12 {
            if k > 0 {
                assert_eq!(sylvester(k), &product + 1);
            }
            product *= sylvester(k);
        }
    }

    #[test]
    fn sylvester_pairwise_coprime_and_growth() {
        for i in 0..=12 {
            for j in (i + 1)..=12 {
                assert!(sylvester(i).gcd(&sylvester(j)).is_one(), "gcd(s_{i}, s_{j})");
            }
        }
        for k in 1..=12usize {
            let bound = BigInt::one() << (1usize << (k - 1));
            assert!(sylvester(k) > bound, "s_{k} > 2^(2^{})", k - 1);
        }
    }

    #[test]
    fn prefix_sums() {
        assert_eq!(sylvester_prefix_sum(0), Rational::new(1, 2));
        assert_eq!(sylvester_prefix_sum(2), Rational::new(41, 42));
        let by_hand = Rational::new(1, 2) + Rational::new(1, 3) + Rational::new(1, 7) + Rational::new(1, 43);
        assert_eq!(sylvester_prefix_sum(3), by_hand);
        assert_eq!(sylvester_prefix_sum(3), Rational::one() - Rational::new(1, 1806));
        for n in 0..=12 {
            let closed = Rational::one() - Rational::new(1, sylvester(n + 1) - 1);
            assert_eq!(sylvester_prefix_sum(n), closed, "n = {n}");
        }
    }

    #[test]
    fn fractional_part() {
        assert_eq!(frac(&Rational::new(7, 3)), Rational::new(1, 3));
        assert_eq!(frac(&Rational::new(-1, 4)), Rational::new(3, 4));
        assert_eq!(frac(&Rational::from_integer(5)), Rational::zero());
    }

    #[test]
    fn lowest_terms_and_display() {
        let q = Rational::new(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Rational::from_integer(4).to_string(), "4/1");
        assert_eq!("24/280".parse::<Rational>().unwrap(), Rational::new(3, 35));
        assert_eq!("-7".parse::<Rational>().unwrap(), Rational::from(-7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn powers() {
        let q = Rational::new(2, 3);
        assert_eq!(q.pow(0), Rational::one());
        assert_eq!(q.pow(3), Rational::new(8, 27));
        assert_eq!(q.pow(-2), Rational::new(9, 4));
    }

    #[test]
    fn exact_division() {
        assert_eq!(exact_div(&BigInt::from(12), &BigInt::from(4)), Some(BigInt::from(3)));
        assert_eq!(exact_div(&BigInt::from(13), &BigInt::from(4)), None);
        assert_eq!(exact_div(&BigInt::from(13), &BigInt::zero()), None);
    }

    proptest! {
        #[test]
        fn add_then_sub_round_trips(a in -10_000i64..10_000, b in 1i64..10_000,
                                    c in -10_000i64..10_000, d in 1i64..10_000) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            prop_assert_eq!((&x + &y) - &y, x.clone());
            prop_assert!(x.denom() > &BigInt::zero());
            prop_assert!(x.numer().gcd(x.denom()).is_one() || x.is_zero());
        }

        #[test]
        fn frac_in_unit_interval(a in -100_000i64..100_000, b in 1i64..1000) {
            let f = frac(&Rational::new(a, b));
            prop_assert!(!f.is_negative() && f < 1, "frac out of range: {}", f);
            prop_assert!((Rational::new(a, b) - f).is_integer());
        }
    }
}
