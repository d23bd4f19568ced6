use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, Debug, Eq, Hash)]
pub struct Rat(BigRational);

impl PartialEq for Rat {
    fn eq(&self, o: &Rat) -> bool {
        self.numer() == o.numer() && self.denom() == o.denom()
    }
}

impl Ord for Rat {
    fn cmp(&self, o: &Rat) -> Ordering {
        match (self.small(), o.small()) {
            (Some((a, b)), Some((c, d))) => (a as i128 * d as i128).cmp(&(c as i128 * b as i128)),
            _ => (self.numer() * o.denom()).cmp(&(o.numer() * self.denom())),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Rat) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Rat {
    /// Builds `n/d`. Panics when `d == 0`.
    pub fn new(n: i64, d: i64) -> Rat {
        Rat::new_i128(n as i128, d as i128)
    }

    pub fn new_i128(n: i128, d: i128) -> Rat {
        assert!(d != 0, "zero denominator");
        let g = n.gcd(&d) * d.signum();
        Rat(BigRational::new_raw(BigInt::from(n / g), BigInt::from(d / g)))
    }

    /// `n/d` for coprime `n, d` with `d > 0`.
    pub(crate) fn from_reduced(n: i64, d: i64) -> Rat {
        debug_assert!(d > 0);
        Rat(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))
    }

    fn small(&self) -> Option<(i64, i64)> {
        Some((self.numer().to_i64()?, self.denom().to_i64()?))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_i128(n: i128) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(r: BigRational) -> Rat {
        Rat(r)
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Fractional part `x - floor(x)`, always in `[0, 1)`.
    pub fn frac(&self) -> Rat {
        Rat(&self.0 - self.0.floor())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn pow(&self, k: u32) -> Rat {
        let mut out = Rat::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Decimal rendering with `digits` fractional digits, rounded half away from zero.
    /// Computed with integer arithmetic only.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale: BigInt = num_traits::pow(BigInt::from(10), digits);
        let num: BigInt = self.numer().abs() * &scale * 2 + self.denom();
        let scaled = num.div_floor(&(self.denom() * 2));
        let neg = self.is_negative() && !scaled.is_zero();
        let s = scaled.to_string();
        let body = if digits == 0 {
            s
        } else {
            let padded = format!("{:0>width$}", s, width = digits + 1);
            let (int, fr) = padded.split_at(padded.len() - digits);
            format!("{int}.{fr}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// Fractional part of `x`.
pub fn frac(x: &Rat) -> Rat {
    x.frac()
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let err = || ParseRatError(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rat(BigRational::new(n, d)))
            }
            None => {
                let n: BigInt = t.parse().map_err(|_| err())?;
                Ok(Rat(BigRational::from_integer(n)))
            }
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct RatVisitor;

impl<'de> Visitor<'de> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as \"p/q\", \"n\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(Rat::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        Ok(Rat(BigRational::from_integer(BigInt::from(v))))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                Rat((&self.0).$m(&o.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                Rat(self.0.$m(o.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                Rat(self.0.$m(&o.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                Rat((&self.0).$m(o.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, o: &Rat) {
        self.0 += &o.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, o: Rat) {
        self.0 += o.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, o: &Rat) {
        self.0 -= &o.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// A spectral value together with its weight in `{0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpectralPair {
    pub alpha: Rat,
    pub weight: u8,
}

impl SpectralPair {
    pub fn new(alpha: Rat, weight: u8) -> SpectralPair {
        assert!(weight <= 2, "spectral pair weight must be 0, 1 or 2");
        SpectralPair { alpha, weight }
    }
}

/// Integer-weighted multiset over spectral pairs. Multiplicities may be negative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairBag {
    entries: BTreeMap<SpectralPair, i64>,
}

impl PairBag {
    pub fn new() -> PairBag {
        PairBag::default()
    }

    /// Builds a bag from entries with distinct keys and nonzero multiplicities.
    pub(crate) fn from_distinct(entries: Vec<(Rat, u8, i64)>) -> PairBag {
        PairBag { entries: entries.into_iter().map(|(a, w, m)| (SpectralPair { alpha: a, weight: w }, m)).collect() }
    }

    pub fn insert(&mut self, alpha: Rat, weight: u8, mult: i64) {
        if mult == 0 {
            return;
        }
        let key = SpectralPair::new(alpha, weight);
        let slot = self.entries.entry(key.clone()).or_insert(0);
        *slot += mult;
        if *slot == 0 {
            self.entries.remove(&key);
        }
    }

    pub fn get(&self, alpha: &Rat, weight: u8) -> i64 {
        self.entries
            .get(&SpectralPair::new(alpha.clone(), weight))
            .copied()
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SpectralPair, i64)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `coef` times `other` into `self`.
    pub fn add_scaled(&mut self, other: &PairBag, coef: i64) {
        for (k, v) in other.iter() {
            self.insert(k.alpha.clone(), k.weight, coef * v);
        }
    }

    pub fn scaled(&self, coef: i64) -> PairBag {
        let mut out = PairBag::new();
        out.add_scaled(self, coef);
        out
    }

    pub fn min_multiplicity(&self) -> Option<i64> {
        self.entries.values().copied().min()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|&v| v > 0)
    }

    /// Entries with negative multiplicity.
    pub fn negative_entries(&self) -> Vec<(SpectralPair, i64)> {
        self.entries
            .iter()
            .filter(|(_, &v)| v < 0)
            .map(|(k, &v)| (k.clone(), v))
            .collect()
    }

    pub fn project(&self) -> SpecBag {
        project(self)
    }
}

impl Add<&PairBag> for &PairBag {
    type Output = PairBag;
    fn add(self, o: &PairBag) -> PairBag {
        let mut out = self.clone();
        out.add_scaled(o, 1);
        out
    }
}

impl Sub<&PairBag> for &PairBag {
    type Output = PairBag;
    fn sub(self, o: &PairBag) -> PairBag {
        let mut out = self.clone();
        out.add_scaled(o, -1);
        out
    }
}

impl AddAssign<&PairBag> for PairBag {
    fn add_assign(&mut self, o: &PairBag) {
        self.add_scaled(o, 1);
    }
}

impl SubAssign<&PairBag> for PairBag {
    fn sub_assign(&mut self, o: &PairBag) {
        self.add_scaled(o, -1);
    }
}

impl Neg for &PairBag {
    type Output = PairBag;
    fn neg(self) -> PairBag {
        self.scaled(-1)
    }
}

impl FromIterator<(Rat, u8, i64)> for PairBag {
    fn from_iter<I: IntoIterator<Item = (Rat, u8, i64)>>(iter: I) -> PairBag {
        let mut out = PairBag::new();
        for (a, w, m) in iter {
            out.insert(a, w, m);
        }
        out
    }
}

impl Serialize for PairBag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|(k, &m)| PairEntry {
            alpha: &k.alpha,
            weight: k.weight,
            mult: m,
        }))
    }
}

struct PairEntry<'a> {
    alpha: &'a Rat,
    weight: u8,
    mult: i64,
}

impl Serialize for PairEntry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PairEntry", 3)?;
        st.serialize_field("alpha", self.alpha)?;
        st.serialize_field("mult", &self.mult)?;
        st.serialize_field("weight", &self.weight)?;
        st.end()
    }
}

/// Integer-weighted multiset over rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecBag {
    entries: BTreeMap<Rat, i64>,
}

impl SpecBag {
    pub fn new() -> SpecBag {
        SpecBag::default()
    }

    pub fn insert(&mut self, alpha: Rat, mult: i64) {
        if mult == 0 {
            return;
        }
        let slot = self.entries.entry(alpha.clone()).or_insert(0);
        *slot += mult;
        if *slot == 0 {
            self.entries.remove(&alpha);
        }
    }

    pub fn get(&self, alpha: &Rat) -> i64 {
        self.entries.get(alpha).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rat, i64)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of multiplicities (the Milnor number for a spectrum).
    pub fn cardinality(&self) -> i64 {
        self.entries.values().sum()
    }

    pub fn moment(&self, k: u32) -> Rat {
        moment(self, k)
    }

    pub fn max(&self) -> Option<&Rat> {
        self.entries.keys().next_back()
    }

    pub fn min(&self) -> Option<&Rat> {
        self.entries.keys().next()
    }

    pub fn add_scaled(&mut self, other: &SpecBag, coef: i64) {
        for (k, v) in other.iter() {
            self.insert(k.clone(), coef * v);
        }
    }
}

impl FromIterator<(Rat, i64)> for SpecBag {
    fn from_iter<I: IntoIterator<Item = (Rat, i64)>>(iter: I) -> SpecBag {
        let mut out = SpecBag::new();
        for (a, m) in iter {
            out.insert(a, m);
        }
        out
    }
}

impl Serialize for SpecBag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|(k, &m)| SpecEntry { alpha: k, mult: m }))
    }
}

struct SpecEntry<'a> {
    alpha: &'a Rat,
    mult: i64,
}

impl Serialize for SpecEntry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpecEntry", 2)?;
        st.serialize_field("alpha", self.alpha)?;
        st.serialize_field("mult", &self.mult)?;
        st.end()
    }
}

/// Sums multiplicities over the weights of each spectral value.
pub fn project(pairs: &PairBag) -> SpecBag {
    let mut merged: Vec<(Rat, i64)> = Vec::with_capacity(pairs.len());
    for (k, m) in pairs.iter() {
        match merged.last_mut() {
            Some((a, total)) if *a == k.alpha => *total += m,
            _ => merged.push((k.alpha.clone(), m)),
        }
    }
    SpecBag { entries: merged.into_iter().filter(|(_, m)| *m != 0).collect() }
}

/// `Σ mult · α^k` over the bag.
pub fn moment(sp: &SpecBag, k: u32) -> Rat {
    let mut by_denom: BTreeMap<&BigInt, BigInt> = BTreeMap::new();
    for (a, m) in sp.iter() {
        *by_denom.entry(a.denom()).or_default() += num_traits::pow(a.numer().clone(), k as usize) * m;
    }
    by_denom
        .into_iter()
        .map(|(d, n)| Rat(BigRational::new(n, num_traits::pow(d.clone(), k as usize))))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn frac_examples() {
        assert_eq!(frac(&r("7/3")), r("1/3"));
        assert_eq!(frac(&r("-1/4")), r("3/4"));
        assert_eq!(frac(&r("2")), Rat::zero());
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Rat::new(2, 4).to_string(), "1/2");
        assert_eq!(Rat::new(-6, 3).to_string(), "-2");
        assert_eq!(Rat::new(3, -9).to_string(), "-1/3");
        assert_eq!(r(" -5/10 "), Rat::new(-1, 2));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rat::new(1, 6).to_decimal(4), "0.1667");
        assert_eq!(Rat::new(-1, 6).to_decimal(3), "-0.167");
        assert_eq!(Rat::new(19, 234).to_decimal(6), "0.081197");
        assert_eq!(Rat::new(5, 2).to_decimal(0), "3");
        assert_eq!(Rat::new(-1, 1000).to_decimal(2), "0.00");
    }

    #[test]
    fn project_examples() {
        let pb: PairBag = [(r("-1/6"), 1, 1), (r("1/6"), 1, 1)].into_iter().collect();
        let sp = project(&pb);
        assert_eq!(sp.get(&r("-1/6")), 1);
        assert_eq!(sp.get(&r("1/6")), 1);
        let pb: PairBag = [(r("0"), 0, 1), (r("0"), 2, 1)].into_iter().collect();
        assert_eq!(project(&pb).get(&Rat::zero()), 2);
        assert!(project(&PairBag::new()).is_empty());
    }

    #[test]
    fn moment_examples() {
        let sp: SpecBag = [(r("-1/6"), 1), (r("1/6"), 1)].into_iter().collect();
        assert_eq!(moment(&sp, 0), Rat::from_int(2));
        assert_eq!(moment(&sp, 2), r("1/18"));
        assert_eq!(moment(&sp, 1), Rat::zero());
    }

    #[test]
    fn zero_entries_vanish() {
        let mut pb = PairBag::new();
        pb.insert(r("1/2"), 1, 3);
        pb.insert(r("1/2"), 1, -3);
        assert!(pb.is_empty());
        let mut sb = SpecBag::new();
        sb.insert(r("1/2"), 0);
        assert!(sb.is_empty());
    }

    #[test]
    fn serialization_is_sorted() {
        let pb: PairBag = [(r("1/6"), 1, 1), (r("-1/6"), 1, 1), (r("0"), 2, 1), (r("0"), 0, 1)]
            .into_iter()
            .collect();
        let keys: Vec<String> = pb
            .iter()
            .map(|(k, _)| format!("{}:{}", k.alpha, k.weight))
            .collect();
        assert_eq!(keys, ["-1/6:1", "0:0", "0:2", "1/6:1"]);
    }
}
