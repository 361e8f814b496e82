//! Exact scalars over the rationals and prime fields.
//!
//! Rationals keep an `i64` fast path and spill to arbitrary precision only
//! when a result no longer fits. Both representations are canonical, so
//! structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The base field every value of a computation lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// 0 for the rationals, `p` for GF(p).
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(Rational::from_integer(n)),
            Field::Prime(p) => Scalar::Modular {
                residue: (n as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    /// `n / d` in this field. Fails when `d` vanishes in the field.
    pub fn ratio(self, n: i64, d: i64) -> Result<Scalar> {
        let den = self.from_i64(d);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.from_i64(n) / &den)
    }

    /// Whether `n` is a unit in this field.
    pub fn is_invertible(self, n: i64) -> bool {
        !self.from_i64(n).is_zero()
    }

    /// Parses a scalar string and moves it into this field.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        s.parse::<Scalar>()?.into_field(self)
    }

    /// Parses `Q`, `GF:p`, `GFp` or `GF(p)`.
    pub fn from_name(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let upper = t.to_ascii_uppercase();
        let rest = upper
            .strip_prefix("GF")
            .ok_or_else(|| Error::ParseScalar(format!("unknown field {s:?}")))?;
        let digits = rest.trim_start_matches([':', '(']).trim_end_matches(')');
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::ParseScalar(format!("unknown field {s:?}")))?;
        Field::prime(p)
    }

    pub(crate) fn check(self, other: Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::MixedFields(self, other))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Field::Rational => s.serialize_str("Q"),
            Field::Prime(p) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("GF", p)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Prime {
                #[serde(rename = "GF")]
                gf: u64,
            },
        }
        match Raw::deserialize(d)? {
            Raw::Name(n) => Field::from_name(&n).map_err(serde::de::Error::custom),
            Raw::Prime { gf } => Field::prime(gf).map_err(serde::de::Error::custom),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Debug)]
enum Repr {
    Small(i64, i64),
    Big(Box<BigRational>),
}

/// A canonical rational number: reduced, positive denominator.
#[derive(Clone, Debug)]
pub struct Rational(Repr);

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn from_integer(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// Builds `n / d`; panics on a zero denominator.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        let g = gcd_i128(n, d).max(1);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            )))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational arithmetic keeps values reduced with a positive denominator.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    pub fn from_bigints(n: BigInt, d: BigInt) -> Self {
        assert!(!d.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(n, d))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.0, Repr::Small(_, 1))
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(b) => Self::from_big(b.recip()),
        })
    }

    fn add_ref(&self, o: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &o.0) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Self::from_i128(a + c, b);
            }
            if let (Some(x), Some(y), Some(den)) = (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                if let Some(num) = x.checked_add(y) {
                    return Self::from_i128(num, den);
                }
            }
        }
        Self::from_big(self.to_big() + o.to_big())
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &o.0) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(n), Some(den)) = (a.checked_mul(c), b.checked_mul(d)) {
                return Self::from_i128(n, den);
            }
        }
        Self::from_big(self.to_big() * o.to_big())
    }

    fn neg_ref(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(-(*n as i128), *d as i128),
            Repr::Big(b) => Self::from_big(-(**b).clone()),
        }
    }

    /// Image in GF(p); fails when the denominator is divisible by `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<u64> {
        let pb = BigInt::from(p);
        let n = self.numer().mod_floor(&pb).to_u64().unwrap_or(0);
        let d = self.denom().mod_floor(&pb).to_u64().unwrap_or(0);
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(mul_mod(n, pow_mod(d, p - 2, p), p))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_big().cmp(&other.to_big())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.denom().is_one() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseScalar(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::from_bigints(n, d))
    }
}

/// An exact field element. Arithmetic between different fields panics
/// through the operator traits; the `try_*` methods report it instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Modular { residue: u64, modulus: u64 },
}

impl Scalar {
    pub fn modular(residue: u64, modulus: u64) -> Self {
        Scalar::Modular {
            residue: residue % modulus,
            modulus,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular { residue, .. } => *residue == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => r.recip().map(Scalar::Rational),
            Scalar::Modular { residue, modulus } => {
                if *residue == 0 {
                    None
                } else {
                    Some(Scalar::Modular {
                        residue: pow_mod(*residue, modulus - 2, *modulus),
                        modulus: *modulus,
                    })
                }
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Moves a scalar into `field`. Rationals reduce modulo `p`; residues
    /// only stay in their own field.
    pub fn into_field(self, field: Field) -> Result<Scalar> {
        match (&self, field) {
            (Scalar::Rational(_), Field::Rational) => Ok(self),
            (Scalar::Rational(r), Field::Prime(p)) => Ok(Scalar::modular(r.reduce_mod(p)?, p)),
            (Scalar::Modular { modulus, .. }, Field::Prime(p)) if *modulus == p => Ok(self),
            _ => Err(Error::MixedFields(self.field(), field)),
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar> {
        self.field().check(o.field())?;
        Ok(self + o)
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar> {
        self.field().check(o.field())?;
        Ok(self - o)
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        self.field().check(o.field())?;
        Ok(self * o)
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar> {
        self.field().check(o.field())?;
        let inv = o.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }
}

fn mixed(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed field kinds: {} and {}", a.field(), b.field())
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;

    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.add_ref(b)),
            (Scalar::Modular { residue: a, modulus: p }, Scalar::Modular { residue: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular {
                    residue: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mixed(self, o),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a.neg_ref()),
            Scalar::Modular { residue, modulus } => Scalar::Modular {
                residue: if *residue == 0 { 0 } else { modulus - residue },
                modulus: *modulus,
            },
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;

    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;

    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.mul_ref(b)),
            (Scalar::Modular { residue: a, modulus: p }, Scalar::Modular { residue: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular {
                    residue: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => mixed(self, o),
        }
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;

    fn div(self, o: &Scalar) -> Scalar {
        let inv = o.inv().expect("division by zero");
        self * &inv
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { self.$m(&o) }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Modular { residue, modulus } => write!(f, "{residue} mod {modulus}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `a`, `a/b` and `r mod p`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((r, p)) = t.split_once("mod") {
            let bad = || Error::ParseScalar(s.to_string());
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            let r: i128 = r.trim().parse().map_err(|_| bad())?;
            let residue = r.rem_euclid(p as i128) as u64;
            return Ok(Scalar::Modular { residue, modulus: p });
        }
        Ok(Scalar::Rational(t.parse()?))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Scalar::Rational(Rational::from_integer(n))),
        }
    }
}

/// Binomial coefficient `C(n, k)` in `field`, by Pascal's rule so that no
/// division is needed in positive characteristic.
pub fn binomial_row(field: Field, n: usize) -> Vec<Scalar> {
    let mut row = vec![field.one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(field.one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(field.one());
        row = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form() {
        let r: Rational = "6/-4".parse().unwrap();
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::new(0, -7).to_string(), "0");
    }

    #[test]
    fn rational_overflow_spills_and_comes_back() {
        let big = Scalar::Rational(Rational::from_integer(i64::MAX));
        let sq = &big * &big;
        assert_eq!(sq.to_string(), "85070591730234615847396907784232501249");
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back, Scalar::Rational(Rational(Repr::Small(..)))));
    }

    #[test]
    fn modular_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert_eq!((&a - &b).to_string(), "5 mod 7");
    }

    #[test]
    fn parse_and_convert() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(3));
        assert_eq!(f.parse("4 mod 5").unwrap(), f.from_i64(4));
        assert!(matches!(f.parse("1/5"), Err(Error::DivisionByZero)));
        assert!(matches!(
            Field::Rational.parse("1 mod 5"),
            Err(Error::MixedFields(..))
        ));
        assert!(matches!("2 mod 6".parse::<Scalar>(), Err(Error::NotPrime(6))));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Field::Rational.one();
        let b = Field::Prime(3).one();
        assert_eq!(a.try_add(&b), Err(Error::MixedFields(Field::Rational, Field::Prime(3))));
    }

    #[test]
    fn field_names() {
        assert_eq!(Field::from_name("GF:7").unwrap(), Field::Prime(7));
        assert_eq!(Field::from_name("GF7").unwrap(), Field::Prime(7));
        assert_eq!(Field::from_name("gf(11)").unwrap(), Field::Prime(11));
        assert_eq!(Field::from_name("Q").unwrap(), Field::Rational);
        assert!(Field::from_name("GF:8").is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn pascal_mod_p() {
        let f = Field::prime(5).unwrap();
        let row = binomial_row(f, 5);
        let expect: Vec<_> = [1, 0, 0, 0, 0, 1].iter().map(|&n| f.from_i64(n)).collect();
        assert_eq!(row, expect);
    }
}
