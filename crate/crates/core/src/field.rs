//! Exact scalars over prime fields `F_p` and over the rationals.
//!
//! A [`FieldValue`] always carries the field it lives in, so mixing two
//! fields is detected at the operation rather than producing garbage.
//! Representatives are canonical: residues live in `[0, p)` and rationals
//! are reduced fractions with positive denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not below 2^63")]
    ModulusTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("cannot parse {text:?} as an element of {field}")]
    Parse { text: String, field: FieldSpec },
    #[error("unknown field {0:?} (expected p<prime> or q)")]
    UnknownField(String),
}

pub type FieldResult<T> = Result<T, FieldError>;

/// The ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl FieldSpec {
    /// Prime field `F_p`; `p` is checked for primality.
    pub fn prime(p: u64) -> FieldResult<Self> {
        if p >= 1 << 63 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> FieldValue {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldValue {
        match *self {
            FieldSpec::Prime(p) => FieldValue::Prime {
                p,
                v: (n as i128).rem_euclid(p as i128) as u64,
            },
            FieldSpec::Rational => FieldValue::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldValue {
        match *self {
            FieldSpec::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldValue::Prime {
                    p,
                    v: r.to_u64().expect("residue fits in u64"),
                }
            }
            FieldSpec::Rational => FieldValue::Rational(BigRational::from_integer(n.clone())),
        }
    }

    /// Image of a rational number; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> FieldResult<FieldValue> {
        match self {
            FieldSpec::Rational => Ok(FieldValue::Rational(q.clone())),
            FieldSpec::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                num.try_div(&den)
            }
        }
    }

    /// Uniform residue for prime fields; an integer in `[-bound, bound]` for the rationals.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, rational_bound: i64) -> FieldValue {
        match *self {
            FieldSpec::Prime(p) => FieldValue::Prime {
                p,
                v: rng.gen_range(0..p),
            },
            FieldSpec::Rational => self.from_i64(rng.gen_range(-rational_bound..=rational_bound)),
        }
    }

    /// Uniform nonzero value.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, rational_bound: i64) -> FieldValue {
        loop {
            let v = self.random(rng, rational_bound);
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// Parses the scalar text encoding: a decimal integer for prime fields,
    /// `num/den` (or a bare integer) for the rationals.
    pub fn parse_value(&self, text: &str) -> FieldResult<FieldValue> {
        let err = || FieldError::Parse {
            text: text.to_string(),
            field: *self,
        };
        let t = text.trim();
        match self {
            FieldSpec::Prime(p) => {
                let n = BigInt::from_str(t).map_err(|_| err())?;
                if n.is_negative() || n >= BigInt::from(*p) {
                    return Err(err());
                }
                Ok(self.from_bigint(&n))
            }
            FieldSpec::Rational => {
                let (num, den) = match t.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (t, "1"),
                };
                let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
                let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
                if den.is_zero() {
                    return Err(err());
                }
                Ok(FieldValue::Rational(BigRational::new(num, den)))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "p{p}"),
            FieldSpec::Rational => write!(f, "q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `p31`, `F31`, `31`, `q`, `QQ`, `rational`.
    fn from_str(s: &str) -> FieldResult<Self> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if matches!(lower.as_str(), "q" | "qq" | "rational" | "rationals") {
            return Ok(FieldSpec::Rational);
        }
        let digits = lower
            .strip_prefix("gf")
            .or_else(|| lower.strip_prefix('p'))
            .or_else(|| lower.strip_prefix('f'))
            .unwrap_or(&lower);
        let p: u64 = digits
            .parse()
            .map_err(|_| FieldError::UnknownField(t.to_string()))?;
        FieldSpec::prime(p)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<String>,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let j = match self {
            FieldSpec::Prime(p) => FieldSpecJson {
                kind: "prime".into(),
                modulus: Some(p.to_string()),
            },
            FieldSpec::Rational => FieldSpecJson {
                kind: "rational".into(),
                modulus: None,
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = FieldSpecJson::deserialize(d)?;
        match j.kind.as_str() {
            "rational" => Ok(FieldSpec::Rational),
            "prime" => {
                let m = j.modulus.ok_or_else(|| D::Error::missing_field("modulus"))?;
                let p: u64 = m.parse().map_err(D::Error::custom)?;
                FieldSpec::prime(p).map_err(D::Error::custom)
            }
            other => Err(D::Error::custom(format!("unknown field kind {other:?}"))),
        }
    }
}

/// An exact scalar tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldValue {
    Prime { p: u64, v: u64 },
    Rational(BigRational),
}

impl FieldValue {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldValue::Prime { p, .. } => FieldSpec::Prime(*p),
            FieldValue::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Prime { v, .. } => *v == 0,
            FieldValue::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Prime { v, .. } => *v == 1,
            FieldValue::Rational(q) => q.is_one(),
        }
    }

    fn check(&self, other: &FieldValue) -> FieldResult<()> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.spec(), other.spec()))
        }
    }

    pub fn try_add(&self, other: &FieldValue) -> FieldResult<FieldValue> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldValue::Prime { p, v: a }, FieldValue::Prime { v: b, .. }) => FieldValue::Prime {
                p: *p,
                v: add_mod(*a, *b, *p),
            },
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a + b),
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &FieldValue) -> FieldResult<FieldValue> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &FieldValue) -> FieldResult<FieldValue> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldValue::Prime { p, v: a }, FieldValue::Prime { v: b, .. }) => FieldValue::Prime {
                p: *p,
                v: mul_mod(*a, *b, *p),
            },
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a * b),
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, other: &FieldValue) -> FieldResult<FieldValue> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> FieldResult<FieldValue> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldValue::Prime { p, v } => FieldValue::Prime {
                p: *p,
                v: inv_mod(*v, *p),
            },
            FieldValue::Rational(q) => FieldValue::Rational(q.recip()),
        })
    }

    fn neg_ref(&self) -> FieldValue {
        match self {
            FieldValue::Prime { p, v } => FieldValue::Prime {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
            FieldValue::Rational(q) => FieldValue::Rational(-q),
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldValue {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The residue, for prime-field values.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldValue::Prime { v, .. } => Some(*v),
            FieldValue::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldValue::Rational(q) => Some(q),
            FieldValue::Prime { .. } => None,
        }
    }

    /// Re-reduces the stored representative.
    pub fn normalized(&self) -> FieldValue {
        match self {
            FieldValue::Prime { p, v } => FieldValue::Prime { p: *p, v: v % p },
            FieldValue::Rational(q) => {
                FieldValue::Rational(BigRational::new(q.numer().clone(), q.denom().clone()))
            }
        }
    }

    /// Canonical text: decimal residue, or `num/den` for rationals.
    pub fn to_text(&self) -> String {
        match self {
            FieldValue::Prime { v, .. } => v.to_string(),
            FieldValue::Rational(q) => format!("{}/{}", q.numer(), q.denom()),
        }
    }
}

impl fmt::Display for FieldValue {
    /// Rationals with denominator one print as bare integers here; use
    /// [`FieldValue::to_text`] for the canonical storage encoding.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Prime { v, .. } => write!(f, "{v}"),
            FieldValue::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            FieldValue::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

// Operator forms panic on field mismatch; the `try_*` methods report it.
impl Add for &FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &FieldValue) -> FieldValue {
        self.try_add(rhs).expect("field mismatch in addition")
    }
}

impl Sub for &FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: &FieldValue) -> FieldValue {
        self.try_sub(rhs).expect("field mismatch in subtraction")
    }
}

impl Mul for &FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &FieldValue) -> FieldValue {
        self.try_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

impl Add for FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: FieldValue) -> FieldValue {
        &self + &rhs
    }
}

impl Sub for FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: FieldValue) -> FieldValue {
        &self - &rhs
    }
}

impl Mul for FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: FieldValue) -> FieldValue {
        &self * &rhs
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Raw `u64` arithmetic in `F_p` for the hot loops of the samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        add_mod(a, self.p - b % self.p, self.p)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    pub fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }

    /// Square roots of `a` (Tonelli-Shanks); empty for non-residues.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if p == 2 {
            return Some(a);
        }
        if self.pow(a, (p - 1) / 2) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.pow(z, (p - 1) / 2) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Roots of `c0 + c1 x + c2 x^2`; `None` when the polynomial is identically zero.
    pub fn quadratic_roots(&self, c0: u64, c1: u64, c2: u64) -> Option<Vec<u64>> {
        if c2 == 0 {
            if c1 == 0 {
                return if c0 == 0 { None } else { Some(vec![]) };
            }
            return Some(vec![self.mul(self.neg(c0), self.inv(c1))]);
        }
        if self.p == 2 {
            return Some((0..2).filter(|&x| self.add(c0, self.add(self.mul(c1, x), self.mul(c2, x))) == 0).collect());
        }
        let disc = self.sub(self.mul(c1, c1), self.mul(4, self.mul(c0, c2)));
        let Some(r) = self.sqrt(disc) else {
            return Some(vec![]);
        };
        let inv2a = self.inv(self.mul(2, c2));
        let x1 = self.mul(self.sub(r, c1), inv2a);
        let x2 = self.mul(self.sub(self.neg(r), c1), inv2a);
        Some(if x1 == x2 { vec![x1] } else { vec![x1, x2] })
    }

    pub fn value(&self, v: u64) -> FieldValue {
        FieldValue::Prime { p: self.p, v: v % self.p }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> FieldValue {
        FieldValue::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn small_examples() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(&f7.from_i64(3) * &f7.from_i64(5), f7.from_i64(1));
        assert_eq!(&q(2, 3) + &q(1, 6), q(5, 6));
        let f31 = FieldSpec::prime(31).unwrap();
        assert_eq!(f31.from_i64(2).inv().unwrap(), f31.from_i64(16));
    }

    #[test]
    fn errors() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.zero().inv(), Err(FieldError::DivisionByZero));
        assert_eq!(q(1, 2).try_div(&q(0, 1)), Err(FieldError::DivisionByZero));
        assert!(matches!(
            f7.one().try_add(&q(1, 1)),
            Err(FieldError::Mismatch(..))
        ));
        assert!(matches!(
            f7.one().try_mul(&FieldSpec::prime(11).unwrap().one()),
            Err(FieldError::Mismatch(..))
        ));
        assert_eq!(FieldSpec::prime(32), Err(FieldError::NotPrime(32)));
        assert!(FieldSpec::prime(1 << 63).is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        for p in [31, 101, 10007, 32233, 1_000_000_007, 9_223_372_036_854_775_783] {
            assert!(is_prime(p), "{p}");
        }
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn text_round_trip() {
        let f = FieldSpec::prime(101).unwrap();
        assert_eq!(f.parse_value("57").unwrap().to_text(), "57");
        assert!(f.parse_value("101").is_err());
        assert!(f.parse_value("-1").is_err());
        let r = FieldSpec::Rational;
        assert_eq!(r.parse_value("4/-6").unwrap().to_text(), "-2/3");
        assert_eq!(r.parse_value("7").unwrap().to_text(), "7/1");
        assert!(r.parse_value("1/0").is_err());
        assert_eq!("p31".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(31));
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!(FieldSpec::Prime(32233).to_string(), "p32233");
    }

    #[test]
    fn spec_json() {
        let s = serde_json::to_string(&FieldSpec::Prime(31)).unwrap();
        assert_eq!(s, r#"{"kind":"prime","modulus":"31"}"#);
        let back: FieldSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, FieldSpec::Prime(31));
        let r: FieldSpec = serde_json::from_str(r#"{"kind":"rational"}"#).unwrap();
        assert_eq!(r, FieldSpec::Rational);
        assert!(serde_json::from_str::<FieldSpec>(r#"{"kind":"prime","modulus":"33"}"#).is_err());
    }

    #[test]
    fn inverse_law_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [
            FieldSpec::Prime(31),
            FieldSpec::Prime(101),
            FieldSpec::Prime(10007),
            FieldSpec::Prime(32233),
            FieldSpec::Rational,
        ] {
            for _ in 0..1000 {
                let x = field.random(&mut rng, 1000);
                let y = field.random(&mut rng, 1000);
                let y = if field == FieldSpec::Rational {
                    y.try_div(&field.random_nonzero(&mut rng, 1000)).unwrap()
                } else {
                    y
                };
                if y.is_zero() {
                    continue;
                }
                assert_eq!(&(&x * &y) * &y.inv().unwrap(), x);
                assert_eq!(x.normalized().normalized(), x.normalized());
                assert_eq!(x.normalized(), x);
            }
        }
    }

    #[test]
    fn sqrt_and_quadratics() {
        for p in [31u64, 101, 10007, 32233, 17, 41] {
            let f = Fp::new(p);
            for a in 0..p.min(500) {
                match f.sqrt(a) {
                    Some(r) => assert_eq!(f.mul(r, r), a),
                    None => assert!((0..p).all(|x| f.mul(x, x) != a)),
                }
            }
            // (x - 3)(x - 5) = x^2 - 8x + 15
            let mut roots = f.quadratic_roots(15, f.neg(8), 1).unwrap();
            roots.sort();
            assert_eq!(roots, vec![3, 5]);
        }
        assert_eq!(Fp::new(31).quadratic_roots(0, 0, 0), None);
    }
}
