//! Binary forms in `(s, t)` and points of P^1.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{FieldSpec, FieldValue, Fp};
use crate::poly::{Monomial, SparsePoly, VarTable};
use crate::ring::RingElement;

/// Fields up to this size have their roots found by scanning P^1.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 10_000;

/// A point `(s:t)` of P^1, normalized so the first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub s: FieldValue,
    pub t: FieldValue,
}

impl ProjPoint {
    pub fn new(s: FieldValue, t: FieldValue) -> Option<Self> {
        if s.is_zero() && t.is_zero() {
            return None;
        }
        if s.is_zero() {
            let field = t.spec();
            return Some(ProjPoint { s, t: field.one() });
        }
        let inv = s.inv().expect("nonzero");
        Some(ProjPoint {
            t: &t * &inv,
            s: s.spec().one(),
        })
    }

    /// The point `(1:x)`.
    pub fn affine(x: FieldValue) -> Self {
        ProjPoint { s: x.spec().one(), t: x }
    }

    pub fn infinity(field: FieldSpec) -> Self {
        ProjPoint {
            s: field.zero(),
            t: field.one(),
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.s, self.t)
    }
}

/// A homogeneous form of degree `d`; `coeffs[i]` multiplies `s^(d-i) t^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    field: FieldSpec,
    coeffs: Vec<FieldValue>,
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
type Uni = Vec<FieldValue>;

fn trim(mut u: Uni) -> Uni {
    while u.last().is_some_and(FieldValue::is_zero) {
        u.pop();
    }
    u
}

fn uni_rem(a: &Uni, b: &Uni) -> Uni {
    let mut r = a.clone();
    let lead_inv = b.last().expect("nonzero divisor").inv().expect("nonzero lead");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") * &lead_inv;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&c * bi);
        }
        r = trim(r);
    }
    r
}

fn uni_gcd(a: &Uni, b: &Uni) -> Uni {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = uni_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last() {
        let inv = l.inv().expect("nonzero");
        a = a.iter().map(|c| c * &inv).collect();
    }
    a
}

fn uni_eval(u: &Uni, x: &FieldValue) -> FieldValue {
    u.iter().rev().fold(x.spec().zero(), |acc, c| &(&acc * x) + c)
}

impl BinaryForm {
    pub fn zero(field: FieldSpec, degree: usize) -> Self {
        BinaryForm {
            field,
            coeffs: vec![field.zero(); degree + 1],
        }
    }

    pub fn constant(c: FieldValue) -> Self {
        BinaryForm {
            field: c.spec(),
            coeffs: vec![c],
        }
    }

    /// The linear form `a s + b t`.
    pub fn linear(a: FieldValue, b: FieldValue) -> Self {
        BinaryForm {
            field: a.spec(),
            coeffs: vec![a, b],
        }
    }

    pub fn from_coeffs(field: FieldSpec, coeffs: Vec<FieldValue>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form has at least one coefficient");
        BinaryForm { field, coeffs }
    }

    pub fn from_i64(field: FieldSpec, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// `s^a t^b`.
    pub fn monomial(field: FieldSpec, a: usize, b: usize) -> Self {
        let mut f = Self::zero(field, a + b);
        f.coeffs[b] = field.one();
        f
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldValue] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldValue::is_zero)
    }

    pub fn eval(&self, s: &FieldValue, t: &FieldValue) -> FieldValue {
        let d = self.degree();
        let mut acc = self.field.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&(c * &s.pow((d - i) as u64)) * &t.pow(i as u64));
        }
        acc
    }

    pub fn vanishes_at(&self, p: &ProjPoint) -> bool {
        self.eval(&p.s, &p.t).is_zero()
    }

    pub fn scale(&self, c: &FieldValue) -> Self {
        BinaryForm {
            field: self.field,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn try_add(&self, o: &Self) -> Option<Self> {
        if self.is_zero() && self.degree() != o.degree() {
            return Some(o.clone());
        }
        if o.is_zero() && self.degree() != o.degree() {
            return Some(self.clone());
        }
        if self.degree() != o.degree() {
            return None;
        }
        Some(BinaryForm {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul_form(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.field, self.degree() + o.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
            }
        }
        out
    }

    /// Multiplicity of the root `(0:1)`, i.e. the power of `s` dividing the form.
    fn s_multiplicity(&self) -> usize {
        let d = self.degree();
        (0..=d).take_while(|&k| self.coeffs[d - k].is_zero()).count()
    }

    /// `f(1, t)` as a univariate polynomial in `t`.
    fn dehomogenize(&self) -> Uni {
        trim(self.coeffs.clone())
    }

    fn homogenize(u: &Uni, s_power: usize, field: FieldSpec) -> Self {
        let e = u.len().saturating_sub(1);
        let mut coeffs = vec![field.zero(); e + s_power + 1];
        coeffs[..u.len()].clone_from_slice(u);
        if u.is_empty() {
            coeffs[0] = field.one();
        }
        BinaryForm { field, coeffs }
    }

    /// Monic gcd (leading `t`-coefficient of the dehomogenized part is 1).
    /// The gcd with the zero form is the other form, normalized.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        let m = self.s_multiplicity().min(o.s_multiplicity());
        let g = uni_gcd(&self.dehomogenize(), &o.dehomogenize());
        Self::homogenize(&g, m, self.field)
    }

    pub fn gcd_all<'a>(forms: impl IntoIterator<Item = &'a BinaryForm>, field: FieldSpec) -> Self {
        forms
            .into_iter()
            .fold(BinaryForm::zero(field, 0), |acc, f| acc.gcd(f))
    }

    /// Scaled so that the last nonzero coefficient of `f(1, t)` is 1.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().rev().find(|c| !c.is_zero()) {
            Some(l) => self.scale(&l.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Distinct roots in P^1 over the base field. `None` for the zero form.
    pub fn roots(&self) -> Option<Vec<ProjPoint>> {
        if self.is_zero() {
            return None;
        }
        let mut out = Vec::new();
        if self.s_multiplicity() > 0 {
            out.push(ProjPoint::infinity(self.field));
        }
        let u = self.dehomogenize();
        let mut affine = match self.field {
            FieldSpec::Prime(p) => prime_roots(&u, p),
            FieldSpec::Rational => rational_roots(&u),
        };
        affine.sort();
        affine.dedup();
        out.extend(affine.into_iter().map(ProjPoint::affine));
        out.sort();
        Some(out)
    }

    pub fn to_poly(&self) -> SparsePoly {
        let vars = st_vars();
        let d = self.degree() as u32;
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial(vec![d - i as u32, i as u32]), c.clone()));
        SparsePoly::from_terms(&vars, self.field, terms).expect("consistent ring")
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl RingElement for BinaryForm {
    fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("adding binary forms of different degrees")
    }
    fn sub(&self, o: &Self) -> Self {
        self.try_add(&o.scale(&(-o.field.one()))).expect("subtracting binary forms of different degrees")
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_form(o)
    }
    fn neg(&self) -> Self {
        self.scale(&(-self.field.one()))
    }
    fn is_zero(&self) -> bool {
        BinaryForm::is_zero(self)
    }
}

pub fn st_vars() -> Arc<VarTable> {
    static VARS: OnceLock<Arc<VarTable>> = OnceLock::new();
    VARS.get_or_init(|| VarTable::new(&["s", "t"]).expect("distinct")).clone()
}

fn to_residues(u: &Uni) -> Vec<u64> {
    u.iter().map(|c| c.residue().expect("prime field")).collect()
}

fn prime_roots(u: &Uni, p: u64) -> Vec<FieldValue> {
    let fp = Fp::new(p);
    if u.len() <= 1 {
        return Vec::new();
    }
    let coeffs = to_residues(u);
    if p <= EXHAUSTIVE_ROOT_LIMIT {
        return (0..p)
            .filter(|&x| coeffs.iter().rev().fold(0, |acc, &c| fp.add(fp.mul(acc, x), c)) == 0)
            .map(|x| fp.value(x))
            .collect();
    }
    cz::roots(fp, &coeffs).into_iter().map(|x| fp.value(x)).collect()
}

/// Root finding over large prime fields: `gcd(f, t^p - t)` followed by
/// equal-degree splitting with `(t + a)^((p-1)/2) - 1` for `a = 0, 1, 2, ...`.
mod cz {
    use crate::field::Fp;

    type P = Vec<u64>;

    fn trim(mut a: P) -> P {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn rem(fp: Fp, a: &P, b: &P) -> P {
        let mut r = a.clone();
        let inv = fp.inv(*b.last().expect("nonzero"));
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = fp.mul(*r.last().expect("nonempty"), inv);
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = fp.sub(r[shift + i], fp.mul(c, bi));
            }
            r = trim(r);
        }
        r
    }

    fn mulmod(fp: Fp, a: &P, b: &P, m: &P) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = fp.add(out[i + j], fp.mul(x, y));
            }
        }
        rem(fp, &trim(out), m)
    }

    fn powmod(fp: Fp, base: &P, mut e: u64, m: &P) -> P {
        let mut acc = rem(fp, &vec![1], m);
        let mut b = rem(fp, base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(fp, &acc, &b, m);
            }
            b = mulmod(fp, &b, &b, m);
            e >>= 1;
        }
        acc
    }

    fn gcd(fp: Fp, a: &P, b: &P) -> P {
        let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
        while !b.is_empty() {
            let r = rem(fp, &a, &b);
            a = b;
            b = r;
        }
        if let Some(&l) = a.last() {
            let inv = fp.inv(l);
            a = a.iter().map(|&c| fp.mul(c, inv)).collect();
        }
        a
    }

    fn div(fp: Fp, a: &P, b: &P) -> P {
        let mut r = a.clone();
        let inv = fp.inv(*b.last().expect("nonzero"));
        let mut q = vec![0; a.len() + 1 - b.len()];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = fp.mul(*r.last().expect("nonempty"), inv);
            q[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = fp.sub(r[shift + i], fp.mul(c, bi));
            }
            r = trim(r);
        }
        q
    }

    fn sub_x(fp: Fp, a: &P) -> P {
        let mut a = a.clone();
        if a.len() < 2 {
            a.resize(2, 0);
        }
        a[1] = fp.sub(a[1], 1);
        trim(a)
    }

    pub fn roots(fp: Fp, f: &[u64]) -> Vec<u64> {
        let f = trim(f.to_vec());
        if f.len() <= 1 {
            return Vec::new();
        }
        let xp = powmod(fp, &vec![0, 1], fp.p, &f);
        let g = gcd(fp, &f, &sub_x(fp, &xp));
        let mut out = Vec::new();
        split(fp, g, 0, &mut out);
        out.sort_unstable();
        out
    }

    fn split(fp: Fp, g: P, mut a: u64, out: &mut Vec<u64>) {
        match g.len() {
            0 | 1 => return,
            2 => {
                out.push(fp.neg(fp.mul(g[0], fp.inv(g[1]))));
                return;
            }
            _ => {}
        }
        loop {
            let h = powmod(fp, &vec![a % fp.p, 1], (fp.p - 1) / 2, &g);
            let mut h1 = h.clone();
            if h1.is_empty() {
                h1.push(0);
            }
            h1[0] = fp.sub(h1[0], 1);
            let d = gcd(fp, &g, &trim(h1));
            a += 1;
            if d.len() > 1 && d.len() < g.len() {
                let rest = div(fp, &g, &d);
                split(fp, d, a, out);
                split(fp, gcd(fp, &rest, &rest), a, out);
                return;
            }
        }
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if !m.is_one() {
        primes.push((m, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for x in &out {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(x * &pw);
                pw *= &p;
            }
        }
        out = next;
    }
    out
}

/// Rational roots via the rational root theorem on the integer-scaled polynomial.
fn rational_roots(u: &Uni) -> Vec<FieldValue> {
    let mut u: Vec<BigRational> = u.iter().map(|c| c.as_rational().expect("rational").clone()).collect();
    let mut out = Vec::new();
    if u.len() <= 1 {
        return out;
    }
    if u[0].is_zero() {
        out.push(FieldSpec::Rational.zero());
        let k = u.iter().take_while(|c| c.is_zero()).count();
        u.drain(..k);
    }
    if u.len() <= 1 {
        return out;
    }
    let lcm = u.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = u.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let c0 = &ints[0];
    let cn = ints.last().expect("nonempty");
    let uni: Uni = u.iter().map(|c| FieldValue::Rational(c.clone())).collect();
    for a in divisors(c0) {
        for b in divisors(cn) {
            for sign in [1, -1] {
                let x = FieldValue::Rational(BigRational::new(&a * sign, b.clone()));
                if uni_eval(&uni, &x).is_zero() {
                    out.push(x);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_with_s_factors() {
        let f = FieldSpec::Rational;
        // s^2 t^2 and s t^3
        let a = BinaryForm::monomial(f, 2, 2);
        let b = BinaryForm::monomial(f, 1, 3);
        assert_eq!(a.gcd(&b), BinaryForm::monomial(f, 1, 2));
        let roots = a.roots().unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].to_string(), "(0:1)");
        assert_eq!(roots[1].to_string(), "(1:0)");
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        for field in [FieldSpec::Rational, FieldSpec::Prime(101), FieldSpec::Prime(10007), FieldSpec::Prime(32233)] {
            // (s - 2t)(s + t) and (s - 2t)(3s - t)
            let l1 = BinaryForm::from_i64(field, &[1, -2]);
            let a = l1.mul_form(&BinaryForm::from_i64(field, &[1, 1]));
            let b = l1.mul_form(&BinaryForm::from_i64(field, &[3, -1]));
            let g = a.gcd(&b);
            assert_eq!(g, l1.normalized());
            let r = g.roots().unwrap();
            assert_eq!(r, vec![ProjPoint::affine(field.from_rational(&BigRational::new(1.into(), 2.into())).unwrap())]);
        }
    }

    #[test]
    fn zero_form_has_no_root_list() {
        assert!(BinaryForm::zero(FieldSpec::Prime(7), 3).roots().is_none());
        let one = BinaryForm::constant(FieldSpec::Prime(7).one());
        assert_eq!(one.roots().unwrap(), vec![]);
    }

    #[test]
    fn large_prime_roots_match_scan_of_known_factors() {
        let field = FieldSpec::Prime(32233);
        let mut f = BinaryForm::constant(field.one());
        for r in [5i64, 17, 32000] {
            f = f.mul_form(&BinaryForm::from_i64(field, &[-r, 1]));
        }
        // irreducible-ish quadratic factor t^2 - 3 s^2 may or may not split; multiply by t^2+1
        f = f.mul_form(&BinaryForm::from_i64(field, &[1, 0, 1]));
        let roots = f.roots().unwrap();
        for r in &roots {
            assert!(f.vanishes_at(r));
        }
        for r in [5i64, 17, 32000] {
            assert!(roots.contains(&ProjPoint::affine(field.from_i64(r))));
        }
        // 32233 = 1 mod 4, so t^2 + 1 splits too
        assert_eq!(roots.len(), 5);
    }

    #[test]
    fn rational_roots_with_fractions() {
        let f = FieldSpec::Rational;
        // (2s - 3t)(s + 5t) t
        let a = BinaryForm::from_i64(f, &[2, -3])
            .mul_form(&BinaryForm::from_i64(f, &[1, 5]))
            .mul_form(&BinaryForm::from_i64(f, &[0, 1]));
        let roots = a.roots().unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(a.vanishes_at(r));
        }
    }
}
