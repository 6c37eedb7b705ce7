//! Sparse multivariate polynomials over a [`FieldSpec`].
//!
//! Terms are stored in a `BTreeMap` keyed by exponent vectors ordered
//! graded-lexicographically, so iteration (and the text form) is
//! deterministic. Every polynomial carries its [`VarTable`] and field;
//! arithmetic between different rings is an error.

mod kernel;
mod parse;

pub use kernel::{bounded_degree_kernel, homogeneous_kernel, minimal_kernel_generators, monomials_of_degree, monomials_up_to, KernelGenerator};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldError, FieldSpec, FieldValue};
use crate::linalg::Matrix;
use crate::ring::RingElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different variable tables")]
    VarMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("duplicate variable name {0:?}")]
    DuplicateVariable(String),
    #[error("grading must give every variable a degree vector of length {0}")]
    BadGrading(usize),
    #[error("variable table has no grading")]
    MissingGrading,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type PolyResult<T> = Result<T, PolyError>;

/// Ordered variable names, optionally with a multigrading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    grading: Option<Vec<Vec<u32>>>,
}

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> PolyResult<Arc<Self>> {
        Self::build(names, None)
    }

    /// Each variable gets a degree vector; all vectors share one length.
    pub fn graded<S: AsRef<str>>(names: &[S], grading: Vec<Vec<u32>>) -> PolyResult<Arc<Self>> {
        Self::build(names, Some(grading))
    }

    fn build<S: AsRef<str>>(names: &[S], grading: Option<Vec<Vec<u32>>>) -> PolyResult<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        if let Some(g) = &grading {
            let dim = g.first().map_or(0, Vec::len);
            if g.len() != names.len() || g.iter().any(|d| d.len() != dim) || dim == 0 {
                return Err(PolyError::BadGrading(dim));
            }
        }
        Ok(Arc::new(VarTable { names, grading }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn grading(&self) -> Option<&[Vec<u32>]> {
        self.grading.as_deref()
    }

    /// Length of the degree vectors (1 for ungraded tables, which use total degree).
    pub fn grading_dim(&self) -> usize {
        self.grading.as_ref().map_or(1, |g| g[0].len())
    }

    /// Multidegree of an exponent vector; total degree for ungraded tables.
    pub fn degree_of(&self, m: &Monomial) -> Vec<u32> {
        match &self.grading {
            Some(g) => {
                let mut d = vec![0u32; g[0].len()];
                for (e, w) in m.0.iter().zip(g) {
                    for (di, wi) in d.iter_mut().zip(w) {
                        *di += e * wi;
                    }
                }
                d
            }
            None => vec![m.total_degree()],
        }
    }

    /// Degree vector of a single variable.
    pub fn var_degree(&self, i: usize) -> Vec<u32> {
        match &self.grading {
            Some(g) => g[i].clone(),
            None => vec![1],
        }
    }
}

/// Exponent vector; ordered by total degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn fmt_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(Vec<u32>),
    /// First pair of terms (in descending order) with different multidegrees.
    Mixed { first: Monomial, second: Monomial },
}

impl Homogeneity {
    pub fn degree(&self) -> Option<&[u32]> {
        match self {
            Homogeneity::Homogeneous(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self, Homogeneity::Mixed { .. })
    }
}

#[derive(Debug, Clone)]
pub struct SparsePoly {
    vars: Arc<VarTable>,
    field: FieldSpec,
    terms: BTreeMap<Monomial, FieldValue>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

fn same_vars(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl SparsePoly {
    pub fn zero(vars: &Arc<VarTable>, field: FieldSpec) -> Self {
        SparsePoly {
            vars: vars.clone(),
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarTable>, c: FieldValue) -> Self {
        let field = c.spec();
        let mut p = Self::zero(vars, field);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Arc<VarTable>, field: FieldSpec) -> Self {
        Self::constant(vars, field.one())
    }

    pub fn var(vars: &Arc<VarTable>, field: FieldSpec, i: usize) -> Self {
        Self::monomial(vars, field.one(), Monomial::var(vars.len(), i))
    }

    pub fn var_named(vars: &Arc<VarTable>, field: FieldSpec, name: &str) -> PolyResult<Self> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(vars, field, i))
    }

    pub fn monomial(vars: &Arc<VarTable>, c: FieldValue, m: Monomial) -> Self {
        assert_eq!(m.0.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars, c.spec());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        vars: &Arc<VarTable>,
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Monomial, FieldValue)>,
    ) -> PolyResult<Self> {
        let mut p = Self::zero(vars, field);
        for (m, c) in terms {
            if m.0.len() != vars.len() {
                return Err(PolyError::LengthMismatch {
                    expected: vars.len(),
                    got: m.0.len(),
                });
            }
            if c.spec() != field {
                return Err(FieldError::Mismatch(field, c.spec()).into());
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Parses the text form, e.g. `-3*a32^2*w0 + (x0+x1)^2`.
    pub fn parse(text: &str, vars: &Arc<VarTable>, field: FieldSpec) -> PolyResult<Self> {
        parse::parse(text, vars, field)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldValue)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldValue {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: FieldValue) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn compatible(&self, other: &SparsePoly) -> PolyResult<()> {
        if self.field != other.field {
            return Err(FieldError::Mismatch(self.field, other.field).into());
        }
        if !same_vars(&self.vars, &other.vars) {
            return Err(PolyError::VarMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &SparsePoly) -> PolyResult<SparsePoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SparsePoly) -> PolyResult<SparsePoly> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &SparsePoly) -> PolyResult<SparsePoly> {
        self.compatible(other)?;
        let mut out = SparsePoly::zero(&self.vars, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> SparsePoly {
        SparsePoly {
            vars: self.vars.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldValue) -> SparsePoly {
        let mut out = SparsePoly::zero(&self.vars, self.field);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        out
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(&self.vars, self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[FieldValue]) -> PolyResult<FieldValue> {
        if point.len() != self.vars.len() {
            return Err(PolyError::LengthMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        if let Some(bad) = point.iter().find(|v| v.spec() != self.field) {
            return Err(FieldError::Mismatch(self.field, bad.spec()).into());
        }
        let mut cache: HashMap<(usize, u32), FieldValue> = HashMap::new();
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache
                    .entry((i, e))
                    .or_insert_with(|| point[i].pow(e as u64))
                    .clone();
                t = &t * &pw;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for variable `i`; the result lives in the images' ring.
    pub fn compose(&self, images: &[SparsePoly]) -> PolyResult<SparsePoly> {
        if images.len() != self.vars.len() {
            return Err(PolyError::LengthMismatch {
                expected: self.vars.len(),
                got: images.len(),
            });
        }
        let Some(first) = images.first() else {
            return Err(PolyError::LengthMismatch { expected: 1, got: 0 });
        };
        for im in images {
            first.compatible(im)?;
        }
        if first.field != self.field {
            return Err(FieldError::Mismatch(self.field, first.field).into());
        }
        let target = first.vars.clone();
        let mut powers: HashMap<(usize, u32), SparsePoly> = HashMap::new();
        let mut acc = SparsePoly::zero(&target, self.field);
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers.entry((i, e)).or_insert_with(|| images[i].pow(e));
                t = &t * &*pw;
            }
            for (tm, tc) in t.terms {
                acc.add_term(tm, tc);
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self, var: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(&self.vars, self.field);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[var] -= 1;
            out.add_term(dm, c * &self.field.from_i64(e as i64));
        }
        out
    }

    pub fn multidegree(&self, m: &Monomial) -> Vec<u32> {
        self.vars.degree_of(m)
    }

    /// Whether all terms share one multidegree under the table's grading.
    pub fn is_multihomogeneous(&self) -> PolyResult<Homogeneity> {
        if self.vars.grading().is_none() {
            return Err(PolyError::MissingGrading);
        }
        let mut it = self.terms();
        let Some((m0, _)) = it.next() else {
            return Ok(Homogeneity::Zero);
        };
        let d0 = self.vars.degree_of(m0);
        for (m, _) in it {
            if self.vars.degree_of(m) != d0 {
                return Ok(Homogeneity::Mixed {
                    first: m0.clone(),
                    second: m.clone(),
                });
            }
        }
        Ok(Homogeneity::Homogeneous(d0))
    }

    /// Reduces rational coefficients into another field (typically `F_p`).
    pub fn to_field(&self, target: FieldSpec) -> PolyResult<SparsePoly> {
        if target == self.field {
            return Ok(self.clone());
        }
        let mut out = SparsePoly::zero(&self.vars, target);
        for (m, c) in &self.terms {
            let v = match c {
                FieldValue::Rational(q) => target.from_rational(q)?,
                FieldValue::Prime { .. } => return Err(FieldError::Mismatch(self.field, target).into()),
            };
            out.add_term(m.clone(), v);
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a larger table containing all used variable names.
    pub fn embed(&self, target: &Arc<VarTable>) -> PolyResult<SparsePoly> {
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n).ok_or_else(|| PolyError::UnknownVariable(n.clone())))
            .collect::<PolyResult<_>>()?;
        let mut out = SparsePoly::zero(target, self.field);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let (neg, mag) = match c {
                FieldValue::Rational(q) if q < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, FieldValue::Rational(-q))
                }
                _ => (false, c.clone()),
            };
            let sign = match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mono = m.fmt_with(self.vars.names());
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono
            } else {
                format!("{mag}*{mono}")
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_add(rhs).expect("incompatible polynomial rings in addition")
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_sub(rhs).expect("incompatible polynomial rings in subtraction")
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_mul(rhs).expect("incompatible polynomial rings in multiplication")
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.neg_ref()
    }
}

impl RingElement for SparsePoly {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        SparsePoly::is_zero(self)
    }
}

/// Matrix of polynomials over one shared ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<SparsePoly>) -> PolyResult<Self> {
        if entries.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(PolyError::LengthMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        for e in &entries[1..] {
            entries[0].compatible(e)?;
        }
        Ok(PolyMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<SparsePoly>>) -> PolyResult<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(PolyError::LengthMismatch { expected: c, got: 0 });
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn get(&self, r: usize, c: usize) -> &SparsePoly {
        &self.entries[r * self.cols + c]
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.entries[0].vars()
    }

    pub fn field(&self) -> FieldSpec {
        self.entries[0].field()
    }

    pub fn mul_vec(&self, v: &[SparsePoly]) -> PolyResult<Vec<SparsePoly>> {
        if v.len() != self.cols {
            return Err(PolyError::LengthMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        (0..self.rows)
            .map(|r| {
                let mut acc = SparsePoly::zero(self.vars(), self.field());
                for (c, x) in v.iter().enumerate() {
                    acc = acc.try_add(&self.get(r, c).try_mul(x)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn eval(&self, point: &[FieldValue]) -> PolyResult<Matrix> {
        let vals = self
            .entries
            .iter()
            .map(|e| e.eval(point))
            .collect::<PolyResult<Vec<_>>>()?;
        Ok(Matrix::from_rows(
            self.field(),
            vals.chunks(self.cols).map(<[FieldValue]>::to_vec).collect(),
        ))
    }
}

/// Matrix of partial derivatives `d f_i / d x_j`.
pub fn jacobian(fs: &[SparsePoly]) -> PolyResult<PolyMatrix> {
    let Some(first) = fs.first() else {
        return Err(PolyError::LengthMismatch { expected: 1, got: 0 });
    };
    let n = first.vars().len();
    let mut entries = Vec::with_capacity(fs.len() * n);
    for f in fs {
        first.compatible(f)?;
        for j in 0..n {
            entries.push(f.derivative(j));
        }
    }
    PolyMatrix::new(fs.len(), n, entries)
}
