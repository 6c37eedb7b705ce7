//! The ambient P^11 of a-coordinates, the four Pfaffian quadrics and lines on their
//! intersection Q.
//!
//! Coordinates are the twelve `a_ij` with `i != j`, in the fixed order
//! `a32, a31, a30, a23, a21, a20, a13, a12, a10, a03, a02, a01`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::field::{FieldError, FieldSpec, FieldValue};
use crate::linalg::Matrix;
use crate::poly::{SparsePoly, VarTable};
use crate::ring::RingElement;

pub const NUM_COORDS: usize = 12;

/// `(i, j)` of each coordinate `a_ij`, in storage order.
pub const COORDS: [(usize, usize); NUM_COORDS] = [
    (3, 2),
    (3, 1),
    (3, 0),
    (2, 3),
    (2, 1),
    (2, 0),
    (1, 3),
    (1, 2),
    (1, 0),
    (0, 3),
    (0, 2),
    (0, 1),
];

pub const COORD_NAMES: [&str; NUM_COORDS] = [
    "a32", "a31", "a30", "a23", "a21", "a20", "a13", "a12", "a10", "a03", "a02", "a01",
];

/// Storage index of `a_ij`.
pub const fn coord(i: usize, j: usize) -> usize {
    let mut k = 0;
    while k < NUM_COORDS {
        if COORDS[k].0 == i && COORDS[k].1 == j {
            return k;
        }
        k += 1;
    }
    panic!("no coordinate a_ii");
}

/// One signed product `sign * a_x * a_y` of a quadric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadricTerm {
    pub sign: i8,
    pub x: usize,
    pub y: usize,
}

const fn qt(sign: i8, x: (usize, usize), y: (usize, usize)) -> QuadricTerm {
    QuadricTerm {
        sign,
        x: coord(x.0, x.1),
        y: coord(y.0, y.1),
    }
}

/// The three terms of each quadric `q_k`.
pub const QUADRIC_TERMS: [[QuadricTerm; 3]; 4] = [
    [qt(1, (1, 2), (1, 3)), qt(-1, (2, 1), (2, 3)), qt(1, (3, 1), (3, 2))],
    [qt(1, (0, 2), (0, 3)), qt(-1, (3, 0), (3, 2)), qt(1, (2, 0), (2, 3))],
    [qt(1, (1, 0), (1, 3)), qt(-1, (0, 1), (0, 3)), qt(1, (3, 0), (3, 1))],
    [qt(1, (0, 1), (0, 2)), qt(-1, (1, 0), (1, 2)), qt(1, (2, 0), (2, 1))],
];

/// The printed text of the four quadrics.
pub const QUADRIC_TEXT: [&str; 4] = [
    "a12*a13 - a21*a23 + a31*a32",
    "a02*a03 - a30*a32 + a20*a23",
    "a10*a13 - a01*a03 + a30*a31",
    "a01*a02 - a10*a12 + a20*a21",
];

/// Nonzero entries of the a-matrix: `A_PATTERN[row][col]` is a coordinate index.
pub const A_PATTERN: [[Option<usize>; 6]; 4] = [
    [Some(coord(0, 1)), Some(coord(0, 2)), None, Some(coord(0, 3)), None, None],
    [Some(coord(1, 0)), None, Some(coord(1, 2)), None, Some(coord(1, 3)), None],
    [None, Some(coord(2, 0)), Some(coord(2, 1)), None, None, Some(coord(2, 3))],
    [None, None, None, Some(coord(3, 0)), Some(coord(3, 1)), Some(coord(3, 2))],
];

/// The three nonzero entries of each a-matrix row, left to right.
pub const ROW_TRIPLES: [[usize; 3]; 4] = [
    [coord(0, 1), coord(0, 2), coord(0, 3)],
    [coord(1, 0), coord(1, 2), coord(1, 3)],
    [coord(2, 0), coord(2, 1), coord(2, 3)],
    [coord(3, 0), coord(3, 1), coord(3, 2)],
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("expected {expected} coordinates, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("all coordinates are zero")]
    ZeroPoint,
    #[error("Stiefel rows are linearly dependent")]
    DegenerateLine,
    #[error("(s:t) = (0:0) is not a point of P^1")]
    ZeroParameter,
    #[error("point is not on Q: quadric values {0:?}")]
    NotOnQ(Vec<String>),
    #[error("line is not contained in Q")]
    LineNotInQ,
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkew(usize, usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type GeometryResult<T> = Result<T, GeometryError>;

/// Shared variable table for polynomials in the a-coordinates.
pub fn a_vars() -> Arc<VarTable> {
    static VARS: OnceLock<Arc<VarTable>> = OnceLock::new();
    VARS.get_or_init(|| VarTable::new(&COORD_NAMES).expect("distinct names")).clone()
}

fn check_field(values: &[FieldValue]) -> GeometryResult<FieldSpec> {
    let field = values.first().map(FieldValue::spec).ok_or(GeometryError::ZeroPoint)?;
    if let Some(bad) = values.iter().find(|v| v.spec() != field) {
        return Err(FieldError::Mismatch(field, bad.spec()).into());
    }
    Ok(field)
}

/// A point of P^11; equality is equality up to a nonzero scalar.
#[derive(Debug, Clone, Eq)]
pub struct PointA {
    coords: Vec<FieldValue>,
}

impl PointA {
    pub fn new(coords: Vec<FieldValue>) -> GeometryResult<Self> {
        if coords.len() != NUM_COORDS {
            return Err(GeometryError::BadLength {
                expected: NUM_COORDS,
                got: coords.len(),
            });
        }
        check_field(&coords)?;
        if coords.iter().all(FieldValue::is_zero) {
            return Err(GeometryError::ZeroPoint);
        }
        Ok(PointA { coords })
    }

    pub fn from_i64(field: FieldSpec, coords: &[i64]) -> GeometryResult<Self> {
        Self::new(coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Point with the named coordinates set, e.g. `[((2,3), 1), ((1,0), 1)]`.
    pub fn from_entries(field: FieldSpec, entries: &[((usize, usize), i64)]) -> GeometryResult<Self> {
        let mut c = vec![0i64; NUM_COORDS];
        for &((i, j), v) in entries {
            c[coord(i, j)] = v;
        }
        Self::from_i64(field, &c)
    }

    pub fn coords(&self) -> &[FieldValue] {
        &self.coords
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].spec()
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldValue {
        &self.coords[coord(i, j)]
    }

    /// Representative whose first nonzero coordinate is 1.
    pub fn normalized(&self) -> PointA {
        let lead = self.coords.iter().find(|c| !c.is_zero()).expect("nonzero point");
        let inv = lead.inv().expect("nonzero");
        PointA {
            coords: self.coords.iter().map(|c| c * &inv).collect(),
        }
    }

    pub fn scaled(&self, c: &FieldValue) -> GeometryResult<PointA> {
        PointA::new(self.coords.iter().map(|x| x * c).collect())
    }
}

impl PartialEq for PointA {
    fn eq(&self, other: &Self) -> bool {
        if self.field() != other.field() {
            return false;
        }
        // proportional iff all 2x2 minors vanish
        let (a, b) = (&self.coords, &other.coords);
        (0..NUM_COORDS).all(|i| (i + 1..NUM_COORDS).all(|j| (&(&a[i] * &b[j]) - &(&a[j] * &b[i])).is_zero()))
    }
}

impl fmt::Display for PointA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A line of P^11 spanned by the two rows of a 2x12 Stiefel matrix.
#[derive(Debug, Clone, Eq)]
pub struct LineA {
    rows: [Vec<FieldValue>; 2],
}

impl LineA {
    pub fn new(p: Vec<FieldValue>, q: Vec<FieldValue>) -> GeometryResult<Self> {
        for r in [&p, &q] {
            if r.len() != NUM_COORDS {
                return Err(GeometryError::BadLength {
                    expected: NUM_COORDS,
                    got: r.len(),
                });
            }
        }
        let field = check_field(&p)?;
        if let Some(bad) = q.iter().find(|v| v.spec() != field) {
            return Err(FieldError::Mismatch(field, bad.spec()).into());
        }
        if Matrix::from_rows(field, vec![p.clone(), q.clone()]).rank() < 2 {
            return Err(GeometryError::DegenerateLine);
        }
        Ok(LineA { rows: [p, q] })
    }

    pub fn through(p: &PointA, q: &PointA) -> GeometryResult<Self> {
        Self::new(p.coords.clone(), q.coords.clone())
    }

    pub fn rows(&self) -> &[Vec<FieldValue>; 2] {
        &self.rows
    }

    pub fn field(&self) -> FieldSpec {
        self.rows[0][0].spec()
    }

    pub fn endpoints(&self) -> (PointA, PointA) {
        (
            PointA {
                coords: self.rows[0].clone(),
            },
            PointA {
                coords: self.rows[1].clone(),
            },
        )
    }

    /// `s * row0 + t * row1`.
    pub fn point_at(&self, s: &FieldValue, t: &FieldValue) -> GeometryResult<PointA> {
        if s.is_zero() && t.is_zero() {
            return Err(GeometryError::ZeroParameter);
        }
        PointA::new(
            self.rows[0]
                .iter()
                .zip(&self.rows[1])
                .map(|(a, b)| &(s * a) + &(t * b))
                .collect(),
        )
    }

    /// The line with Stiefel matrix `g * rows` for an invertible 2x2 `g`.
    pub fn reparametrized(&self, g: [[FieldValue; 2]; 2]) -> GeometryResult<LineA> {
        let comb = |a: &FieldValue, b: &FieldValue| -> Vec<FieldValue> {
            self.rows[0]
                .iter()
                .zip(&self.rows[1])
                .map(|(x, y)| &(a * x) + &(b * y))
                .collect()
        };
        LineA::new(comb(&g[0][0], &g[0][1]), comb(&g[1][0], &g[1][1]))
    }

    /// Linear form `(coefficient of s, coefficient of t)` of coordinate `k` along the line.
    pub fn coord_form(&self, k: usize) -> (FieldValue, FieldValue) {
        (self.rows[0][k].clone(), self.rows[1][k].clone())
    }
}

impl PartialEq for LineA {
    fn eq(&self, other: &Self) -> bool {
        if self.field() != other.field() {
            return false;
        }
        let all = vec![
            self.rows[0].clone(),
            self.rows[1].clone(),
            other.rows[0].clone(),
            other.rows[1].clone(),
        ];
        Matrix::from_rows(self.field(), all).rank() == 2
    }
}

/// The 4x6 a-matrix of a point.
pub fn a_matrix(p: &PointA) -> Matrix {
    let field = p.field();
    let mut m = Matrix::zeros(field, 4, 6);
    for (r, row) in A_PATTERN.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            if let Some(k) = e {
                m.set(r, c, p.coords[*k].clone());
            }
        }
    }
    m
}

/// Pfaffian `m01 m23 - m02 m13 + m03 m12` of a skew-symmetric 4x4 matrix.
pub fn pfaffian4<R: RingElement>(m: &[[R; 4]; 4]) -> GeometryResult<R> {
    for i in 0..4 {
        if !m[i][i].is_zero() {
            return Err(GeometryError::NotSkew(i, i));
        }
        for j in i + 1..4 {
            if !m[i][j].add(&m[j][i]).is_zero() {
                return Err(GeometryError::NotSkew(i, j));
            }
        }
    }
    let t1 = m[0][1].mul(&m[2][3]);
    let t2 = m[0][2].mul(&m[1][3]);
    let t3 = m[0][3].mul(&m[1][2]);
    Ok(t1.sub(&t2).add(&t3))
}

/// Skew 4x4 matrix from its upper entries `(m01, m02, m03, m12, m13, m23)`.
pub fn skew4<R: RingElement>(upper: [R; 6], zero: R) -> [[R; 4]; 4] {
    let [m01, m02, m03, m12, m13, m23] = upper;
    [
        [zero.clone(), m01.clone(), m02.clone(), m03.clone()],
        [m01.neg(), zero.clone(), m12.clone(), m13.clone()],
        [m02.neg(), m12.neg(), zero.clone(), m23.clone()],
        [m03.neg(), m13.neg(), m23.neg(), zero],
    ]
}

/// Skew matrix `M_k` with `Pf(M_k) = q_k`, read off from the three terms of `q_k`:
/// the factors of the terms fill the slots `(m01, m23)`, `(m02, m13)`, `(m03, m12)`.
pub fn canonical_pfaffian_matrix(k: usize, field: FieldSpec) -> [[SparsePoly; 4]; 4] {
    let vars = a_vars();
    let v = |i: usize| SparsePoly::var(&vars, field, i);
    let [t1, t2, t3] = QUADRIC_TERMS[k];
    let upper = [v(t1.x), v(t2.x), v(t3.x), v(t3.y), v(t2.y), v(t1.y)];
    skew4(upper, SparsePoly::zero(&vars, field))
}

/// The quadrics `q_0..q_3` as polynomials in the a-coordinates.
pub fn quadrics(field: FieldSpec) -> [SparsePoly; 4] {
    let vars = a_vars();
    std::array::from_fn(|k| {
        let mut q = SparsePoly::zero(&vars, field);
        for t in QUADRIC_TERMS[k] {
            let term = (&SparsePoly::var(&vars, field, t.x) * &SparsePoly::var(&vars, field, t.y))
                .scale(&field.from_i64(t.sign as i64));
            q = &q + &term;
        }
        q
    })
}

/// `q_k(p)` directly from the term table.
pub fn eval_quadric(k: usize, p: &[FieldValue]) -> FieldValue {
    let field = p[0].spec();
    QUADRIC_TERMS[k].iter().fold(field.zero(), |acc, t| {
        let prod = &p[t.x] * &p[t.y];
        if t.sign < 0 {
            &acc - &prod
        } else {
            &acc + &prod
        }
    })
}

pub fn eval_quadrics(p: &PointA) -> [FieldValue; 4] {
    std::array::from_fn(|k| eval_quadric(k, &p.coords))
}

pub fn on_q(p: &PointA) -> bool {
    eval_quadrics(p).iter().all(FieldValue::is_zero)
}

/// `B_k(p, q) = q_k(p + q) - q_k(p) - q_k(q)`.
pub fn polarization_raw(k: usize, p: &[FieldValue], q: &[FieldValue]) -> FieldValue {
    let field = p[0].spec();
    QUADRIC_TERMS[k].iter().fold(field.zero(), |acc, t| {
        let cross = &(&p[t.x] * &q[t.y]) + &(&p[t.y] * &q[t.x]);
        if t.sign < 0 {
            &acc - &cross
        } else {
            &acc + &cross
        }
    })
}

pub fn polarization(k: usize, p: &PointA, q: &PointA) -> GeometryResult<FieldValue> {
    if p.field() != q.field() {
        return Err(FieldError::Mismatch(p.field(), q.field()).into());
    }
    Ok(polarization_raw(k, &p.coords, &q.coords))
}

/// Whether the line lies in Q: `q_k(p) = q_k(q) = B_k(p, q) = 0` for all `k`.
pub fn line_in_q(l: &LineA) -> bool {
    let [p, q] = &l.rows;
    (0..4).all(|k| {
        eval_quadric(k, p).is_zero() && eval_quadric(k, q).is_zero() && polarization_raw(k, p, q).is_zero()
    })
}

/// The 4x12 Jacobian of the quadrics at `p`; entry `(k, c)` is `B_k(p, e_c)`.
pub fn jacobian_at(p: &PointA) -> Matrix {
    let field = p.field();
    let mut m = Matrix::zeros(field, 4, NUM_COORDS);
    for (k, terms) in QUADRIC_TERMS.iter().enumerate() {
        for t in terms {
            let sign = field.from_i64(t.sign as i64);
            let a = m.get(k, t.x) + &(&sign * &p.coords[t.y]);
            m.set(k, t.x, a);
            let b = m.get(k, t.y) + &(&sign * &p.coords[t.x]);
            m.set(k, t.y, b);
        }
    }
    m
}

/// Basis of `{v : B_k(p, v) = 0 for all k}`; 8 vectors at a smooth point.
pub fn tangent_space(p: &PointA) -> GeometryResult<Vec<Vec<FieldValue>>> {
    let vals = eval_quadrics(p);
    if !vals.iter().all(FieldValue::is_zero) {
        return Err(GeometryError::NotOnQ(vals.iter().map(ToString::to_string).collect()));
    }
    Ok(jacobian_at(p).nullspace())
}

/// `q_k(p)`, `q_k(q)` and `B_k(p, q)` for a line whose Stiefel rows are polynomial vectors.
/// The line lies in Q identically iff every returned polynomial is zero.
pub fn line_conditions_symbolic(p: &[SparsePoly], q: &[SparsePoly]) -> Vec<(String, SparsePoly)> {
    assert_eq!(p.len(), NUM_COORDS);
    assert_eq!(q.len(), NUM_COORDS);
    let mut out = Vec::with_capacity(12);
    for (k, terms) in QUADRIC_TERMS.iter().enumerate() {
        let field = p[0].field();
        let mut qp = SparsePoly::zero(p[0].vars(), field);
        let mut qq = qp.clone();
        let mut b = qp.clone();
        for t in terms {
            let sign = field.from_i64(t.sign as i64);
            qp = &qp + &(&p[t.x] * &p[t.y]).scale(&sign);
            qq = &qq + &(&q[t.x] * &q[t.y]).scale(&sign);
            let cross = &(&p[t.x] * &q[t.y]) + &(&p[t.y] * &q[t.x]);
            b = &b + &cross.scale(&sign);
        }
        out.push((format!("q{k}(p)"), qp));
        out.push((format!("q{k}(q)"), qq));
        out.push((format!("B{k}(p,q)"), b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn coordinate_order() {
        assert_eq!(coord(3, 2), 0);
        assert_eq!(coord(0, 1), 11);
        for (k, (i, j)) in COORDS.iter().enumerate() {
            assert_eq!(COORD_NAMES[k], format!("a{i}{j}"));
        }
    }

    #[test]
    fn quadric_table_matches_text() {
        let f = FieldSpec::Rational;
        let qs = quadrics(f);
        for k in 0..4 {
            let printed = SparsePoly::parse(QUADRIC_TEXT[k], &a_vars(), f).unwrap();
            assert_eq!(qs[k], printed);
        }
    }

    #[test]
    fn each_variable_in_two_quadrics() {
        for c in 0..NUM_COORDS {
            let n = QUADRIC_TERMS
                .iter()
                .filter(|ts| ts.iter().any(|t| t.x == c || t.y == c))
                .count();
            assert_eq!(n, 2, "{}", COORD_NAMES[c]);
        }
    }

    #[test]
    fn q_examples() {
        let f = FieldSpec::Rational;
        let p = PointA::from_entries(f, &[((1, 2), 1), ((1, 3), 1)]).unwrap();
        assert!(eval_quadrics(&p)[0].is_one());
        let p = PointA::from_entries(f, &[((0, 1), 1), ((0, 2), 1)]).unwrap();
        assert!(eval_quadrics(&p)[3].is_one());
        let p = PointA::from_entries(f, &[((2, 3), 1), ((1, 0), 1)]).unwrap();
        assert!(on_q(&p));
    }

    #[test]
    fn point_equality_is_projective() {
        let f = FieldSpec::Prime(31);
        let p = PointA::from_entries(f, &[((2, 3), 1), ((1, 0), 2)]).unwrap();
        let q = p.scaled(&f.from_i64(5)).unwrap();
        assert_eq!(p, q);
        assert!(PointA::from_i64(f, &[0; 12]).is_err());
    }

    #[test]
    fn pfaffian_rejects_non_skew() {
        let f = FieldSpec::Rational;
        let mut m = skew4(std::array::from_fn(|i| f.from_i64(i as i64 + 1)), f.zero());
        assert!(pfaffian4(&m).is_ok());
        m[1][0] = f.one();
        assert_eq!(pfaffian4(&m), Err(GeometryError::NotSkew(0, 1)));
    }
}
