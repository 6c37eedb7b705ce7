//! Minimal commutative-ring interface shared by scalars and polynomials.

use crate::field::FieldValue;

pub trait RingElement: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl RingElement for FieldValue {
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
        FieldValue::is_zero(self)
    }
}

/// Determinant by cofactor expansion along the first row; intended for small matrices.
pub fn cofactor_det<R: RingElement>(m: &[Vec<R>]) -> R {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square, nonempty matrix");
    if n == 1 {
        return m[0][0].clone();
    }
    if n == 2 {
        return m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
    }
    let mut acc: Option<R> = None;
    for c in 0..n {
        let minor: Vec<Vec<R>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][c].mul(&cofactor_det(&minor));
        acc = Some(match acc {
            None if c % 2 == 0 => term,
            None => term.neg(),
            Some(a) if c % 2 == 0 => a.add(&term),
            Some(a) => a.sub(&term),
        });
    }
    acc.expect("n > 0")
}
