//! Dense exact linear algebra over a [`FieldSpec`].

use crate::field::{FieldSpec, FieldValue, Fp};

/// Row-major dense matrix of exact scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpec,
    data: Vec<FieldValue>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldValue>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            field,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &FieldValue {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldValue) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldValue] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_rows(
            self.field,
            rows.iter()
                .map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect())
                .collect(),
        )
    }

    pub fn mul_vec(&self, v: &[FieldValue]) -> Vec<FieldValue> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(lead, pr);
            let inv = self.get(lead, c).inv().expect("nonzero pivot");
            for k in c..self.cols {
                let v = self.get(lead, k) * &inv;
                self.set(lead, k, v);
            }
            for r in 0..self.rows {
                if r == lead || self.get(r, c).is_zero() {
                    continue;
                }
                let factor = self.get(r, c).clone();
                for k in c..self.cols {
                    let v = self.get(r, k) - &(&factor * self.get(lead, k));
                    self.set(r, k, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<FieldValue>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(i, f);
                }
                v
            })
            .collect()
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> FieldValue {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return self.field.zero();
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if m.get(r, c).is_zero() {
                    continue;
                }
                let f = m.get(r, c) * &inv;
                for k in c..n {
                    let v = m.get(r, k) - &(&f * m.get(c, k));
                    m.set(r, k, v);
                }
            }
        }
        det
    }
}

/// Rank of a row set given as raw residues mod `p`.
pub fn fp_rank(fp: Fp, rows: &[Vec<u64>]) -> usize {
    fp_rref(fp, rows.to_vec()).1.len()
}

/// Reduced echelon form over `F_p`; returns the reduced rows and pivot columns.
pub fn fp_rref(fp: Fp, mut m: Vec<Vec<u64>>) -> (Vec<Vec<u64>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..cols {
        if lead == rows {
            break;
        }
        let Some(pr) = (lead..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(lead, pr);
        let inv = fp.inv(m[lead][c]);
        for k in c..cols {
            m[lead][k] = fp.mul(m[lead][k], inv);
        }
        for r in 0..rows {
            if r != lead && m[r][c] != 0 {
                let f = m[r][c];
                for k in c..cols {
                    let sub = fp.mul(f, m[lead][k]);
                    m[r][k] = fp.sub(m[r][k], sub);
                }
            }
        }
        pivots.push(c);
        lead += 1;
    }
    (m, pivots)
}

/// Nullspace basis over `F_p`.
pub fn fp_nullspace(fp: Fp, rows: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
    let (m, pivots) = fp_rref(fp, rows.to_vec());
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = fp.neg(m[i][f]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(field: FieldSpec, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_nullspace() {
        for field in [FieldSpec::Rational, FieldSpec::Prime(101)] {
            let m = mat(field, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
            assert_eq!(m.rank(), 2);
            let ns = m.nullspace();
            assert_eq!(ns.len(), 1);
            assert!(m.mul_vec(&ns[0]).iter().all(FieldValue::is_zero));
        }
        // rank drops mod 5
        let m = mat(FieldSpec::Prime(5), &[&[1, 2], &[3, 1]]);
        assert_eq!(m.rank(), 1);
        let m = mat(FieldSpec::Rational, &[&[1, 2], &[3, 1]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn determinant_matches_cofactor() {
        let m = mat(FieldSpec::Rational, &[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2(3*-2 - 20) + 1(1*-2 - 0) = -52 - 2
        assert_eq!(m.determinant(), FieldSpec::Rational.from_i64(-54));
        assert_eq!(Matrix::identity(FieldSpec::Prime(7), 4).determinant(), FieldSpec::Prime(7).one());
    }

    #[test]
    fn fp_paths_agree() {
        let fp = Fp::new(31);
        let rows = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 0, 30]];
        assert_eq!(fp_rank(fp, &rows), 2);
        let ns = fp_nullspace(fp, &rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let s = r.iter().zip(v).fold(0, |a, (x, y)| fp.add(a, fp.mul(*x, *y)));
                assert_eq!(s, 0);
            }
        }
    }
}
