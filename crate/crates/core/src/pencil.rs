//! Matrices of binary forms obtained by restricting linear matrices to a line,
//! and their graded kernels.

use crate::binary::{BinaryForm, ProjPoint};
use crate::field::{FieldSpec, FieldValue};
use crate::geometry::{LineA, ROW_TRIPLES};
use crate::linalg::Matrix;

/// Default degree bound for kernel computations.
pub const DEFAULT_MAX_DEGREE: usize = 4;

/// A matrix of binary forms that all share one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilMatrix {
    pub rows: usize,
    pub cols: usize,
    field: FieldSpec,
    degree: usize,
    entries: Vec<BinaryForm>,
}

impl PencilMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BinaryForm>) -> Option<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return None;
        }
        let degree = entries[0].degree();
        let field = entries[0].field();
        if entries.iter().any(|e| e.degree() != degree || e.field() != field) {
            return None;
        }
        Some(PencilMatrix {
            rows,
            cols,
            field,
            degree,
            entries,
        })
    }

    pub fn get(&self, r: usize, c: usize) -> &BinaryForm {
        &self.entries[r * self.cols + c]
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn eval(&self, s: &FieldValue, t: &FieldValue) -> Matrix {
        Matrix::from_rows(
            self.field,
            (0..self.rows)
                .map(|r| (0..self.cols).map(|c| self.get(r, c).eval(s, t)).collect())
                .collect(),
        )
    }

    /// `M v` for a vector of forms of one common degree.
    pub fn mul_vec(&self, v: &[BinaryForm]) -> Vec<BinaryForm> {
        assert_eq!(v.len(), self.cols);
        let d = v.first().map_or(0, BinaryForm::degree);
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(BinaryForm::zero(self.field, self.degree + d), |acc, c| {
                    let prod = self.get(r, c).mul_form(&v[c]);
                    acc.try_add(&prod).expect("equal degrees")
                })
            })
            .collect()
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diagonal(blocks: &[PencilMatrix]) -> Option<Self> {
        let first = blocks.first()?;
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut entries = vec![BinaryForm::zero(first.field, first.degree); n * m];
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    entries[(r0 + r) * m + c0 + c] = b.get(r, c).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        PencilMatrix::new(n, m, entries)
    }
}

/// `[[0, r2, -r1], [-r2, 0, r0], [r1, -r0, 0]]`; its kernel contains `(r0, r1, r2)`.
pub fn skew_block(r: &[BinaryForm; 3]) -> PencilMatrix {
    let field = r[0].field();
    let z = BinaryForm::zero(field, r[0].degree());
    let neg = |f: &BinaryForm| f.scale(&(-field.one()));
    PencilMatrix::new(
        3,
        3,
        vec![
            z.clone(),
            r[2].clone(),
            neg(&r[1]),
            neg(&r[2]),
            z.clone(),
            r[0].clone(),
            r[1].clone(),
            neg(&r[0]),
            z,
        ],
    )
    .expect("3x3 block")
}

/// The three nonzero entries of a-matrix row `i` along the line, as linear forms.
pub fn restrict_row(line: &LineA, i: usize) -> [BinaryForm; 3] {
    ROW_TRIPLES[i].map(|k| {
        let (a, b) = line.coord_form(k);
        BinaryForm::linear(a, b)
    })
}

/// The 12x12 block-diagonal matrix of four skew blocks, one per a-matrix row.
pub fn restrict_l1(line: &LineA) -> PencilMatrix {
    let blocks: Vec<PencilMatrix> = (0..4).map(|i| skew_block(&restrict_row(line, i))).collect();
    PencilMatrix::block_diagonal(&blocks).expect("four blocks")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilGenerator {
    pub degree: usize,
    pub vector: Vec<BinaryForm>,
}

fn flatten(v: &[BinaryForm], d: usize, field: FieldSpec) -> Vec<FieldValue> {
    let mut out = Vec::with_capacity(v.len() * (d + 1));
    for f in v {
        if f.is_zero() {
            out.extend(std::iter::repeat(field.zero()).take(d + 1));
        } else {
            out.extend(f.coeffs().iter().cloned());
        }
    }
    out
}

fn rank_of(field: FieldSpec, rows: &[Vec<FieldValue>]) -> usize {
    if rows.is_empty() {
        0
    } else {
        Matrix::from_rows(field, rows.to_vec()).rank()
    }
}

/// Minimal generators of `{v : M v = 0}`, degree by degree up to `max_degree`.
pub fn graded_kernel_basis(m: &PencilMatrix, max_degree: usize) -> Vec<PencilGenerator> {
    let field = m.field;
    let e = m.degree;
    let mut gens: Vec<PencilGenerator> = Vec::new();
    for d in 0..=max_degree {
        let nun = m.cols * (d + 1);
        // equation (r, k): coefficient of s^(d+e-k) t^k in row r
        let mut eqs = vec![vec![field.zero(); nun]; m.rows * (d + e + 1)];
        for r in 0..m.rows {
            for c in 0..m.cols {
                let entry = m.get(r, c);
                for (a, coef) in entry.coeffs().iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    for b in 0..=d {
                        let row = &mut eqs[r * (d + e + 1) + a + b];
                        row[c * (d + 1) + b] = &row[c * (d + 1) + b] + coef;
                    }
                }
            }
        }
        let kd = Matrix::from_rows(field, eqs).nullspace();
        if kd.is_empty() {
            continue;
        }
        let mut span: Vec<Vec<FieldValue>> = Vec::new();
        for g in &gens {
            let shift = d - g.degree;
            for i in 0..=shift {
                let mono = BinaryForm::monomial(field, shift - i, i);
                let shifted: Vec<BinaryForm> = g.vector.iter().map(|f| f.mul_form(&mono)).collect();
                span.push(flatten(&shifted, d, field));
            }
        }
        let mut rank = rank_of(field, &span);
        for coeffs in kd {
            let mut trial = span.clone();
            trial.push(coeffs.clone());
            let r = rank_of(field, &trial);
            if r > rank {
                rank = r;
                span = trial;
                let vector = coeffs
                    .chunks(d + 1)
                    .map(|ch| BinaryForm::from_coeffs(field, ch.to_vec()))
                    .collect();
                gens.push(PencilGenerator { degree: d, vector });
            }
        }
    }
    gens
}

/// Kernel degrees and rank-drop locus of one skew block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockProfile {
    pub row: usize,
    pub entries: [BinaryForm; 3],
    pub degrees: Vec<usize>,
    /// Points where all three entries vanish; `None` when the block is identically zero.
    pub rank_drop_points: Option<Vec<ProjPoint>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationProfile {
    pub blocks: Vec<BlockProfile>,
}

impl DegenerationProfile {
    /// Generator degrees of the four blocks, concatenated in row order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.degrees.iter().copied()).collect()
    }
}

pub fn block_profile(line: &LineA, row: usize, max_degree: usize) -> BlockProfile {
    let entries = restrict_row(line, row);
    let gens = graded_kernel_basis(&skew_block(&entries), max_degree);
    let g = BinaryForm::gcd_all(entries.iter(), line.field());
    BlockProfile {
        row,
        degrees: gens.iter().map(|g| g.degree).collect(),
        rank_drop_points: g.roots(),
        entries,
    }
}

pub fn degeneration_profile(line: &LineA) -> DegenerationProfile {
    DegenerationProfile {
        blocks: (0..4).map(|i| block_profile(line, i, DEFAULT_MAX_DEGREE)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_skew_block_has_linear_generator() {
        let f = FieldSpec::Prime(101);
        let r = [
            BinaryForm::from_i64(f, &[1, 2]),
            BinaryForm::from_i64(f, &[3, 5]),
            BinaryForm::from_i64(f, &[7, 1]),
        ];
        let gens = graded_kernel_basis(&skew_block(&r), 3);
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].degree, 1);
        // proportional to the entry triple
        let c = gens[0].vector[0].coeffs()[0].clone();
        let expect: Vec<BinaryForm> = r.iter().map(|x| x.scale(&c)).collect();
        assert_eq!(gens[0].vector, expect);
    }

    #[test]
    fn zero_matrix_gives_standard_basis() {
        let f = FieldSpec::Rational;
        let m = PencilMatrix::new(2, 3, vec![BinaryForm::zero(f, 1); 6]).unwrap();
        let gens = graded_kernel_basis(&m, 2);
        assert_eq!(gens.len(), 3);
        assert!(gens.iter().all(|g| g.degree == 0));
    }

    #[test]
    fn proportional_entries_drop_degree() {
        let f = FieldSpec::Rational;
        let t = BinaryForm::from_i64(f, &[0, 1]);
        let z = BinaryForm::zero(f, 1);
        let gens = graded_kernel_basis(&skew_block(&[z.clone(), t, z]), 3);
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].degree, 0);
    }
}
