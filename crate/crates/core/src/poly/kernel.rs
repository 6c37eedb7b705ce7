//! Kernels of polynomial matrices by linear algebra on coefficient vectors.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Monomial, PolyError, PolyMatrix, PolyResult, SparsePoly, VarTable};
use crate::field::FieldValue;
use crate::linalg::Matrix;

/// A kernel vector together with the common multidegree of its entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelGenerator {
    pub degree: Vec<u32>,
    pub vector: Vec<SparsePoly>,
}

fn check_grading(vars: &VarTable) -> PolyResult<()> {
    for i in 0..vars.len() {
        if vars.var_degree(i).iter().all(|&d| d == 0) {
            return Err(PolyError::BadGrading(vars.grading_dim()));
        }
    }
    Ok(())
}

fn enumerate(
    vars: &VarTable,
    i: usize,
    exps: &mut Vec<u32>,
    used: &mut Vec<u32>,
    bound: &[u32],
    exact: bool,
    out: &mut Vec<Monomial>,
) {
    if i == vars.len() {
        if !exact || used.as_slice() == bound {
            out.push(Monomial(exps.clone()));
        }
        return;
    }
    let w = vars.var_degree(i);
    let mut e = 0;
    loop {
        exps.push(e);
        enumerate(vars, i + 1, exps, used, bound, exact, out);
        exps.pop();
        let fits = used.iter().zip(&w).zip(bound).all(|((u, wi), b)| u + wi <= *b);
        if !fits {
            break;
        }
        for (u, wi) in used.iter_mut().zip(&w) {
            *u += wi;
        }
        e += 1;
    }
    for (u, wi) in used.iter_mut().zip(&w) {
        *u -= wi * e;
    }
}

/// All monomials of exactly the given multidegree (total degree when ungraded).
pub fn monomials_of_degree(vars: &Arc<VarTable>, degree: &[u32]) -> PolyResult<Vec<Monomial>> {
    monomials(vars, degree, true)
}

/// All monomials whose multidegree is componentwise at most `bound`.
pub fn monomials_up_to(vars: &Arc<VarTable>, bound: &[u32]) -> PolyResult<Vec<Monomial>> {
    monomials(vars, bound, false)
}

fn monomials(vars: &Arc<VarTable>, bound: &[u32], exact: bool) -> PolyResult<Vec<Monomial>> {
    if bound.len() != vars.grading_dim() {
        return Err(PolyError::LengthMismatch {
            expected: vars.grading_dim(),
            got: bound.len(),
        });
    }
    check_grading(vars)?;
    let mut out = Vec::new();
    let mut used = vec![0; bound.len()];
    enumerate(vars, 0, &mut Vec::new(), &mut used, bound, exact, &mut out);
    out.sort();
    Ok(out)
}

/// Field basis of `{v : M v = 0}` where entry `j` of `v` ranges over the span of `supports[j]`.
fn kernel_on_supports(m: &PolyMatrix, supports: &[Vec<Monomial>]) -> Vec<Vec<SparsePoly>> {
    let field = m.field();
    let vars = m.vars().clone();
    let mut unknowns = Vec::new();
    for (j, sup) in supports.iter().enumerate() {
        for mono in sup {
            unknowns.push((j, mono.clone()));
        }
    }
    if unknowns.is_empty() {
        return Vec::new();
    }
    let mut eqs: BTreeMap<(usize, Monomial), BTreeMap<usize, FieldValue>> = BTreeMap::new();
    for (k, (j, mono)) in unknowns.iter().enumerate() {
        for r in 0..m.rows {
            for (em, ec) in m.get(r, *j).terms() {
                let slot = eqs.entry((r, em.mul(mono))).or_default();
                let v = slot.entry(k).or_insert_with(|| field.zero());
                *v = &*v + ec;
            }
        }
    }
    let rows: Vec<Vec<FieldValue>> = eqs
        .values()
        .map(|coeffs| {
            let mut row = vec![field.zero(); unknowns.len()];
            for (k, c) in coeffs {
                row[*k] = c.clone();
            }
            row
        })
        .collect();
    let basis = if rows.is_empty() {
        (0..unknowns.len())
            .map(|k| (0..unknowns.len()).map(|i| if i == k { field.one() } else { field.zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(field, rows).nullspace()
    };
    basis
        .into_iter()
        .map(|coeffs| {
            let mut v: Vec<SparsePoly> = (0..m.cols).map(|_| SparsePoly::zero(&vars, field)).collect();
            for (k, c) in coeffs.into_iter().enumerate() {
                if !c.is_zero() {
                    let (j, mono) = &unknowns[k];
                    v[*j] = &v[*j] + &SparsePoly::monomial(&vars, c, mono.clone());
                }
            }
            v
        })
        .collect()
}

/// Field basis of kernel vectors whose entries have multidegree at most `bound`.
pub fn bounded_degree_kernel(m: &PolyMatrix, bound: &[u32]) -> PolyResult<Vec<Vec<SparsePoly>>> {
    let monos = monomials_up_to(m.vars(), bound)?;
    let supports = vec![monos; m.cols];
    Ok(kernel_on_supports(m, &supports))
}

/// Field basis of kernel vectors whose entries are all homogeneous of one multidegree.
pub fn homogeneous_kernel(m: &PolyMatrix, degree: &[u32]) -> PolyResult<Vec<Vec<SparsePoly>>> {
    let monos = monomials_of_degree(m.vars(), degree)?;
    let supports = vec![monos; m.cols];
    Ok(kernel_on_supports(m, &supports))
}

/// Minimal homogeneous module generators of the kernel among multidegrees up to `bound`.
///
/// Degrees are visited in increasing total order; at each degree the generators found
/// so far, multiplied by all monomials of the complementary degree, span a subspace of
/// the homogeneous kernel, and a complement of it is taken as new generators.
pub fn minimal_kernel_generators(m: &PolyMatrix, bound: &[u32]) -> PolyResult<Vec<KernelGenerator>> {
    let vars = m.vars().clone();
    let field = m.field();
    let mut degrees: Vec<Vec<u32>> = Vec::new();
    let mut cur = vec![0u32; bound.len()];
    loop {
        degrees.push(cur.clone());
        let mut i = 0;
        while i < cur.len() && cur[i] == bound[i] {
            cur[i] = 0;
            i += 1;
        }
        if i == cur.len() {
            break;
        }
        cur[i] += 1;
    }
    degrees.sort_by_key(|d| (d.iter().sum::<u32>(), d.clone()));

    let mut gens: Vec<KernelGenerator> = Vec::new();
    for d in degrees {
        let monos = monomials_of_degree(&vars, &d)?;
        if monos.is_empty() {
            continue;
        }
        let kd = homogeneous_kernel(m, &d)?;
        if kd.is_empty() {
            continue;
        }
        // coordinates of a vector in the basis (col, monomial)
        let index: BTreeMap<(usize, Monomial), usize> = (0..m.cols)
            .flat_map(|j| monos.iter().map(move |mo| (j, mo.clone())))
            .enumerate()
            .map(|(k, key)| (key, k))
            .collect();
        let flatten = |v: &[SparsePoly]| -> Vec<FieldValue> {
            let mut out = vec![field.zero(); index.len()];
            for (j, e) in v.iter().enumerate() {
                for (mo, c) in e.terms() {
                    out[index[&(j, mo.clone())]] = c.clone();
                }
            }
            out
        };
        let mut span: Vec<Vec<FieldValue>> = Vec::new();
        for g in &gens {
            let Some(diff) = d.iter().zip(&g.degree).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            for mo in monomials_of_degree(&vars, &diff)? {
                let mp = SparsePoly::monomial(&vars, field.one(), mo);
                let shifted: Vec<SparsePoly> = g.vector.iter().map(|e| &mp * e).collect();
                span.push(flatten(&shifted));
            }
        }
        let mut rank = rank_of(field, &span);
        for v in kd {
            let mut trial = span.clone();
            trial.push(flatten(&v));
            let r = rank_of(field, &trial);
            if r > rank {
                rank = r;
                span = trial;
                gens.push(KernelGenerator {
                    degree: d.clone(),
                    vector: v,
                });
            }
        }
    }
    Ok(gens)
}

fn rank_of(field: crate::field::FieldSpec, rows: &[Vec<FieldValue>]) -> usize {
    if rows.is_empty() {
        0
    } else {
        Matrix::from_rows(field, rows.to_vec()).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn identity_has_trivial_kernel() {
        let v = VarTable::new(&["a"]).unwrap();
        let f = FieldSpec::Rational;
        let one = SparsePoly::one(&v, f);
        let zero = SparsePoly::zero(&v, f);
        let rows = (0..3)
            .map(|i| (0..3).map(|j| if i == j { one.clone() } else { zero.clone() }).collect())
            .collect();
        let m = PolyMatrix::from_rows(rows).unwrap();
        assert!(bounded_degree_kernel(&m, &[3]).unwrap().is_empty());
    }

    #[test]
    fn skew_kernel_contains_cross_vector() {
        let v = VarTable::new(&["a", "b", "c"]).unwrap();
        let f = FieldSpec::Rational;
        let p = |s: &str| SparsePoly::parse(s, &v, f).unwrap();
        let m = PolyMatrix::from_rows(vec![
            vec![p("0"), p("a"), p("b")],
            vec![p("-a"), p("0"), p("c")],
            vec![p("-b"), p("-c"), p("0")],
        ])
        .unwrap();
        let ker = bounded_degree_kernel(&m, &[1]).unwrap();
        assert_eq!(ker.len(), 1);
        let expected = vec![p("c"), p("-b"), p("a")];
        let k = &ker[0];
        // proportional to (c, -b, a)
        let ratio = k[0].coefficient(&Monomial(vec![0, 0, 1]));
        let scaled: Vec<SparsePoly> = expected.iter().map(|e| e.scale(&ratio)).collect();
        assert_eq!(k, &scaled);
        for vec in &ker {
            assert!(m.mul_vec(vec).unwrap().iter().all(SparsePoly::is_zero));
        }
    }

    #[test]
    fn monomial_counts() {
        let v = VarTable::graded(&["x0", "x1", "y"], vec![vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(monomials_of_degree(&v, &[2, 1]).unwrap().len(), 3);
        assert_eq!(monomials_up_to(&v, &[1, 1]).unwrap().len(), 6);
    }
}
