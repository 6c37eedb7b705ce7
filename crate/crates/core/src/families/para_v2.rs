//! Rational parametrization of the second determinantal locus in `P^5 x P^1`.
//!
//! The locus is cut out by
//! `det [[c0, c2], [-c4 w1, c5 (w0 - w1)]]` and `det [[c1, c2], [-c4 w1, c3 w0]]`.
//! Applying the two matrices to `(y0, y1)` and `(z0, z1)` gives a 4x6 linear system in
//! `c0..c5`; its kernel has two generators `n1, n2` and `c = v0 n1 + v1 n2` parametrizes
//! the locus.

use std::sync::{Arc, OnceLock};

use serde_json::json;

use super::{Certificate, FamilyResult};
use crate::field::FieldSpec;
use crate::poly::{minimal_kernel_generators, KernelGenerator, PolyMatrix, SparsePoly, VarTable};

/// Degree bound in the `(w, y, z)` grading.
pub const KERNEL_BOUND: [u32; 3] = [2, 1, 1];

/// The system in `(c0, .., c5)`.
pub const SYSTEM: [[&str; 6]; 4] = [
    ["y0", "0", "y1", "0", "0", "0"],
    ["0", "0", "0", "0", "-w1*y0", "(w0-w1)*y1"],
    ["0", "z0", "z1", "0", "0", "0"],
    ["0", "0", "0", "w0*z1", "-w1*z0", "0"],
];

/// The same system with `w0 - w1` replaced by `w0` in one entry.
pub const PERTURBED_SYSTEM: [[&str; 6]; 4] = [
    ["y0", "0", "y1", "0", "0", "0"],
    ["0", "0", "0", "0", "-w1*y0", "w0*y1"],
    ["0", "z0", "z1", "0", "0", "0"],
    ["0", "0", "0", "w0*z1", "-w1*z0", "0"],
];

/// The two determinants in `c0..c5, w0, w1`.
pub const DETERMINANTS: [&str; 2] = ["c0*c5*(w0-w1) + c2*c4*w1", "c1*c3*w0 + c2*c4*w1"];

pub fn system_vars() -> Arc<VarTable> {
    static VARS: OnceLock<Arc<VarTable>> = OnceLock::new();
    VARS.get_or_init(|| {
        let g = |v: [u32; 3]| v.to_vec();
        VarTable::graded(
            &["w0", "w1", "y0", "y1", "z0", "z1"],
            vec![g([1, 0, 0]), g([1, 0, 0]), g([0, 1, 0]), g([0, 1, 0]), g([0, 0, 1]), g([0, 0, 1])],
        )
        .expect("valid grading")
    })
    .clone()
}

/// Ring of the parametrization: `v0, v1, w0, w1, y0, y1, z0, z1`.
pub fn param_vars() -> Arc<VarTable> {
    static VARS: OnceLock<Arc<VarTable>> = OnceLock::new();
    VARS.get_or_init(|| VarTable::new(&["v0", "v1", "w0", "w1", "y0", "y1", "z0", "z1"]).expect("distinct"))
        .clone()
}

fn det_vars() -> Arc<VarTable> {
    static VARS: OnceLock<Arc<VarTable>> = OnceLock::new();
    VARS.get_or_init(|| VarTable::new(&["c0", "c1", "c2", "c3", "c4", "c5", "w0", "w1"]).expect("distinct"))
        .clone()
}

pub fn system_matrix(text: &[[&str; 6]; 4], field: FieldSpec) -> PolyMatrix {
    let vars = system_vars();
    PolyMatrix::from_rows(
        text.iter()
            .map(|row| {
                row.iter()
                    .map(|t| SparsePoly::parse(t, &vars, field).expect("system text parses"))
                    .collect()
            })
            .collect(),
    )
    .expect("rectangular")
}

/// Kernel generators and the parametrization `c = v0 n1 + v1 n2`.
#[derive(Debug, Clone)]
pub struct ParaV2 {
    pub generators: Vec<KernelGenerator>,
    pub parametrization: Vec<SparsePoly>,
}

pub fn parametrize(m: &PolyMatrix) -> FamilyResult<Option<ParaV2>> {
    let generators = minimal_kernel_generators(m, &KERNEL_BOUND)?;
    if generators.len() != 2 {
        return Ok(None);
    }
    let pv = param_vars();
    let field = m.field();
    let v = [SparsePoly::var(&pv, field, 0), SparsePoly::var(&pv, field, 1)];
    let mut c = vec![SparsePoly::zero(&pv, field); 6];
    for (g, vi) in generators.iter().zip(&v) {
        for (ci, e) in c.iter_mut().zip(&g.vector) {
            *ci = ci.try_add(&vi.try_mul(&e.embed(&pv)?)?)?;
        }
    }
    Ok(Some(ParaV2 {
        generators,
        parametrization: c,
    }))
}

/// The determinants after substituting the parametrization.
pub fn substituted_determinants(p: &ParaV2, field: FieldSpec) -> FamilyResult<Vec<SparsePoly>> {
    let pv = param_vars();
    let mut images = p.parametrization.clone();
    images.push(SparsePoly::var(&pv, field, 2));
    images.push(SparsePoly::var(&pv, field, 3));
    DETERMINANTS
        .iter()
        .map(|d| Ok(SparsePoly::parse(d, &det_vars(), field)?.compose(&images)?))
        .collect()
}

fn run(name: &str, text: &[[&str; 6]; 4], field: FieldSpec) -> Certificate {
    let mut cert = Certificate::new(name, field);
    let m = system_matrix(text, field);
    let para = match parametrize(&m) {
        Ok(Some(p)) => p,
        Ok(None) | Err(_) => {
            cert.check("kernel-rank-2", false, json!({ "bound": KERNEL_BOUND }));
            return cert;
        }
    };
    let gens_json: Vec<_> = para
        .generators
        .iter()
        .map(|g| {
            json!({
                "degree": g.degree,
                "vector": g.vector.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let annihilated = para
        .generators
        .iter()
        .all(|g| m.mul_vec(&g.vector).map(|r| r.iter().all(SparsePoly::is_zero)).unwrap_or(false));
    cert.check("kernel-rank-2", annihilated, json!(gens_json));
    match substituted_determinants(&para, field) {
        Ok(dets) => {
            for (i, d) in dets.iter().enumerate() {
                cert.check(
                    format!("det{}-vanishes", i + 1),
                    d.is_zero(),
                    json!({ "residual": d.to_string(), "terms": d.num_terms() }),
                );
            }
        }
        Err(e) => {
            cert.check("determinants-substituted", false, json!({ "error": e.to_string() }));
        }
    }
    cert
}

pub fn verify_para_v2(field: FieldSpec) -> Certificate {
    run("para-v2", &SYSTEM, field)
}

/// The verifier on the perturbed system; expected to fail.
pub fn verify_para_v2_perturbed(field: FieldSpec) -> Certificate {
    run("para-v2-perturbed", &PERTURBED_SYSTEM, field)
}
