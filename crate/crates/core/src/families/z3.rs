//! Lines through the torsion space `T01|23` coming from a unirational family with
//! parameters `(u0..u3, w0, w1, z0, z1)`.
//!
//! The first row is the point `p(u)` on `T01|23`; the second row is the tangent partner
//! obtained from the kernel of a 3x6 linear system.

use std::sync::{Arc, OnceLock};

use rand::Rng;
use serde_json::{json, Value};

use super::{Certificate, FamilyError, FamilyResult};
use crate::field::{FieldSpec, FieldValue};
use crate::geometry::{line_conditions_symbolic, LineA, NUM_COORDS};
use crate::poly::{SparsePoly, VarTable};
use crate::strata::{classify_line, TorsionSpace};

pub const PARAM_NAMES: [&str; 8] = ["u0", "u1", "u2", "u3", "w0", "w1", "z0", "z1"];

/// The first row: `a32 = u0, a23 = u1, a10 = u2, a01 = u3`.
pub const ROW1: [&str; NUM_COORDS] = ["u0", "0", "0", "u1", "0", "0", "0", "0", "u2", "0", "0", "u3"];

/// The second row in coordinate order `a32 .. a01`.
pub const ROW2: [&str; NUM_COORDS] = [
    "u0^2*u1*w1^3*z1",
    "u1*u3^2*w0^2*w1*z1",
    "-u1*u2^2*w0^2*w1*z1",
    "0",
    "u0*u3^2*w0^2*w1*z1",
    "-u0*u2^2*w0^2*w1*z1",
    "-u1^2*u3*w0*w1^2*z1",
    "u0^2*u3*w0*w1^2*z1",
    "u2*z0-u2^2*u3*w0^3*z1",
    "-u1^2*u2*w0*w1^2*z1",
    "u0^2*u2*w0*w1^2*z1",
    "u3*z0",
];

pub fn param_vars() -> Arc<VarTable> {
    static VARS: OnceLock<Arc<VarTable>> = OnceLock::new();
    VARS.get_or_init(|| VarTable::new(&PARAM_NAMES).expect("distinct")).clone()
}

/// The two Stiefel rows as polynomials in the eight parameters.
pub fn symbolic_rows(field: FieldSpec) -> [Vec<SparsePoly>; 2] {
    let vars = param_vars();
    let parse = |texts: &[&str]| -> Vec<SparsePoly> {
        texts
            .iter()
            .map(|t| SparsePoly::parse(t, &vars, field).expect("row text parses"))
            .collect()
    };
    [parse(&ROW1), parse(&ROW2)]
}

/// The line at numeric parameters; dependent rows are an error.
pub fn z3_line(params: &[FieldValue]) -> FamilyResult<LineA> {
    if params.len() != PARAM_NAMES.len() {
        return Err(FamilyError::ParamCount {
            expected: PARAM_NAMES.len(),
            got: params.len(),
        });
    }
    let field = params[0].spec();
    let rows = symbolic_rows(field);
    let eval = |r: &[SparsePoly]| -> FamilyResult<Vec<FieldValue>> {
        r.iter().map(|p| p.eval(params).map_err(FamilyError::from)).collect()
    };
    let (p, q) = (eval(&rows[0])?, eval(&rows[1])?);
    LineA::new(p, q).map_err(|_| FamilyError::DegenerateRows)
}

/// Nonzero quadric and polarization conditions on the symbolic family.
pub fn symbolic_residuals(field: FieldSpec) -> Vec<(String, String)> {
    let rows = symbolic_rows(field);
    line_conditions_symbolic(&rows[0], &rows[1])
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(n, p)| (n, p.to_string()))
        .collect()
}

/// Variables of the kernel system: `u0..u3, w0, w1`.
pub fn kernel_vars() -> Arc<VarTable> {
    static VARS: OnceLock<Arc<VarTable>> = OnceLock::new();
    VARS.get_or_init(|| VarTable::new(&["u0", "u1", "u2", "u3", "w0", "w1"]).expect("distinct"))
        .clone()
}

/// Rows of the 3x6 system in `(v0, v1, v2, v3, v45, v67)`, read off from
/// `m (w0, w1)^t = 0` for the Hilbert-Burch matrix
/// `[[u0 v1 - u1 v0, -u0^2 u1^2 v67], [u2^2 u3^2 v45, u3 v2 - u2 v3], [v67, v45]]`.
pub const SYSTEM: [[&str; 6]; 3] = [
    ["-u1*w0", "u0*w0", "0", "0", "0", "-u0^2*u1^2*w1"],
    ["0", "0", "u3*w1", "-u2*w1", "u2^2*u3^2*w0", "0"],
    ["0", "0", "0", "0", "w1", "w0"],
];

/// The three printed kernel rows.
pub const KERNEL_ROWS: [[&str; 6]; 3] = [
    ["u0", "u1", "0", "0", "0", "0"],
    ["0", "0", "u2", "u3", "0", "0"],
    ["u0^2*u1*w1^3", "0", "-u2^2*u3*w0^3", "0", "-w0*w1^2", "w0^2*w1"],
];

/// A reading of the system: whether the `v45`/`v67` columns are exchanged, sign flips on
/// those two columns, and the sign of `w1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convention {
    pub swap_last_columns: bool,
    pub flip_v45: bool,
    pub flip_v67: bool,
    pub negate_w1: bool,
}

impl Convention {
    /// All 16 readings, direct reading first.
    pub fn all() -> Vec<Convention> {
        let mut out = Vec::with_capacity(16);
        for swap in [false, true] {
            for flips in 0..4u8 {
                for negate_w1 in [false, true] {
                    out.push(Convention {
                        swap_last_columns: swap,
                        flip_v45: flips & 1 == 1,
                        flip_v67: flips & 2 == 2,
                        negate_w1,
                    });
                }
            }
        }
        out
    }

    pub fn is_direct(&self) -> bool {
        *self == Convention::all()[0]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "swap_v45_v67": self.swap_last_columns,
            "flip_v45": self.flip_v45,
            "flip_v67": self.flip_v67,
            "negate_w1": self.negate_w1,
        })
    }
}

/// The system matrix under a convention.
pub fn system_matrix(conv: Convention, field: FieldSpec) -> Vec<Vec<SparsePoly>> {
    let vars = kernel_vars();
    let w1_image = {
        let w1 = SparsePoly::var(&vars, field, 5);
        if conv.negate_w1 {
            w1.scale(&-field.one())
        } else {
            w1
        }
    };
    let images: Vec<SparsePoly> = (0..5)
        .map(|i| SparsePoly::var(&vars, field, i))
        .chain(std::iter::once(w1_image))
        .collect();
    SYSTEM
        .iter()
        .map(|row| {
            let mut r: Vec<SparsePoly> = row
                .iter()
                .map(|t| {
                    SparsePoly::parse(t, &vars, field)
                        .expect("system text parses")
                        .compose(&images)
                        .expect("same ring")
                })
                .collect();
            if conv.flip_v45 {
                r[4] = r[4].scale(&-field.one());
            }
            if conv.flip_v67 {
                r[5] = r[5].scale(&-field.one());
            }
            if conv.swap_last_columns {
                r.swap(4, 5);
            }
            r
        })
        .collect()
}

pub fn kernel_rows(field: FieldSpec) -> Vec<Vec<SparsePoly>> {
    let vars = kernel_vars();
    KERNEL_ROWS
        .iter()
        .map(|row| {
            row.iter()
                .map(|t| SparsePoly::parse(t, &vars, field).expect("kernel text parses"))
                .collect()
        })
        .collect()
}

/// `M v` for each printed kernel row; an empty list means the row is in the kernel.
pub fn row_residuals(conv: Convention, field: FieldSpec) -> Vec<Vec<SparsePoly>> {
    let m = system_matrix(conv, field);
    kernel_rows(field)
        .iter()
        .map(|v| {
            m.iter()
                .map(|eq| {
                    eq.iter().zip(v).fold(SparsePoly::zero(&kernel_vars(), field), |acc, (a, b)| {
                        acc.try_add(&a.try_mul(b).expect("same ring")).expect("same ring")
                    })
                })
                .filter(|r| !r.is_zero())
                .collect()
        })
        .collect()
}

/// First convention under which all three kernel rows annihilate the system.
pub fn find_convention(field: FieldSpec) -> Option<Convention> {
    Convention::all()
        .into_iter()
        .find(|&c| row_residuals(c, field).iter().all(Vec::is_empty))
}

fn residual_json(res: &[Vec<SparsePoly>]) -> Value {
    json!(res
        .iter()
        .enumerate()
        .map(|(i, r)| json!({
            "row": i + 1,
            "annihilates": r.is_empty(),
            "residual": r.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }))
        .collect::<Vec<_>>())
}

/// Direct-reading residuals, the convention search and its outcome.
pub fn verify_z3_kernel(field: FieldSpec) -> Certificate {
    let mut cert = Certificate::new("z3-kernel", field);
    let direct = row_residuals(Convention::all()[0], field);
    cert.check(
        "direct-reading-rows-1-2",
        direct[0].is_empty() && direct[1].is_empty(),
        residual_json(&direct),
    );
    let zero = vec![SparsePoly::zero(&kernel_vars(), field); 6];
    let zero_ok = system_matrix(Convention::all()[0], field).iter().all(|eq| {
        eq.iter()
            .zip(&zero)
            .all(|(a, b)| a.try_mul(b).expect("same ring").is_zero())
    });
    cert.check("zero-vector-in-kernel", zero_ok, json!(null));
    match find_convention(field) {
        Some(c) => {
            cert.check(
                "convention-search",
                true,
                json!({
                    "convention": c.to_json(),
                    "direct_reading": c.is_direct(),
                    "searched": Convention::all().len(),
                }),
            );
        }
        None => {
            cert.check("convention-search", false, json!({ "searched": Convention::all().len() }));
        }
    }
    cert
}

pub fn random_params<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Vec<FieldValue> {
    (0..PARAM_NAMES.len()).map(|_| field.random_nonzero(rng, 50)).collect()
}

/// Symbolic line-in-Q identity, the first row on `T01|23`, and classification of
/// numeric instances.
pub fn verify_z3_param<R: Rng + ?Sized>(field: FieldSpec, instances: usize, rng: &mut R) -> Certificate {
    let mut cert = Certificate::new("z3-param", field);
    let residuals = symbolic_residuals(field);
    cert.check("line-in-q-symbolically", residuals.is_empty(), json!({ "nonzero": residuals }));

    let rows = symbolic_rows(field);
    let off: Vec<&str> = TorsionSpace::T01_23
        .killed()
        .into_iter()
        .filter(|&c| !rows[0][c].is_zero())
        .map(|c| crate::geometry::COORD_NAMES[c])
        .collect();
    cert.check("first-row-on-T01|23", off.is_empty(), json!({ "nonzero_killed": off }));

    let mut samples = Vec::new();
    let mut ok = true;
    let mut trial_params: Vec<Vec<FieldValue>> = vec![["1", "1", "1", "1", "1", "2", "1", "1"]
        .iter()
        .map(|t| field.parse_value(t).expect("literal"))
        .collect()];
    while trial_params.len() < instances.max(1) {
        trial_params.push(random_params(field, rng));
    }
    for params in trial_params {
        let text: Vec<String> = params.iter().map(FieldValue::to_string).collect();
        match z3_line(&params).map_err(|e| e.to_string()).and_then(|l| {
            classify_line(&l).map_err(|e| e.to_string())
        }) {
            Ok(report) => {
                let good = report.torsion_points.len() == 1
                    && report.torsion_points[0].space == TorsionSpace::T01_23
                    && report.contained_in.is_empty();
                ok &= good;
                samples.push(json!({ "params": text, "passed": good, "report": report.to_json() }));
            }
            Err(e) => {
                ok = false;
                samples.push(json!({ "params": text, "error": e }));
            }
        }
    }
    cert.check("numeric-instances-one-torsion-point", ok, json!(samples));
    cert
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_parameters() {
        let f = FieldSpec::Rational;
        let p: Vec<FieldValue> = [1, 0, 0, 0, 0, 1, 1, 0].iter().map(|&x| f.from_i64(x)).collect();
        assert_eq!(z3_line(&p), Err(FamilyError::DegenerateRows));
    }

    #[test]
    fn convention_found_is_swap() {
        let c = find_convention(FieldSpec::Rational).unwrap();
        assert!(c.swap_last_columns && !c.flip_v45 && !c.flip_v67 && !c.negate_w1);
        let direct = row_residuals(Convention::all()[0], FieldSpec::Rational);
        assert!(direct[0].is_empty() && direct[1].is_empty() && !direct[2].is_empty());
    }
}
