//! The rational map from a Hirzebruch surface times three lines onto the
//! hyperelliptic locus.
//!
//! Parameters are `(v0, v1, w0, w1, x0, x1, y0, y1, z0, z1)` with grading
//! `deg v0 = (1,2,0,0,0)`, `deg v1 = (1,0,0,0,0)`, `deg w = (0,1,0,0,0)` and unit
//! degrees for `x`, `y`, `z`.

use std::sync::{Arc, OnceLock};

use rand::Rng;
use serde_json::json;
use sha2::{Digest, Sha256};

use super::{Certificate, FamilyError, FamilyResult};
use crate::field::{FieldSpec, FieldValue};
use crate::geometry::{quadrics, PointA, COORD_NAMES, NUM_COORDS};
use crate::poly::{jacobian, Homogeneity, PolyMatrix, SparsePoly, VarTable};
use crate::strata::rank_a;

pub const PARAM_NAMES: [&str; 10] = ["v0", "v1", "w0", "w1", "x0", "x1", "y0", "y1", "z0", "z1"];

/// The twelve components in coordinate order `a32 .. a01`.
pub const COMPONENTS: [&str; NUM_COORDS] = [
    "v0^2*(x1*w1-x0*w0)*x1*(x1+x0)*y0*y1*z1^2",
    "v0^2*(x1*w1-x0*w0)*x0*(x1+x0)*y0*y1*z0^2",
    "-v1^2*w0^2*w1^2*(w1+w0)*x0*x1*(x1+x0)*y0*y1*z1^2",
    "-v0^2*(x1*w1-x0*w0)*x0*x1*y0^2*z1^2",
    "-v0^2*(x1*w1-x0*w0)*x0*(x1+x0)*y1^2*z0^2",
    "v1^2*w0^2*w1*(w1+w0)^2*x0*x1*(x1+x0)*y1^2*z1^2",
    "-v0^2*(x1*w1-x0*w0)*x0*x1*y0^2*z0*z1",
    "v0^2*(x1*w1-x0*w0)*x1*(x1+x0)*y1^2*z0*z1",
    "-v1^2*w0*w1^2*(w1+w0)^2*x0*x1*(x1+x0)*y1^2*z0*z1",
    "-v0*v1*w0*w1*(x1*w1-x0*w0)*x0*x1*y0^2*z1^2",
    "v0*v1*w0*(w1+w0)*(x1*w1-x0*w0)*x1*(x1+x0)*y1^2*z1^2",
    "-v0*v1*w1*(w1+w0)*(x1*w1-x0*w0)*x0*(x1+x0)*y1^2*z0^2",
];

/// SHA-256 of the component texts joined by newlines; guards the transcription.
pub const COMPONENTS_SHA256: &str = "ea68c77a2c858fca134932b9650f2bddd22b21f179b2ae1e97fb0c0eb3522918";

/// Irreducible factors appearing in the components, for base-locus diagnostics.
pub const FACTORS: [&str; 13] = [
    "v0", "v1", "w0", "w1", "w1+w0", "x0", "x1", "x1+x0", "x1*w1-x0*w0", "y0", "y1", "z0", "z1",
];

pub const MULTIDEGREE: [u32; 5] = [2, 5, 3, 2, 2];

pub fn components_digest() -> String {
    let mut h = Sha256::new();
    h.update(COMPONENTS.join("\n").as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn param_vars() -> Arc<VarTable> {
    static VARS: OnceLock<Arc<VarTable>> = OnceLock::new();
    VARS.get_or_init(|| {
        let g = |v: [u32; 5]| v.to_vec();
        VarTable::graded(
            &PARAM_NAMES,
            vec![
                g([1, 2, 0, 0, 0]),
                g([1, 0, 0, 0, 0]),
                g([0, 1, 0, 0, 0]),
                g([0, 1, 0, 0, 0]),
                g([0, 0, 1, 0, 0]),
                g([0, 0, 1, 0, 0]),
                g([0, 0, 0, 1, 0]),
                g([0, 0, 0, 1, 0]),
                g([0, 0, 0, 0, 1]),
                g([0, 0, 0, 0, 1]),
            ],
        )
        .expect("valid grading")
    })
    .clone()
}

/// The parametrization over one field, with its Jacobian precomputed.
#[derive(Debug, Clone)]
pub struct HypParam {
    pub field: FieldSpec,
    pub components: Vec<SparsePoly>,
    jac: PolyMatrix,
}

impl HypParam {
    pub fn new(field: FieldSpec) -> Self {
        let vars = param_vars();
        let components: Vec<SparsePoly> = COMPONENTS
            .iter()
            .map(|c| SparsePoly::parse(c, &vars, field).expect("component text parses"))
            .collect();
        Self::from_components(components)
    }

    /// Arbitrary components (used to exercise the verifier on altered maps).
    pub fn from_components(components: Vec<SparsePoly>) -> Self {
        let field = components[0].field();
        let jac = jacobian(&components).expect("common ring");
        HypParam { field, components, jac }
    }

    /// Power of `z0` in each component (each component is `c_k(v,w,x,y) z0^e z1^(2-e)`).
    pub fn z0_exponents(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.degree_in(8)).collect()
    }

    pub fn eval(&self, params: &[FieldValue]) -> FamilyResult<Vec<FieldValue>> {
        if params.len() != PARAM_NAMES.len() {
            return Err(FamilyError::ParamCount {
                expected: PARAM_NAMES.len(),
                got: params.len(),
            });
        }
        self.components
            .iter()
            .map(|c| c.eval(params).map_err(FamilyError::from))
            .collect()
    }

    /// The image point; an all-zero image is reported with the vanishing factors.
    pub fn point(&self, params: &[FieldValue]) -> FamilyResult<PointA> {
        let image = self.eval(params)?;
        if image.iter().all(FieldValue::is_zero) {
            let vars = param_vars();
            let vanishing = FACTORS
                .iter()
                .filter(|f| {
                    SparsePoly::parse(f, &vars, self.field)
                        .and_then(|p| p.eval(params))
                        .map(|v| v.is_zero())
                        .unwrap_or(false)
                })
                .map(|f| f.to_string())
                .collect();
            return Err(FamilyError::BaseLocus(vanishing));
        }
        Ok(PointA::new(image)?)
    }

    pub fn jacobian_rank(&self, params: &[FieldValue]) -> FamilyResult<usize> {
        Ok(self.jac.eval(params)?.rank())
    }

    pub fn random_params<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<FieldValue> {
        (0..PARAM_NAMES.len()).map(|_| self.field.random(rng, 50)).collect()
    }
}

/// `hyp_point` over the field of the parameters.
pub fn hyp_point(params: &[FieldValue]) -> FamilyResult<PointA> {
    let field = params.first().map(FieldValue::spec).ok_or(FamilyError::ParamCount {
        expected: PARAM_NAMES.len(),
        got: 0,
    })?;
    HypParam::new(field).point(params)
}

/// Runs the four checks on a given parametrization.
pub fn verify_components<R: Rng + ?Sized>(param: &HypParam, points: usize, rng: &mut R) -> Certificate {
    let field = param.field;
    let mut cert = Certificate::new("hyp-param", field);

    // (i) quadrics vanish on the image
    let residuals: Vec<(usize, String)> = quadrics(field)
        .iter()
        .enumerate()
        .filter_map(|(k, q)| {
            let r = q.compose(&param.components).expect("12 components");
            (!r.is_zero()).then(|| (k, r.to_string()))
        })
        .collect();
    cert.check(
        "quadrics-vanish-symbolically",
        residuals.is_empty(),
        json!({ "nonzero": residuals.iter().map(|(k, r)| json!({"quadric": k, "residual": r})).collect::<Vec<_>>() }),
    );

    // (ii) + (iii) Jacobian rank and a-matrix rank at random points
    let mut jac_ranks = Vec::new();
    let mut a_ranks = Vec::new();
    let mut resampled = 0usize;
    let mut bad = Vec::new();
    while jac_ranks.len() < points {
        let params = param.random_params(rng);
        let p = match param.point(&params) {
            Ok(p) => p,
            Err(FamilyError::BaseLocus(_)) => {
                resampled += 1;
                if resampled > 100 * points.max(1) {
                    break;
                }
                continue;
            }
            Err(e) => {
                bad.push(json!({"error": e.to_string()}));
                break;
            }
        };
        let jr = param.jacobian_rank(&params).unwrap_or(0);
        let ar = rank_a(&p);
        if jr != 6 || ar != 3 {
            bad.push(json!({
                "params": params.iter().map(FieldValue::to_text).collect::<Vec<_>>(),
                "jacobian_rank": jr,
                "rank_a": ar,
            }));
        }
        jac_ranks.push(jr);
        a_ranks.push(ar);
    }
    cert.check(
        "jacobian-rank-6",
        jac_ranks.len() == points && jac_ranks.iter().all(|&r| r == 6),
        json!({ "points": jac_ranks.len(), "ranks": jac_ranks, "base_locus_resamples": resampled, "counterexamples": bad }),
    );
    cert.check(
        "rank-a-3",
        a_ranks.len() == points && a_ranks.iter().all(|&r| r == 3),
        json!({ "points": a_ranks.len(), "ranks": a_ranks }),
    );

    // (iv) multihomogeneity
    let mut degrees = Vec::new();
    let mut homogeneous = true;
    for (k, c) in param.components.iter().enumerate() {
        match c.is_multihomogeneous() {
            Ok(Homogeneity::Homogeneous(d)) => {
                homogeneous &= d == MULTIDEGREE;
                degrees.push(json!({"coord": COORD_NAMES[k], "degree": d}));
            }
            Ok(Homogeneity::Zero) => {
                homogeneous = false;
                degrees.push(json!({"coord": COORD_NAMES[k], "degree": "zero"}));
            }
            Ok(Homogeneity::Mixed { first, second }) => {
                homogeneous = false;
                degrees.push(json!({
                    "coord": COORD_NAMES[k],
                    "mixed": [format!("{:?}", first.exponents()), format!("{:?}", second.exponents())],
                }));
            }
            Err(e) => {
                homogeneous = false;
                degrees.push(json!({"coord": COORD_NAMES[k], "error": e.to_string()}));
            }
        }
    }
    cert.check("multihomogeneous", homogeneous, json!({ "components": degrees }));
    cert
}

/// Verifies the printed parametrization, including the transcription checksum.
pub fn verify_hyp_param<R: Rng + ?Sized>(field: FieldSpec, points: usize, rng: &mut R) -> Certificate {
    let digest = components_digest();
    let param = HypParam::new(field);
    let mut cert = verify_components(&param, points, rng);
    cert.check(
        "transcription-checksum",
        digest == COMPONENTS_SHA256,
        json!({ "sha256": digest }),
    );
    let worked = param.point(&worked_example_params(field)).ok();
    let expected = PointA::from_i64(field, &WORKED_IMAGE).expect("nonzero");
    cert.check(
        "worked-example-image",
        worked.as_ref() == Some(&expected),
        json!({ "image": worked.map(|p| p.coords().iter().map(FieldValue::to_text).collect::<Vec<_>>()) }),
    );
    cert
}

/// `(v, w, x, y, z) = ((1,1), (1,2), (1,1), (1,1), (1,1))`.
pub fn worked_example_params(field: FieldSpec) -> Vec<FieldValue> {
    [1, 1, 1, 2, 1, 1, 1, 1, 1, 1].iter().map(|&x| field.from_i64(x)).collect()
}

pub const WORKED_IMAGE: [i64; NUM_COORDS] = [2, 2, -24, -1, -2, 36, -1, 2, -72, -2, 6, -12];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let f = FieldSpec::Rational;
        let p = hyp_point(&worked_example_params(f)).unwrap();
        let expected: Vec<FieldValue> = WORKED_IMAGE.iter().map(|&x| f.from_i64(x)).collect();
        assert_eq!(p.coords(), expected.as_slice());
        assert_eq!(rank_a(&p), 3);
    }

    #[test]
    fn base_locus_is_reported() {
        let f = FieldSpec::Rational;
        // x1 w1 = x0 w0 and v1 = 0
        let params: Vec<FieldValue> = [1, 0, 1, 1, 1, 1, 1, 1, 1, 1].iter().map(|&x| f.from_i64(x)).collect();
        match hyp_point(&params) {
            Err(FamilyError::BaseLocus(fs)) => {
                assert!(fs.contains(&"v1".to_string()));
                assert!(fs.contains(&"x1*w1-x0*w0".to_string()));
            }
            other => panic!("expected base locus, got {other:?}"),
        }
    }

    #[test]
    fn z_dependence_is_a_monomial() {
        let h = HypParam::new(FieldSpec::Prime(31));
        assert_eq!(h.z0_exponents(), vec![0, 2, 0, 0, 2, 0, 1, 1, 1, 0, 0, 2]);
    }
}
