//! Named verifiers behind `godeaux-lines verify`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::families::{hyp, para_v2, z3, z5, Certificate};
use crate::field::FieldSpec;
use crate::geometry::{tangent_space, PointA, COORD_NAMES, NUM_COORDS};
use crate::linalg::Matrix;
use crate::poly::SparsePoly;
use crate::strata::{check_symmetry, quadric_symmetries, TorsionSpace};

/// Default number of random parameter points for sampled checks.
pub const DEFAULT_POINTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    HypParam,
    ParaV2,
    Z5Family,
    Z3Param,
    Z3Kernel,
    TorsionSpaces,
    Symmetries,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::HypParam,
        Theorem::ParaV2,
        Theorem::Z5Family,
        Theorem::Z3Param,
        Theorem::Z3Kernel,
        Theorem::TorsionSpaces,
        Theorem::Symmetries,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::HypParam => "hyp-param",
            Theorem::ParaV2 => "para-v2",
            Theorem::Z5Family => "z5-family",
            Theorem::Z3Param => "z3-param",
            Theorem::Z3Kernel => "z3-kernel",
            Theorem::TorsionSpaces => "torsion-spaces",
            Theorem::Symmetries => "symmetries",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown theorem {s:?}"))
    }
}

/// Runs one verifier. Sampled checks use `points` random parameters drawn from `seed`.
pub fn run(theorem: Theorem, field: FieldSpec, seed: u64, points: usize) -> Certificate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match theorem {
        Theorem::HypParam => hyp::verify_hyp_param(field, points, &mut rng),
        Theorem::ParaV2 => para_v2::verify_para_v2(field),
        Theorem::Z5Family => z5::verify_z5_family(field),
        Theorem::Z3Param => z3::verify_z3_param(field, points.min(5), &mut rng),
        Theorem::Z3Kernel => z3::verify_z3_kernel(field),
        Theorem::TorsionSpaces => verify_torsion_spaces(field),
        Theorem::Symmetries => verify_symmetries(field),
    }
}

/// The quadrics vanish on the three coordinate spaces, the killed coordinates of
/// `T01|23` are the expected eight, and each space lies in the tangent space of its
/// generic point.
pub fn verify_torsion_spaces(field: FieldSpec) -> Certificate {
    let mut cert = Certificate::new("torsion-spaces", field);
    for t in TorsionSpace::ALL {
        let r = t.restricted_quadrics(field);
        cert.check(
            format!("quadrics-vanish-on-{}", t.name()),
            r.iter().all(SparsePoly::is_zero),
            json!({ "restricted": r.iter().map(|p| p.to_string()).collect::<Vec<_>>() }),
        );
        let mut coords = vec![field.zero(); NUM_COORDS];
        for (i, c) in t.survivors().into_iter().enumerate() {
            coords[c] = field.from_i64(2 + i as i64);
        }
        let p = PointA::new(coords).expect("nonzero");
        let inside = tangent_space(&p).map(|basis| {
            let m = Matrix::from_rows(field, basis.clone());
            let r = m.rank();
            t.survivors().iter().all(|&c| {
                let mut e = vec![field.zero(); NUM_COORDS];
                e[c] = field.one();
                let mut rows = basis.clone();
                rows.push(e);
                Matrix::from_rows(field, rows).rank() == r
            })
        });
        cert.check(
            format!("tangent-space-contains-{}", t.name()),
            inside == Ok(true),
            json!({ "point": p.coords().iter().map(|x| x.to_text()).collect::<Vec<_>>() }),
        );
    }
    let killed: Vec<&str> = TorsionSpace::T01_23.killed().iter().map(|&c| COORD_NAMES[c]).collect();
    let expected = ["a31", "a30", "a21", "a20", "a13", "a12", "a03", "a02"];
    cert.check("killed-set-01|23", killed == expected, json!({ "killed": killed }));
    cert
}

/// Signed coordinate permutations induced by `S4` that preserve the quadrics up to
/// sign, each re-checked by polynomial identity, and their action on the torsion spaces.
pub fn verify_symmetries(field: FieldSpec) -> Certificate {
    let mut cert = Certificate::new("symmetries", field);
    let g = quadric_symmetries();
    let bad: Vec<String> = g
        .elements
        .iter()
        .zip(&g.quadric_action)
        .filter(|(e, a)| !check_symmetry(e, a, field))
        .map(|(e, _)| e.describe())
        .collect();
    cert.check(
        "elements-preserve-quadrics",
        g.order() > 0 && bad.is_empty(),
        json!({ "order": g.order(), "failing": bad }),
    );
    cert.check(
        "generators",
        !g.generators.is_empty(),
        json!(g.generators.iter().map(|e| e.describe()).collect::<Vec<_>>()),
    );
    let orbits: Vec<Vec<String>> = g
        .torsion_orbits
        .iter()
        .map(|o| o.iter().map(|t| t.to_string()).collect())
        .collect();
    cert.check(
        "torsion-spaces-single-orbit",
        g.torsion_orbits.len() == 1 && g.torsion_orbits[0].len() == 3,
        json!({ "orbits": orbits }),
    );
    cert
}
