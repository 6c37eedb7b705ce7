//! Lines joining two torsion spaces.
//!
//! On `T_A x T_B` the quadrics vanish on both points, and each polarization restricts
//! to a single bilinear monomial `p_x q_y`. The lines in Q therefore form the union of
//! the coordinate subvarieties given by minimal vertex covers of the bipartite graph
//! whose edges are those monomials.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::{Certificate, FamilyError, FamilyResult};
use crate::field::{FieldSpec, FieldValue};
use crate::geometry::{coord, line_conditions_symbolic, LineA, COORD_NAMES, NUM_COORDS, QUADRIC_TERMS};
use crate::poly::{SparsePoly, VarTable};
use crate::strata::{classify_line, TorsionSpace};

/// The printed example: first row on `(a23, a10)`, second row on `(a31, a02)`.
pub fn z5_line(p0: &FieldValue, p1: &FieldValue, q0: &FieldValue, q1: &FieldValue) -> FamilyResult<LineA> {
    let field = p0.spec();
    let mut r0 = vec![field.zero(); NUM_COORDS];
    let mut r1 = vec![field.zero(); NUM_COORDS];
    r0[coord(2, 3)] = p0.clone();
    r0[coord(1, 0)] = p1.clone();
    r1[coord(3, 1)] = q0.clone();
    r1[coord(0, 2)] = q1.clone();
    LineA::new(r0, r1).map_err(|_| FamilyError::DegenerateRows)
}

/// The example line with all parameters equal to one.
pub fn example_line(field: FieldSpec) -> LineA {
    let one = field.one();
    z5_line(&one, &one, &one, &one).expect("independent rows")
}

/// Symbolic Stiefel rows of a coordinate family: row 0 supported on `p_support`,
/// row 1 on `q_support`, with one free parameter per supported coordinate.
pub fn coordinate_family(p_support: &[usize], q_support: &[usize], field: FieldSpec) -> [Vec<SparsePoly>; 2] {
    let names: Vec<String> = p_support
        .iter()
        .map(|&c| format!("p{}", &COORD_NAMES[c][1..]))
        .chain(q_support.iter().map(|&c| format!("q{}", &COORD_NAMES[c][1..])))
        .collect();
    let vars: Arc<VarTable> = VarTable::new(&names).expect("distinct");
    let mut r0 = vec![SparsePoly::zero(&vars, field); NUM_COORDS];
    let mut r1 = r0.clone();
    for (i, &c) in p_support.iter().enumerate() {
        r0[c] = SparsePoly::var(&vars, field, i);
    }
    for (i, &c) in q_support.iter().enumerate() {
        r1[c] = SparsePoly::var(&vars, field, p_support.len() + i);
    }
    [r0, r1]
}

/// Whether all quadric and polarization conditions vanish identically on a family.
pub fn family_in_q(rows: &[Vec<SparsePoly>; 2]) -> Vec<(String, String)> {
    line_conditions_symbolic(&rows[0], &rows[1])
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(n, p)| (n, p.to_string()))
        .collect()
}

/// A component of the lines joining two torsion spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Coordinates of the first space that stay free.
    pub a_survivors: Vec<usize>,
    /// Coordinates of the second space that stay free.
    pub b_survivors: Vec<usize>,
    /// Whether the symbolic family lies in Q identically.
    pub in_q: bool,
    /// Whether this is the printed example family.
    pub printed_example: bool,
}

impl Component {
    /// `"P^a x P^b"` for the product of the two projective factors.
    pub fn kind(&self) -> String {
        format!("P{}xP{}", self.a_survivors.len() - 1, self.b_survivors.len() - 1)
    }

    pub fn to_json(&self) -> Value {
        let names = |v: &[usize]| v.iter().map(|&c| COORD_NAMES[c]).collect::<Vec<_>>();
        json!({
            "type": self.kind(),
            "first_row_support": names(&self.a_survivors),
            "second_row_support": names(&self.b_survivors),
            "line_in_q_identically": self.in_q,
            "label": if self.printed_example { "printed-example" } else { "undetermined" },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentCounts {
    pub pair: (TorsionSpace, TorsionSpace),
    /// Edges `(x, y)`: polarization `k` restricts to `sign * p_x q_y`.
    pub edges: Vec<(usize, usize, usize)>,
    pub counts: BTreeMap<String, usize>,
    pub components: Vec<Component>,
}

impl ComponentCounts {
    pub fn count(&self, kind: &str) -> usize {
        self.counts.get(kind).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pair": [self.pair.0.name(), self.pair.1.name()],
            "edges": self.edges.iter().map(|(k, x, y)| json!({
                "polarization": k, "p": COORD_NAMES[*x], "q": COORD_NAMES[*y]
            })).collect::<Vec<_>>(),
            "counts": self.counts,
            "components": self.components.iter().map(Component::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Restricted polarizations, vertex covers and the resulting components.
pub fn z5_component_counts(a: TorsionSpace, b: TorsionSpace, field: FieldSpec) -> FamilyResult<ComponentCounts> {
    if a == b {
        return Err(FamilyError::SameSpace);
    }
    let sa = a.survivors();
    let sb = b.survivors();
    let mut edges = Vec::new();
    for (k, terms) in QUADRIC_TERMS.iter().enumerate() {
        let mut found = Vec::new();
        for t in terms {
            for (x, y) in [(t.x, t.y), (t.y, t.x)] {
                if sa.contains(&x) && sb.contains(&y) {
                    found.push((x, y));
                }
            }
        }
        if found.len() != 1 {
            let text = found
                .iter()
                .map(|(x, y)| format!("p{}*q{}", &COORD_NAMES[*x][1..], &COORD_NAMES[*y][1..]))
                .collect::<Vec<_>>()
                .join(" + ");
            return Err(FamilyError::NotMonomial {
                index: k,
                text: if text.is_empty() { "0".into() } else { text },
            });
        }
        edges.push((k, found[0].0, found[0].1));
    }

    // vertices 0..4 are A-survivors, 4..8 B-survivors
    let vertex = |c: usize, in_a: bool| -> usize {
        if in_a {
            sa.iter().position(|&x| x == c).expect("A survivor")
        } else {
            4 + sb.iter().position(|&x| x == c).expect("B survivor")
        }
    };
    let edge_bits: Vec<(usize, usize)> = edges.iter().map(|&(_, x, y)| (vertex(x, true), vertex(y, false))).collect();
    let is_cover = |mask: u32| edge_bits.iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1);
    let covers: Vec<u32> = (0u32..256).filter(|&m| is_cover(m)).collect();
    let minimal: Vec<u32> = covers
        .iter()
        .copied()
        .filter(|&m| !covers.iter().any(|&o| o != m && o & m == o))
        .collect();

    let example_a = [coord(2, 3), coord(1, 0)];
    let example_b = [coord(3, 1), coord(0, 2)];
    let mut counts = BTreeMap::new();
    let mut components = Vec::new();
    for m in minimal {
        let a_surv: Vec<usize> = (0..4).filter(|&i| m >> i & 1 == 0).map(|i| sa[i]).collect();
        let b_surv: Vec<usize> = (0..4).filter(|&i| m >> (4 + i) & 1 == 0).map(|i| sb[i]).collect();
        if a_surv.is_empty() || b_surv.is_empty() {
            continue;
        }
        let rows = coordinate_family(&a_surv, &b_surv, field);
        let in_q = family_in_q(&rows).is_empty();
        let printed_example = (a, b) == (TorsionSpace::T01_23, TorsionSpace::T02_13)
            && a_surv.len() == 2
            && example_a.iter().all(|c| a_surv.contains(c))
            && b_surv.len() == 2
            && example_b.iter().all(|c| b_surv.contains(c));
        let comp = Component {
            a_survivors: a_surv,
            b_survivors: b_surv,
            in_q,
            printed_example,
        };
        *counts.entry(comp.kind()).or_insert(0) += 1;
        components.push(comp);
    }
    Ok(ComponentCounts {
        pair: (a, b),
        edges,
        counts,
        components,
    })
}

/// Symbolic check of the example family, classification of the example line and the
/// component counts for all three pairs.
pub fn verify_z5_family(field: FieldSpec) -> Certificate {
    let mut cert = Certificate::new("z5-family", field);
    let rows = coordinate_family(&[coord(2, 3), coord(1, 0)], &[coord(3, 1), coord(0, 2)], field);
    let residuals = family_in_q(&rows);
    cert.check(
        "example-family-in-q-symbolically",
        residuals.is_empty(),
        json!({ "nonzero": residuals }),
    );

    match classify_line(&example_line(field)) {
        Ok(report) => {
            let spaces: Vec<_> = report.torsion_points.iter().map(|h| h.space).collect();
            let distinct = spaces.len() == 2 && spaces[0] != spaces[1];
            cert.check(
                "example-line-classification",
                distinct && report.hyperelliptic_points().is_empty() && !report.excluded_flag,
                report.to_json(),
            );
        }
        Err(e) => {
            cert.check("example-line-classification", false, json!({ "error": e.to_string() }));
        }
    }

    let pairs = [
        (TorsionSpace::T01_23, TorsionSpace::T02_13),
        (TorsionSpace::T01_23, TorsionSpace::T03_12),
        (TorsionSpace::T02_13, TorsionSpace::T03_12),
    ];
    for (a, b) in pairs {
        let name = format!("component-counts-{}-{}", a.name(), b.name());
        match z5_component_counts(a, b, field) {
            Ok(c) => {
                let ok = c.count("P1xP1") == 6
                    && c.count("P0xP2") == 4
                    && c.count("P2xP0") == 4
                    && c.components.len() == 14
                    && c.components.iter().all(|x| x.in_q)
                    && (a != TorsionSpace::T01_23
                        || b != TorsionSpace::T02_13
                        || c.components.iter().any(|x| x.printed_example));
                cert.check(name, ok, c.to_json());
            }
            Err(e) => {
                cert.check(name, false, json!({ "error": e.to_string() }));
            }
        }
    }
    cert
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_for_first_pair() {
        let c = z5_component_counts(TorsionSpace::T01_23, TorsionSpace::T02_13, FieldSpec::Rational).unwrap();
        let mut e: Vec<(&str, &str)> = c.edges.iter().map(|&(_, x, y)| (COORD_NAMES[x], COORD_NAMES[y])).collect();
        e.sort();
        assert_eq!(e, [("a01", "a02"), ("a10", "a13"), ("a23", "a20"), ("a32", "a31")]);
        assert_eq!(c.count("P1xP1"), 6);
        assert_eq!(c.count("P0xP2"), 4);
        assert_eq!(c.count("P2xP0"), 4);
        assert_eq!(c.components.iter().filter(|x| x.printed_example).count(), 1);
    }

    #[test]
    fn same_space_is_an_error() {
        assert_eq!(
            z5_component_counts(TorsionSpace::T02_13, TorsionSpace::T02_13, FieldSpec::Rational),
            Err(FamilyError::SameSpace)
        );
    }
}
