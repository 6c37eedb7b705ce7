//! Special loci of Q that lines are classified against: the three coordinate
//! torsion spaces, the rank strata of the a-matrix and the row-vanishing loci.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::binary::{BinaryForm, ProjPoint};
use crate::field::{FieldSpec, FieldValue};
use crate::geometry::{
    a_matrix, coord, line_in_q, quadrics, GeometryError, GeometryResult, LineA, PointA, A_PATTERN, COORDS,
    COORD_NAMES, NUM_COORDS, QUADRIC_TERMS, ROW_TRIPLES,
};
use crate::linalg::Matrix;
use crate::pencil::{degeneration_profile, DegenerationProfile};
use crate::poly::SparsePoly;
use crate::ring::cofactor_det;

/// One of the three coordinate P^3's, indexed by a partition of `{0,1,2,3}` into pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorsionSpace {
    T01_23,
    T02_13,
    T03_12,
}

impl TorsionSpace {
    pub const ALL: [TorsionSpace; 3] = [TorsionSpace::T01_23, TorsionSpace::T02_13, TorsionSpace::T03_12];

    pub fn partition(self) -> [(usize, usize); 2] {
        match self {
            TorsionSpace::T01_23 => [(0, 1), (2, 3)],
            TorsionSpace::T02_13 => [(0, 2), (1, 3)],
            TorsionSpace::T03_12 => [(0, 3), (1, 2)],
        }
    }

    /// The space whose partition pairs `i` with `j`.
    pub fn pairing(i: usize, j: usize) -> TorsionSpace {
        let k = if i == 0 { j } else if j == 0 { i } else { 6 - i - j };
        match k {
            1 => TorsionSpace::T01_23,
            2 => TorsionSpace::T02_13,
            3 => TorsionSpace::T03_12,
            _ => panic!("invalid pair ({i}, {j})"),
        }
    }

    /// The four surviving coordinates `a_ij, a_ji, a_kl, a_lk`, in storage order.
    pub fn survivors(self) -> [usize; 4] {
        let [(i, j), (k, l)] = self.partition();
        let mut s = [coord(i, j), coord(j, i), coord(k, l), coord(l, k)];
        s.sort_unstable();
        s
    }

    /// The eight coordinates that vanish on the space, in storage order.
    pub fn killed(self) -> Vec<usize> {
        let s = self.survivors();
        (0..NUM_COORDS).filter(|c| !s.contains(c)).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            TorsionSpace::T01_23 => "01|23",
            TorsionSpace::T02_13 => "02|13",
            TorsionSpace::T03_12 => "03|12",
        }
    }

    pub fn contains(self, p: &PointA) -> bool {
        self.killed().iter().all(|&k| p.coords()[k].is_zero())
    }

    /// `q_k` composed with the inclusion of the survivor subspace (zero for every `k`).
    pub fn restricted_quadrics(self, field: FieldSpec) -> [SparsePoly; 4] {
        let vars = crate::geometry::a_vars();
        let s = self.survivors();
        let images: Vec<SparsePoly> = (0..NUM_COORDS)
            .map(|c| {
                if s.contains(&c) {
                    SparsePoly::var(&vars, field, c)
                } else {
                    SparsePoly::zero(&vars, field)
                }
            })
            .collect();
        quadrics(field).map(|q| q.compose(&images).expect("12 images"))
    }
}

impl fmt::Display for TorsionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.name())
    }
}

impl FromStr for TorsionSpace {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim().trim_start_matches(['T', 't']).replace(['_', '-'], "|");
        TorsionSpace::ALL
            .into_iter()
            .find(|sp| sp.name() == t || sp.name().replace('|', "") == t)
            .ok_or_else(|| format!("unknown torsion space {s:?} (expected 01|23, 02|13 or 03|12)"))
    }
}

pub fn rank_a(p: &PointA) -> usize {
    a_matrix(p).rank()
}

/// Common zeros on P^1 of linear forms `(a_k s + b_k t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommonZero {
    None,
    Point(ProjPoint),
    Everywhere,
}

pub fn common_zero(forms: &[(FieldValue, FieldValue)], field: FieldSpec) -> CommonZero {
    let rows: Vec<Vec<FieldValue>> = forms.iter().map(|(a, b)| vec![a.clone(), b.clone()]).collect();
    if rows.is_empty() {
        return CommonZero::Everywhere;
    }
    let ns = Matrix::from_rows(field, rows).nullspace();
    match ns.len() {
        0 => CommonZero::None,
        1 => CommonZero::Point(ProjPoint::new(ns[0][0].clone(), ns[0][1].clone()).expect("nonzero kernel vector")),
        _ => CommonZero::Everywhere,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionHit {
    pub point: ProjPoint,
    pub space: TorsionSpace,
}

/// Meeting points with the torsion spaces and the spaces containing the whole line.
pub fn torsion_intersections(line: &LineA) -> (Vec<TorsionHit>, Vec<TorsionSpace>) {
    let mut hits = Vec::new();
    let mut contained = Vec::new();
    for space in TorsionSpace::ALL {
        let forms: Vec<_> = space.killed().iter().map(|&k| line.coord_form(k)).collect();
        match common_zero(&forms, line.field()) {
            CommonZero::None => {}
            CommonZero::Point(point) => hits.push(TorsionHit { point, space }),
            CommonZero::Everywhere => contained.push(space),
        }
    }
    (hits, contained)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowHit {
    pub point: ProjPoint,
    pub row: usize,
}

/// Points of the line where a whole row of the a-matrix vanishes, and rows vanishing identically.
pub fn row_vanishing_points(line: &LineA) -> (Vec<RowHit>, Vec<usize>) {
    let mut hits = Vec::new();
    let mut identically = Vec::new();
    for (row, triple) in ROW_TRIPLES.iter().enumerate() {
        let forms: Vec<_> = triple.iter().map(|&k| line.coord_form(k)).collect();
        match common_zero(&forms, line.field()) {
            CommonZero::None => {}
            CommonZero::Point(point) => hits.push(RowHit { point, row }),
            CommonZero::Everywhere => identically.push(row),
        }
    }
    (hits, identically)
}

/// The a-matrix along the line, as a 4x6 matrix of linear forms.
pub fn restricted_a_matrix(line: &LineA) -> Vec<Vec<BinaryForm>> {
    let field = line.field();
    A_PATTERN
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    Some(k) => {
                        let (a, b) = line.coord_form(*k);
                        BinaryForm::linear(a, b)
                    }
                    None => BinaryForm::zero(field, 1),
                })
                .collect()
        })
        .collect()
}

/// The fifteen 4x4 minors of the restricted a-matrix, by column subset in lexicographic order.
pub fn quartic_minors(line: &LineA) -> Vec<([usize; 4], BinaryForm)> {
    let a = restricted_a_matrix(line);
    let mut out = Vec::with_capacity(15);
    for c0 in 0..6 {
        for c1 in c0 + 1..6 {
            for c2 in c1 + 1..6 {
                for c3 in c2 + 1..6 {
                    let cols = [c0, c1, c2, c3];
                    let sub: Vec<Vec<BinaryForm>> =
                        a.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
                    let mut det = cofactor_det(&sub);
                    if det.is_zero() {
                        det = BinaryForm::zero(line.field(), 4);
                    }
                    out.push((cols, det));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedPoint {
    pub point: ProjPoint,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticReport {
    /// Monic gcd of the quartic minors; the zero form if all minors vanish identically.
    pub gcd: BinaryForm,
    /// Roots of the gcd over the base field with the a-matrix rank there.
    pub roots: Vec<RankedPoint>,
}

impl HyperellipticReport {
    pub fn minors_vanish(&self) -> bool {
        self.gcd.is_zero()
    }

    pub fn rank3(&self) -> impl Iterator<Item = &RankedPoint> {
        self.roots.iter().filter(|r| r.rank == 3)
    }
}

pub fn hyperelliptic_points(line: &LineA) -> HyperellipticReport {
    let minors = quartic_minors(line);
    let gcd = BinaryForm::gcd_all(minors.iter().map(|(_, m)| m), line.field());
    let roots = gcd
        .roots()
        .unwrap_or_default()
        .into_iter()
        .map(|point| {
            let p = line.point_at(&point.s, &point.t).expect("nonzero parameter");
            RankedPoint {
                rank: rank_a(&p),
                point,
            }
        })
        .collect();
    HyperellipticReport { gcd, roots }
}

/// Per-line classification against the special loci.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberReport {
    pub line: LineA,
    pub torsion_points: Vec<TorsionHit>,
    pub contained_in: Vec<TorsionSpace>,
    pub hyperelliptic: HyperellipticReport,
    pub row_vanishing_points: Vec<RowHit>,
    pub rows_vanishing_identically: Vec<usize>,
    pub excluded_flag: bool,
    pub pencil: DegenerationProfile,
}

impl FiberReport {
    pub fn hyperelliptic_points(&self) -> Vec<&RankedPoint> {
        self.hyperelliptic.rank3().collect()
    }

    pub fn kernel_degrees(&self) -> Vec<usize> {
        self.pencil.degree_sequence()
    }

    /// No torsion, row-vanishing or low-rank points and a trivial minor gcd.
    pub fn is_empty(&self) -> bool {
        self.torsion_points.is_empty()
            && self.contained_in.is_empty()
            && self.row_vanishing_points.is_empty()
            && self.rows_vanishing_identically.is_empty()
            && self.hyperelliptic.gcd.degree() == 0
            && !self.hyperelliptic.gcd.is_zero()
            && !self.excluded_flag
    }

    pub fn to_json(&self) -> Value {
        let pt = |p: &ProjPoint| Value::String(p.to_string());
        json!({
            "torsion_points": self.torsion_points.iter().map(|h| json!({
                "point": pt(&h.point), "space": h.space.name()
            })).collect::<Vec<_>>(),
            "contained_in": self.contained_in.iter().map(|s| s.name()).collect::<Vec<_>>(),
            "minor_gcd": self.hyperelliptic.gcd.to_string(),
            "minors_vanish_identically": self.hyperelliptic.minors_vanish(),
            "gcd_roots": self.hyperelliptic.roots.iter().map(|r| json!({
                "point": pt(&r.point), "rank": r.rank
            })).collect::<Vec<_>>(),
            "hyperelliptic_points": self.hyperelliptic.rank3().map(|r| pt(&r.point)).collect::<Vec<_>>(),
            "row_vanishing_points": self.row_vanishing_points.iter().map(|h| json!({
                "point": pt(&h.point), "row": h.row
            })).collect::<Vec<_>>(),
            "rows_vanishing_identically": self.rows_vanishing_identically,
            "excluded_flag": self.excluded_flag,
            "kernel_degrees": self.kernel_degrees(),
            "rank_drop_points": self.pencil.blocks.iter().map(|b| match &b.rank_drop_points {
                Some(ps) => Value::Array(ps.iter().map(pt).collect()),
                None => Value::String("all".into()),
            }).collect::<Vec<_>>(),
            "empty": self.is_empty(),
        })
    }
}

/// Classifies a line of Q; every reported point is re-verified before returning.
pub fn classify_line(line: &LineA) -> GeometryResult<FiberReport> {
    if !line_in_q(line) {
        return Err(GeometryError::LineNotInQ);
    }
    let (torsion_points, contained_in) = torsion_intersections(line);
    let hyperelliptic = hyperelliptic_points(line);
    let (row_vanishing_points, rows_vanishing_identically) = row_vanishing_points(line);
    let at = |p: &ProjPoint| line.point_at(&p.s, &p.t).expect("nonzero parameter");
    for h in &torsion_points {
        assert!(h.space.contains(&at(&h.point)), "torsion point re-check");
    }
    for h in &row_vanishing_points {
        let p = at(&h.point);
        assert!(ROW_TRIPLES[h.row].iter().all(|&k| p.coords()[k].is_zero()), "row re-check");
    }
    let minors = quartic_minors(line);
    for r in &hyperelliptic.roots {
        assert!(minors.iter().all(|(_, m)| m.vanishes_at(&r.point)), "minor root re-check");
        assert_eq!(rank_a(&at(&r.point)), r.rank);
    }
    let excluded_flag = hyperelliptic.roots.iter().any(|r| {
        r.rank <= 2 && !TorsionSpace::ALL.iter().any(|s| s.contains(&at(&r.point)))
    });
    Ok(FiberReport {
        line: line.clone(),
        torsion_points,
        contained_in,
        hyperelliptic,
        row_vanishing_points,
        rows_vanishing_identically,
        excluded_flag,
        pencil: degeneration_profile(line),
    })
}

/// A signed coordinate permutation `a_ij -> sign * a_{s(i) s(j)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    pub sigma: [usize; 4],
    /// Sign attached to each source coordinate, in storage order.
    pub signs: [i8; NUM_COORDS],
}

impl SignedPerm {
    pub fn identity() -> Self {
        SignedPerm {
            sigma: [0, 1, 2, 3],
            signs: [1; NUM_COORDS],
        }
    }

    /// Target coordinate of source coordinate `c`.
    pub fn target(&self, c: usize) -> usize {
        let (i, j) = COORDS[c];
        coord(self.sigma[i], self.sigma[j])
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let sigma = other.sigma.map(|x| self.sigma[x]);
        let mut signs = [1i8; NUM_COORDS];
        for (c, s) in signs.iter_mut().enumerate() {
            *s = other.signs[c] * self.signs[other.target(c)];
        }
        SignedPerm { sigma, signs }
    }

    /// Acts on a point: the value at `c` moves to `target(c)` with its sign.
    pub fn apply(&self, p: &[FieldValue]) -> Vec<FieldValue> {
        let mut out = vec![p[0].spec().zero(); NUM_COORDS];
        for c in 0..NUM_COORDS {
            let v = &p[c];
            out[self.target(c)] = if self.signs[c] < 0 { -v } else { v.clone() };
        }
        out
    }

    /// Substitution images `a_c -> sign_c * a_target(c)` for polynomial composition.
    pub fn substitution(&self, field: FieldSpec) -> Vec<SparsePoly> {
        let vars = crate::geometry::a_vars();
        (0..NUM_COORDS)
            .map(|c| SparsePoly::var(&vars, field, self.target(c)).scale(&field.from_i64(self.signs[c] as i64)))
            .collect()
    }

    pub fn torsion_image(&self, t: TorsionSpace) -> TorsionSpace {
        let [(i, j), _] = t.partition();
        TorsionSpace::pairing(self.sigma[i], self.sigma[j])
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = (0..NUM_COORDS)
            .map(|c| {
                let sign = if self.signs[c] < 0 { "-" } else { "" };
                format!("{}->{}{}", COORD_NAMES[c], sign, COORD_NAMES[self.target(c)])
            })
            .collect();
        parts.join(" ")
    }
}

#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    pub elements: Vec<SignedPerm>,
    pub generators: Vec<SignedPerm>,
    /// For each element, the quadric permutation `k -> pi(k)` and signs `q_k -> eta_k q_pi(k)`.
    pub quadric_action: Vec<([usize; 4], [i8; 4])>,
    pub torsion_orbits: Vec<Vec<TorsionSpace>>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Solutions of a GF(2) system given as rows of bit-vectors with a right-hand side.
fn gf2_solutions(eqs: &[(u32, bool)], nvars: usize) -> Vec<u32> {
    let mut rows: Vec<(u32, bool)> = eqs.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        let bit = 1u32 << c;
        let Some(pr) = (r..rows.len()).find(|&i| rows[i].0 & bit != 0) else {
            continue;
        };
        rows.swap(r, pr);
        for i in 0..rows.len() {
            if i != r && rows[i].0 & bit != 0 {
                rows[i].0 ^= rows[r].0;
                rows[i].1 ^= rows[r].1;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|(m, b)| *m == 0 && *b) {
        return Vec::new();
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for mask in 0..(1u32 << free.len()) {
        let mut x = 0u32;
        for (k, &f) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                x |= 1 << f;
            }
        }
        for (i, &pc) in pivots.iter().enumerate() {
            let (m, b) = rows[i];
            let rest = (m & x & !(1 << pc)).count_ones() % 2 == 1;
            if b ^ rest {
                x |= 1 << pc;
            }
        }
        out.push(x);
    }
    out
}

/// All signed permutations mapping the set of quadrics to itself up to sign.
pub fn quadric_symmetries() -> SymmetryGroup {
    let mut elements = Vec::new();
    let mut quadric_action = Vec::new();
    for sigma in permutations4() {
        let probe = SignedPerm {
            sigma,
            signs: [1; NUM_COORDS],
        };
        // match quadric supports
        let support = |k: usize, f: &dyn Fn(usize) -> usize| -> BTreeSet<(usize, usize)> {
            QUADRIC_TERMS[k]
                .iter()
                .map(|t| {
                    let (x, y) = (f(t.x), f(t.y));
                    (x.min(y), x.max(y))
                })
                .collect()
        };
        let mut pi = [usize::MAX; 4];
        for (k, slot) in pi.iter_mut().enumerate() {
            let img = support(k, &|c| probe.target(c));
            if let Some(k2) = (0..4).find(|&k2| support(k2, &|c| c) == img) {
                *slot = k2;
            }
        }
        if pi.contains(&usize::MAX) {
            continue;
        }
        // unknowns: bits 0..12 coordinate signs, bits 12..16 quadric signs
        let mut eqs = Vec::new();
        for (k, terms) in QUADRIC_TERMS.iter().enumerate() {
            for t in terms {
                let (x, y) = (probe.target(t.x), probe.target(t.y));
                let tgt = QUADRIC_TERMS[pi[k]]
                    .iter()
                    .find(|u| (u.x == x && u.y == y) || (u.x == y && u.y == x))
                    .expect("support matched");
                let mask = (1u32 << t.x) ^ (1u32 << t.y) ^ (1u32 << (12 + k));
                eqs.push((mask, (t.sign < 0) != (tgt.sign < 0)));
            }
        }
        for sol in gf2_solutions(&eqs, 16) {
            let mut signs = [1i8; NUM_COORDS];
            for (c, s) in signs.iter_mut().enumerate() {
                if sol >> c & 1 == 1 {
                    *s = -1;
                }
            }
            let eta: [i8; 4] = std::array::from_fn(|k| if sol >> (12 + k) & 1 == 1 { -1 } else { 1 });
            elements.push(SignedPerm { sigma, signs });
            quadric_action.push((pi, eta));
        }
    }
    let generators = generating_set(&elements);
    let mut orbits: Vec<Vec<TorsionSpace>> = Vec::new();
    for t in TorsionSpace::ALL {
        if orbits.iter().any(|o| o.contains(&t)) {
            continue;
        }
        let orbit: BTreeSet<TorsionSpace> = elements.iter().map(|g| g.torsion_image(t)).collect();
        orbits.push(orbit.into_iter().collect());
    }
    SymmetryGroup {
        elements,
        generators,
        quadric_action,
        torsion_orbits: orbits,
    }
}

fn closure(gens: &[SignedPerm]) -> BTreeSet<SignedPerm> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([SignedPerm::identity()]);
    seen.insert(SignedPerm::identity());
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

fn generating_set(elements: &[SignedPerm]) -> Vec<SignedPerm> {
    let mut gens: Vec<SignedPerm> = Vec::new();
    let mut span = closure(&gens);
    for e in elements {
        if !span.contains(e) {
            gens.push(e.clone());
            span = closure(&gens);
            if span.len() == elements.len() {
                break;
            }
        }
    }
    gens
}

/// Checks a group element by exact polynomial identity: `q_k(g a) = eta_k q_pi(k)(a)`.
pub fn check_symmetry(g: &SignedPerm, action: &([usize; 4], [i8; 4]), field: FieldSpec) -> bool {
    let subs = g.substitution(field);
    let qs = quadrics(field);
    (0..4).all(|k| {
        let lhs = qs[k].compose(&subs).expect("12 images");
        let rhs = qs[action.0[k]].scale(&field.from_i64(action.1[k] as i64));
        lhs == rhs
    })
}

/// Summary of the induced action on torsion spaces, keyed by element index.
pub fn torsion_action_table(group: &SymmetryGroup) -> BTreeMap<usize, [TorsionSpace; 3]> {
    group
        .elements
        .iter()
        .enumerate()
        .map(|(i, g)| (i, TorsionSpace::ALL.map(|t| g.torsion_image(t))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survivor_sets() {
        let names = |v: &[usize]| v.iter().map(|&c| COORD_NAMES[c]).collect::<Vec<_>>();
        assert_eq!(names(&TorsionSpace::T01_23.survivors()), ["a32", "a23", "a10", "a01"]);
        assert_eq!(
            names(&TorsionSpace::T01_23.killed()),
            ["a31", "a30", "a21", "a20", "a13", "a12", "a03", "a02"]
        );
        assert_eq!(TorsionSpace::pairing(3, 1), TorsionSpace::T02_13);
        assert_eq!(TorsionSpace::pairing(1, 2), TorsionSpace::T03_12);
        assert_eq!("02|13".parse::<TorsionSpace>().unwrap(), TorsionSpace::T02_13);
        assert_eq!("T03_12".parse::<TorsionSpace>().unwrap(), TorsionSpace::T03_12);
    }

    #[test]
    fn quadrics_vanish_on_torsion_spaces() {
        for t in TorsionSpace::ALL {
            assert!(t.restricted_quadrics(FieldSpec::Rational).iter().all(SparsePoly::is_zero));
        }
    }

    #[test]
    fn gf2_solver() {
        // x0 + x1 = 1, x1 = 1
        let sols = gf2_solutions(&[(0b11, true), (0b10, true)], 2);
        assert_eq!(sols, vec![0b10]);
        assert!(gf2_solutions(&[(0b1, true), (0b1, false)], 1).is_empty());
    }
}
