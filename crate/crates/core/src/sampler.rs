//! Seeded construction of lines in Q.
//!
//! Points of Q over a small prime field are found by solving three of the quadrics for
//! one coordinate each and rejecting on the fourth. A partner `q` of `p` is a point of
//! the tangent cone `T_pQ ∩ Q`: random lines in `T_pQ` are intersected with `q0 = 0`
//! and the remaining quadrics are checked. Both searches are brute force; the partner
//! step costs about `p^3` trials, the second hyperelliptic point about `p^2 / 7`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{FieldSpec, FieldValue, Fp};
use crate::families::hyp::{HypParam, PARAM_NAMES as HYP_PARAMS};
use crate::families::z5::z5_component_counts;
use crate::geometry::{coord, line_in_q, LineA, PointA, NUM_COORDS, QUADRIC_TERMS};
use crate::linalg::{fp_nullspace, fp_rank};
use crate::strata::{classify_line, FiberReport, TorsionSpace};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_BRUTE_FORCE_CUTOFF: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("search budget exhausted after {trials} trials")]
    BudgetExhausted { trials: u64 },
    #[error("brute-force search needs a prime field of size at most {cutoff}, got {field}")]
    FieldTooLarge { field: FieldSpec, cutoff: u64 },
    #[error("strategy {0} needs a prime field")]
    NeedsPrimeField(Strategy),
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("torsion spaces must be distinct")]
    SameSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Generic,
    Torsion(TorsionSpace),
    TwoTorsion(TorsionSpace, TorsionSpace),
    Hyp,
    TwoHyp,
}

impl Strategy {
    pub fn needs_brute_force(&self) -> bool {
        !matches!(self, Strategy::TwoTorsion(..))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Generic => write!(f, "generic"),
            Strategy::Torsion(t) => write!(f, "torsion:{}", t.name()),
            Strategy::TwoTorsion(a, b) => write!(f, "two-torsion:{},{}", a.name(), b.name()),
            Strategy::Hyp => write!(f, "hyp"),
            Strategy::TwoHyp => write!(f, "two-hyp"),
        }
    }
}

impl FromStr for Strategy {
    type Err = SampleError;

    /// `generic`, `torsion[:01|23]`, `two-torsion[:01|23,02|13]`, `hyp`, `two-hyp`.
    fn from_str(s: &str) -> Result<Self, SampleError> {
        let unknown = || SampleError::UnknownStrategy(s.to_string());
        let space = |t: &str| t.parse::<TorsionSpace>().map_err(|_| unknown());
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let head = head.strip_prefix("through-").unwrap_or(head);
        match (head, arg) {
            ("generic", None) => Ok(Strategy::Generic),
            ("hyp", None) => Ok(Strategy::Hyp),
            ("two-hyp", None) => Ok(Strategy::TwoHyp),
            ("torsion", None) => Ok(Strategy::Torsion(TorsionSpace::T01_23)),
            ("torsion", Some(a)) => Ok(Strategy::Torsion(space(a)?)),
            ("two-torsion", None) => Ok(Strategy::TwoTorsion(TorsionSpace::T01_23, TorsionSpace::T02_13)),
            ("two-torsion", Some(a)) => {
                let (x, y) = a.split_once(',').ok_or_else(unknown)?;
                let (x, y) = (space(x)?, space(y)?);
                if x == y {
                    return Err(SampleError::SameSpace);
                }
                Ok(Strategy::TwoTorsion(x, y))
            }
            _ => Err(unknown()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    /// Maximum number of trials per line, summed over all search steps.
    pub budget: u64,
    /// Largest prime for which brute-force strategies are attempted.
    pub brute_force_cutoff: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            budget: DEFAULT_BUDGET,
            brute_force_cutoff: DEFAULT_BRUTE_FORCE_CUTOFF,
        }
    }
}

/// A sampled line with its classification and the number of trials spent.
#[derive(Debug, Clone)]
pub struct Sample {
    pub line: LineA,
    pub strategy: Strategy,
    pub seed: u64,
    pub trials: u64,
    pub report: FiberReport,
}

struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn spend(&mut self) -> Result<(), SampleError> {
        self.used += 1;
        if self.used > self.limit {
            Err(SampleError::BudgetExhausted { trials: self.limit })
        } else {
            Ok(())
        }
    }
}

fn quad(fp: Fp, k: usize, v: &[u64]) -> u64 {
    QUADRIC_TERMS[k].iter().fold(0, |acc, t| {
        let m = fp.mul(v[t.x], v[t.y]);
        if t.sign < 0 {
            fp.sub(acc, m)
        } else {
            fp.add(acc, m)
        }
    })
}

fn polar(fp: Fp, k: usize, v: &[u64], u: &[u64]) -> u64 {
    QUADRIC_TERMS[k].iter().fold(0, |acc, t| {
        let m = fp.add(fp.mul(v[t.x], u[t.y]), fp.mul(v[t.y], u[t.x]));
        if t.sign < 0 {
            fp.sub(acc, m)
        } else {
            fp.add(acc, m)
        }
    })
}

fn jacobian_rows(fp: Fp, p: &[u64]) -> Vec<Vec<u64>> {
    (0..4)
        .map(|k| {
            (0..NUM_COORDS)
                .map(|c| {
                    let mut e = vec![0; NUM_COORDS];
                    e[c] = 1;
                    polar(fp, k, p, &e)
                })
                .collect()
        })
        .collect()
}

fn to_values(fp: Fp, v: &[u64]) -> Vec<FieldValue> {
    v.iter().map(|&x| fp.value(x)).collect()
}

/// A random point of Q with Jacobian rank 4.
fn point_on_q<R: Rng>(fp: Fp, rng: &mut R, budget: &mut Budget) -> Result<Vec<u64>, SampleError> {
    let (a32, a02, a10) = (coord(3, 2), coord(0, 2), coord(1, 0));
    let (a31, a03, a13) = (coord(3, 1), coord(0, 3), coord(1, 3));
    loop {
        budget.spend()?;
        let mut v: Vec<u64> = (0..NUM_COORDS).map(|_| rng.gen_range(0..fp.p)).collect();
        if v[a31] == 0 || v[a03] == 0 || v[a13] == 0 {
            continue;
        }
        let g = |v: &[u64], i, j| v[coord(i, j)];
        // q0 = a12 a13 - a21 a23 + a31 a32
        v[a32] = fp.mul(fp.sub(fp.mul(g(&v, 2, 1), g(&v, 2, 3)), fp.mul(g(&v, 1, 2), v[a13])), fp.inv(v[a31]));
        // q1 = a02 a03 - a30 a32 + a20 a23
        v[a02] = fp.mul(fp.sub(fp.mul(g(&v, 3, 0), v[a32]), fp.mul(g(&v, 2, 0), g(&v, 2, 3))), fp.inv(v[a03]));
        // q2 = a10 a13 - a01 a03 + a30 a31
        v[a10] = fp.mul(fp.sub(fp.mul(g(&v, 0, 1), v[a03]), fp.mul(g(&v, 3, 0), v[a31])), fp.inv(v[a13]));
        if (0..4).all(|k| quad(fp, k, &v) == 0) && fp_rank(fp, &jacobian_rows(fp, &v)) == 4 {
            return Ok(v);
        }
    }
}

/// A point `q` of the tangent cone at `p` with `q` not proportional to `p`.
fn tangent_partner<R: Rng>(fp: Fp, p: &[u64], rng: &mut R, budget: &mut Budget) -> Result<Vec<u64>, SampleError> {
    let basis = fp_nullspace(fp, &jacobian_rows(fp, p), NUM_COORDS);
    let combo = |rng: &mut R| -> Vec<u64> {
        let mut v = vec![0; NUM_COORDS];
        for b in &basis {
            let r = rng.gen_range(0..fp.p);
            for (x, y) in v.iter_mut().zip(b) {
                *x = fp.add(*x, fp.mul(r, *y));
            }
        }
        v
    };
    loop {
        budget.spend()?;
        let v = combo(rng);
        let u = combo(rng);
        let Some(roots) = fp.quadratic_roots(quad(fp, 0, &v), polar(fp, 0, &v, &u), quad(fp, 0, &u)) else {
            continue;
        };
        for l in roots {
            let w: Vec<u64> = v.iter().zip(&u).map(|(&a, &b)| fp.add(a, fp.mul(l, b))).collect();
            if (1..4).all(|k| quad(fp, k, &w) == 0) && fp_rank(fp, &[p.to_vec(), w.clone()]) == 2 {
                return Ok(w);
            }
        }
    }
}

fn check_brute_force(field: FieldSpec, strategy: Strategy, config: &SamplerConfig) -> Result<Fp, SampleError> {
    match field {
        FieldSpec::Rational => Err(SampleError::NeedsPrimeField(strategy)),
        FieldSpec::Prime(p) if p > config.brute_force_cutoff => Err(SampleError::FieldTooLarge {
            field,
            cutoff: config.brute_force_cutoff,
        }),
        FieldSpec::Prime(p) => Ok(Fp::new(p)),
    }
}

/// Polynomial components compiled to residue arithmetic.
struct FpMap {
    fp: Fp,
    nvars: usize,
    max_exp: usize,
    terms: Vec<Vec<(u64, Vec<u32>)>>,
}

impl FpMap {
    fn new(fp: Fp, comps: &[crate::poly::SparsePoly]) -> Self {
        let terms: Vec<Vec<(u64, Vec<u32>)>> = comps
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(m, v)| (v.residue().expect("prime field"), m.exponents().to_vec()))
                    .collect()
            })
            .collect();
        let max_exp = terms
            .iter()
            .flatten()
            .flat_map(|(_, e)| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        FpMap {
            fp,
            nvars: comps[0].vars().len(),
            max_exp,
            terms,
        }
    }

    fn eval(&self, x: &[u64]) -> Vec<u64> {
        let fp = self.fp;
        let pows: Vec<Vec<u64>> = x
            .iter()
            .map(|&v| {
                let mut p = vec![1u64; self.max_exp + 1];
                for i in 1..=self.max_exp {
                    p[i] = fp.mul(p[i - 1], v);
                }
                p
            })
            .collect();
        self.terms
            .iter()
            .map(|ts| {
                ts.iter().fold(0, |acc, (c, e)| {
                    let m = e.iter().enumerate().fold(*c, |m, (i, &k)| fp.mul(m, pows[i][k as usize]));
                    fp.add(acc, m)
                })
            })
            .collect()
    }

    fn random_params<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.nvars).map(|_| rng.gen_range(0..self.fp.p)).collect()
    }
}

fn hyp_image<R: Rng>(map: &FpMap, rng: &mut R, budget: &mut Budget) -> Result<Vec<u64>, SampleError> {
    let fp = map.fp;
    loop {
        budget.spend()?;
        let v = map.eval(&map.random_params(rng));
        if v.iter().any(|&x| x != 0) && fp_rank(fp, &jacobian_rows(fp, &v)) == 4 {
            return Ok(v);
        }
    }
}

/// A second point of the hyperelliptic locus in the tangent space of `p`.
///
/// For fixed `(v, w, x, y)` the image is `c_k z0^e_k z1^(2-e_k)`, so the conditions
/// `B_i(p, q(z)) = 0` are four binary quadratics in `z`; a common root gives `q`.
fn hyp_partner<R: Rng>(
    map: &FpMap,
    exps: &[u32],
    p: &[u64],
    rng: &mut R,
    budget: &mut Budget,
) -> Result<Vec<u64>, SampleError> {
    let fp = map.fp;
    let jac = jacobian_rows(fp, p);
    let (iz0, iz1) = (HYP_PARAMS.len() - 2, HYP_PARAMS.len() - 1);
    loop {
        budget.spend()?;
        let mut params = map.random_params(rng);
        params[iz0] = 1;
        params[iz1] = 1;
        let c = map.eval(&params);
        // A_i[e] = sum over k with e_k = e of B_i(p, e_k) c_k; form is sum_e A_i[e] z0^e z1^(2-e)
        let forms: Vec<[u64; 3]> = jac
            .iter()
            .map(|row| {
                let mut a = [0u64; 3];
                for k in 0..NUM_COORDS {
                    let e = exps[k] as usize;
                    a[e] = fp.add(a[e], fp.mul(row[k], c[k]));
                }
                a
            })
            .collect();
        // candidate roots: z = (1, 0) and z = (z0, 1)
        let mut candidates: Vec<(u64, u64)> = Vec::new();
        if forms.iter().all(|a| a[2] == 0) {
            candidates.push((1, 0));
        }
        match forms.iter().find(|a| a.iter().any(|&x| x != 0)) {
            None => candidates.push((1, 1)),
            Some(a) => {
                if let Some(rs) = fp.quadratic_roots(a[0], a[1], a[2]) {
                    candidates.extend(rs.into_iter().map(|r| (r, 1)));
                }
            }
        }
        for (z0, z1) in candidates {
            let ok = forms.iter().all(|a| {
                let v = fp.add(
                    fp.add(fp.mul(a[0], fp.mul(z1, z1)), fp.mul(a[1], fp.mul(z0, z1))),
                    fp.mul(a[2], fp.mul(z0, z0)),
                );
                v == 0
            });
            if !ok {
                continue;
            }
            params[iz0] = z0;
            params[iz1] = z1;
            let q = map.eval(&params);
            if q.iter().any(|&x| x != 0) && fp_rank(fp, &[p.to_vec(), q.clone()]) == 2 {
                return Ok(q);
            }
        }
    }
}

fn accepts(strategy: Strategy, r: &FiberReport) -> bool {
    let hyp = r.hyperelliptic_points().len();
    match strategy {
        Strategy::Generic => r.is_empty() && r.hyperelliptic.gcd.degree() == 0,
        Strategy::Torsion(t) => {
            r.contained_in.is_empty() && r.torsion_points.len() == 1 && r.torsion_points[0].space == t
        }
        Strategy::TwoTorsion(a, b) => {
            let mut s: Vec<_> = r.torsion_points.iter().map(|h| h.space).collect();
            s.sort();
            let mut e = vec![a, b];
            e.sort();
            r.contained_in.is_empty() && s == e
        }
        Strategy::Hyp => hyp == 1,
        Strategy::TwoHyp => hyp == 2,
    }
}

fn line_from(fp: Fp, p: &[u64], q: &[u64]) -> LineA {
    LineA::new(to_values(fp, p), to_values(fp, q)).expect("independent rows")
}

/// One line for `strategy`, reproducible from `seed`.
pub fn sample_line(strategy: Strategy, field: FieldSpec, seed: u64, config: &SamplerConfig) -> Result<Sample, SampleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budget = Budget {
        used: 0,
        limit: config.budget,
    };
    let hyp = match (strategy, field) {
        (Strategy::Hyp | Strategy::TwoHyp, FieldSpec::Prime(p)) => {
            let param = HypParam::new(field);
            Some((FpMap::new(Fp::new(p), &param.components), param.z0_exponents()))
        }
        _ => None,
    };
    loop {
        let line = match strategy {
            Strategy::TwoTorsion(a, b) => two_torsion_line(a, b, field, &mut rng, &mut budget)?,
            _ => {
                let fp = check_brute_force(field, strategy, config)?;
                let p = match strategy {
                    Strategy::Generic => point_on_q(fp, &mut rng, &mut budget)?,
                    Strategy::Torsion(t) => torsion_point(fp, t, &mut rng, &mut budget)?,
                    _ => hyp_image(&hyp.as_ref().expect("hyp map").0, &mut rng, &mut budget)?,
                };
                let q = match strategy {
                    Strategy::TwoHyp => {
                        let (map, exps) = hyp.as_ref().expect("hyp map");
                        hyp_partner(map, exps, &p, &mut rng, &mut budget)?
                    }
                    _ => tangent_partner(fp, &p, &mut rng, &mut budget)?,
                };
                line_from(fp, &p, &q)
            }
        };
        assert!(line_in_q(&line), "sampled line must lie in Q");
        let report = classify_line(&line).expect("line in Q");
        if accepts(strategy, &report) {
            return Ok(Sample {
                line,
                strategy,
                seed,
                trials: budget.used,
                report,
            });
        }
    }
}

fn torsion_point<R: Rng>(fp: Fp, t: TorsionSpace, rng: &mut R, budget: &mut Budget) -> Result<Vec<u64>, SampleError> {
    loop {
        budget.spend()?;
        let mut v = vec![0; NUM_COORDS];
        for c in t.survivors() {
            v[c] = rng.gen_range(1..fp.p);
        }
        if fp_rank(fp, &jacobian_rows(fp, &v)) == 4 {
            return Ok(v);
        }
    }
}

/// A line on a random `P1 x P1` component joining the two spaces.
fn two_torsion_line<R: Rng>(
    a: TorsionSpace,
    b: TorsionSpace,
    field: FieldSpec,
    rng: &mut R,
    budget: &mut Budget,
) -> Result<LineA, SampleError> {
    let counts = z5_component_counts(a, b, field).map_err(|_| SampleError::SameSpace)?;
    let comps: Vec<_> = counts.components.iter().filter(|c| c.kind() == "P1xP1").collect();
    loop {
        budget.spend()?;
        let comp = comps[rng.gen_range(0..comps.len())];
        let mut p = vec![field.zero(); NUM_COORDS];
        let mut q = p.clone();
        for &c in &comp.a_survivors {
            p[c] = field.random_nonzero(rng, 20);
        }
        for &c in &comp.b_survivors {
            q[c] = field.random_nonzero(rng, 20);
        }
        if let Ok(l) = LineA::new(p, q) {
            return Ok(l);
        }
    }
}

/// `count` lines with seeds `seed, seed + 1, ..`, in parallel; order follows the seeds.
pub fn sample_many(
    strategy: Strategy,
    field: FieldSpec,
    seed: u64,
    count: usize,
    config: &SamplerConfig,
) -> Vec<Result<Sample, SampleError>> {
    use rayon::prelude::*;
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_line(strategy, field, seed.wrapping_add(i), config))
        .collect()
}

/// A random point of Q over a small prime field (exposed for tests and examples).
pub fn random_point_on_q(field: FieldSpec, seed: u64, config: &SamplerConfig) -> Result<PointA, SampleError> {
    let fp = check_brute_force(field, Strategy::Generic, config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budget = Budget {
        used: 0,
        limit: config.budget,
    };
    let v = point_on_q(fp, &mut rng, &mut budget)?;
    Ok(PointA::new(to_values(fp, &v)).expect("nonzero"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_round_trip() {
        for s in ["generic", "hyp", "two-hyp", "torsion:02|13", "two-torsion:01|23,03|12"] {
            let st: Strategy = s.parse().unwrap();
            assert_eq!(st.to_string(), s);
        }
        assert!("two-torsion:01|23,01|23".parse::<Strategy>().is_err());
        assert_eq!("through-hyp".parse::<Strategy>(), Ok(Strategy::Hyp));
    }

    #[test]
    fn generic_line_over_f31() {
        let s = sample_line(Strategy::Generic, FieldSpec::Prime(31), 7, &SamplerConfig::default()).unwrap();
        assert!(line_in_q(&s.line));
        assert!(s.report.is_empty());
        assert_eq!(s.report.kernel_degrees(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn large_field_rejected() {
        let e = sample_line(Strategy::Generic, FieldSpec::Prime(10007), 0, &SamplerConfig::default());
        assert!(matches!(e, Err(SampleError::FieldTooLarge { .. })));
        let e = sample_line(Strategy::Hyp, FieldSpec::Rational, 0, &SamplerConfig::default());
        assert!(matches!(e, Err(SampleError::NeedsPrimeField(_))));
    }

    #[test]
    fn budget_is_reported() {
        let cfg = SamplerConfig {
            budget: 3,
            ..Default::default()
        };
        let e = sample_line(Strategy::Generic, FieldSpec::Prime(31), 1, &cfg);
        assert_eq!(e.unwrap_err(), SampleError::BudgetExhausted { trials: 3 });
    }
}
