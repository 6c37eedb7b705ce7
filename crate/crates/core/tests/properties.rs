use godeaux_lines::binary::BinaryForm;
use godeaux_lines::families::z5::z5_component_counts;
use godeaux_lines::field::{FieldSpec, FieldValue};
use godeaux_lines::geometry::{
    eval_quadric, line_in_q, pfaffian4, polarization_raw, skew4, tangent_space, LineA, COORD_NAMES, NUM_COORDS,
};
use godeaux_lines::linalg::Matrix;
use godeaux_lines::poly::{SparsePoly, VarTable};
use godeaux_lines::sampler::{random_point_on_q, sample_line, SamplerConfig, Strategy as Sampling};
use godeaux_lines::strata::{classify_line, TorsionSpace};
use proptest::prelude::*;

const P: u64 = 31;

fn fp() -> FieldSpec {
    FieldSpec::Prime(P)
}

fn elt(field: FieldSpec) -> impl Strategy<Value = FieldValue> {
    (-40i64..40).prop_map(move |n| field.from_i64(n))
}

fn any_field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Rational), Just(FieldSpec::Prime(31)), Just(FieldSpec::Prime(10007))]
}

fn vector(field: FieldSpec, n: usize) -> impl Strategy<Value = Vec<FieldValue>> {
    proptest::collection::vec(elt(field), n)
}

/// Small polynomials in three variables as coefficient/exponent lists.
fn poly3() -> impl Strategy<Value = Vec<(i64, [u32; 3])>> {
    proptest::collection::vec((-5i64..5, [0u32..3, 0u32..3, 0u32..3]), 0..5)
}

fn build(terms: &[(i64, [u32; 3])]) -> SparsePoly {
    let vars = VarTable::new(&["x", "y", "z"]).unwrap();
    let field = FieldSpec::Rational;
    terms.iter().fold(SparsePoly::zero(&vars, field), |acc, (c, e)| {
        let m = godeaux_lines::poly::Monomial(e.to_vec());
        &acc + &SparsePoly::monomial(&vars, field.from_i64(*c), m)
    })
}

fn sampled_line(seed: u64) -> LineA {
    let strategy = match seed % 3 {
        0 => Sampling::Generic,
        1 => Sampling::Torsion(TorsionSpace::T01_23),
        _ => Sampling::TwoTorsion(TorsionSpace::T01_23, TorsionSpace::T03_12),
    };
    sample_line(strategy, fp(), seed, &SamplerConfig::default()).unwrap().line
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_inverse(f in any_field(), a in -1000i64..1000) {
        let x = f.from_i64(a);
        prop_assume!(!x.is_zero());
        prop_assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn field_distributive(f in any_field(), a in -99i64..99, b in -99i64..99, c in -99i64..99) {
        let (a, b, c) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn ring_axioms(a in poly3(), b in poly3(), c in poly3()) {
        let (a, b, c) = (build(&a), build(&b), build(&c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn eval_of_compose(a in poly3(), g in proptest::collection::vec(poly3(), 3), x in vector(FieldSpec::Rational, 3)) {
        let f = build(&a);
        let g: Vec<SparsePoly> = g.iter().map(|t| build(t)).collect();
        let inner: Vec<FieldValue> = g.iter().map(|gi| gi.eval(&x).unwrap()).collect();
        prop_assert_eq!(f.compose(&g).unwrap().eval(&x).unwrap(), f.eval(&inner).unwrap());
    }

    #[test]
    fn multidegree_additive(a in poly3(), b in poly3()) {
        let (a, b) = (build(&a), build(&b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.total_degree().unwrap(), a.total_degree().unwrap() + b.total_degree().unwrap());
    }

    #[test]
    fn kernel_vectors_are_killed(rows in proptest::collection::vec(vector(fp(), 6), 1..5)) {
        let m = Matrix::from_rows(fp(), rows);
        let ker = m.nullspace();
        prop_assert_eq!(ker.len() + m.rank(), 6);
        for v in ker {
            prop_assert!(m.mul_vec(&v).iter().all(FieldValue::is_zero));
        }
    }

    #[test]
    fn pfaffian_squared_is_determinant(f in any_field(), u in proptest::collection::vec(-50i64..50, 6)) {
        let upper: [FieldValue; 6] = std::array::from_fn(|i| f.from_i64(u[i]));
        let m = skew4(upper, f.zero());
        let pf = pfaffian4(&m).unwrap();
        let det = Matrix::from_rows(f, m.iter().map(|r| r.to_vec()).collect()).determinant();
        prop_assert_eq!(&pf * &pf, det);
    }

    #[test]
    fn polarization_laws(
        k in 0usize..4,
        p in vector(fp(), NUM_COORDS),
        q in vector(fp(), NUM_COORDS),
        r in vector(fp(), NUM_COORDS),
        c in elt(fp()),
    ) {
        prop_assert_eq!(polarization_raw(k, &p, &q), polarization_raw(k, &q, &p));
        let lin: Vec<FieldValue> = q.iter().zip(&r).map(|(a, b)| a + &(&c * b)).collect();
        prop_assert_eq!(
            polarization_raw(k, &p, &lin),
            &polarization_raw(k, &p, &q) + &(&c * &polarization_raw(k, &p, &r))
        );
        prop_assert_eq!(polarization_raw(k, &p, &p), &fp().from_i64(2) * &eval_quadric(k, &p));
    }

    #[test]
    fn tangent_vectors_are_orthogonal(seed in 0u64..1000) {
        let p = random_point_on_q(fp(), seed, &SamplerConfig::default()).unwrap();
        for v in tangent_space(&p).unwrap() {
            for k in 0..4 {
                prop_assert!(polarization_raw(k, p.coords(), &v).is_zero());
            }
        }
    }

    #[test]
    fn binary_gcd_divides(a in proptest::collection::vec(-9i64..9, 1..6), b in proptest::collection::vec(-9i64..9, 1..6), c in proptest::collection::vec(-9i64..9, 1..4)) {
        let f = fp();
        let (a, b, c) = (BinaryForm::from_i64(f, &a), BinaryForm::from_i64(f, &c).mul_form(&BinaryForm::from_i64(f, &b)), BinaryForm::from_i64(f, &c));
        let a = a.mul_form(&c);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = a.gcd(&b);
        prop_assert!(!g.is_zero());
        prop_assert!(g.degree() >= c.normalized().degree() || c.is_zero());
        for root in g.roots().unwrap() {
            prop_assert!(a.vanishes_at(&root) && b.vanishes_at(&root));
        }
        // every common rational root of a and b is a root of g
        for i in 0..=P {
            let (s, t) = if i == P { (f.zero(), f.one()) } else { (f.one(), f.from_i64(i as i64)) };
            if a.eval(&s, &t).is_zero() && b.eval(&s, &t).is_zero() {
                prop_assert!(g.eval(&s, &t).is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classification_is_gl2_invariant(seed in 0u64..500, g in proptest::collection::vec(1i64..31, 4)) {
        let f = fp();
        let g = [[f.from_i64(g[0]), f.from_i64(g[1])], [f.from_i64(g[2]), f.from_i64(g[3])]];
        let det = &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[1][0]);
        prop_assume!(!det.is_zero());
        let l = sampled_line(seed);
        let m = l.reparametrized(g).unwrap();
        prop_assert!(line_in_q(&m));
        prop_assert_eq!(&l, &m);
        let (a, b) = (classify_line(&l).unwrap(), classify_line(&m).unwrap());
        let pts = |r: &godeaux_lines::strata::FiberReport, line: &LineA| {
            let mut v: Vec<String> = r.torsion_points.iter().map(|h| {
                format!("{} {}", h.space, line.point_at(&h.point.s, &h.point.t).unwrap().normalized())
            }).collect();
            v.sort();
            v
        };
        prop_assert_eq!(pts(&a, &l), pts(&b, &m));
        prop_assert_eq!(a.hyperelliptic_points().len(), b.hyperelliptic_points().len());
        prop_assert_eq!(a.kernel_degrees(), b.kernel_degrees());
        prop_assert_eq!(a.hyperelliptic.gcd.degree(), b.hyperelliptic.gcd.degree());
    }
}

#[test]
fn z5_component_totals() {
    let pairs = [
        (TorsionSpace::T01_23, TorsionSpace::T02_13),
        (TorsionSpace::T02_13, TorsionSpace::T03_12),
        (TorsionSpace::T03_12, TorsionSpace::T01_23),
    ];
    for (a, b) in pairs {
        let c = z5_component_counts(a, b, FieldSpec::Rational).unwrap();
        assert_eq!(c.counts.values().sum::<usize>(), 14);
        assert_eq!(c.components.len(), 14);
    }
}

#[test]
fn coordinate_names_are_distinct() {
    let mut names = COORD_NAMES.to_vec();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), NUM_COORDS);
}
