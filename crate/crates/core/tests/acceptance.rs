//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Where a criterion has an independent oracle it is computed here from first
//! principles (direct evaluation, coefficient linear algebra) rather than through the
//! library routine under test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use godeaux_lines::cli::run_with;
use godeaux_lines::families::{hyp, para_v2, z3, z5};
use godeaux_lines::field::{FieldSpec, FieldValue};
use godeaux_lines::geometry::{
    canonical_pfaffian_matrix, pfaffian4, quadrics, skew4, LineA, PointA, COORD_NAMES, NUM_COORDS,
    QUADRIC_TEXT, ROW_TRIPLES,
};
use godeaux_lines::linalg::Matrix;
use godeaux_lines::poly::{SparsePoly, VarTable};
use godeaux_lines::sampler::{sample_line, SamplerConfig, Strategy};
use godeaux_lines::strata::{classify_line, TorsionSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = start.elapsed();
    ensure(e <= limit, format!("{what} took {e:?}, limit {limit:?}"))
}

/// Quadrics of a point computed straight from the printed texts.
fn printed_quadrics_at(p: &[FieldValue]) -> Vec<FieldValue> {
    let field = p[0].spec();
    let vars = VarTable::new(&COORD_NAMES).unwrap();
    QUADRIC_TEXT
        .iter()
        .map(|t| SparsePoly::parse(t, &vars, field).unwrap().eval(p).unwrap())
        .collect()
}

/// A line lies in Q iff each `q_i(p + t q)` vanishes at three values of `t`.
fn three_point_oracle(l: &LineA) -> bool {
    let field = l.field();
    let [p, q] = l.rows();
    (0..3).all(|t| {
        let t = field.from_i64(t);
        let x: Vec<FieldValue> = p.iter().zip(q).map(|(a, b)| a + &(&t * b)).collect();
        printed_quadrics_at(&x).iter().all(FieldValue::is_zero)
    })
}

fn a_matrix_rank(x: &[FieldValue]) -> usize {
    let field = x[0].spec();
    let mut rows = vec![vec![field.zero(); 6]; 4];
    // columns of the a-matrix are the pairs 01 02 12 03 13 23; entry (i, {j,k}) is a_il
    // for the remaining index; that pattern is read from the row triples
    let cols = [[0, 1, 3], [0, 2, 4], [1, 2, 5], [3, 4, 5]];
    for (i, triple) in ROW_TRIPLES.iter().enumerate() {
        for (slot, &c) in triple.iter().enumerate() {
            rows[i][cols[i][slot]] = x[c].clone();
        }
    }
    Matrix::from_rows(field, rows).rank()
}

/// Per block: does a constant kernel vector exist (nullspace of the stacked `s`- and
/// `t`-coefficient matrices)?
fn constant_kernel_per_block(l: &LineA) -> Vec<bool> {
    let field = l.field();
    let [p, q] = l.rows();
    ROW_TRIPLES
        .iter()
        .map(|tr| {
            let skew = |r: [FieldValue; 3]| -> Vec<Vec<FieldValue>> {
                let z = field.zero();
                vec![
                    vec![z.clone(), r[2].clone(), -r[1].clone()],
                    vec![-r[2].clone(), z.clone(), r[0].clone()],
                    vec![r[1].clone(), -r[0].clone(), z],
                ]
            };
            let mut rows = skew(tr.map(|c| p[c].clone()));
            rows.extend(skew(tr.map(|c| q[c].clone())));
            !Matrix::from_rows(field, rows).nullspace().is_empty()
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for field in [FieldSpec::Prime(101), FieldSpec::Rational] {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let upper = [(); 6].map(|_| field.random(&mut rng, 50));
            let m = skew4(upper, field.zero());
            let pf = pfaffian4(&m).map_err(|e| e.to_string())?;
            let det = Matrix::from_rows(field, m.iter().map(|r| r.to_vec()).collect()).determinant();
            ensure(&pf * &pf == det, format!("pf^2 != det over {field}"))?;
        }
    }
    let vars = VarTable::new(&COORD_NAMES).unwrap();
    for k in 0..4 {
        let pf = pfaffian4(&canonical_pfaffian_matrix(k, FieldSpec::Rational)).map_err(|e| e.to_string())?;
        let printed = SparsePoly::parse(QUADRIC_TEXT[k], &vars, FieldSpec::Rational).unwrap();
        ensure(pf.embed(&vars).unwrap() == printed, format!("M{k} does not give q{k}"))?;
    }
    within(start, Duration::from_secs(1), "criterion 1")?;
    Ok("pf^2 = det on 200 matrices; M0..M3 give the four quadrics".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let vars = VarTable::new(&COORD_NAMES).unwrap();
    for t in TorsionSpace::ALL {
        let images: Vec<SparsePoly> = (0..NUM_COORDS)
            .map(|c| {
                if t.survivors().contains(&c) {
                    SparsePoly::var(&vars, FieldSpec::Rational, c)
                } else {
                    SparsePoly::zero(&vars, FieldSpec::Rational)
                }
            })
            .collect();
        for q in quadrics(FieldSpec::Rational) {
            ensure(q.compose(&images).unwrap().is_zero(), format!("a quadric survives on {t}"))?;
        }
    }
    let killed: Vec<&str> = TorsionSpace::T01_23.killed().iter().map(|&c| COORD_NAMES[c]).collect();
    ensure(
        killed == ["a31", "a30", "a21", "a20", "a13", "a12", "a03", "a02"],
        format!("killed set {killed:?}"),
    )?;
    within(start, Duration::from_secs(1), "criterion 2")?;
    Ok("quadrics vanish on all three P^3's; killed set of T01|23 matches".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let q = hyp::HypParam::new(FieldSpec::Rational);
    let sym = quadrics(FieldSpec::Rational);
    let vars = hyp::param_vars();
    for (k, qk) in sym.iter().enumerate() {
        let comp = qk.compose(&q.components).map_err(|e| e.to_string())?;
        ensure(comp.vars() == &vars && comp.is_zero(), format!("q{k} o phi != 0"))?;
    }
    within(start, Duration::from_secs(30), "symbolic check")?;

    // direct evaluation oracle over Q
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let params: Vec<FieldValue> = (0..10).map(|_| FieldSpec::Rational.random(&mut rng, 9)).collect();
        let img = q.eval(&params).map_err(|e| e.to_string())?;
        ensure(printed_quadrics_at(&img).iter().all(FieldValue::is_zero), "q_i(phi(x)) != 0")?;
    }

    let f = FieldSpec::Prime(10007);
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let cert = hyp::verify_components(&hyp::HypParam::new(f), 20, &mut rng);
    for name in ["jacobian-rank-6", "rank-a-3"] {
        let c = cert.get(name).ok_or("missing check")?;
        ensure(c.passed, format!("{name}: {}", c.detail))?;
    }
    // independent rank of the a-matrix at 20 fresh images
    let pf = hyp::HypParam::new(f);
    let mut n = 0;
    while n < 20 {
        let params = pf.random_params(&mut rng);
        if let Ok(p) = pf.point(&params) {
            ensure(a_matrix_rank(p.coords()) == 3, "rank_a != 3 at an image point")?;
            n += 1;
        }
    }
    let w = q.point(&hyp::worked_example_params(FieldSpec::Rational)).map_err(|e| e.to_string())?;
    let expected = PointA::from_i64(FieldSpec::Rational, &[2, 2, -24, -1, -2, 36, -1, 2, -72, -2, 6, -12]).unwrap();
    ensure(w == expected, "worked image differs")?;
    Ok(format!("symbolic identity in {:?}; ranks 6 and 3 at 20 points of F_10007; worked image matches", start.elapsed()))
}

fn criterion_4() -> Outcome {
    let rows = z5::coordinate_family(
        &[godeaux_lines::geometry::coord(2, 3), godeaux_lines::geometry::coord(1, 0)],
        &[godeaux_lines::geometry::coord(3, 1), godeaux_lines::geometry::coord(0, 2)],
        FieldSpec::Rational,
    );
    let res = z5::family_in_q(&rows);
    ensure(res.is_empty(), format!("nonzero conditions {res:?}"))?;
    let line = z5::example_line(FieldSpec::Rational);
    ensure(three_point_oracle(&line), "example line fails the 3-point oracle")?;
    let r = classify_line(&line).map_err(|e| e.to_string())?;
    ensure(r.torsion_points.len() == 2, format!("{} torsion points", r.torsion_points.len()))?;
    ensure(r.torsion_points[0].space != r.torsion_points[1].space, "same space twice")?;
    ensure(r.hyperelliptic_points().is_empty(), "hyperelliptic point found")?;
    // oracle: the endpoints lie on the spaces by their supports
    let (p, q) = line.endpoints();
    ensure(TorsionSpace::T01_23.contains(&p) && TorsionSpace::T02_13.contains(&q), "endpoint supports")?;
    Ok("symbolic identity in 4 parameters; 2 torsion points on T01|23 and T02|13; no hyperelliptic point".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let pairs = [
        (TorsionSpace::T01_23, TorsionSpace::T02_13),
        (TorsionSpace::T01_23, TorsionSpace::T03_12),
        (TorsionSpace::T02_13, TorsionSpace::T03_12),
    ];
    for (a, b) in pairs {
        let c = z5::z5_component_counts(a, b, FieldSpec::Rational).map_err(|e| e.to_string())?;
        ensure(
            c.count("P1xP1") == 6 && c.count("P0xP2") == 4 && c.count("P2xP0") == 4,
            format!("{a} x {b}: {:?}", c.counts),
        )?;
        ensure(c.components.iter().all(|x| x.in_q), "a component is not in Q")?;
        if (a, b) == pairs[0] {
            ensure(
                c.components.iter().filter(|x| x.printed_example && x.kind() == "P1xP1").count() == 1,
                "example family not among the P1xP1 components",
            )?;
        }
    }
    within(start, Duration::from_secs(1), "criterion 5")?;
    Ok("6/4/4 for all three pairs; example family present".into())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let res = z3::symbolic_residuals(FieldSpec::Rational);
    ensure(res.is_empty(), format!("nonzero conditions {res:?}"))?;
    within(start, Duration::from_secs(60), "symbolic check")?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut instances = vec![[1i64, 1, 1, 1, 1, 2, 1, 1].map(|x| FieldSpec::Rational.from_i64(x)).to_vec()];
    for _ in 0..4 {
        instances.push(z3::random_params(FieldSpec::Rational, &mut rng));
    }
    let f = FieldSpec::Prime(10007);
    for _ in 0..5 {
        instances.push(z3::random_params(f, &mut rng));
    }
    for params in &instances {
        let line = z3::z3_line(params).map_err(|e| e.to_string())?;
        ensure(three_point_oracle(&line), "instance fails the 3-point oracle")?;
        let r = classify_line(&line).map_err(|e| e.to_string())?;
        ensure(
            r.torsion_points.len() == 1 && r.torsion_points[0].space == TorsionSpace::T01_23,
            format!("torsion points {:?}", r.torsion_points),
        )?;
    }
    Ok(format!("symbolic identity in 8 parameters; {} instances meet only T01|23", instances.len()))
}

fn criterion_7() -> Outcome {
    let cert = para_v2::verify_para_v2(FieldSpec::Rational);
    for c in &cert.checks {
        ensure(c.passed, format!("{}: {}", c.name, c.detail))?;
    }
    // oracle: evaluate the determinants at random points of the parametrization
    let p = para_v2::parametrize(&para_v2::system_matrix(&para_v2::SYSTEM, FieldSpec::Rational))
        .map_err(|e| e.to_string())?
        .ok_or("no rank-2 kernel")?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let x: Vec<FieldValue> = (0..8).map(|_| FieldSpec::Rational.random(&mut rng, 20)).collect();
        let c: Vec<FieldValue> = p.parametrization.iter().map(|e| e.eval(&x).unwrap()).collect();
        let (w0, w1) = (&x[2], &x[3]);
        let d1 = &(&(&c[0] * &c[5]) * &(w0 - w1)) + &(&(&c[2] * &c[4]) * w1);
        let d2 = &(&(&c[1] * &c[3]) * w0) + &(&(&c[2] * &c[4]) * w1);
        ensure(d1.is_zero() && d2.is_zero(), "determinant nonzero at a sample")?;
    }
    ensure(!para_v2::verify_para_v2_perturbed(FieldSpec::Rational).passed(), "perturbed system passes")?;
    Ok("both determinants vanish identically and at 10 samples; perturbation detected".into())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let cfg = SamplerConfig::default();
    for seed in 0..50 {
        let s = sample_line(Strategy::Generic, FieldSpec::Prime(31), seed, &cfg).map_err(|e| e.to_string())?;
        ensure(three_point_oracle(&s.line), format!("seed {seed}: not in Q"))?;
        let r = &s.report;
        ensure(r.torsion_points.is_empty() && r.contained_in.is_empty(), format!("seed {seed}: torsion"))?;
        ensure(r.row_vanishing_points.is_empty(), format!("seed {seed}: row vanishing"))?;
        ensure(r.hyperelliptic.gcd.degree() == 0, format!("seed {seed}: gcd {}", r.hyperelliptic.gcd))?;
        ensure(r.kernel_degrees() == [1, 1, 1, 1], format!("seed {seed}: kernel {:?}", r.kernel_degrees()))?;
        ensure(
            constant_kernel_per_block(&s.line).iter().all(|&b| !b),
            format!("seed {seed}: constant kernel vector"),
        )?;
    }
    within(start, Duration::from_secs(300), "criterion 8")?;
    Ok(format!("50 generic lines over F_31 in {:?}", start.elapsed()))
}

fn criterion_9() -> Outcome {
    let cfg = SamplerConfig::default();
    for (strategy, expected) in [(Strategy::Hyp, 1), (Strategy::TwoHyp, 2)] {
        for seed in 0..10 {
            let s = sample_line(strategy, FieldSpec::Prime(31), 9000 + seed, &cfg).map_err(|e| e.to_string())?;
            ensure(three_point_oracle(&s.line), "not in Q")?;
            let roots = s.report.hyperelliptic_points();
            ensure(roots.len() == expected, format!("{strategy} seed {seed}: {} rank-3 roots", roots.len()))?;
            for r in roots {
                let x = s.line.point_at(&r.point.s, &r.point.t).unwrap();
                ensure(a_matrix_rank(x.coords()) == 3, "root does not have rank 3")?;
            }
            // oracle: rank along the whole line over F_31
            let n3 = (0..32)
                .filter(|&i| {
                    let f = s.line.field();
                    let (a, b) = if i == 31 { (f.zero(), f.one()) } else { (f.one(), f.from_i64(i)) };
                    a_matrix_rank(s.line.point_at(&a, &b).unwrap().coords()) <= 3
                })
                .count();
            ensure(n3 == expected, format!("{strategy} seed {seed}: {n3} rational points of rank 3"))?;
        }
    }
    Ok("10 lines with 1 rank-3 root, 10 lines with 2".into())
}

fn criterion_10() -> Outcome {
    let z5 = z5::example_line(FieldSpec::Prime(31));
    let r = classify_line(&z5).map_err(|e| e.to_string())?;
    ensure(r.kernel_degrees() == [0, 0, 0, 0], format!("example line {:?}", r.kernel_degrees()))?;
    ensure(constant_kernel_per_block(&z5).iter().all(|&b| b), "oracle: example block without constant kernel")?;
    let g = sample_line(Strategy::Generic, FieldSpec::Prime(31), 10, &SamplerConfig::default()).map_err(|e| e.to_string())?;
    ensure(g.report.kernel_degrees() == [1, 1, 1, 1], format!("generic {:?}", g.report.kernel_degrees()))?;
    let again = classify_line(&z5).map_err(|e| e.to_string())?;
    ensure(again.kernel_degrees() == r.kernel_degrees(), "not reproducible")?;
    Ok("example line (0,0,0,0), generic line (1,1,1,1)".into())
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("godeaux-lines").chain(args.iter().copied()), &mut out, &mut err);
    (code, out)
}

fn criterion_11() -> Outcome {
    let dir = std::env::temp_dir().join(format!("godeaux-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut stores = Vec::new();
    let mut reports = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("store{run}.json"));
        let _ = std::fs::remove_file(&path);
        let p = path.to_str().unwrap();
        for (strategy, seed) in [("generic", "42"), ("two-torsion", "7"), ("hyp", "3")] {
            let (code, _) = run_cli(&["sample", "--strategy", strategy, "--field", "p31", "--seed", seed, "--count", "3", "--out", p]);
            ensure(code == 0, format!("sample {strategy} exit {code}"))?;
        }
        stores.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        let (code, out) = run_cli(&["classify", "--in", p]);
        ensure(code == 0, "classify failed")?;
        reports.push(out);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(stores[0] == stores[1], "stores differ")?;
    ensure(reports[0] == reports[1], "reports differ")?;
    Ok(format!("two runs: {} store bytes and {} report bytes identical", stores[0].len(), reports[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("quadric/Pfaffian identities", criterion_1),
        ("torsion spaces", criterion_2),
        ("hyperelliptic parametrization", criterion_3),
        ("Z/5 family", criterion_4),
        ("component counts", criterion_5),
        ("Z/3 parametrization", criterion_6),
        ("determinantal parametrization", criterion_7),
        ("generic sampler", criterion_8),
        ("hyperelliptic lines", criterion_9),
        ("pencil degeneration", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name} ({ms} ms): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({ms} ms): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
