//! The four quadrics as Pfaffians of 4x4 skew matrices, and `pf^2 = det` on random
//! skew matrices.
//!
//!     cargo run --example quadrics

use godeaux_lines::field::FieldSpec;
use godeaux_lines::geometry::{canonical_pfaffian_matrix, pfaffian4, quadrics, skew4, QUADRIC_TEXT};
use godeaux_lines::linalg::Matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let field = FieldSpec::Rational;
    let qs = quadrics(field);
    for k in 0..4 {
        let m = canonical_pfaffian_matrix(k, field);
        let pf = pfaffian4(&m).expect("skew");
        println!("q{k} = {}", qs[k]);
        println!("    printed:  {}", QUADRIC_TEXT[k]);
        println!("    Pfaffian: {pf}  (matches: {})", pf == qs[k]);
    }

    let f = FieldSpec::Prime(101);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ok = 0;
    for _ in 0..100 {
        let upper = [(); 6].map(|_| f.random(&mut rng, 9));
        let m = skew4(upper, f.zero());
        let pf = pfaffian4(&m).expect("skew");
        let det = Matrix::from_rows(f, m.iter().map(|r| r.to_vec()).collect()).determinant();
        ok += usize::from(&pf * &pf == det);
    }
    println!("pf^2 = det on {ok}/100 random skew matrices over {f}");
}
