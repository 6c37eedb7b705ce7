//! The parametrization of the hyperelliptic locus: the worked image point and the full
//! verification over the rationals and over F_10007.
//!
//!     cargo run --release --example hyperelliptic_param

use godeaux_lines::families::hyp::{hyp_point, verify_hyp_param, worked_example_params};
use godeaux_lines::field::FieldSpec;
use godeaux_lines::strata::rank_a;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let p = hyp_point(&worked_example_params(FieldSpec::Rational)).expect("outside base locus");
    let coords: Vec<String> = p.coords().iter().map(|x| x.to_string()).collect();
    println!("image of ((1,1),(1,2),(1,1),(1,1),(1,1)) = ({})", coords.join(", "));
    println!("rank of the a-matrix there: {}", rank_a(&p));

    for field in [FieldSpec::Rational, FieldSpec::Prime(10007)] {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cert = verify_hyp_param(field, 20, &mut rng);
        println!("verification over {field}: {}", if cert.passed() { "pass" } else { "FAIL" });
        for c in &cert.checks {
            println!("  {:<32} {}", c.name, if c.passed { "ok" } else { "FAILED" });
        }
    }
}
