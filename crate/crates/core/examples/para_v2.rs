//! Kernel of the 4x6 determinantal system and the induced parametrization.
//!
//!     cargo run --release --example para_v2

use godeaux_lines::families::para_v2::{
    parametrize, substituted_determinants, system_matrix, verify_para_v2_perturbed, SYSTEM,
};
use godeaux_lines::field::FieldSpec;

fn main() {
    let field = FieldSpec::Rational;
    let p = parametrize(&system_matrix(&SYSTEM, field))
        .expect("graded ring")
        .expect("two generators");
    for (i, g) in p.generators.iter().enumerate() {
        let v: Vec<String> = g.vector.iter().map(|e| e.to_string()).collect();
        println!("n{} of degree {:?}: ({})", i + 1, g.degree, v.join(", "));
    }
    for (i, c) in p.parametrization.iter().enumerate() {
        println!("c{i} = {c}");
    }
    for (i, d) in substituted_determinants(&p, field).expect("substitution").iter().enumerate() {
        println!("det{} after substitution: {d}", i + 1);
    }
    let perturbed = verify_para_v2_perturbed(field);
    println!("perturbed system passes: {}", perturbed.passed());
}
