//! The three coordinate P^3's contained in Q.
//!
//!     cargo run --example torsion_spaces

use godeaux_lines::field::FieldSpec;
use godeaux_lines::geometry::COORD_NAMES;
use godeaux_lines::strata::TorsionSpace;
use godeaux_lines::verify::verify_torsion_spaces;

fn main() {
    let names = |v: &[usize]| v.iter().map(|&c| COORD_NAMES[c]).collect::<Vec<_>>().join(" ");
    for t in TorsionSpace::ALL {
        println!("{t}: survivors {} | killed {}", names(&t.survivors()), names(&t.killed()));
    }
    let cert = verify_torsion_spaces(FieldSpec::Rational);
    for c in &cert.checks {
        println!("  {:<32} {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
}
