//! Lines joining two torsion spaces: the example family, its classification and the
//! component counts for each pair of spaces.
//!
//!     cargo run --example z5_family

use godeaux_lines::families::z5::{example_line, z5_component_counts};
use godeaux_lines::field::FieldSpec;
use godeaux_lines::strata::{classify_line, TorsionSpace};

fn main() {
    let field = FieldSpec::Rational;
    let line = example_line(field);
    let report = classify_line(&line).expect("line lies in Q");
    println!("example line meets:");
    for h in &report.torsion_points {
        println!("  {} at {}", h.space, h.point);
    }
    println!("hyperelliptic points: {}", report.hyperelliptic_points().len());
    println!("pencil kernel degrees: {:?}", report.kernel_degrees());

    for (a, b) in [
        (TorsionSpace::T01_23, TorsionSpace::T02_13),
        (TorsionSpace::T01_23, TorsionSpace::T03_12),
        (TorsionSpace::T02_13, TorsionSpace::T03_12),
    ] {
        let c = z5_component_counts(a, b, field).expect("distinct spaces");
        println!("{a} x {b}: {:?}", c.counts);
        for comp in c.components.iter().filter(|x| x.printed_example) {
            println!("  example family: {}", comp.to_json());
        }
    }
}
