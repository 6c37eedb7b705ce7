//! Lines through `T01|23` from the eight-parameter family, and the kernel convention
//! under which all three printed kernel rows check out.
//!
//!     cargo run --release --example z3_family

use godeaux_lines::families::z3::{find_convention, symbolic_residuals, verify_z3_kernel, z3_line};
use godeaux_lines::field::FieldSpec;
use godeaux_lines::strata::classify_line;

fn main() {
    let field = FieldSpec::Rational;
    println!("nonzero line conditions in 8 parameters: {}", symbolic_residuals(field).len());

    let params: Vec<_> = [1, 1, 1, 1, 1, 2, 1, 1].iter().map(|&x| field.from_i64(x)).collect();
    let line = z3_line(&params).expect("independent rows");
    let report = classify_line(&line).expect("line lies in Q");
    for h in &report.torsion_points {
        println!("u=(1,1,1,1) w=(1,2) z=(1,1) meets {} at {}", h.space, h.point);
    }
    println!("pencil kernel degrees: {:?}", report.kernel_degrees());

    let degenerate: Vec<_> = [1, 0, 0, 0, 0, 1, 1, 0].iter().map(|&x| field.from_i64(x)).collect();
    println!("u=(1,0,0,0) w=(0,1) z=(1,0): {:?}", z3_line(&degenerate).err());

    println!("kernel convention: {:?}", find_convention(field));
    let cert = verify_z3_kernel(field);
    for c in &cert.checks {
        println!("  {:<28} {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
}
