//! Signed coordinate permutations preserving the quadrics, and their action on the
//! torsion spaces.
//!
//!     cargo run --release --example symmetries

use godeaux_lines::strata::quadric_symmetries;

fn main() {
    let g = quadric_symmetries();
    println!("order {}", g.order());
    println!("generators:");
    for e in &g.generators {
        println!("  {}", e.describe());
    }
    for o in &g.torsion_orbits {
        let names: Vec<String> = o.iter().map(|t| t.to_string()).collect();
        println!("torsion orbit: {}", names.join(" "));
    }
}
