//! Lines meeting the hyperelliptic locus once and twice, with the rank-3 roots of the
//! gcd of the quartic minors.
//!
//!     cargo run --release --example hyperelliptic_lines

use godeaux_lines::field::FieldSpec;
use godeaux_lines::sampler::{sample_line, SamplerConfig, Strategy};

fn main() {
    for strategy in [Strategy::Hyp, Strategy::TwoHyp] {
        let s = sample_line(strategy, FieldSpec::Prime(101), 5, &SamplerConfig::default()).expect("budget suffices");
        let h = &s.report.hyperelliptic;
        println!("{strategy}: minor gcd {} (degree {})", h.gcd, h.gcd.degree());
        for r in &h.roots {
            println!("  root {} with rank {}", r.point, r.rank);
        }
    }
}
