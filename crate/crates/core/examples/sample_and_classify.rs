//! Seeded sampling for every strategy, a line store round trip and reclassification.
//!
//!     cargo run --release --example sample_and_classify

use godeaux_lines::field::FieldSpec;
use godeaux_lines::sampler::{sample_line, SamplerConfig, Strategy};
use godeaux_lines::store::{classify_record, LineRecord, LineStore};

fn main() {
    let field = FieldSpec::Prime(31);
    let config = SamplerConfig::default();
    let mut store = LineStore::default();
    for name in ["generic", "torsion:01|23", "two-torsion:01|23,02|13", "hyp", "two-hyp"] {
        let strategy: Strategy = name.parse().expect("known strategy");
        let s = sample_line(strategy, field, 42, &config).expect("budget suffices");
        println!(
            "{name:<24} trials {:>6}  torsion {}  hyperelliptic {}  kernel {:?}",
            s.trials,
            s.report.torsion_points.len(),
            s.report.hyperelliptic_points().len(),
            s.report.kernel_degrees()
        );
        store.push(&LineRecord::from_sample(&s));
    }
    let text = store.to_text();
    let back = LineStore::from_text(&text).expect("valid store");
    println!("store round trip byte-identical: {}", back.to_text() == text);
    for (i, r) in back.records.iter().enumerate() {
        let rep = classify_record(r).expect("line in Q");
        println!("record {i}: {} torsion, {} hyperelliptic", rep.torsion_points.len(), rep.hyperelliptic_points().len());
    }
}
