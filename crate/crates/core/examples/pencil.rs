//! The l1 block restricted to a line: kernel degrees for a generic line and for the
//! example line joining two torsion spaces.
//!
//!     cargo run --release --example pencil

use godeaux_lines::families::z5::example_line;
use godeaux_lines::field::FieldSpec;
use godeaux_lines::pencil::{degeneration_profile, graded_kernel_basis, restrict_l1};
use godeaux_lines::sampler::{sample_line, SamplerConfig, Strategy};

fn main() {
    let generic = sample_line(Strategy::Generic, FieldSpec::Prime(31), 3, &SamplerConfig::default())
        .expect("budget suffices")
        .line;
    let special = example_line(FieldSpec::Prime(31));
    for (name, line) in [("generic", &generic), ("two-torsion example", &special)] {
        let profile = degeneration_profile(line);
        println!("{name}: degree sequence {:?}", profile.degree_sequence());
        for b in &profile.blocks {
            let entries: Vec<String> = b.entries.iter().map(|e| e.to_string()).collect();
            let drops = match &b.rank_drop_points {
                None => "everywhere".to_string(),
                Some(v) => v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "),
            };
            println!("  row {}: entries [{}], rank drops at [{drops}]", b.row, entries.join(", "));
        }
        let gens = graded_kernel_basis(&restrict_l1(line), 3);
        println!("  12x12 block matrix: {} generators", gens.len());
    }
}
