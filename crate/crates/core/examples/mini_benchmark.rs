//! Generates four synthetic shape classes, indexes them and prints the
//! retrieval and recognition scores.
//!
//! cargo run --release --example mini_benchmark [per_class] [seed]

use shapeseq::pipeline::PipelineConfig;
use shapeseq::retrieval::{build_index, format_percent, ScoreTable};
use shapeseq::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let per_class: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(5);
    let seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(7);

    let dir = tempfile::tempdir()?;
    let manifest = synth::write_benchmark_set(dir.path(), per_class, seed)?;
    let report = build_index(&manifest, &PipelineConfig::default())?;
    for rec in report.index.records() {
        println!("{}\t{}\t{}", rec.shape_id, rec.class_label, rec.string);
    }

    let table = ScoreTable::new(&report.index)?;
    let k = per_class - 1;
    println!(
        "retrieval_top{k}\t{}",
        format_percent(table.retrieval_score(k)?)
    );
    println!(
        "recognition\t{}",
        format_percent(table.recognition_score()?)
    );
    Ok(())
}
