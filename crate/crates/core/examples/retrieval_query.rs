//! Builds an index over a small synthetic set, saves and reloads it, then
//! ranks the set against one of its own images.

use shapeseq::pipeline::PipelineConfig;
use shapeseq::retrieval::{self, build_index, RetrievalIndex};
use shapeseq::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let manifest = synth::write_benchmark_set(dir.path(), 3, 11)?;
    let cfg = PipelineConfig::default();
    let report = build_index(&manifest, &cfg)?;

    let path = dir.path().join("shapes.idx");
    report.index.save(&path)?;
    let index = RetrievalIndex::load(&path)?;
    println!("indexed\t{}", index.records().len());

    let probe = &manifest.entries()[4];
    println!("query\t{}", probe.shape_id);
    let ranked = retrieval::query_image(&index, &probe.image_path, &cfg, 6)?;
    print!("{}", ranked.to_tsv(false));
    Ok(())
}
