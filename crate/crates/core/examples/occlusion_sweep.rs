//! Classification accuracy as growing arcs of the contour are removed.
//!
//! cargo run --release --example occlusion_sweep [per_class] [seed]

use shapeseq::pipeline::PipelineConfig;
use shapeseq::retrieval::{load_shapes, occlusion_sweep, OcclusionOffset};
use shapeseq::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let per_class: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(4);
    let seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(3);

    let dir = tempfile::tempdir()?;
    let manifest = synth::write_benchmark_set(dir.path(), per_class, seed)?;
    let cfg = PipelineConfig::default();
    let (shapes, _) = load_shapes(&manifest, &cfg);
    let table = occlusion_sweep(
        &shapes,
        &cfg,
        &[0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
        &[4, 5, 6],
        OcclusionOffset::default(),
    )?;
    print!("{}", table.to_tsv());
    Ok(())
}
