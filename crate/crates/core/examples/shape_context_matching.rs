//! Computes log-polar shape contexts for an ellipse and a rotated, shifted
//! copy, then recovers the point correspondence.

use shapeseq::shape_context::{self, BinConfig, DEFAULT_SKIP_PENALTY};
use shapeseq::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = synth::sample_polygon(&synth::ellipse(3.0, 1.0, 64), 40)?;
    let b = a.rotated_start(7).map_points(|p| p.rotated(0.4))?;

    let cfg = BinConfig::default();
    let da = shape_context::descriptor(a.points(), &cfg)?;
    let db = shape_context::descriptor(b.points(), &cfg)?;
    println!("bins per point\t{}", cfg.bin_count());
    println!("histogram[0]\t{:?}", da.histograms()[0].normalized());

    let costs = shape_context::cost_matrix(&da, &db)?;
    let corr = shape_context::correspond(&costs, DEFAULT_SKIP_PENALTY)?;
    println!("offset\t{}", corr.offset);
    println!("matched\t{}/{}", corr.pairs.len(), a.len());
    println!("total_cost\t{:.4}", corr.total_cost);
    for (i, j) in corr.pairs.iter().take(5) {
        println!("{i} -> {j}\tcost {:.4}", costs.get(*i, *j));
    }
    Ok(())
}
