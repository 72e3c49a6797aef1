//! Rasterizes a star, traces its contour and prints the symbol string.
//! Pass an image path to encode that file instead.
//!
//! cargo run --example encode_shape [image]

use shapeseq::pipeline::{self, PipelineConfig};
use shapeseq::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = PipelineConfig::default();
    let contour = match std::env::args().nth(1) {
        Some(path) => pipeline::load_contour(path.as_ref(), &cfg)?,
        None => {
            let star: Vec<_> = synth::star(5, 50.0, 22.0)
                .into_iter()
                .map(|p| p + shapeseq::Point::new(64.0, 64.0))
                .collect();
            let img = synth::rasterize(&star, 128, 128)?;
            pipeline::shape_contour(&img, cfg.n_points)?
        }
    };

    let enc = pipeline::encode_contour(&contour, &cfg)?;
    println!("points\t{}", contour.len());
    println!("perimeter\t{:.3}", contour.perimeter());
    println!("d_min\t{:.3}", enc.d_min);
    println!("d_max\t{:.3}", enc.d_max);
    println!("anchors\t{} {}", enc.x_index, enc.y_index);
    println!("degenerate\t{}", enc.degenerate);
    println!("string\t{}", enc.string);
    Ok(())
}
