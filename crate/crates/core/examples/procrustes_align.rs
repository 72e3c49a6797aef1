//! Moves a pentagon by a known rigid motion and recovers it by Procrustes.

use shapeseq::procrustes;
use shapeseq::shape_context::Correspondence;
use shapeseq::{Contour, Point};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = Contour::new(
        [(0.0, 0.0), (4.0, 0.5), (5.0, 3.0), (2.0, 5.0), (-1.0, 2.5)]
            .into_iter()
            .map(|(x, y)| Point::new(x, y))
            .collect(),
    )?;
    let shift = Point::new(3.0, -2.0);
    let b = a.map_points(|p| p.rotated(-0.7) + shift)?;

    let fit = procrustes::align(&a, &b, &Correspondence::identity(a.len()))?;
    println!("transform\t{}", fit.transform);
    println!("rms_before\t{:.6}", fit.rms_before);
    println!("rms_after\t{:.3e}", fit.rms_residual);
    for (p, q) in a.points().iter().zip(fit.aligned.points()) {
        println!("({:.3}, {:.3})\t({:.3}, {:.3})", p.x, p.y, q.x, q.y);
    }
    Ok(())
}
