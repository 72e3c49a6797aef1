use std::fmt::Write as _;

use super::index::{RetrievalIndex, ShapeEntry};
use super::{format_percent, ScoreTable};
use crate::error::{Error, Result};
use crate::geometry::Contour;
use crate::pipeline::{self, PipelineConfig};
use crate::symbolic::{initial_state, QuantizationConfig};

/// Where the removed arc begins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OcclusionOffset {
    /// Half a contour away from the farthest-from-centroid point.
    #[default]
    OppositeStart,
    /// Fixed contour index.
    Index(usize),
}

impl OcclusionOffset {
    fn resolve(self, c: &Contour) -> usize {
        match self {
            OcclusionOffset::OppositeStart => {
                (initial_state(c).state.x_index + c.len() / 2) % c.len()
            }
            OcclusionOffset::Index(i) => i % c.len(),
        }
    }
}

/// Removes `round(fraction * N)` consecutive points starting at `offset`.
/// The remaining points keep their cyclic order, beginning right after the
/// removed arc, and close back on themselves.
pub fn occlude(c: &Contour, fraction: f64, offset: usize) -> Result<Contour> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::invalid(format!(
            "occlusion fraction {fraction} outside [0, 1)"
        )));
    }
    let n = c.len();
    let removed = (fraction * n as f64).round() as usize;
    if removed == 0 {
        return Ok(c.clone());
    }
    let kept = n.saturating_sub(removed);
    if kept < 3 {
        return Err(Error::TooSmall(format!(
            "occluding {removed} of {n} points leaves {kept}"
        )));
    }
    let start = (offset % n) + removed;
    Contour::new((0..kept).map(|i| c.at(start + i)).collect())
}

/// Recognition accuracy for each occlusion fraction (rows) and angle bin
/// count (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct OcclusionTable {
    pub fractions: Vec<f64>,
    pub k_values: Vec<usize>,
    /// `accuracy[f][k]` in percent.
    pub accuracy: Vec<Vec<f64>>,
}

impl OcclusionTable {
    pub fn get(&self, fraction_idx: usize, k_idx: usize) -> f64 {
        self.accuracy[fraction_idx][k_idx]
    }

    /// Header `fraction<TAB>k=..` followed by one row per fraction.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("fraction");
        for k in &self.k_values {
            let _ = write!(out, "\tk={k}");
        }
        out.push('\n');
        for (f, row) in self.fractions.iter().zip(&self.accuracy) {
            let _ = write!(out, "{f}");
            for v in row {
                let _ = write!(out, "\t{}", format_percent(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// For each `k`, encodes the intact shapes into an index; then for each
/// fraction, classifies an occluded copy of every shape against that index
/// by its best-scoring other record.
pub fn occlusion_sweep(
    shapes: &[ShapeEntry],
    cfg: &PipelineConfig,
    fractions: &[f64],
    k_values: &[usize],
    offset: OcclusionOffset,
) -> Result<OcclusionTable> {
    if shapes.len() < 2 {
        return Err(Error::invalid("need at least 2 shapes"));
    }
    let mut accuracy = vec![vec![0.0; k_values.len()]; fractions.len()];
    for (ki, &k) in k_values.iter().enumerate() {
        let cfg_k = PipelineConfig {
            quantization: QuantizationConfig {
                k_angle_bins: k,
                ..cfg.quantization
            },
            ..cfg.clone()
        };
        let (index, failures) = RetrievalIndex::from_shapes(shapes, &cfg_k)?;
        if let Some(f) = failures.first() {
            return Err(Error::invalid(format!(
                "cannot encode {}: {}",
                f.shape_id, f.reason
            )));
        }
        for (fi, &fraction) in fractions.iter().enumerate() {
            // index records are id-sorted; queries must follow the same order
            let queries = index
                .records()
                .iter()
                .map(|rec| {
                    let shape = shapes
                        .iter()
                        .find(|s| s.shape_id == rec.shape_id)
                        .expect("index built from these shapes");
                    let c = &shape.contour;
                    let occluded = occlude(c, fraction, offset.resolve(c))?;
                    Ok(pipeline::encode_contour(&occluded, &cfg_k)?.string)
                })
                .collect::<Result<Vec<_>>>()?;
            accuracy[fi][ki] = ScoreTable::from_queries(&index, &queries)?.recognition_score()?;
        }
    }
    Ok(OcclusionTable {
        fractions: fractions.to_vec(),
        k_values: k_values.to_vec(),
        accuracy,
    })
}
