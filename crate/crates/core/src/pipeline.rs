//! Per-shape pipeline: image to contour to symbol string, plus the optional
//! pairwise registration stage (shape contexts, correspondence, Procrustes)
//! run before encoding when two shapes are matched directly.

use std::path::Path;

use crate::error::Result;
use crate::geometry::{self, BinaryImage, Contour, Polarity};
use crate::procrustes::{self, Alignment};
use crate::seqalign::{align_score, AlignParams, AlignmentResult};
use crate::shape_context::{self, BinConfig, Correspondence, DEFAULT_SKIP_PENALTY};
use crate::symbolic::{self, Encoding, QuantizationConfig};

/// Everything that influences how a shape becomes a string and how two
/// strings are scored.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub n_points: usize,
    pub threshold: u8,
    pub polarity: Polarity,
    pub quantization: QuantizationConfig,
    pub bins: BinConfig,
    pub skip_penalty: f64,
    pub align: AlignParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            n_points: geometry::DEFAULT_POINT_COUNT,
            threshold: 128,
            polarity: Polarity::Auto,
            quantization: QuantizationConfig::default(),
            bins: BinConfig::default(),
            skip_penalty: DEFAULT_SKIP_PENALTY,
            align: AlignParams::default(),
        }
    }
}

/// Outer contour of an image, resampled to `n_points`.
pub fn shape_contour(img: &BinaryImage, n_points: usize) -> Result<Contour> {
    let traced = geometry::extract_contour(img)?;
    geometry::resample_contour(&traced, n_points)
}

pub fn load_contour(path: &Path, cfg: &PipelineConfig) -> Result<Contour> {
    let img = geometry::load_shape_image(path, cfg.threshold, cfg.polarity)?;
    shape_contour(&img, cfg.n_points)
}

pub fn encode_contour(c: &Contour, cfg: &PipelineConfig) -> Result<Encoding> {
    symbolic::encode_detailed(c, &cfg.quantization)
}

pub fn encode_path(path: &Path, cfg: &PipelineConfig) -> Result<Encoding> {
    encode_contour(&load_contour(path, cfg)?, cfg)
}

/// Output of the pairwise registration stage.
#[derive(Debug, Clone)]
pub struct Registration {
    pub correspondence: Correspondence,
    pub alignment: Alignment,
}

/// Registers `b` onto `a`: shape contexts, cyclic correspondence, then a
/// rigid Procrustes fit over the matched pairs.
pub fn register(a: &Contour, b: &Contour, cfg: &PipelineConfig) -> Result<Registration> {
    let da = shape_context::descriptor(a.points(), &cfg.bins)?;
    let db = shape_context::descriptor(b.points(), &cfg.bins)?;
    let costs = shape_context::cost_matrix(&da, &db)?;
    let correspondence = shape_context::correspond(&costs, cfg.skip_penalty)?;
    let alignment = procrustes::align(a, b, &correspondence)?;
    Ok(Registration {
        correspondence,
        alignment,
    })
}

#[derive(Debug, Clone)]
pub struct PairMatch {
    pub a: Encoding,
    pub b: Encoding,
    pub result: AlignmentResult,
    pub registration: Option<Registration>,
}

/// Encodes and aligns two contours. With `full`, `b` is first registered
/// onto `a` and the registered copy is encoded.
pub fn match_contours(
    a: &Contour,
    b: &Contour,
    cfg: &PipelineConfig,
    full: bool,
) -> Result<PairMatch> {
    let registration = if full {
        Some(register(a, b, cfg)?)
    } else {
        None
    };
    let b_used = registration.as_ref().map_or(b, |r| &r.alignment.aligned);
    let ea = encode_contour(a, cfg)?;
    let eb = encode_contour(b_used, cfg)?;
    let result = align_score(&ea.string, &eb.string, &cfg.align);
    Ok(PairMatch {
        a: ea,
        b: eb,
        result,
        registration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::shape_context::AngleReference;
    use crate::synth;

    fn skewed_pentagon(n: usize) -> Contour {
        let poly = [
            (0.0, 0.0),
            (30.0, 0.0),
            (34.0, 9.0),
            (12.0, 14.0),
            (4.0, 22.0),
        ]
        .map(|(x, y)| Point::new(x, y));
        synth::sample_polygon(&poly, n).unwrap()
    }

    #[test]
    fn full_pipeline_recovers_rotation() {
        let cfg = PipelineConfig {
            n_points: 40,
            bins: BinConfig {
                angle_reference: AngleReference::Tangent,
                ..BinConfig::default()
            },
            ..Default::default()
        };
        let a = skewed_pentagon(cfg.n_points);
        let b = a
            .map_points(|p| p.rotated(0.2) + Point::new(7.0, -2.0))
            .unwrap()
            .rotated_start(9);
        let m = match_contours(&a, &b, &cfg, true).unwrap();
        let reg = m.registration.unwrap();
        // b[j] = a[j + 9], so a[i] pairs with b[i + 31]
        assert!(reg
            .correspondence
            .pairs
            .iter()
            .all(|&(i, j)| j == (i + 31) % 40));
        assert!((reg.alignment.transform.rotation + 0.2).abs() < 1e-9);
        assert!(reg.alignment.rms_residual < 1e-9);
        assert_eq!(m.a.string, m.b.string);
        assert_eq!(m.result.normalized, 1.into());
    }

    #[test]
    fn global_bins_recover_rotation_roughly() {
        let cfg = PipelineConfig {
            n_points: 40,
            ..Default::default()
        };
        let a = skewed_pentagon(cfg.n_points);
        let b = a.map_points(|p| p.rotated(0.2)).unwrap();
        let reg = register(&a, &b, &cfg).unwrap();
        // bins are fixed to the image axes, so matches drift by about one
        // point along part of the contour; the estimate is biased but signed
        let rot = reg.alignment.transform.rotation;
        assert!(rot < 0.0 && rot > -0.3, "{rot}");
        assert!(reg.alignment.rms_residual < reg.alignment.rms_before);
    }

    #[test]
    fn quick_and_full_agree_on_rigid_copies() {
        let cfg = PipelineConfig {
            n_points: 30,
            ..Default::default()
        };
        let a = synth::sample_polygon(&synth::star(5, 20.0, 8.0), cfg.n_points).unwrap();
        let b = a.map_points(|p| p + Point::new(3.0, 3.0)).unwrap();
        let quick = match_contours(&a, &b, &cfg, false).unwrap();
        let full = match_contours(&a, &b, &cfg, true).unwrap();
        assert_eq!(quick.result.score, full.result.score);
    }
}
