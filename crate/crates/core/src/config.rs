//! Flat `key=value` configuration with command-line overrides.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::Polarity;
use crate::pipeline::PipelineConfig;
use crate::retrieval::DEFAULT_TOP_K;
use crate::seqalign::{AlignParams, Score, SubstitutionMatrix};
use crate::shape_context::AngleReference;

/// User-facing settings. Every field has a valid default.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub pipeline: PipelineConfig,
    pub top_k: usize,
    pub matrix_path: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            pipeline: PipelineConfig::default(),
            top_k: DEFAULT_TOP_K,
            matrix_path: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "n_points",
    "k",
    "anchor_tolerance",
    "radial_bins",
    "angular_bins",
    "r_inner",
    "r_outer_scale",
    "angle_reference",
    "skip_penalty",
    "gap",
    "matrix",
    "top_k",
    "threshold",
    "polarity",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::invalid(format!("bad value `{value}` for `{key}`")))
}

impl Config {
    /// Sets one key. Relative matrix paths resolve against `base_dir`.
    pub fn set(&mut self, key: &str, value: &str, base_dir: &Path) -> Result<()> {
        let p = &mut self.pipeline;
        match key {
            "n_points" => p.n_points = parse(key, value)?,
            "k" => p.quantization.k_angle_bins = parse(key, value)?,
            "anchor_tolerance" => p.quantization.anchor_tolerance = parse(key, value)?,
            "radial_bins" => p.bins.radial_bins = parse(key, value)?,
            "angular_bins" => p.bins.angular_bins = parse(key, value)?,
            "r_inner" => p.bins.r_inner = parse(key, value)?,
            "r_outer_scale" => p.bins.r_outer_scale = parse(key, value)?,
            "angle_reference" => {
                p.bins.angle_reference = match value {
                    "global" => AngleReference::GlobalX,
                    "tangent" => AngleReference::Tangent,
                    _ => return Err(Error::invalid(format!("bad angle_reference `{value}`"))),
                }
            }
            "skip_penalty" => p.skip_penalty = parse(key, value)?,
            "gap" => {
                let gap: Score = parse(key, value)?;
                p.align = AlignParams::new(gap, p.align.matrix.clone())?;
            }
            "matrix" => {
                let path = base_dir.join(value);
                let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                p.align.matrix = SubstitutionMatrix::from_text(&text)?;
                self.matrix_path = Some(path);
            }
            "top_k" => self.top_k = parse(key, value)?,
            "threshold" => p.threshold = parse(key, value)?,
            "polarity" => p.polarity = parse::<Polarity>(key, value)?,
            _ => return Err(Error::invalid(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines; `#` starts a comment line.
    pub fn apply_text(&mut self, text: &str, base_dir: &Path) -> Result<()> {
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(idx + 1, "expected key=value"))?;
            self.set(k.trim(), v.trim(), base_dir)
                .map_err(|e| Error::parse(idx + 1, e.to_string()))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Config::default();
        cfg.apply_text(&text, path.parent().unwrap_or(Path::new(".")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.pipeline;
        if p.n_points < 3 {
            return Err(Error::invalid("n_points must be at least 3"));
        }
        if self.top_k == 0 {
            return Err(Error::invalid("top_k must be at least 1"));
        }
        if !(p.skip_penalty >= 0.0 && p.skip_penalty.is_finite()) {
            return Err(Error::invalid("skip_penalty must be non-negative"));
        }
        p.quantization.validate()?;
        p.bins.validate()
    }
}
